#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

// ---------------------------------------------------------------------------
// Structure group U(n).
//
// The Lie algebra is the space of anti-Hermitian n x n matrices with the
// invariant inner product <X, Y> = Re tr(X Y^dagger) = -tr(XY); the center
// consists of imaginary multiples of the identity. Real center parameters
// (stability parameters and degree test elements) are stored through their
// Hermitian coefficient: parameter t denotes the Hermitian matrix t * I,
// pairing with curvature as <iF, t I>.
// ---------------------------------------------------------------------------

struct StructureGroup {
  int n = 1;
  /// Orthonormal basis of the algebra under <X,Y> = Re tr(X Y^dagger):
  /// i E_kk, (E_kl - E_lk)/sqrt2, i(E_kl + E_lk)/sqrt2 for k < l.
  std::vector<std::vector<Complex>> basis;

  explicit StructureGroup(int n_ = 1) : n(n_) {
    require(n >= 1, "structure group: n must be >= 1");
    const Real r = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < n; ++k) {
      std::vector<Complex> b(n * n, Complex(0.0, 0.0));
      b[k * n + k] = Complex(0.0, 1.0);
      basis.push_back(std::move(b));
    }
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        std::vector<Complex> b1(n * n, Complex(0.0, 0.0));
        b1[k * n + l] = Complex(r, 0.0);
        b1[l * n + k] = Complex(-r, 0.0);
        basis.push_back(std::move(b1));
        std::vector<Complex> b2(n * n, Complex(0.0, 0.0));
        b2[k * n + l] = Complex(0.0, r);
        b2[l * n + k] = Complex(0.0, r);
        basis.push_back(std::move(b2));
      }
  }

  int algebra_dim() const { return n * n; }

  /// exp(X) for anti-Hermitian X, via the spectral decomposition of -iX.
  void exp(const Complex* x, Complex* out) const {
    if (n == 1) {
      out[0] = std::exp(x[0]);
      return;
    }
    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h(i, j) = Complex(0.0, -1.0) * x[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(n);
    for (int i = 0; i < n; ++i)
      phases(i) = std::exp(Complex(0.0, es.eigenvalues()(i)));
    Eigen::MatrixXcd u =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = u(i, j);
  }

  /// Principal logarithm of a unitary, returned anti-Hermitian. Uses the
  /// Schur form (diagonal for normal matrices up to rounding).
  void log(const Complex* u, Complex* out) const {
    if (n == 1) {
      out[0] = Complex(0.0, std::atan2(u[0].imag(), u[0].real()));
      return;
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u[i * n + j];
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
    Eigen::VectorXcd logs(n);
    for (int i = 0; i < n; ++i) {
      const Complex d = schur.matrixT()(i, i);
      logs(i) = Complex(0.0, std::atan2(d.imag(), d.real()));
    }
    Eigen::MatrixXcd l =
        schur.matrixU() * logs.asDiagonal() * schur.matrixU().adjoint();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i * n + j] = l(i, j);
    mat_project_antihermitian(n, out);
  }

  /// Nearest unitary (polar factor); used to control rounding drift when
  /// accumulating products of group elements.
  void reunitarize(Complex* u) const {
    if (n == 1) {
      const Real a = std::abs(u[0]);
      if (a > 0.0) u[0] /= a;
      return;
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u[i * n + j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd p = svd.matrixU() * svd.matrixV().adjoint();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u[i * n + j] = p(i, j);
  }
};

// ---------------------------------------------------------------------------
// Unitary representations.
//
// Supported kinds: a U(1) character of integer charge q; the fundamental of
// U(n); the k-th symmetric power of the fundamental. The moment map is the
// Hermitian matrix mu(phi)_ij = <phi, rho_*(E_ji) phi>_V (inner product
// conjugate-linear in the first slot); it satisfies mu(r phi) = r^2 mu(phi)
// and Ad-equivariance, and for the fundamental equals phi phi^dagger.
// The center acts with integer weight w: rho_*(ic I) = icw on V.
// ---------------------------------------------------------------------------

enum class RepKind { kU1Charge, kFundamental, kSymPower };

namespace detail {

/// Multi-indices alpha with |alpha| = k over n letters, lexicographic.
inline std::vector<std::vector<int>> sym_multi_indices(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int c = left; c >= 0; --c) {
      cur[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, k);
  return out;
}

inline Real log_factorial(int m) {
  Real s = 0.0;
  for (int i = 2; i <= m; ++i) s += std::log(static_cast<Real>(i));
  return s;
}

}  // namespace detail

class Representation {
 public:
  Representation(StructureGroup group, RepKind kind, int charge_or_power)
      : group_(std::move(group)), kind_(kind) {
    const int n = group_.n;
    switch (kind_) {
      case RepKind::kU1Charge:
        require(n == 1, "charge representation requires U(1)");
        charge_ = charge_or_power;
        dim_ = 1;
        center_weight_ = charge_;
        break;
      case RepKind::kFundamental:
        dim_ = n;
        center_weight_ = 1;
        break;
      case RepKind::kSymPower: {
        power_ = charge_or_power;
        require(power_ >= 1, "symmetric power must be >= 1");
        indices_ = detail::sym_multi_indices(n, power_);
        dim_ = static_cast<int>(indices_.size());
        center_weight_ = power_;
        // Normalization d_alpha = sqrt(k! / prod alpha_i!).
        norms_.resize(dim_);
        for (int a = 0; a < dim_; ++a) {
          Real lf = detail::log_factorial(power_);
          for (int i = 0; i < n; ++i)
            lf -= detail::log_factorial(indices_[a][i]);
          norms_[a] = std::exp(0.5 * lf);
        }
        for (int b = 0; b < dim_; ++b) index_lookup_[indices_[b]] = b;
        break;
      }
    }
    // Algebra action on the orthonormal basis, for the generic paths.
    rho_basis_.resize(group_.algebra_dim());
    for (int b = 0; b < group_.algebra_dim(); ++b) {
      rho_basis_[b].assign(static_cast<std::size_t>(dim_) * dim_,
                           Complex(0.0, 0.0));
      build_rho_star(group_.basis[b].data(), rho_basis_[b].data());
    }
  }

  const StructureGroup& group() const { return group_; }
  RepKind kind() const { return kind_; }
  int group_dim() const { return group_.n; }
  int dim() const { return dim_; }
  int center_weight() const { return center_weight_; }
  int charge() const { return charge_; }
  const std::vector<Complex>& rho_basis(int b) const { return rho_basis_[b]; }

  /// y += rho_*(X) v for anti-Hermitian X (n x n).
  void apply_algebra(const Complex* x, const Complex* v, Complex* y) const {
    apply_linear(x, v, y);
  }

  /// y += rho_*(M) v for arbitrary complex M, using the complex-linear
  /// extension of rho_*.
  void apply_complexified(const Complex* m, const Complex* v,
                          Complex* y) const {
    apply_linear(m, v, y);
  }

  /// Hermitian moment map mu(phi), n x n output.
  void moment_map(const Complex* phi, Complex* mu) const {
    const int n = group_.n;
    switch (kind_) {
      case RepKind::kU1Charge: {
        mu[0] = Complex(static_cast<Real>(charge_) * std::norm(phi[0]), 0.0);
        return;
      }
      case RepKind::kFundamental: {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            mu[i * n + j] = phi[i] * std::conj(phi[j]);
        return;
      }
      case RepKind::kSymPower: {
        // mu_ij = <phi, rho_*(E_ji) phi>; rho_*(E_ji) e^a = sum over
        // occurrences of letter i replaced by letter j.
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Complex s(0.0, 0.0);
            for (int a = 0; a < dim_; ++a) {
              if (phi[a] == Complex(0.0, 0.0)) continue;
              // E_ji e_i = e_j: acts on monomial alpha as alpha_i copies
              // of (alpha - delta_i + delta_j).
              const auto& alpha = indices_[a];
              if (alpha[i] == 0) continue;
              std::vector<int> beta = alpha;
              beta[i] -= 1;
              beta[j] += 1;
              const int bidx = index_lookup_.at(beta);
              const Real coef =
                  static_cast<Real>(alpha[i]) * norms_[a] / norms_[bidx];
              s += std::conj(phi[bidx]) * coef * phi[a];
            }
            mu[i * n + j] = s;
          }
        return;
      }
    }
  }

  /// nu(w, v): the algebra element with <nu, X> = Re <w, rho_*(X) v>_V for
  /// every anti-Hermitian X. This is the adjoint of the infinitesimal
  /// action, used to route section cotangents into connection gradients.
  void moment_pairing(const Complex* w, const Complex* v, Complex* nu) const {
    const int n = group_.n;
    if (kind_ == RepKind::kU1Charge) {
      Complex iwv(0.0, 0.0);
      iwv = std::conj(w[0]) * v[0];
      nu[0] = Complex(0.0, -static_cast<Real>(charge_) * iwv.imag());
      return;
    }
    mat_zero(n, nu);
    std::vector<Complex> tmp(dim_);
    for (int b = 0; b < group_.algebra_dim(); ++b) {
      std::fill(tmp.begin(), tmp.end(), Complex(0.0, 0.0));
      const Complex* rb = rho_basis_[b].data();
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) tmp[i] += rb[i * dim_ + j] * v[j];
      // coeff = Re <w, rho_*(eta_b) v>
      Real coeff = 0.0;
      for (int i = 0; i < dim_; ++i)
        coeff += (std::conj(w[i]) * tmp[i]).real();
      for (int e = 0; e < n * n; ++e) nu[e] += coeff * group_.basis[b][e];
    }
  }

  /// Group action rho(s) as a dim x dim matrix.
  void rho_of(const Complex* s, Complex* out) const {
    const int n = group_.n;
    switch (kind_) {
      case RepKind::kU1Charge: {
        const Real theta = std::atan2(s[0].imag(), s[0].real());
        out[0] = std::exp(Complex(0.0, charge_ * theta));
        return;
      }
      case RepKind::kFundamental:
        for (int e = 0; e < n * n; ++e) out[e] = s[e];
        return;
      case RepKind::kSymPower: {
        // Column a: expansion of prod_i (s e_i)^{alpha_i} over monomials.
        for (int e = 0; e < dim_ * dim_; ++e) out[e] = Complex(0.0, 0.0);
        for (int a = 0; a < dim_; ++a) {
          std::map<std::vector<int>, Complex> poly;
          poly[std::vector<int>(n, 0)] = Complex(1.0, 0.0);
          const auto& alpha = indices_[a];
          for (int i = 0; i < n; ++i)
            for (int rep = 0; rep < alpha[i]; ++rep) {
              std::map<std::vector<int>, Complex> next;
              for (const auto& [mono, coef] : poly)
                for (int j = 0; j < n; ++j) {
                  const Complex sji = s[j * n + i];
                  if (sji == Complex(0.0, 0.0)) continue;
                  std::vector<int> m2 = mono;
                  m2[j] += 1;
                  next[m2] += coef * sji;
                }
              poly = std::move(next);
            }
          for (const auto& [mono, coef] : poly) {
            const int b = index_lookup_.at(mono);
            out[b * dim_ + a] = coef * norms_[a] / norms_[b];
          }
        }
        return;
      }
    }
  }

 private:
  /// Shared complex-linear rho_* application: works for anti-Hermitian and
  /// general M because each kind's formula is complex-linear in M.
  void apply_linear(const Complex* m, const Complex* v, Complex* y) const {
    const int n = group_.n;
    switch (kind_) {
      case RepKind::kU1Charge:
        y[0] += static_cast<Real>(charge_) * m[0] * v[0];
        return;
      case RepKind::kFundamental:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) y[i] += m[i * n + j] * v[j];
        return;
      case RepKind::kSymPower:
        for (int a = 0; a < dim_; ++a) {
          if (v[a] == Complex(0.0, 0.0)) continue;
          const auto& alpha = indices_[a];
          for (int i = 0; i < n; ++i) {
            if (alpha[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
              const Complex mji = m[j * n + i];
              if (mji == Complex(0.0, 0.0)) continue;
              std::vector<int> beta = alpha;
              beta[i] -= 1;
              beta[j] += 1;
              const int b = index_lookup_.at(beta);
              y[b] += static_cast<Real>(alpha[i]) * norms_[a] / norms_[b] *
                      mji * v[a];
            }
          }
        }
        return;
    }
  }

  /// Dense rho_*(X) into a dim x dim buffer (used to precompute the basis
  /// action and in tests).
  void build_rho_star(const Complex* x, Complex* out) const {
    std::vector<Complex> e(dim_, Complex(0.0, 0.0));
    std::vector<Complex> y(dim_);
    for (int col = 0; col < dim_; ++col) {
      e[col] = Complex(1.0, 0.0);
      std::fill(y.begin(), y.end(), Complex(0.0, 0.0));
      apply_linear(x, e.data(), y.data());
      for (int row = 0; row < dim_; ++row) out[row * dim_ + col] = y[row];
      e[col] = Complex(0.0, 0.0);
    }
  }

  StructureGroup group_;
  RepKind kind_;
  int charge_ = 0;
  int power_ = 0;
  int dim_ = 0;
  int center_weight_ = 0;
  std::vector<std::vector<int>> indices_;
  std::vector<Real> norms_;
  std::map<std::vector<int>, int> index_lookup_;
  std::vector<std::vector<Complex>> rho_basis_;
};

/// Parses "u1:<q>", "un:<n>:fund", or "un:<n>:sym:<k>".
inline Representation parse_representation(const std::string& desc) {
  const std::string bad = "unknown representation descriptor: " + desc;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= desc.size()) {
    const std::size_t next = desc.find(':', pos);
    if (next == std::string::npos) {
      parts.push_back(desc.substr(pos));
      break;
    }
    parts.push_back(desc.substr(pos, next - pos));
    pos = next + 1;
  }
  auto to_int = [&](const std::string& s) -> int {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(bad);
    }
    if (used != s.size()) throw std::invalid_argument(bad);
    return v;
  };
  if (parts.size() == 2 && parts[0] == "u1")
    return Representation(StructureGroup(1), RepKind::kU1Charge,
                          to_int(parts[1]));
  if (parts.size() >= 3 && parts[0] == "un") {
    const int n = to_int(parts[1]);
    require(n >= 1, "representation: group rank must be >= 1");
    if (parts[2] == "fund" && parts.size() == 3)
      return Representation(StructureGroup(n), RepKind::kFundamental, 0);
    if (parts[2] == "sym" && parts.size() == 4)
      return Representation(StructureGroup(n), RepKind::kSymPower,
                            to_int(parts[3]));
  }
  throw std::invalid_argument(bad);
}

// ---------------------------------------------------------------------------
// Admissibility: the trace-free part of the moment map must vanish only at
// phi = 0 (checked by minimizing |mu_ss|^2 over the unit sphere from many
// starts), and the center must act with a nonzero weight. For U(1) there is
// no semisimple part and only the weight condition applies.
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
  bool admissible = false;
  int center_weight = 0;
  /// min over the unit sphere of |mu_ss(phi)|; zero (to rounding) when a
  /// semisimple zero exists. Not meaningful for U(1).
  Real min_semisimple_moment = 0.0;
};

inline AdmissibilityReport admissibility_check(const Representation& rep,
                                               std::uint64_t seed = 1,
                                               int starts = 32) {
  AdmissibilityReport out;
  out.center_weight = rep.center_weight();
  const int n = rep.group_dim();
  if (n == 1) {
    out.admissible = (out.center_weight != 0);
    out.min_semisimple_moment = 0.0;
    return out;
  }
  const int dim = rep.dim();
  std::vector<Complex> mu(n * n), mu_ss(n * n), grad(dim), phi(dim), best(dim);
  auto eval = [&](const std::vector<Complex>& p) {
    rep.moment_map(p.data(), mu.data());
    Complex tr = mat_trace(n, mu.data());
    for (int e = 0; e < n * n; ++e) mu_ss[e] = mu[e];
    for (int i = 0; i < n; ++i)
      mu_ss[i * n + i] -= tr / static_cast<Real>(n);
    Real f = 0.0;
    for (int e = 0; e < n * n; ++e) f += std::norm(mu_ss[e]);
    return f;
  };
  Real fmin = -1.0;
  for (int s = 0; s < starts; ++s) {
    RandomStream rs(seed, {0xadau, static_cast<std::uint64_t>(s)});
    Real nrm = 0.0;
    for (int i = 0; i < dim; ++i) {
      phi[i] = rs.gaussian_complex();
      nrm += std::norm(phi[i]);
    }
    nrm = std::sqrt(nrm);
    for (int i = 0; i < dim; ++i) phi[i] /= nrm;
    Real f = eval(phi);
    Real step = 0.25;
    for (int it = 0; it < 400; ++it) {
      // grad = 4 rho_*(mu_ss) phi, projected to the sphere tangent.
      std::fill(grad.begin(), grad.end(), Complex(0.0, 0.0));
      rep.apply_complexified(mu_ss.data(), phi.data(), grad.data());
      for (int i = 0; i < dim; ++i) grad[i] *= 4.0;
      Complex overlap(0.0, 0.0);
      for (int i = 0; i < dim; ++i) overlap += std::conj(phi[i]) * grad[i];
      for (int i = 0; i < dim; ++i) grad[i] -= overlap.real() * phi[i];
      Real g2 = 0.0;
      for (int i = 0; i < dim; ++i) g2 += std::norm(grad[i]);
      if (g2 < 1e-30) break;
      std::vector<Complex> trial(dim);
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        Real tn = 0.0;
        for (int i = 0; i < dim; ++i) {
          trial[i] = phi[i] - step * grad[i];
          tn += std::norm(trial[i]);
        }
        tn = std::sqrt(tn);
        for (int i = 0; i < dim; ++i) trial[i] /= tn;
        const Real ft = eval(trial);
        if (ft < f) {
          phi = trial;
          f = ft;
          step *= 1.5;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    f = eval(phi);
    if (fmin < 0.0 || f < fmin) fmin = f;
  }
  out.min_semisimple_moment = std::sqrt(std::max(0.0, fmin));
  out.admissible =
      (out.center_weight != 0) && (out.min_semisimple_moment > 1e-6);
  return out;
}

// ---------------------------------------------------------------------------
// A-priori bound constant.
//
// Scans unit directions phi0 and radii r for the largest value of
// r^2 |phi0|^2 / |mu(r phi0) - tau| and reports 1.25x that maximum. When the
// ratio exceeds the divergence cap the scan aborts: the bound cannot hold
// for this (rep, tau) (e.g. U(1) with the stability parameter on the wrong
// side, where |phi|^2 = t/q makes the denominator vanish).
// ---------------------------------------------------------------------------

struct BoundConstantEstimate {
  Real c_hat = 0.0;
  Real max_ratio = 0.0;
  int samples = 0;
};

inline BoundConstantEstimate estimate_bound_constant(
    const Representation& rep, Real tau, std::uint64_t seed = 1,
    int samples = 10000, Real rmax = 16.0, int radial_points = 96,
    Real divergence_cap = 1e8) {
  require(samples >= 1, "estimate_bound_constant: need samples >= 1");
  const int n = rep.group_dim();
  const int dim = rep.dim();
  constexpr int kShards = 64;
  std::array<Real, kShards> shard_max{};
  parallel_shards(samples, kShards, [&](int shard, std::int64_t lo,
                                        std::int64_t hi) {
    std::vector<Complex> phi(dim), mu(n * n);
    Real local = 0.0;
    for (std::int64_t j = lo; j < hi; ++j) {
      RandomStream rs(seed, {0xb0du, static_cast<std::uint64_t>(j)});
      Real nrm = 0.0;
      for (int i = 0; i < dim; ++i) {
        phi[i] = rs.gaussian_complex();
        nrm += std::norm(phi[i]);
      }
      nrm = std::sqrt(nrm);
      for (int i = 0; i < dim; ++i) phi[i] /= nrm;
      rep.moment_map(phi.data(), mu.data());
      auto ratio_at = [&](Real r2) {
        Real dev2 = 0.0;
        for (int e = 0; e < n * n; ++e) {
          Complex d = r2 * mu[e];
          if (e % (n + 1) == 0) d -= tau;
          dev2 += std::norm(d);
        }
        const Real ratio = r2 / std::sqrt(dev2);
        ensure(std::isfinite(ratio) && ratio <= divergence_cap,
               "estimate_bound_constant: ratio diverges; no a-priori bound "
               "for this stability parameter");
        return ratio;
      };
      for (int p = 0; p < radial_points; ++p) {
        // log-spaced radii in (rmax/2^12, rmax]
        const Real r =
            rmax * std::pow(2.0, -12.0 * (1.0 - Real(p + 1) / radial_points));
        local = std::max(local, ratio_at(r * r));
      }
      // |s mu - tau|^2 is quadratic in s = r^2; also probe its interior
      // minimizer so a divergence between grid points cannot be missed.
      Real mu2 = 0.0, mu_tau = 0.0;
      for (int e = 0; e < n * n; ++e) {
        mu2 += std::norm(mu[e]);
        if (e % (n + 1) == 0) mu_tau += (mu[e] * tau).real();
      }
      if (mu2 > 0.0) {
        const Real s_star = mu_tau / mu2;
        if (s_star > 0.0 && s_star <= rmax * rmax)
          local = std::max(local, ratio_at(s_star));
      }
    }
    shard_max[shard] = std::max(shard_max[shard], local);
  });
  BoundConstantEstimate out;
  for (Real m : shard_max) out.max_ratio = std::max(out.max_ratio, m);
  out.c_hat = 1.25 * out.max_ratio;
  out.samples = samples;
  return out;
}

}  // namespace vortexlab
