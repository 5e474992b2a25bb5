#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vortexlab/algebra.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/lattice.hpp"

namespace vortexlab {

// ---------------------------------------------------------------------------
// Topological twist data.
//
// The bundle is specified by an antisymmetric integer matrix m. The
// connection splits as A = A_bg + a where the background
//   A_bg,nu(x) = -i (2pi/L^2) sum_{mu<nu} m_{mu nu} x^mu * Id
// is central with constant curvature F_bg,{mu nu} = -(2pi i/L^2) m_{mu nu} Id,
// and the fluctuation a is a genuinely periodic algebra-valued 1-form.
// Sections are stored on the fundamental domain and satisfy
//   phi(x + L e_mu) = exp(-i w chi_mu(x)) phi(x),
//   chi_mu(x) = -(2pi/L) sum_{nu>mu} m_{mu nu} x^nu,
// where w is the center weight of the representation. The transition
// phases form an exact cocycle because all m and w are integers: N unit
// shifts close exactly onto the seam phase. Unit shifts in two directions
// are magnetic translations and commute only up to the central phase
// exp(-2 pi i w m_{mu nu} / N) on the seam slab x_mu = N-1 (mu < nu).
// ---------------------------------------------------------------------------

struct TwistData {
  std::array<std::array<int, 4>, 4> m{};

  TwistData() {
    for (auto& row : m) row.fill(0);
  }

  /// Twist in a single coordinate plane mu < nu.
  static TwistData plane(int mu, int nu, int value) {
    require(mu >= 0 && nu >= 0 && mu < 4 && nu < 4 && mu != nu,
            "twist: plane indices must be distinct and in [0,4)");
    TwistData t;
    t.m[mu][nu] = value;
    t.m[nu][mu] = -value;
    return t;
  }

  /// All six upper components (m01, m02, m03, m12, m13, m23).
  static TwistData general(const std::array<int, 6>& upper) {
    TwistData t;
    int c = 0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu, ++c) {
        t.m[mu][nu] = upper[c];
        t.m[nu][mu] = -upper[c];
      }
    return t;
  }

  bool is_trivial() const {
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        if (m[mu][nu] != 0) return false;
    return true;
  }
};

/// Coefficient c of the central background link A_bg,mu(x) = i c Id at the
/// link based at integer coordinates x. (The midpoint shift is along e_mu
/// and A_bg,mu only involves coordinates nu < mu, so sampling at the site
/// is already the midpoint value.)
inline Real background_coeff(const KaehlerTorus& t, const TwistData& tw,
                             const int x[4], int mu) {
  int s = 0;
  for (int nu = 0; nu < mu; ++nu) s += tw.m[nu][mu] * x[nu];
  return -kTwoPi * t.h / (t.period * t.period) * static_cast<Real>(s);
}

/// Transition phase picked up by a weight-w section crossing the +mu face
/// from a site with coordinates x (x_mu = N-1).
inline Complex wrap_phase(const KaehlerTorus& t, const TwistData& tw,
                          int weight, int mu, const int x[4]) {
  std::int64_t s = 0;
  for (int nu = mu + 1; nu < 4; ++nu) s += tw.m[mu][nu] * x[nu];
  const Real theta =
      kTwoPi * static_cast<Real>(weight) * static_cast<Real>(s) / t.n;
  return std::polar(1.0, theta);
}

/// Shift of a section-valued form by one lattice unit in direction mu
/// (step = +1 or -1), applying the transition phase at the torus seam.
/// Acting componentwise, so 1-forms of sections transport like sections.
inline Form section_shift(const KaehlerTorus& t, const TwistData& tw,
                          int weight, const Form& f, int mu, int step) {
  require(step == 1 || step == -1, "section_shift: step must be +-1");
  Form out(t, f.degree, f.block);
  const int ncomp = f.ncomp();
  const int b = f.block;
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    Complex phase(1.0, 0.0);
    std::int64_t src;
    if (step == 1) {
      src = t.up(c, mu, x[mu]);
      if (x[mu] == t.n - 1) phase = wrap_phase(t, tw, weight, mu, x);
    } else {
      src = t.down(c, mu, x[mu]);
      if (x[mu] == 0) {
        int xd[4] = {x[0], x[1], x[2], x[3]};
        xd[mu] = t.n - 1;
        phase = std::conj(wrap_phase(t, tw, weight, mu, xd));
      }
    }
    for (int comp = 0; comp < ncomp; ++comp) {
      const Complex* src_v = f.at(src, comp);
      Complex* dst = out.at(c, comp);
      for (int e = 0; e < b; ++e) dst[e] = phase * src_v[e];
    }
  });
  return out;
}

/// Plain periodic shift for algebra-valued (adjoint) forms: the background
/// is central, so the adjoint transition is trivial.
inline Form form_shift(const KaehlerTorus& t, const Form& f, int mu,
                       int step) {
  require(step == 1 || step == -1, "form_shift: step must be +-1");
  Form out(t, f.degree, f.block);
  const int ncomp = f.ncomp();
  const int b = f.block;
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    const std::int64_t src =
        (step == 1) ? t.up(c, mu, x[mu]) : t.down(c, mu, x[mu]);
    for (int comp = 0; comp < ncomp; ++comp) {
      const Complex* sv = f.at(src, comp);
      Complex* dst = out.at(c, comp);
      for (int e = 0; e < b; ++e) dst[e] = sv[e];
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Pair = (fluctuation connection, section).
// ---------------------------------------------------------------------------

struct Pair {
  KaehlerTorus torus;
  Representation rep;
  TwistData twist;
  Form a;    // degree 1, block n^2, anti-Hermitian values
  Form phi;  // degree 0, block dim V

  Pair(const KaehlerTorus& t, Representation rep_, const TwistData& tw)
      : torus(t),
        rep(std::move(rep_)),
        twist(tw),
        a(t, 1, rep.group_dim() * rep.group_dim()),
        phi(t, 0, rep.dim()) {}
};

/// Largest anti-Hermiticity defect over all links of the fluctuation.
inline Real connection_defect(const Pair& p) {
  const int n = p.rep.group_dim();
  Real worst = 0.0;
  for (std::int64_t c = 0; c < p.torus.ncells; ++c)
    for (int mu = 0; mu < 4; ++mu)
      worst = std::max(worst, mat_antihermitian_defect(n, p.a.at(c, mu)));
  return worst;
}

/// Re-projects every link onto the algebra (used to stop rounding drift).
inline void project_connection(Pair& p) {
  const int n = p.rep.group_dim();
  for (std::int64_t c = 0; c < p.torus.ncells; ++c)
    for (int mu = 0; mu < 4; ++mu)
      mat_project_antihermitian(n, p.a.at(c, mu));
}

// ---------------------------------------------------------------------------
// Curvature: F = F_bg + d a + [abar, abar] with plaquette-centered averages
//   abar_mu = (a_mu(x) + a_mu(x+e_nu))/2, abar_nu = (a_nu(x) + a_nu(x+e_mu))/2,
// second-order accurate at the plaquette center and exactly algebra-valued.
// ---------------------------------------------------------------------------

inline Form curvature(const Pair& p) {
  const KaehlerTorus& t = p.torus;
  const int n = p.rep.group_dim();
  const int b = n * n;
  Form f(t, 2, b);
  const Real inv_h = 1.0 / t.h;
  const Real bg_scale = -kTwoPi / (t.period * t.period);
  std::vector<Complex> am(b), an(b), comm(b);
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        const int comp = pair_comp(mu, nu);
        Complex* out = f.at(c, comp);
        const std::int64_t cu_mu = t.up(c, mu, x[mu]);
        const std::int64_t cu_nu = t.up(c, nu, x[nu]);
        const Complex* amu = p.a.at(c, mu);
        const Complex* anu = p.a.at(c, nu);
        const Complex* amu_up = p.a.at(cu_nu, mu);
        const Complex* anu_up = p.a.at(cu_mu, nu);
        for (int e = 0; e < b; ++e) {
          out[e] = inv_h * (anu_up[e] - anu[e]) - inv_h * (amu_up[e] - amu[e]);
          am[e] = 0.5 * (amu[e] + amu_up[e]);
          an[e] = 0.5 * (anu[e] + anu_up[e]);
        }
        if (n == 1) {
          // abelian: commutator vanishes identically
        } else {
          mat_commutator(n, am.data(), an.data(), comm.data());
          for (int e = 0; e < b; ++e) out[e] += comm[e];
        }
        const Real fbg = bg_scale * p.twist.m[mu][nu];
        if (fbg != 0.0)
          for (int i = 0; i < n; ++i)
            out[i * n + i] += Complex(0.0, fbg);
      }
  });
  return f;
}

/// Trace-normalized flux through each (mu,nu)-plane at a fixed transverse
/// position: (i / 2pi n) h^2 sum_plane tr F. For any pair these are the
/// twist integers m_{mu nu} exactly: the fluctuation telescopes away and
/// the commutator is traceless.
struct FluxReport {
  // flux[comp] lists the plane sums over all N^2 transverse positions.
  std::array<std::vector<Real>, 6> flux;
  Real max_integer_deviation = 0.0;
};

inline FluxReport flux_integers(const Pair& p) {
  const KaehlerTorus& t = p.torus;
  const int n = p.rep.group_dim();
  Form f = curvature(p);
  FluxReport rep;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const int comp = pair_comp(mu, nu);
      // transverse directions
      int t1 = -1, t2 = -1;
      for (int d = 0; d < 4; ++d)
        if (d != mu && d != nu) (t1 < 0 ? t1 : t2) = d;
      auto& out = rep.flux[comp];
      out.resize(static_cast<std::size_t>(t.n) * t.n);
      for (int j2 = 0; j2 < t.n; ++j2)
        for (int j1 = 0; j1 < t.n; ++j1) {
          Complex acc(0.0, 0.0);
          int x[4] = {0, 0, 0, 0};
          x[t1] = j1;
          x[t2] = j2;
          for (int inu = 0; inu < t.n; ++inu)
            for (int imu = 0; imu < t.n; ++imu) {
              x[mu] = imu;
              x[nu] = inu;
              acc += mat_trace(n, f.at(t.cell(x[0], x[1], x[2], x[3]), comp));
            }
          const Real val =
              (Complex(0.0, 1.0) * acc).real() * t.h * t.h / (kTwoPi * n);
          out[j1 + t.n * j2] = val;
          rep.max_integer_deviation = std::max(
              rep.max_integer_deviation, std::abs(val - std::round(val)));
        }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Covariant derivative, midpoint-centered:
//   (D_mu phi)(x) = [S phi - phi]/h + rho_*(a_mu(x) + A_bg,mu) (S phi + phi)/2
// where S is the twisted unit shift. Second-order accurate at the link
// midpoint.
// ---------------------------------------------------------------------------

inline Form covariant_derivative(const Pair& p) {
  const KaehlerTorus& t = p.torus;
  const int dim = p.rep.dim();
  const int w = p.rep.center_weight();
  Form d(t, 1, dim);
  const Real inv_h = 1.0 / t.h;
  std::vector<Complex> sphi(dim), mid(dim);
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    for (int mu = 0; mu < 4; ++mu) {
      const std::int64_t cu = t.up(c, mu, x[mu]);
      const Complex* pv = p.phi.at(c, 0);
      const Complex* pu = p.phi.at(cu, 0);
      Complex phase(1.0, 0.0);
      if (x[mu] == t.n - 1) phase = wrap_phase(t, p.twist, w, mu, x);
      for (int e = 0; e < dim; ++e) {
        sphi[e] = phase * pu[e];
        mid[e] = 0.5 * (sphi[e] + pv[e]);
      }
      Complex* out = d.at(c, mu);
      for (int e = 0; e < dim; ++e) out[e] = inv_h * (sphi[e] - pv[e]);
      p.rep.apply_algebra(p.a.at(c, mu), mid.data(), out);
      const Real cbg = background_coeff(t, p.twist, x, mu);
      if (cbg != 0.0) {
        const Complex ic(0.0, cbg * w);
        for (int e = 0; e < dim; ++e) out[e] += ic * mid[e];
      }
    }
  });
  return d;
}

// ---------------------------------------------------------------------------
// Dolbeault components of the covariant derivative. With z1 = x0 + i x1 and
// z2 = x2 + i x3, the antiholomorphic components are
//   c1 = D_0 phi + i D_1 phi  (centered at (01)-plaquette midpoints),
//   c2 = D_2 phi + i D_3 phi  (centered at (23)-plaquette midpoints),
// each term averaged over the transverse link so both live at the same
// point; |dbar phi|^2 = (|c1|^2 + |c2|^2)/2, |del phi|^2 likewise from the
// holomorphic combinations.
// ---------------------------------------------------------------------------

struct DolbeaultParts {
  Form c1;  // block dim V, 0-form storage at (01)-plaquette centers
  Form c2;  // at (23)-plaquette centers
};

namespace detail {

inline DolbeaultParts dolbeault_combine(const Pair& p, const Form& d,
                                        int sign) {
  const KaehlerTorus& t = p.torus;
  const int dim = p.rep.dim();
  const int w = p.rep.center_weight();
  DolbeaultParts out{Form(t, 0, dim), Form(t, 0, dim)};
  // Averages of D_mu phi over the transverse link of its plaquette plane.
  // Components of d transport like sections, so the shifts are twisted.
  struct Combo {
    int d_comp;      // which D_mu
    int avg_dir;     // direction to average over
    Complex weight;  // 1 or +-i
    Form* target;
  };
  const Complex iu(0.0, static_cast<Real>(sign));
  std::array<Combo, 4> combos = {
      Combo{0, 1, Complex(1.0, 0.0), &out.c1}, Combo{1, 0, iu, &out.c1},
      Combo{2, 3, Complex(1.0, 0.0), &out.c2}, Combo{3, 2, iu, &out.c2}};
  for (auto& combo : combos) {
    for_each_cell(t, [&](std::int64_t c, const int x[4]) {
      const std::int64_t cu = t.up(c, combo.avg_dir, x[combo.avg_dir]);
      Complex phase(1.0, 0.0);
      if (x[combo.avg_dir] == t.n - 1)
        phase = wrap_phase(t, p.twist, w, combo.avg_dir, x);
      const Complex* v0 = d.at(c, combo.d_comp);
      const Complex* vu = d.at(cu, combo.d_comp);
      Complex* dst = combo.target->at(c, 0);
      for (int e = 0; e < dim; ++e)
        dst[e] += combo.weight * 0.5 * (v0[e] + phase * vu[e]);
    });
  }
  return out;
}

}  // namespace detail

/// Antiholomorphic part (D_0 + iD_1, D_2 + iD_3) of a precomputed covariant
/// derivative.
inline DolbeaultParts dbar_parts(const Pair& p, const Form& d) {
  return detail::dolbeault_combine(p, d, +1);
}
inline DolbeaultParts dbar_parts(const Pair& p) {
  return dbar_parts(p, covariant_derivative(p));
}

/// Holomorphic part (D_0 - iD_1, D_2 - iD_3).
inline DolbeaultParts del_parts(const Pair& p, const Form& d) {
  return detail::dolbeault_combine(p, d, -1);
}
inline DolbeaultParts del_parts(const Pair& p) {
  return del_parts(p, covariant_derivative(p));
}

/// Integral of |dbar phi|^2 (or |del phi|^2) from its components.
inline Real dolbeault_norm2(const KaehlerTorus& t, const DolbeaultParts& d) {
  return 0.5 * (form_norm2(t, d.c1) + form_norm2(t, d.c2));
}

// ---------------------------------------------------------------------------
// Gauge transformations.
// ---------------------------------------------------------------------------

struct GaugeTransformation {
  Form s;  // degree 0, block n^2, unitary values, periodic

  GaugeTransformation(const KaehlerTorus& t, int n) : s(t, 0, n * n) {
    for (std::int64_t c = 0; c < t.ncells; ++c) mat_identity(n, s.at(c, 0));
  }
};

inline Real unitarity_defect(const GaugeTransformation& g, int n) {
  Real worst = 0.0;
  for (std::int64_t c = 0; c < g.s.ncells; ++c)
    worst = std::max(worst, mat_unitarity_defect(n, g.s.at(c, 0)));
  return worst;
}

/// Pointwise exponential: s(x) = exp(xi(x)) for an algebra-valued 0-form.
inline GaugeTransformation exp_gauge(const KaehlerTorus& t,
                                     const StructureGroup& g, const Form& xi) {
  require(xi.degree == 0 && xi.block == g.n * g.n,
          "exp_gauge: xi must be an algebra-valued 0-form");
  GaugeTransformation out(t, g.n);
  for (std::int64_t c = 0; c < t.ncells; ++c)
    g.exp(xi.at(c, 0), out.s.at(c, 0));
  return out;
}

/// Gauge action on a pair:
///   phi'(x) = rho(s(x))^{-1} phi(x),
///   a'_mu(x) = (Ad_{s(x)^-1} + Ad_{s(x+h e_mu)^-1})/2 a_mu(x)
///              + (1/h) log(s(x)^-1 s(x + h e_mu)).
/// The logarithmic inhomogeneous term keeps the transported link exactly
/// algebra-valued and agrees with s^-1 d s to second order; in the abelian
/// case the rule is exact (a' = a + i d chi for s = e^{i chi}).
inline Pair gauge_act(const Pair& p, const GaugeTransformation& g) {
  const KaehlerTorus& t = p.torus;
  const int n = p.rep.group_dim();
  const int dim = p.rep.dim();
  require(g.s.ncells == t.ncells && g.s.block == n * n,
          "gauge_act: transformation shape mismatch");
  Pair out(t, p.rep, p.twist);
  std::vector<Complex> sdag(n * n), sdag_up(n * n), rho(dim * dim),
      tmp(n * n), tmp2(n * n), rel(n * n), lg(n * n);
  const StructureGroup& grp = p.rep.group();
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    const Complex* sv = g.s.at(c, 0);
    mat_adjoint(n, sv, sdag.data());
    // Section: phi' = rho(s^dagger) phi.
    p.rep.rho_of(sdag.data(), rho.data());
    const Complex* pv = p.phi.at(c, 0);
    Complex* pout = out.phi.at(c, 0);
    for (int i = 0; i < dim; ++i) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < dim; ++j) acc += rho[i * dim + j] * pv[j];
      pout[i] = acc;
    }
    for (int mu = 0; mu < 4; ++mu) {
      const std::int64_t cu = t.up(c, mu, x[mu]);
      const Complex* su = g.s.at(cu, 0);
      mat_adjoint(n, su, sdag_up.data());
      const Complex* av = p.a.at(c, mu);
      Complex* aout = out.a.at(c, mu);
      // (Ad_{s^-1} a + Ad_{s_up^-1} a)/2
      mat_mul(n, sdag.data(), av, tmp.data());
      mat_mul(n, tmp.data(), sv, tmp2.data());
      for (int e = 0; e < n * n; ++e) aout[e] = 0.5 * tmp2[e];
      mat_mul(n, sdag_up.data(), av, tmp.data());
      mat_mul(n, tmp.data(), su, tmp2.data());
      for (int e = 0; e < n * n; ++e) aout[e] += 0.5 * tmp2[e];
      // + log(s^-1 s_up)/h
      mat_mul(n, sdag.data(), su, rel.data());
      grp.log(rel.data(), lg.data());
      for (int e = 0; e < n * n; ++e) aout[e] += lg[e] / t.h;
      mat_project_antihermitian(n, aout);
    }
  });
  return out;
}

/// Pointwise product s(x) = s1(x) s2(x): acting by g1 and then by g2 equals
/// acting once by compose(g1, g2).
inline GaugeTransformation compose(const KaehlerTorus& t, int n,
                                   const GaugeTransformation& g1,
                                   const GaugeTransformation& g2) {
  GaugeTransformation out(t, n);
  for (std::int64_t c = 0; c < t.ncells; ++c)
    mat_mul(n, g1.s.at(c, 0), g2.s.at(c, 0), out.s.at(c, 0));
  return out;
}

// ---------------------------------------------------------------------------
// Vortex residuals. At a solution all three vanish:
//   r1 = Lambda F - i (mu(phi) - tau)   (0-form, algebra-valued)
//   r2 = the (2,0) curvature part        (with |F20| = |F02| pointwise)
//   r3 = dbar phi                        (Dolbeault components)
// The omega-trace of F is averaged from the four plaquettes touching each
// site in both complex planes so r1 is site-centered and second-order.
// ---------------------------------------------------------------------------

struct Residuals {
  Form r1;            // 0-form, block n^2
  Form f20;           // 2-form, block n^2
  DolbeaultParts dbar;
  Real r1_norm = 0.0;
  Real r2_norm = 0.0;  // sqrt(int |F20|^2 + |F02|^2)
  Real r3_norm = 0.0;  // sqrt(int |dbar phi|^2)
};

/// Site-centered omega-trace: each plaquette component of Lambda F is the
/// average over the four plaquettes of its plane containing the site.
inline Form site_lambda(const KaehlerTorus& t, const Form& f) {
  require(f.degree == 2, "site_lambda: input must be a 2-form");
  Form out(t, 0, f.block);
  const int b = f.block;
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    Complex* o = out.at(c, 0);
    // (01)-plane, component 0; (23)-plane, component 5.
    const std::int64_t d0 = t.down(c, 0, x[0]);
    const std::int64_t d1 = t.down(c, 1, x[1]);
    int xd[4];
    t.decode(d1, xd);
    const std::int64_t d01 = t.down(d1, 0, xd[0]);
    const std::int64_t d2 = t.down(c, 2, x[2]);
    const std::int64_t d3 = t.down(c, 3, x[3]);
    t.decode(d3, xd);
    const std::int64_t d23 = t.down(d3, 2, xd[2]);
    const Complex* p01[4] = {f.at(c, 0), f.at(d0, 0), f.at(d1, 0),
                             f.at(d01, 0)};
    const Complex* p23[4] = {f.at(c, 5), f.at(d2, 5), f.at(d3, 5),
                             f.at(d23, 5)};
    for (int e = 0; e < b; ++e) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < 4; ++k) acc += p01[k][e] + p23[k][e];
      o[e] = 0.25 * acc;
    }
  });
  return out;
}

inline Residuals vortex_residuals(const Pair& p, Real tau) {
  const KaehlerTorus& t = p.torus;
  const int n = p.rep.group_dim();
  Form f = curvature(p);
  TypeSplit split = type_split(t, f);
  Form lam = site_lambda(t, f);
  Form r1(t, 0, n * n);
  std::vector<Complex> mu(n * n);
  for (std::int64_t c = 0; c < t.ncells; ++c) {
    p.rep.moment_map(p.phi.at(c, 0), mu.data());
    const Complex* lv = lam.at(c, 0);
    Complex* rv = r1.at(c, 0);
    const Complex iu(0.0, 1.0);
    for (int e = 0; e < n * n; ++e) {
      Complex dev = mu[e];
      if (e % (n + 1) == 0) dev -= tau;
      rv[e] = lv[e] - iu * dev;
    }
  }
  Residuals out{std::move(r1), std::move(split.f20), dbar_parts(p), 0, 0, 0};
  out.r1_norm = std::sqrt(form_norm2(t, out.r1));
  out.r2_norm = std::sqrt(2.0 * form_norm2(t, out.f20));
  out.r3_norm = std::sqrt(dolbeault_norm2(t, out.dbar));
  return out;
}

}  // namespace vortexlab
