#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

// ---------------------------------------------------------------------------
// Flat Kaehler 4-torus, cubical lattice.
//
// Sites are x = h*(n0,n1,n2,n3) with n_mu in [0,N). Complex structure pairs
// coordinates as z1 = x0 + i x1, z2 = x2 + i x3; the Kaehler form is
// omega = dx0^dx1 + dx2^dx3, so the omega-trace of a 2-form F is
// Lambda F = F_{01} + F_{23} and Lambda omega = 2.
//
// Cell indices are linearized with n0 fastest. k-form components are stored
// cell-major: value(cell, comp) is a contiguous `block` of Complex entries
// (block = 1 for scalars, n^2 for algebra-valued fields, dim V for sections).
// 1-form components live on link midpoints x + (h/2) e_mu, 2-form components
// on plaquette centers; the stored cell is the lower corner.
// ---------------------------------------------------------------------------

struct KaehlerTorus {
  int n = 0;           // sites per dimension
  Real period = 0.0;   // side length L
  Real h = 0.0;        // lattice spacing L/N
  std::int64_t ncells = 0;
  std::array<std::int64_t, 4> stride{};

  KaehlerTorus() = default;
  KaehlerTorus(int n_, Real period_) : n(n_), period(period_) {
    require(n >= 2, "torus: need at least 2 sites per dimension");
    require(period > 0.0, "torus: period must be positive");
    h = period / n;
    ncells = static_cast<std::int64_t>(n) * n * n * n;
    stride = {1, n, static_cast<std::int64_t>(n) * n,
              static_cast<std::int64_t>(n) * n * n};
  }

  Real cell_volume() const { return h * h * h * h; }
  Real volume() const { return period * period * period * period; }

  std::int64_t cell(int x0, int x1, int x2, int x3) const {
    return x0 + stride[1] * x1 + stride[2] * x2 + stride[3] * x3;
  }

  void decode(std::int64_t c, int x[4]) const {
    x[0] = static_cast<int>(c % n);
    c /= n;
    x[1] = static_cast<int>(c % n);
    c /= n;
    x[2] = static_cast<int>(c % n);
    x[3] = static_cast<int>(c / n);
  }

  /// Neighbor in +mu direction given the mu-coordinate of `c`.
  std::int64_t up(std::int64_t c, int mu, int xmu) const {
    return (xmu + 1 < n) ? c + stride[mu] : c + stride[mu] - stride[mu] * n;
  }

  /// Neighbor in -mu direction given the mu-coordinate of `c`.
  std::int64_t down(std::int64_t c, int mu, int xmu) const {
    return (xmu > 0) ? c - stride[mu] : c - stride[mu] + stride[mu] * n;
  }
};

/// Visits every cell in index order, passing (cell, x[4]) with coordinates
/// maintained incrementally.
template <class Fn>
void for_each_cell(const KaehlerTorus& t, Fn&& fn) {
  std::int64_t c = 0;
  int x[4];
  for (x[3] = 0; x[3] < t.n; ++x[3])
    for (x[2] = 0; x[2] < t.n; ++x[2])
      for (x[1] = 0; x[1] < t.n; ++x[1])
        for (x[0] = 0; x[0] < t.n; ++x[0], ++c) fn(c, x);
}

// ---------------------------------------------------------------------------
// Differential form storage.
// ---------------------------------------------------------------------------

inline constexpr std::array<int, 5> kFormComps = {1, 4, 6, 4, 1};

/// Component index lists: comp c of a k-form corresponds to the ordered
/// multi-index kCompDirs[k][c] (ascending directions).
inline const std::array<std::vector<std::array<int, 4>>, 5>& comp_dirs() {
  static const std::array<std::vector<std::array<int, 4>>, 5> table = {
      std::vector<std::array<int, 4>>{{-1, -1, -1, -1}},
      {{0, -1, -1, -1}, {1, -1, -1, -1}, {2, -1, -1, -1}, {3, -1, -1, -1}},
      {{0, 1, -1, -1},
       {0, 2, -1, -1},
       {0, 3, -1, -1},
       {1, 2, -1, -1},
       {1, 3, -1, -1},
       {2, 3, -1, -1}},
      {{0, 1, 2, -1}, {0, 1, 3, -1}, {0, 2, 3, -1}, {1, 2, 3, -1}},
      {{0, 1, 2, 3}}};
  return table;
}

/// Component index of the ordered pair mu < nu in a 2-form.
inline int pair_comp(int mu, int nu) {
  static const int table[4][4] = {{-1, 0, 1, 2},
                                  {0, -1, 3, 4},
                                  {1, 3, -1, 5},
                                  {2, 4, 5, -1}};
  return table[mu][nu];
}

struct Form {
  int degree = 0;
  int block = 1;
  std::int64_t ncells = 0;
  std::vector<Complex> v;

  Form() = default;
  Form(const KaehlerTorus& t, int degree_, int block_)
      : degree(degree_), block(block_), ncells(t.ncells) {
    require(degree >= 0 && degree <= 4, "form degree must be in [0,4]");
    require(block >= 1, "form block must be >= 1");
    v.assign(static_cast<std::size_t>(ncells) * kFormComps[degree] * block,
             Complex(0.0, 0.0));
  }

  int ncomp() const { return kFormComps[degree]; }

  Complex* at(std::int64_t cell, int comp) {
    return v.data() + (cell * ncomp() + comp) * block;
  }
  const Complex* at(std::int64_t cell, int comp) const {
    return v.data() + (cell * ncomp() + comp) * block;
  }

  void set_zero() { std::fill(v.begin(), v.end(), Complex(0.0, 0.0)); }
};

inline void check_same_shape(const Form& a, const Form& b, const char* who) {
  require(a.degree == b.degree && a.block == b.block && a.ncells == b.ncells,
          std::string(who) + ": forms have mismatched shape");
}

// y += alpha * x
inline void form_axpy(Complex alpha, const Form& x, Form& y) {
  check_same_shape(x, y, "form_axpy");
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += alpha * x.v[i];
}

inline void form_scale(Complex alpha, Form& y) {
  for (auto& z : y.v) z *= alpha;
}

/// L2 pairing h^4 * Re sum conj(f) g. Sharded with fixed chunking so the
/// result is identical for every thread count.
inline Real form_dot(const KaehlerTorus& t, const Form& f, const Form& g) {
  check_same_shape(f, g, "form_dot");
  constexpr int kShards = 64;
  std::array<Real, kShards> partial{};
  const std::int64_t m = static_cast<std::int64_t>(f.v.size());
  parallel_shards(m, kShards, [&](int s, std::int64_t lo, std::int64_t hi) {
    Real acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i)
      acc += f.v[i].real() * g.v[i].real() + f.v[i].imag() * g.v[i].imag();
    partial[s] = acc;
  });
  Real total = 0.0;
  for (Real p : partial) total += p;
  return t.cell_volume() * total;
}

inline Real form_norm2(const KaehlerTorus& t, const Form& f) {
  return form_dot(t, f, f);
}

inline Real form_max_abs(const Form& f) {
  Real m = 0.0;
  for (const auto& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

// ---------------------------------------------------------------------------
// Exterior derivative and codifferential.
//
// d uses forward differences, (df)_J = sum_a (-1)^a D_{j_a} f_{J \ j_a};
// the codifferential uses backward differences and is the exact adjoint of
// d with respect to form_dot on the periodic lattice. d(d(f)) vanishes
// identically up to floating-point cancellation.
// ---------------------------------------------------------------------------

struct DTerm {
  int out_comp;
  int in_comp;
  int dir;
  Real sign;
};

/// Terms of d mapping degree k -> k+1.
inline const std::vector<DTerm>& d_terms(int k) {
  static const std::array<std::vector<DTerm>, 4> tables = [] {
    std::array<std::vector<DTerm>, 4> out;
    for (int k = 0; k < 4; ++k) {
      const auto& in_comps = comp_dirs()[k];
      const auto& out_comps = comp_dirs()[k + 1];
      for (int oc = 0; oc < static_cast<int>(out_comps.size()); ++oc) {
        const auto& J = out_comps[oc];
        for (int a = 0; a <= k; ++a) {
          // Remove position a from J to get the input component.
          std::array<int, 4> I = {-1, -1, -1, -1};
          int w = 0;
          for (int b = 0; b <= k; ++b)
            if (b != a) I[w++] = J[b];
          int ic = -1;
          for (int c = 0; c < static_cast<int>(in_comps.size()); ++c)
            if (in_comps[c] == I) ic = c;
          out[k].push_back({oc, ic, J[a], (a % 2 == 0) ? 1.0 : -1.0});
        }
      }
    }
    return out;
  }();
  require(k >= 0 && k < 4, "d_terms: degree out of range");
  return tables[k];
}

inline Form exterior_d(const KaehlerTorus& t, const Form& f) {
  require(f.degree < 4, "exterior_d: input degree must be < 4");
  Form out(t, f.degree + 1, f.block);
  const auto& terms = d_terms(f.degree);
  const Real inv_h = 1.0 / t.h;
  const int b = f.block;
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    for (const auto& tm : terms) {
      const std::int64_t cu = t.up(c, tm.dir, x[tm.dir]);
      const Complex* fu = f.at(cu, tm.in_comp);
      const Complex* f0 = f.at(c, tm.in_comp);
      Complex* o = out.at(c, tm.out_comp);
      const Real s = tm.sign * inv_h;
      for (int e = 0; e < b; ++e) o[e] += s * (fu[e] - f0[e]);
    }
  });
  return out;
}

inline Form codifferential(const KaehlerTorus& t, const Form& g) {
  require(g.degree > 0, "codifferential: input degree must be > 0");
  Form out(t, g.degree - 1, g.block);
  const auto& terms = d_terms(g.degree - 1);
  const Real inv_h = 1.0 / t.h;
  const int b = g.block;
  for_each_cell(t, [&](std::int64_t c, const int x[4]) {
    for (const auto& tm : terms) {
      const std::int64_t cd = t.down(c, tm.dir, x[tm.dir]);
      const Complex* g0 = g.at(c, tm.out_comp);
      const Complex* gd = g.at(cd, tm.out_comp);
      Complex* o = out.at(c, tm.in_comp);
      const Real s = -tm.sign * inv_h;
      for (int e = 0; e < b; ++e) o[e] += s * (g0[e] - gd[e]);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Kaehler type decomposition of 2-forms.
//
// With the self-dual frame omega1 = omega, omega2 = dx0^dx2 - dx1^dx3,
// omega3 = dx0^dx3 + dx1^dx2, the (2,0) part of a real-type 2-form F is
// a*(omega2 + i omega3) with a = (<F,omega2> - i <F,omega3>)/4. The split
// F = F20 + F11 + F02 is exact by construction (F11 is formed by
// subtraction), and Lambda F20 = Lambda F02 = 0 identically.
// ---------------------------------------------------------------------------

struct TypeSplit {
  Form f20;
  Form f11;
  Form f02;
  Form trace;  // 0-form Lambda F = F_{01} + F_{23}
};

inline TypeSplit type_split(const KaehlerTorus& t, const Form& f) {
  require(f.degree == 2, "type_split: input must be a 2-form");
  TypeSplit out{Form(t, 2, f.block), Form(t, 2, f.block), Form(t, 2, f.block),
                Form(t, 0, f.block)};
  const int b = f.block;
  const Complex iu(0.0, 1.0);
  for (std::int64_t c = 0; c < f.ncells; ++c) {
    const Complex* f01 = f.at(c, 0);
    const Complex* f02c = f.at(c, 1);
    const Complex* f03 = f.at(c, 2);
    const Complex* f12 = f.at(c, 3);
    const Complex* f13 = f.at(c, 4);
    const Complex* f23 = f.at(c, 5);
    Complex* tr = out.trace.at(c, 0);
    for (int e = 0; e < b; ++e) {
      tr[e] = f01[e] + f23[e];
      const Complex u = f02c[e] - f13[e];  // <F, omega2>
      const Complex w = f03[e] + f12[e];   // <F, omega3>
      const Complex a20 = 0.25 * (u - iu * w);
      const Complex a02 = 0.25 * (u + iu * w);
      // F20 = a20 * (omega2 + i omega3), F02 = a02 * (omega2 - i omega3).
      out.f20.at(c, 1)[e] = a20;
      out.f20.at(c, 4)[e] = -a20;
      out.f20.at(c, 2)[e] = iu * a20;
      out.f20.at(c, 3)[e] = iu * a20;
      out.f02.at(c, 1)[e] = a02;
      out.f02.at(c, 4)[e] = -a02;
      out.f02.at(c, 2)[e] = -iu * a02;
      out.f02.at(c, 3)[e] = -iu * a02;
      for (int comp = 0; comp < 6; ++comp)
        out.f11.at(c, comp)[e] =
            f.at(c, comp)[e] - out.f20.at(c, comp)[e] - out.f02.at(c, comp)[e];
    }
  }
  return out;
}

/// omega-trace of a 2-form as a 0-form: Lambda F = F_{01} + F_{23}.
inline Form lambda_trace(const KaehlerTorus& t, const Form& f) {
  require(f.degree == 2, "lambda_trace: input must be a 2-form");
  Form out(t, 0, f.block);
  for (std::int64_t c = 0; c < f.ncells; ++c) {
    const Complex* f01 = f.at(c, 0);
    const Complex* f23 = f.at(c, 5);
    Complex* o = out.at(c, 0);
    for (int e = 0; e < f.block; ++e) o[e] = f01[e] + f23[e];
  }
  return out;
}

/// Pointwise density of <F ^ F> / vol for algebra-valued (block n^2) or
/// scalar (block 1) 2-forms, using the invariant bilinear pairing
/// <X, Y> = -Re tr(XY) (real and positive definite on anti-Hermitians).
/// The second Chern number is (1/8pi^2) * h^4 * sum of this density.
inline Form wedge_pair_density(const KaehlerTorus& t, const Form& f, int n) {
  require(f.degree == 2, "wedge_pair_density: input must be a 2-form");
  require(n * n == f.block, "wedge_pair_density: block must be n^2");
  Form out(t, 0, 1);
  for (std::int64_t c = 0; c < f.ncells; ++c) {
    const Real p01_23 = -mat_trace_product(n, f.at(c, 0), f.at(c, 5)).real();
    const Real p02_13 = -mat_trace_product(n, f.at(c, 1), f.at(c, 4)).real();
    const Real p03_12 = -mat_trace_product(n, f.at(c, 2), f.at(c, 3)).real();
    out.at(c, 0)[0] = 2.0 * (p01_23 - p02_13 + p03_12);
  }
  return out;
}

/// Integral of a 0-form density (block 1), h^4 * sum, fixed-shard order.
inline Real integrate_density(const KaehlerTorus& t, const Form& f) {
  require(f.degree == 0 && f.block == 1,
          "integrate_density: input must be a scalar 0-form");
  constexpr int kShards = 64;
  std::array<Real, kShards> partial{};
  parallel_shards(f.ncells, kShards,
                  [&](int s, std::int64_t lo, std::int64_t hi) {
                    Real acc = 0.0;
                    for (std::int64_t i = lo; i < hi; ++i)
                      acc += f.v[i].real();
                    partial[s] = acc;
                  });
  Real total = 0.0;
  for (Real p : partial) total += p;
  return t.cell_volume() * total;
}

}  // namespace vortexlab
