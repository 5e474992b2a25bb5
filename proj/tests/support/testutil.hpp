#pragma once

#include <cstdint>

#include "vortexlab/algebra.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/lattice.hpp"
#include "vortexlab/poisson.hpp"

namespace vortexlab::testutil {

/// White-noise complex form, entries standard complex Gaussians.
inline Form random_form(const KaehlerTorus& t, int degree, int block,
                        std::uint64_t seed) {
  Form f(t, degree, block);
  RandomStream rs(seed, {0xf01u});
  for (auto& z : f.v) z = rs.gaussian_complex();
  return f;
}

/// Random form with anti-Hermitian n x n matrix values (block = n^2).
inline Form random_antihermitian_form(const KaehlerTorus& t, int degree, int n,
                                      std::uint64_t seed) {
  Form f(t, degree, n * n);
  RandomStream rs(seed, {0xf02u});
  for (std::int64_t c = 0; c < f.ncells; ++c)
    for (int comp = 0; comp < f.ncomp(); ++comp) {
      Complex* m = f.at(c, comp);
      for (int i = 0; i < n * n; ++i) m[i] = rs.gaussian_complex();
      mat_project_antihermitian(n, m);
    }
  return f;
}

/// Max |f - g| over all entries.
inline Real max_diff(const Form& f, const Form& g) {
  Real m = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    m = std::max(m, std::abs(f.v[i] - g.v[i]));
  return m;
}

/// Smooth band-limited algebra-valued form: each (direction, basis)
/// coefficient is an independent band-limited real scalar of size `amp`.
/// Band-limited real scalar rescaled to unit max-abs, so that amplitude
/// arguments of the smooth_* helpers really are field amplitudes.
inline Form unit_scalar(const KaehlerTorus& t, std::uint64_t seed,
                        std::uint64_t tag, int kmax) {
  Form f = bandlimited_scalar(t, seed, tag, kmax, 1.0);
  Real peak = 0.0;
  for (std::int64_t c = 0; c < t.ncells; ++c)
    peak = std::max(peak, std::abs(f.at(c, 0)[0].real()));
  const Real scale = (peak > 0.0) ? 1.0 / peak : 1.0;
  for (std::int64_t c = 0; c < t.ncells; ++c) f.at(c, 0)[0] *= scale;
  return f;
}

inline Form smooth_algebra_form(const KaehlerTorus& t, int degree,
                                const StructureGroup& g, std::uint64_t seed,
                                Real amp, int kmax = 2) {
  Form out(t, degree, g.n * g.n);
  std::uint64_t tag = 0x5a1u;
  for (int comp = 0; comp < out.ncomp(); ++comp)
    for (int b = 0; b < g.algebra_dim(); ++b) {
      Form coef = unit_scalar(t, seed, ++tag, kmax);
      for (std::int64_t c = 0; c < t.ncells; ++c) {
        const Real v = amp * coef.at(c, 0)[0].real();
        Complex* dst = out.at(c, comp);
        for (int e = 0; e < g.n * g.n; ++e) dst[e] += v * g.basis[b][e];
      }
    }
  return out;
}

/// Smooth band-limited complex section components.
inline Form smooth_section(const KaehlerTorus& t, int dim, std::uint64_t seed,
                           Real amp, int kmax = 2) {
  Form out(t, 0, dim);
  std::uint64_t tag = 0x5ec7u;
  for (int e = 0; e < dim; ++e) {
    Form re = unit_scalar(t, seed, ++tag, kmax);
    Form im = unit_scalar(t, seed, ++tag, kmax);
    for (std::int64_t c = 0; c < t.ncells; ++c)
      out.at(c, 0)[e] =
          amp * Complex(re.at(c, 0)[0].real(), im.at(c, 0)[0].real());
  }
  return out;
}

}  // namespace vortexlab::testutil
