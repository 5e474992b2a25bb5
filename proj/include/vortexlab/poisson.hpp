#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "vortexlab/core.hpp"
#include "vortexlab/lattice.hpp"

namespace vortexlab {

// ---------------------------------------------------------------------------
// FFT utilities. All plans use FFTW_ESTIMATE: planning is then deterministic
// (no runtime measurement), which keeps every FFT-backed result bitwise
// reproducible for a fixed seed. Plan creation is not thread-safe and is
// always done from the calling thread.
// ---------------------------------------------------------------------------

/// In-place 4-d complex DFT on an ncells buffer laid out with x0 fastest.
/// sign = FFTW_FORWARD (-1) or FFTW_BACKWARD (+1). Unnormalized.
inline void fft4_inplace(const KaehlerTorus& t, Complex* data, int sign) {
  int dims[4] = {t.n, t.n, t.n, t.n};  // row-major: last dim fastest = x0
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan = fftw_plan_dft(4, dims, p, p, sign, FFTW_ESTIMATE);
  ensure(plan != nullptr, "fft4: plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

/// Eigenvalue of the 0-form Laplacian d*d for Fourier index (k0,k1,k2,k3):
/// (4/h^2) sum_mu sin^2(pi k_mu / N). Nonnegative; zero only at k = 0.
inline Real laplace_symbol(const KaehlerTorus& t, int k0, int k1, int k2,
                           int k3) {
  auto s2 = [&](int k) {
    const Real s = std::sin(kPi * k / t.n);
    return s * s;
  };
  return 4.0 / (t.h * t.h) * (s2(k0) + s2(k1) + s2(k2) + s2(k3));
}

/// Solves d*d u = rhs for a 0-form rhs (any block), returning the unique
/// zero-mean solution. Each block channel must have zero mean: the relative
/// mean |mean| / rms must be below 1e-10 or the call throws.
inline Form laplace_solve(const KaehlerTorus& t, const Form& rhs) {
  require(rhs.degree == 0, "laplace_solve: rhs must be a 0-form");
  Form out(t, 0, rhs.block);
  std::vector<Complex> buf(static_cast<std::size_t>(t.ncells));
  for (int e = 0; e < rhs.block; ++e) {
    // Gather channel e.
    for (std::int64_t c = 0; c < t.ncells; ++c) buf[c] = rhs.at(c, 0)[e];
    fft4_inplace(t, buf.data(), FFTW_FORWARD);
    // Zero-mean check on the k = 0 mode against the spectrum rms.
    Real l2 = 0.0;
    for (std::int64_t c = 0; c < t.ncells; ++c) l2 += std::norm(buf[c]);
    l2 = std::sqrt(l2);
    require(std::abs(buf[0]) <= 1e-10 * l2 || l2 == 0.0,
            "laplace_solve: rhs must have zero mean");
    buf[0] = Complex(0.0, 0.0);
    std::int64_t idx = 0;
    for (int k3 = 0; k3 < t.n; ++k3)
      for (int k2 = 0; k2 < t.n; ++k2)
        for (int k1 = 0; k1 < t.n; ++k1)
          for (int k0 = 0; k0 < t.n; ++k0, ++idx) {
            if (idx == 0) continue;
            buf[idx] /= laplace_symbol(t, k0, k1, k2, k3);
          }
    fft4_inplace(t, buf.data(), FFTW_BACKWARD);
    const Real scale = 1.0 / static_cast<Real>(t.ncells);
    for (std::int64_t c = 0; c < t.ncells; ++c) out.at(c, 0)[e] = scale * buf[c];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Band-limited random fields.
//
// Fourier coefficients are drawn from streams keyed by the signed integer
// frequency vector, so the synthesized field is a fixed smooth function of
// the continuum point x: refining N while keeping (seed, kmax, decay) fixed
// samples the same function on a finer grid. Requires kmax < N/2.
// ---------------------------------------------------------------------------

/// Real scalar band-limited field: Re sum_{|k|_inf <= kmax} c_k e^{2pi i k.x/L}
/// with c_k ~ complex Gaussian * (1 + |k|^2)^(-decay).
inline Form bandlimited_scalar(const KaehlerTorus& t, std::uint64_t seed,
                               std::uint64_t tag, int kmax, Real decay) {
  require(2 * kmax < t.n, "bandlimited_scalar: need kmax < N/2");
  std::vector<Complex> buf(static_cast<std::size_t>(t.ncells),
                           Complex(0.0, 0.0));
  for (int k3 = -kmax; k3 <= kmax; ++k3)
    for (int k2 = -kmax; k2 <= kmax; ++k2)
      for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k0 = -kmax; k0 <= kmax; ++k0) {
          RandomStream rs(seed, {tag, static_cast<std::uint64_t>(k0 + 128),
                                 static_cast<std::uint64_t>(k1 + 128),
                                 static_cast<std::uint64_t>(k2 + 128),
                                 static_cast<std::uint64_t>(k3 + 128)});
          const Real k2norm = Real(k0) * k0 + Real(k1) * k1 + Real(k2) * k2 +
                              Real(k3) * k3;
          const Complex c =
              rs.gaussian_complex() * std::pow(1.0 + k2norm, -decay);
          const int i0 = (k0 + t.n) % t.n;
          const int i1 = (k1 + t.n) % t.n;
          const int i2 = (k2 + t.n) % t.n;
          const int i3 = (k3 + t.n) % t.n;
          buf[t.cell(i0, i1, i2, i3)] = c;
        }
  fft4_inplace(t, buf.data(), FFTW_BACKWARD);
  Form out(t, 0, 1);
  for (std::int64_t c = 0; c < t.ncells; ++c)
    out.at(c, 0)[0] = Complex(buf[c].real(), 0.0);
  return out;
}

}  // namespace vortexlab
