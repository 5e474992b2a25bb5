#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vortexlab {

using Real = double;
using Complex = std::complex<double>;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;
inline constexpr Real kTwoPi = 2.0 * kPi;
inline constexpr Real kFourPi = 4.0 * kPi;
inline constexpr Real kEightPiSq = 8.0 * kPi * kPi;

/// Throws std::invalid_argument with `msg` unless `cond` holds. Used for
/// all documented precondition failures so callers can rely on the type.
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Throws std::runtime_error with `msg` unless `cond` holds. Used for
/// failures detected mid-computation (divergence, non-convergence).
inline void ensure(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

// ---------------------------------------------------------------------------
// Deterministic random streams.
//
// All stochastic components derive their draws from splitmix64 streams keyed
// by (seed, stream ids). The stream for a given key is independent of thread
// count and of how many draws other streams consumed, which makes sampled
// estimates and synthesized fields bitwise reproducible.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Mixes a list of 64-bit keys into a single stream state.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = 0x6a09e667f3bcc909ull;
  for (std::uint64_t k : keys) {
    s ^= k + 0x9e3779b97f4a7c15ull + (s << 12) + (s >> 31);
    splitmix64_next(s);
  }
  return s;
}

/// Deterministic random stream with uniform and Gaussian draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {
    // Warm up so that small seeds decorrelate.
    splitmix64_next(state_);
    splitmix64_next(state_);
  }
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
      : RandomStream(mix_keys({seed, mix_keys(keys)})) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  /// Uniform in [0, 1).
  Real uniform() {
    return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (deterministic, no cached spare).
  Real gaussian() {
    Real u1 = uniform();
    Real u2 = uniform();
    u1 = std::max(u1, 0x1.0p-60);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  Complex gaussian_complex() {
    Real u1 = uniform();
    Real u2 = uniform();
    u1 = std::max(u1, 0x1.0p-60);
    Real r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Worker configuration. Default is one thread; the CLI and the environment
// variable VORTEXLAB_THREADS can raise it. Reductions shard work into a
// fixed number of chunks independent of the thread count so that floating
// point sums are identical for any setting.
// ---------------------------------------------------------------------------

inline int& thread_count_ref() {
  static int count = 1;
  return count;
}

inline void set_thread_count(int n) {
  require(n >= 1, "thread count must be >= 1");
  thread_count_ref() = n;
}

inline int thread_count() { return thread_count_ref(); }

/// Runs fn(shard, begin, end) over `nshards` contiguous chunks of [0, n).
/// The chunk boundaries depend only on (n, nshards), never on thread count.
template <class Fn>
void parallel_shards(std::int64_t n, int nshards, Fn&& fn) {
  if (n <= 0) return;
  nshards = std::max(1, nshards);
  const int threads = std::min(thread_count(), nshards);
  auto run_shard = [&](int s) {
    const std::int64_t lo = n * s / nshards;
    const std::int64_t hi = n * (s + 1) / nshards;
    if (lo < hi) fn(s, lo, hi);
  };
  if (threads <= 1) {
    for (int s = 0; s < nshards; ++s) run_shard(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int s = t; s < nshards; s += threads) run_shard(s);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Dense complex matrix helpers on raw row-major storage. These are the hot
// per-point operations; Eigen is reserved for eigenvalue-based functions.
// ---------------------------------------------------------------------------

inline void mat_zero(int n, Complex* a) {
  for (int i = 0; i < n * n; ++i) a[i] = Complex(0.0, 0.0);
}

inline void mat_identity(int n, Complex* a) {
  mat_zero(n, a);
  for (int i = 0; i < n; ++i) a[i * n + i] = Complex(1.0, 0.0);
}

/// c = a * b for n x n row-major matrices (c must not alias a or b).
inline void mat_mul(int n, const Complex* a, const Complex* b, Complex* c) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c[i * n + j] = Complex(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  }
}

inline void mat_adjoint(int n, const Complex* a, Complex* out) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[j * n + i] = std::conj(a[i * n + j]);
}

/// out = [a, b] = ab - ba.
inline void mat_commutator(int n, const Complex* a, const Complex* b,
                           Complex* out) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        s += a[i * n + k] * b[k * n + j] - b[i * n + k] * a[k * n + j];
      out[i * n + j] = s;
    }
}

inline Complex mat_trace(int n, const Complex* a) {
  Complex t(0.0, 0.0);
  for (int i = 0; i < n; ++i) t += a[i * n + i];
  return t;
}

inline Complex mat_trace_product(int n, const Complex* a, const Complex* b) {
  Complex t(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t += a[i * n + k] * b[k * n + i];
  return t;
}

/// Real pairing <a, b> = Re tr(a b^dagger) = Re sum a_ij conj(b_ij). This is
/// the inner product used on the compact Lie algebra and on every field
/// container (flat complex storage with the real part of the sesquilinear
/// form), so norms are computed uniformly everywhere.
inline Real mat_pair(int n, const Complex* a, const Complex* b) {
  Real s = 0.0;
  for (int i = 0; i < n * n; ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

/// In-place projection to the anti-Hermitian part, a <- (a - a^dagger)/2.
inline void mat_project_antihermitian(int n, Complex* a) {
  for (int i = 0; i < n; ++i) {
    a[i * n + i] = Complex(0.0, a[i * n + i].imag());
    for (int j = i + 1; j < n; ++j) {
      const Complex u = a[i * n + j];
      const Complex l = a[j * n + i];
      const Complex p = 0.5 * (u - std::conj(l));
      a[i * n + j] = p;
      a[j * n + i] = -std::conj(p);
    }
  }
}

/// Max |a - a^dagger| entry, a cheap anti-Hermiticity defect measure.
inline Real mat_antihermitian_defect(int n, const Complex* a) {
  Real m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m = std::max(m, std::abs(a[i * n + j] + std::conj(a[j * n + i])));
  return m;
}

/// Max deviation of a^dagger a from the identity.
inline Real mat_unitarity_defect(int n, const Complex* a) {
  Real m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        s += std::conj(a[k * n + i]) * a[k * n + j];
      if (i == j) s -= 1.0;
      m = std::max(m, std::abs(s));
    }
  return m;
}

}  // namespace vortexlab
