#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "vortexlab/algebra.hpp"
#include "vortexlab/core.hpp"

using namespace vortexlab;

namespace {

std::vector<Complex> random_vec(int dim, std::uint64_t seed) {
  RandomStream rs(seed, {0x7e57u});
  std::vector<Complex> v(dim);
  for (auto& z : v) z = rs.gaussian_complex();
  return v;
}

std::vector<Complex> random_antihermitian(int n, std::uint64_t seed,
                                          Real scale = 1.0) {
  RandomStream rs(seed, {0x7e58u});
  std::vector<Complex> x(n * n);
  for (auto& z : x) z = scale * rs.gaussian_complex();
  mat_project_antihermitian(n, x.data());
  return x;
}

std::vector<Complex> random_unitary(const StructureGroup& g,
                                    std::uint64_t seed) {
  auto x = random_antihermitian(g.n, seed);
  std::vector<Complex> u(g.n * g.n);
  g.exp(x.data(), u.data());
  return u;
}

Real vec_max_diff(const std::vector<Complex>& a,
                  const std::vector<Complex>& b) {
  Real m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("algebra basis is orthonormal") {
  for (int n : {1, 2, 3}) {
    StructureGroup g(n);
    REQUIRE(static_cast<int>(g.basis.size()) == n * n);
    for (int a = 0; a < n * n; ++a) {
      REQUIRE(mat_antihermitian_defect(n, g.basis[a].data()) == 0.0);
      for (int b = 0; b < n * n; ++b) {
        const Real p = mat_pair(n, g.basis[a].data(), g.basis[b].data());
        REQUIRE(std::abs(p - (a == b ? 1.0 : 0.0)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("exp and log are mutually inverse on the group") {
  for (int n : {1, 2, 3}) {
    StructureGroup g(n);
    auto x = random_antihermitian(n, 17 + n, 0.5);
    std::vector<Complex> u(n * n), back(n * n);
    g.exp(x.data(), u.data());
    REQUIRE(mat_unitarity_defect(n, u.data()) <= 1e-12);
    g.log(u.data(), back.data());
    REQUIRE(vec_max_diff(x, back) <= 1e-10);

    // reunitarize restores a slightly perturbed unitary.
    std::vector<Complex> noisy = u;
    RandomStream rs(5, {static_cast<std::uint64_t>(n)});
    for (auto& z : noisy) z += 1e-8 * rs.gaussian_complex();
    g.reunitarize(noisy.data());
    REQUIRE(mat_unitarity_defect(n, noisy.data()) <= 1e-12);
    REQUIRE(vec_max_diff(noisy, u) <= 1e-7);
  }
}

TEST_CASE("moment map is Hermitian, quadratic, and matches its definition") {
  for (const char* desc : {"u1:3", "un:2:fund", "un:3:fund", "un:2:sym:3"}) {
    Representation rep = parse_representation(desc);
    const int n = rep.group_dim();
    auto phi = random_vec(rep.dim(), 23);
    std::vector<Complex> mu(n * n);
    rep.moment_map(phi.data(), mu.data());

    // Hermitian.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        REQUIRE(std::abs(mu[i * n + j] - std::conj(mu[j * n + i])) <= 1e-13);

    // Quadratic homogeneity mu(r phi) = r^2 mu(phi).
    std::vector<Complex> phi2(phi);
    for (auto& z : phi2) z *= 1.7;
    std::vector<Complex> mu2(n * n);
    rep.moment_map(phi2.data(), mu2.data());
    for (int e = 0; e < n * n; ++e)
      REQUIRE(std::abs(mu2[e] - 1.7 * 1.7 * mu[e]) <= 1e-12);

    // Against the definition mu_ij = <phi, rho_*(E_ji) phi> computed through
    // the independent complexified-application path.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<Complex> eji(n * n, Complex(0.0, 0.0));
        eji[j * n + i] = Complex(1.0, 0.0);
        std::vector<Complex> y(rep.dim(), Complex(0.0, 0.0));
        rep.apply_complexified(eji.data(), phi.data(), y.data());
        Complex s(0.0, 0.0);
        for (int a = 0; a < rep.dim(); ++a) s += std::conj(phi[a]) * y[a];
        REQUIRE(std::abs(mu[i * n + j] - s) <= 1e-12);
      }
  }
}

TEST_CASE("fundamental and charge moment maps have closed forms") {
  Representation fund = parse_representation("un:2:fund");
  auto phi = random_vec(2, 31);
  std::vector<Complex> mu(4);
  fund.moment_map(phi.data(), mu.data());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      REQUIRE(std::abs(mu[i * 2 + j] - phi[i] * std::conj(phi[j])) <= 1e-14);

  Representation u1 = parse_representation("u1:-2");
  auto psi = random_vec(1, 32);
  Complex m1;
  u1.moment_map(psi.data(), &m1);
  REQUIRE(std::abs(m1 - Complex(-2.0 * std::norm(psi[0]), 0.0)) <= 1e-14);
}

TEST_CASE("representation matrices are unitary homomorphisms") {
  for (const char* desc : {"un:2:fund", "un:2:sym:2", "un:2:sym:3"}) {
    Representation rep = parse_representation(desc);
    const int d = rep.dim();
    auto s1 = random_unitary(rep.group(), 41);
    auto s2 = random_unitary(rep.group(), 42);
    std::vector<Complex> r1(d * d), r2(d * d), r12(d * d), prod(d * d),
        s12(rep.group_dim() * rep.group_dim());
    rep.rho_of(s1.data(), r1.data());
    rep.rho_of(s2.data(), r2.data());
    REQUIRE(mat_unitarity_defect(d, r1.data()) <= 1e-12);
    mat_mul(rep.group_dim(), s1.data(), s2.data(), s12.data());
    rep.rho_of(s12.data(), r12.data());
    mat_mul(d, r1.data(), r2.data(), prod.data());
    REQUIRE(vec_max_diff(r12, prod) <= 1e-12);
  }
}

TEST_CASE("moment map is Ad-equivariant under the group action") {
  for (const char* desc : {"un:2:fund", "un:2:sym:2", "un:3:fund"}) {
    Representation rep = parse_representation(desc);
    const int n = rep.group_dim();
    const int d = rep.dim();
    auto phi = random_vec(d, 51);
    auto s = random_unitary(rep.group(), 52);
    std::vector<Complex> rs(d * d), sphi(d, Complex(0.0, 0.0));
    rep.rho_of(s.data(), rs.data());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sphi[i] += rs[i * d + j] * phi[j];
    std::vector<Complex> mu(n * n), mus(n * n), sdag(n * n), tmp(n * n),
        smu(n * n);
    rep.moment_map(phi.data(), mu.data());
    rep.moment_map(sphi.data(), mus.data());
    mat_adjoint(n, s.data(), sdag.data());
    mat_mul(n, mu.data(), sdag.data(), tmp.data());
    mat_mul(n, s.data(), tmp.data(), smu.data());
    // mu(rho(s) phi) = s mu(phi) s^dagger
    REQUIRE(vec_max_diff(mus, smu) <= 1e-12);
  }
}

TEST_CASE("algebra action is the derivative of the group action") {
  for (const char* desc : {"u1:2", "un:2:fund", "un:2:sym:3"}) {
    Representation rep = parse_representation(desc);
    const int n = rep.group_dim();
    const int d = rep.dim();
    auto x = random_antihermitian(n, 61);
    auto phi = random_vec(d, 62);
    const Real t = 1e-5;
    std::vector<Complex> xt(x), up(n * n), un(n * n), rup(d * d), run(d * d);
    for (auto& z : xt) z *= t;
    rep.group().exp(xt.data(), up.data());
    for (auto& z : xt) z *= -1.0;
    rep.group().exp(xt.data(), un.data());
    rep.rho_of(up.data(), rup.data());
    rep.rho_of(un.data(), run.data());
    std::vector<Complex> fd(d, Complex(0.0, 0.0)),
        exact(d, Complex(0.0, 0.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        fd[i] += (rup[i * d + j] - run[i * d + j]) * phi[j] / (2.0 * t);
    rep.apply_algebra(x.data(), phi.data(), exact.data());
    REQUIRE(vec_max_diff(fd, exact) <= 1e-8);
  }
}

TEST_CASE("algebra action is anti-Hermitian and the center weight is exact") {
  for (const char* desc : {"u1:4", "un:2:fund", "un:2:sym:2", "un:3:fund"}) {
    Representation rep = parse_representation(desc);
    const int n = rep.group_dim();
    const int d = rep.dim();
    for (int b = 0; b < n * n; ++b)
      REQUIRE(mat_antihermitian_defect(d, rep.rho_basis(b).data()) <= 1e-13);

    // rho_*(i c I) = i c w identity on V.
    std::vector<Complex> icI(n * n, Complex(0.0, 0.0));
    const Real c = 0.37;
    for (int i = 0; i < n; ++i) icI[i * n + i] = Complex(0.0, c);
    auto phi = random_vec(d, 71);
    std::vector<Complex> y(d, Complex(0.0, 0.0));
    rep.apply_algebra(icI.data(), phi.data(), y.data());
    for (int i = 0; i < d; ++i)
      REQUIRE(std::abs(y[i] - Complex(0.0, c * rep.center_weight()) *
                                  phi[i]) <= 1e-13);
  }
}

TEST_CASE("moment pairing is the adjoint of the infinitesimal action") {
  for (const char* desc : {"u1:3", "un:2:fund", "un:2:sym:2"}) {
    Representation rep = parse_representation(desc);
    const int n = rep.group_dim();
    const int d = rep.dim();
    auto w = random_vec(d, 81);
    auto v = random_vec(d, 82);
    std::vector<Complex> nu(n * n);
    rep.moment_pairing(w.data(), v.data(), nu.data());
    REQUIRE(mat_antihermitian_defect(n, nu.data()) <= 1e-12);
    auto x = random_antihermitian(n, 83);
    std::vector<Complex> y(d, Complex(0.0, 0.0));
    rep.apply_algebra(x.data(), v.data(), y.data());
    Real rhs = 0.0;
    for (int i = 0; i < d; ++i) rhs += (std::conj(w[i]) * y[i]).real();
    const Real lhs = mat_pair(n, nu.data(), x.data());
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("representation descriptor parsing") {
  REQUIRE(parse_representation("u1:5").charge() == 5);
  REQUIRE(parse_representation("un:3:fund").dim() == 3);
  REQUIRE(parse_representation("un:2:sym:4").dim() == 5);
  REQUIRE(parse_representation("un:2:sym:4").center_weight() == 4);
  REQUIRE_THROWS_AS(parse_representation("su:2:fund"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_representation("u1:x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_representation("un:2:adj"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_representation(""), std::invalid_argument);
}

TEST_CASE("admissibility verdicts") {
  // Zero charge: the center acts trivially.
  REQUIRE_FALSE(admissibility_check(parse_representation("u1:0")).admissible);
  REQUIRE(admissibility_check(parse_representation("u1:2")).admissible);

  // Fundamental of U(2): |mu_ss|^2 = 1/2 on the unit sphere.
  auto fund = admissibility_check(parse_representation("un:2:fund"));
  REQUIRE(fund.admissible);
  REQUIRE(fund.min_semisimple_moment ==
          Catch::Approx(std::sqrt(0.5)).epsilon(1e-6));

  // Second symmetric power of U(2): the zero-weight vector e1 e2 has
  // vanishing traceless moment, so the representation is rejected.
  auto sym2 = admissibility_check(parse_representation("un:2:sym:2"));
  REQUIRE_FALSE(sym2.admissible);
  REQUIRE(sym2.min_semisimple_moment <= 1e-6);
}

TEST_CASE("bound constant estimates") {
  // U(2) fundamental, tau = 0: |mu(phi0)| = 1 on the sphere, so the exact
  // supremum of the scanned ratio is 1.
  auto fund = estimate_bound_constant(parse_representation("un:2:fund"), 0.0,
                                      1, 2000);
  REQUIRE(fund.max_ratio == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(fund.c_hat == Catch::Approx(1.25).epsilon(1e-10));

  // U(1) charge 1 with negative stability parameter: ratio r^2/(r^2 + t)
  // increases to 1, never diverges.
  auto u1 = estimate_bound_constant(parse_representation("u1:1"), -1.0, 1,
                                    500);
  REQUIRE(u1.max_ratio < 1.0);
  REQUIRE(u1.max_ratio > 0.95);

  // Positive stability parameter: |r^2 q - t| vanishes on a shell; the scan
  // must detect the divergence and throw.
  REQUIRE_THROWS_AS(
      estimate_bound_constant(parse_representation("u1:1"), 1.0, 1, 100),
      std::runtime_error);
}
