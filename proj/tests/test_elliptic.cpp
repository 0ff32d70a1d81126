#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ringlab/elliptic.hpp"
#include "ringlab/errors.hpp"

using namespace ringlab::elliptic;
using ringlab::DomainError;
using ringlab::InfeasibleTarget;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

TEST_CASE("complete integrals at m = 0 are pi/2") {
  CHECK(complete_K(EllipticParameter(0.0)) == doctest::Approx(kHalfPi).epsilon(1e-15));
  CHECK(complete_E(EllipticParameter(0.0)) == doctest::Approx(kHalfPi).epsilon(1e-15));
}

TEST_CASE("E(1) = 1") { CHECK(complete_E(EllipticParameter(1.0)) == 1.0); }

TEST_CASE("K and E at m = 0.5 match quadrature") {
  const EllipticParameter m(0.5);
  // frozen from the Gauss-Kronrod oracle
  CHECK(std::abs(complete_K(m) - 1.85407467730137) < 1e-13);
  CHECK(std::abs(complete_E(m) - 1.35064388104768) < 1e-13);
  CHECK(std::abs(complete_K(m) / oracle::quad_K(0.5) - 1.0) < 1e-14);
  CHECK(std::abs(complete_E(m) / oracle::quad_E(0.5) - 1.0) < 1e-14);
}

TEST_CASE("E K at m = 0.96 is near 3.168") {
  const EllipticParameter m(0.96);
  CHECK(std::abs(complete_E(m) * complete_K(m) - 3.168) < 0.01);
  CHECK(std::abs(complete_E(m) * complete_K(m) - oracle::quad_E(0.96) * oracle::quad_K(0.96)) < 1e-13);
}

TEST_CASE("K and E relative error against quadrature over a grid") {
  for (double m = 0.0; m < 0.9995; m += 0.037) {
    CAPTURE(m);
    const EllipticParameter p(m);
    CHECK(std::abs(complete_K(p) / oracle::quad_K(m) - 1.0) < 1e-14);
    CHECK(std::abs(complete_E(p) / oracle::quad_E(m) - 1.0) < 1e-14);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(EllipticParameter(-0.1), DomainError);
  CHECK_THROWS_AS(EllipticParameter(1.1), DomainError);
  CHECK_THROWS_AS(EllipticParameter(std::nan("")), DomainError);
  CHECK_THROWS_AS(complete_K(EllipticParameter(1.0)), DomainError);
  CHECK_THROWS_AS(jacobi(0.3, EllipticParameter(1.0)), DomainError);
  CHECK_THROWS_AS(EllipticParameter::from_complement(-1e-3), DomainError);
}

TEST_CASE("complement representation keeps m1 exact") {
  const auto p = EllipticParameter::from_complement(1e-30);
  CHECK(p.m() == 1.0);
  CHECK(p.complement() == 1e-30);
  // K ~ ln(4 / sqrt(m1)) as m1 -> 0
  CHECK(complete_K(p) == doctest::Approx(std::log(4.0 / std::sqrt(1e-30))).epsilon(1e-12));
}

TEST_CASE("jacobi at u = 1.2, m = 0.7 matches the ODE oracle") {
  const auto v = jacobi(1.2, EllipticParameter(0.7));
  const auto o = oracle::ode_jacobi(1.2, 0.7);
  CHECK(std::abs(v.sn - 0.867183293290239) < 1e-10);
  CHECK(std::abs(v.cn - 0.497989092087664) < 1e-10);
  CHECK(std::abs(v.dn - 0.688182530355724) < 1e-10);
  CHECK(std::abs(v.sn - o.sn) < 1e-10);
  CHECK(std::abs(v.cn - o.cn) < 1e-10);
  CHECK(std::abs(v.dn - o.dn) < 1e-10);
}

TEST_CASE("dn special values") {
  for (double u : {-3.0, 0.0, 0.7, 12.5}) CHECK(jacobi_dn(u, EllipticParameter(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  for (double m : {0.0, 0.3, 0.9, 0.999999}) CHECK(jacobi_dn(0.0, EllipticParameter(m)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(jacobi_sn(0.8, EllipticParameter(0.0)) == doctest::Approx(std::sin(0.8)).epsilon(1e-14));
  CHECK(jacobi_cn(0.8, EllipticParameter(0.0)) == doctest::Approx(std::cos(0.8)).epsilon(1e-14));
}

TEST_CASE("jacobi against the ODE oracle at random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu(0.0, 0.99);
  std::uniform_real_distribution<double> uu(-6.0, 6.0);
  for (int i = 0; i < 40; ++i) {
    const double m = mu(rng);
    const double u = uu(rng);
    CAPTURE(m);
    CAPTURE(u);
    const auto v = jacobi(u, EllipticParameter(m));
    const auto o = oracle::ode_jacobi(u, m);
    CHECK(std::abs(v.sn - o.sn) < 1e-12);
    CHECK(std::abs(v.cn - o.cn) < 1e-12);
    CHECK(std::abs(v.dn - o.dn) < 1e-12);
  }
}

TEST_CASE("Pythagorean identities over 1000 random points") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> mu(0.0, 1.0);
  std::uniform_real_distribution<double> uu(-50.0, 50.0);
  double worst_sc = 0.0;
  double worst_dn = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double m = mu(rng);
    const double u = uu(rng);
    const auto v = jacobi(u, EllipticParameter(m));
    worst_sc = std::max(worst_sc, std::abs(v.sn * v.sn + v.cn * v.cn - 1.0));
    worst_dn = std::max(worst_dn, std::abs(v.dn * v.dn + m * v.sn * v.sn - 1.0));
  }
  CHECK(worst_sc < 1e-12);
  CHECK(worst_dn < 1e-12);
}

TEST_CASE("dn has period 2K") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mu(0.0, 1.0);
  std::uniform_real_distribution<double> uu(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const EllipticParameter m(mu(rng));
    const double u = uu(rng);
    const double k = complete_K(m);
    CHECK(std::abs(jacobi_dn(u + 2.0 * k, m) - jacobi_dn(u, m)) < 1e-10);
  }
}

TEST_CASE("K increasing, E decreasing and E K increasing on m = 0, 0.01, ..., 0.99") {
  double k_prev = 0.0;
  double e_prev = 2.0;
  double g_prev = 0.0;
  for (int i = 0; i <= 99; ++i) {
    const EllipticParameter m(i / 100.0);
    const double k = complete_K(m);
    const double e = complete_E(m);
    CHECK(k > k_prev);
    CHECK(e < e_prev);
    CHECK(e * k > g_prev);
    k_prev = k;
    e_prev = e;
    g_prev = e * k;
  }
}

TEST_CASE("dn approaches sech as m -> 1") {
  double prev = 1.0;
  for (double m : {0.99, 0.999, 0.9999}) {
    const double gap = std::abs(jacobi_dn(1.0, EllipticParameter(m)) - 1.0 / std::cosh(1.0));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("invert_product examples") {
  SUBCASE("minimum maps to m = 0 exactly") {
    const auto p = invert_product(std::numbers::pi * std::numbers::pi / 4);
    CHECK(p.m() == 0.0);
    CHECK(p.complement() == 1.0);
  }
  SUBCASE("target pi") {
    const auto p = invert_product(std::numbers::pi);
    CHECK(std::abs(p.m() - 0.957095075319573) < 1e-12);  // bisection over quadrature
    CHECK(std::abs(p.m() - oracle::product_root(std::numbers::pi)) < 1e-12);
    CHECK(std::abs(complete_E(p) * complete_K(p) - std::numbers::pi) < 1e-10);
  }
  SUBCASE("below the minimum") {
    CHECK_THROWS_AS(invert_product(std::numbers::pi * std::numbers::pi / 4 - 0.01), InfeasibleTarget);
  }
}

TEST_CASE("invert_product residual below 1e-12 target across [pi^2/4, 50]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(kMinProduct, 50.0);
  std::vector<double> targets{kMinProduct, 2.5, 3.0, 10.0, 31.4, 50.0};
  for (int i = 0; i < 200; ++i) targets.push_back(dist(rng));
  for (double t : targets) {
    CAPTURE(t);
    const auto p = invert_product(t);
    CHECK(std::abs(complete_E(p) * complete_K(p) - t) <= 1e-12 * t);
  }
}
