#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "clausenlab/spectral.hpp"

using namespace clausenlab;
using namespace clausenlab::spectral;

namespace {

int brute_roots(long p) {
  int c = 0;
  for (long x = 0; x < p; ++x)
    if ((x * x % p * x - 4 * x - 1) % p == 0) ++c;
  return c;
}

// Composition of averages, built from hecke_average on the inner operator.
Rational composed(long q1, long q2, const Rational& x) {
  Rational s(0);
  for (long k = 0; k < q1; ++k) s += hecke_average(q2, (x + k) / q1);
  return s;
}

}  // namespace

TEST_CASE("step function and Legendre symbol") {
  CHECK(StepFunction5::value(make_rational(0, 1)) == 0);
  CHECK(StepFunction5::value(make_rational(1, 5)) == 1);
  CHECK(StepFunction5::value(make_rational(3, 10)) == 1);
  CHECK(StepFunction5::value(make_rational(3, 5)) == -1);
  CHECK(StepFunction5::value(make_rational(-1, 10)) == 0);
  CHECK(StepFunction5::value(make_rational(13, 5)) == -1);
  CHECK(StepFunction5::is_breakpoint(make_rational(2, 5)));
  CHECK_FALSE(StepFunction5::is_breakpoint(make_rational(2, 7)));
  CHECK(legendre5(2) == -1);
  CHECK(legendre5(3) == -1);
  CHECK(legendre5(4) == 1);
  CHECK(legendre5(11) == 1);
  CHECK(legendre5(10) == 0);
}

TEST_CASE("circle Hecke eigenvalues") {
  for (long q : {2L, 3L, 7L, 11L}) {
    const auto r = circle_hecke_check(q, 10000, 17);
    CHECK(r.ok());
    CHECK(r.samples == 10000);
    CHECK(r.eigenvalue == legendre5(q));
  }
  CHECK_THROWS(circle_hecke_check(5));
  CHECK_THROWS(circle_hecke_check(1));
}

TEST_CASE("circle averages compose multiplicatively") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const long b = std::uniform_int_distribution<long>(2, 500)(rng);
    const Rational x = make_rational(std::uniform_int_distribution<long>(0, b - 1)(rng), b);
    CHECK(composed(2, 3, x) == hecke_average(6, x));
    CHECK(composed(3, 7, x) == hecke_average(21, x));
  }
}

TEST_CASE("cubic a_p against exhaustive root counts") {
  for (long p = 2; p < 3000; ++p) {
    if (!is_prime(p)) continue;
    CHECK(cubic_root_count(p) == brute_roots(p));
    if (p != 229) CHECK(cubic_ap(p) == brute_roots(p) - 1);
  }
  CHECK(cubic_ap(229) == 1);
  CHECK(cubic_ap(2) == 0);
  CHECK(cubic_ap(3) == -1);
  CHECK_THROWS(cubic_ap(15));
}

TEST_CASE("Hecke coefficients are multiplicative") {
  const auto a = hecke_coefficients(3000);
  CHECK(a[1] == 1);
  for (long m = 1; m <= 54; ++m)
    for (long n = 1; n <= 54; ++n)
      if (std::gcd(m, n) == 1) CHECK(a[m * n] == a[m] * a[n]);
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
    CHECK(a[p * p] == a[p] * a[p] - chi229(p));
    CHECK(a[p * p * p] == a[p] * a[p * p] - chi229(p) * a[p]);
  }
  CHECK(chi229(229) == 0);
  CHECK(chi229(1) == 1);
  for (long n = 1; n <= 3000; ++n) {
    long d = 0;
    for (long k = 1; k <= n; ++k) d += n % k == 0;
    CHECK(std::abs(a[n]) <= d);
  }
}

TEST_CASE("K0 matches the reference Bessel function") {
  for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 2.5, 5.0, 20.0, 45.0, 80.0}) {
    const double ref = boost::math::cyl_bessel_k(0, x);
    CHECK(std::abs(k0_integral(x) - ref) <= 1e-10 * ref);
    CHECK(std::abs(k0_series(x) - ref) <= 1e-12 * ref);
  }
  CHECK_THROWS(k0_integral(0.0));
}

TEST_CASE("Maass functional equation") {
  for (double y : {0.05, 0.066, 0.1}) {
    const auto r = functional_equation_check(y);
    INFO("y = " << y << " rel " << r.relative_difference);
    CHECK(r.ok());
    CHECK(r.tail < 1e-12);
  }
}

TEST_CASE("Maass tail bound is honest") {
  for (double y : {0.03, 0.08, 0.2}) {
    const long N = maass_terms_needed(y, 1e-9);
    const auto a = hecke_coefficients(2 * N);
    const double m1 = maass_value(y, N, a);
    const double m2 = maass_value(y, 2 * N, a);
    CHECK(std::abs(m2 - m1) <= maass_tail_bound(y, N));
  }
}

TEST_CASE("Sym2 Euler factor") {
  const double pi = std::acos(-1.0);
  for (double theta : {0.3, 1.1, 2.9}) {
    const auto f = sym2_euler_factor(std::polar(std::sqrt(2.0), theta), 2);
    for (const auto& r : f.roots) CHECK(std::abs(std::abs(r) - 2.0) < 1e-12);
    // Coefficients against the expanded product evaluated at a point.
    const std::complex<double> T(0.3, -0.2);
    std::complex<double> lhs = 1.0, rhs = 0.0;
    for (const auto& r : f.roots) lhs *= 1.0 - r * T;
    for (int k = 3; k >= 0; --k) rhs = rhs * T + f.coefficients[static_cast<std::size_t>(k)];
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  (void)pi;
  CHECK_THROWS(sym2_euler_factor(0.0, 2));
}

TEST_CASE("Sonine-Gegenbauer") {
  for (double x : {0.0, 0.5, 1.0, 3.3, 7.0, 12.0}) CHECK(std::abs(bessel_j0(x) - boost::math::cyl_bessel_j(0, x)) < 1e-12);
  for (int i = 1; i <= 10; ++i)
    for (int j = i; j <= 10; ++j) {
      const auto r = sonine_gegenbauer_check(0.5 * i, 0.5 * j);
      CHECK(r.error < 1e-10);
      CHECK(r.refinement_errors[0] >= r.refinement_errors[2]);
    }
  CHECK_THROWS(sonine_gegenbauer_check(2.0, 1.0));
  CHECK_THROWS(sonine_gegenbauer_check(0.0, 1.0));
}
