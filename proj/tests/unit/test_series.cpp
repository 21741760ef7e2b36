#include <random>

#include "doctest.h"
#include "clausenlab/series.hpp"

using namespace clausenlab;
using S = MultiSeries<Rational>;

namespace {

S random_series(std::mt19937_64& rng, S::Exponents tr, bool unit_constant) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), keep(0, 2);
  S s({"x", "y", "z"}, tr);
  for (int a = 0; a <= tr[0]; ++a)
    for (int b = 0; b <= tr[1]; ++b)
      for (int c = 0; c <= tr[2]; ++c)
        if (keep(rng) == 0) s.set({a, b, c}, make_rational(num(rng), den(rng)));
  if (unit_constant) s.set({0, 0, 0}, Rational(1));
  return s;
}

// Schoolbook product oracle.
S schoolbook(const S& a, const S& b) {
  S::Exponents tr;
  for (int k = 0; k < 3; ++k) tr[k] = std::min(a.truncation()[k], b.truncation()[k]);
  S r(a.vars(), tr);
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) r.add_to({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return r;
}

S univariate(std::vector<Rational> c, int trunc) {
  S s({"z"}, {trunc, 0, 0});
  for (std::size_t k = 0; k < c.size(); ++k) s.set({static_cast<int>(k), 0, 0}, c[k]);
  return s;
}

}  // namespace

TEST_CASE("series products") {
  const S a = univariate({1, 1}, 6), b = univariate({1, -1}, 6);
  CHECK(a * b == univariate({1, 0, -1}, 6));

  std::vector<Rational> bessel;
  for (unsigned n = 0; n <= 5; ++n) bessel.push_back(Rational(1, factorial(n) * factorial(n)));
  const S j = univariate(bessel, 5);
  const S sq = j * j;
  const std::vector<Rational> expect{1, 2, make_rational(3, 2), make_rational(5, 9), make_rational(35, 288),
                                     make_rational(7, 400)};
  for (int n = 0; n <= 5; ++n) CHECK(sq.coeff({n, 0, 0}) == expect[static_cast<std::size_t>(n)]);

  std::mt19937_64 rng(2);
  for (int s = 0; s < 30; ++s) {
    const S p = random_series(rng, {3, 2, 4}, false), q = random_series(rng, {4, 2, 3}, false),
            r = random_series(rng, {3, 3, 3}, false);
    REQUIRE(p * q == schoolbook(p, q));
    REQUIRE(p * q == q * p);
    REQUIRE((p * q) * r == p * (q * r));
  }
  CHECK_THROWS(univariate({1}, 3) * S({"x"}, {3, 0, 0}));
}

TEST_CASE("inverse square root") {
  CHECK(series_inv_sqrt(univariate({1}, 8)) == univariate({1}, 8));

  std::vector<Rational> central;
  for (unsigned n = 0; n <= 15; ++n) central.push_back(Rational(binomial(2 * n, n)));
  CHECK(series_inv_sqrt(univariate({1, -4}, 15)) == univariate(central, 15));

  CHECK(series_inv_sqrt(univariate({1, -2, 1}, 10)) == univariate(std::vector<Rational>(11, Rational(1)), 10));
  CHECK(series_inv_sqrt(univariate({4, 1}, 3)).coeff({0, 0, 0}) == make_rational(1, 2));
  CHECK_THROWS_AS(series_inv_sqrt(univariate({0, 1}, 3)), MathError);
  CHECK_THROWS_AS(series_inv_sqrt(univariate({2, 1}, 3)), MathError);

  // Independent oracle for one variable: T_d = −(1/2d) Σ_{j≥1} (2d − j) s_j T_{d−j} when s_0 = 1.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> s{1};
    for (int k = 1; k <= 12; ++k) s.push_back(make_rational(num(rng), den(rng)));
    std::vector<Rational> T{1};
    for (int d = 1; d <= 12; ++d) {
      Rational acc(0);
      for (int j = 1; j <= d; ++j) acc += (2 * d - j) * s[static_cast<std::size_t>(j)] * T[static_cast<std::size_t>(d - j)];
      T.push_back(-acc / (2 * d));
    }
    REQUIRE(series_inv_sqrt(univariate(s, 12)) == univariate(T, 12));
  }
}

TEST_CASE("inverse square root on random trivariate series") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const S s = random_series(rng, {3, 2, 3}, true);
    const S inv = series_inv_sqrt(s);
    REQUIRE((inv * inv * s).truncated(s.truncation()) == s.constant(Rational(1)));
    // Truncation monotonicity.
    const S::Exponents lower{2, 1, 2};
    REQUIRE(series_inv_sqrt(s.truncated(lower)) == inv.truncated(lower));
  }
}

TEST_CASE("laurent operator action") {
  const LaurentSeries<Rational> inv_t("u", 1, {Rational(1)}, 6);
  const DiffOp ddt{{{Rational(1), 0, 1}}};
  const auto d = laurent_apply_operator(ddt, inv_t);
  CHECK(d.low() == 2);
  CHECK(d.coeff(2) == -1);
  const DiffOp t3d2{{{Rational(1), 3, 2}}};
  const auto e = laurent_apply_operator(t3d2, inv_t);
  CHECK(e.coeff(0) == 2);
  CHECK(e.low() == 0);
  try {
    laurent_apply_operator(t3d2, inv_t, 7);
    FAIL("expected truncation underflow");
  } catch (const TruncationUnderflow& err) {
    CHECK(err.required_truncation() == 8);
  }
}
