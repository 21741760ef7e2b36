#include "doctest.h"
#include "clausenlab/dtwo.hpp"

using namespace clausenlab;
using namespace clausenlab::dtwo;
using P = Poly<Rational>;

TEST_CASE("D2 recurrence") {
  const D2Params p{make_rational(3, 2), make_rational(-2, 5)};
  const auto s = d2_coefficients(p, 20);
  CHECK(s.b[0] == P{1});
  CHECK(s.b[1] == P{0, 1 / p.B});
  CHECK(s.b[2] == P{-p.B, -2 * p.A, 1}.scaled(1 / (4 * p.B * p.B)));
  for (int n = 0; n <= 20; ++n) {
    Integer f = factorial(static_cast<unsigned>(n));
    Rational bn(1);
    for (int k = 0; k < n; ++k) bn *= p.B;
    REQUIRE(s.b[static_cast<std::size_t>(n)].degree() == n);
    REQUIRE(s.b[static_cast<std::size_t>(n)].leading() == 1 / (bn * Rational(f * f)));
  }
  const auto res = d2_residual(s);
  CHECK(res.size() == 20);
  for (const auto& r : res) CHECK(r.is_zero());
  CHECK_THROWS_AS(d2_coefficients({Rational(1), Rational(0)}, 3), MathError);
}

TEST_CASE("kernel constants") {
  const D2Params p{Rational(1), Rational(2)};
  const auto c = d2_kernel_constants(p, 4);
  CHECK(c.coeff({0, 0, 0}) == 1);
  for (const auto& [e, v] : c.terms()) REQUIRE(c.coeff({e[1], e[0], e[2]}) == v);
  const auto rep = d2_check_linearization(p, 5);
  CHECK(rep.checked_pairs == 36);
  CHECK(rep.ok());
  CHECK(d2_check_linearization({make_rational(-3), make_rational(5, 7)}, 4).ok());
}

TEST_CASE("discriminant identity") {
  const D2Params p{make_rational(2, 3), make_rational(-7, 4)};
  auto [lhs, rhs] = d2_discriminant_at(p, 0, 0, 0);
  CHECK(lhs == p.B * p.B);
  CHECK(rhs == lhs);
  CHECK(d2_P_symbolic({0, 1}) == d2_discriminant_symbolic({0, 1}));
  const auto rep = d2_check_discriminant_identity(p, 50, 3);
  CHECK(rep.samples == 50);
  CHECK(rep.ok());
}

TEST_CASE("duplication kernel") {
  const auto rep = d2_duplication_kernel({Rational(1), Rational(2)}, 6);
  CHECK(rep.specialization_ok);
  CHECK(rep.diagonal_ok);
  CHECK(rep.annihilation_xz_ok);
  CHECK(rep.annihilation_xy_ok);
  CHECK(rep.kernel.coeff({0, 0, 1}) == 1);
  CHECK(rep.kernel.coeff({0, 1, 2}) == 1);
  CHECK(rep.kernel.coeff({0, 2, 3}) == 1);
  CHECK(rep.kernel.coeff({0, 0, 0}) == 0);
}

TEST_CASE("Clausen product and solver") {
  const auto rep = clausen_product_check(100);
  CHECK(rep.identity_holds);
  const std::vector<Rational> expect{1, 2, make_rational(3, 2), make_rational(5, 9), make_rational(35, 288),
                                     make_rational(7, 400)};
  for (std::size_t n = 0; n < expect.size(); ++n) CHECK(rep.square[n] == expect[n]);

  const auto a = clausen_inductive_solver(1, 1, 50);
  for (unsigned n = 0; n <= 50; ++n) REQUIRE(a[n] == Rational(1, factorial(n) * factorial(n)));
  CHECK(a[2] == make_rational(1, 4));
  const auto zero = clausen_inductive_solver(1, 0, 20);
  for (std::size_t n = 1; n < zero.size(); ++n) CHECK(zero[n] == 0);

  // Squaring the solver output reproduces Σ C(2n,n) a_n zⁿ.
  const auto b = clausen_inductive_solver(1, make_rational(-2, 3), 30);
  for (unsigned n = 0; n <= 30; ++n) {
    Rational sq(0);
    for (unsigned k = 0; k <= n; ++k) sq += b[k] * b[n - k];
    REQUIRE(sq == Rational(binomial(2 * n, n)) * b[n]);
  }
}

TEST_CASE("degenerate Bessel") {
  const auto rep = verify_bessel_degenerate(20);
  CHECK(rep.residual.size() == 21);
  CHECK(rep.ok());
  // λ = 0 part: 𝓛 t⁻¹ = 0.
  const LaurentSeries<Rational> inv_t("u", 1, {Rational(1)}, 4);
  CHECK(laurent_apply_operator(d2_operator({0, 0}), inv_t).is_zero());
}
