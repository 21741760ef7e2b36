#include <random>

#include "doctest.h"
#include "clausenlab/weyl.hpp"

using namespace clausenlab;
using namespace clausenlab::weyl;
using P = Poly<Rational>;

namespace {

// p(ρ + s) by Horner.
P shift_arg(const P& p, int s) {
  P r;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) r = r * P{Rational(s), Rational(1)} + P(p.coeffs()[k]);
  return r;
}

// Action of a∘b on t^ρ from the two separate actions.
std::map<int, P> compose_actions(const std::map<int, P>& a, const std::map<int, P>& b) {
  std::map<int, P> out;
  for (const auto& [sb, pb] : b)
    for (const auto& [sa, pa] : a) out[sa + sb] += shift_arg(pa, sb) * pb;
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

WeylOp random_op(std::mt19937_64& rng, DConvention conv) {
  std::uniform_int_distribution<int> e(0, 3), c(-4, 4);
  WeylOp op(conv);
  for (int k = 0; k < 4; ++k) op.add_term(e(rng), e(rng), Rational(c(rng)));
  return op;
}

}  // namespace

TEST_CASE("weyl products") {
  const WeylOp t = WeylOp::t(), D = WeylOp::D();
  CHECK(D * t == t * D + t);
  CHECK(D * D * t == t * D * D + Rational(2) * (t * D) + t);
  const WeylOp Dt = D * t;
  const WeylOp expect = WeylOp::monomial(2, 2, 1) + WeylOp::monomial(2, 1, 3) + WeylOp::monomial(2, 0, 2);
  CHECK(Dt.pow(2) == expect);
  auto act = Dt.pow(2).act_on_power();
  REQUIRE(act.size() == 1);
  // Dt = t(D + 1), so (Dt)² t^ρ = (ρ + 1)(ρ + 2) t^{ρ+2}.
  CHECK(act.at(2) == P{2, 3, 1});

  const WeylOp td = WeylOp::t(DConvention::DDt), dd = WeylOp::D(DConvention::DDt);
  CHECK(dd * td == td * dd + WeylOp::constant(1, DConvention::DDt));
}

TEST_CASE("weyl associativity and action oracle") {
  std::mt19937_64 rng(4);
  for (auto conv : {DConvention::Euler, DConvention::DDt}) {
    for (int s = 0; s < 60; ++s) {
      const WeylOp a = random_op(rng, conv), b = random_op(rng, conv), c = random_op(rng, conv);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE((a * b).act_on_power() == compose_actions(a.act_on_power(), b.act_on_power()));
    }
  }
  // [D, t] = t identically.
  const WeylOp t = WeylOp::t(), D = WeylOp::D();
  CHECK(D * t - t * D == t);
}

TEST_CASE("derivative form matches the action") {
  std::mt19937_64 rng(8);
  for (int s = 0; s < 40; ++s) {
    const WeylOp a = random_op(rng, DConvention::Euler);
    WeylOp back(DConvention::DDt);
    auto form = a.to_derivative_form();
    for (std::size_t b = 0; b < form.size(); ++b)
      for (std::size_t k = 0; k < form[b].coeffs().size(); ++k)
        back.add_term(static_cast<int>(k), static_cast<int>(b), form[b].coeffs()[k]);
    REQUIRE(back.act_on_power() == a.act_on_power());
  }
}

TEST_CASE("right determinant") {
  const WeylOp D = WeylOp::D();
  OpMatrix scalar{{WeylOp::constant(2), WeylOp::constant(3)}, {WeylOp::constant(5), WeylOp::constant(7)}};
  CHECK(right_determinant(scalar) == WeylOp::constant(-1));
  CHECK(right_determinant(scalar, DetConvention::LastRowLeft) == WeylOp::constant(-1));
  CHECK(right_determinant(OpMatrix{{D}}) == D);

  const Rational a = make_rational(2, 3), c = make_rational(-5, 2);
  QMatrix m{{a, c}, {1, a}};
  const DNMatrix dn(m);
  const WeylOp Dt = D * WeylOp::t();
  const WeylOp expect = (D - a * Dt) * (D - a * Dt) - c * Dt.pow(2);
  CHECK(right_determinant(dn_operator_matrix(dn)) == expect);
}

TEST_CASE("dn_build examples") {
  for (int N = 1; N <= 4; ++N) CHECK(dn_build(DNMatrix::zero(N)) == WeylOp::D().pow(static_cast<unsigned>(N)));
  const DNMatrix ones(QMatrix{{1, 1}, {1, 1}});
  const WeylOp D = WeylOp::D(), Dt = D * WeylOp::t();
  const WeylOp det = (D - Dt) * (D - Dt) - Dt.pow(2);
  CHECK(D * dn_build(ones) == det);
  CHECK(dn_build(DNMatrix::random(3, 1)).d_degree() == 3);
  CHECK_THROWS_AS(DNMatrix(QMatrix{{1, 2}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(DNMatrix(QMatrix{{1, 2}, {1, 3}}), std::invalid_argument);
  CHECK_FALSE(left_divide_by_D(WeylOp::t()).has_value());
}

TEST_CASE("indicial polynomial and singular locus") {
  CHECK(dn_indicial_at_zero(WeylOp::D().pow(3)) == P::monomial(3));
  CHECK(dn_indicial_at_zero(WeylOp::t() * WeylOp::D()).is_zero());

  const auto zero_v = dn_singular_locus(dn_build(DNMatrix::zero(2)), DNMatrix::zero(2));
  CHECK(zero_v.det_one_minus_tA == P{1});
  CHECK(zero_v.reduced.degree() == 0);
  CHECK(zero_v.proportional);

  int generic = 0;
  for (int N = 1; N <= 4; ++N)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const DNMatrix a = DNMatrix::random(N, 100 * N + seed);
      const WeylOp op = dn_build(a);
      REQUIRE(op.d_degree() == N);
      REQUIRE(is_scaled_power(dn_indicial_at_zero(op), N));
      const auto v = dn_singular_locus(op, a);
      REQUIRE(v.proportional);
      generic += v.det_squarefree;
      // Both determinant conventions agree up to the D convention invariants.
      const WeylOp alt = dn_build(a, DetConvention::LastRowLeft);
      REQUIRE(is_scaled_power(dn_indicial_at_zero(alt), N));
    }
  CHECK(generic >= 15);

  // An eigenvalue 0 lowers the degree of det(I − tA).
  QMatrix sing{{0, 0}, {1, 0}};
  const DNMatrix s(sing);
  const auto v = dn_singular_locus(dn_build(s), s);
  CHECK(v.det_one_minus_tA.degree() < 2);
  CHECK(v.proportional);
}
