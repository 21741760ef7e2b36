#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "clausenlab/json_io.hpp"
#include "clausenlab/matrix.hpp"

using namespace clausenlab;

namespace {

CycloNum random_cyclo(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  CycloNum::Coeffs c;
  for (auto& x : c) x = make_rational(num(rng), den(rng));
  return CycloNum(c);
}

// Roots of a monic complex polynomial by Durand-Kerner.
std::vector<std::complex<double>> numeric_roots(const std::vector<double>& asc) {
  const std::size_t d = asc.size() - 1;
  std::vector<std::complex<double>> z(d);
  for (std::size_t k = 0; k < d; ++k) z[k] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(k));
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 0;
    for (std::size_t k = asc.size(); k-- > 0;) v = v * x + asc[k] / asc[d];
    return v;
  };
  for (int it = 0; it < 500; ++it)
    for (std::size_t k = 0; k < d; ++k) {
      std::complex<double> den = 1;
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) den *= z[k] - z[j];
      z[k] -= eval(z[k]) / den;
    }
  return z;
}

}  // namespace

TEST_CASE("cyclotomic constants") {
  CHECK(CycloNum::zeta(12) == CycloNum(-1));
  CycloNum z = CycloNum::zeta(1), p(1);
  for (int k = 0; k < 12; ++k) p *= z;
  CHECK(p == CycloNum(-1));
  const CycloNum s = CycloNum::zeta(3) + CycloNum::zeta(21);
  CHECK(s * s == CycloNum(2));
  CHECK(CycloNum::zeta(6).inv() == -CycloNum::zeta(6));
  CHECK(CycloNum::i() * CycloNum::i() == CycloNum(-1));
  const CycloNum z8 = CycloNum::zeta(3);
  CHECK(z8 * z8 * z8 * z8 == CycloNum(-1));
  CHECK(CycloNum::parse("zeta8^1") == z8);
  CHECK(CycloNum::parse("-i") == -CycloNum::i());
  CHECK_THROWS_AS(CycloNum(0).inv(), MathError);
}

TEST_CASE("cyclotomic field axioms on random samples") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const CycloNum a = random_cyclo(rng), b = random_cyclo(rng), c = random_cyclo(rng);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) REQUIRE(a * a.inv() == CycloNum(1));
    REQUIRE(a.conj().conj() == a);
    REQUIRE((a * b).conj() == a.conj() * b.conj());
    const auto nn = (a * a.conj()).to_complex();
    REQUIRE(std::abs(nn.imag()) < 1e-9 * (1 + std::abs(nn.real())));
    REQUIRE(nn.real() > -1e-9);
    // Complex embedding is a ring map.
    const auto lhs = (a * b + c).to_complex(), rhs = a.to_complex() * b.to_complex() + c.to_complex();
    REQUIRE(std::abs(lhs - rhs) < 1e-9 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("kernel examples") {
  CHECK(QMatrix::identity(2).kernel().empty());
  CHECK(QMatrix(2, 2).kernel().size() == 2);
  const QMatrix ones{{1, 1}, {1, 1}};
  auto k = ones.kernel();
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == -k[0][1]);
  CHECK(k[0][0] != 0);
}

TEST_CASE("rank plus nullity on random matrices") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-2, 2), dim(1, 5);
  for (int s = 0; s < 200; ++s) {
    const std::size_t r = static_cast<std::size_t>(dim(rng)), c = static_cast<std::size_t>(dim(rng));
    QMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = e(rng) * (e(rng) == 0 ? 0 : 1);
    auto ker = m.kernel();
    REQUIRE(m.rank() + ker.size() == c);
    for (const auto& v : ker) {
      auto mv = m * v;
      for (const auto& x : mv) REQUIRE(x == 0);
    }
    if (!ker.empty()) REQUIRE(QMatrix::from_columns(ker, c).rank() == ker.size());
  }
}

TEST_CASE("charpoly examples and Cayley-Hamilton") {
  using P = Poly<Rational>;
  CHECK(QMatrix::identity(2).charpoly() == P{1, -2, 1});
  CHECK(QMatrix{{1, 0}, {0, -1}}.charpoly() == P{-1, 0, 1});
  const CycloNum i = CycloNum::i();
  const CMatrix jordan{{i, CycloNum(1)}, {CycloNum(0), i}};
  CHECK(jordan.charpoly() == Poly<CycloNum>{CycloNum(-1), CycloNum(-2) * i, CycloNum(1)});
  CHECK_THROWS(QMatrix(2, 3).charpoly());

  std::mt19937_64 rng(3);
  for (int s = 0; s < 50; ++s) {
    for (std::size_t n : {2u, 3u}) {
      CMatrix m(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = random_cyclo(rng);
      const auto cp = m.charpoly();
      REQUIRE(cp.degree() == static_cast<int>(n));
      REQUIRE(eval_at_matrix(cp, m).is_zero());
      REQUIRE(-cp[n - 1] == m.trace());
      REQUIRE(cp[0] * CycloNum(n % 2 ? -1 : 1) == m.det());
    }
  }
}

TEST_CASE("discriminant") {
  using P = Poly<Rational>;
  CHECK(discriminant(P{-1, 0, 1}) == 4);
  CHECK(discriminant(P{-1, -4, 0, 1}) == 229);
  CHECK_THROWS_AS(discriminant(P{3}), MathError);
  // disc(x³ + px + q) = −4p³ − 27q²
  CHECK(discriminant(P{5, 2, 0, 1}) == -4 * 8 - 27 * 25);

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> e(-5, 5);
  for (int s = 0; s < 40; ++s) {
    // Exact oracle: c·∏(x − r_i) with rational roots.
    const Rational c(e(rng) == 0 ? 2 : e(rng) == 0 ? 1 : 3);
    std::vector<Rational> r{make_rational(e(rng), 2), make_rational(e(rng), 3), make_rational(e(rng), 1)};
    P p{c};
    for (const auto& x : r) p *= P{-x, 1};
    Rational prod(1);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) prod *= (r[a] - r[b]) * (r[a] - r[b]);
    REQUIRE(discriminant(p) == c * c * c * c * prod);

    // Numeric oracle for an integer cubic that need not split over Q.
    std::vector<double> asc{double(e(rng)), double(e(rng)), double(e(rng)), 1.0};
    P q{Rational(static_cast<long>(asc[0])), Rational(static_cast<long>(asc[1])), Rational(static_cast<long>(asc[2])), 1};
    auto z = numeric_roots(asc);
    std::complex<double> num = 1;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) num *= (z[a] - z[b]) * (z[a] - z[b]);
    REQUIRE(std::abs(num - discriminant(q).get_d()) < 1e-6 * (1 + std::abs(num)));
  }
}

TEST_CASE("rational parsing and json") {
  CHECK(parse_rational("-0.25") == make_rational(-1, 4));
  CHECK(parse_rational("6/4") == make_rational(3, 2));
  CHECK(to_string(make_rational(6, -4)) == "-3/2");
  CHECK(to_json(make_rational(3, 2)) == "3/2");
  const CycloNum z = CycloNum::zeta(5) + make_rational(1, 3);
  CHECK(cyclo_from_json(to_json(z)) == z);
  const CMatrix m{{z, CycloNum(1)}, {CycloNum::i(), CycloNum(0)}};
  CHECK(cmatrix_from_json(to_json(m)) == m);
}
