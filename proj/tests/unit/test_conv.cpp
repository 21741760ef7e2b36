#include <random>

#include "doctest.h"
#include "clausenlab/conv.hpp"
#include "clausenlab/markov.hpp"

using namespace clausenlab;
using namespace clausenlab::conv;

namespace {

CycloNum c(long v) { return CycloNum(v); }

// Tr Q = −2i, so A_∞ = Q⁻¹ has the eigenvalue i.
LocalSystemTuple markov_tuple(const std::string& pt) {
  return markov::build_reflection_triple(markov::parse_point(pt), -1).tuple();
}

// All reduced words of length ≤ len in r letters.
std::vector<std::string> words_upto(std::size_t r, int len) {
  std::vector<std::string> out{""}, layer{""};
  for (int l = 0; l < len; ++l) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (std::size_t k = 0; k < 2 * r; ++k) {
        const char ch = static_cast<char>(k < r ? 'a' + k : 'A' + (k - r));
        if (!w.empty() && std::tolower(w.back()) == std::tolower(ch) && w.back() != ch) continue;
        next.push_back(w + ch);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

bool trace_equivalent(const LocalSystemTuple& a, const LocalSystemTuple& b, int len) {
  for (const auto& w : words_upto(a.size(), len))
    if (evaluate_word(a.matrices(), w).trace() != evaluate_word(b.matrices(), w).trace()) return false;
  return true;
}

}  // namespace

TEST_CASE("local system tuple") {
  const auto t = markov_tuple("3,3,3");
  CHECK((t.product() * t.infinity()).is_identity());
  CHECK(t.labels() == std::vector<std::string>{"t1", "t2", "t3"});
  CHECK_THROWS_AS(LocalSystemTuple({CMatrix{{c(1), c(1)}, {c(1), c(1)}}}), MathError);
  CHECK(tuple_from_json(to_json(t)).matrices() == t.matrices());
}

TEST_CASE("middle convolution examples") {
  const auto t = markov_tuple("3,3,3");
  CHECK(trace_equivalent(middle_convolution(t, c(1)), t, 3));
  CHECK_THROWS_AS(middle_convolution(t, c(0)), MathError);

  const CycloNum i = CycloNum::i();
  const auto mc = middle_convolution(t, i);
  CHECK(mc.rank() == 2);
  CHECK(mc_predicted_rank(t, i) == 2);
  for (const auto& m : mc.matrices()) CHECK(m.charpoly() == Poly<CycloNum>{-i, i - c(1), c(1)});

  // Rank-1 inputs α, β at two points.
  const CycloNum alpha(2), beta = CycloNum::zeta(4), lambda = CycloNum::zeta(3);
  const LocalSystemTuple g({CMatrix{{alpha}}, CMatrix{{beta}}});
  const auto gauss = middle_convolution(g, lambda);
  REQUIRE(gauss.rank() == 2);
  using PC = Poly<CycloNum>;
  CHECK(gauss[0].charpoly() == PC{-lambda * alpha, c(1)} * PC{c(-1), c(1)});
  CHECK(gauss[1].charpoly() == PC{-lambda * beta, c(1)} * PC{c(-1), c(1)});
}

TEST_CASE("middle convolution involutivity") {
  for (const char* pt : {"3,3,3", "3,3,6", "11/3,11/3,11"}) {
    const auto t = markov_tuple(pt);
    for (const CycloNum& lambda : {CycloNum::i(), CycloNum::zeta(4), CycloNum(3)}) {
      const auto there = middle_convolution(t, lambda);
      const auto back = middle_convolution(there, lambda.inv());
      REQUIRE(back.rank() == t.rank());
      REQUIRE(trace_equivalent(back, t, 4));
    }
  }
}

TEST_CASE("rank-1 twist") {
  const auto t = markov_tuple("3,3,6");
  CHECK(tensor_rank1(t, {c(1), c(1), c(1)}).matrices() == t.matrices());
  const CycloNum z8 = CycloNum::zeta(3);
  const auto tw = tensor_rank1(t, {z8, z8, z8});
  CHECK(tw.infinity() == (z8 * z8 * z8).inv() * t.infinity());
  for (std::size_t k = 0; k < 3; ++k) CHECK(tw[k].det() == z8 * z8 * t[k].det());
  CHECK_THROWS_AS(tensor_rank1(t, {c(1), c(0), c(1)}), MathError);
}

TEST_CASE("symmetric square") {
  CHECK(sym_square(CMatrix::identity(2)) == CMatrix::identity(3));
  const CycloNum a = CycloNum::zeta(5), b(3);
  const CMatrix d{{a, c(0)}, {c(0), b}};
  const CMatrix s = sym_square(d);
  CHECK(s.is_scalar() == false);
  CHECK(s(0, 0) == a * a);
  CHECK(s(1, 1) == a * b);
  CHECK(s(2, 2) == b * b);

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> e(-4, 4), k(0, 23);
  for (int n = 0; n < 50; ++n) {
    CMatrix m(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = CycloNum(e(rng)) * CycloNum::zeta(k(rng));
    const CMatrix sm = sym_square(m);
    REQUIRE(sm.trace() * c(2) == m.trace() * m.trace() + (m * m).trace());
    // Homomorphism property on products.
    CMatrix m2(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m2(i, j) = CycloNum(e(rng));
    REQUIRE(sym_square(m * m2) == sm * sym_square(m2));
  }
}

TEST_CASE("invariant bilinear forms") {
  const LocalSystemTuple ident({CMatrix::identity(2), CMatrix::identity(2)});
  CHECK(invariant_bilinear_form(ident, true).basis.size() == 3);

  const LocalSystemTuple sl2({CMatrix{{c(1), c(1)}, {c(0), c(1)}}, CMatrix{{c(1), c(0)}, {c(-1), c(1)}}});
  const auto alt = invariant_bilinear_form(sl2, false);
  CHECK(alt.basis.size() == 1);
  CHECK(alt.ranks[0] == 2);
  CHECK(invariant_bilinear_form(sl2, true).basis.empty());

  const auto rep = markov::twisted_clausen_pipeline(markov::parse_point("3,3,3"), {.scan = false});
  CHECK(rep.symmetric_forms.basis.size() == 1);
  CHECK(rep.symmetric_forms.ranks[0] == 3);
}

TEST_CASE("word scan basics") {
  const LocalSystemTuple jordan({CMatrix{{c(1), c(1)}, {c(0), c(1)}}});
  ScanOptions opt;
  opt.max_len = 2;
  opt.keep_reports = true;
  const auto s = word_scan(jordan, opt);
  REQUIRE(s.words == 5);  // "", a, aa, A, AA
  CHECK(s.reports[0].word.empty());
  CHECK(s.reports[0].identity);
  CHECK_FALSE(s.reports[0].unipotent);
  CHECK(s.reports[0].trace == c(2));
  CHECK(s.reports[1].word == "a");
  CHECK(s.reports[1].unipotent);
  CHECK(s.unipotents == 4);

  const LocalSystemTuple rot({CMatrix{{CycloNum::zeta(3), c(0)}, {c(0), c(1)}}});
  CHECK(word_scan(rot, {.max_len = 1, .keep_reports = true}).reports[1].projective_order == 8);
  CHECK(projective_order_exact(CMatrix{{CycloNum::zeta(3), c(0)}, {c(0), c(1)}}) == 8);
  CHECK_FALSE(projective_order_exact(CMatrix{{c(1), c(1)}, {c(0), c(1)}}).has_value());
}

TEST_CASE("word scan fast path agrees with exact path") {
  const auto rep = markov::twisted_clausen_pipeline(markov::parse_point("3,3,6"), {.scan = false});
  ScanOptions opt;
  opt.max_len = 3;
  opt.keep_reports = true;
  const auto fast = word_scan(rep.sym2, opt);
  opt.force_exact = true;
  const auto exact = word_scan(rep.sym2, opt);
  CHECK(fast.used_fast_path);
  CHECK_FALSE(exact.used_fast_path);
  REQUIRE(fast.words == 1 + 6 + 30 + 150);
  REQUIRE(fast.reports.size() == exact.reports.size());
  for (std::size_t k = 0; k < fast.reports.size(); ++k) {
    REQUIRE(fast.reports[k].word == exact.reports[k].word);
    REQUIRE(fast.reports[k].trace == exact.reports[k].trace);
    REQUIRE(fast.reports[k].unipotent == exact.reports[k].unipotent);
    REQUIRE(fast.reports[k].projective_order == exact.reports[k].projective_order);
    REQUIRE(fast.reports[k].trace == evaluate_word(rep.sym2.matrices(), fast.reports[k].word).trace());
  }
  CHECK(fast.order_histogram == exact.order_histogram);

  // Threaded partition merges back to the same order.
  opt.force_exact = false;
  opt.threads = 3;
  const auto threaded = word_scan(rep.sym2, opt);
  REQUIRE(threaded.reports.size() == fast.reports.size());
  for (std::size_t k = 0; k < fast.reports.size(); ++k) REQUIRE(threaded.reports[k].word == fast.reports[k].word);
}
