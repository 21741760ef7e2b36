#include "doctest.h"
#include "clausenlab/markov.hpp"

using namespace clausenlab;
using namespace clausenlab::markov;

TEST_CASE("Markov tree") {
  const MarkovPoint root{3, 3, 3};
  CHECK(root.on_surface());
  const MarkovPoint v = vieta(root, 2);
  CHECK(v == MarkovPoint{3, 3, 6});
  CHECK(v.on_surface());

  const auto tree = markov_tree(100);
  // O(n³) oracle.
  std::vector<Triple> scan;
  for (long long a = 1; a <= 100; ++a)
    for (long long b = a; b <= 100; ++b)
      for (long long c = b; c <= 100; ++c)
        if (a * a + b * b + c * c == a * b * c) scan.push_back({a, b, c});
  CHECK(tree == scan);
  CHECK(markov_brute_force(100) == scan);
  CHECK(std::find(tree.begin(), tree.end(), Triple{3, 15, 39}) != tree.end());
}

TEST_CASE("surface sampler") {
  CHECK(curve_point(1) == MarkovPoint{3, 3, 3});
  CHECK(curve_point(2) == MarkovPoint{3, 3, 6});
  CHECK(curve_point(3) == MarkovPoint{make_rational(11, 3), make_rational(11, 3), 11});
  const auto pts = surface_sampler(50, 7);
  CHECK(pts.size() == 50);
  for (const auto& p : pts) CHECK(p.on_surface());
  CHECK(surface_sampler(5, 7) == std::vector<MarkovPoint>(pts.begin(), pts.begin() + 5));
}

TEST_CASE("reflection triples") {
  const auto r = build_reflection_triple({3, 3, 3});
  CHECK(r.R2(0, 0) == CycloNum(make_rational(3, 2)));
  CHECK(r.Q().trace() == CycloNum(2) * CycloNum::i());
  CHECK(r.Q().det() == CycloNum(-1));
  CHECK_NOTHROW(build_reflection_triple({3, 3, 6}));
  try {
    build_reflection_triple({3, 3, 5});
    FAIL("expected an error");
  } catch (const MathError& e) {
    CHECK(std::string(e.what()).find("consistency identity fails") != std::string::npos);
  }
  CHECK_THROWS_AS(build_reflection_triple({2, 3, 3}), MathError);
  CHECK(build_reflection_triple({3, 3, 3}, -1).Q().trace() == CycloNum(-2) * CycloNum::i());

  int checked = 0;
  for (const auto& p : surface_sampler(60, 11)) {
    if (p.m1 * p.m1 == 4) continue;
    REQUIRE_NOTHROW(build_reflection_triple(p));
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("double cover pullback") {
  const auto r = build_reflection_triple({3, 6, 15});
  const auto pb = double_cover_pullback(r.tuple());
  CHECK(pb.gA.trace() == CycloNum(3));
  CHECK(pb.gB.trace() == CycloNum(6));
  CHECK((pb.gA * pb.gB).trace() == CycloNum(15));
  const CMatrix comm = pb.gA * pb.gB * pb.gA.inverse() * pb.gB.inverse();
  CHECK(comm == r.Q() * r.Q());
  CHECK(comm.trace() == CycloNum(-2));
  const auto id = double_cover_pullback(conv::LocalSystemTuple({CMatrix::identity(2), CMatrix::identity(2), CMatrix::identity(2)}));
  CHECK(id.gA.is_identity());
  CHECK(id.gB.is_identity());
  CHECK_THROWS(double_cover_pullback(conv::LocalSystemTuple({CMatrix::identity(2)})));

  const auto hits = calibrate_pullback(build_reflection_triple({3, 6, 15}));
  CHECK(std::find(hits.begin(), hits.end(), std::array<int, 4>{0, 1, 2, 0}) != hits.end());
}

TEST_CASE("twisted Clausen pipeline") {
  struct Case {
    MarkovPoint p;
    std::array<Rational, 3> expect;
  };
  const std::vector<Case> cases{
      {{3, 3, 3}, {8, 8, 8}},
      {{3, 3, 6}, {8, 8, 35}},
      {{make_rational(11, 3), make_rational(11, 3), 11}, {make_rational(112, 9), make_rational(112, 9), 120}}};
  for (const auto& cs : cases) {
    PipelineOptions opt;
    opt.max_word_len = 3;
    const auto rep = twisted_clausen_pipeline(cs.p, opt);
    CHECK(rep.ranks == std::vector<std::size_t>{2, 2, 2, 3});
    for (int k = 0; k < 3; ++k) CHECK(rep.traces[static_cast<std::size_t>(k)].trace == CycloNum(cs.expect[static_cast<std::size_t>(k)]));
    CHECK(rep.pair_traces_ok);
    CHECK(rep.commutator_is_Q2);
    CHECK(rep.ok());
    for (int k = 0; k < 2; ++k) {
      const Rational t = cs.expect[static_cast<std::size_t>(k)];
      CHECK(rep.squared_word_traces[static_cast<std::size_t>(k)] == CycloNum(t * t - 2 * t));
    }
    for (std::size_t k = 0; k < 3; ++k) CHECK(rep.profile[k].projective_order == 4);
  }
}
