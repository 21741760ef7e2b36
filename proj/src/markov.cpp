#include "clausenlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace clausenlab::markov {

using conv::LocalSystemTuple;

std::string MarkovPoint::str() const { return to_string(m1) + "," + to_string(m2) + "," + to_string(m3); }

MarkovPoint parse_point(const std::string& s) {
  std::vector<Rational> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(parse_rational(part));
  if (v.size() != 3) throw std::invalid_argument("expected three comma-separated coordinates, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

MarkovPoint vieta(const MarkovPoint& p, int k) {
  MarkovPoint q = p;
  switch (k) {
    case 0: q.m1 = p.m2 * p.m3 - p.m1; break;
    case 1: q.m2 = p.m1 * p.m3 - p.m2; break;
    case 2: q.m3 = p.m1 * p.m2 - p.m3; break;
    default: throw std::invalid_argument("Vieta move index must be 0, 1 or 2");
  }
  return q;
}

std::vector<Triple> markov_tree(long long bound) {
  if (bound < 3) throw std::invalid_argument("Markov tree bound must be at least 3");
  if (bound > 2'000'000'000LL) throw std::invalid_argument("Markov tree bound too large for 64-bit products");
  std::set<Triple> seen;
  std::vector<Triple> todo{{3, 3, 3}};
  while (!todo.empty()) {
    Triple t = todo.back();
    todo.pop_back();
    std::sort(t.begin(), t.end());
    if (t[2] > bound || !seen.insert(t).second) continue;
    for (int k = 0; k < 3; ++k) {
      Triple n = t;
      n[static_cast<std::size_t>(k)] = t[(k + 1) % 3] * t[(k + 2) % 3] - t[static_cast<std::size_t>(k)];
      if (n[static_cast<std::size_t>(k)] > 0) todo.push_back(n);
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<Triple> markov_brute_force(long long bound) {
  if (bound > 3'000'000LL) throw std::invalid_argument("brute-force bound too large");
  std::vector<Triple> out;
  for (long long a = 1; a <= bound; ++a)
    for (long long b = a; b <= bound; ++b) {
      // m3² − ab·m3 + a² + b² = 0
      const long long p = a * b;
      const long long disc = p * p - 4 * (a * a + b * b);
      if (disc < 0) continue;
      long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(disc))));
      while (r * r > disc) --r;
      while ((r + 1) * (r + 1) <= disc) ++r;
      if (r * r != disc || (p + r) % 2 != 0) continue;
      std::set<long long> roots{(p - r) / 2, (p + r) / 2};
      for (long long c : roots)
        if (c >= b && c <= bound) out.push_back({a, b, c});
    }
  std::sort(out.begin(), out.end());
  return out;
}

MarkovPoint curve_point(const Rational& u) {
  if (sgn(u) == 0) throw MathError("curve parameter must be nonzero");
  const Rational m = u + 2 / u;
  return {m, m, u * u + 2};
}

std::vector<MarkovPoint> surface_sampler(std::size_t count, std::uint64_t seed, bool scramble) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5), moves(0, 2), coord(0, 2);
  std::vector<MarkovPoint> out;
  while (out.size() < count) {
    const int p = num(rng);
    if (p == 0) continue;
    MarkovPoint pt = curve_point(make_rational(p, den(rng)));
    if (scramble) {
      const int n = moves(rng);
      for (int k = 0; k < n; ++k) pt = vieta(pt, coord(rng));
      std::array<Rational, 3> c{pt.m1, pt.m2, pt.m3};
      std::shuffle(c.begin(), c.end(), rng);
      pt = {c[0], c[1], c[2]};
    }
    out.push_back(pt);
  }
  return out;
}

ReflectionTriple build_reflection_triple(const MarkovPoint& p, int qsign) {
  if (qsign != 1 && qsign != -1) throw std::invalid_argument("qsign must be +1 or -1");
  const Rational a = p.m1 / 2, d = p.m2 / 2;
  if (a * a == 1) throw MathError("gauge degenerate: m1 = +-2");
  const Rational h = (p.m3 - 2 * a * d) / 2;
  const CycloNum i = CycloNum::i() * CycloNum(qsign);
  const CycloNum f = CycloNum(h) + i;
  const CycloNum e = (CycloNum(h) - i) / CycloNum(1 - a * a);
  if (CycloNum(d * d) + e * f != CycloNum(1)) throw MathError("consistency identity fails: point is off the Markov surface");
  ReflectionTriple r;
  r.point = p;
  r.R1 = CMatrix{{CycloNum(1), CycloNum(0)}, {CycloNum(0), CycloNum(-1)}};
  r.R2 = CMatrix{{CycloNum(a), CycloNum(1)}, {CycloNum(1 - a * a), CycloNum(-a)}};
  r.R3 = CMatrix{{CycloNum(d), e}, {f, CycloNum(-d)}};
  const CMatrix q = r.Q();
  if (q.is_scalar()) throw MathError("degenerate point: Q is scalar");

  // Invariant block, checked rather than assumed.
  for (const CMatrix* m : {&r.R1, &r.R2, &r.R3})
    if (!m->trace().is_zero() || m->det() != CycloNum(-1)) throw MathError("reflection invariant failed");
  if ((r.R1 * r.R2).trace() != CycloNum(p.m1) || (r.R1 * r.R3).trace() != CycloNum(p.m2) ||
      (r.R2 * r.R3).trace() != CycloNum(p.m3))
    throw MathError("trace assignment failed");
  const CMatrix shifted = q - CMatrix::scalar(2, i);
  if (q.trace() != CycloNum(2) * i || q.det() != CycloNum(-1) || !(shifted * shifted).is_zero())
    throw MathError("Jordan condition at infinity failed");
  return r;
}

Pullback double_cover_pullback(const LocalSystemTuple& t) {
  if (t.size() != 3) throw std::invalid_argument("double cover pullback needs exactly three punctures");
  return {t[0] * t[1], t[2] * t[0]};
}

namespace {

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b * a.inverse() * b.inverse(); }

}  // namespace

std::vector<std::array<int, 4>> calibrate_pullback(const ReflectionTriple& r) {
  const std::array<CMatrix, 3> A{r.R1, r.R2, r.R3};
  const CMatrix q2 = r.Q() * r.Q();
  std::vector<std::array<int, 4>> hits;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (i == j || k == l) continue;
          const CMatrix gA = A[static_cast<std::size_t>(i)] * A[static_cast<std::size_t>(j)];
          const CMatrix gB = A[static_cast<std::size_t>(k)] * A[static_cast<std::size_t>(l)];
          if (gA.trace() == CycloNum(r.point.m1) && gB.trace() == CycloNum(r.point.m2) &&
              (gA * gB).trace() == CycloNum(r.point.m3) && commutator(gA, gB) == q2)
            hits.push_back({i, j, k, l});
        }
  return hits;
}

bool PipelineReport::ok() const {
  bool local = true;
  for (bool b : mc_local_eigen_ok) local = local && b;
  return pair_traces_ok && commutator_is_Q2 && base_traces_ok && form_ok && local && (!scan || no_unipotent) &&
         integral_traces.value_or(true);
}

PipelineReport twisted_clausen_pipeline(const MarkovPoint& p, const PipelineOptions& opt) {
  if (opt.lambda_sign != 1 && opt.lambda_sign != -1) throw std::invalid_argument("lambda sign must be +1 or -1");
  PipelineReport rep;
  rep.point = p;
  rep.options = opt;
  rep.triple = build_reflection_triple(p, opt.qsign);
  const LocalSystemTuple base = rep.triple.tuple();

  const Pullback pb = double_cover_pullback(base);
  const CMatrix q = rep.triple.Q();
  const CMatrix comm = commutator(pb.gA, pb.gB);
  rep.commutator_trace = comm.trace();
  rep.commutator_is_Q2 = comm == q * q && rep.commutator_trace == CycloNum(-2);
  rep.base_traces_ok = pb.gA.trace() == CycloNum(p.m1) && pb.gB.trace() == CycloNum(p.m2) &&
                       (pb.gA * pb.gB).trace() == CycloNum(p.m3);

  const CycloNum lambda = CycloNum::i() * CycloNum(opt.lambda_sign);
  rep.mc = conv::middle_convolution(base, lambda);
  const CycloNum z8 = CycloNum::zeta(3);
  rep.twisted = conv::tensor_rank1(rep.mc, {z8, z8, z8});
  rep.sym2 = conv::sym_square(rep.twisted);
  rep.ranks = {base.rank(), rep.mc.rank(), rep.twisted.rank(), rep.sym2.rank()};

  // Local eigenvalues of MC: {1, −λ}, the reflection eigenvalue −1 scaled by λ.
  const Poly<CycloNum> expect_cp{-lambda, lambda - CycloNum(1), CycloNum(1)};
  for (const auto& c : rep.mc.matrices()) rep.mc_local_eigen_ok.push_back(c.charpoly() == expect_cp);

  // Traces of the pair products S1S2, S3S1, S2S3 of the rank-3 system.
  const auto& S = rep.sym2.matrices();
  const std::array<std::tuple<const char*, const char*, int, int, int>, 3> words{
      {{"A^2", "ab", 0, 1, 0}, {"B^2", "ca", 2, 0, 1}, {"(AB)^2", "bc", 1, 2, 2}}};
  rep.pair_traces_ok = true;
  for (const auto& [name, word, x, y, m] : words) {
    TraceCheck tc;
    tc.name = name;
    tc.word = word;
    tc.trace = (S[static_cast<std::size_t>(x)] * S[static_cast<std::size_t>(y)]).trace();
    tc.expected = p[m] * p[m] - 1;
    tc.ok = tc.trace == CycloNum(tc.expected);
    rep.pair_traces_ok = rep.pair_traces_ok && tc.ok;
    rep.traces.push_back(std::move(tc));
  }
  const Pullback top = double_cover_pullback(rep.sym2);
  rep.squared_word_traces = {(top.gA * top.gA).trace(), (top.gB * top.gB).trace(),
                             (top.gA * top.gB * top.gA * top.gB).trace()};

  // Word scan and invariant forms.
  if (opt.scan) {
    conv::ScanOptions so;
    so.max_len = opt.max_word_len;
    so.threads = opt.threads;
    rep.scan = conv::word_scan(rep.sym2, so);
    rep.no_unipotent = rep.scan->unipotents == 0;
    if (p.is_integral()) rep.integral_traces = rep.scan->all_traces_integral;
  }
  rep.symmetric_forms = conv::invariant_bilinear_form(rep.sym2, true);
  rep.form_ok = rep.symmetric_forms.basis.size() == 1 && rep.symmetric_forms.ranks[0] == rep.sym2.rank();

  // Local monodromies of the twisted rank-2 system.
  std::vector<std::pair<std::string, CMatrix>> locals;
  for (std::size_t k = 0; k < rep.twisted.size(); ++k) locals.emplace_back(rep.twisted.labels()[k], rep.twisted[k]);
  locals.emplace_back("infinity", rep.twisted.infinity());
  for (const auto& [label, m] : locals) {
    LocalProfile lp;
    lp.label = label;
    lp.charpoly = m.charpoly();
    lp.trace_sq_over_det = m.trace() * m.trace() / m.det();
    lp.projective_order = conv::projective_order_exact(m);
    rep.profile.push_back(std::move(lp));
  }
  return rep;
}

}  // namespace clausenlab::markov
