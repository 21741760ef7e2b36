#include "clausenlab/conv.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace clausenlab::conv {

LocalSystemTuple::LocalSystemTuple(std::vector<CMatrix> matrices, std::vector<std::string> labels)
    : m_(std::move(matrices)), labels_(std::move(labels)) {
  if (m_.empty()) throw std::invalid_argument("local system needs at least one matrix");
  rank_ = m_.front().rows();
  for (const auto& a : m_) {
    if (!a.is_square() || a.rows() != rank_) throw std::invalid_argument("local system matrices must be square of equal size");
    if (a.det().is_zero()) throw MathError("local system matrix is not invertible");
  }
  if (labels_.empty())
    for (std::size_t k = 0; k < m_.size(); ++k) labels_.push_back("t" + std::to_string(k + 1));
  if (labels_.size() != m_.size()) throw std::invalid_argument("one label per matrix required");
}

CMatrix LocalSystemTuple::product() const {
  CMatrix p = CMatrix::identity(rank_);
  for (const auto& a : m_) p = p * a;
  return p;
}

Json to_json(const LocalSystemTuple& t) {
  Json mats = Json::array();
  for (const auto& a : t.matrices()) mats.push_back(to_json(a));
  return Json{{"rank", t.rank()}, {"points", t.labels()}, {"matrices", std::move(mats)}, {"field", "Q(zeta24)"}};
}

LocalSystemTuple tuple_from_json(const Json& j) {
  std::vector<CMatrix> mats;
  for (const auto& m : j.at("matrices")) mats.push_back(cmatrix_from_json(m));
  std::vector<std::string> labels;
  if (j.contains("points")) labels = j.at("points").get<std::vector<std::string>>();
  LocalSystemTuple t(std::move(mats), std::move(labels));
  if (j.contains("rank") && j.at("rank").get<std::size_t>() != t.rank()) throw std::invalid_argument("tuple rank field disagrees with the matrices");
  return t;
}

DimensionMismatch::DimensionMismatch(std::size_t predicted, std::size_t actual)
    : MathError("middle convolution rank " + std::to_string(actual) + " differs from the dimension formula " +
                std::to_string(predicted)),
      predicted_(predicted),
      actual_(actual) {}

std::size_t mc_predicted_rank(const LocalSystemTuple& t, const CycloNum& lambda) {
  const std::size_t n = t.rank();
  // MC_1 is the identity transform; the formula below needs λ ≠ 1.
  if (lambda == CycloNum(1)) return n;
  const CMatrix I = CMatrix::identity(n);
  std::size_t total = (lambda * t.product() - I).rank();
  for (const auto& a : t.matrices()) total += (a - I).rank();
  return total >= n ? total - n : 0;
}

namespace {

void put_block(CMatrix& big, std::size_t bi, std::size_t bj, const CMatrix& blk) {
  for (std::size_t i = 0; i < blk.rows(); ++i)
    for (std::size_t j = 0; j < blk.cols(); ++j) big(bi * blk.rows() + i, bj * blk.cols() + j) = blk(i, j);
}

}  // namespace

LocalSystemTuple middle_convolution(const LocalSystemTuple& t, const CycloNum& lambda) {
  if (lambda.is_zero()) throw MathError("middle convolution needs lambda != 0");
  const std::size_t n = t.rank(), r = t.size(), N = n * r;
  const CMatrix I = CMatrix::identity(n);

  std::vector<CMatrix> B;
  for (std::size_t k = 0; k < r; ++k) {
    CMatrix b = CMatrix::identity(N);
    for (std::size_t j = 0; j < r; ++j) {
      CMatrix blk = t[j] - I;
      if (j == k) blk = lambda * t[j];
      else if (j < k) blk = lambda * blk;
      put_block(b, k, j, blk);
    }
    B.push_back(std::move(b));
  }

  // 𝒦 + ℒ as a list of spanning columns.
  std::vector<Vec<CycloNum>> span;
  for (std::size_t k = 0; k < r; ++k)
    for (const auto& v : (t[k] - I).kernel()) {
      Vec<CycloNum> w(N, CycloNum(0));
      for (std::size_t i = 0; i < n; ++i) w[k * n + i] = v[i];
      span.push_back(std::move(w));
    }
  CMatrix stacked(N * r, N);
  for (std::size_t k = 0; k < r; ++k) {
    const CMatrix d = B[k] - CMatrix::identity(N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) stacked(k * N + i, j) = d(i, j);
  }
  for (auto& v : stacked.kernel()) span.push_back(std::move(v));

  // Basis of 𝒦 + ℒ followed by standard vectors completing it.
  std::vector<Vec<CycloNum>> basis;
  std::size_t have = 0;
  auto try_add = [&](const Vec<CycloNum>& v) {
    basis.push_back(v);
    const std::size_t rk = CMatrix::from_columns(basis, N).rank();
    if (rk > have) {
      have = rk;
      return true;
    }
    basis.pop_back();
    return false;
  };
  for (const auto& v : span) try_add(v);
  const std::size_t sub = have;
  for (std::size_t j = 0; j < N && have < N; ++j) {
    Vec<CycloNum> e(N, CycloNum(0));
    e[j] = CycloNum(1);
    try_add(e);
  }
  const CMatrix P = CMatrix::from_columns(basis, N);
  const CMatrix Pinv = P.inverse();
  const std::size_t out = N - sub;

  std::vector<CMatrix> result;
  for (const auto& b : B) {
    const CMatrix c = Pinv * b * P;
    for (std::size_t i = sub; i < N; ++i)
      for (std::size_t j = 0; j < sub; ++j)
        if (!c(i, j).is_zero()) throw MathError("middle convolution: K + L is not invariant");
    CMatrix q(out, out);
    for (std::size_t i = 0; i < out; ++i)
      for (std::size_t j = 0; j < out; ++j) q(i, j) = c(sub + i, sub + j);
    result.push_back(std::move(q));
  }
  const std::size_t predicted = mc_predicted_rank(t, lambda);
  if (predicted != out) throw DimensionMismatch(predicted, out);
  if (out == 0) throw MathError("middle convolution produced the zero local system");
  return LocalSystemTuple(std::move(result), t.labels());
}

LocalSystemTuple tensor_rank1(const LocalSystemTuple& t, const std::vector<CycloNum>& chi) {
  if (chi.size() != t.size()) throw std::invalid_argument("one rank-1 scalar per puncture required");
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (chi[k].is_zero()) throw MathError("rank-1 twist by zero");
    out.push_back(chi[k] * t[k]);
  }
  return LocalSystemTuple(std::move(out), t.labels());
}

CMatrix sym_square(const CMatrix& m) {
  m.require_square("sym_square");
  const std::size_t n = m.rows(), s = n * (n + 1) / 2;
  auto index = [n](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  };
  CMatrix r(s, s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t col = index(i, j);
      // (M e_i)(M e_j) = Σ_{a,b} M_ai M_bj e_a e_b
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          if (m(a, i).is_zero() || m(b, j).is_zero()) continue;
          r(index(a, b), col) += m(a, i) * m(b, j);
        }
    }
  return r;
}

LocalSystemTuple sym_square(const LocalSystemTuple& t) {
  std::vector<CMatrix> out;
  for (const auto& a : t.matrices()) {
    CMatrix s = sym_square(a);
    const CycloNum tr = a.trace();
    if (s.trace() * CycloNum(2) != tr * tr + (a * a).trace()) throw MathError("Sym^2 trace identity failed");
    out.push_back(std::move(s));
  }
  return LocalSystemTuple(std::move(out), t.labels());
}

BilinearForms invariant_bilinear_form(const LocalSystemTuple& t, bool symmetric) {
  const std::size_t n = t.rank();
  std::vector<CMatrix> params;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = symmetric ? i : i + 1; j < n; ++j) {
      CMatrix e(n, n);
      e(i, j) += CycloNum(1);
      e(j, i) += CycloNum(symmetric ? 1 : -1);
      params.push_back(std::move(e));
    }
  BilinearForms out;
  if (params.empty()) return out;
  CMatrix sys(t.size() * n * n, params.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const CMatrix at = t[k].transpose();
    for (std::size_t p = 0; p < params.size(); ++p) {
      const CMatrix d = at * params[p] * t[k] - params[p];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sys(k * n * n + i * n + j, p) = d(i, j);
    }
  }
  for (const auto& v : sys.kernel()) {
    CMatrix g(n, n);
    for (std::size_t p = 0; p < params.size(); ++p)
      if (!v[p].is_zero()) g += v[p] * params[p];
    out.ranks.push_back(g.rank());
    out.basis.push_back(std::move(g));
  }
  return out;
}

CMatrix evaluate_word(const std::vector<CMatrix>& generators, const std::string& word) {
  if (generators.empty()) throw std::invalid_argument("no generators");
  CMatrix p = CMatrix::identity(generators.front().rows());
  for (char ch : word) {
    if (ch >= 'a' && ch < 'a' + static_cast<int>(generators.size())) {
      p = p * generators[static_cast<std::size_t>(ch - 'a')];
    } else if (ch >= 'A' && ch < 'A' + static_cast<int>(generators.size())) {
      p = p * generators[static_cast<std::size_t>(ch - 'A')].inverse();
    } else {
      throw std::invalid_argument(std::string("unknown generator letter '") + ch + "'");
    }
  }
  return p;
}

bool is_unipotent(const CMatrix& m) {
  if (m.is_identity()) return false;
  const auto cp = m.charpoly();
  Poly<CycloNum> target{CycloNum(1)};
  for (std::size_t k = 0; k < m.rows(); ++k) target *= Poly<CycloNum>{CycloNum(-1), CycloNum(1)};
  return cp == target;
}

std::optional<int> projective_order_exact(const CMatrix& m) {
  CMatrix p = m;
  for (int k = 1; k <= 24; ++k) {
    if (p.is_scalar()) return k;
    p = p * m;
  }
  return std::nullopt;
}

namespace {

constexpr int kMaxOrder = 24;

// Rank 2: M^k is scalar iff the eigenvalue ratio μ has order k; Tr²/det =
// 2 + μ + 1/μ, and μ ∈ Q(ζ₂₄) up to a quadratic extension that does not
// add roots of unity with 2 + μ + 1/μ ∈ Q(ζ₂₄) beyond the 24th ones.
std::optional<int> rank2_order(const CycloNum& tr, const CycloNum& det, bool scalar) {
  static const std::vector<std::pair<CycloNum, int>> table = [] {
    std::vector<std::pair<CycloNum, int>> t;
    for (int j = 1; j <= 12; ++j) t.emplace_back(CycloNum(2) + CycloNum::zeta(j) + CycloNum::zeta(-j), 24 / std::gcd(j, 24));
    return t;
  }();
  if (scalar) return 1;
  const CycloNum v = tr * tr / det;
  for (const auto& [val, order] : table)
    if (v == val) return order;
  return std::nullopt;  // includes v = 4 non-scalar (a Jordan block)
}

std::string order_key(const std::optional<int>& o) { return o ? std::to_string(*o) : "infinite/unknown"; }

// ---- integral fast path -------------------------------------------------

using I128 = __int128;
using ZC = std::array<I128, 8>;
constexpr I128 kLimit = static_cast<I128>(1) << 60;

struct Overflow {};

I128 abs128(I128 x) { return x < 0 ? -x : x; }

I128 gcd128(I128 a, I128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Integer to_mpz(I128 x) {
  const bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-x) : static_cast<unsigned __int128>(x);
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Integer r = hi * Integer(1UL << 32) * Integer(1UL << 32) + lo;
  return neg ? Integer(-r) : r;
}

I128 from_mpz(const Integer& z) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 62) throw Overflow{};
  return static_cast<I128>(z.get_si());
}

struct ZMat {
  std::size_t n = 0;
  std::vector<ZC> e;  // row-major
  I128 den = 1;
};

void zmul(const ZC& a, const ZC& b, std::array<I128, 15>& acc) {
  for (int i = 0; i < 8; ++i) {
    if (a[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < 8; ++j) acc[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
  }
}

ZMat zproduct(const ZMat& p, const ZMat& g) {
  ZMat r;
  r.n = p.n;
  r.e.assign(p.n * p.n, ZC{});
  r.den = p.den * g.den;
  if (abs128(r.den) >= kLimit) throw Overflow{};
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < p.n; ++j) {
      std::array<I128, 15> acc{};
      for (std::size_t l = 0; l < p.n; ++l) zmul(p.e[i * p.n + l], g.e[l * p.n + j], acc);
      for (int k = 14; k >= 8; --k) {
        acc[static_cast<std::size_t>(k - 4)] += acc[static_cast<std::size_t>(k)];
        acc[static_cast<std::size_t>(k - 8)] -= acc[static_cast<std::size_t>(k)];
      }
      ZC& out = r.e[i * p.n + j];
      for (std::size_t k = 0; k < 8; ++k) {
        if (abs128(acc[k]) >= kLimit) throw Overflow{};
        out[k] = acc[k];
      }
    }
  if (r.den != 1) {
    I128 g0 = r.den;
    for (const auto& z : r.e) {
      for (I128 c : z) {
        if (c != 0) g0 = gcd128(g0, c);
        if (g0 == 1) break;
      }
      if (g0 == 1) break;
    }
    if (g0 > 1) {
      r.den /= g0;
      for (auto& z : r.e)
        for (auto& c : z) c /= g0;
    }
  }
  return r;
}

ZMat to_zmat(const CMatrix& m) {
  Integer l(1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (const auto& c : m(i, j).coeffs()) l = lcm(l, Integer(c.get_den()));
  ZMat z;
  z.n = m.rows();
  z.den = from_mpz(l);
  if (mpz_sizeinbase(l.get_mpz_t(), 2) > 24) throw Overflow{};
  z.e.assign(z.n * z.n, ZC{});
  for (std::size_t i = 0; i < z.n; ++i)
    for (std::size_t j = 0; j < z.n; ++j)
      for (std::size_t k = 0; k < 8; ++k) {
        Rational v = m(i, j).coeff(static_cast<int>(k)) * Rational(l);
        if (mpz_sizeinbase(v.get_num_mpz_t(), 2) > 24) throw Overflow{};
        z.e[i * z.n + j][k] = from_mpz(v.get_num());
      }
  return z;
}

CycloNum to_cyclo(const ZC& z, I128 den) {
  CycloNum::Coeffs c;
  const Integer d = to_mpz(den);
  for (std::size_t k = 0; k < 8; ++k) c[k] = z[k] == 0 ? Rational(0) : Rational(to_mpz(z[k]), d);
  for (auto& x : c) x.canonicalize();
  return CycloNum(c);
}

CMatrix to_cmatrix(const ZMat& z) {
  CMatrix m(z.n, z.n);
  for (std::size_t i = 0; i < z.n; ++i)
    for (std::size_t j = 0; j < z.n; ++j) m(i, j) = to_cyclo(z.e[i * z.n + j], z.den);
  return m;
}

const std::array<std::complex<double>, 8>& zeta_powers() {
  static const std::array<std::complex<double>, 8> p = [] {
    std::array<std::complex<double>, 8> a;
    for (int k = 0; k < 8; ++k) a[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / 24.0);
    return a;
  }();
  return p;
}

// Numeric filter for rank ≥ 3: candidate k from the eigenvalue ratios.
std::optional<int> candidate_order(const ZMat& z) {
  const auto& zp = zeta_powers();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(z.n), static_cast<Eigen::Index>(z.n));
  const double den = static_cast<double>(z.den);
  for (std::size_t i = 0; i < z.n; ++i)
    for (std::size_t j = 0; j < z.n; ++j) {
      std::complex<double> v = 0;
      for (std::size_t k = 0; k < 8; ++k) v += static_cast<double>(z.e[i * z.n + j][k]) * zp[k];
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v / den;
    }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  const auto& ev = es.eigenvalues();
  int k = 1;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    const std::complex<double> ratio = ev(i) / ev(0);
    if (std::abs(std::abs(ratio) - 1.0) > 1e-4) return std::nullopt;
    const double turns = std::arg(ratio) / (2.0 * std::numbers::pi) * kMaxOrder;
    const double nearest = std::round(turns);
    if (std::abs(turns - nearest) > 1e-3) return std::nullopt;
    int j = static_cast<int>(nearest) % kMaxOrder;
    if (j < 0) j += kMaxOrder;
    const int o = kMaxOrder / std::gcd(j, kMaxOrder);
    k = std::lcm(k, o);
  }
  return k;
}

bool power_is_scalar(const CMatrix& m, int k) {
  CMatrix r = CMatrix::identity(m.rows()), b = m;
  for (unsigned e = static_cast<unsigned>(k); e; e >>= 1) {
    if (e & 1U) r = r * b;
    if (e > 1) b = b * b;
  }
  return r.is_scalar();
}

struct Letter {
  std::size_t gen;
  bool inverse;
};

void record(ScanSummary& s, WordReport&& rep, bool integral, bool keep) {
  ++s.words;
  if (rep.identity) ++s.identities;
  if (rep.unipotent) {
    ++s.unipotents;
    s.unipotent_words.push_back(rep.word);
  }
  if (!integral) {
    s.all_traces_integral = false;
    if (s.non_integral_words.size() < 10) s.non_integral_words.push_back(rep.word);
  }
  ++s.order_histogram[order_key(rep.projective_order)];
  if (keep) s.reports.push_back(std::move(rep));
}

bool integral_trace(const CycloNum& tr) { return tr.is_rational() && tr.rational_value().get_den() == 1; }

std::string word_string(const std::vector<Letter>& w) {
  std::string s;
  for (const auto& l : w) s.push_back(static_cast<char>((l.inverse ? 'A' : 'a') + static_cast<int>(l.gen)));
  return s;
}

// Visits reduced words whose first letter lies in `first`, plus the empty
// word when include_empty is set, in lexicographic DFS order.
template <class Node, class Extend, class Visit>
void dfs(std::size_t gens, int max_len, const std::vector<std::size_t>& first, bool include_empty, const Node& root,
         Extend extend, Visit visit) {
  std::vector<Letter> word;
  if (include_empty) visit(word, root);
  std::function<void(const Node&)> rec = [&](const Node& node) {
    if (static_cast<int>(word.size()) == max_len) return;
    for (std::size_t idx = 0; idx < 2 * gens; ++idx) {
      const Letter l{idx % gens, idx >= gens};
      if (word.empty() && std::find(first.begin(), first.end(), idx) == first.end()) continue;
      if (!word.empty() && word.back().gen == l.gen && word.back().inverse != l.inverse) continue;
      word.push_back(l);
      const Node next = extend(node, idx);
      visit(word, next);
      rec(next);
      word.pop_back();
    }
  };
  rec(root);
}

}  // namespace

ScanSummary word_scan(const LocalSystemTuple& t, const ScanOptions& opt) {
  if (opt.max_len < 1) throw std::invalid_argument("word scan needs max_len >= 1");
  std::vector<CMatrix> gens;
  if (opt.generator_words.empty()) gens = t.matrices();
  else
    for (const auto& w : opt.generator_words) gens.push_back(evaluate_word(t.matrices(), w));
  const std::size_t s = gens.size(), n = t.rank();
  std::vector<CMatrix> letters;  // index: generators, then inverses
  for (const auto& g : gens) letters.push_back(g);
  for (const auto& g : gens) letters.push_back(g.inverse());

  auto classify = [&](const std::string& word, const CMatrix& m, std::optional<int> numeric_hint, bool use_hint) {
    WordReport rep;
    rep.word = word;
    rep.trace = m.trace();
    rep.identity = m.is_identity();
    rep.unipotent = !rep.identity && rep.trace == CycloNum(static_cast<long>(n)) && is_unipotent(m);
    if (n == 1) rep.projective_order = 1;
    else if (n == 2) rep.projective_order = rank2_order(rep.trace, m.det(), m.is_scalar());
    else if (!use_hint) rep.projective_order = projective_order_exact(m);
    else if (numeric_hint && power_is_scalar(m, *numeric_hint)) rep.projective_order = *numeric_hint;
    return rep;
  };

  unsigned threads = std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(2 * s)));
  std::vector<std::vector<std::size_t>> firsts(threads);
  for (std::size_t idx = 0; idx < 2 * s; ++idx) firsts[idx % threads].push_back(idx);

  auto run_exact = [&](unsigned part) {
    ScanSummary out;
    dfs<CMatrix>(s, opt.max_len, firsts[part], part == 0, CMatrix::identity(n),
                 [&](const CMatrix& node, std::size_t idx) { return node * letters[idx]; },
                 [&](const std::vector<Letter>& w, const CMatrix& m) {
                   WordReport rep = classify(word_string(w), m, std::nullopt, false);
                   const bool integral = integral_trace(rep.trace);
                   record(out, std::move(rep), integral, opt.keep_reports);
                 });
    return out;
  };

  auto run_fast = [&](unsigned part, const std::vector<ZMat>& zl) {
    ScanSummary out;
    ZMat root;
    root.n = n;
    root.e.assign(n * n, ZC{});
    for (std::size_t i = 0; i < n; ++i) root.e[i * n + i][0] = 1;
    const I128 nn = static_cast<I128>(n);
    dfs<ZMat>(s, opt.max_len, firsts[part], part == 0, root,
              [&](const ZMat& node, std::size_t idx) { return zproduct(node, zl[idx]); },
              [&](const std::vector<Letter>& w, const ZMat& z) {
                ZC tr{};
                for (std::size_t i = 0; i < n; ++i)
                  for (std::size_t k = 0; k < 8; ++k) tr[k] += z.e[i * n + i][k];
                bool identity = z.den == 1;
                for (std::size_t i = 0; i < n && identity; ++i)
                  for (std::size_t j = 0; j < n && identity; ++j)
                    for (std::size_t k = 0; k < 8 && identity; ++k)
                      identity = z.e[i * n + j][k] == ((i == j && k == 0) ? 1 : 0);
                bool integral = tr[0] % z.den == 0;
                for (std::size_t k = 1; k < 8; ++k) integral = integral && tr[k] == 0;
                const bool trace_n = integral && tr[0] == nn * z.den;
                std::optional<int> hint;
                if (n >= 3 && !identity) hint = candidate_order(z);
                const bool need_exact = opt.keep_reports || trace_n || n == 2 || hint.has_value();
                WordReport rep;
                if (need_exact) {
                  rep = classify(word_string(w), to_cmatrix(z), hint, true);
                } else {
                  rep.word = word_string(w);
                  rep.identity = identity;
                  if (n == 1) rep.projective_order = 1;
                }
                if (identity) rep.projective_order = 1;
                record(out, std::move(rep), integral, opt.keep_reports);
              });
    return out;
  };

  std::vector<ZMat> zl;
  bool fast = !opt.force_exact;
  if (fast) {
    try {
      for (const auto& l : letters) zl.push_back(to_zmat(l));
    } catch (const Overflow&) {
      fast = false;
    }
  }

  auto run_all = [&](bool use_fast) {
    std::vector<ScanSummary> parts(threads);
    if (threads == 1) {
      parts[0] = use_fast ? run_fast(0, zl) : run_exact(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(threads);
      for (unsigned p = 0; p < threads; ++p)
        pool.emplace_back([&, p] {
          try {
            parts[p] = use_fast ? run_fast(p, zl) : run_exact(p);
          } catch (...) {
            errors[p] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    return parts;
  };

  std::vector<ScanSummary> parts;
  if (fast) {
    try {
      parts = run_all(true);
    } catch (const Overflow&) {
      fast = false;
    }
  }
  if (!fast) parts = run_all(false);

  ScanSummary total;
  total.used_fast_path = fast;
  for (auto& p : parts) {
    total.words += p.words;
    total.identities += p.identities;
    total.unipotents += p.unipotents;
    total.unipotent_words.insert(total.unipotent_words.end(), p.unipotent_words.begin(), p.unipotent_words.end());
    total.all_traces_integral = total.all_traces_integral && p.all_traces_integral;
    for (auto& w : p.non_integral_words)
      if (total.non_integral_words.size() < 10) total.non_integral_words.push_back(w);
    for (const auto& [k, v] : p.order_histogram) total.order_histogram[k] += v;
    for (auto& r : p.reports) total.reports.push_back(std::move(r));
  }
  // Parts interleave first letters; restore lexicographic order.
  auto letter_rank = [](char c) { return c >= 'a' ? c - 'a' : 64 + (c - 'A'); };
  auto lex = [&](const std::string& a, const std::string& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](char x, char y) { return letter_rank(x) < letter_rank(y); });
  };
  std::stable_sort(total.unipotent_words.begin(), total.unipotent_words.end(), lex);
  std::stable_sort(total.reports.begin(), total.reports.end(), [&](const WordReport& a, const WordReport& b) { return lex(a.word, b.word); });
  return total;
}

}  // namespace clausenlab::conv
