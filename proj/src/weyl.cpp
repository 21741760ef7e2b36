#include "clausenlab/weyl.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace clausenlab::weyl {

std::string to_string(DConvention c) { return c == DConvention::Euler ? "tddt" : "ddt"; }

std::string to_string(DetConvention c) {
  return c == DetConvention::FirstColRight ? "first-col-right" : "last-row-left";
}

DConvention parse_d_convention(const std::string& s) {
  if (s == "tddt" || s == "euler") return DConvention::Euler;
  if (s == "ddt") return DConvention::DDt;
  throw std::invalid_argument("unknown D convention: " + s + " (expected tddt or ddt)");
}

DetConvention parse_det_convention(const std::string& s) {
  if (s == "first-col-right") return DetConvention::FirstColRight;
  if (s == "last-row-left") return DetConvention::LastRowLeft;
  throw std::invalid_argument("unknown determinant convention: " + s);
}

WeylOp WeylOp::constant(const Rational& c, DConvention conv) { return monomial(0, 0, c, conv); }
WeylOp WeylOp::t(DConvention conv) { return monomial(1, 0, Rational(1), conv); }
WeylOp WeylOp::D(DConvention conv) { return monomial(0, 1, Rational(1), conv); }

WeylOp WeylOp::monomial(int a, int b, const Rational& c, DConvention conv) {
  WeylOp r(conv);
  r.add_term(a, b, c);
  return r;
}

Rational WeylOp::coeff(int a, int b) const {
  auto it = terms_.find({a, b});
  return it == terms_.end() ? Rational(0) : it->second;
}

void WeylOp::add_term(int a, int b, const Rational& c) {
  if (a < 0 || b < 0) throw std::invalid_argument("negative exponent in WeylOp");
  if (sgn(c) == 0) return;
  auto [it, fresh] = terms_.try_emplace({a, b}, c);
  if (!fresh) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

int WeylOp::d_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

int WeylOp::t_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first);
  return d;
}

WeylOp& WeylOp::operator+=(const WeylOp& o) {
  if (o.conv_ != conv_) throw std::invalid_argument("mixing D conventions");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

WeylOp& WeylOp::operator-=(const WeylOp& o) {
  if (o.conv_ != conv_) throw std::invalid_argument("mixing D conventions");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

WeylOp operator*(const Rational& s, const WeylOp& a) {
  WeylOp r(a.conv_);
  for (const auto& [k, c] : a.terms_) r.add_term(k.first, k.second, s * c);
  return r;
}

WeylOp operator*(const WeylOp& x, const WeylOp& y) {
  if (x.conv_ != y.conv_) throw std::invalid_argument("mixing D conventions");
  WeylOp r(x.conv_);
  for (const auto& [kx, u] : x.terms_) {
    const auto [a, b] = kx;
    for (const auto& [ky, v] : y.terms_) {
      const auto [c, d] = ky;
      const Rational uv = u * v;
      if (x.conv_ == DConvention::Euler) {
        // t^a D^b t^c D^d = t^{a+c} (D + c)^b D^d
        Integer cpow = 1;
        for (int k = b; k >= 0; --k) {
          // coefficient of D^k in (D + c)^b is C(b,k) c^{b−k}
          Rational coef = uv * Rational(binomial(static_cast<unsigned>(b), static_cast<unsigned>(k)) * cpow);
          r.add_term(a + c, k + d, coef);
          cpow *= c;
        }
      } else {
        // D^b t^c = Σ_k C(b,k) c(c−1)…(c−k+1) t^{c−k} D^{b−k}
        Integer fall = 1;
        for (int k = 0; k <= std::min(b, c); ++k) {
          Rational coef = uv * Rational(binomial(static_cast<unsigned>(b), static_cast<unsigned>(k)) * fall);
          r.add_term(a + c - k, b - k + d, coef);
          fall *= (c - k);
        }
      }
    }
  }
  return r;
}

WeylOp WeylOp::pow(unsigned n) const {
  WeylOp r = constant(Rational(1), conv_);
  for (unsigned k = 0; k < n; ++k) r = r * *this;
  return r;
}

Poly<Rational> WeylOp::layer(int a) const {
  std::vector<Rational> c;
  for (const auto& [k, v] : terms_) {
    if (k.first != a) continue;
    if (c.size() <= static_cast<std::size_t>(k.second)) c.resize(static_cast<std::size_t>(k.second) + 1);
    c[static_cast<std::size_t>(k.second)] = v;
  }
  return Poly<Rational>(std::move(c));
}

std::map<int, Poly<Rational>> WeylOp::act_on_power() const {
  std::map<int, Poly<Rational>> out;
  const Poly<Rational> rho = Poly<Rational>::x();
  for (const auto& [k, v] : terms_) {
    const auto [a, b] = k;
    if (conv_ == DConvention::Euler) {
      // t^a D^b t^ρ = ρ^b t^{ρ+a}
      out[a] += Poly<Rational>::monomial(static_cast<std::size_t>(b), v);
    } else {
      // t^a (d/dt)^b t^ρ = ρ(ρ−1)…(ρ−b+1) t^{ρ+a−b}
      Poly<Rational> f(v);
      for (int i = 0; i < b; ++i) f *= rho - Poly<Rational>(Rational(i));
      out[a - b] += f;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

namespace {

// S(n, k), Stirling numbers of the second kind.
Integer stirling2(int n, int k) {
  std::vector<std::vector<Integer>> s(static_cast<std::size_t>(n) + 1, std::vector<Integer>(static_cast<std::size_t>(n) + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return k <= n ? s[n][k] : Integer(0);
}

}  // namespace

std::vector<Poly<Rational>> WeylOp::to_derivative_form() const {
  std::vector<Poly<Rational>> p;
  auto bump = [&](std::size_t order, const Poly<Rational>& v) {
    if (p.size() <= order) p.resize(order + 1);
    p[order] += v;
  };
  for (const auto& [k, v] : terms_) {
    const auto [a, b] = k;
    if (conv_ == DConvention::DDt) {
      bump(static_cast<std::size_t>(b), Poly<Rational>::monomial(static_cast<std::size_t>(a), v));
    } else {
      // (t d/dt)^b = Σ_j S(b,j) t^j (d/dt)^j
      for (int j = 0; j <= b; ++j) {
        Integer s = stirling2(b, j);
        if (s == 0) continue;
        bump(static_cast<std::size_t>(j), Poly<Rational>::monomial(static_cast<std::size_t>(a + j), v * Rational(s)));
      }
    }
  }
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

std::string WeylOp::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.get_str() << ")";
    if (k.first) os << "*t^" << k.first;
    if (k.second) os << "*D^" << k.second;
  }
  return os.str();
}

namespace {

OpMatrix minor_of(const OpMatrix& m, std::size_t row, std::size_t col) {
  OpMatrix out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<WeylOp> r;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != col) r.push_back(m[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

WeylOp right_determinant(const OpMatrix& m, DetConvention conv) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("right determinant of an empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("right determinant needs a square matrix");
  if (n == 1) return m[0][0];
  const DConvention dc = m[0][0].convention();
  WeylOp total(dc);
  for (std::size_t k = 0; k < n; ++k) {
    const bool col_mode = conv == DetConvention::FirstColRight;
    const WeylOp& entry = col_mode ? m[k][0] : m[n - 1][k];
    if (entry.is_zero()) continue;
    const OpMatrix mi = col_mode ? minor_of(m, k, 0) : minor_of(m, n - 1, k);
    const WeylOp sub = right_determinant(mi, conv);
    WeylOp term = col_mode ? sub * entry : entry * sub;
    const std::size_t parity = col_mode ? k : (n - 1 + k);
    if (parity % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

std::optional<WeylOp> left_divide_by_D(const WeylOp& op) {
  WeylOp x(op.convention());
  if (op.convention() == DConvention::Euler) {
    // D·(t^a q(D)) = t^a (D + a) q(D): each layer must be divisible by ρ + a.
    std::map<int, bool> seen;
    for (const auto& [k, v] : op.terms()) seen[k.first] = true;
    for (const auto& [a, unused] : seen) {
      auto [q, r] = op.layer(a).divmod(Poly<Rational>{Rational(a), Rational(1)});
      if (!r.is_zero()) return std::nullopt;
      for (std::size_t b = 0; b < q.coeffs().size(); ++b) x.add_term(a, static_cast<int>(b), q.coeffs()[b]);
    }
    return x;
  }
  // D = d/dt: D·(t^a D^b) = t^a D^{b+1} + a t^{a−1} D^b. Peel off the
  // highest t-power first.
  WeylOp rest = op;
  while (!rest.is_zero()) {
    auto it = std::prev(rest.terms().end());
    const auto [a, b] = it->first;
    const Rational c = it->second;
    if (b == 0) return std::nullopt;
    x.add_term(a, b - 1, c);
    rest -= WeylOp::D(DConvention::DDt) * WeylOp::monomial(a, b - 1, c, DConvention::DDt);
  }
  return x;
}

DNMatrix::DNMatrix(QMatrix a) : a_(std::move(a)) {
  if (!a_.is_square() || a_.rows() < 2) throw std::invalid_argument("DN matrix must be square of size at least 2");
  const int n = static_cast<int>(a_.rows()) - 1;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const Rational& v = a_(i, j);
      if (i - j > 1 && sgn(v) != 0) throw std::invalid_argument("DN matrix: a_ij must vanish for i-j > 1");
      if (i - j == 1 && v != 1) throw std::invalid_argument("DN matrix: subdiagonal entries must be 1");
      if (i - j < 1 && v != a_(n - j, n - i)) throw std::invalid_argument("DN matrix: a_ij must equal a_{N-j,N-i}");
    }
}

DNMatrix DNMatrix::zero(int N) {
  QMatrix a(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N) + 1);
  for (int i = 1; i <= N; ++i) a(i, i - 1) = 1;
  return DNMatrix(std::move(a));
}

DNMatrix DNMatrix::random(int N, std::uint64_t seed, int num_bound, int den_bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-num_bound, num_bound);
  std::uniform_int_distribution<int> den(1, den_bound);
  QMatrix a(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N) + 1);
  for (int i = 1; i <= N; ++i) a(i, i - 1) = 1;
  for (int i = 0; i <= N; ++i)
    for (int j = i; j <= N; ++j) {
      if (i + j > N) continue;  // (N−j, N−i) is the mirror representative
      Rational v = make_rational(num(rng), den(rng));
      a(i, j) = v;
      a(N - j, N - i) = v;
    }
  return DNMatrix(std::move(a));
}

Poly<Rational> DNMatrix::det_one_minus_tA() const {
  // det(I − tA) = t^{n} χ_A(1/t): the reversed characteristic polynomial.
  auto cp = a_.charpoly().coeffs();
  std::vector<Rational> rev(cp.rbegin(), cp.rend());
  return Poly<Rational>(std::move(rev));
}

OpMatrix dn_operator_matrix(const DNMatrix& a, DConvention conv) {
  const int n = a.N();
  const WeylOp Dt = WeylOp::D(conv) * WeylOp::t(conv);
  OpMatrix m(static_cast<std::size_t>(n) + 1, std::vector<WeylOp>(static_cast<std::size_t>(n) + 1, WeylOp(conv)));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      WeylOp e(conv);
      if (i == j) e = WeylOp::D(conv);
      const int power = j - i + 1;
      if (power >= 0 && sgn(a(i, j)) != 0) e -= a(i, j) * Dt.pow(static_cast<unsigned>(power));
      m[i][j] = std::move(e);
    }
  return m;
}

WeylOp dn_build(const DNMatrix& a, DetConvention det, DConvention conv) {
  const WeylOp d = right_determinant(dn_operator_matrix(a, conv), det);
  auto q = left_divide_by_D(d);
  if (!q) throw MathError("right determinant is not left-divisible by D (convention " + to_string(det) + ", D=" + to_string(conv) + ")");
  return *q;
}

Poly<Rational> dn_indicial_at_zero(const WeylOp& op) {
  if (op.convention() == DConvention::Euler) return op.layer(0);
  // t^a (d/dt)^b = t^{a−b} D(D−1)…(D−b+1) with D = t d/dt.
  auto act = op.act_on_power();
  if (act.empty()) return Poly<Rational>();
  return act.begin()->second;
}

bool is_scaled_power(const Poly<Rational>& p, int n) {
  if (p.degree() != n) return false;
  for (int k = 0; k < n; ++k)
    if (sgn(p[static_cast<std::size_t>(k)]) != 0) return false;
  return true;
}

SingularLocusVerdict dn_singular_locus(const WeylOp& op, const DNMatrix& a) {
  SingularLocusVerdict v;
  auto form = op.to_derivative_form();
  if (form.empty()) throw MathError("singular locus of the zero operator");
  v.leading = form.back();
  int k = 0;
  while (sgn(v.leading[static_cast<std::size_t>(k)]) == 0) ++k;
  v.t_power_stripped = k;
  v.reduced = Poly<Rational>(std::vector<Rational>(v.leading.coeffs().begin() + k, v.leading.coeffs().end()));
  v.det_one_minus_tA = a.det_one_minus_tA();
  // Both have nonzero constant term; compare after normalizing it to 1.
  v.proportional = v.reduced.scaled(Rational(1) / v.reduced[0]) == v.det_one_minus_tA.scaled(Rational(1) / v.det_one_minus_tA[0]);
  const auto& dpoly = v.det_one_minus_tA;
  v.det_squarefree = dpoly.degree() <= 0 || gcd(dpoly, dpoly.derivative()).degree() == 0;
  return v;
}

}  // namespace clausenlab::weyl
