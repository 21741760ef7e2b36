#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clausenlab/field_traits.hpp"

namespace clausenlab {

/// Dense univariate polynomial, ascending coefficients, never with a
/// trailing zero. The zero polynomial has degree kZeroDegree.
template <class F>
class Poly {
public:
  static constexpr int kZeroDegree = -1;

  Poly() = default;
  Poly(F constant) {  // NOLINT: scalars embed implicitly
    c_.push_back(std::move(constant));
    trim();
  }
  Poly(std::initializer_list<F> ascending) : c_(ascending) { trim(); }
  explicit Poly(std::vector<F> ascending) : c_(std::move(ascending)) { trim(); }

  /// x^n.
  static Poly monomial(std::size_t n, F coeff = F(1)) {
    std::vector<F> c(n + 1, F(0));
    c[n] = std::move(coeff);
    return Poly(std::move(c));
  }
  /// x.
  static Poly x() { return monomial(1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<F>& coeffs() const { return c_; }
  /// Coefficient of x^k (zero past the degree).
  F operator[](std::size_t k) const { return k < c_.size() ? c_[k] : F(0); }
  const F& leading() const {
    if (c_.empty()) throw MathError("leading coefficient of the zero polynomial");
    return c_.back();
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Poly operator-() const {
    Poly r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> c(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (clausenlab::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly scaled(const F& s) const {
    Poly r(*this);
    for (auto& v : r.c_) v *= s;
    r.trim();
    return r;
  }

  Poly pow(unsigned n) const {
    Poly r(F(1)), b(*this);
    while (n) {
      if (n & 1U) r *= b;
      n >>= 1U;
      if (n) b *= b;
    }
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> d(c_.size() - 1, F(0));
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * F(static_cast<long>(k));
    return Poly(std::move(d));
  }

  /// Horner evaluation at any value type the coefficients multiply into.
  template <class V>
  V eval(const V& at) const {
    V acc = V(F(0));
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * at + V(c_[k]);
    return acc;
  }
  F operator()(const F& at) const { return eval<F>(at); }

  /// Euclidean division (fields only).
  std::pair<Poly, Poly> divmod(const Poly& d) const
    requires is_field_v<F>
  {
    if (d.is_zero()) throw MathError("polynomial division by zero");
    Poly r(*this);
    std::vector<F> q;
    if (r.degree() >= d.degree()) q.assign(static_cast<std::size_t>(r.degree() - d.degree() + 1), F(0));
    F lead_inv = F(1) / d.leading();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
      F f = r.leading() * lead_inv;
      q[shift] = f;
      for (std::size_t k = 0; k < d.c_.size(); ++k) r.c_[k + shift] -= f * d.c_[k];
      r.trim();
    }
    return {Poly(std::move(q)), r};
  }

  Poly monic() const
    requires is_field_v<F>
  {
    if (is_zero()) return *this;
    return scaled(F(1) / leading());
  }

  std::string str(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (clausenlab::is_zero(c_[k])) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << coeff_str(c_[k]) << ")";
      if (k >= 1) os << "*" << var;
      if (k >= 2) os << "^" << k;
    }
    return os.str();
  }

private:
  static std::string coeff_str(const F& v) {
    if constexpr (requires { v.str(); }) {
      return v.str();
    } else {
      return to_string(v);
    }
  }

  void trim() {
    while (!c_.empty() && clausenlab::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<F> c_;
};

template <class F>
bool is_zero(const Poly<F>& p) {
  return p.is_zero();
}

template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b)
  requires is_field_v<F>
{
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace detail {

// Division-free cofactor expansion; the matrices here are at most
// (2d−1)×(2d−1) for small d.
template <class R>
R laplace_det(const std::vector<std::vector<R>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return R(1);
  if (n == 1) return m[0][0];
  R total(0);
  for (std::size_t i = 0; i < n; ++i) {
    if (clausenlab::is_zero(m[i][0])) continue;
    std::vector<std::vector<R>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == i) continue;
      minor.emplace_back(m[r].begin() + 1, m[r].end());
    }
    R term = m[i][0] * laplace_det(minor);
    if (i % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

template <class F>
F gauss_det(std::vector<std::vector<F>> m) {
  const std::size_t n = m.size();
  F det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && clausenlab::is_zero(m[piv][col])) ++piv;
    if (piv == n) return F(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    F inv = F(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (clausenlab::is_zero(m[r][col])) continue;
      F f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace detail

/// Discriminant normalized so that disc(x³ + px + q) = −4p³ − 27q² and
/// disc(ax² + bx + c) = b² − 4ac. Computed as (−1)^{d(d−1)/2}·det S′
/// where S′ is the Sylvester matrix of (p, p′) with the leading
/// coefficient divided out of its first column, so no division is needed
/// and the coefficients may come from any commutative ring.
///
/// `degree` is the formal degree d ≥ deg p; the leading coefficient p[d]
/// may vanish, in which case this is the generic discriminant formula of
/// degree d specialized, e.g. disc₂(bx + c) = b².
template <class R>
R discriminant(const Poly<R>& p, int degree) {
  const int d = degree;
  if (d < p.degree()) throw std::invalid_argument("formal degree below actual degree");
  if (d < 1 || p.degree() < 0) throw MathError("discriminant of a constant polynomial");
  if (d == 1) return R(1);
  const std::size_t n = static_cast<std::size_t>(2 * d - 1);
  std::vector<std::vector<R>> s(n, std::vector<R>(n, R(0)));
  // d−1 shifted rows of p (descending coefficients), then d rows of p′.
  for (int r = 0; r < d - 1; ++r)
    for (int k = 0; k <= d; ++k) s[r][r + k] = p[static_cast<std::size_t>(d - k)];
  for (int r = 0; r < d; ++r)
    for (int k = 0; k <= d - 1; ++k) s[d - 1 + r][r + k] = R(static_cast<long>(d - k)) * p[static_cast<std::size_t>(d - k)];
  // Column 0 holds lc(p) in row 0 and d·lc(p) in row d−1.
  s[0][0] = R(1);
  s[static_cast<std::size_t>(d - 1)][0] = R(static_cast<long>(d));
  R det;
  if constexpr (is_field_v<R>) {
    det = detail::gauss_det(std::move(s));
  } else {
    det = detail::laplace_det(s);
  }
  const long sign_exp = static_cast<long>(d) * (d - 1) / 2;
  return sign_exp % 2 == 0 ? det : R(0) - det;
}

template <class R>
R discriminant(const Poly<R>& p) {
  if (p.degree() < 1) throw MathError("discriminant of a constant polynomial");
  return discriminant(p, p.degree());
}

}  // namespace clausenlab
