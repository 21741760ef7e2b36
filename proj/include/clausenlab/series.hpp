#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clausenlab/field_traits.hpp"
#include "clausenlab/poly.hpp"

namespace clausenlab {

/// Truncated power series in up to three variables. A stored exponent
/// never exceeds the per-variable truncation; absent means zero. With
/// truncation kUnbounded in every variable the type is an ordinary
/// polynomial ring.
template <class F>
class MultiSeries {
public:
  static constexpr int kMaxVars = 3;
  static constexpr int kUnbounded = std::numeric_limits<int>::max() / 4;
  using Exponents = std::array<int, kMaxVars>;
  using Terms = std::map<Exponents, F>;

  MultiSeries() = default;
  MultiSeries(std::vector<std::string> vars, Exponents trunc) : vars_(std::move(vars)), trunc_(trunc) {
    if (vars_.empty() || vars_.size() > kMaxVars) throw std::invalid_argument("series needs 1 to 3 variables");
    for (std::size_t k = vars_.size(); k < kMaxVars; ++k) trunc_[k] = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (trunc_[k] < 0) throw std::invalid_argument("negative truncation order");
  }

  /// Same variables and truncation, value c.
  MultiSeries constant(const F& c) const {
    MultiSeries r(vars_, trunc_);
    r.set({0, 0, 0}, c);
    return r;
  }
  /// c·(variable k).
  MultiSeries variable(std::size_t k, const F& c = F(1)) const {
    MultiSeries r(vars_, trunc_);
    Exponents e{0, 0, 0};
    e.at(k) = 1;
    r.set(e, c);
    return r;
  }

  const std::vector<std::string>& vars() const { return vars_; }
  const Exponents& truncation() const { return trunc_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  F coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? F(0) : it->second;
  }
  bool in_window(const Exponents& e) const {
    for (int k = 0; k < kMaxVars; ++k)
      if (e[k] < 0 || e[k] > trunc_[k]) return false;
    return true;
  }
  /// Stores c at e; silently dropped outside the truncation window.
  void set(const Exponents& e, F c) {
    if (!in_window(e)) return;
    if (clausenlab::is_zero(c))
      terms_.erase(e);
    else
      terms_[e] = std::move(c);
  }
  void add_to(const Exponents& e, const F& c) {
    if (!in_window(e) || clausenlab::is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (clausenlab::is_zero(it->second)) terms_.erase(it);
    }
  }

  MultiSeries& operator+=(const MultiSeries& o) {
    check_compatible(o);
    clamp_to(o.trunc_);
    for (const auto& [e, c] : o.terms_) add_to(e, c);
    return *this;
  }
  MultiSeries& operator-=(const MultiSeries& o) {
    check_compatible(o);
    clamp_to(o.trunc_);
    for (const auto& [e, c] : o.terms_) add_to(e, -c);
    return *this;
  }
  MultiSeries operator-() const {
    MultiSeries r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
  friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) { return a.mul(b); }
  MultiSeries& operator*=(const MultiSeries& o) { return *this = mul(o); }
  friend bool operator==(const MultiSeries& a, const MultiSeries& b) {
    return a.vars_ == b.vars_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

  MultiSeries scaled(const F& s) const {
    MultiSeries r(vars_, trunc_);
    if (clausenlab::is_zero(s)) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
    return r;
  }

  /// Product truncated to the smaller truncation per variable and, when
  /// max_total is given, to total degree ≤ max_total.
  MultiSeries mul(const MultiSeries& o, std::optional<int> max_total = std::nullopt) const {
    check_compatible(o);
    Exponents tr;
    for (int k = 0; k < kMaxVars; ++k) tr[k] = std::min(trunc_[k], o.trunc_[k]);
    MultiSeries r(vars_, tr);
    if (terms_.empty() || o.terms_.empty()) return r;
    Exponents hi_a = max_exponents(), hi_b = o.max_exponents();
    Exponents dim;
    std::size_t cells = 1;
    for (int k = 0; k < kMaxVars; ++k) {
      dim[k] = std::min(tr[k], hi_a[k] + hi_b[k]) + 1;
      cells *= static_cast<std::size_t>(dim[k]);
    }
    const int cap = max_total.value_or(kUnbounded);
    // Dense accumulator over the reachable box; storage stays sparse.
    std::vector<F> acc(cells, F(0));
    std::vector<bool> touched(cells, false);
    for (const auto& [ea, ca] : terms_) {
      const int da = ea[0] + ea[1] + ea[2];
      if (da > cap) continue;
      for (const auto& [eb, cb] : o.terms_) {
        if (ea[0] + eb[0] >= dim[0] || ea[1] + eb[1] >= dim[1] || ea[2] + eb[2] >= dim[2]) continue;
        if (da + eb[0] + eb[1] + eb[2] > cap) continue;
        std::size_t idx = (static_cast<std::size_t>(ea[0] + eb[0]) * dim[1] + (ea[1] + eb[1])) * dim[2] + (ea[2] + eb[2]);
        acc[idx] += ca * cb;
        touched[idx] = true;
      }
    }
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (!touched[idx] || clausenlab::is_zero(acc[idx])) continue;
      Exponents e{static_cast<int>(idx / (static_cast<std::size_t>(dim[1]) * dim[2])),
                  static_cast<int>((idx / dim[2]) % dim[1]), static_cast<int>(idx % dim[2])};
      r.terms_.emplace(e, std::move(acc[idx]));
    }
    return r;
  }

  /// Drops everything above the new (smaller or equal) truncation.
  MultiSeries truncated(Exponents tr) const {
    for (int k = 0; k < kMaxVars; ++k)
      if (tr[k] > trunc_[k]) throw std::invalid_argument("cannot raise truncation order");
    MultiSeries r(vars_, tr);
    for (const auto& [e, c] : terms_)
      if (r.in_window(e)) r.terms_.emplace(e, c);
    return r;
  }
  MultiSeries truncated_total(int max_total) const {
    MultiSeries r(vars_, trunc_);
    for (const auto& [e, c] : terms_)
      if (e[0] + e[1] + e[2] <= max_total) r.terms_.emplace(e, c);
    return r;
  }

  /// Multiplies by (variable k)^shift, raising that truncation by shift.
  MultiSeries shifted(std::size_t k, int shift) const {
    if (shift < 0) throw std::invalid_argument("negative shift");
    Exponents tr = trunc_;
    if (tr[k] != kUnbounded) tr[k] += shift;
    MultiSeries r(vars_, tr);
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f[k] += shift;
      r.terms_.emplace(f, c);
    }
    return r;
  }

  Exponents max_exponents() const {
    Exponents hi{0, 0, 0};
    for (const auto& [e, c] : terms_)
      for (int k = 0; k < kMaxVars; ++k) hi[k] = std::max(hi[k], e[k]);
    return hi;
  }

  /// Evaluates a polynomial (finite sum) at a point.
  F eval(const std::array<F, kMaxVars>& at) const {
    F total(0);
    for (const auto& [e, c] : terms_) {
      F term = c;
      for (int k = 0; k < kMaxVars; ++k)
        for (int p = 0; p < e[k]; ++p) term *= at[k];
      total += term;
    }
    return total;
  }

private:
  void check_compatible(const MultiSeries& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("series variable mismatch");
  }
  void clamp_to(const Exponents& other) {
    bool lower = false;
    for (int k = 0; k < kMaxVars; ++k)
      if (other[k] < trunc_[k]) lower = true;
    if (!lower) return;
    Exponents tr;
    for (int k = 0; k < kMaxVars; ++k) tr[k] = std::min(trunc_[k], other[k]);
    *this = truncated(tr);
  }

  std::vector<std::string> vars_;
  Exponents trunc_{0, 0, 0};
  Terms terms_;
};

template <class F>
bool is_zero(const MultiSeries<F>& s) {
  return s.is_zero();
}

/// Inverse square root by Newton iteration T ← T + T(1 − sT²)/2, doubling
/// the exact total degree each step. The seed is 1/root where root² equals
/// the constant term; by default root is the positive rational square root.
template <class F>
MultiSeries<F> series_inv_sqrt(const MultiSeries<F>& s, std::optional<F> root = std::nullopt) {
  using S = MultiSeries<F>;
  const auto& tr = s.truncation();
  int total = 0;
  for (std::size_t k = 0; k < s.vars().size(); ++k) {
    if (tr[k] >= S::kUnbounded) throw std::invalid_argument("inverse square root needs a finite truncation");
    total += tr[k];
  }
  const F c0 = s.coeff({0, 0, 0});
  if (clausenlab::is_zero(c0)) throw MathError("inverse square root: constant term is zero");
  if (!root) {
    if constexpr (std::is_same_v<F, Rational>) {
      auto r = exact_sqrt(c0);
      if (!r) throw MathError("inverse square root: constant term " + to_string(c0) + " is not a rational square");
      root = *r;
    } else {
      auto r = c0.sqrt_if_rational_square();
      if (!r) throw MathError("inverse square root: constant term is not a square in the field");
      root = *r;
    }
  } else if (*root * *root != c0) {
    throw MathError("inverse square root: supplied root does not square to the constant term");
  }
  S t = s.constant(F(1) / *root);
  const S one = s.constant(F(1));
  const F half = F(1) / F(2);
  for (int prec = 1; prec <= total;) {
    prec *= 2;
    const int cap = prec - 1;
    S t2 = t.mul(t, cap);
    S err = one - s.mul(t2, cap);
    t += t.mul(err, cap).scaled(half);
  }
  return t;
}

/// Σ c·t^a·(d/dt)^b with rational c, a ≥ 0, b ≥ 0.
struct DiffOp {
  struct Term {
    Rational coeff;
    int t_power;
    int d_order;
  };
  std::vector<Term> terms;

  /// Smallest exponent shift, in the direction of the series variable,
  /// over all terms. For a series in u = 1/t a term moves u^j to
  /// u^{j + b − a}; for a series in t it moves t^e to t^{e + a − b}.
  int min_shift(bool in_inverse_variable) const {
    int m = std::numeric_limits<int>::max();
    for (const auto& term : terms)
      m = std::min(m, in_inverse_variable ? term.d_order - term.t_power : term.t_power - term.d_order);
    return terms.empty() ? 0 : m;
  }
};

/// e(e−1)…(e−b+1).
inline Rational falling_factorial(long e, int b) {
  Rational r(1);
  for (int i = 0; i < b; ++i) r *= Rational(e - i);
  return r;
}

/// Laurent series Σ_{j ≥ low} c_j u^j, exact through u^{trunc}.
template <class C>
class LaurentSeries {
public:
  LaurentSeries() = default;
  LaurentSeries(std::string var, int low, std::vector<C> coeffs, int trunc)
      : var_(std::move(var)), low_(low), c_(std::move(coeffs)), trunc_(trunc) {
    if (static_cast<long>(low_) + static_cast<long>(c_.size()) - 1 > trunc_) c_.resize(static_cast<std::size_t>(std::max(0, trunc_ - low_ + 1)));
    normalize();
  }

  const std::string& var() const { return var_; }
  int low() const { return low_; }
  int trunc() const { return trunc_; }
  const std::vector<C>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  C coeff(int j) const {
    if (j < low_ || j >= low_ + static_cast<int>(c_.size())) return C(0);
    return c_[static_cast<std::size_t>(j - low_)];
  }

private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && clausenlab::is_zero(c_[lead])) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      return;
    }
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    low_ += static_cast<int>(lead);
    while (!c_.empty() && clausenlab::is_zero(c_.back())) c_.pop_back();
  }

  std::string var_ = "u";
  int low_ = 0;
  std::vector<C> c_;
  int trunc_ = 0;
};

/// Thrown when an operator result cannot be exact through the requested
/// order; carries the input truncation that would be needed.
class TruncationUnderflow : public MathError {
public:
  TruncationUnderflow(int required, const std::string& what) : MathError(what), required_(required) {}
  int required_truncation() const { return required_; }

private:
  int required_;
};

/// Applies op (in t) to a series in u = 1/t. The result is exact through
/// u^{trunc + min_shift}; asking for more raises TruncationUnderflow.
template <class C>
LaurentSeries<C> laurent_apply_operator(const DiffOp& op, const LaurentSeries<C>& s,
                                        std::optional<int> want_through = std::nullopt) {
  const int shift = op.min_shift(true);
  const int exact = s.trunc() + shift;
  if (want_through && *want_through > exact) {
    const int need = *want_through - shift;
    throw TruncationUnderflow(need, "operator result needed through u^" + std::to_string(*want_through) +
                                        " but input is exact only through u^" + std::to_string(s.trunc()) +
                                        "; required input truncation " + std::to_string(need));
  }
  const int through = want_through.value_or(exact);
  if (s.is_zero()) return LaurentSeries<C>(s.var(), 0, {}, through);
  int low = std::numeric_limits<int>::max();
  for (const auto& term : op.terms) low = std::min(low, s.low() + term.d_order - term.t_power);
  if (through < low) {
    throw TruncationUnderflow(low - shift, "operator result has no exact coefficients; required input truncation " +
                                               std::to_string(low - shift));
  }
  std::vector<C> out(static_cast<std::size_t>(through - low + 1), C(0));
  for (std::size_t idx = 0; idx < s.coeffs().size(); ++idx) {
    const int j = s.low() + static_cast<int>(idx);
    const C& cj = s.coeffs()[idx];
    if (clausenlab::is_zero(cj)) continue;
    for (const auto& term : op.terms) {
      const int target = j + term.d_order - term.t_power;
      if (target > through) continue;
      // (d/dt)^b t^{-j} = (−j)(−j−1)…(−j−b+1) t^{−j−b}
      Rational f = term.coeff * falling_factorial(-j, term.d_order);
      if (is_zero(f)) continue;
      out[static_cast<std::size_t>(target - low)] += C(f) * cj;
    }
  }
  return LaurentSeries<C>(s.var(), low, std::move(out), through);
}

/// Applies op along variable k of a multivariate series. If inverse is
/// true the variable stands for 1/t, otherwise for t. The returned
/// series has its truncation in that variable lowered to the exactness
/// bound.
template <class F>
MultiSeries<F> apply_operator_along(const DiffOp& op, const MultiSeries<F>& s, std::size_t k, bool inverse) {
  using S = MultiSeries<F>;
  auto tr = s.truncation();
  const int shift = op.min_shift(inverse);
  if (shift < 0) tr[k] += shift;
  if (tr[k] < 0) throw TruncationUnderflow(-shift, "operator consumes the whole truncation window");
  S r(s.vars(), tr);
  for (const auto& [e, c] : s.terms()) {
    for (const auto& term : op.terms) {
      typename S::Exponents f = e;
      Rational factor;
      if (inverse) {
        factor = term.coeff * falling_factorial(-e[k], term.d_order);
        f[k] = e[k] + term.d_order - term.t_power;
      } else {
        factor = term.coeff * falling_factorial(e[k], term.d_order);
        f[k] = e[k] + term.t_power - term.d_order;
      }
      if (is_zero(factor)) continue;
      if (f[k] < 0) {
        // Negative t-exponents cannot occur for a power series in t since
        // falling_factorial(e, b) vanishes when e < b; in 1/t they would
        // leave the representable range.
        throw TruncationUnderflow(0, "operator maps outside the series exponent range");
      }
      r.add_to(f, c * F(factor));
    }
  }
  return r;
}

}  // namespace clausenlab
