#pragma once

#include <array>
#include <map>
#include <string>

#include "clausenlab/rational.hpp"

namespace clausenlab {

/// Polynomial in three commuting variables over Q. Used where symbolic
/// identities in x, y, z are needed as a coefficient ring.
class MPoly3 {
public:
  using Exponents = std::array<int, 3>;

  MPoly3() = default;
  MPoly3(const Rational& c) {  // NOLINT: scalars embed implicitly
    if (sgn(c) != 0) t_[{0, 0, 0}] = c;
  }
  MPoly3(long c) : MPoly3(Rational(c)) {}  // NOLINT

  static MPoly3 var(int k) {
    MPoly3 r;
    Exponents e{0, 0, 0};
    e.at(static_cast<std::size_t>(k)) = 1;
    r.t_[e] = 1;
    return r;
  }

  const std::map<Exponents, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Rational coeff(const Exponents& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Rational(0) : it->second;
  }

  MPoly3& operator+=(const MPoly3& o) {
    for (const auto& [e, c] : o.t_) add(e, c);
    return *this;
  }
  MPoly3& operator-=(const MPoly3& o) {
    for (const auto& [e, c] : o.t_) add(e, -c);
    return *this;
  }
  MPoly3 operator-() const {
    MPoly3 r(*this);
    for (auto& [e, c] : r.t_) c = -c;
    return r;
  }
  friend MPoly3 operator+(MPoly3 a, const MPoly3& b) { return a += b; }
  friend MPoly3 operator-(MPoly3 a, const MPoly3& b) { return a -= b; }
  friend MPoly3 operator*(const MPoly3& a, const MPoly3& b) {
    MPoly3 r;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) r.add({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
  }
  MPoly3& operator*=(const MPoly3& o) { return *this = *this * o; }
  friend bool operator==(const MPoly3& a, const MPoly3& b) { return a.t_ == b.t_; }
  friend bool operator!=(const MPoly3& a, const MPoly3& b) { return !(a == b); }

  Rational eval(const Rational& x, const Rational& y, const Rational& z) const {
    Rational total(0);
    for (const auto& [e, c] : t_) {
      Rational term = c;
      for (int p = 0; p < e[0]; ++p) term *= x;
      for (int p = 0; p < e[1]; ++p) term *= y;
      for (int p = 0; p < e[2]; ++p) term *= z;
      total += term;
    }
    return total;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    static const char* names[] = {"x", "y", "z"};
    for (const auto& [e, c] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.get_str() + ")";
      for (int k = 0; k < 3; ++k)
        if (e[k]) s += std::string("*") + names[k] + (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    }
    return s;
  }

private:
  void add(const Exponents& e, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, fresh] = t_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (sgn(it->second) == 0) t_.erase(it);
    }
  }

  std::map<Exponents, Rational> t_;
};

inline bool is_zero(const MPoly3& p) { return p.is_zero(); }

}  // namespace clausenlab
