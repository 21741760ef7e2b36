#include "clausenlab/cyclo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

namespace clausenlab {

namespace {

// kPow[e] = ζ^e written in the basis 1, ζ, …, ζ⁷.
using IntRow = std::array<int, CycloNum::kDegree>;

std::array<IntRow, CycloNum::kOrder> make_power_table() {
  std::array<IntRow, CycloNum::kOrder> t{};
  for (int e = 0; e < CycloNum::kOrder; ++e) {
    // reduce x^e by x⁸ = x⁴ − 1 repeatedly
    std::array<long, 32> v{};
    v[e] = 1;
    for (int d = 31; d >= 8; --d) {
      if (v[d] == 0) continue;
      v[d - 4] += v[d];
      v[d - 8] -= v[d];
      v[d] = 0;
    }
    for (int k = 0; k < 8; ++k) t[e][k] = static_cast<int>(v[k]);
  }
  return t;
}

const std::array<IntRow, CycloNum::kOrder>& power_table() {
  static const auto table = make_power_table();
  return table;
}

long mod24(long k) {
  long r = k % CycloNum::kOrder;
  return r < 0 ? r + CycloNum::kOrder : r;
}

}  // namespace

CycloNum CycloNum::zeta(long k) {
  const auto& row = power_table()[mod24(k)];
  CycloNum r;
  for (int j = 0; j < kDegree; ++j) r.c_[j] = row[j];
  return r;
}

CycloNum CycloNum::root_of_unity(int n, long k) {
  if (n <= 0 || kOrder % n != 0) throw MathError("root of unity of order " + std::to_string(n) + " not in Q(zeta24)");
  return zeta(k * (kOrder / n));
}

bool CycloNum::is_zero() const {
  for (const auto& x : c_)
    if (sgn(x) != 0) return false;
  return true;
}

bool CycloNum::is_rational() const {
  for (int k = 1; k < kDegree; ++k)
    if (sgn(c_[k]) != 0) return false;
  return true;
}

const Rational& CycloNum::rational_value() const {
  if (!is_rational()) throw MathError("cyclotomic number " + str() + " is not rational");
  return c_[0];
}

CycloNum& CycloNum::operator+=(const CycloNum& o) {
  for (int k = 0; k < kDegree; ++k) c_[k] += o.c_[k];
  return *this;
}

CycloNum& CycloNum::operator-=(const CycloNum& o) {
  for (int k = 0; k < kDegree; ++k) c_[k] -= o.c_[k];
  return *this;
}

CycloNum CycloNum::operator-() const {
  CycloNum r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
  std::array<Rational, 15> w;
  for (int i = 0; i < CycloNum::kDegree; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (int j = 0; j < CycloNum::kDegree; ++j) {
      if (sgn(b.c_[j]) == 0) continue;
      w[i + j] += a.c_[i] * b.c_[j];
    }
  }
  for (int d = 14; d >= 8; --d) {
    if (sgn(w[d]) == 0) continue;
    w[d - 4] += w[d];
    w[d - 8] -= w[d];
  }
  CycloNum r;
  for (int k = 0; k < CycloNum::kDegree; ++k) r.c_[k] = std::move(w[k]);
  return r;
}

CycloNum& CycloNum::operator*=(const CycloNum& o) { return *this = *this * o; }

CycloNum CycloNum::galois(int k) const {
  if (std::gcd(k, kOrder) != 1) throw MathError("galois exponent must be coprime to 24");
  const auto& table = power_table();
  CycloNum r;
  for (int j = 0; j < kDegree; ++j) {
    if (sgn(c_[j]) == 0) continue;
    const auto& row = table[mod24(static_cast<long>(j) * k)];
    for (int m = 0; m < kDegree; ++m)
      if (row[m] != 0) r.c_[m] += row[m] * c_[j];
  }
  return r;
}

CycloNum CycloNum::conj() const { return galois(kOrder - 1); }

Rational CycloNum::norm() const {
  CycloNum p(*this);
  for (int k : {5, 7, 11, 13, 17, 19, 23}) p *= galois(k);
  return p.rational_value();
}

CycloNum CycloNum::inv() const {
  if (is_zero()) throw MathError("inverse of zero in Q(zeta24)");
  CycloNum others(Rational(1));
  for (int k : {5, 7, 11, 13, 17, 19, 23}) others *= galois(k);
  Rational n = (*this * others).rational_value();
  for (auto& x : others.c_) x /= n;
  return others;
}

std::complex<double> CycloNum::to_complex() const {
  std::complex<double> z(0.0, 0.0);
  for (int k = 0; k < kDegree; ++k) {
    if (sgn(c_[k]) == 0) continue;
    double angle = 2.0 * std::numbers::pi * k / kOrder;
    z += c_[k].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return z;
}

std::optional<CycloNum> CycloNum::sqrt_if_rational_square() const {
  if (!is_rational()) return std::nullopt;
  const Rational& q = c_[0];
  if (sgn(q) >= 0) {
    auto r = exact_sqrt(q);
    if (!r) return std::nullopt;
    return CycloNum(*r);
  }
  auto r = exact_sqrt(-q);
  if (!r) return std::nullopt;
  return CycloNum(*r) * i();
}

std::string CycloNum::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < kDegree; ++k) {
    if (sgn(c_[k]) == 0) continue;
    Rational v = c_[k];
    if (!first) {
      os << (sgn(v) < 0 ? " - " : " + ");
      v = abs(v);
    } else if (sgn(v) < 0 && k > 0) {
      os << "-";
      v = abs(v);
    }
    first = false;
    if (k == 0) {
      os << v.get_str();
    } else {
      if (v != 1) os << v.get_str() << "*";
      os << "z^" << k;
    }
  }
  if (first) os << "0";
  return os.str();
}

CycloNum CycloNum::parse(std::string_view text) {
  std::string s(text);
  std::erase_if(s, [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
  if (s == "i") return i();
  if (s == "-i") return -i();
  bool neg = false;
  std::string body = s;
  if (!body.empty() && body[0] == '-' && body.size() > 1 && std::isalpha(static_cast<unsigned char>(body[1]))) {
    neg = true;
    body.erase(body.begin());
  }
  auto finish = [&](CycloNum v) { return neg ? -v : v; };
  if (body.rfind("zeta", 0) == 0) {
    auto caret = body.find('^');
    int n = std::stoi(body.substr(4, caret == std::string::npos ? std::string::npos : caret - 4));
    long k = caret == std::string::npos ? 1 : std::stol(body.substr(caret + 1));
    return finish(root_of_unity(n, k));
  }
  if (body.rfind("z^", 0) == 0) return finish(zeta(std::stol(body.substr(2))));
  if (body == "z") return finish(zeta(1));
  return CycloNum(parse_rational(s));
}

}  // namespace clausenlab
