#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "clausenlab/rational.hpp"

namespace clausenlab {

/// Element of Q(ζ), ζ = exp(2πi/24), stored as Σ c_k ζ^k (k < 8) reduced
/// modulo Φ₂₄(x) = x⁸ − x⁴ + 1.
class CycloNum {
public:
  static constexpr int kDegree = 8;
  static constexpr int kOrder = 24;
  using Coeffs = std::array<Rational, kDegree>;

  CycloNum() = default;
  CycloNum(const Rational& q) { c_[0] = q; }  // NOLINT: rationals embed implicitly
  CycloNum(long n) { c_[0] = n; }             // NOLINT
  explicit CycloNum(Coeffs c) : c_(std::move(c)) {}

  /// ζ^k for any integer k (reduced mod 24, then mod Φ₂₄).
  static CycloNum zeta(long k);
  static CycloNum i() { return zeta(6); }
  /// exp(2πi·k/n) for n dividing 24.
  static CycloNum root_of_unity(int n, long k);

  const Coeffs& coeffs() const { return c_; }
  const Rational& coeff(int k) const { return c_[k]; }

  bool is_zero() const;
  bool is_rational() const;
  /// The value as a rational; throws MathError if it is not rational.
  const Rational& rational_value() const;

  CycloNum& operator+=(const CycloNum& o);
  CycloNum& operator-=(const CycloNum& o);
  CycloNum& operator*=(const CycloNum& o);
  CycloNum& operator/=(const CycloNum& o) { return *this *= o.inv(); }
  CycloNum operator-() const;

  friend CycloNum operator+(CycloNum a, const CycloNum& b) { return a += b; }
  friend CycloNum operator-(CycloNum a, const CycloNum& b) { return a -= b; }
  friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inv(); }
  friend bool operator==(const CycloNum& a, const CycloNum& b) { return a.c_ == b.c_; }
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  /// Multiplicative inverse; throws MathError on zero.
  CycloNum inv() const;
  /// Complex conjugation ζ ↦ ζ²³.
  CycloNum conj() const;
  /// Galois automorphism ζ ↦ ζ^k, gcd(k, 24) = 1.
  CycloNum galois(int k) const;
  /// Field norm down to Q.
  Rational norm() const;
  /// Image under ζ ↦ exp(2πi/24).
  std::complex<double> to_complex() const;

  /// Exact square root when this is ±(rational square); nullopt otherwise.
  std::optional<CycloNum> sqrt_if_rational_square() const;

  /// Readable form such as "3/2 - z^6 + 2*z^3"; z = ζ₂₄.
  std::string str() const;

  /// Parses a rational, "i", "-i", "zeta<n>^<k>" (n | 24) or "z^<k>".
  static CycloNum parse(std::string_view text);

private:
  Coeffs c_{};
};

inline bool is_zero(const CycloNum& a) { return a.is_zero(); }

}  // namespace clausenlab
