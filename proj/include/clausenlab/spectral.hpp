#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "clausenlab/rational.hpp"

namespace clausenlab::spectral {

// ---- circle Hecke operator ----------------------------------------------

/// 1-periodic, values 0, 1, 0, −1, 0 on [k/5, (k+1)/5), right-continuous.
struct StepFunction5 {
  static int value(const Rational& x);
  static bool is_breakpoint(const Rational& x);
};

/// Legendre symbol (q/5).
int legendre5(long q);

/// T̃_q f(x) = Σ_{k<q} f((x + k)/q).
Rational hecke_average(long q, const Rational& x);

struct CircleReport {
  long q = 0;
  int eigenvalue = 0;
  std::size_t samples = 0;  ///< checked non-breakpoint points
  std::size_t skipped = 0;  ///< draws rejected because a breakpoint was hit
  std::size_t failures = 0;
  bool ok() const { return failures == 0 && samples > 0; }
};

/// Exact check of T̃_q f = (q/5) f at `samples` random rational points.
CircleReport circle_hecke_check(long q, std::size_t samples = 10000, std::uint64_t seed = 1);

// ---- conductor 229 data -------------------------------------------------

bool is_prime(long n);
/// Roots of x³ − 4x − 1 in F_p, as deg gcd(f, x^p − x).
int cubic_root_count(long p);
/// r_p − 1, and 1 at p = 229.
int cubic_ap(long p);
/// χ(p) = (p/229); 0 at 229.
int chi229(long n);
/// a_0 = 0 (unused), a_1..a_N by multiplicativity and the prime-power rule.
std::vector<long> hecke_coefficients(long N);

// ---- K0 and the Maass series --------------------------------------------

/// K₀(x) = ∫₀^∞ exp(−x cosh t) dt by adaptive Gauss–Kronrod, cut where the
/// integrand drops below 1e-20.
double k0_integral(double x);
/// K₀ from the power series (small x) or the asymptotic expansion.
double k0_series(double x);

/// Upper bound for Σ_{n>N} |√y a_n K₀(2πny)|.
double maass_tail_bound(double y, long N);
/// Smallest N whose tail bound is below `bound`.
long maass_terms_needed(double y, double bound = 1e-12);
/// √y Σ_{n≤N} a_n K₀(2πny), Kahan-summed.
double maass_value(double y, long N, const std::vector<long>& a);

struct MaassReport {
  double y = 0, y_dual = 0;
  long N = 0, N_dual = 0;
  double tail = 0, tail_dual = 0;
  double value = 0, value_dual = 0;
  double relative_difference = 0;
  double tolerance = 0;
  bool ok() const { return relative_difference < tolerance; }
};

/// Compares M(iy) with M(i/(229y)).
MaassReport functional_equation_check(double y, double tol = 1e-6);

// ---- Sym² Euler factor ---------------------------------------------------

struct Sym2Factor {
  std::array<std::complex<double>, 3> roots;         ///< α², (p/α)², p
  std::array<std::complex<double>, 4> coefficients;  ///< of (1−α²T)(1−(p/α)²T)(1−pT), ascending in T
};

Sym2Factor sym2_euler_factor(std::complex<double> alpha, long p);

// ---- Sonine–Gegenbauer ---------------------------------------------------

/// J₀ by its power series (|x| ≲ 20).
double bessel_j0(double x);

struct SonineReport {
  double x = 0, y = 0;
  double integral = 0, product = 0, error = 0;
  /// Errors of fixed Gauss–Legendre rules with 5, 10, 20 and 30 nodes.
  std::array<double, 4> refinement_errors{};
};

/// (1/π)∫₀^π J₀(√(x² + y² − 2xy cos φ)) dφ against J₀(x)J₀(y); 0 < x ≤ y.
SonineReport sonine_gegenbauer_check(double x, double y);

}  // namespace clausenlab::spectral
