#pragma once

#include <cstdint>
#include <vector>

#include "clausenlab/mpoly.hpp"
#include "clausenlab/poly.hpp"
#include "clausenlab/series.hpp"

namespace clausenlab::dtwo {

/// f(t) = t³ + A t² + B t; 𝓛 = f ∂² + f′ ∂ + t.
struct D2Params {
  Rational A;
  Rational B;
};

using LambdaPoly = Poly<Rational>;
using Series3 = MultiSeries<Rational>;

/// b_0..b_N with φ_λ(t) = Σ b_n(λ) tⁿ solving 𝓛φ = λφ.
struct D2Series {
  D2Params params;
  std::vector<LambdaPoly> b;
};

/// b_{n+1} = ((λ − A n(n+1)) b_n − n² b_{n−1}) / (B (n+1)²), b_0 = 1.
D2Series d2_coefficients(const D2Params& p, int N);

/// The D2 operator as a DiffOp in t.
DiffOp d2_operator(const D2Params& p);

/// Coefficients of tⁿ, n < N, of (𝓛 − λ)φ for the truncated series,
/// computed by applying the operator term by term.
std::vector<LambdaPoly> d2_residual(const D2Series& s);

/// P(x, y, z) = (B − xy − yz − xz)² − 4xyz(x + y + z + A) as a series
/// with the given truncation, z scaled by z_scale.
Series3 d2_P(const D2Params& p, const Series3::Exponents& trunc, const Rational& z_scale);

/// c_{klm} for k, l ≤ K and m ≤ m_max (default 2K): B·P(x, y, Bz)^{−1/2}
/// with the square root of the constant term B² fixed to +B.
Series3 d2_kernel_constants(const D2Params& p, int K, int m_max = -1);

struct LinearizationReport {
  int K = 0;
  int checked_pairs = 0;
  int failed_pairs = 0;
  /// c_{klm} = 0 for k + l < m inside the window.
  bool degree_bound_holds = true;
  bool ok() const { return failed_pairs == 0 && degree_bound_holds; }
};

/// b_k b_l = Σ_{m ≤ k+l} c_{klm} b_m in Q[λ] for all k, l ≤ K.
LinearizationReport d2_check_linearization(const D2Params& p, int K);

/// P as an exact polynomial in Q[x, y, z].
MPoly3 d2_P_symbolic(const D2Params& p);
/// Discrim_t(f(t) − (t − x)(t − y)(t − z)); the t³ terms cancel, so the
/// discriminant is taken with formal degree 2.
MPoly3 d2_discriminant_symbolic(const D2Params& p);

struct DiscriminantReport {
  bool symbolic_ok = false;
  int samples = 0;
  int sample_failures = 0;
  bool ok() const { return symbolic_ok && sample_failures == 0; }
};

/// Symbolic identity plus `samples` random rational points (x, y, z).
DiscriminantReport d2_check_discriminant_identity(const D2Params& p, int samples, std::uint64_t seed);

/// P and the t-discriminant evaluated at one rational point.
std::pair<Rational, Rational> d2_discriminant_at(const D2Params& p, const Rational& x, const Rational& y,
                                                 const Rational& z);

struct KernelReport {
  /// K(x, y, z) in variables (x, y, w), w = 1/z.
  Series3 kernel;
  bool specialization_ok = false;   ///< K(0, y, z) = 1/(z − y)
  bool diagonal_ok = false;         ///< K(x, x, z) = B w ((x² − B)² − 4B f(x) w)^{−1/2}
  bool annihilation_xz_ok = false;  ///< 𝓛_x K = 𝓛_z K in the exact window
  bool annihilation_xy_ok = false;  ///< 𝓛_x K = 𝓛_y K
  bool ok() const { return specialization_ok && diagonal_ok && annihilation_xz_ok && annihilation_xy_ok; }
};

/// Expands K = B z⁻¹ P(x, y, B z⁻¹)^{−1/2} through x, y ≤ order and
/// z⁻¹ powers ≤ order + 1, then runs the checks.
KernelReport d2_duplication_kernel(const D2Params& p, int order);

struct ClausenReport {
  std::vector<Rational> square;  ///< coefficients of (Σ zⁿ/n!²)²
  bool identity_holds = false;
};

/// (Σ_{n≤N} zⁿ/n!²)² = Σ_{n≤N} C(2n,n) zⁿ/n!² through z^N.
ClausenReport clausen_product_check(int N);

/// Solves (Σ a_n zⁿ)² = Σ C(2n,n) a_n zⁿ for a_2..a_N given a_0 = 1 and a_1.
std::vector<Rational> clausen_inductive_solver(const Rational& a0, const Rational& a1, int N);

struct BesselReport {
  int order = 0;
  /// Coefficients of u^0..u^order of (𝓛 − λ) t⁻¹ J₀(2√(−λ/t)), u = 1/t.
  std::vector<LambdaPoly> residual;
  bool ok() const;
};

/// A = B = 0; expands t⁻¹J₀(2√(−λ/t)) = Σ λ^m u^{m+1}/m!².
BesselReport verify_bessel_degenerate(int M);

}  // namespace clausenlab::dtwo
