#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clausenlab/matrix.hpp"
#include "clausenlab/poly.hpp"
#include "clausenlab/rational.hpp"

namespace clausenlab::weyl {

/// Meaning of the symbol D in the (t, D) algebra.
enum class DConvention {
  Euler,  ///< D = t·d/dt, D·t = t·D + t
  DDt,    ///< D = d/dt,   D·t = t·D + 1
};

/// How det_right expands a matrix of noncommuting entries.
enum class DetConvention {
  FirstColRight,  ///< first-column expansion, column entry as right factor
  LastRowLeft,    ///< last-row expansion, row entry as left factor
};

std::string to_string(DConvention c);
std::string to_string(DetConvention c);
DConvention parse_d_convention(const std::string& s);
DetConvention parse_det_convention(const std::string& s);

/// Σ c_{ab} t^a D^b with every t to the left of every D.
class WeylOp {
public:
  using Key = std::pair<int, int>;  // (t power, D power)
  using Terms = std::map<Key, Rational>;

  explicit WeylOp(DConvention conv = DConvention::Euler) : conv_(conv) {}

  static WeylOp constant(const Rational& c, DConvention conv = DConvention::Euler);
  static WeylOp t(DConvention conv = DConvention::Euler);
  static WeylOp D(DConvention conv = DConvention::Euler);
  static WeylOp monomial(int a, int b, const Rational& c, DConvention conv = DConvention::Euler);

  DConvention convention() const { return conv_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(int a, int b) const;
  void add_term(int a, int b, const Rational& c);

  int d_degree() const;
  int t_degree() const;

  WeylOp& operator+=(const WeylOp& o);
  WeylOp& operator-=(const WeylOp& o);
  friend WeylOp operator+(WeylOp a, const WeylOp& b) { return a += b; }
  friend WeylOp operator-(WeylOp a, const WeylOp& b) { return a -= b; }
  friend WeylOp operator*(const WeylOp& a, const WeylOp& b);
  friend WeylOp operator*(const Rational& s, const WeylOp& a);
  friend bool operator==(const WeylOp& a, const WeylOp& b) { return a.conv_ == b.conv_ && a.terms_ == b.terms_; }
  WeylOp pow(unsigned n) const;

  /// The t^a layer Σ_b c_{ab} ρ^b as a polynomial in ρ.
  Poly<Rational> layer(int a) const;

  /// Action on t^ρ for symbolic ρ: returns shift ↦ coefficient polynomial
  /// in ρ, meaning Σ p_shift(ρ) t^{ρ + shift}.
  std::map<int, Poly<Rational>> act_on_power() const;

  /// Rewrites as Σ p_b(t) (d/dt)^b; entry b holds p_b.
  std::vector<Poly<Rational>> to_derivative_form() const;

  std::string str() const;

private:
  DConvention conv_;
  Terms terms_;
};

using OpMatrix = std::vector<std::vector<WeylOp>>;

/// Right determinant of a square matrix of operators.
WeylOp right_determinant(const OpMatrix& m, DetConvention conv = DetConvention::FirstColRight);

/// Exact left division by D: returns X with D·X = op, or nullopt if op is
/// not a left multiple of D.
std::optional<WeylOp> left_divide_by_D(const WeylOp& op);

/// (N+1)×(N+1) rational matrix with a_ij = 0 for i−j > 1, a_ij = 1 for
/// i−j = 1 and a_ij = a_{N−j,N−i} otherwise.
class DNMatrix {
public:
  /// Validates the shape constraints; throws std::invalid_argument.
  explicit DNMatrix(QMatrix a);
  /// Random matrix with free entries p/q, |p| ≤ num_bound, 1 ≤ q ≤ den_bound.
  static DNMatrix random(int N, std::uint64_t seed, int num_bound = 5, int den_bound = 3);
  static DNMatrix zero(int N);

  int N() const { return static_cast<int>(a_.rows()) - 1; }
  const QMatrix& matrix() const { return a_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_(i, j); }

  /// det(I − tA) as a polynomial in t.
  Poly<Rational> det_one_minus_tA() const;

private:
  QMatrix a_;
};

/// The operator matrix δ_ij D − a_ij (Dt)^{j−i+1}.
OpMatrix dn_operator_matrix(const DNMatrix& a, DConvention conv = DConvention::Euler);

/// D⁻¹·det_right(δ_ij D − a_ij (Dt)^{j−i+1}); throws MathError if the
/// determinant is not left-divisible by D.
WeylOp dn_build(const DNMatrix& a, DetConvention det = DetConvention::FirstColRight,
                DConvention conv = DConvention::Euler);

/// Indicial polynomial at t = 0: the t⁰ layer for D = t·d/dt; for D = d/dt
/// the lowest layer after rewriting in Euler form.
Poly<Rational> dn_indicial_at_zero(const WeylOp& op);

struct SingularLocusVerdict {
  Poly<Rational> leading;         ///< coefficient of the top (d/dt)-power
  int t_power_stripped = 0;       ///< k with leading = t^k · reduced
  Poly<Rational> reduced;         ///< leading / t^k
  Poly<Rational> det_one_minus_tA;
  bool proportional = false;      ///< reduced ∝ det(I − tA)
  bool det_squarefree = false;    ///< genericity test on det(I − tA)
};

SingularLocusVerdict dn_singular_locus(const WeylOp& op, const DNMatrix& a);

/// True if p = c·ρ^n for some nonzero rational c.
bool is_scaled_power(const Poly<Rational>& p, int n);

}  // namespace clausenlab::weyl
