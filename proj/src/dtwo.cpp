#include "clausenlab/dtwo.hpp"

#include <random>
#include <stdexcept>

namespace clausenlab::dtwo {

namespace {

const LambdaPoly kLambda = LambdaPoly::x();

Rational random_rational(std::mt19937_64& rng, int num_bound, int den_bound) {
  std::uniform_int_distribution<int> num(-num_bound, num_bound);
  std::uniform_int_distribution<int> den(1, den_bound);
  return make_rational(num(rng), den(rng));
}

}  // namespace

D2Series d2_coefficients(const D2Params& p, int N) {
  if (sgn(p.B) == 0) throw MathError("D2 recurrence needs B != 0");
  if (N < 0) throw std::invalid_argument("D2 series order must be nonnegative");
  D2Series s{p, {}};
  s.b.reserve(static_cast<std::size_t>(N) + 1);
  s.b.emplace_back(Rational(1));
  for (int n = 0; n < N; ++n) {
    const Rational nn(n);
    LambdaPoly next = (kLambda - LambdaPoly(p.A * nn * (nn + 1))) * s.b[static_cast<std::size_t>(n)];
    if (n >= 1) next -= s.b[static_cast<std::size_t>(n - 1)].scaled(nn * nn);
    const Rational denom = p.B * (nn + 1) * (nn + 1);
    s.b.push_back(next.scaled(Rational(1) / denom));
  }
  return s;
}

DiffOp d2_operator(const D2Params& p) {
  // f ∂² + f′ ∂ + t with f = t³ + A t² + B t, f′ = 3t² + 2A t + B.
  return DiffOp{{{Rational(1), 3, 2},
                 {p.A, 2, 2},
                 {p.B, 1, 2},
                 {Rational(3), 2, 1},
                 {2 * p.A, 1, 1},
                 {p.B, 0, 1},
                 {Rational(1), 1, 0}}};
}

std::vector<LambdaPoly> d2_residual(const D2Series& s) {
  const int N = static_cast<int>(s.b.size()) - 1;
  MultiSeries<LambdaPoly> phi({"t"}, {N, 0, 0});
  for (int n = 0; n <= N; ++n) phi.set({n, 0, 0}, s.b[static_cast<std::size_t>(n)]);
  auto lphi = apply_operator_along(d2_operator(s.params), phi, 0, false);
  std::vector<LambdaPoly> res;
  for (int n = 0; n <= lphi.truncation()[0]; ++n) res.push_back(lphi.coeff({n, 0, 0}) - kLambda * phi.coeff({n, 0, 0}));
  return res;
}

Series3 d2_P(const D2Params& p, const Series3::Exponents& trunc, const Rational& z_scale) {
  Series3 base({"x", "y", "z"}, trunc);
  const Series3 x = base.variable(0);
  const Series3 y = base.variable(1);
  const Series3 z = base.variable(2, z_scale);
  const Series3 e2 = x * y + y * z + x * z;
  const Series3 first = base.constant(p.B) - e2;
  const Series3 second = (x * y * z).scaled(Rational(4)) * (x + y + z + base.constant(p.A));
  return first * first - second;
}

Series3 d2_kernel_constants(const D2Params& p, int K, int m_max) {
  if (sgn(p.B) == 0) throw MathError("kernel constants need B != 0");
  if (m_max < 0) m_max = 2 * K;
  const Series3 P = d2_P(p, {K, K, m_max}, p.B);
  return series_inv_sqrt(P, std::optional<Rational>(p.B)).scaled(p.B);
}

LinearizationReport d2_check_linearization(const D2Params& p, int K) {
  LinearizationReport rep;
  rep.K = K;
  const int m_max = 2 * K;
  const Series3 c = d2_kernel_constants(p, K, m_max);
  const D2Series s = d2_coefficients(p, m_max);
  for (int k = 0; k <= K; ++k)
    for (int l = 0; l <= K; ++l) {
      LambdaPoly rhs;
      for (int m = 0; m <= std::min(k + l, m_max); ++m) {
        const Rational ckl = c.coeff({k, l, m});
        if (sgn(ckl) != 0) rhs += s.b[static_cast<std::size_t>(m)].scaled(ckl);
      }
      for (int m = k + l + 1; m <= m_max; ++m)
        if (sgn(c.coeff({k, l, m})) != 0) rep.degree_bound_holds = false;
      ++rep.checked_pairs;
      if (s.b[static_cast<std::size_t>(k)] * s.b[static_cast<std::size_t>(l)] != rhs) ++rep.failed_pairs;
    }
  return rep;
}

MPoly3 d2_P_symbolic(const D2Params& p) {
  const MPoly3 x = MPoly3::var(0), y = MPoly3::var(1), z = MPoly3::var(2);
  const MPoly3 first = MPoly3(p.B) - (x * y + y * z + x * z);
  return first * first - MPoly3(4) * x * y * z * (x + y + z + MPoly3(p.A));
}

MPoly3 d2_discriminant_symbolic(const D2Params& p) {
  using TPoly = Poly<MPoly3>;
  const TPoly t = TPoly::x();
  const TPoly f{MPoly3(0), MPoly3(p.B), MPoly3(p.A), MPoly3(1)};
  const TPoly cubic = (t - TPoly(MPoly3::var(0))) * (t - TPoly(MPoly3::var(1))) * (t - TPoly(MPoly3::var(2)));
  return discriminant(f - cubic, 2);
}

std::pair<Rational, Rational> d2_discriminant_at(const D2Params& p, const Rational& x, const Rational& y,
                                                 const Rational& z) {
  using TPoly = Poly<Rational>;
  const TPoly t = TPoly::x();
  const TPoly f{Rational(0), p.B, p.A, Rational(1)};
  const TPoly g = f - (t - TPoly(x)) * (t - TPoly(y)) * (t - TPoly(z));
  const Rational e2 = x * y + y * z + x * z;
  const Rational P = (p.B - e2) * (p.B - e2) - 4 * x * y * z * (x + y + z + p.A);
  if (g.is_zero()) return {P, Rational(0)};
  return {P, discriminant(g, 2)};
}

DiscriminantReport d2_check_discriminant_identity(const D2Params& p, int samples, std::uint64_t seed) {
  DiscriminantReport rep;
  rep.symbolic_ok = d2_P_symbolic(p) == d2_discriminant_symbolic(p);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Rational x = random_rational(rng, 9, 5), y = random_rational(rng, 9, 5), z = random_rational(rng, 9, 5);
    auto [lhs, rhs] = d2_discriminant_at(p, x, y, z);
    ++rep.samples;
    if (lhs != rhs) ++rep.sample_failures;
  }
  return rep;
}

KernelReport d2_duplication_kernel(const D2Params& p, int order) {
  KernelReport rep;
  const Series3 c = d2_kernel_constants(p, order, order);
  rep.kernel = c.shifted(2, 1);
  const Series3& K = rep.kernel;
  const int wmax = order + 1;

  // K(0, y, z) = Σ y^l z^{−l−1}.
  rep.specialization_ok = true;
  for (int l = 0; l <= order; ++l)
    for (int j = 0; j <= wmax; ++j) {
      const Rational expect = (j == l + 1) ? Rational(1) : Rational(0);
      if (K.coeff({0, l, j}) != expect) rep.specialization_ok = false;
    }

  // Diagonal against the closed form.
  MultiSeries<Rational> q({"x", "w"}, {order, order, 0});
  const auto x = q.variable(0), w = q.variable(1);
  const auto xsq_minus_B = x * x - q.constant(p.B);
  const auto f = x * x * x + (x * x).scaled(p.A) + x.scaled(p.B);
  const auto Q = xsq_minus_B * xsq_minus_B - (f * w).scaled(4 * p.B);
  const auto expected = series_inv_sqrt(Q, std::optional<Rational>(p.B)).scaled(p.B).shifted(1, 1);
  MultiSeries<Rational> diag({"x", "w"}, {order, wmax, 0});
  for (const auto& [e, v] : K.terms())
    if (e[0] + e[1] <= order) diag.add_to({e[0] + e[1], e[2], 0}, v);
  rep.diagonal_ok = diag == expected;

  const DiffOp L = d2_operator(p);
  const Series3 lx = apply_operator_along(L, K, 0, false);
  const Series3 ly = apply_operator_along(L, K, 1, false);
  const Series3 lz = apply_operator_along(L, K, 2, true);
  rep.annihilation_xz_ok = (lx - lz).is_zero();
  rep.annihilation_xy_ok = (lx - ly).is_zero();
  return rep;
}

ClausenReport clausen_product_check(int N) {
  if (N < 1) throw std::invalid_argument("Clausen check needs N >= 1");
  std::vector<Rational> a(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    Integer f = factorial(static_cast<unsigned>(n));
    a[static_cast<std::size_t>(n)] = Rational(1, f * f);
  }
  ClausenReport rep;
  rep.identity_holds = true;
  for (int n = 0; n <= N; ++n) {
    Rational sq(0);
    for (int k = 0; k <= n; ++k) sq += a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(n - k)];
    rep.square.push_back(sq);
    const Rational rhs = Rational(binomial(2 * static_cast<unsigned>(n), static_cast<unsigned>(n))) * a[static_cast<std::size_t>(n)];
    if (sq != rhs) rep.identity_holds = false;
  }
  return rep;
}

std::vector<Rational> clausen_inductive_solver(const Rational& a0, const Rational& a1, int N) {
  if (a0 != 1) throw std::invalid_argument("Clausen solver is normalized to a_0 = 1");
  if (N < 0) throw std::invalid_argument("Clausen solver needs N >= 0");
  std::vector<Rational> a{a0};
  if (N >= 1) a.push_back(a1);
  for (int n = 2; n <= N; ++n) {
    Rational rhs(0);
    for (int k = 1; k < n; ++k) rhs += a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(n - k)];
    const Rational factor = Rational(binomial(2 * static_cast<unsigned>(n), static_cast<unsigned>(n))) - 2;
    a.push_back(rhs / factor);
  }
  return a;
}

bool BesselReport::ok() const {
  for (const auto& r : residual)
    if (!r.is_zero()) return false;
  return true;
}

BesselReport verify_bessel_degenerate(int M) {
  if (M < 0) throw std::invalid_argument("Bessel check order must be nonnegative");
  std::vector<LambdaPoly> coeffs;
  for (int m = 0; m <= M; ++m) {
    Integer f = factorial(static_cast<unsigned>(m));
    coeffs.push_back(LambdaPoly::monomial(static_cast<std::size_t>(m), Rational(1, f * f)));
  }
  const LaurentSeries<LambdaPoly> s("u", 1, coeffs, M + 1);
  const DiffOp L = d2_operator({Rational(0), Rational(0)});
  const auto ls = laurent_apply_operator(L, s, M);
  BesselReport rep;
  rep.order = M;
  for (int j = 0; j <= M; ++j) rep.residual.push_back(ls.coeff(j) - kLambda * s.coeff(j));
  return rep;
}

}  // namespace clausenlab::dtwo
