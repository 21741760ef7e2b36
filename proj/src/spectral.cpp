#include "clausenlab/spectral.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace clausenlab::spectral {

namespace {

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// ⌊5·frac(x)⌋ for rational x.
long fifth(const Rational& x) {
  const Rational fx = x - Rational(floor_q(x));
  const Rational scaled = fx * 5;
  return floor_q(scaled).get_si();
}

long powmod(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

int StepFunction5::value(const Rational& x) {
  static constexpr int kValues[5] = {0, 1, 0, -1, 0};
  return kValues[fifth(x)];
}

bool StepFunction5::is_breakpoint(const Rational& x) { const Rational scaled = x * 5;
  return scaled.get_den() == 1; }

int legendre5(long q) {
  const long r = ((q % 5) + 5) % 5;
  if (r == 0) return 0;
  return (r == 1 || r == 4) ? 1 : -1;
}

Rational hecke_average(long q, const Rational& x) {
  if (q < 1) throw std::invalid_argument("Hecke average needs q >= 1");
  Rational s(0);
  for (long k = 0; k < q; ++k) s += StepFunction5::value((x + k) / q);
  return s;
}

CircleReport circle_hecke_check(long q, std::size_t samples, std::uint64_t seed) {
  if (q < 2) throw std::invalid_argument("circle Hecke check needs q >= 2");
  if (q % 5 == 0) throw std::invalid_argument("q must be coprime to 5");
  CircleReport rep;
  rep.q = q;
  rep.eigenvalue = legendre5(q);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> den(2, 9973);
  while (rep.samples < samples) {
    const long b = den(rng);
    const long a = std::uniform_int_distribution<long>(0, b - 1)(rng);
    const Rational x = make_rational(a, b);
    bool hit = StepFunction5::is_breakpoint(x);
    for (long k = 0; k < q && !hit; ++k) hit = StepFunction5::is_breakpoint((x + k) / q);
    if (hit) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    if (hecke_average(q, x) != rep.eigenvalue * StepFunction5::value(x)) ++rep.failures;
  }
  return rep;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

using PolyP = std::vector<long>;  // ascending, coefficients in [0, p)

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_mod(PolyP a, const PolyP& m, long p) {
  trim(a);
  const long inv_lead = powmod(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    const long c = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - m.size();
    for (std::size_t k = 0; k < m.size(); ++k) a[shift + k] = ((a[shift + k] - c * m[k]) % p + p) % p;
    trim(a);
  }
  return a;
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, long p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

PolyP poly_gcd(PolyP a, PolyP b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

int cubic_root_count(long p) {
  if (!is_prime(p)) throw std::invalid_argument("cubic_root_count needs a prime, got " + std::to_string(p));
  const PolyP f{((-1 % p) + p) % p, ((-4 % p) + p) % p, 0, 1};
  // x^p mod f
  PolyP result{1}, base{0, 1};
  for (long e = p; e > 0; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), 0);
  result[1] = ((result[1] - 1) % p + p) % p;
  trim(result);
  if (result.empty()) return 3;  // f divides x^p − x
  const PolyP g = poly_gcd(f, result, p);
  return static_cast<int>(g.size()) - 1;
}

int cubic_ap(long p) {
  if (!is_prime(p)) throw std::invalid_argument("cubic_ap needs a prime, got " + std::to_string(p));
  if (p == 229) return 1;
  return cubic_root_count(p) - 1;
}

int chi229(long n) {
  const long r = ((n % 229) + 229) % 229;
  if (r == 0) return 0;
  return powmod(r, 114, 229) == 1 ? 1 : -1;
}

std::vector<long> hecke_coefficients(long N) {
  if (N < 1) throw std::invalid_argument("need N >= 1");
  std::vector<long> spf(static_cast<std::size_t>(N) + 1, 0);
  for (long i = 2; i <= N; ++i)
    if (spf[static_cast<std::size_t>(i)] == 0)
      for (long j = i; j <= N; j += i)
        if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = i;
  std::vector<long> a(static_cast<std::size_t>(N) + 1, 0);
  a[1] = 1;
  for (long n = 2; n <= N; ++n) {
    const long p = spf[static_cast<std::size_t>(n)];
    long m = n, pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m > 1) {
      a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(pk)] * a[static_cast<std::size_t>(m)];
    } else if (pk == p) {
      a[static_cast<std::size_t>(n)] = cubic_ap(p);
    } else {
      const long prev = a[static_cast<std::size_t>(pk / p)];
      const long prev2 = a[static_cast<std::size_t>(pk / p / p)];
      a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(p)] * prev - chi229(p) * prev2;
    }
  }
  return a;
}

double k0_integral(double x) {
  if (!(x > 0)) throw std::invalid_argument("K0 needs x > 0");
  // K₀(x) = e^{−x} ∫₀^∞ exp(−x(cosh t − 1)) dt; the scaled integrand drops
  // below 1e-20 once cosh T − 1 > 20 ln 10 / x.
  const double T = std::acosh(1.0 + 20.0 * std::log(10.0) / x);
  auto f = [x](double t) { return std::exp(-2.0 * x * std::sinh(t / 2) * std::sinh(t / 2)); };
  return std::exp(-x) * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 15, 1e-14);
}

double k0_series(double x) {
  if (!(x > 0)) throw std::invalid_argument("K0 needs x > 0");
  if (x <= 2.0) {
    // K₀ = −(ln(x/2) + γ) I₀ + Σ (x²/4)^k H_k / k!²
    const double q = x * x / 4.0;
    double term = 1.0, i0 = 1.0, tail = 0.0, h = 0.0;
    for (int k = 1; k < 60; ++k) {
      term *= q / (static_cast<double>(k) * k);
      h += 1.0 / k;
      i0 += term;
      tail += term * h;
    }
    return -(std::log(x / 2.0) + std::numbers::egamma) * i0 + tail;
  }
  // Temme's continued fraction (Steed's algorithm) at order 0.
  double b = 2.0 * (1.0 + x), d = 1.0 / b, h = d, delh = d;
  double q1 = 0.0, q2 = 1.0, a1 = 0.25, q = a1, c = a1, a = -a1, s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-16) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
}

double maass_tail_bound(double y, long N) {
  // |a_n| ≤ n and K₀(x) ≤ √(π/2x) e^{−x} give |term_n| ≤ (√n/2) e^{−2πny} =: g(n);
  // g(n+1)/g(n) ≤ q for n > N.
  const double w = 2.0 * std::numbers::pi * y;
  const double n1 = static_cast<double>(N + 1);
  const double q = std::sqrt(1.0 + 1.0 / n1) * std::exp(-w);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return 0.5 * std::sqrt(n1) * std::exp(-w * n1) / (1.0 - q);
}

long maass_terms_needed(double y, double bound) {
  if (!(y > 0)) throw std::invalid_argument("Maass value needs y > 0");
  long N = 1;
  while (maass_tail_bound(y, N) >= bound) {
    ++N;
    if (N > 100'000'000) throw std::runtime_error("tail bound unreachable");
  }
  return N;
}

double maass_value(double y, long N, const std::vector<long>& a) {
  if (!(y > 0)) throw std::invalid_argument("Maass value needs y > 0");
  if (static_cast<long>(a.size()) <= N) throw std::invalid_argument("not enough Hecke coefficients");
  double sum = 0.0, comp = 0.0;
  for (long n = 1; n <= N; ++n) {
    const long an = a[static_cast<std::size_t>(n)];
    if (an == 0) continue;
    const double term = static_cast<double>(an) * k0_integral(2.0 * std::numbers::pi * n * y);
    const double yk = term - comp;
    const double t = sum + yk;
    comp = (t - sum) - yk;
    sum = t;
  }
  return std::sqrt(y) * sum;
}

MaassReport functional_equation_check(double y, double tol) {
  if (!(y > 0)) throw std::invalid_argument("functional equation check needs y > 0");
  MaassReport r;
  r.y = y;
  r.y_dual = 1.0 / (229.0 * y);
  r.tolerance = tol;
  r.N = maass_terms_needed(y);
  r.N_dual = maass_terms_needed(r.y_dual);
  r.tail = maass_tail_bound(y, r.N);
  r.tail_dual = maass_tail_bound(r.y_dual, r.N_dual);
  const auto a = hecke_coefficients(std::max(r.N, r.N_dual));
  r.value = maass_value(y, r.N, a);
  r.value_dual = maass_value(r.y_dual, r.N_dual, a);
  r.relative_difference = std::abs(r.value - r.value_dual) / std::max(std::abs(r.value), 1e-30);
  return r;
}

Sym2Factor sym2_euler_factor(std::complex<double> alpha, long p) {
  if (alpha == 0.0) throw std::invalid_argument("Sym^2 Euler factor needs alpha != 0");
  if (!is_prime(p)) throw std::invalid_argument("Sym^2 Euler factor needs a prime");
  const std::complex<double> beta = static_cast<double>(p) / alpha;
  Sym2Factor f;
  f.roots = {alpha * alpha, beta * beta, std::complex<double>(static_cast<double>(p))};
  std::array<std::complex<double>, 4> c{1.0, 0.0, 0.0, 0.0};
  for (const auto& r : f.roots) {
    for (int k = 3; k >= 1; --k) c[static_cast<std::size_t>(k)] -= r * c[static_cast<std::size_t>(k - 1)];
  }
  f.coefficients = c;
  return f;
}

double bessel_j0(double x) {
  const double q = -x * x / 4.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && k > std::abs(x)) break;
  }
  return sum;
}

namespace {

template <int Points>
double gauss_rule(double x, double y) {
  auto f = [x, y](double phi) { return bessel_j0(std::sqrt(std::max(0.0, x * x + y * y - 2.0 * x * y * std::cos(phi)))); };
  return boost::math::quadrature::gauss<double, Points>::integrate(f, 0.0, std::numbers::pi) / std::numbers::pi;
}

}  // namespace

SonineReport sonine_gegenbauer_check(double x, double y) {
  if (!(x > 0) || !(y >= x)) throw std::invalid_argument("Sonine-Gegenbauer check needs 0 < x <= y");
  SonineReport r;
  r.x = x;
  r.y = y;
  auto f = [x, y](double phi) { return bessel_j0(std::sqrt(std::max(0.0, x * x + y * y - 2.0 * x * y * std::cos(phi)))); };
  r.integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, 1e-14) / std::numbers::pi;
  r.product = bessel_j0(x) * bessel_j0(y);
  r.error = std::abs(r.integral - r.product);
  r.refinement_errors = {std::abs(gauss_rule<5>(x, y) - r.product), std::abs(gauss_rule<10>(x, y) - r.product),
                         std::abs(gauss_rule<20>(x, y) - r.product), std::abs(gauss_rule<30>(x, y) - r.product)};
  return r;
}

}  // namespace clausenlab::spectral
