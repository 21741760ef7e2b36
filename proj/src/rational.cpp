#include "clausenlab/rational.hpp"

#include <cctype>

namespace clausenlab {

Rational make_rational(long num, long den) {
  if (den == 0) throw MathError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad rational literal: " + s);
    Integer num;
    if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0)
      throw std::invalid_argument("bad rational literal: " + s);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (s[0] == '+') s.erase(s.begin());
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + std::string(text));
  if (sgn(q.get_den()) == 0) throw MathError("rational with zero denominator");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const Integer& n = q.get_num();
  const Integer& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(rn, rd);
}

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace clausenlab
