#include "clausenlab/json_io.hpp"

#include <stdexcept>

namespace clausenlab {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const CycloNum& z) {
  Json a = Json::array();
  for (const auto& c : z.coeffs()) a.push_back(to_string(c));
  return a;
}

Json to_json(const Poly<Rational>& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

Json to_json(const Poly<CycloNum>& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("expected a rational string such as \"3/2\", got " + j.dump());
}

CycloNum cyclo_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != CycloNum::kDegree) throw std::invalid_argument("cyclotomic number needs 8 coefficients");
    CycloNum::Coeffs c;
    for (int k = 0; k < CycloNum::kDegree; ++k) c[k] = rational_from_json(j[k]);
    return CycloNum(c);
  }
  if (j.is_string()) return CycloNum::parse(j.get<std::string>());
  return CycloNum(rational_from_json(j));
}

CMatrix cmatrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = cyclo_from_json(j[i][k]);
  }
  return m;
}

}  // namespace clausenlab
