#pragma once

#include <json.hpp>

#include "clausenlab/cyclo.hpp"
#include "clausenlab/matrix.hpp"
#include "clausenlab/rational.hpp"
#include "clausenlab/series.hpp"

namespace clausenlab {

using Json = nlohmann::ordered_json;

// Rational ↔ "p/q"; CycloNum ↔ array of 8 rational strings; matrices as
// nested arrays of those.
Json to_json(const Rational& q);
Json to_json(const CycloNum& z);
Json to_json(const Poly<Rational>& p);
Json to_json(const Poly<CycloNum>& p);

template <class F>
Json to_json(const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// [{exponents: [..], coeff}] in exponent order.
template <class F>
Json to_json(const MultiSeries<F>& s) {
  Json out = Json::array();
  for (const auto& [e, c] : s.terms()) {
    Json ex = Json::array();
    for (std::size_t k = 0; k < s.vars().size(); ++k) ex.push_back(e[k]);
    out.push_back({{"exponents", std::move(ex)}, {"coeff", to_json(c)}});
  }
  return out;
}

Rational rational_from_json(const Json& j);
/// Accepts the 8-array form, a rational string/number, or a string that
/// CycloNum::parse understands ("i", "zeta8^3", …).
CycloNum cyclo_from_json(const Json& j);
CMatrix cmatrix_from_json(const Json& j);

}  // namespace clausenlab
