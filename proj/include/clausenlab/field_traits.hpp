#pragma once

#include <type_traits>

#include "clausenlab/cyclo.hpp"
#include "clausenlab/mpoly.hpp"
#include "clausenlab/rational.hpp"

namespace clausenlab {

/// Marks coefficient types with exact division. Rings (e.g. multivariate
/// polynomials) keep the default and get division-free algorithms.
template <class F>
struct is_field : std::false_type {};
template <>
struct is_field<Rational> : std::true_type {};
template <>
struct is_field<CycloNum> : std::true_type {};

template <class F>
inline constexpr bool is_field_v = is_field<F>::value;

}  // namespace clausenlab
