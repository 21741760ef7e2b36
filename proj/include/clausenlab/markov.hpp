#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clausenlab/conv.hpp"

namespace clausenlab::markov {

/// A point of m1² + m2² + m3² = m1·m2·m3 (checked where it matters).
struct MarkovPoint {
  Rational m1, m2, m3;

  bool on_surface() const { return m1 * m1 + m2 * m2 + m3 * m3 == m1 * m2 * m3; }
  bool is_integral() const { return m1.get_den() == 1 && m2.get_den() == 1 && m3.get_den() == 1; }
  const Rational& operator[](int k) const { return k == 0 ? m1 : k == 1 ? m2 : m3; }
  std::string str() const;
  friend bool operator==(const MarkovPoint&, const MarkovPoint&) = default;
};

/// Parses "3,3,6" or "11/3,11/3,11".
MarkovPoint parse_point(const std::string& s);

/// Replaces coordinate k by (product of the other two) − m_k.
MarkovPoint vieta(const MarkovPoint& p, int k);

using Triple = std::array<long long, 3>;

/// Sorted integer solutions with all entries ≤ bound, grown from (3,3,3)
/// by Vieta moves.
std::vector<Triple> markov_tree(long long bound);
/// Same set by solving the quadratic in m3 for each m1 ≤ m2 ≤ bound.
std::vector<Triple> markov_brute_force(long long bound);

/// (u + 2/u, u + 2/u, u² + 2).
MarkovPoint curve_point(const Rational& u);
/// Random curve points, scrambled by Vieta moves and permutations when
/// requested. Deterministic in seed.
std::vector<MarkovPoint> surface_sampler(std::size_t count, std::uint64_t seed, bool scramble = true);

struct ReflectionTriple {
  MarkovPoint point;
  CMatrix R1, R2, R3;
  CMatrix Q() const { return R1 * R2 * R3; }
  conv::LocalSystemTuple tuple() const { return conv::LocalSystemTuple({R1, R2, R3}); }
};

/// Reflections with Tr(R1R2) = m1, Tr(R1R3) = m2, Tr(R2R3) = m3 and
/// Tr(R1R2R3) = 2i·qsign. Throws MathError for m1 = ±2, input off the
/// surface ("consistency identity fails") or scalar Q.
ReflectionTriple build_reflection_triple(const MarkovPoint& p, int qsign = 1);

struct Pullback {
  CMatrix gA, gB;
};

/// g_A = A1A2, g_B = A3A1.
Pullback double_cover_pullback(const conv::LocalSystemTuple& t);

/// Pairs (i, j, k, l) with g_A = A_iA_j, g_B = A_kA_l (i ≠ j, k ≠ l) that give
/// Tr g_A = m1, Tr g_B = m2, Tr g_Ag_B = m3 and [g_A, g_B] = Q².
std::vector<std::array<int, 4>> calibrate_pullback(const ReflectionTriple& r);

struct PipelineOptions {
  int max_word_len = 8;
  int lambda_sign = 1;  ///< λ = i·lambda_sign
  int qsign = -1;       ///< Tr Q = 2i·qsign; −1 puts eigenvalue i at A_∞ = Q⁻¹
  bool scan = true;
  unsigned threads = 1;
};

struct TraceCheck {
  std::string name;   ///< "A^2", "B^2", "(AB)^2"
  std::string word;   ///< letters in the rank-3 generators
  CycloNum trace;
  Rational expected;  ///< m² − 1
  bool ok = false;
};

struct LocalProfile {
  std::string label;
  Poly<CycloNum> charpoly;
  CycloNum trace_sq_over_det;
  std::optional<int> projective_order;
};

struct PipelineReport {
  MarkovPoint point;
  PipelineOptions options;
  ReflectionTriple triple;
  conv::LocalSystemTuple mc, twisted, sym2;
  std::vector<std::size_t> ranks;  ///< base, MC, twist, Sym²

  // Pullback to the base: commutator and base traces.
  CycloNum commutator_trace;
  bool commutator_is_Q2 = false;
  bool base_traces_ok = false;

  // Pair-product traces.
  std::vector<TraceCheck> traces;
  std::array<CycloNum, 3> squared_word_traces;  ///< literal Tr g_A², Tr g_B², Tr (g_Ag_B)²
  bool pair_traces_ok = false;

  // Word scan and invariant forms.
  std::optional<conv::ScanSummary> scan;
  bool no_unipotent = false;
  conv::BilinearForms symmetric_forms;
  bool form_ok = false;
  std::optional<bool> integral_traces;  ///< integer points only, needs the scan

  // Local monodromies.
  std::vector<LocalProfile> profile;
  std::vector<bool> mc_local_eigen_ok;  ///< each C_k has charpoly (x − 1)(x + i·lambda_sign)

  bool ok() const;
};

PipelineReport twisted_clausen_pipeline(const MarkovPoint& p, const PipelineOptions& opt = {});

}  // namespace clausenlab::markov
