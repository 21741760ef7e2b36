#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clausenlab/json_io.hpp"
#include "clausenlab/matrix.hpp"

namespace clausenlab::conv {

/// Invertible matrices A_1..A_r at labeled punctures. The monodromy at
/// infinity is always derived: A_1⋯A_r·A_∞ = I.
class LocalSystemTuple {
public:
  LocalSystemTuple() = default;
  /// Throws std::invalid_argument on shape problems and MathError on a
  /// singular matrix. Empty labels become t1..tr.
  explicit LocalSystemTuple(std::vector<CMatrix> matrices, std::vector<std::string> labels = {});

  std::size_t rank() const { return rank_; }
  std::size_t size() const { return m_.size(); }
  const std::vector<CMatrix>& matrices() const { return m_; }
  const CMatrix& operator[](std::size_t k) const { return m_.at(k); }
  const std::vector<std::string>& labels() const { return labels_; }

  CMatrix product() const;
  CMatrix infinity() const { return product().inverse(); }

private:
  std::size_t rank_ = 0;
  std::vector<CMatrix> m_;
  std::vector<std::string> labels_;
};

Json to_json(const LocalSystemTuple& t);
LocalSystemTuple tuple_from_json(const Json& j);

/// Raised when the output rank of a convolution disagrees with
/// Σ rk(A_k − I) + rk(λA_1⋯A_r − I) − n.
class DimensionMismatch : public MathError {
public:
  DimensionMismatch(std::size_t predicted, std::size_t actual);
  std::size_t predicted() const { return predicted_; }
  std::size_t actual() const { return actual_; }

private:
  std::size_t predicted_, actual_;
};

/// n for λ = 1, otherwise the formula above.
std::size_t mc_predicted_rank(const LocalSystemTuple& t, const CycloNum& lambda);

/// Middle convolution MC_λ by the Dettweiler–Reiter construction on V^r,
/// B_k = I except block row k = (λ(A_1 − I), …, λ(A_{k−1} − I), λA_k,
/// A_{k+1} − I, …, A_r − I), modulo 𝒦 + ℒ. This layout matches the
/// product convention A_1⋯A_r·A_∞ = I.
LocalSystemTuple middle_convolution(const LocalSystemTuple& t, const CycloNum& lambda);

/// A_k ↦ χ_k A_k.
LocalSystemTuple tensor_rank1(const LocalSystemTuple& t, const std::vector<CycloNum>& chi);

/// Sym² of one matrix in the basis e_i e_j, i ≤ j, ordered lexicographically.
CMatrix sym_square(const CMatrix& m);
/// Generatorwise Sym²; checks Tr Sym²M = (Tr²M + Tr M²)/2 for each generator.
LocalSystemTuple sym_square(const LocalSystemTuple& t);

struct BilinearForms {
  std::vector<CMatrix> basis;
  std::vector<std::size_t> ranks;  ///< rank of each basis element
};

/// Solutions G of A_kᵀ G A_k = G for every k, restricted to symmetric
/// (or antisymmetric) G.
BilinearForms invariant_bilinear_form(const LocalSystemTuple& t, bool symmetric);

/// Letters: generator k is 'a' + k, its inverse 'A' + k. A word is read
/// left to right as a matrix product.
CMatrix evaluate_word(const std::vector<CMatrix>& generators, const std::string& word);

struct WordReport {
  std::string word;
  CycloNum trace;
  bool identity = false;
  bool unipotent = false;
  std::optional<int> projective_order;  ///< nullopt: infinite or unknown
};

struct ScanOptions {
  int max_len = 8;
  /// Generators as words in the tuple letters; empty means the matrices.
  std::vector<std::string> generator_words;
  bool keep_reports = false;
  unsigned threads = 1;
  /// Skip the integer fast path (used by tests as an oracle).
  bool force_exact = false;
};

struct ScanSummary {
  std::size_t words = 0;       ///< including the empty word
  std::size_t identities = 0;  ///< words evaluating to I
  std::size_t unipotents = 0;
  std::vector<std::string> unipotent_words;
  bool all_traces_integral = true;
  std::vector<std::string> non_integral_words;  ///< first few only
  std::map<std::string, std::size_t> order_histogram;
  bool used_fast_path = false;
  std::vector<WordReport> reports;
};

/// Enumerates all reduced words of length ≤ max_len in the generators and
/// their inverses, in lexicographic order a < b < … < A < B < ….
ScanSummary word_scan(const LocalSystemTuple& t, const ScanOptions& opt);

/// Unipotent: not I, and characteristic polynomial (x − 1)ⁿ.
bool is_unipotent(const CMatrix& m);
/// Smallest k ≤ 24 with m^k scalar, by exact powering.
std::optional<int> projective_order_exact(const CMatrix& m);

}  // namespace clausenlab::conv
