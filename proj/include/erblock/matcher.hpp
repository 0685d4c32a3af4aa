#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "erblock/tabular.hpp"

namespace erblock {

struct DuplicateCandidate {
  std::string left_id;
  std::string right_id;
  double cosine = 0.0;

  bool operator==(const DuplicateCandidate&) const = default;
};

/// Ranking order: cosine descending, then (left_id, right_id) ascending.
bool ranks_before(const DuplicateCandidate& a, const DuplicateCandidate& b);

struct SimilarityMatrix {
  std::vector<std::string> rows;  // fields of the left schema
  std::vector<std::string> cols;  // fields of the right schema
  std::vector<double> entries;    // row-major

  SimilarityMatrix() = default;
  SimilarityMatrix(std::vector<std::string> r, std::vector<std::string> c);

  double& at(std::size_t i, std::size_t j) { return entries[i * cols.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return entries[i * cols.size() + j]; }
};

struct MatcherConfig {
  int t = 50;
  double theta = 0.5;
  int n = 50;
  std::uint64_t seed = 0;
};

/// Whole-record token bag: tokens of every member of every cell.
std::vector<std::string> record_tokens(const Record& record);

/// Top `limit` cross-dataset pairs by TF-IDF cosine over whole-record token
/// bags, IDF taken over both datasets. Pairs with cosine 0 are never listed.
/// Throws ArgumentError when limit <= 0 or either dataset is empty.
std::vector<DuplicateCandidate> generate_duplicates(const Dataset& left, const Dataset& right, int limit);

/// Element-wise mean over the duplicate pairs of the per-pair Soft-TFIDF
/// matrices. IDF for entry (f1, f2) is taken over column f1 of `left` and
/// column f2 of `right`. Throws ArgumentError for an empty duplicate list.
SimilarityMatrix build_similarity_matrix(const std::vector<DuplicateCandidate>& duplicates, const Dataset& left,
                                         const Dataset& right, double theta);

/// Maximum-total-similarity 1:1 assignment; min(rows, cols) mappings.
MappingSet hungarian_assignment(const SimilarityMatrix& matrix);

/// Non-duplicate pairs (left of pair i, right of pair pi(i)) for a derangement
/// pi, with any pair already present in `duplicates` repaired away.
/// Deterministic for a given seed. Throws ArgumentError when |D| < 2 or when
/// no such pairing can be found.
std::vector<IdPair> permute_negatives(const std::vector<IdPair>& duplicates, std::uint64_t seed);

/// All 1:1 mappings between the two schemas, score 0.
MappingSet exhaustive_mappings(const Schema& left, const Schema& right);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

PrecisionRecall precision_recall_at_k(const std::vector<DuplicateCandidate>& ranked, const GroundTruth& truth,
                                      std::size_t k);
PrecisionRecall mapping_precision_recall(const MappingSet& found, const MappingSet& truth);

std::vector<IdPair> to_id_pairs(const std::vector<DuplicateCandidate>& candidates);

struct MatchResult {
  std::vector<DuplicateCandidate> ranked;  // length <= max(t, n)
  SimilarityMatrix matrix;
  MappingSet mappings;
};

/// Generator, matrix over the top t pairs, Hungarian assignment.
MatchResult run_matcher(const Dataset& left, const Dataset& right, const MatcherConfig& config);

}  // namespace erblock
