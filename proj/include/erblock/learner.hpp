#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "erblock/predicates.hpp"
#include "erblock/tabular.hpp"

namespace erblock {

struct LearnerConfig {
  double kappa = 0.9;
  int k = 1;
  std::size_t term_cap = 200000;
};

/// Labelled pairs resolved to record positions in the two datasets.
struct PairRows {
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;

  std::size_t size() const { return left.size(); }
};

/// Throws LookupError naming the first id that does not resolve.
PairRows resolve_pairs(const std::vector<IdPair>& pairs, const Dataset& left, const Dataset& right);

/// Search space with coverage of every key over D and N (sorted pair indices).
struct CoverageIndex {
  std::vector<Term> keys;
  std::vector<std::vector<std::uint32_t>> dup_cover;
  std::vector<std::vector<std::uint32_t>> neg_cover;
  std::size_t atom_count = 0;  // |H|, before empty-coverage drop
  std::size_t dup_pairs = 0;
  std::size_t neg_pairs = 0;
};

/// Distinct 1:1 mappings induced by Q (complex mappings expand to all field
/// pairs), in sorted order.
std::vector<std::pair<std::string, std::string>> induced_simple_mappings(const MappingSet& q);

/// H = G x induced 1:1 mappings, sorted.
std::vector<SimpleSbp> candidate_atoms(std::span<const IndexingFunction> g, const MappingSet& q);

/// For each pair, the sorted ids of the atoms that cover it.
std::vector<std::vector<std::uint32_t>> pair_coverage(const std::vector<SimpleSbp>& atoms, const PairRows& pairs,
                                                      const Dataset& left, const Dataset& right);

/// Step 0 and 1: supplement H to H_c with conjunctions of up to k atoms that
/// jointly cover some duplicate pair, and record coverage over D and N. Keys
/// with empty duplicate coverage are dropped. Throws CapacityError when
/// |H_c| exceeds `term_cap`.
CoverageIndex build_search_space(std::span<const IndexingFunction> g, const MappingSet& q, int k,
                                 const PairRows& dups, const PairRows& negs, const Dataset& left,
                                 const Dataset& right, std::size_t term_cap);

struct ScoredKey {
  std::size_t key = 0;  // position in CoverageIndex::keys
  std::string name;     // canonical key string
  double score = 0.0;
};

/// |cover_D|/|D| - |cover_N|/|N| evaluated with a single rounding.
double key_score(std::size_t dup_covered, std::size_t dups, std::size_t neg_covered, std::size_t negs);

/// Keys with score >= kappa, ordered by (score desc, name asc).
std::vector<ScoredKey> score_and_prune(const CoverageIndex& index, double kappa);

/// Greedy weighted set cover over U = union of the survivors' duplicate
/// coverage. Each step takes the key maximising score * |newly covered|;
/// keys with non-positive score rank below every positive one and among
/// themselves by |newly covered|. Ties go to the smaller name. Returns the
/// picked survivors in pick order. Throws LearnerFailure when `survivors` is
/// empty.
std::vector<ScoredKey> chvatal_cover(const std::vector<ScoredKey>& survivors,
                                     const std::vector<std::vector<std::uint32_t>>& dup_cover);

struct LearnReport {
  std::size_t h_size = 0;
  std::size_t hc_size = 0;
  std::size_t survivors = 0;
  std::size_t universe = 0;
  std::vector<ScoredKey> chosen;
  std::vector<std::string> warnings;
};

struct LearnResult {
  BlockingScheme scheme;
  LearnReport report;
  std::vector<IdPair> negatives;
};

/// Full learning run: negatives from permute_negatives(D, seed), search
/// space, pruning, greedy cover; the scheme is the disjunction of the picks.
LearnResult learn_scheme(const std::vector<IdPair>& duplicates, const MappingSet& q, const LearnerConfig& config,
                         const Dataset& left, const Dataset& right, std::uint64_t seed);

std::string learn_report_to_json(const LearnReport& report, const LearnerConfig& config);

}  // namespace erblock
