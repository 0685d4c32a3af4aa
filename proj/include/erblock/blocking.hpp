#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "erblock/predicates.hpp"
#include "erblock/tabular.hpp"

namespace erblock {

/// Record positions sharing one block key, ascending on each side.
struct Block {
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
};

struct BlockIndex {
  std::vector<std::string> left_ids;
  std::vector<std::string> right_ids;
  /// One map per scheme term; keys carry the term namespace.
  std::vector<std::unordered_map<std::string, Block>> terms;

  std::size_t block_count() const;
  /// Largest |left| + |right| over all blocks.
  std::size_t max_block_size() const;
};

/// Sorted by (left_id, right_id), no repeats.
using CandidateSet = std::vector<IdPair>;

/// Indexes every record under its block keys for every term. Records are
/// split into contiguous shards that are indexed in parallel and merged in
/// shard order. Throws ValidationError when data contains the key separator.
BlockIndex build_blocks(const BlockingScheme& scheme, const Dataset& left, const Dataset& right);

/// Union of the per-block cross products. A positive `max_block_pairs` skips
/// blocks whose cross product is larger.
CandidateSet candidate_set(const BlockIndex& index, std::size_t max_block_pairs = 0);

struct EvalReport {
  double rr = 0.0;
  double pc = 0.0;
  double pq = 0.0;
  double fscore = 0.0;
  std::size_t gamma = 0;
  std::size_t omega = 0;
  std::size_t omega_m = 0;
  std::size_t gamma_m = 0;
};

/// Throws ArgumentError for an empty ground truth or an empty cross product.
EvalReport evaluate(const CandidateSet& gamma, const GroundTruth& truth, std::size_t left_size,
                    std::size_t right_size);

/// |pq - c * pc / (1 - rr)| with c = |truth| / |cross product|; 0 when rr == 1.
double pq_identity_residual(const EvalReport& report);

std::string eval_report_to_json(const EvalReport& report);

CandidateSet load_candidate_set(const std::filesystem::path& path);
void save_candidate_set(const CandidateSet& gamma, const std::filesystem::path& path);

}  // namespace erblock
