#pragma once

// Serial implementations of the parallel kernels. They share no code paths
// with the parallel versions beyond the predicates themselves and are used by
// the tests and benchmarks as the baseline.

#include <vector>

#include "erblock/blocking.hpp"
#include "erblock/learner.hpp"
#include "erblock/matcher.hpp"

namespace erblock::reference {

/// All-pairs cosine without the inverted index.
std::vector<DuplicateCandidate> generate_duplicates(const Dataset& left, const Dataset& right, int limit);

/// Pair coverage by direct simple_sbp_eval calls, no key cache.
std::vector<std::vector<std::uint32_t>> pair_coverage(const std::vector<SimpleSbp>& atoms, const PairRows& pairs,
                                                      const Dataset& left, const Dataset& right);

/// Single-threaded index build.
BlockIndex build_blocks(const BlockingScheme& scheme, const Dataset& left, const Dataset& right);

/// Single-threaded enumeration into an ordered set.
CandidateSet candidate_set(const BlockIndex& index, std::size_t max_block_pairs = 0);

}  // namespace erblock::reference
