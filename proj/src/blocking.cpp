#include "erblock/blocking.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>
#include <omp.h>

#include "erblock/error.hpp"
#include "erblock/reference.hpp"

namespace erblock {

namespace {

using TermMaps = std::vector<std::unordered_map<std::string, Block>>;

void check_inputs(const BlockingScheme& scheme, const Dataset& left, const Dataset& right) {
  check_scheme(scheme);
  check_no_key_separator(left);
  check_no_key_separator(right);
}

BlockIndex empty_index(const BlockingScheme& scheme, const Dataset& left, const Dataset& right) {
  BlockIndex index;
  for (const auto& r : left.records) index.left_ids.push_back(r.id);
  for (const auto& r : right.records) index.right_ids.push_back(r.id);
  index.terms.resize(scheme.terms.size());
  return index;
}

// Indexes records [begin, end) of one side into `maps`.
void index_range(const BlockingScheme& scheme, const Dataset& d, Side side, std::size_t begin, std::size_t end,
                 TermMaps& maps) {
  for (std::size_t r = begin; r < end; ++r) {
    RecordRef ref{d.schema, d.records[r]};
    for (std::size_t t = 0; t < scheme.terms.size(); ++t) {
      for (auto& key : bkv_set(scheme.terms[t], t, ref, side)) {
        auto& block = maps[t][std::move(key)];
        (side == Side::Left ? block.left : block.right).push_back(static_cast<std::uint32_t>(r));
      }
    }
  }
}

std::vector<const Block*> all_blocks(const BlockIndex& index, std::size_t max_block_pairs) {
  std::vector<const Block*> out;
  for (const auto& m : index.terms) {
    for (const auto& [key, block] : m) {
      if (block.left.empty() || block.right.empty()) continue;
      if (max_block_pairs > 0 && block.left.size() * block.right.size() > max_block_pairs) continue;
      out.push_back(&block);
    }
  }
  return out;
}

CandidateSet to_id_pairs(const BlockIndex& index, const std::vector<std::uint64_t>& packed) {
  CandidateSet out;
  out.reserve(packed.size());
  for (auto p : packed) out.emplace_back(index.left_ids[p >> 32], index.right_ids[p & 0xffffffffu]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::size_t BlockIndex::block_count() const {
  std::size_t n = 0;
  for (const auto& m : terms) n += m.size();
  return n;
}

std::size_t BlockIndex::max_block_size() const {
  std::size_t best = 0;
  for (const auto& m : terms) {
    for (const auto& [key, block] : m) best = std::max(best, block.left.size() + block.right.size());
  }
  return best;
}

BlockIndex build_blocks(const BlockingScheme& scheme, const Dataset& left, const Dataset& right) {
  check_inputs(scheme, left, right);
  BlockIndex index = empty_index(scheme, left, right);
  const std::size_t n_terms = scheme.terms.size();

  std::vector<TermMaps> shards;
#pragma omp parallel
  {
    const auto shard_count = static_cast<std::size_t>(omp_get_num_threads());
    const auto me = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp single
    shards.assign(shard_count, TermMaps(n_terms));

    // Contiguous shards in thread order keep positions ascending after merge.
    auto span_of = [&](std::size_t n) {
      return std::pair{n * me / shard_count, n * (me + 1) / shard_count};
    };
    auto [lb, le] = span_of(left.size());
    index_range(scheme, left, Side::Left, lb, le, shards[me]);
    auto [rb, re] = span_of(right.size());
    index_range(scheme, right, Side::Right, rb, re, shards[me]);
  }

  index.terms = std::move(shards.front());
  for (std::size_t s = 1; s < shards.size(); ++s) {
    for (std::size_t t = 0; t < n_terms; ++t) {
      auto& target = index.terms[t];
      auto& source = shards[s][t];
      while (!source.empty()) {
        auto node = source.extract(source.begin());
        auto it = target.find(node.key());
        if (it == target.end()) {
          target.insert(std::move(node));
          continue;
        }
        auto& block = it->second;
        const auto& part = node.mapped();
        block.left.insert(block.left.end(), part.left.begin(), part.left.end());
        block.right.insert(block.right.end(), part.right.begin(), part.right.end());
      }
    }
  }
  return index;
}

BlockIndex reference::build_blocks(const BlockingScheme& scheme, const Dataset& left, const Dataset& right) {
  check_inputs(scheme, left, right);
  BlockIndex index = empty_index(scheme, left, right);
  index_range(scheme, left, Side::Left, 0, left.size(), index.terms);
  index_range(scheme, right, Side::Right, 0, right.size(), index.terms);
  return index;
}

CandidateSet candidate_set(const BlockIndex& index, std::size_t max_block_pairs) {
  const auto blocks = all_blocks(index, max_block_pairs);
  std::vector<std::vector<std::uint64_t>> local;
#pragma omp parallel
  {
#pragma omp single
    local.resize(static_cast<std::size_t>(omp_get_num_threads()));
    auto& mine = local[static_cast<std::size_t>(omp_get_thread_num())];
    const auto n = static_cast<std::int64_t>(blocks.size());
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t b = 0; b < n; ++b) {
      const Block& block = *blocks[static_cast<std::size_t>(b)];
      for (auto l : block.left) {
        for (auto r : block.right) mine.push_back((static_cast<std::uint64_t>(l) << 32) | r);
      }
    }
#pragma omp single
    {
      std::size_t total = 0;
      for (const auto& v : local) total += v.size();
      local.front().reserve(total);
      for (std::size_t t = 1; t < local.size(); ++t) {
        local.front().insert(local.front().end(), local[t].begin(), local[t].end());
        std::vector<std::uint64_t>().swap(local[t]);
      }
    }
  }
  auto& packed = local.front();
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
  return to_id_pairs(index, packed);
}

CandidateSet reference::candidate_set(const BlockIndex& index, std::size_t max_block_pairs) {
  std::set<std::uint64_t> pairs;
  for (const Block* block : all_blocks(index, max_block_pairs)) {
    for (auto l : block->left) {
      for (auto r : block->right) pairs.insert((static_cast<std::uint64_t>(l) << 32) | r);
    }
  }
  return to_id_pairs(index, {pairs.begin(), pairs.end()});
}

EvalReport evaluate(const CandidateSet& gamma, const GroundTruth& truth, std::size_t left_size,
                    std::size_t right_size) {
  if (truth.size() == 0) throw ArgumentError("evaluation needs a non-empty ground truth");
  if (left_size == 0 || right_size == 0) throw ArgumentError("evaluation needs two non-empty datasets");
  EvalReport r;
  r.gamma = gamma.size();
  r.omega = left_size * right_size;
  r.omega_m = truth.size();
  for (const auto& p : gamma) r.gamma_m += truth.contains(p) ? 1 : 0;
  r.rr = 1.0 - static_cast<double>(r.gamma) / static_cast<double>(r.omega);
  r.pc = static_cast<double>(r.gamma_m) / static_cast<double>(r.omega_m);
  r.pq = r.gamma == 0 ? 0.0 : static_cast<double>(r.gamma_m) / static_cast<double>(r.gamma);
  r.fscore = r.rr + r.pc == 0.0 ? 0.0 : 2.0 * r.rr * r.pc / (r.rr + r.pc);
  return r;
}

double pq_identity_residual(const EvalReport& report) {
  if (report.rr >= 1.0) return 0.0;
  const double c = static_cast<double>(report.omega_m) / static_cast<double>(report.omega);
  return std::abs(report.pq - c * report.pc / (1.0 - report.rr));
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["rr"] = report.rr;
  j["pc"] = report.pc;
  j["pq"] = report.pq;
  j["fscore"] = report.fscore;
  j["gamma"] = report.gamma;
  j["omega"] = report.omega;
  j["omega_m"] = report.omega_m;
  j["gamma_m"] = report.gamma_m;
  const double residual = pq_identity_residual(report);
  j["pq_identity_residual"] = residual;
  j["pq_identity_holds"] = residual < 1e-12;
  return j.dump(2) + "\n";
}

CandidateSet load_candidate_set(const std::filesystem::path& path) {
  auto rows = parse_csv(read_text_file(path));
  if (rows.empty()) throw ParseError(path.string() + ": missing header");
  CandidateSet out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw ParseError(path.string() + ": row " + std::to_string(i) + " must have 2 cells");
    }
    out.emplace_back(rows[i][0], rows[i][1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void save_candidate_set(const CandidateSet& gamma, const std::filesystem::path& path) {
  std::string out = format_csv_row({"left_id", "right_id"}) + "\n";
  for (const auto& [a, b] : gamma) out += format_csv_row({a, b}) + "\n";
  write_text_file(path, out);
}

}  // namespace erblock
