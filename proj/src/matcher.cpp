#include "erblock/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include <omp.h>

#include "erblock/error.hpp"
#include "erblock/predicates.hpp"
#include "erblock/random.hpp"
#include "erblock/reference.hpp"
#include "erblock/similarity.hpp"

namespace erblock {

namespace {

using SparseVector = std::vector<std::pair<std::uint32_t, double>>;  // sorted by token id

// TF-IDF document vectors for both datasets over a shared vocabulary.
struct WeightedCorpus {
  std::vector<SparseVector> left;
  std::vector<SparseVector> right;
  std::size_t vocabulary = 0;
};

WeightedCorpus weigh_records(const Dataset& left, const Dataset& right) {
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::size_t> df;
  auto to_counts = [&](const Record& r) {
    std::vector<std::uint32_t> tokens;
    for (const auto& t : record_tokens(r)) {
      auto [it, fresh] = ids.emplace(t, static_cast<std::uint32_t>(ids.size()));
      if (fresh) df.push_back(0);
      tokens.push_back(it->second);
    }
    std::sort(tokens.begin(), tokens.end());
    std::vector<std::pair<std::uint32_t, double>> counts;
    for (auto id : tokens) {
      if (!counts.empty() && counts.back().first == id) {
        counts.back().second += 1.0;
      } else {
        counts.emplace_back(id, 1.0);
        ++df[id];
      }
    }
    return counts;
  };

  WeightedCorpus corpus;
  for (const auto& r : left.records) corpus.left.push_back(to_counts(r));
  for (const auto& r : right.records) corpus.right.push_back(to_counts(r));
  corpus.vocabulary = ids.size();

  const double n = static_cast<double>(left.size() + right.size());
  std::vector<double> idf(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) idf[i] = std::log(1.0 + n / static_cast<double>(df[i]));
  auto finish = [&](SparseVector& v) {
    double norm = 0.0;
    for (auto& [id, w] : v) {
      w *= idf[id];
      norm += w * w;
    }
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (auto& e : v) e.second /= norm;
    }
  };
  for (auto& v : corpus.left) finish(v);
  for (auto& v : corpus.right) finish(v);
  return corpus;
}

void check_generator_input(const Dataset& left, const Dataset& right, int limit) {
  if (limit <= 0) throw ArgumentError("duplicate limit must be positive");
  if (left.empty() || right.empty()) throw ArgumentError("duplicate generation needs two non-empty datasets");
}

std::vector<DuplicateCandidate> keep_top(std::vector<DuplicateCandidate> list, std::size_t limit) {
  if (list.size() > limit) {
    std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(limit), list.end(), ranks_before);
    list.resize(limit);
  } else {
    std::sort(list.begin(), list.end(), ranks_before);
  }
  return list;
}

}  // namespace

bool ranks_before(const DuplicateCandidate& a, const DuplicateCandidate& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  if (a.left_id != b.left_id) return a.left_id < b.left_id;
  return a.right_id < b.right_id;
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> r, std::vector<std::string> c)
    : rows(std::move(r)), cols(std::move(c)), entries(rows.size() * cols.size(), 0.0) {}

std::vector<std::string> record_tokens(const Record& record) {
  std::vector<std::string> tokens;
  for (std::size_t c = 0; c < record.values.size(); ++c) {
    for (const auto& member : field_value_set(record, c)) {
      auto t = tokenize(member);
      tokens.insert(tokens.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
  }
  return tokens;
}

std::vector<DuplicateCandidate> generate_duplicates(const Dataset& left, const Dataset& right, int limit) {
  check_generator_input(left, right, limit);
  const auto corpus = weigh_records(left, right);
  const std::size_t cap = static_cast<std::size_t>(limit);

  // token id -> (right record, weight), right records ascending
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings(corpus.vocabulary);
  for (std::size_t s = 0; s < corpus.right.size(); ++s) {
    for (const auto& [id, w] : corpus.right[s]) postings[id].emplace_back(static_cast<std::uint32_t>(s), w);
  }

  std::vector<std::vector<DuplicateCandidate>> per_left(left.size());
  const auto n_left = static_cast<std::int64_t>(left.size());
#pragma omp parallel
  {
    std::vector<double> acc(right.size(), 0.0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t r = 0; r < n_left; ++r) {
      // Visiting tokens in ascending id order sums each dot product in the
      // same order as a sorted merge, so results match the brute force bitwise.
      for (const auto& [id, w] : corpus.left[static_cast<std::size_t>(r)]) {
        for (const auto& [s, ws] : postings[id]) {
          if (acc[s] == 0.0) touched.push_back(s);
          acc[s] += w * ws;
        }
      }
      std::vector<DuplicateCandidate> found;
      for (auto s : touched) {
        if (acc[s] > 0.0) {
          found.push_back({left.records[static_cast<std::size_t>(r)].id, right.records[s].id, std::min(acc[s], 1.0)});
        }
        acc[s] = 0.0;
      }
      touched.clear();
      per_left[static_cast<std::size_t>(r)] = keep_top(std::move(found), cap);
    }
  }

  std::vector<DuplicateCandidate> all;
  for (auto& v : per_left) all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return keep_top(std::move(all), cap);
}

std::vector<DuplicateCandidate> reference::generate_duplicates(const Dataset& left, const Dataset& right, int limit) {
  check_generator_input(left, right, limit);
  const auto corpus = weigh_records(left, right);
  std::vector<DuplicateCandidate> all;
  for (std::size_t r = 0; r < left.size(); ++r) {
    for (std::size_t s = 0; s < right.size(); ++s) {
      const auto& a = corpus.left[r];
      const auto& b = corpus.right[s];
      double dot = 0.0;
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
          ++i;
        } else if (b[j].first < a[i].first) {
          ++j;
        } else {
          dot += a[i].second * b[j].second;
          ++i;
          ++j;
        }
      }
      if (dot > 0.0) all.push_back({left.records[r].id, right.records[s].id, std::min(dot, 1.0)});
    }
  }
  return keep_top(std::move(all), static_cast<std::size_t>(limit));
}

SimilarityMatrix build_similarity_matrix(const std::vector<DuplicateCandidate>& duplicates, const Dataset& left,
                                         const Dataset& right, double theta) {
  if (duplicates.empty()) throw ArgumentError("similarity matrix needs at least one duplicate pair");
  const std::size_t n1 = left.schema.fields.size();
  const std::size_t n2 = right.schema.fields.size();

  auto cell_tokens = [](const Record& r, std::size_t c) {
    std::vector<std::string> tokens;
    for (const auto& m : field_value_set(r, c)) {
      auto t = tokenize(m);
      tokens.insert(tokens.end(), t.begin(), t.end());
    }
    return tokens;
  };
  auto column_corpora = [&](const Dataset& d, std::size_t n_fields) {
    std::vector<TfIdfCorpus> out(n_fields);
    for (const auto& r : d.records) {
      for (std::size_t c = 0; c < n_fields; ++c) out[c].add_document(cell_tokens(r, c));
    }
    return out;
  };
  const auto left_corpora = column_corpora(left, n1);
  const auto right_corpora = column_corpora(right, n2);
  std::vector<TfIdfCorpus> pair_corpora(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      pair_corpora[i * n2 + j] = left_corpora[i];
      pair_corpora[i * n2 + j].merge(right_corpora[j]);
    }
  }

  const auto left_ids = id_index(left);
  const auto right_ids = id_index(right);
  std::vector<const Record*> r1(duplicates.size()), r2(duplicates.size());
  for (std::size_t d = 0; d < duplicates.size(); ++d) {
    auto a = left_ids.find(duplicates[d].left_id);
    auto b = right_ids.find(duplicates[d].right_id);
    if (a == left_ids.end() || b == right_ids.end()) {
      throw LookupError("duplicate pair (" + duplicates[d].left_id + ", " + duplicates[d].right_id +
                        ") does not resolve");
    }
    r1[d] = &left.records[a->second];
    r2[d] = &right.records[b->second];
  }

  std::vector<std::vector<double>> per_pair(duplicates.size());
  const auto n_dups = static_cast<std::int64_t>(duplicates.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t d = 0; d < n_dups; ++d) {
    const auto u = static_cast<std::size_t>(d);
    std::vector<std::vector<std::string>> t2(n2);
    for (std::size_t j = 0; j < n2; ++j) t2[j] = cell_tokens(*r2[u], j);
    std::vector<double> m(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
      auto t1 = cell_tokens(*r1[u], i);
      for (std::size_t j = 0; j < n2; ++j) m[i * n2 + j] = soft_tfidf_tokens(t1, t2[j], theta, pair_corpora[i * n2 + j]);
    }
    per_pair[u] = std::move(m);
  }

  SimilarityMatrix matrix(left.schema.fields, right.schema.fields);
  for (const auto& m : per_pair) {
    for (std::size_t e = 0; e < m.size(); ++e) matrix.entries[e] += m[e];
  }
  for (auto& e : matrix.entries) e /= static_cast<double>(duplicates.size());
  return matrix;
}

MappingSet hungarian_assignment(const SimilarityMatrix& matrix) {
  const std::size_t rows = matrix.rows.size();
  const std::size_t cols = matrix.cols.size();
  if (rows == 0 || cols == 0) return {};
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {  // 1-based, minimised
    return transposed ? -matrix.at(j - 1, i - 1) : -matrix.at(i - 1, j - 1);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<std::size_t, std::size_t>> assigned;  // (row, col) of the matrix
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transposed) {
      assigned.emplace_back(j - 1, p[j] - 1);
    } else {
      assigned.emplace_back(p[j] - 1, j - 1);
    }
  }
  std::sort(assigned.begin(), assigned.end());
  MappingSet out;
  for (auto [i, j] : assigned) out.emplace_back(std::vector{matrix.rows[i]}, std::vector{matrix.cols[j]}, matrix.at(i, j));
  return out;
}

std::vector<IdPair> permute_negatives(const std::vector<IdPair>& duplicates, std::uint64_t seed) {
  const std::size_t n = duplicates.size();
  if (n < 2) throw ArgumentError("negatives need at least two duplicate pairs");
  const std::set<IdPair> known(duplicates.begin(), duplicates.end());
  Rng rng(seed);
  auto collides = [&](std::size_t i, std::size_t target) {
    return known.count({duplicates[i].first, duplicates[target].second}) != 0;
  };

  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<std::size_t> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = i;
    // Rejection sampling gives a uniform derangement; about e draws expected.
    do {
      rng.shuffle(pi);
    } while ([&] {
      for (std::size_t i = 0; i < n; ++i) {
        if (pi[i] == i) return true;
      }
      return false;
    }());

    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!collides(i, pi[i])) continue;
      ok = false;
      for (int tries = 0; tries < 64; ++tries) {
        std::size_t j = rng.below(n);
        if (j == i || pi[j] == i || pi[i] == j) continue;
        if (collides(i, pi[j]) || collides(j, pi[i])) continue;
        std::swap(pi[i], pi[j]);
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    std::vector<IdPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(duplicates[i].first, duplicates[pi[i]].second);
    return out;
  }
  throw ArgumentError("could not draw negatives disjoint from the duplicate pairs");
}

MappingSet exhaustive_mappings(const Schema& left, const Schema& right) {
  MappingSet out;
  for (const auto& f : left.fields) {
    for (const auto& g : right.fields) out.emplace_back(std::vector{f}, std::vector{g}, 0.0);
  }
  return out;
}

PrecisionRecall precision_recall_at_k(const std::vector<DuplicateCandidate>& ranked, const GroundTruth& truth,
                                      std::size_t k) {
  if (truth.size() == 0) throw ArgumentError("recall is undefined for an empty ground truth");
  if (k < 1 || k > ranked.size()) throw ArgumentError("k must lie in [1, ranked list length]");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += truth.contains({ranked[i].left_id, ranked[i].right_id}) ? 1 : 0;
  return {static_cast<double>(hits) / static_cast<double>(k),
          static_cast<double>(hits) / static_cast<double>(truth.size())};
}

PrecisionRecall mapping_precision_recall(const MappingSet& found, const MappingSet& truth) {
  if (found.empty() || truth.empty()) throw ArgumentError("mapping precision/recall needs two non-empty sets");
  std::size_t hits = 0;
  for (const auto& q : found) {
    if (std::any_of(truth.begin(), truth.end(), [&](const Mapping& t) { return t.same_fields(q); })) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(found.size()),
          static_cast<double>(hits) / static_cast<double>(truth.size())};
}

std::vector<IdPair> to_id_pairs(const std::vector<DuplicateCandidate>& candidates) {
  std::vector<IdPair> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.emplace_back(c.left_id, c.right_id);
  return out;
}

MatchResult run_matcher(const Dataset& left, const Dataset& right, const MatcherConfig& config) {
  if (config.t <= 0 || config.n <= 0) throw ArgumentError("matcher t and n must be positive");
  if (config.theta < 0.0 || config.theta > 1.0) throw ArgumentError("matcher theta must lie in [0,1]");
  MatchResult result;
  result.ranked = generate_duplicates(left, right, std::max(config.t, config.n));
  std::vector<DuplicateCandidate> top(result.ranked.begin(),
                                      result.ranked.begin() + std::min<std::ptrdiff_t>(config.t, static_cast<std::ptrdiff_t>(result.ranked.size())));
  result.matrix = build_similarity_matrix(top, left, right, config.theta);
  result.mappings = hungarian_assignment(result.matrix);
  return result;
}

}  // namespace erblock
