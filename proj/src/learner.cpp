#include "erblock/learner.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>
#include <omp.h>

#include "erblock/error.hpp"
#include "erblock/matcher.hpp"
#include "erblock/reference.hpp"
#include "erblock/text.hpp"

namespace erblock {

namespace {

using Cover = std::vector<std::uint32_t>;

Cover intersect(const Cover& a, const Cover& b) {
  Cover out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Atom coverage inverted from per-pair coverage; pair indices come out sorted.
std::vector<Cover> invert(const std::vector<Cover>& per_pair, std::size_t atoms) {
  std::vector<Cover> out(atoms);
  for (std::size_t p = 0; p < per_pair.size(); ++p) {
    for (auto a : per_pair[p]) out[a].push_back(static_cast<std::uint32_t>(p));
  }
  return out;
}

void for_each_combination(const Cover& pool, std::size_t j, const auto& visit) {
  if (pool.size() < j) return;
  std::vector<std::size_t> pos(j);
  for (std::size_t i = 0; i < j; ++i) pos[i] = i;
  Cover pick(j);
  while (true) {
    for (std::size_t i = 0; i < j; ++i) pick[i] = pool[pos[i]];
    visit(pick);
    std::size_t i = j;
    while (i > 0 && pos[i - 1] == pool.size() - j + (i - 1)) --i;
    if (i == 0) return;
    ++pos[i - 1];
    for (std::size_t t = i; t < j; ++t) pos[t] = pos[t - 1] + 1;
  }
}

}  // namespace

PairRows resolve_pairs(const std::vector<IdPair>& pairs, const Dataset& left, const Dataset& right) {
  const auto li = id_index(left);
  const auto ri = id_index(right);
  PairRows rows;
  rows.left.reserve(pairs.size());
  rows.right.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    auto x = li.find(a);
    if (x == li.end()) throw LookupError("left id '" + a + "' not found in " + left.schema.dataset_name);
    auto y = ri.find(b);
    if (y == ri.end()) throw LookupError("right id '" + b + "' not found in " + right.schema.dataset_name);
    rows.left.push_back(static_cast<std::uint32_t>(x->second));
    rows.right.push_back(static_cast<std::uint32_t>(y->second));
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> induced_simple_mappings(const MappingSet& q) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& m : q) {
    for (const auto& f : m.left) {
      for (const auto& g : m.right) out.emplace(f, g);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<SimpleSbp> candidate_atoms(std::span<const IndexingFunction> g, const MappingSet& q) {
  std::vector<SimpleSbp> atoms;
  for (const auto& [f1, f2] : induced_simple_mappings(q)) {
    for (auto fn : g) atoms.push_back({fn, f1, f2});
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

std::vector<Cover> pair_coverage(const std::vector<SimpleSbp>& atoms, const PairRows& pairs, const Dataset& left,
                                 const Dataset& right) {
  // Block keys are cached per (record, field, function) so every record is
  // indexed once no matter how many pairs and atoms touch it.
  struct Feature {
    std::size_t column;
    IndexingFunction fn;
    auto operator<=>(const Feature&) const = default;
  };
  std::map<Feature, std::size_t> left_features, right_features;
  std::vector<std::pair<std::size_t, std::size_t>> atom_features;
  for (const auto& a : atoms) {
    Feature lf{left.schema.require(a.left), a.fn};
    Feature rf{right.schema.require(a.right), a.fn};
    auto l = left_features.emplace(lf, left_features.size()).first->second;
    auto r = right_features.emplace(rf, right_features.size()).first->second;
    atom_features.emplace_back(l, r);
  }

  auto build_cache = [](const Dataset& d, const std::vector<std::uint32_t>& rows,
                        const std::map<Feature, std::size_t>& features, std::vector<std::uint32_t>& slot_of) {
    std::vector<std::uint32_t> distinct(rows);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    slot_of.assign(d.size(), 0);
    for (std::size_t s = 0; s < distinct.size(); ++s) slot_of[distinct[s]] = static_cast<std::uint32_t>(s);
    std::vector<Feature> list(features.size());
    for (const auto& [f, i] : features) list[i] = f;

    std::vector<std::vector<std::string>> cache(distinct.size() * list.size());
    const auto n = static_cast<std::int64_t>(distinct.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t s = 0; s < n; ++s) {
      const Record& r = d.records[distinct[static_cast<std::size_t>(s)]];
      for (std::size_t f = 0; f < list.size(); ++f) {
        cache[static_cast<std::size_t>(s) * list.size() + f] =
            index_members(list[f].fn, field_value_set(r, list[f].column));
      }
    }
    return cache;
  };

  std::vector<std::uint32_t> left_slot, right_slot;
  const auto left_cache = build_cache(left, pairs.left, left_features, left_slot);
  const auto right_cache = build_cache(right, pairs.right, right_features, right_slot);
  const std::size_t nl = left_features.size();
  const std::size_t nr = right_features.size();

  std::vector<Cover> out(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t p = 0; p < n; ++p) {
    const auto u = static_cast<std::size_t>(p);
    const std::size_t ls = left_slot[pairs.left[u]];
    const std::size_t rs = right_slot[pairs.right[u]];
    Cover covering;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const auto& lk = left_cache[ls * nl + atom_features[a].first];
      const auto& rk = right_cache[rs * nr + atom_features[a].second];
      if (text::sorted_intersects(lk, rk)) covering.push_back(static_cast<std::uint32_t>(a));
    }
    out[u] = std::move(covering);
  }
  return out;
}

std::vector<Cover> reference::pair_coverage(const std::vector<SimpleSbp>& atoms, const PairRows& pairs,
                                            const Dataset& left, const Dataset& right) {
  std::vector<Cover> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    RecordRef r1{left.schema, left.records[pairs.left[p]]};
    RecordRef r2{right.schema, right.records[pairs.right[p]]};
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (simple_sbp_eval(atoms[a], r1, r2)) out[p].push_back(static_cast<std::uint32_t>(a));
    }
  }
  return out;
}

CoverageIndex build_search_space(std::span<const IndexingFunction> g, const MappingSet& q, int k,
                                 const PairRows& dups, const PairRows& negs, const Dataset& left,
                                 const Dataset& right, std::size_t term_cap) {
  if (k < 1) throw ArgumentError("k must be positive");
  if (dups.size() == 0 || negs.size() == 0) throw ArgumentError("search space needs non-empty D and N");
  const auto atoms = candidate_atoms(g, q);
  const auto dup_by_pair = pair_coverage(atoms, dups, left, right);
  const auto atom_dup = invert(dup_by_pair, atoms.size());
  const auto atom_neg = invert(pair_coverage(atoms, negs, left, right), atoms.size());

  CoverageIndex index;
  index.atom_count = atoms.size();
  index.dup_pairs = dups.size();
  index.neg_pairs = negs.size();
  auto over_cap = [&](std::size_t n) {
    if (n > term_cap) {
      throw CapacityError("search space exceeds the term cap of " + std::to_string(term_cap) + " keys");
    }
  };

  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (atom_dup[a].empty()) continue;
    index.keys.push_back(Term({atoms[a]}));
    index.dup_cover.push_back(atom_dup[a]);
    index.neg_cover.push_back(atom_neg[a]);
  }
  over_cap(index.keys.size());

  // Conjunctions are generated per duplicate pair from the atoms covering it,
  // so each one covers at least that pair.
  std::set<Cover> conjunctions;
  for (int j = 2; j <= k; ++j) {
    for (const auto& covering : dup_by_pair) {
      for_each_combination(covering, static_cast<std::size_t>(j), [&](const Cover& pick) {
        if (conjunctions.insert(pick).second) over_cap(index.keys.size() + conjunctions.size());
      });
    }
  }
  for (const auto& ids : conjunctions) {
    std::vector<SimpleSbp> parts;
    Cover dup = atom_dup[ids.front()];
    Cover neg = atom_neg[ids.front()];
    for (auto id : ids) {
      parts.push_back(atoms[id]);
      dup = intersect(dup, atom_dup[id]);
      neg = intersect(neg, atom_neg[id]);
    }
    index.keys.emplace_back(std::move(parts));
    index.dup_cover.push_back(std::move(dup));
    index.neg_cover.push_back(std::move(neg));
  }
  return index;
}

double key_score(std::size_t dup_covered, std::size_t dups, std::size_t neg_covered, std::size_t negs) {
  // One division keeps a score that is exactly kappa from falling below it.
  const double num = static_cast<double>(dup_covered) * static_cast<double>(negs) -
                     static_cast<double>(neg_covered) * static_cast<double>(dups);
  return num / (static_cast<double>(dups) * static_cast<double>(negs));
}

std::vector<ScoredKey> score_and_prune(const CoverageIndex& index, double kappa) {
  std::vector<ScoredKey> out;
  for (std::size_t i = 0; i < index.keys.size(); ++i) {
    double s = key_score(index.dup_cover[i].size(), index.dup_pairs, index.neg_cover[i].size(), index.neg_pairs);
    if (s < kappa) continue;
    out.push_back({i, index.keys[i].key(), s});
  }
  std::sort(out.begin(), out.end(), [](const ScoredKey& a, const ScoredKey& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
  return out;
}

std::vector<ScoredKey> chvatal_cover(const std::vector<ScoredKey>& survivors, const std::vector<Cover>& dup_cover) {
  if (survivors.empty()) throw LearnerFailure("no key survived pruning; lower kappa");
  std::set<std::uint32_t> uncovered;
  for (const auto& s : survivors) uncovered.insert(dup_cover[s.key].begin(), dup_cover[s.key].end());

  std::vector<bool> picked(survivors.size(), false);
  std::vector<ScoredKey> chosen;
  while (!uncovered.empty()) {
    std::size_t best = survivors.size();
    std::size_t best_new = 0;
    auto better = [&](std::size_t i, std::size_t fresh) {
      const auto& a = survivors[i];
      const auto& b = survivors[best];
      const bool pa = a.score > 0.0, pb = b.score > 0.0;
      if (pa != pb) return pa;
      if (pa) {
        double ga = a.score * static_cast<double>(fresh);
        double gb = b.score * static_cast<double>(best_new);
        if (ga != gb) return ga > gb;
      } else {
        if (fresh != best_new) return fresh > best_new;
        if (a.score != b.score) return a.score > b.score;
      }
      return a.name < b.name;
    };
    for (std::size_t i = 0; i < survivors.size(); ++i) {
      if (picked[i]) continue;
      std::size_t fresh = 0;
      for (auto p : dup_cover[survivors[i].key]) fresh += uncovered.count(p);
      if (fresh == 0) continue;
      if (best == survivors.size() || better(i, fresh)) {
        best = i;
        best_new = fresh;
      }
    }
    picked[best] = true;
    chosen.push_back(survivors[best]);
    for (auto p : dup_cover[survivors[best].key]) uncovered.erase(p);
  }
  return chosen;
}

LearnResult learn_scheme(const std::vector<IdPair>& duplicates, const MappingSet& q, const LearnerConfig& config,
                         const Dataset& left, const Dataset& right, std::uint64_t seed) {
  if (duplicates.size() < 2) throw ArgumentError("learning needs at least two duplicate pairs");
  if (q.empty()) throw ArgumentError("learning needs a non-empty mapping set");
  if (!(config.kappa >= -1.0 && config.kappa <= 1.0)) throw ArgumentError("kappa must lie in [-1,1]");
  if (config.k < 1) throw ArgumentError("k must be positive");

  LearnResult result;
  if (config.k > 2) {
    result.report.warnings.push_back("k = " + std::to_string(config.k) +
                                     " may exhaust the term cap of " + std::to_string(config.term_cap));
  }
  result.negatives = permute_negatives(duplicates, seed);
  const auto dups = resolve_pairs(duplicates, left, right);
  const auto negs = resolve_pairs(result.negatives, left, right);
  const auto index = build_search_space(catalogue(), q, config.k, dups, negs, left, right, config.term_cap);
  const auto survivors = score_and_prune(index, config.kappa);

  result.report.h_size = index.atom_count;
  result.report.hc_size = index.keys.size();
  result.report.survivors = survivors.size();
  std::set<std::uint32_t> universe;
  for (const auto& s : survivors) universe.insert(index.dup_cover[s.key].begin(), index.dup_cover[s.key].end());
  result.report.universe = universe.size();
  if (survivors.empty()) {
    std::ostringstream msg;
    msg << "no key scored at least kappa = " << config.kappa << " over " << index.keys.size() << " keys";
    throw LearnerFailure(msg.str());
  }

  result.report.chosen = chvatal_cover(survivors, index.dup_cover);
  result.scheme.k = config.k;
  for (const auto& c : result.report.chosen) result.scheme.terms.push_back(index.keys[c.key]);
  return result;
}

std::string learn_report_to_json(const LearnReport& report, const LearnerConfig& config) {
  nlohmann::ordered_json j;
  j["kappa"] = config.kappa;
  j["k"] = config.k;
  j["term_cap"] = config.term_cap;
  j["h_size"] = report.h_size;
  j["hc_size"] = report.hc_size;
  j["survivors"] = report.survivors;
  j["universe"] = report.universe;
  auto chosen = nlohmann::ordered_json::array();
  for (const auto& c : report.chosen) chosen.push_back({{"key", c.name}, {"score", c.score}});
  j["chosen"] = chosen;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

}  // namespace erblock
