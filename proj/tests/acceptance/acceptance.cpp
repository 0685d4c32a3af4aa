// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "../support/random_data.hpp"
#include "erblock/blocking.hpp"
#include "erblock/learner.hpp"
#include "erblock/matcher.hpp"
#include "erblock/rdf.hpp"
#include "erblock/synthetic.hpp"

using namespace erblock;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class F>
double timed(F&& f) {
  auto start = Clock::now();
  f();
  return seconds_since(start);
}

void report(int id, bool ok, const std::string& detail, double secs, double limit) {
  bool in_time = limit <= 0 || secs < limit;
  std::printf("%s criterion %d: %s (%.2f s", ok && in_time ? "PASS" : "FAIL", id, detail.c_str(), secs);
  if (limit > 0) std::printf(", limit %.0f s", limit);
  std::printf(")\n");
  std::fflush(stdout);
  if (!(ok && in_time)) ++failures;
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// -- 1 ----------------------------------------------------------------------

// Subjects and properties are drawn from small pools so that cells hold
// several objects.
rdf::TripleSet random_graph(Rng& rng) {
  std::size_t count = 1 + rng.below(5000);
  std::size_t subjects = 1 + rng.below(count / 2 + 1);
  std::size_t properties = 1 + rng.below(12);
  rdf::TripleSet ts;
  std::size_t attempts = 0;
  while (ts.size() < count && attempts++ < 4 * count) {
    std::string o = testing::random_value(rng, 2);
    if (rng.chance(0.5)) o += " " + std::to_string(rng.below(100000));
    ts.insert({"s" + std::to_string(rng.below(subjects)), "p" + std::to_string(rng.below(properties)), o});
  }
  return ts;
}

void round_trip() {
  Rng rng(101);
  std::size_t bad = 0, triples = 0, multi = 0;
  double secs = timed([&] {
    for (int i = 0; i < 1000; ++i) {
      auto ts = random_graph(rng);
      triples += ts.size();
      auto table = rdf::triples_to_property_table(ts);
      for (const auto& r : table.records) {
        for (const auto& v : r.values) multi += v.find(kValueDelimiter) != std::string::npos;
      }
      if (rdf::property_table_to_triples(table) != ts) ++bad;
    }
  });
  report(1, bad == 0,
         fmt("%.0f/1000 graphs differ after triples->table->triples (%.0f triples, %.0f multi-valued cells)", bad,
             triples, multi),
         secs, 30);
}

// -- 2 ----------------------------------------------------------------------

void coverage_equivalence() {
  Rng rng(202);
  std::size_t bad = 0, pairs = 0;
  double secs = timed([&] {
    for (int i = 0; i < 200; ++i) {
      auto l = testing::random_dataset(rng, 1 + rng.below(100), 1 + rng.below(4), "a");
      auto r = testing::random_dataset(rng, 1 + rng.below(100), 1 + rng.below(4), "b");
      auto scheme = testing::random_scheme(rng, l, r);
      auto gamma = candidate_set(build_blocks(scheme, l, r));
      CandidateSet brute;
      for (const auto& x : l.records) {
        for (const auto& y : r.records) {
          if (scheme_eval(scheme, RecordRef{l.schema, x}, RecordRef{r.schema, y})) brute.push_back({x.id, y.id});
        }
      }
      std::sort(brute.begin(), brute.end());
      pairs += brute.size();
      if (gamma != brute) ++bad;
    }
  });
  report(2, bad == 0, fmt("%.0f/200 instances differ from pairwise evaluation (%.0f covered pairs)", bad, pairs),
         secs, 120);
}

// -- 3 ----------------------------------------------------------------------

double harmonic(std::size_t d) {
  double h = 0.0;
  for (std::size_t i = 1; i <= d; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

void chvatal_bound() {
  Rng rng(303);
  std::size_t invalid = 0, violations = 0;
  double worst = 0.0;
  double secs = timed([&] {
    for (int inst = 0; inst < 500; ++inst) {
      std::uint32_t u = 1 + static_cast<std::uint32_t>(rng.below(12));
      std::size_t m = 1 + rng.below(15);
      std::vector<std::vector<std::uint32_t>> cover(m);
      for (auto& c : cover) {
        for (std::uint32_t e = 0; e < u; ++e) {
          if (rng.chance(0.3)) c.push_back(e);
        }
      }
      for (std::uint32_t e = 0; e < u; ++e) {
        bool any = false;
        for (const auto& c : cover) any = any || std::binary_search(c.begin(), c.end(), e);
        if (!any) {
          auto& c = cover[rng.below(m)];
          c.insert(std::lower_bound(c.begin(), c.end(), e), e);
        }
      }
      std::vector<ScoredKey> survivors;
      std::vector<double> weight(m);
      std::size_t d = 0;
      std::vector<std::uint32_t> masks(m, 0);
      for (std::size_t i = 0; i < m; ++i) {
        double score = 0.05 + 0.95 * rng.uniform();
        weight[i] = 1.0 / score;
        char name[8];
        std::snprintf(name, sizeof name, "k%02zu", i);
        survivors.push_back({i, name, score});
        d = std::max(d, cover[i].size());
        for (auto e : cover[i]) masks[i] |= 1u << e;
      }
      const std::uint32_t full = (1u << u) - 1;
      // Exhaustive optimum over all sub-families.
      double opt = 1e300;
      for (std::uint32_t pick = 1; pick < (1u << m); ++pick) {
        std::uint32_t got = 0;
        double w = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          if (pick >> i & 1u) {
            got |= masks[i];
            w += weight[i];
          }
        }
        if (got == full) opt = std::min(opt, w);
      }
      auto chosen = chvatal_cover(survivors, cover);
      std::uint32_t got = 0;
      double w = 0.0;
      for (const auto& c : chosen) {
        got |= masks[c.key];
        w += weight[c.key];
      }
      if (got != full) ++invalid;
      double ratio = w / opt;
      worst = std::max(worst, ratio / harmonic(d));
      if (w > harmonic(d) * opt * (1 + 1e-12)) ++violations;
    }
  });
  report(3, invalid == 0 && violations == 0,
         fmt("%.0f invalid covers, %.0f bound violations, worst greedy/opt as a fraction of H(d) %.3f", invalid,
             violations, worst),
         secs, 60);
}

// -- 4 ----------------------------------------------------------------------

void hungarian_optimality() {
  Rng rng(404);
  std::size_t bad = 0;
  double worst = 0.0;
  double secs = timed([&] {
    for (int inst = 0; inst < 500; ++inst) {
      std::size_t r = 1 + rng.below(8), c = 1 + rng.below(8);
      std::vector<std::string> rows, cols;
      for (std::size_t i = 0; i < r; ++i) rows.push_back("f" + std::to_string(i));
      for (std::size_t j = 0; j < c; ++j) cols.push_back("g" + std::to_string(j));
      SimilarityMatrix m(rows, cols);
      for (auto& e : m.entries) e = rng.uniform();
      auto q = hungarian_assignment(m);
      double total = 0.0;
      std::set<std::string> used_l, used_r;
      for (const auto& mp : q) {
        auto i = static_cast<std::size_t>(std::find(rows.begin(), rows.end(), mp.left[0]) - rows.begin());
        auto j = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), mp.right[0]) - cols.begin());
        total += m.at(i, j);
        used_l.insert(mp.left[0]);
        used_r.insert(mp.right[0]);
      }
      bool flip = r > c;
      std::size_t small = std::min(r, c);
      std::vector<std::size_t> perm(std::max(r, c));
      std::iota(perm.begin(), perm.end(), 0);
      double best = -1e300;
      do {
        double t = 0.0;
        for (std::size_t i = 0; i < small; ++i) t += flip ? m.at(perm[i], i) : m.at(i, perm[i]);
        best = std::max(best, t);
      } while (std::next_permutation(perm.begin(), perm.end()));
      double gap = std::abs(total - best);
      worst = std::max(worst, gap);
      if (gap > 1e-9 || q.size() != small || used_l.size() != small || used_r.size() != small) ++bad;
    }
  });
  report(4, bad == 0, fmt("%.0f/500 matrices off the enumerated optimum, max gap %.2e", bad, worst), secs, 60);
}

// -- 5 ----------------------------------------------------------------------

struct PipelineOutcome {
  BlockingScheme scheme;
  CandidateSet gamma;
  EvalReport eval;
};

PipelineOutcome unsupervised_pipeline(const Generated& g, std::uint64_t seed) {
  MatcherConfig mc;
  mc.seed = seed;
  auto match = run_matcher(g.left.table, g.right.table, mc);
  auto ranked = match.ranked;
  if (ranked.size() > static_cast<std::size_t>(mc.n)) ranked.resize(static_cast<std::size_t>(mc.n));
  LearnerConfig lc;
  auto learned = learn_scheme(to_id_pairs(ranked), match.mappings, lc, g.left.table, g.right.table, seed);
  PipelineOutcome out;
  out.scheme = learned.scheme;
  out.gamma = candidate_set(build_blocks(out.scheme, g.left.table, g.right.table));
  out.eval = evaluate(out.gamma, g.truth, g.left.table.size(), g.right.table.size());
  return out;
}

void pipeline_magnitude() {
  double pc = 0.0, rr = 0.0, worst_pc = 1.0, worst_rr = 1.0;
  std::string error;
  double secs = timed([&] {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GenSpec spec;
      spec.seed = seed;
      try {
        auto out = unsupervised_pipeline(generate(spec), seed);
        pc += out.eval.pc / 10;
        rr += out.eval.rr / 10;
        worst_pc = std::min(worst_pc, out.eval.pc);
        worst_rr = std::min(worst_rr, out.eval.rr);
      } catch (const std::exception& e) {
        error = e.what();
      }
    }
  });
  report(5, error.empty() && pc >= 0.9 && rr >= 0.9,
         error.empty() ? fmt("mean PC %.4f, mean RR %.4f over 10 seeds (lowest PC %.4f)", pc, rr, worst_pc)
                       : "pipeline error: " + error,
         secs, 120);
}

// -- 6 ----------------------------------------------------------------------

void negative_accuracy() {
  std::size_t total = 0, wrong = 0;
  double worst = 1.0;
  double secs = timed([&] {
    for (std::size_t d = 50; d <= 1000; d += 50) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GenSpec spec;
        spec.n_left = d + 200;
        spec.n_right = d + 200;
        spec.n_dups = d;
        spec.seed = 1000 * d + seed;
        auto g = generate(spec);
        auto ranked = generate_duplicates(g.left.table, g.right.table, static_cast<int>(d));
        auto negatives = permute_negatives(to_id_pairs(ranked), seed);
        std::size_t bad = 0;
        for (const auto& p : negatives) bad += g.truth.contains(p);
        total += negatives.size();
        wrong += bad;
        worst = std::min(worst, 1.0 - static_cast<double>(bad) / static_cast<double>(negatives.size()));
      }
    }
  });
  double accuracy = 1.0 - static_cast<double>(wrong) / static_cast<double>(total);
  report(6, worst >= 0.99, fmt("non-duplicate accuracy %.5f overall, lowest run %.5f over %.0f negatives", accuracy,
                               worst, static_cast<double>(total)),
         secs, 60);
}

// -- 7 ----------------------------------------------------------------------

std::string gamma_csv(const CandidateSet& gamma) {
  auto path = std::filesystem::temp_directory_path() / "erblock_acceptance_gamma.csv";
  save_candidate_set(gamma, path);
  auto text = read_text_file(path);
  std::filesystem::remove(path);
  return text;
}

void determinism() {
  std::set<std::string> schemes, gammas;
  double secs = timed([&] {
    for (int run = 0; run < 5; ++run) {
      GenSpec spec;
      spec.seed = 77;
      auto out = unsupervised_pipeline(generate(spec), 77);
      schemes.insert(scheme_to_json(out.scheme));
      gammas.insert(gamma_csv(out.gamma));
    }
  });
  report(7, schemes.size() == 1 && gammas.size() == 1,
         fmt("%.0f distinct scheme files and %.0f distinct candidate files over 5 runs", schemes.size(),
             gammas.size()),
         secs, 0);
}

// -- 8 ----------------------------------------------------------------------

// Minimum time of each workload over rounds that alternate between the two,
// so that a slow stretch of the machine affects both sizes alike.
std::pair<double, double> interleaved_best(int rounds, const std::function<void()>& small,
                                           const std::function<void()>& large) {
  double a = 1e300, b = 1e300;
  for (int i = 0; i < rounds; ++i) {
    a = std::min(a, timed(small));
    b = std::min(b, timed(large));
  }
  return {a, b};
}

void linear_scaling() {
  double learn_ratio = 0.0, block_ratio = 0.0;
  double secs = timed([&] {
    GenSpec spec;
    spec.n_left = 1200;
    spec.n_right = 1200;
    spec.n_dups = 1000;
    spec.seed = 8;
    auto g = generate(spec);
    std::vector<IdPair> all(g.truth.pairs.begin(), g.truth.pairs.end());
    Rng rng(8);
    rng.shuffle(all);
    std::vector<IdPair> d500(all.begin(), all.begin() + 500), d1000(all.begin(), all.begin() + 1000);
    auto learn = [&](const std::vector<IdPair>& d) {
      return [&] { learn_scheme(d, g.q_truth, LearnerConfig{}, g.left.table, g.right.table, 8); };
    };
    auto [l500, l1000] = interleaved_best(5, learn(d500), learn(d1000));
    learn_ratio = l1000 / l500;

    BlockingScheme scheme;
    scheme.terms = {Term({{IndexingFunction::Tokens, "name", "full_name"}}),
                    Term({{IndexingFunction::ExactValue, "zip", "postcode"}})};
    auto records = [](std::size_t n) {
      GenSpec big;
      big.n_left = n / 2;
      big.n_right = n / 2;
      big.n_dups = n / 10;
      big.seed = 9;
      return generate(big);
    };
    auto small = records(10000), large = records(20000);
    auto block = [&](const Generated& data) {
      return [&] { build_blocks(scheme, data.left.table, data.right.table); };
    };
    auto [b10k, b20k] = interleaved_best(5, block(small), block(large));
    block_ratio = b20k / b10k;
  });
  report(8, learn_ratio <= 2.5 && block_ratio <= 2.5,
         fmt("learner time ratio %.2f for |D| 500->1000, build_blocks ratio %.2f for 10k->20k records",
             learn_ratio, block_ratio),
         secs, 0);
}

// -- 9 ----------------------------------------------------------------------

void supplementation() {
  Rng rng(909);
  std::size_t bad = 0, terms = 0, missing = 0;
  double secs = timed([&] {
    for (int inst = 0; inst < 100; ++inst) {
      auto l = testing::random_dataset(rng, 15 + rng.below(15), 2, "a");
      auto r = testing::random_dataset(rng, 15 + rng.below(15), 2, "b");
      PairRows dups, negs;
      for (int p = 0; p < 12; ++p) {
        dups.left.push_back(static_cast<std::uint32_t>(rng.below(l.size())));
        dups.right.push_back(static_cast<std::uint32_t>(rng.below(r.size())));
        negs.left.push_back(static_cast<std::uint32_t>(rng.below(l.size())));
        negs.right.push_back(static_cast<std::uint32_t>(rng.below(r.size())));
      }
      auto q = exhaustive_mappings(l.schema, r.schema);
      auto index = build_search_space(catalogue(), q, 2, dups, negs, l, r, 1000000);
      // Coverage of each atom by direct predicate evaluation.
      auto atoms = candidate_atoms(catalogue(), q);
      std::vector<std::set<std::uint32_t>> atom_dup(atoms.size());
      std::set<std::pair<std::size_t, std::size_t>> expected;
      for (std::uint32_t p = 0; p < dups.size(); ++p) {
        RecordRef x{l.schema, l.records[dups.left[p]]}, y{r.schema, r.records[dups.right[p]]};
        std::vector<std::size_t> hit;
        for (std::size_t a = 0; a < atoms.size(); ++a) {
          if (simple_sbp_eval(atoms[a], x, y)) {
            atom_dup[a].insert(p);
            hit.push_back(a);
          }
        }
        for (std::size_t i = 0; i < hit.size(); ++i) {
          for (std::size_t j = i + 1; j < hit.size(); ++j) expected.insert({hit[i], hit[j]});
        }
      }
      std::size_t found = 0;
      for (std::size_t key = 0; key < index.keys.size(); ++key) {
        const auto& term = index.keys[key];
        if (term.size() != 2) continue;
        ++terms;
        ++found;
        auto a = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), term.atoms[0]) - atoms.begin());
        auto b = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), term.atoms[1]) - atoms.begin());
        std::vector<std::uint32_t> inter;
        std::set_intersection(atom_dup[a].begin(), atom_dup[a].end(), atom_dup[b].begin(), atom_dup[b].end(),
                              std::back_inserter(inter));
        if (inter != index.dup_cover[key]) ++bad;
        if (!expected.count({std::min(a, b), std::max(a, b)})) ++bad;
      }
      if (found != expected.size()) ++missing;
    }
  });
  report(9, bad == 0 && missing == 0 && terms > 0,
         fmt("%.0f conjunctions checked, %.0f coverage mismatches, %.0f instances with missing terms", terms, bad,
             missing),
         secs, 0);
}

// -- 10 ---------------------------------------------------------------------

std::string implication_value(Rng& rng) {
  std::string v = testing::random_value(rng);
  if (rng.chance(0.5)) v += " " + std::to_string(static_cast<long>(rng.below(40)) - 5);
  if (rng.chance(0.3)) v += " " + std::string(1, static_cast<char>('a' + rng.below(3))) + "bcdefg"[rng.below(6)];
  return v;
}

void implications() {
  Rng rng(1010);
  std::size_t violations = 0, int_hits = 0, prefix_hits = 0;
  double secs = timed([&] {
    for (int i = 0; i < 10000; ++i) {
      auto a = implication_value(rng), b = implication_value(rng);
      bool it = gbp_eval(IndexingFunction::IntegerTokens, a, b);
      bool p7 = gbp_eval(IndexingFunction::TokenPrefix7, a, b);
      bool p5 = gbp_eval(IndexingFunction::TokenPrefix5, a, b);
      bool p3 = gbp_eval(IndexingFunction::TokenPrefix3, a, b);
      int_hits += it;
      prefix_hits += p7;
      if (it && !gbp_eval(IndexingFunction::IntegerTokensOffByOne, a, b)) ++violations;
      if (p7 && !p5) ++violations;
      if (p5 && !p3) ++violations;
    }
  });
  report(10, violations == 0,
         fmt("%.0f violations over 10000 pairs (%.0f IntegerTokens hits, %.0f TokenPrefix7 hits)", violations,
             int_hits, prefix_hits),
         secs, 0);
}

// -- 11 ---------------------------------------------------------------------

void pq_identity() {
  Rng rng(1111);
  std::size_t bad = 0, checked = 0;
  double worst = 0.0;
  double secs = timed([&] {
    while (checked < 1000) {
      std::size_t n1 = 1 + rng.below(100), n2 = 1 + rng.below(100);
      auto id = [&](std::size_t n) { return std::to_string(rng.below(n)); };
      GroundTruth truth;
      std::size_t t = 1 + rng.below(std::min<std::size_t>(n1 * n2, 200));
      for (std::size_t i = 0; i < t; ++i) truth.pairs.insert({id(n1), id(n2)});
      std::set<IdPair> g;
      std::size_t target = rng.below(n1 * n2);
      for (std::size_t i = 0; i < target; ++i) g.insert({id(n1), id(n2)});
      auto rep = evaluate(CandidateSet(g.begin(), g.end()), truth, n1, n2);
      if (!(rep.rr < 1.0)) continue;
      ++checked;
      double c = static_cast<double>(truth.size()) / static_cast<double>(n1 * n2);
      double residual = std::abs(rep.pq - c * rep.pc / (1.0 - rep.rr));
      worst = std::max(worst, residual);
      if (!(residual < 1e-12)) ++bad;
    }
  });
  report(11, bad == 0, fmt("%.0f/1000 instances over 1e-12, max residual %.2e", bad, worst), secs, 0);
}

}  // namespace

int main() {
  round_trip();
  coverage_equivalence();
  chvatal_bound();
  hungarian_optimality();
  pipeline_magnitude();
  negative_accuracy();
  determinism();
  linear_scaling();
  supplementation();
  implications();
  pq_identity();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
