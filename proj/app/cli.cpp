#include "erblock/cli.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "erblock/blocking.hpp"
#include "erblock/error.hpp"
#include "erblock/learner.hpp"
#include "erblock/matcher.hpp"
#include "erblock/rdf.hpp"
#include "erblock/synthetic.hpp"

namespace erblock::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Settings {
  std::uint64_t seed = 0;
  std::string out = ".";
  int threads = 0;

  std::string left;
  std::string right;
  std::string left_format;
  std::string right_format;

  MatcherConfig matcher;
  LearnerConfig learner;
  bool exhaustive = false;
  std::string mapping;
  std::string truth;
  std::string truth_mapping;
  std::string duplicates;
  std::string scheme;
  std::string gamma;
  std::size_t max_block_pairs = 0;
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  std::string input;
  std::string output;
  std::string direction;

  std::size_t n_left = 300;
  std::size_t n_right = 300;
  std::size_t n_dups = 100;
  std::string left_style = "tabular";
  std::string right_style = "tabular";
  double noise = 0.1;
  bool field_split = false;
};

// Options are declared once and resolved in two layers: a value from the JSON
// config file, then the command-line value when the flag was given.
class OptionTable {
 public:
  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& flag, const std::string& key, T& target, const std::string& help) {
    auto value = std::make_shared<T>(target);
    CLI::Option* opt = app->add_option(flag, *value, help);
    appliers_.push_back([opt, value, key, &target](const nlohmann::json& config) {
      if (config.contains(key)) target = config.at(key).get<T>();
      if (opt->count() > 0) target = *value;
    });
    return opt;
  }

  void flag(CLI::App* app, const std::string& flag, const std::string& key, bool& target, const std::string& help) {
    CLI::Option* opt = app->add_flag(flag, help);
    appliers_.push_back([opt, key, &target](const nlohmann::json& config) {
      if (config.contains(key)) target = config.at(key).get<bool>();
      if (opt->count() > 0) target = true;
    });
  }

  void apply(const nlohmann::json& config) const {
    for (const auto& a : appliers_) a(config);
  }

 private:
  std::vector<std::function<void(const nlohmann::json&)>> appliers_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format_real(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

bool is_ntriples(const std::string& path, const std::string& format) {
  if (!format.empty()) {
    if (format == "ntriples" || format == "nt") return true;
    if (format == "csv") return false;
    throw ArgumentError("unknown input format '" + format + "' (expected csv or ntriples)");
  }
  auto ext = fs::path(path).extension().string();
  return ext == ".nt" || ext == ".ntriples";
}

Dataset load_table_csv(const std::string& path, const std::string& name) {
  auto text = read_text_file(path);
  CsvOptions options;
  options.dataset_name = name;
  auto rows = parse_csv(text);
  if (!rows.empty() && !rows.front().empty() && rows.front().front() == rdf::kSubjectField) {
    options.id_column = std::string(rdf::kSubjectField);
  }
  return read_dataset_csv(text, options);
}

Dataset load_side(const std::string& path, const std::string& format, const std::string& name) {
  if (path.empty()) throw ArgumentError("missing --" + name + " input path");
  if (is_ntriples(path, format)) return rdf::triples_to_property_table(rdf::load_ntriples(path), name);
  return load_table_csv(path, name);
}

void require_non_empty(const Dataset& d) {
  if (d.empty()) throw ValidationError("dataset '" + d.schema.dataset_name + "' has no records");
  auto problems = validate(d);
  if (!problems.empty()) throw ValidationError(problems.front());
}

void save_duplicates(const std::vector<DuplicateCandidate>& ranked, const fs::path& path) {
  std::string out = format_csv_row({"left_id", "right_id", "cosine"}) + "\n";
  for (const auto& c : ranked) out += format_csv_row({c.left_id, c.right_id, format_real(c.cosine)}) + "\n";
  write_text_file(path, out);
}

std::vector<DuplicateCandidate> load_duplicates(const fs::path& path) {
  auto rows = parse_csv(read_text_file(path));
  if (rows.empty()) throw ParseError(path.string() + ": missing header");
  std::vector<DuplicateCandidate> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() < 2) throw ParseError(path.string() + ": row " + std::to_string(i) + " needs two ids");
    DuplicateCandidate c{rows[i][0], rows[i][1], 0.0};
    if (rows[i].size() > 2) {
      try {
        c.cosine = std::stod(rows[i][2]);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": row " + std::to_string(i) + " has a malformed cosine");
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

void save_pairs(const std::vector<IdPair>& pairs, const fs::path& path) {
  std::string out = format_csv_row({"left_id", "right_id"}) + "\n";
  for (const auto& [a, b] : pairs) out += format_csv_row({a, b}) + "\n";
  write_text_file(path, out);
}

Json mappings_json(const MappingSet& q) { return Json::parse(mapping_set_to_json(q)); }

fs::path out_dir(const Settings& s) {
  fs::path dir(s.out);
  fs::create_directories(dir);
  return dir;
}

// -- commands ---------------------------------------------------------------

int cmd_convert(const Settings& s, std::ostream& out) {
  if (s.input.empty()) throw ArgumentError("convert needs --input");
  std::string direction = s.direction;
  if (direction.empty()) direction = is_ntriples(s.input, "") ? "nt2csv" : "csv2nt";
  fs::path target = s.output;
  if (direction == "nt2csv") {
    if (target.empty()) target = out_dir(s) / (fs::path(s.input).stem().string() + ".csv");
    auto table = rdf::triples_to_property_table(rdf::load_ntriples(s.input), fs::path(s.input).stem().string());
    save_csv(table, target);
    out << "wrote " << target.string() << " (" << table.size() << " records)\n";
  } else if (direction == "csv2nt") {
    if (target.empty()) target = out_dir(s) / (fs::path(s.input).stem().string() + ".nt");
    auto table = load_table_csv(s.input, fs::path(s.input).stem().string());
    auto problems = validate(table);
    if (!problems.empty()) throw ValidationError(problems.front());
    auto triples = rdf::property_table_to_triples(table);
    rdf::serialize_ntriples(triples, target);
    out << "wrote " << target.string() << " (" << triples.size() << " triples)\n";
  } else {
    throw ArgumentError("unknown direction '" + direction + "' (expected nt2csv or csv2nt)");
  }
  return kOk;
}

struct MatchOutput {
  std::vector<DuplicateCandidate> ranked;
  MappingSet mappings;
  std::string source;
};

MatchOutput match_stage(const Settings& s, const Dataset& left, const Dataset& right, const fs::path& dir,
                        std::ostream& out) {
  MatchOutput m;
  Json report;
  report["t"] = s.matcher.t;
  report["theta"] = s.matcher.theta;
  report["n"] = s.matcher.n;
  report["seed"] = s.seed;
  if (!s.mapping.empty() && s.exhaustive) throw ArgumentError("choose one of --mapping and --exhaustive");

  if (!s.mapping.empty()) {
    m.source = "user";
    m.mappings = load_mapping_set(s.mapping);
    m.ranked = generate_duplicates(left, right, std::max(s.matcher.t, s.matcher.n));
  } else if (s.exhaustive) {
    m.source = "exhaustive";
    m.mappings = exhaustive_mappings(left.schema, right.schema);
    m.ranked = generate_duplicates(left, right, std::max(s.matcher.t, s.matcher.n));
  } else {
    m.source = "matcher";
    auto result = run_matcher(left, right, s.matcher);
    m.ranked = std::move(result.ranked);
    m.mappings = std::move(result.mappings);
    Json matrix;
    matrix["rows"] = result.matrix.rows;
    matrix["cols"] = result.matrix.cols;
    matrix["entries"] = result.matrix.entries;
    report["similarity_matrix"] = matrix;
  }
  report["mapping_source"] = m.source;
  report["duplicates"] = m.ranked.size();
  report["mappings"] = mappings_json(m.mappings);

  if (!s.truth_mapping.empty()) {
    auto pr = mapping_precision_recall(m.mappings, load_mapping_set(s.truth_mapping));
    report["mapping_precision"] = pr.precision;
    report["mapping_recall"] = pr.recall;
  }
  if (!s.truth.empty() && !m.ranked.empty()) {
    auto truth = load_ground_truth(s.truth);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(s.matcher.n), m.ranked.size());
    auto pr = precision_recall_at_k(m.ranked, truth, k);
    report["k"] = k;
    report["precision_at_k"] = pr.precision;
    report["recall_at_k"] = pr.recall;
  }

  save_mapping_set(m.mappings, dir / "mapping.json");
  save_duplicates(m.ranked, dir / "duplicates.csv");
  write_text_file(dir / "match_report.json", report.dump(2) + "\n");
  out << "match: " << m.mappings.size() << " mappings (" << m.source << "), " << m.ranked.size()
      << " ranked duplicates\n";
  return m;
}

int cmd_match(const Settings& s, std::ostream& out) {
  auto left = load_side(s.left, s.left_format, "left");
  auto right = load_side(s.right, s.right_format, "right");
  require_non_empty(left);
  require_non_empty(right);
  match_stage(s, left, right, out_dir(s), out);
  return kOk;
}

BlockingScheme learn_stage(const Settings& s, const std::vector<DuplicateCandidate>& ranked, const MappingSet& q,
                           const Dataset& left, const Dataset& right, const fs::path& dir, std::ostream& out) {
  std::vector<DuplicateCandidate> top(ranked.begin(),
                                      ranked.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                                                           static_cast<std::size_t>(s.matcher.n), ranked.size())));
  auto result = learn_scheme(to_id_pairs(top), q, s.learner, left, right, s.seed);
  write_text_file(dir / "scheme.json", scheme_to_json(result.scheme));
  write_text_file(dir / "learn_report.json", learn_report_to_json(result.report, s.learner));
  save_pairs(result.negatives, dir / "negatives.csv");
  out << "learn: " << result.scheme.terms.size() << " terms from " << result.report.survivors << " survivors\n";
  return result.scheme;
}

int cmd_learn(const Settings& s, std::ostream& out) {
  if (s.duplicates.empty() || s.mapping.empty()) throw ArgumentError("learn needs --duplicates and --mapping");
  auto left = load_side(s.left, s.left_format, "left");
  auto right = load_side(s.right, s.right_format, "right");
  learn_stage(s, load_duplicates(s.duplicates), load_mapping_set(s.mapping), left, right, out_dir(s), out);
  return kOk;
}

CandidateSet block_stage(const Settings& s, const BlockingScheme& scheme, const Dataset& left, const Dataset& right,
                         const fs::path& dir, std::ostream& out) {
  auto index = build_blocks(scheme, left, right);
  auto gamma = candidate_set(index, s.max_block_pairs);
  save_candidate_set(gamma, dir / "gamma.csv");
  Json stats;
  stats["terms"] = scheme.terms.size();
  stats["block_count"] = index.block_count();
  stats["max_block_size"] = index.max_block_size();
  stats["candidate_pairs"] = gamma.size();
  stats["max_block_pairs"] = s.max_block_pairs;
  write_text_file(dir / "block_stats.json", stats.dump(2) + "\n");
  out << "block: " << index.block_count() << " blocks, " << gamma.size() << " candidate pairs\n";
  return gamma;
}

int cmd_block(const Settings& s, std::ostream& out) {
  if (s.scheme.empty()) throw ArgumentError("block needs --scheme");
  auto scheme = scheme_from_json(read_text_file(s.scheme));
  check_scheme(scheme);
  auto left = load_side(s.left, s.left_format, "left");
  auto right = load_side(s.right, s.right_format, "right");
  block_stage(s, scheme, left, right, out_dir(s), out);
  return kOk;
}

EvalReport evaluate_stage(const CandidateSet& gamma, const GroundTruth& truth, std::size_t n1, std::size_t n2,
                          const fs::path& dir, std::ostream& out) {
  auto report = evaluate(gamma, truth, n1, n2);
  write_text_file(dir / "eval_report.json", eval_report_to_json(report));
  out << "evaluate: RR " << report.rr << " PC " << report.pc << " PQ " << report.pq << " F " << report.fscore
      << "\n";
  return report;
}

int cmd_evaluate(const Settings& s, std::ostream& out) {
  if (s.gamma.empty() || s.truth.empty()) throw ArgumentError("evaluate needs --gamma and --truth");
  std::size_t n1 = s.left_size, n2 = s.right_size;
  if (n1 == 0 && !s.left.empty()) n1 = load_side(s.left, s.left_format, "left").size();
  if (n2 == 0 && !s.right.empty()) n2 = load_side(s.right, s.right_format, "right").size();
  if (n1 == 0 || n2 == 0) throw ArgumentError("evaluate needs dataset sizes (--left-size/--right-size or inputs)");
  evaluate_stage(load_candidate_set(s.gamma), load_ground_truth(s.truth), n1, n2, out_dir(s), out);
  return kOk;
}

int cmd_pipeline(const Settings& s, std::ostream& out) {
  const auto dir = out_dir(s);
  Json report;
  Json stages = Json::array();
  std::string timings = "stage,seconds\n";
  auto timed = [&](const std::string& stage, const auto& body) {
    auto start = std::chrono::steady_clock::now();
    body();
    double t = seconds_since(start);
    stages.push_back({{"stage", stage}, {"seconds", t}});
    timings += stage + "," + format_real(t) + "\n";
  };

  Dataset left, right;
  timed("load", [&] {
    left = load_side(s.left, s.left_format, "left");
    right = load_side(s.right, s.right_format, "right");
    require_non_empty(left);
    require_non_empty(right);
    // Property tables of RDF inputs are kept alongside the other artifacts.
    if (is_ntriples(s.left, s.left_format)) save_csv(left, dir / "left_table.csv");
    if (is_ntriples(s.right, s.right_format)) save_csv(right, dir / "right_table.csv");
  });
  MatchOutput m;
  timed("match", [&] { m = match_stage(s, left, right, dir, out); });
  BlockingScheme scheme;
  timed("learn", [&] { scheme = learn_stage(s, m.ranked, m.mappings, left, right, dir, out); });
  CandidateSet gamma;
  timed("block", [&] { gamma = block_stage(s, scheme, left, right, dir, out); });
  if (!s.truth.empty()) {
    timed("evaluate", [&] {
      auto truth = load_ground_truth(s.truth);
      check_ground_truth(truth, left, right);
      auto r = evaluate_stage(gamma, truth, left.size(), right.size(), dir, out);
      report["evaluation"] = Json::parse(eval_report_to_json(r));
    });
  }

  report["left"] = {{"path", s.left}, {"records", left.size()}, {"fields", left.schema.fields}};
  report["right"] = {{"path", s.right}, {"records", right.size()}, {"fields", right.schema.fields}};
  report["seed"] = s.seed;
  report["mapping_source"] = m.source;
  report["scheme"] = Json::parse(scheme_to_json(scheme));
  report["candidate_pairs"] = gamma.size();
  report["stages"] = stages;
  write_text_file(dir / "pipeline_report.json", report.dump(2) + "\n");
  write_text_file(dir / "timings.csv", timings);
  return kOk;
}

int cmd_generate(const Settings& s, std::ostream& out) {
  GenSpec spec;
  spec.n_left = s.n_left;
  spec.n_right = s.n_right;
  spec.n_dups = s.n_dups;
  spec.left_style = parse_style(s.left_style);
  spec.right_style = parse_style(s.right_style);
  spec.noise = s.noise;
  spec.field_split = s.field_split;
  spec.seed = s.seed;
  auto g = generate(spec);
  const auto dir = out_dir(s);
  auto emit = [&](const GeneratedSide& side, const std::string& name) {
    if (side.triples) {
      rdf::serialize_ntriples(*side.triples, dir / (name + ".nt"));
    } else {
      save_csv(side.table, dir / (name + ".csv"));
    }
  };
  emit(g.left, "left");
  emit(g.right, "right");
  save_ground_truth(g.truth, dir / "truth.csv");
  save_mapping_set(g.q_truth, dir / "truth_mapping.json");
  out << "generate: " << g.left.table.size() << " x " << g.right.table.size() << " records, " << g.truth.size()
      << " duplicates\n";
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParse;
    case ErrorKind::Validation:
    case ErrorKind::Lookup:
    case ErrorKind::Argument: return kValidation;
    case ErrorKind::LearnerFailure: return kLearnerFailure;
    case ErrorKind::Capacity: return kCapacity;
    case ErrorKind::Io: return kFailure;
  }
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  OptionTable table;
  CLI::App app{"Unsupervised DNF blocking-scheme learning for heterogeneous dataset pairs", "erblock"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags given on the command line take precedence");
  table.option(&app, "--seed", "seed", s.seed, "Random seed");
  table.option(&app, "--out", "out", s.out, "Output directory");
  table.option(&app, "--threads", "threads", s.threads, "Worker threads (0 = runtime default)");

  auto inputs = [&](CLI::App* sub) {
    table.option(sub, "--left", "left", s.left, "Left dataset (.csv or .nt)");
    table.option(sub, "--right", "right", s.right, "Right dataset (.csv or .nt)");
    table.option(sub, "--left-format", "left_format", s.left_format, "csv or ntriples (default: by extension)");
    table.option(sub, "--right-format", "right_format", s.right_format, "csv or ntriples (default: by extension)");
  };
  auto matcher_opts = [&](CLI::App* sub) {
    table.option(sub, "--t", "t", s.matcher.t, "Duplicates used for the similarity matrix");
    table.option(sub, "--theta", "theta", s.matcher.theta, "Soft-TFIDF token threshold");
    table.option(sub, "--n", "n", s.matcher.n, "Duplicates passed to the learner");
    table.option(sub, "--mapping", "mapping", s.mapping, "User mapping JSON (skips the matcher)");
    table.flag(sub, "--exhaustive", "exhaustive", s.exhaustive, "Use all 1:1 mappings instead of the matcher");
    table.option(sub, "--truth-mapping", "truth_mapping", s.truth_mapping, "Reference mapping JSON");
  };
  auto learner_opts = [&](CLI::App* sub) {
    table.option(sub, "--kappa", "kappa", s.learner.kappa, "Score threshold in [-1,1]");
    table.option(sub, "--k", "k", s.learner.k, "Maximum atoms per term");
    table.option(sub, "--term-cap", "term_cap", s.learner.term_cap, "Maximum search-space size");
  };

  auto* convert = app.add_subcommand("convert", "Convert between N-Triples and property-table CSV");
  table.option(convert, "--input", "input", s.input, "Input file")->required();
  table.option(convert, "--output", "output", s.output, "Output file (default: <out>/<stem>.<ext>)");
  table.option(convert, "--direction", "direction", s.direction, "nt2csv or csv2nt (default: by extension)");

  auto* match = app.add_subcommand("match", "Generate duplicates and a 1:1 mapping set");
  inputs(match);
  matcher_opts(match);
  table.option(match, "--truth", "truth", s.truth, "Ground-truth CSV for precision/recall at k");

  auto* learn = app.add_subcommand("learn", "Learn a blocking scheme");
  inputs(learn);
  table.option(learn, "--duplicates", "duplicates", s.duplicates, "Ranked duplicates CSV");
  table.option(learn, "--mapping", "mapping", s.mapping, "Mapping JSON");
  table.option(learn, "--n", "n", s.matcher.n, "Number of top duplicates to use");
  learner_opts(learn);

  auto* block = app.add_subcommand("block", "Apply a blocking scheme");
  inputs(block);
  table.option(block, "--scheme", "scheme", s.scheme, "Scheme JSON");
  table.option(block, "--max-block-pairs", "max_block_pairs", s.max_block_pairs, "Skip larger blocks (0 = off)");

  auto* eval = app.add_subcommand("evaluate", "Score a candidate set against ground truth");
  inputs(eval);
  table.option(eval, "--gamma", "gamma", s.gamma, "Candidate set CSV");
  table.option(eval, "--truth", "truth", s.truth, "Ground-truth CSV");
  table.option(eval, "--left-size", "left_size", s.left_size, "Left record count");
  table.option(eval, "--right-size", "right_size", s.right_size, "Right record count");

  auto* pipeline = app.add_subcommand("pipeline", "Match, learn, block and evaluate in one run");
  inputs(pipeline);
  matcher_opts(pipeline);
  learner_opts(pipeline);
  table.option(pipeline, "--truth", "truth", s.truth, "Ground-truth CSV");
  table.option(pipeline, "--max-block-pairs", "max_block_pairs", s.max_block_pairs, "Skip larger blocks (0 = off)");

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset pair with ground truth");
  table.option(gen, "--n-left", "n_left", s.n_left, "Left record count");
  table.option(gen, "--n-right", "n_right", s.n_right, "Right record count");
  table.option(gen, "--n-dups", "n_dups", s.n_dups, "Planted duplicates");
  table.option(gen, "--left-style", "left_style", s.left_style, "tabular or rdf");
  table.option(gen, "--right-style", "right_style", s.right_style, "tabular or rdf");
  table.option(gen, "--noise", "noise", s.noise, "Per-field perturbation probability");
  table.flag(gen, "--field-split", "field_split", s.field_split, "Split the right name into two fields");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    nlohmann::json config = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        config = nlohmann::json::parse(read_text_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(config_path + ": " + e.what());
      }
      if (!config.is_object()) throw ParseError(config_path + ": config must be a JSON object");
    }
    try {
      table.apply(config);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(config_path + ": " + e.what());
    }
    s.matcher.seed = s.seed;
    if (s.threads > 0) omp_set_num_threads(s.threads);

    if (convert->parsed()) return cmd_convert(s, out);
    if (match->parsed()) return cmd_match(s, out);
    if (learn->parsed()) return cmd_learn(s, out);
    if (block->parsed()) return cmd_block(s, out);
    if (eval->parsed()) return cmd_evaluate(s, out);
    if (pipeline->parsed()) return cmd_pipeline(s, out);
    if (gen->parsed()) return cmd_generate(s, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace erblock::cli
