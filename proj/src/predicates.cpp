#include "erblock/predicates.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <json.hpp>

#include "erblock/error.hpp"
#include "erblock/phonetic.hpp"
#include "erblock/text.hpp"

namespace erblock {

namespace {

constexpr std::array<IndexingFunction, kCatalogueSize> kCatalogue = {
    IndexingFunction::ExactValue,      IndexingFunction::Tokens,          IndexingFunction::IntegerTokens,
    IndexingFunction::IntegerTokensOffByOne, IndexingFunction::TokenPrefix3, IndexingFunction::TokenPrefix5,
    IndexingFunction::TokenPrefix7,    IndexingFunction::TokenNGrams2,    IndexingFunction::TokenNGrams4,
    IndexingFunction::TokenNGrams6,    IndexingFunction::Soundex,         IndexingFunction::RefinedSoundex,
    IndexingFunction::Metaphone,       IndexingFunction::DoubleMetaphone, IndexingFunction::Nysiis,
    IndexingFunction::Caverphone1,     IndexingFunction::Caverphone2,     IndexingFunction::ColognePhonetic,
    IndexingFunction::MatchRating,
};

constexpr std::array<std::string_view, kCatalogueSize> kNames = {
    "ExactValue",   "Tokens",         "IntegerTokens", "IntegerTokensOffByOne", "TokenPrefix3",
    "TokenPrefix5", "TokenPrefix7",   "TokenNGrams2",  "TokenNGrams4",          "TokenNGrams6",
    "Soundex",      "RefinedSoundex", "Metaphone",     "DoubleMetaphone",       "NYSIIS",
    "Caverphone1",  "Caverphone2",    "ColognePhonetic", "MatchRating",
};

bool is_token_delimiter(char c) { return text::is_space(c) || c == ',' || c == ';' || c == '/'; }

// Canonical decimal integer: optional '-', no leading zeros, "0" for zero.
std::optional<std::string> canonical_integer(std::string_view token) {
  bool negative = false;
  if (!token.empty() && (token.front() == '-' || token.front() == '+')) {
    negative = token.front() == '-';
    token.remove_prefix(1);
  }
  if (token.empty() || !std::all_of(token.begin(), token.end(), text::is_digit)) return std::nullopt;
  auto nz = token.find_first_not_of('0');
  if (nz == std::string_view::npos) return std::string("0");
  std::string out = negative ? "-" : "";
  out += token.substr(nz);
  return out;
}

// Magnitude arithmetic on canonical non-negative decimal strings.
std::string increment(std::string mag) {
  for (std::size_t i = mag.size(); i-- > 0;) {
    if (mag[i] != '9') {
      ++mag[i];
      return mag;
    }
    mag[i] = '0';
  }
  return "1" + mag;
}

std::string decrement(std::string mag) {  // mag > 0
  for (std::size_t i = mag.size(); i-- > 0;) {
    if (mag[i] != '0') {
      --mag[i];
      break;
    }
    mag[i] = '9';
  }
  auto nz = mag.find_first_not_of('0');
  return nz == std::string::npos ? std::string("0") : mag.substr(nz);
}

std::string plus_one(const std::string& n) {
  if (n.front() != '-') return increment(n);
  std::string mag = n.substr(1);
  if (mag == "1") return "0";
  return "-" + decrement(mag);
}

std::string minus_one(const std::string& n) {
  if (n == "0") return "-1";
  if (n.front() == '-') return "-" + increment(n.substr(1));
  return decrement(n);
}

// First `n` code points of a UTF-8 token.
std::string utf8_prefix(const std::string& token, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < token.size()) {
    if (count == n) break;
    unsigned char c = static_cast<unsigned char>(token[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    i += len;
    ++count;
  }
  return token.substr(0, std::min(i, token.size()));
}

std::string (*phonetic_encoder(IndexingFunction fn))(std::string_view) {
  switch (fn) {
    case IndexingFunction::Soundex: return phonetic::soundex;
    case IndexingFunction::RefinedSoundex: return phonetic::refined_soundex;
    case IndexingFunction::Metaphone: return phonetic::metaphone;
    case IndexingFunction::DoubleMetaphone: return phonetic::double_metaphone;
    case IndexingFunction::Nysiis: return phonetic::nysiis;
    case IndexingFunction::Caverphone1: return phonetic::caverphone1;
    case IndexingFunction::Caverphone2: return phonetic::caverphone2;
    case IndexingFunction::ColognePhonetic: return phonetic::cologne_phonetic;
    case IndexingFunction::MatchRating: return phonetic::match_rating;
    default: return nullptr;
  }
}

}  // namespace

std::span<const IndexingFunction> catalogue() { return kCatalogue; }

std::string_view to_string(IndexingFunction fn) {
  auto i = static_cast<std::size_t>(fn);
  if (i >= kNames.size()) throw LookupError("indexing function id out of range");
  return kNames[i];
}

IndexingFunction parse_indexing_function(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kCatalogue[i];
  }
  throw LookupError("unknown indexing function '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view value) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() && is_token_delimiter(value[i])) ++i;
    std::size_t start = i;
    while (i < value.size() && !is_token_delimiter(value[i])) ++i;
    if (i > start) tokens.push_back(text::to_lower(value.substr(start, i - start)));
  }
  return tokens;
}

std::vector<std::string> index(IndexingFunction fn, std::string_view value) {
  std::vector<std::string> keys;
  auto prefixes = [&](std::size_t n) {
    for (const auto& t : tokenize(value)) keys.push_back(utf8_prefix(t, n));
  };
  auto ngrams = [&](std::size_t n) {
    auto tokens = tokenize(value);
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      keys.push_back(text::join(std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n), " "));
    }
  };

  switch (fn) {
    case IndexingFunction::ExactValue: {
      auto v = text::trim(value);
      if (!v.empty()) keys.push_back(text::to_lower(v));
      break;
    }
    case IndexingFunction::Tokens:
      keys = tokenize(value);
      break;
    case IndexingFunction::IntegerTokens:
      for (const auto& t : tokenize(value)) {
        if (auto n = canonical_integer(t)) keys.push_back(*n);
      }
      break;
    case IndexingFunction::IntegerTokensOffByOne:
      for (const auto& t : tokenize(value)) {
        if (auto n = canonical_integer(t)) {
          keys.push_back(minus_one(*n));
          keys.push_back(*n);
          keys.push_back(plus_one(*n));
        }
      }
      break;
    case IndexingFunction::TokenPrefix3: prefixes(3); break;
    case IndexingFunction::TokenPrefix5: prefixes(5); break;
    case IndexingFunction::TokenPrefix7: prefixes(7); break;
    case IndexingFunction::TokenNGrams2: ngrams(2); break;
    case IndexingFunction::TokenNGrams4: ngrams(4); break;
    case IndexingFunction::TokenNGrams6: ngrams(6); break;
    default: {
      auto encode = phonetic_encoder(fn);
      if (!encode) throw LookupError("indexing function id out of range");
      for (const auto& t : tokenize(value)) {
        if (std::none_of(t.begin(), t.end(), text::is_alpha)) continue;
        auto code = encode(t);
        if (!code.empty()) keys.push_back(std::move(code));
      }
    }
  }
  text::sort_unique(keys);
  return keys;
}

std::vector<std::string> index_members(IndexingFunction fn, const std::vector<std::string>& members) {
  if (members.size() == 1) return index(fn, members.front());
  std::vector<std::string> keys;
  for (const auto& m : members) {
    auto k = index(fn, m);
    keys.insert(keys.end(), std::make_move_iterator(k.begin()), std::make_move_iterator(k.end()));
  }
  text::sort_unique(keys);
  return keys;
}

bool gbp_eval(IndexingFunction fn, std::string_view v1, std::string_view v2) {
  return text::sorted_intersects(index(fn, v1), index(fn, v2));
}

std::string SimpleSbp::key() const { return std::string(to_string(fn)) + "(" + left + "|" + right + ")"; }

std::vector<SimpleSbp> ComplexSbp::expand() const {
  std::vector<SimpleSbp> out;
  for (const auto& l : mapping.left) {
    for (const auto& r : mapping.right) out.push_back(SimpleSbp{fn, l, r});
  }
  return out;
}

Term::Term(std::vector<SimpleSbp> a) : atoms(std::move(a)) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

std::string Term::key() const {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += " & ";
    out += atoms[i].key();
  }
  return out;
}

bool simple_sbp_eval(const SimpleSbp& sbp, const RecordRef& r1, const RecordRef& r2) {
  auto v1 = field_value_set(r1, sbp.left);
  auto v2 = field_value_set(r2, sbp.right);
  if (v1.empty() || v2.empty()) return false;
  return text::sorted_intersects(index_members(sbp.fn, v1), index_members(sbp.fn, v2));
}

bool complex_sbp_eval(const ComplexSbp& sbp, const RecordRef& r1, const RecordRef& r2) {
  for (const auto& s : sbp.expand()) {
    if (simple_sbp_eval(s, r1, r2)) return true;
  }
  return false;
}

bool term_eval(const Term& term, const RecordRef& r1, const RecordRef& r2) {
  for (const auto& a : term.atoms) {
    if (!simple_sbp_eval(a, r1, r2)) return false;
  }
  return !term.atoms.empty();
}

bool scheme_eval(const BlockingScheme& scheme, const RecordRef& r1, const RecordRef& r2) {
  for (const auto& t : scheme.terms) {
    if (term_eval(t, r1, r2)) return true;
  }
  return false;
}

BlockingScheme normalize_to_simple_dnf(const ComplexScheme& scheme, std::size_t max_terms) {
  BlockingScheme out;
  out.k = scheme.k;
  std::set<Term> seen;
  for (const auto& complex_term : scheme.terms) {
    std::vector<std::vector<SimpleSbp>> choices;
    for (const auto& atom : complex_term) choices.push_back(atom.expand());
    if (choices.empty() || std::any_of(choices.begin(), choices.end(), [](auto& c) { return c.empty(); })) continue;

    std::vector<std::size_t> pick(choices.size(), 0);
    bool done = false;
    while (!done) {
      std::vector<SimpleSbp> atoms;
      for (std::size_t i = 0; i < choices.size(); ++i) atoms.push_back(choices[i][pick[i]]);
      Term t(std::move(atoms));
      if (seen.insert(t).second) {
        if (out.terms.size() >= max_terms) {
          throw CapacityError("normalized scheme exceeds the cap of " + std::to_string(max_terms) + " terms");
        }
        out.terms.push_back(std::move(t));
      }
      // Advance the mixed-radix counter over the atom choices.
      std::size_t d = choices.size();
      while (true) {
        if (d == 0) {
          done = true;
          break;
        }
        --d;
        if (++pick[d] < choices[d].size()) break;
        pick[d] = 0;
      }
    }
  }
  return out;
}

std::vector<std::string> bkv_set(const Term& term, std::size_t term_id, const RecordRef& record, Side side) {
  std::vector<std::string> keys{"t" + std::to_string(term_id)};
  for (const auto& atom : term.atoms) {
    const std::string& field = side == Side::Left ? atom.left : atom.right;
    auto atom_keys = index_members(atom.fn, field_value_set(record, field));
    if (atom_keys.empty()) return {};
    std::vector<std::string> next;
    next.reserve(keys.size() * atom_keys.size());
    for (const auto& prefix : keys) {
      for (const auto& k : atom_keys) {
        std::string joined = prefix;
        joined += kKeySeparator;
        joined += k;
        next.push_back(std::move(joined));
      }
    }
    keys = std::move(next);
  }
  if (term.atoms.empty()) return {};
  text::sort_unique(keys);
  return keys;
}

void check_scheme(const BlockingScheme& scheme) {
  if (scheme.k < 1) throw ValidationError("scheme k must be positive");
  if (scheme.terms.empty()) throw ValidationError("scheme has no terms");
  for (const auto& t : scheme.terms) {
    if (t.atoms.empty()) throw ValidationError("scheme contains an empty term");
    if (t.size() > static_cast<std::size_t>(scheme.k)) {
      throw ValidationError("term '" + t.key() + "' exceeds k = " + std::to_string(scheme.k));
    }
  }
}

std::string scheme_to_json(const BlockingScheme& scheme) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : scheme.terms) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : t.atoms) {
      atoms.push_back({{"gbp", std::string(to_string(a.fn))}, {"left", a.left}, {"right", a.right}});
    }
    terms.push_back({{"atoms", atoms}});
  }
  nlohmann::json doc = {{"k", scheme.k}, {"terms", terms}};
  return doc.dump(2) + "\n";
}

BlockingScheme scheme_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scheme JSON: ") + e.what());
  }
  BlockingScheme scheme;
  try {
    scheme.k = doc.at("k").get<int>();
    for (const auto& t : doc.at("terms")) {
      std::vector<SimpleSbp> atoms;
      for (const auto& a : t.at("atoms")) {
        atoms.push_back(SimpleSbp{parse_indexing_function(a.at("gbp").get<std::string>()),
                                  a.at("left").get<std::string>(), a.at("right").get<std::string>()});
      }
      scheme.terms.emplace_back(std::move(atoms));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scheme JSON: ") + e.what());
  }
  check_scheme(scheme);
  return scheme;
}

void check_no_key_separator(const Dataset& dataset) {
  for (const auto& r : dataset.records) {
    for (const auto& v : r.values) {
      if (v.find(kKeySeparator) != std::string::npos) {
        throw ValidationError("record '" + r.id + "' contains the reserved block-key separator");
      }
    }
  }
}

}  // namespace erblock
