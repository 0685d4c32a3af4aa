#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erblock/tabular.hpp"

namespace erblock {

/// The closed catalogue of indexing functions. Each one backs exactly one
/// general blocking predicate; ids round-trip through the scheme JSON.
enum class IndexingFunction : std::uint8_t {
  ExactValue,
  Tokens,
  IntegerTokens,
  IntegerTokensOffByOne,
  TokenPrefix3,
  TokenPrefix5,
  TokenPrefix7,
  TokenNGrams2,
  TokenNGrams4,
  TokenNGrams6,
  Soundex,
  RefinedSoundex,
  Metaphone,
  DoubleMetaphone,
  Nysiis,
  Caverphone1,
  Caverphone2,
  ColognePhonetic,
  MatchRating,
};

inline constexpr std::size_t kCatalogueSize = 19;

/// All catalogue entries in declaration order.
std::span<const IndexingFunction> catalogue();
std::string_view to_string(IndexingFunction fn);
/// Throws LookupError for names outside the catalogue.
IndexingFunction parse_indexing_function(std::string_view name);

/// Namespace separator used in block keys; must not occur in data.
inline constexpr std::string_view kKeySeparator = "│";

/// Lowercased tokens: maximal runs not containing whitespace or , ; /
std::vector<std::string> tokenize(std::string_view value);

/// Blocking key values of `value`, sorted and deduplicated.
std::vector<std::string> index(IndexingFunction fn, std::string_view value);

/// Union of index() over the members of a value-set.
std::vector<std::string> index_members(IndexingFunction fn, const std::vector<std::string>& members);

/// General blocking predicate: the two key sets intersect.
bool gbp_eval(IndexingFunction fn, std::string_view v1, std::string_view v2);

/// A GBP bound to a 1:1 mapping (left field of R1, right field of R2).
struct SimpleSbp {
  IndexingFunction fn = IndexingFunction::ExactValue;
  std::string left;
  std::string right;

  auto operator<=>(const SimpleSbp&) const = default;
  /// Stable textual form, e.g. "Tokens(Name|Last Name)".
  std::string key() const;
};

/// A GBP bound to an n:m mapping; evaluates as the disjunction of the induced
/// simple predicates.
struct ComplexSbp {
  IndexingFunction fn = IndexingFunction::ExactValue;
  Mapping mapping;

  std::vector<SimpleSbp> expand() const;
};

/// Conjunction of simple predicates, kept sorted and unique.
struct Term {
  std::vector<SimpleSbp> atoms;

  Term() = default;
  explicit Term(std::vector<SimpleSbp> a);

  std::size_t size() const { return atoms.size(); }
  std::string key() const;
  auto operator<=>(const Term&) const = default;
};

/// Positive k-DNF over simple predicates.
struct BlockingScheme {
  int k = 1;
  std::vector<Term> terms;
};

/// Positive DNF whose atoms may be complex (n:m) predicates.
struct ComplexScheme {
  int k = 1;
  std::vector<std::vector<ComplexSbp>> terms;
};

bool simple_sbp_eval(const SimpleSbp& sbp, const RecordRef& r1, const RecordRef& r2);
bool complex_sbp_eval(const ComplexSbp& sbp, const RecordRef& r1, const RecordRef& r2);
bool term_eval(const Term& term, const RecordRef& r1, const RecordRef& r2);
bool scheme_eval(const BlockingScheme& scheme, const RecordRef& r1, const RecordRef& r2);

/// Distributes conjunction over the disjunctions induced by complex atoms.
/// Throws CapacityError when the result would exceed `max_terms` terms.
BlockingScheme normalize_to_simple_dnf(const ComplexScheme& scheme, std::size_t max_terms = 100000);

enum class Side { Left, Right };

/// Namespaced block keys of `record` for `term` ("t<id>│k1│k2..."). Two records
/// share a key iff the term holds for the pair.
std::vector<std::string> bkv_set(const Term& term, std::size_t term_id, const RecordRef& record, Side side);

/// Throws ValidationError when `scheme` is empty or violates its k bound.
void check_scheme(const BlockingScheme& scheme);

std::string scheme_to_json(const BlockingScheme& scheme);
BlockingScheme scheme_from_json(std::string_view text);

/// Throws ValidationError when any cell contains the key separator.
void check_no_key_separator(const Dataset& dataset);

}  // namespace erblock
