#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace erblock {

/// Separator between members of a multi-valued cell.
inline constexpr char kValueDelimiter = ';';

/// Cell literal that denotes the empty value-set (matched case-insensitively).
inline constexpr std::string_view kNullLiteral = "null";

struct Schema {
  std::string dataset_name;
  std::vector<std::string> fields;

  std::optional<std::size_t> find(std::string_view field) const;
  /// Column of `field`; throws LookupError when absent.
  std::size_t require(std::string_view field) const;
};

struct Record {
  std::string id;
  std::vector<std::string> values;
};

/// A schema plus its records. Immutable after load by convention; invariants
/// are checked by validate() rather than enforced on construction so that
/// malformed inputs can be reported in full.
struct Dataset {
  Schema schema;
  std::vector<Record> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Non-owning view of one record together with the schema that names its
/// columns.
struct RecordRef {
  const Schema& schema;
  const Record& record;
};

using IdPair = std::pair<std::string, std::string>;

struct Mapping {
  std::vector<std::string> left;   // sorted, unique
  std::vector<std::string> right;  // sorted, unique
  double score = 0.0;

  Mapping() = default;
  Mapping(std::vector<std::string> l, std::vector<std::string> r, double s = 0.0);

  bool one_to_one() const { return left.size() == 1 && right.size() == 1; }
  /// Exact correspondence of both field sets; score is ignored.
  bool same_fields(const Mapping& other) const {
    return left == other.left && right == other.right;
  }
};

using MappingSet = std::vector<Mapping>;

struct GroundTruth {
  std::set<IdPair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool contains(const IdPair& p) const { return pairs.count(p) != 0; }
};

struct CsvOptions {
  char separator = ',';
  bool header = true;
  /// Column whose cells become record ids; row index otherwise.
  std::optional<std::string> id_column;
  std::string dataset_name;
};

// -- cell semantics ---------------------------------------------------------

bool is_null_literal(std::string_view cell);

/// Members of a cell under set semantics: split on ';', trimmed, empty and
/// null members dropped, sorted and deduplicated.
std::vector<std::string> split_cell(std::string_view cell);

std::vector<std::string> field_value_set(const RecordRef& ref, std::string_view field);
std::vector<std::string> field_value_set(const Record& record, std::size_t column);

/// Inverse of split_cell for a canonical member list ("null" when empty).
std::string join_cell(const std::vector<std::string>& members);

// -- datasets ---------------------------------------------------------------

/// Invariant violations as human-readable lines; empty when well-formed.
std::vector<std::string> validate(const Dataset& dataset);

/// id -> row position. Throws ValidationError on duplicate ids.
std::unordered_map<std::string, std::size_t> id_index(const Dataset& dataset);

// -- CSV --------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(std::string_view text, char separator = ',');
std::string format_csv_row(const std::vector<std::string>& cells, char separator = ',');

Dataset read_dataset_csv(std::string_view text, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
/// Writes header + rows. When the id is not a schema column it is not emitted,
/// so row-index ids are reproduced by a reload.
std::string dataset_to_csv(const Dataset& dataset, char separator = ',');
void save_csv(const Dataset& dataset, const std::filesystem::path& path, char separator = ',');

GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);
/// Throws ValidationError naming the first id not present on its side.
void check_ground_truth(const GroundTruth& truth, const Dataset& left, const Dataset& right);

std::string mapping_set_to_json(const MappingSet& mappings);
MappingSet mapping_set_from_json(std::string_view text);
MappingSet load_mapping_set(const std::filesystem::path& path);
void save_mapping_set(const MappingSet& mappings, const std::filesystem::path& path);

// -- small file helpers shared by the other modules -------------------------

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace erblock
