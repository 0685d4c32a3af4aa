#include "erblock/tabular.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "erblock/error.hpp"
#include "erblock/text.hpp"

namespace erblock {

std::optional<std::size_t> Schema::find(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == field) return i;
  }
  return std::nullopt;
}

std::size_t Schema::require(std::string_view field) const {
  if (auto i = find(field)) return *i;
  throw LookupError("unknown field '" + std::string(field) + "' in schema '" + dataset_name + "'");
}

Mapping::Mapping(std::vector<std::string> l, std::vector<std::string> r, double s)
    : left(std::move(l)), right(std::move(r)), score(s) {
  text::sort_unique(left);
  text::sort_unique(right);
}

bool is_null_literal(std::string_view cell) { return text::iequals(text::trim(cell), kNullLiteral); }

std::vector<std::string> split_cell(std::string_view cell) {
  std::vector<std::string> out;
  if (is_null_literal(cell)) return out;
  std::size_t start = 0;
  while (start <= cell.size()) {
    std::size_t end = cell.find(kValueDelimiter, start);
    if (end == std::string_view::npos) end = cell.size();
    std::string_view member = text::trim(cell.substr(start, end - start));
    if (!member.empty() && !text::iequals(member, kNullLiteral)) out.emplace_back(member);
    start = end + 1;
  }
  text::sort_unique(out);
  return out;
}

std::vector<std::string> field_value_set(const Record& record, std::size_t column) {
  if (column >= record.values.size()) {
    throw LookupError("column " + std::to_string(column) + " out of range for record '" + record.id + "'");
  }
  return split_cell(record.values[column]);
}

std::vector<std::string> field_value_set(const RecordRef& ref, std::string_view field) {
  return field_value_set(ref.record, ref.schema.require(field));
}

std::string join_cell(const std::vector<std::string>& members) {
  if (members.empty()) return std::string(kNullLiteral);
  return text::join(members, std::string_view(&kValueDelimiter, 1));
}

std::vector<std::string> validate(const Dataset& dataset) {
  std::vector<std::string> violations;
  const auto& fields = dataset.schema.fields;
  if (fields.empty()) violations.push_back("schema has no fields");
  std::set<std::string_view> seen_fields;
  for (const auto& f : fields) {
    if (f.empty()) violations.push_back("schema contains an empty field name");
    if (!seen_fields.insert(f).second) violations.push_back("duplicate field '" + f + "'");
  }
  std::set<std::string_view> seen_ids;
  for (const auto& r : dataset.records) {
    if (r.values.size() != fields.size()) {
      violations.push_back("record '" + r.id + "' has " + std::to_string(r.values.size()) +
                           " values, schema has " + std::to_string(fields.size()));
    }
    if (!seen_ids.insert(r.id).second) violations.push_back("duplicate record id '" + r.id + "'");
  }
  return violations;
}

std::unordered_map<std::string, std::size_t> id_index(const Dataset& dataset) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (!index.emplace(dataset.records[i].id, i).second) {
      throw ValidationError("duplicate record id '" + dataset.records[i].id + "'");
    }
  }
  return index;
}

// -- CSV --------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv(std::string_view text, char separator) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool cell_was_quoted = false;
  bool row_has_content = false;
  std::size_t line = 1;

  auto end_cell = [&] {
    row.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto end_row = [&] {
    end_cell();
    // A physically blank line carries no record.
    if (row_has_content || row.size() > 1 || !row.front().empty()) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    if (c == '"' && !cell.empty()) {
      cell += c;  // literal quote inside an unquoted cell
    } else if (c == '"') {
      if (cell_was_quoted) throw ParseError("line " + std::to_string(line) + ": text after closing quote");
      in_quotes = true;
      cell_was_quoted = true;
      row_has_content = true;
    } else if (c == separator) {
      end_cell();
      row_has_content = true;
    } else if (c == '\r') {
      // tolerated before \n
    } else if (c == '\n') {
      end_row();
      ++line;
    } else {
      if (cell_was_quoted) {
        throw ParseError("line " + std::to_string(line) + ": text after closing quote");
      }
      cell += c;
    }
  }
  if (in_quotes) throw ParseError("line " + std::to_string(line) + ": unterminated quoted cell");
  if (!cell.empty() || !row.empty() || cell_was_quoted) end_row();
  return rows;
}

std::string format_csv_row(const std::vector<std::string>& cells, char separator) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += separator;
    const auto& c = cells[i];
    bool quote = c.find_first_of(std::string{separator, '"', '\n', '\r'}) != std::string::npos ||
                 (cells.size() == 1 && c.empty());
    if (!quote) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  }
  return out;
}

Dataset read_dataset_csv(std::string_view text, const CsvOptions& options) {
  auto rows = parse_csv(text, options.separator);
  Dataset ds;
  ds.schema.dataset_name = options.dataset_name;
  std::size_t first_data = 0;
  if (options.header) {
    if (rows.empty()) throw ParseError("missing header row");
    ds.schema.fields = rows.front();
    first_data = 1;
  } else {
    if (rows.empty()) throw ParseError("headerless CSV without rows has no schema");
    for (std::size_t i = 0; i < rows.front().size(); ++i) ds.schema.fields.push_back("f" + std::to_string(i));
  }
  std::optional<std::size_t> id_col;
  if (options.id_column) {
    id_col = ds.schema.find(*options.id_column);
    if (!id_col) throw LookupError("id column '" + *options.id_column + "' not found in header");
  }
  const std::size_t width = ds.schema.fields.size();
  ds.records.reserve(rows.size() - first_data);
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    auto& row = rows[r];
    const std::size_t row_number = r - first_data;
    if (row.size() != width) {
      throw ParseError("row " + std::to_string(row_number) + " (line " + std::to_string(r + 1) + ") has " +
                       std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    }
    Record rec;
    rec.id = id_col ? row[*id_col] : std::to_string(row_number);
    rec.values = std::move(row);
    ds.records.push_back(std::move(rec));
  }
  auto violations = validate(ds);
  if (!violations.empty()) throw ValidationError(violations.front());
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  CsvOptions opts = options;
  if (opts.dataset_name.empty()) opts.dataset_name = path.stem().string();
  return read_dataset_csv(read_text_file(path), opts);
}

std::string dataset_to_csv(const Dataset& dataset, char separator) {
  std::string out = format_csv_row(dataset.schema.fields, separator);
  out += '\n';
  for (const auto& r : dataset.records) {
    out += format_csv_row(r.values, separator);
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path, char separator) {
  write_text_file(path, dataset_to_csv(dataset, separator));
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  auto rows = parse_csv(read_text_file(path));
  if (rows.empty()) throw ParseError(path.string() + ": ground truth requires a header row");
  GroundTruth truth;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw ParseError(path.string() + ": row " + std::to_string(i) + " must have exactly two ids");
    }
    truth.pairs.emplace(rows[i][0], rows[i][1]);
  }
  return truth;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::string out = "left_id,right_id\n";
  for (const auto& [l, r] : truth.pairs) out += format_csv_row({l, r}) + "\n";
  write_text_file(path, out);
}

void check_ground_truth(const GroundTruth& truth, const Dataset& left, const Dataset& right) {
  auto li = id_index(left);
  auto ri = id_index(right);
  for (const auto& [l, r] : truth.pairs) {
    if (!li.count(l)) throw ValidationError("ground-truth id '" + l + "' not found in left dataset");
    if (!ri.count(r)) throw ValidationError("ground-truth id '" + r + "' not found in right dataset");
  }
}

std::string mapping_set_to_json(const MappingSet& mappings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : mappings) {
    arr.push_back({{"left", m.left}, {"right", m.right}, {"score", m.score}});
  }
  return arr.dump(2) + "\n";
}

MappingSet mapping_set_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("mapping JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("mapping JSON must be an array");
  MappingSet out;
  for (const auto& item : doc) {
    try {
      auto left = item.at("left").get<std::vector<std::string>>();
      auto right = item.at("right").get<std::vector<std::string>>();
      double score = item.contains("score") ? item.at("score").get<double>() : 0.0;
      if (left.empty() || right.empty()) throw ValidationError("mapping with an empty field set");
      if (score < 0.0 || score > 1.0) throw ValidationError("mapping score outside [0,1]");
      out.emplace_back(std::move(left), std::move(right), score);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("mapping JSON: ") + e.what());
    }
  }
  return out;
}

MappingSet load_mapping_set(const std::filesystem::path& path) { return mapping_set_from_json(read_text_file(path)); }

void save_mapping_set(const MappingSet& mappings, const std::filesystem::path& path) {
  write_text_file(path, mapping_set_to_json(mappings));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace erblock
