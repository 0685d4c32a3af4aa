#include "erblock/rdf.hpp"

#include <unordered_map>
#include <unordered_set>

#include "erblock/error.hpp"
#include "erblock/text.hpp"

namespace erblock::rdf {

namespace {

void check_representable(const Triple& t) {
  if (t.subject.empty() || t.property.empty() || t.object.empty()) {
    throw ValidationError("triple with an empty component");
  }
  if (t.property == kSubjectField) {
    throw ValidationError("property name 'subject' is reserved for the property-table key column");
  }
  if (t.object.find(kValueDelimiter) != std::string::npos) {
    throw ValidationError("object '" + t.object + "' contains the reserved delimiter ';'");
  }
  if (text::trim(t.object) != t.object || is_null_literal(t.object)) {
    throw ValidationError("object '" + t.object + "' cannot be stored losslessly in a property-table cell");
  }
}

}  // namespace

Dataset triples_to_property_table(const TripleSet& triples, std::string dataset_name) {
  Dataset table;
  table.schema.dataset_name = std::move(dataset_name);
  table.schema.fields.emplace_back(kSubjectField);

  // Pass 1: distinct properties and subjects.
  std::unordered_map<std::string_view, std::size_t> column_of;
  std::unordered_map<std::string_view, std::size_t> row_of;
  for (const auto& t : triples) {
    check_representable(t);
    if (column_of.emplace(t.property, table.schema.fields.size()).second) {
      table.schema.fields.push_back(t.property);
    }
    if (row_of.emplace(t.subject, table.records.size()).second) {
      table.records.push_back(Record{t.subject, {t.subject}});
    }
  }
  const std::size_t width = table.schema.fields.size();
  for (auto& r : table.records) r.values.resize(width);

  // Pass 2: fill cells. Sorted iteration delivers each cell's objects in order.
  for (const auto& t : triples) {
    auto& cell = table.records[row_of.at(t.subject)].values[column_of.at(t.property)];
    if (!cell.empty()) cell += kValueDelimiter;
    cell += t.object;
  }
  for (auto& r : table.records) {
    for (std::size_t c = 1; c < width; ++c) {
      if (r.values[c].empty()) r.values[c] = kNullLiteral;
    }
  }
  return table;
}

TripleSet property_table_to_triples(const Dataset& table) {
  const auto& fields = table.schema.fields;
  if (fields.empty() || fields.front() != kSubjectField) {
    throw ValidationError("property table must have 'subject' as its first field");
  }
  TripleSet out;
  for (const auto& record : table.records) {
    if (record.values.size() != fields.size()) {
      throw ValidationError("record '" + record.id + "' does not match the property schema");
    }
    const std::string& subject = record.values.front();
    for (std::size_t c = 1; c < fields.size(); ++c) {
      for (auto& object : split_cell(record.values[c])) {
        out.insert(Triple{subject, fields[c], std::move(object)});
      }
    }
  }
  return out;
}

std::string local_name(std::string_view uri) {
  auto pos = uri.find_last_of("#/");
  if (pos == std::string_view::npos) return std::string(uri);
  auto tail = uri.substr(pos + 1);
  // A URI ending in a separator has no local part; keep it whole.
  return tail.empty() ? std::string(uri) : std::string(tail);
}

namespace {

struct LineCursor {
  std::string_view line;
  std::size_t pos = 0;
  std::size_t number = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("line " + std::to_string(number) + ": " + why);
  }
  void skip_space() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }
  bool at_end() const { return pos >= line.size(); }

  std::string uri_term() {
    skip_space();
    if (at_end() || line[pos] != '<') fail("expected '<'");
    auto close = line.find('>', pos + 1);
    if (close == std::string_view::npos) fail("unterminated '<'");
    auto body = line.substr(pos + 1, close - pos - 1);
    if (body.empty()) fail("empty URI");
    pos = close + 1;
    return local_name(body);
  }

  std::string literal_term() {
    std::string out;
    ++pos;  // opening quote
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = line[pos++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) fail("dangling escape");
      char e = line[pos++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
    if (!at_end() && (line[pos] == '@' || line[pos] == '^')) fail("language tags and datatypes are not supported");
    if (out.empty()) fail("empty literal");
    return out;
  }

  std::string object_term() {
    skip_space();
    if (at_end()) fail("missing object");
    if (line[pos] == '"') return literal_term();
    if (line[pos] == '_') fail("blank nodes are not supported");
    return uri_term();
  }
};

}  // namespace

TripleSet parse_ntriples(std::string_view content) {
  TripleSet out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    ++number;
    std::string_view raw = content.substr(start, end - start);
    start = end + 1;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    LineCursor cur{line, 0, number};
    Triple t;
    t.subject = cur.uri_term();
    t.property = cur.uri_term();
    t.object = cur.object_term();
    cur.skip_space();
    if (cur.at_end() || line[cur.pos] != '.') cur.fail("expected terminating '.'");
    ++cur.pos;
    cur.skip_space();
    if (!cur.at_end()) cur.fail("trailing characters after '.'");
    out.insert(std::move(t));
  }
  return out;
}

TripleSet load_ntriples(const std::filesystem::path& path) { return parse_ntriples(read_text_file(path)); }

namespace {

std::string name_term(const std::string& name) {
  if (name.empty() || name.find_first_of("#/<>\n\r") != std::string::npos) {
    throw ValidationError("name '" + name + "' cannot be written as an N-Triples URI term");
  }
  return "<" + name + ">";
}

std::string literal(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

std::string format_ntriples(const TripleSet& triples) {
  std::string out;
  for (const auto& t : triples) {
    out += name_term(t.subject);
    out += ' ';
    out += name_term(t.property);
    out += ' ';
    out += literal(t.object);
    out += " .\n";
  }
  return out;
}

void serialize_ntriples(const TripleSet& triples, const std::filesystem::path& path) {
  write_text_file(path, format_ntriples(triples));
}

}  // namespace erblock::rdf
