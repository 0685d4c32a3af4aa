#pragma once

#include <compare>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "erblock/tabular.hpp"

namespace erblock::rdf {

/// Name of the leading property-table column holding the subject.
inline constexpr std::string_view kSubjectField = "subject";

struct Triple {
  std::string subject;
  std::string property;
  std::string object;

  auto operator<=>(const Triple&) const = default;
};

/// Ordered set; iteration order is the canonical (sorted) triple order.
using TripleSet = std::set<Triple>;

/// Two-pass conversion of a triples-set into its logical property table.
/// Schema: "subject" followed by properties in first-encounter order over the
/// sorted triples; one record per subject (id = subject); multi-valued cells
/// hold the sorted objects joined with ';', absent values are "null".
Dataset triples_to_property_table(const TripleSet& triples, std::string dataset_name = "rdf");

/// Inverse conversion: one triple per member of every non-null property cell.
TripleSet property_table_to_triples(const Dataset& table);

/// Local name of a URI: the text after the last '#' or '/'.
std::string local_name(std::string_view uri);

TripleSet parse_ntriples(std::string_view content);
TripleSet load_ntriples(const std::filesystem::path& path);

std::string format_ntriples(const TripleSet& triples);
void serialize_ntriples(const TripleSet& triples, const std::filesystem::path& path);

}  // namespace erblock::rdf
