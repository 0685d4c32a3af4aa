#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "erblock/rdf.hpp"
#include "erblock/tabular.hpp"

namespace erblock {

enum class Style { Tabular, Rdf };

Style parse_style(std::string_view name);
std::string_view to_string(Style style);

struct GenSpec {
  std::size_t n_left = 300;
  std::size_t n_right = 300;
  std::size_t n_dups = 100;
  Style left_style = Style::Tabular;
  Style right_style = Style::Tabular;
  double noise = 0.1;
  /// Right side stores the name as two fields (given_name, family_name).
  bool field_split = false;
  std::uint64_t seed = 0;
};

struct GeneratedSide {
  /// The tabular form; for RDF sides this is the property table.
  Dataset table;
  std::optional<rdf::TripleSet> triples;
};

struct Generated {
  GeneratedSide left;
  GeneratedSide right;
  GroundTruth truth;
  MappingSet q_truth;
};

/// Person records (name, address, city, zip, phone) on both sides; the right
/// side uses different field names and column order. n_dups right records
/// are noisy copies of distinct left records. Each field of a copy is
/// perturbed with probability `noise` by one of: character substitution,
/// adjacent token swap, abbreviation. Tabular ids are row indices; RDF
/// subjects are "L<n>" / "R<n>". Throws ArgumentError for infeasible specs.
Generated generate(const GenSpec& spec);

}  // namespace erblock
