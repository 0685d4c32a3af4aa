#include <doctest.h>

#include <set>

#include "erblock/error.hpp"
#include "erblock/synthetic.hpp"

using namespace erblock;

TEST_SUITE("synthetic") {
  TEST_CASE("sizes, schemas and ground truth") {
    GenSpec spec;
    auto g = generate(spec);
    CHECK(g.left.table.size() == 300);
    CHECK(g.right.table.size() == 300);
    CHECK(g.truth.size() == 100);
    CHECK(validate(g.left.table).empty());
    CHECK(validate(g.right.table).empty());
    CHECK(g.left.table.schema.fields != g.right.table.schema.fields);
    CHECK_NOTHROW(check_ground_truth(g.truth, g.left.table, g.right.table));
    std::set<std::string> lefts, rights;
    for (const auto& [l, r] : g.truth.pairs) {
      lefts.insert(l);
      rights.insert(r);
    }
    CHECK(lefts.size() == 100);
    CHECK(rights.size() == 100);
    CHECK(g.q_truth.size() == g.left.table.schema.fields.size());
  }

  TEST_CASE("generation is deterministic per seed") {
    GenSpec spec;
    spec.seed = 5;
    auto a = generate(spec), b = generate(spec);
    CHECK(dataset_to_csv(a.left.table) == dataset_to_csv(b.left.table));
    CHECK(dataset_to_csv(a.right.table) == dataset_to_csv(b.right.table));
    CHECK(a.truth.pairs == b.truth.pairs);
    spec.seed = 6;
    CHECK(dataset_to_csv(generate(spec).right.table) != dataset_to_csv(a.right.table));
  }

  TEST_CASE("zero noise copies duplicate values exactly") {
    GenSpec spec;
    spec.noise = 0.0;
    auto g = generate(spec);
    auto li = id_index(g.left.table);
    auto ri = id_index(g.right.table);
    for (const auto& [l, r] : g.truth.pairs) {
      const auto& lr = g.left.table.records[li.at(l)];
      const auto& rr = g.right.table.records[ri.at(r)];
      for (const auto& m : g.q_truth) {
        auto lv = field_value_set(RecordRef{g.left.table.schema, lr}, m.left[0]);
        auto rv = field_value_set(RecordRef{g.right.table.schema, rr}, m.right[0]);
        CHECK(lv == rv);
      }
    }
  }

  TEST_CASE("rdf sides and split names") {
    GenSpec spec;
    spec.n_left = 20;
    spec.n_right = 30;
    spec.n_dups = 10;
    spec.left_style = Style::Rdf;
    spec.field_split = true;
    auto g = generate(spec);
    REQUIRE(g.left.triples.has_value());
    CHECK(!g.right.triples.has_value());
    CHECK(rdf::triples_to_property_table(*g.left.triples).size() == 20);
    CHECK(g.left.table.records[0].id.front() == 'L');
    bool split = false;
    for (const auto& m : g.q_truth) split = split || m.right.size() == 2;
    CHECK(split);
    CHECK(g.right.table.schema.fields.size() == 6);
  }

  TEST_CASE("styles and infeasible specs") {
    CHECK(parse_style("rdf") == Style::Rdf);
    CHECK(to_string(Style::Tabular) == "tabular");
    CHECK_THROWS_AS(parse_style("xml"), ArgumentError);
    GenSpec spec;
    spec.n_dups = 400;
    CHECK_THROWS_AS(generate(spec), ArgumentError);
    spec = GenSpec{};
    spec.noise = 1.5;
    CHECK_THROWS_AS(generate(spec), ArgumentError);
  }
}
