#include <doctest.h>

#include "../support/random_data.hpp"
#include "erblock/error.hpp"
#include "erblock/phonetic.hpp"
#include "erblock/predicates.hpp"
#include "erblock/text.hpp"

using namespace erblock;
using V = std::vector<std::string>;

namespace {

Schema left_schema{"l", {"Name", "Zip"}};
Schema right_schema{"r", {"First Name", "Last Name", "Postcode"}};

bool eval(const SimpleSbp& sbp, const Record& a, const Record& b) {
  return simple_sbp_eval(sbp, RecordRef{left_schema, a}, RecordRef{right_schema, b});
}

}  // namespace

TEST_SUITE("predicates") {
  TEST_CASE("tokens keep inner punctuation and lowercase") {
    CHECK(index(IndexingFunction::Tokens, "W. Beats Jr.") == V{"beats", "jr.", "w."});
    CHECK(tokenize("a,b; c/d\te") == V{"a", "b", "c", "d", "e"});
  }

  TEST_CASE("integer tokens") {
    CHECK(index(IndexingFunction::IntegerTokens, "no digits here").empty());
    CHECK(index(IndexingFunction::IntegerTokens, "Apt 007 x77019a") == V{"7"});
    CHECK(index(IndexingFunction::IntegerTokensOffByOne, "Apt 5") == V{"4", "5", "6"});
    CHECK(index(IndexingFunction::IntegerTokensOffByOne, "0") == V{"-1", "0", "1"});
    CHECK(index(IndexingFunction::IntegerTokensOffByOne, "-1") == V{"-1", "-2", "0"});
    CHECK(index(IndexingFunction::IntegerTokensOffByOne, "99") == V{"100", "98", "99"});
    CHECK(gbp_eval(IndexingFunction::IntegerTokensOffByOne, "Apt 5", "Apt 6"));
    CHECK(!gbp_eval(IndexingFunction::IntegerTokens, "Apt 5", "Apt 6"));
  }

  TEST_CASE("prefixes and n-grams") {
    CHECK(index(IndexingFunction::TokenPrefix3, "Beats Jo") == V{"bea", "jo"});
    CHECK(index(IndexingFunction::TokenPrefix5, "Beatson") == V{"beats"});
    CHECK(index(IndexingFunction::TokenNGrams2, "a b c") == V{"a b", "b c"});
    CHECK(index(IndexingFunction::TokenNGrams4, "a b c").empty());
    CHECK(index(IndexingFunction::ExactValue, "  Mickey Beats ") == V{"mickey beats"});
    CHECK(index(IndexingFunction::ExactValue, "").empty());
  }

  TEST_CASE("phonetic encoders on known words") {
    CHECK(index(IndexingFunction::Soundex, "Robert") == V{"R163"});
    CHECK(phonetic::soundex("Tymczak") == "T522");
    CHECK(phonetic::soundex("Pfister") == "P236");
    CHECK(phonetic::soundex("Ashcraft") == "A261");
    CHECK(phonetic::refined_soundex("testing") == "T6036084");
    CHECK(phonetic::refined_soundex("The") == "T60");
    CHECK(phonetic::refined_soundex("jumped") == "J408106");
    CHECK(phonetic::metaphone("quick") == "KK");
    CHECK(phonetic::metaphone("dogs") == "TKS");
    CHECK(phonetic::metaphone("testing") == "TSTN");
    CHECK(phonetic::metaphone("jumped") == "JMPT");
    CHECK(phonetic::nysiis("Brian") == "BRAN");
    CHECK(phonetic::cologne_phonetic("Wikipedia") == "3412");
    CHECK(phonetic::caverphone2("Peter") == "PTA1111111");
    CHECK(phonetic::caverphone2("Stevenson") == "STFNSN1111");
    CHECK(phonetic::caverphone2("Karleen") == "KLN1111111");
    CHECK(phonetic::double_metaphone("Schmidt") == "XMT");
    CHECK(phonetic::double_metaphone_alternate("Schmidt") == "SMT");
    CHECK(phonetic::double_metaphone("Smith") == "SM0");
    CHECK(phonetic::double_metaphone_alternate("Smith") == "XMT");
  }

  TEST_CASE("phonetic functions skip tokens without letters") {
    for (auto fn : catalogue()) {
      if (fn < IndexingFunction::Soundex) continue;
      CHECK(index(fn, "12 345").empty());
      CHECK(index(fn, "Beats 12").size() == 1);
    }
  }

  TEST_CASE("catalogue names round-trip") {
    CHECK(catalogue().size() == kCatalogueSize);
    for (auto fn : catalogue()) CHECK(parse_indexing_function(to_string(fn)) == fn);
    CHECK_THROWS_AS(parse_indexing_function("SameFirstDigit"), LookupError);
  }

  TEST_CASE("general predicates") {
    CHECK(gbp_eval(IndexingFunction::Tokens, "Mickey Beats", "W. Beats Jr."));
    for (std::string s : {"x", "Mickey Beats", "12"}) CHECK(gbp_eval(IndexingFunction::ExactValue, s, s));
  }

  TEST_CASE("simple extended predicates") {
    Record mickey{"1", {"Mickey Beats", "77019"}};
    Record beats{"a", {"Joan", "Beats", "77020"}};
    Record nulls{"b", {"null", "null", "null"}};
    CHECK(eval({IndexingFunction::Tokens, "Name", "Last Name"}, mickey, beats));
    CHECK(!eval({IndexingFunction::Tokens, "Name", "Last Name"}, mickey, nulls));
    CHECK(eval({IndexingFunction::IntegerTokensOffByOne, "Zip", "Postcode"}, mickey, beats));
    CHECK_THROWS_AS(eval({IndexingFunction::Tokens, "Nope", "Last Name"}, mickey, beats), LookupError);

    Schema s1{"a", {"subject"}}, s2{"b", {"Name"}};
    Record r1{"x", {"mickey beats"}}, r2{"y", {"Mickey Beats"}};
    CHECK(simple_sbp_eval({IndexingFunction::ExactValue, "subject", "Name"}, RecordRef{s1, r1}, RecordRef{s2, r2}));
  }

  TEST_CASE("multi-valued cells use the union of member keys") {
    Record multi{"1", {"Ann Lee;Bo Smith", "1"}};
    Record other{"a", {"x", "Smith", "2"}};
    CHECK(eval({IndexingFunction::Tokens, "Name", "Last Name"}, multi, other));
    CHECK(!eval({IndexingFunction::ExactValue, "Name", "Last Name"}, multi, other));
  }

  TEST_CASE("complex predicates are disjunctions of their simple parts") {
    ComplexSbp c{IndexingFunction::Tokens, Mapping({"Name"}, {"First Name", "Last Name"})};
    auto parts = c.expand();
    REQUIRE(parts.size() == 2);
    Record mickey{"1", {"Mickey Beats", "1"}};
    Record a{"a", {"Joan", "Beats", "1"}}, b{"b", {"Mickey", "Rourke", "1"}}, c2{"c", {"Ann", "Lee", "1"}};
    for (const auto* r : {&a, &b, &c2}) {
      bool any = eval(parts[0], mickey, *r) || eval(parts[1], mickey, *r);
      CHECK(complex_sbp_eval(c, RecordRef{left_schema, mickey}, RecordRef{right_schema, *r}) == any);
    }
    ComplexSbp one{IndexingFunction::Tokens, Mapping({"Name"}, {"Last Name"})};
    CHECK(one.expand() == std::vector<SimpleSbp>{{IndexingFunction::Tokens, "Name", "Last Name"}});
  }

  TEST_CASE("complex predicates agree with brute force on random records") {
    Rng rng(3);
    auto l = testing::random_dataset(rng, 30, 3, "a");
    auto r = testing::random_dataset(rng, 30, 3, "b");
    for (int trial = 0; trial < 20; ++trial) {
      auto fn = catalogue()[rng.below(kCatalogueSize)];
      ComplexSbp c{fn, Mapping({"a0", "a2"}, {"b0", "b1", "b2"})};
      for (const auto& x : l.records) {
        for (const auto& y : r.records) {
          RecordRef rx{l.schema, x}, ry{r.schema, y};
          bool any = false;
          for (const auto& f : c.mapping.left) {
            for (const auto& g : c.mapping.right) any = any || simple_sbp_eval({fn, f, g}, rx, ry);
          }
          REQUIRE(complex_sbp_eval(c, rx, ry) == any);
        }
      }
    }
  }

  TEST_CASE("normalisation distributes conjunction over complex atoms") {
    ComplexScheme one;
    one.terms = {{ComplexSbp{IndexingFunction::Tokens, Mapping({"Name"}, {"First Name", "Last Name"})}}};
    auto s = normalize_to_simple_dnf(one);
    CHECK(s.terms.size() == 2);
    for (const auto& t : s.terms) CHECK(t.size() == 1);

    ComplexScheme two;
    two.k = 2;
    two.terms = {{ComplexSbp{IndexingFunction::Tokens, Mapping({"Name"}, {"First Name", "Last Name"})},
                  ComplexSbp{IndexingFunction::ExactValue, Mapping({"Zip"}, {"Postcode"})}}};
    s = normalize_to_simple_dnf(two);
    CHECK(s.terms.size() == 2);
    for (const auto& t : s.terms) CHECK(t.size() == 2);

    ComplexScheme big;
    big.k = 3;
    Mapping wide({"a", "b", "c"}, {"d", "e", "f"});
    big.terms = {{ComplexSbp{IndexingFunction::Tokens, wide}, ComplexSbp{IndexingFunction::Soundex, wide},
                  ComplexSbp{IndexingFunction::Metaphone, wide}}};
    CHECK_THROWS_AS(normalize_to_simple_dnf(big, 100), CapacityError);
  }

  TEST_CASE("normalised schemes cover the same pairs") {
    Rng rng(17);
    auto l = testing::random_dataset(rng, 50, 3, "a");
    auto r = testing::random_dataset(rng, 50, 3, "b");
    for (int trial = 0; trial < 5; ++trial) {
      ComplexScheme cs;
      cs.k = 2;
      for (int t = 0; t < 2; ++t) {
        std::vector<ComplexSbp> term;
        for (int a = 0; a < 2; ++a) {
          auto fn = catalogue()[rng.below(kCatalogueSize)];
          term.push_back({fn, Mapping({rng.pick(l.schema.fields), rng.pick(l.schema.fields)},
                                      {rng.pick(r.schema.fields)})});
        }
        cs.terms.push_back(term);
      }
      auto simple = normalize_to_simple_dnf(cs);
      for (const auto& x : l.records) {
        for (const auto& y : r.records) {
          RecordRef rx{l.schema, x}, ry{r.schema, y};
          bool expected = false;
          for (const auto& term : cs.terms) {
            bool all = true;
            for (const auto& atom : term) all = all && complex_sbp_eval(atom, rx, ry);
            expected = expected || all;
          }
          REQUIRE(scheme_eval(simple, rx, ry) == expected);
        }
      }
    }
  }

  TEST_CASE("scheme evaluation") {
    // Name tokens or a shared zip integer; Susan and Samuel share
    // only the zip.
    Schema a{"a", {"Name", "Zip"}}, b{"b", {"Name", "Zip"}};
    Record susan{"1", {"Susan Beats", "6"}}, samuel{"2", {"Samuel Jones", "6"}};
    BlockingScheme s;
    s.terms = {Term({{IndexingFunction::Tokens, "Name", "Name"}}),
               Term({{IndexingFunction::IntegerTokens, "Zip", "Zip"}})};
    CHECK(scheme_eval(s, RecordRef{a, susan}, RecordRef{b, samuel}));
    BlockingScheme names_only;
    names_only.terms = {s.terms[0]};
    CHECK(!scheme_eval(names_only, RecordRef{a, susan}, RecordRef{b, samuel}));
  }

  TEST_CASE("block keys") {
    Schema s{"x", {"Name", "Zip"}};
    Record r{"1", {"Mickey Beats", "null"}};
    Term tokens({{IndexingFunction::Tokens, "Name", "Name"}});
    CHECK(bkv_set(tokens, 0, RecordRef{s, r}, Side::Left) == V{"t0│beats", "t0│mickey"});
    Term both({{IndexingFunction::Tokens, "Name", "Name"}, {IndexingFunction::ExactValue, "Zip", "Zip"}});
    CHECK(bkv_set(both, 3, RecordRef{s, r}, Side::Left).empty());
  }

  TEST_CASE("shared block keys coincide with term evaluation") {
    Rng rng(23);
    auto l = testing::random_dataset(rng, 40, 3, "a");
    auto r = testing::random_dataset(rng, 40, 3, "b");
    for (int trial = 0; trial < 10; ++trial) {
      auto scheme = testing::random_scheme(rng, l, r);
      for (std::size_t t = 0; t < scheme.terms.size(); ++t) {
        for (const auto& x : l.records) {
          auto kx = bkv_set(scheme.terms[t], t, RecordRef{l.schema, x}, Side::Left);
          for (const auto& y : r.records) {
            auto ky = bkv_set(scheme.terms[t], t, RecordRef{r.schema, y}, Side::Right);
            REQUIRE(text::sorted_intersects(kx, ky) ==
                    term_eval(scheme.terms[t], RecordRef{l.schema, x}, RecordRef{r.schema, y}));
          }
        }
      }
    }
  }

  TEST_CASE("predicates are symmetric and implications hold") {
    Rng rng(29);
    for (int i = 0; i < 500; ++i) {
      auto a = testing::random_value(rng), b = testing::random_value(rng);
      for (auto fn : catalogue()) REQUIRE(gbp_eval(fn, a, b) == gbp_eval(fn, b, a));
      if (gbp_eval(IndexingFunction::IntegerTokens, a, b)) {
        CHECK(gbp_eval(IndexingFunction::IntegerTokensOffByOne, a, b));
      }
      if (gbp_eval(IndexingFunction::TokenPrefix7, a, b)) CHECK(gbp_eval(IndexingFunction::TokenPrefix5, a, b));
      if (gbp_eval(IndexingFunction::TokenPrefix5, a, b)) CHECK(gbp_eval(IndexingFunction::TokenPrefix3, a, b));
    }
  }

  TEST_CASE("adding terms or atoms is monotone") {
    Rng rng(31);
    auto l = testing::random_dataset(rng, 30, 2, "a");
    auto r = testing::random_dataset(rng, 30, 2, "b");
    auto extra = testing::random_atom(rng, l, r);
    auto base = testing::random_scheme(rng, l, r, 1);
    auto wider = base;
    wider.terms.push_back(Term({extra}));
    auto narrower = base;
    auto atoms = narrower.terms[0].atoms;
    atoms.push_back(extra);
    narrower.terms[0] = Term(atoms);
    narrower.k = 2;
    for (const auto& x : l.records) {
      for (const auto& y : r.records) {
        RecordRef rx{l.schema, x}, ry{r.schema, y};
        if (scheme_eval(base, rx, ry)) CHECK(scheme_eval(wider, rx, ry));
        if (term_eval(narrower.terms[0], rx, ry)) CHECK(term_eval(base.terms[0], rx, ry));
      }
    }
  }

  TEST_CASE("scheme JSON") {
    BlockingScheme s;
    s.k = 2;
    s.terms = {Term({{IndexingFunction::Tokens, "Name", "Last Name"}, {IndexingFunction::Soundex, "a", "b"}})};
    auto text = scheme_to_json(s);
    auto back = scheme_from_json(text);
    CHECK(back.k == 2);
    CHECK(back.terms == s.terms);
    CHECK(scheme_to_json(back) == text);
    CHECK(text.find("\"gbp\": \"Tokens\"") != std::string::npos);
    CHECK_THROWS(scheme_from_json("{\"k\":1,\"terms\":[{\"atoms\":[{\"gbp\":\"Nope\",\"left\":\"a\",\"right\":\"b\"}]}]}"));
    BlockingScheme empty;
    CHECK_THROWS_AS(check_scheme(empty), ValidationError);
    s.k = 1;
    CHECK_THROWS_AS(check_scheme(s), ValidationError);
  }
}
