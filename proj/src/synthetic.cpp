#include "erblock/synthetic.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "erblock/error.hpp"
#include "erblock/random.hpp"
#include "erblock/text.hpp"

namespace erblock {

namespace {

const std::vector<std::string> kFirstNames = {
    "James",   "Mary",    "Robert",  "Patricia", "John",    "Jennifer", "Michael", "Linda",   "David",
    "Elizabeth", "William", "Barbara", "Richard", "Susan",   "Joseph",  "Jessica", "Thomas",  "Sarah",
    "Charles", "Karen",   "Daniel",  "Nancy",    "Matthew", "Lisa",     "Anthony", "Betty",   "Mark",
    "Margaret", "Donald",  "Sandra",  "Steven",   "Ashley",  "Paul",     "Kimberly", "Andrew", "Emily",
    "Joshua",  "Donna",   "Kenneth", "Michelle", "Kevin",   "Carol",    "Brian",   "Amanda",  "George",
    "Melissa", "Timothy", "Deborah", "Ronald",   "Stephanie", "Edward", "Rebecca", "Jason",   "Sharon",
    "Jeffrey", "Laura",   "Ryan",    "Cynthia",  "Jacob",   "Kathleen", "Gary",    "Amy",     "Nicholas",
    "Angela",  "Eric",    "Shirley", "Jonathan", "Anna",    "Stephen",  "Brenda",  "Larry",   "Pamela",
    "Justin",  "Emma",    "Scott",   "Nicole",   "Brandon", "Helen",    "Benjamin", "Samantha", "Samuel",
    "Katherine", "Gregory", "Christine", "Frank", "Debra",  "Alexander", "Rachel", "Raymond", "Carolyn",
};

const std::vector<std::string> kLastNames = {
    "Smith",    "Johnson",  "Williams", "Brown",     "Jones",    "Garcia",   "Miller",   "Davis",
    "Rodriguez", "Martinez", "Hernandez", "Lopez",   "Gonzalez", "Wilson",   "Anderson", "Thomas",
    "Taylor",   "Moore",    "Jackson",  "Martin",    "Lee",      "Perez",    "Thompson", "White",
    "Harris",   "Sanchez",  "Clark",    "Ramirez",   "Lewis",    "Robinson", "Walker",   "Young",
    "Allen",    "King",     "Wright",   "Scott",     "Torres",   "Nguyen",   "Hill",     "Flores",
    "Green",    "Adams",    "Nelson",   "Baker",     "Hall",     "Rivera",   "Campbell", "Mitchell",
    "Carter",   "Roberts",  "Gomez",    "Phillips",  "Evans",    "Turner",   "Diaz",     "Parker",
    "Cruz",     "Edwards",  "Collins",  "Reyes",     "Stewart",  "Morris",   "Morales",  "Murphy",
    "Cook",     "Rogers",   "Gutierrez", "Ortiz",    "Morgan",   "Cooper",   "Peterson", "Bailey",
    "Reed",     "Kelly",    "Howard",   "Ramos",     "Kim",      "Cox",      "Ward",     "Richardson",
    "Watson",   "Brooks",   "Chavez",   "Wood",      "James",    "Bennett",  "Gray",     "Mendoza",
    "Ruiz",     "Hughes",   "Price",    "Alvarez",   "Castillo", "Sanders",  "Patel",    "Myers",
};

const std::vector<std::string> kStreets = {
    "Maple",   "Oak",      "Pine",     "Cedar",    "Elm",     "Washington", "Lake",    "Hill",
    "Park",    "Main",     "Church",   "Spring",   "Highland", "Sunset",    "River",   "Meadow",
    "Forest",  "Willow",   "Lincoln",  "Jefferson", "Madison", "Franklin",  "Chestnut", "Walnut",
    "Cherry",  "Dogwood",  "Hickory",  "Magnolia", "Juniper", "Sycamore",   "Birch",   "Aspen",
    "Valley",  "Ridge",    "Orchard",  "Harbor",   "Bayview", "Prospect",   "Summit",  "Greenwood",
    "Fairview", "Lakeview", "Brookside", "Mill",   "Bridge",  "Canyon",     "Heritage", "Colonial",
};

const std::vector<std::string> kSuffixes = {"Street", "Avenue", "Road", "Lane", "Drive", "Boulevard", "Court",
                                            "Place"};

const std::vector<std::string> kCities = {
    "Springfield", "Riverside",  "Franklin",   "Greenville", "Bristol",    "Clinton",    "Fairview",
    "Salem",       "Madison",    "Georgetown", "Arlington",  "Ashland",    "Burlington", "Manchester",
    "Oxford",      "Milton",     "Newport",    "Dayton",     "Lexington",  "Jackson",    "Dover",
    "Hudson",      "Kingston",   "Marion",     "Auburn",     "Winchester", "Chester",    "Lancaster",
    "Plymouth",    "Princeton",  "Cleveland",  "Troy",       "Windsor",    "Hamilton",   "Florence",
};

const std::map<std::string, std::string> kAbbreviations = {
    {"Street", "St"}, {"Avenue", "Ave"}, {"Road", "Rd"},    {"Lane", "Ln"},       {"Drive", "Dr"},
    {"Boulevard", "Blvd"}, {"Court", "Ct"}, {"Place", "Pl"}, {"Mount", "Mt"}, {"Saint", "St"},
};

constexpr std::size_t kFields = 5;  // name, address, city, zip, phone
using Person = std::array<std::string, kFields>;

std::string digits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng.below(10));
  return s;
}

Person random_person(Rng& rng) {
  Person p;
  p[0] = rng.pick(kFirstNames) + " " + rng.pick(kLastNames);
  p[1] = std::to_string(1 + rng.below(9999)) + " " + rng.pick(kStreets) + " " + rng.pick(kSuffixes);
  p[2] = rng.pick(kCities);
  p[3] = std::to_string(10000 + rng.below(90000));
  p[4] = digits(rng, 3) + "-" + digits(rng, 3) + "-" + digits(rng, 4);
  return p;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

void substitute(Rng& rng, std::string& s) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (text::is_alpha(s[i]) || text::is_digit(s[i])) positions.push_back(i);
  }
  if (positions.empty()) return;
  char& c = s[rng.pick(positions)];
  const char old = c;
  do {
    if (text::is_digit(old)) {
      c = static_cast<char>('0' + rng.below(10));
    } else if (old >= 'A' && old <= 'Z') {
      c = static_cast<char>('A' + rng.below(26));
    } else {
      c = static_cast<char>('a' + rng.below(26));
    }
  } while (c == old);
}

void swap_tokens(Rng& rng, std::string& s) {
  auto words = split_words(s);
  if (words.size() < 2) return;
  std::size_t i = rng.below(words.size() - 1);
  std::swap(words[i], words[i + 1]);
  s = text::join(words, " ");
}

void abbreviate(std::string& s) {
  auto words = split_words(s);
  for (auto& w : words) {
    auto it = kAbbreviations.find(w);
    if (it != kAbbreviations.end()) {
      w = it->second;
      s = text::join(words, " ");
      return;
    }
  }
}

Person noisy_copy(Rng& rng, const Person& p, double noise) {
  Person q = p;
  for (auto& field : q) {
    if (!rng.chance(noise)) continue;
    switch (rng.below(3)) {
      case 0: substitute(rng, field); break;
      case 1: swap_tokens(rng, field); break;
      default: abbreviate(field); break;
    }
  }
  return q;
}

struct Layout {
  std::vector<std::string> fields;
  // Builds the cells of one record in `fields` order.
  std::vector<std::string> (*cells)(const Person&);
};

Layout left_layout() {
  return {{"name", "address", "city", "zip", "phone"}, [](const Person& p) {
            return std::vector<std::string>{p[0], p[1], p[2], p[3], p[4]};
          }};
}

Layout right_layout(bool split) {
  if (!split) {
    return {{"telephone", "full_name", "postcode", "street", "town"}, [](const Person& p) {
              return std::vector<std::string>{p[4], p[0], p[3], p[1], p[2]};
            }};
  }
  return {{"telephone", "given_name", "family_name", "postcode", "street", "town"}, [](const Person& p) {
            auto words = split_words(p[0]);
            std::string given = words.empty() ? "" : words.front();
            std::string family =
                words.size() < 2 ? "" : text::join(std::vector<std::string>(words.begin() + 1, words.end()), " ");
            return std::vector<std::string>{p[4], given.empty() ? std::string(kNullLiteral) : given,
                                            family.empty() ? std::string(kNullLiteral) : family, p[3], p[1], p[2]};
          }};
}

std::string padded(char prefix, std::size_t i, std::size_t n) {
  std::string num = std::to_string(i);
  std::string width = std::to_string(n > 0 ? n - 1 : 0);
  return std::string(1, prefix) + std::string(width.size() > num.size() ? width.size() - num.size() : 0, '0') + num;
}

// Renders persons; returns the ids assigned to each person in input order.
std::vector<std::string> render(const std::vector<Person>& people, const Layout& layout, Style style, char prefix,
                                const std::string& name, GeneratedSide& out) {
  std::vector<std::string> ids;
  if (style == Style::Tabular) {
    out.table.schema = {name, layout.fields};
    for (std::size_t i = 0; i < people.size(); ++i) {
      ids.push_back(std::to_string(i));
      out.table.records.push_back({ids.back(), layout.cells(people[i])});
    }
    return ids;
  }
  rdf::TripleSet triples;
  for (std::size_t i = 0; i < people.size(); ++i) {
    ids.push_back(padded(prefix, i, people.size()));
    auto cells = layout.cells(people[i]);
    for (std::size_t f = 0; f < cells.size(); ++f) {
      for (const auto& member : split_cell(cells[f])) triples.insert({ids.back(), layout.fields[f], member});
    }
  }
  out.table = rdf::triples_to_property_table(triples, name);
  out.triples = std::move(triples);
  return ids;
}

}  // namespace

Style parse_style(std::string_view name) {
  if (text::iequals(name, "tabular")) return Style::Tabular;
  if (text::iequals(name, "rdf")) return Style::Rdf;
  throw ArgumentError("unknown dataset style '" + std::string(name) + "' (expected tabular or rdf)");
}

std::string_view to_string(Style style) { return style == Style::Tabular ? "tabular" : "rdf"; }

Generated generate(const GenSpec& spec) {
  if (spec.n_left == 0 || spec.n_right == 0) throw ArgumentError("both sides need at least one record");
  if (spec.n_dups > std::min(spec.n_left, spec.n_right)) {
    throw ArgumentError("n_dups must not exceed min(n_left, n_right)");
  }
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw ArgumentError("noise must lie in [0,1]");

  Rng rng(spec.seed);
  std::vector<Person> left(spec.n_left);
  for (auto& p : left) p = random_person(rng);

  std::vector<std::size_t> sources(spec.n_left);
  for (std::size_t i = 0; i < sources.size(); ++i) sources[i] = i;
  rng.shuffle(sources);
  sources.resize(spec.n_dups);

  // right[j] with origin[j] = left index it copies, or n_left for fresh records
  std::vector<std::pair<Person, std::size_t>> right;
  for (auto s : sources) right.emplace_back(noisy_copy(rng, left[s], spec.noise), s);
  while (right.size() < spec.n_right) right.emplace_back(random_person(rng), spec.n_left);
  rng.shuffle(right);

  Generated g;
  std::vector<Person> right_people;
  for (const auto& r : right) right_people.push_back(r.first);
  auto left_ids = render(left, left_layout(), spec.left_style, 'L', "left", g.left);
  auto right_ids = render(right_people, right_layout(spec.field_split), spec.right_style, 'R', "right", g.right);

  for (std::size_t j = 0; j < right.size(); ++j) {
    if (right[j].second < spec.n_left) g.truth.pairs.emplace(left_ids[right[j].second], right_ids[j]);
  }

  if (spec.field_split) {
    g.q_truth.emplace_back(std::vector<std::string>{"name"}, std::vector<std::string>{"family_name", "given_name"});
  } else {
    g.q_truth.emplace_back(std::vector<std::string>{"name"}, std::vector<std::string>{"full_name"});
  }
  g.q_truth.emplace_back(std::vector<std::string>{"address"}, std::vector<std::string>{"street"});
  g.q_truth.emplace_back(std::vector<std::string>{"city"}, std::vector<std::string>{"town"});
  g.q_truth.emplace_back(std::vector<std::string>{"zip"}, std::vector<std::string>{"postcode"});
  g.q_truth.emplace_back(std::vector<std::string>{"phone"}, std::vector<std::string>{"telephone"});
  return g;
}

}  // namespace erblock
