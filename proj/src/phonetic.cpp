#include "erblock/phonetic.hpp"

#include <array>
#include <initializer_list>

#include "erblock/text.hpp"

namespace erblock::phonetic {

namespace {

std::string letters_upper(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (text::is_alpha(c)) out += text::upper(c);
  }
  return out;
}

std::string letters_lower(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (text::is_alpha(c)) out += text::lower(c);
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (true) {
    auto hit = s.find(from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos);
    out += to;
    pos = hit + from.size();
  }
  out.append(s, pos, std::string::npos);
  s = std::move(out);
}

void replace_prefix(std::string& s, std::string_view from, std::string_view to) {
  if (s.compare(0, from.size(), from) == 0) s.replace(0, from.size(), to);
}

void replace_suffix(std::string& s, std::string_view from, std::string_view to) {
  if (s.size() >= from.size() && s.compare(s.size() - from.size(), from.size(), from) == 0) {
    s.replace(s.size() - from.size(), from.size(), to);
  }
}

// Collapse each maximal run of `c` into a single `replacement`.
void collapse_run(std::string& s, char c, char replacement) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != c) {
      out += s[i];
      continue;
    }
    out += replacement;
    while (i + 1 < s.size() && s[i + 1] == c) ++i;
  }
  s = std::move(out);
}

bool is_lower_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

void vowels_to(std::string& s, char marker) {
  for (char& c : s) {
    if (is_lower_vowel(c)) c = marker;
  }
}

}  // namespace

// -- Soundex ------------------------------------------------------------------

std::string soundex(std::string_view word) {
  static constexpr std::string_view kMap = "01230120022455012623010202";
  std::string s = letters_upper(word);
  if (s.empty()) return s;
  std::string out(4, '0');
  std::size_t count = 0;
  out[count++] = s[0];
  char last = kMap[s[0] - 'A'];
  for (std::size_t i = 1; i < s.size() && count < out.size(); ++i) {
    char ch = s[i];
    if (ch == 'H' || ch == 'W') continue;  // transparent between equal codes
    char digit = kMap[ch - 'A'];
    if (digit != '0' && digit != last) out[count++] = digit;
    last = digit;
  }
  return out;
}

std::string refined_soundex(std::string_view word) {
  static constexpr std::string_view kMap = "01360240043788015936020505";
  std::string s = letters_upper(word);
  if (s.empty()) return s;
  std::string out(1, s[0]);
  char last = '*';
  for (char ch : s) {
    char code = kMap[ch - 'A'];
    if (code == last) continue;
    out += code;
    last = code;
  }
  return out;
}

// -- Metaphone ----------------------------------------------------------------

namespace {

constexpr std::string_view kFrontVowels = "EIY";
constexpr std::string_view kVarson = "CSPTG";

bool mp_vowel(const std::string& s, std::size_t i) {
  return i < s.size() && std::string_view("AEIOU").find(s[i]) != std::string_view::npos;
}
bool mp_prev_is(const std::string& s, std::size_t i, char c) { return i > 0 && i < s.size() && s[i - 1] == c; }
bool mp_next_is(const std::string& s, std::size_t i, char c) { return i + 1 < s.size() && s[i + 1] == c; }
bool mp_region(const std::string& s, std::size_t i, std::string_view test) {
  return i + test.size() <= s.size() && std::string_view(s).substr(i, test.size()) == test;
}
bool mp_front_vowel_at(const std::string& s, std::size_t i) {
  return i < s.size() && kFrontVowels.find(s[i]) != std::string_view::npos;
}

}  // namespace

std::string metaphone(std::string_view word) {
  constexpr std::size_t kMaxLen = 4;
  std::string in = letters_upper(word);
  if (in.empty()) return in;
  if (in.size() == 1) return in;

  std::string local;
  switch (in[0]) {
    case 'K':
    case 'G':
    case 'P':
      local = in[1] == 'N' ? in.substr(1) : in;
      break;
    case 'A':
      local = in[1] == 'E' ? in.substr(1) : in;
      break;
    case 'W':
      if (in[1] == 'R') {
        local = in.substr(1);
      } else if (in[1] == 'H') {
        local = in.substr(1);
        local[0] = 'W';
      } else {
        local = in;
      }
      break;
    case 'X':
      local = in;
      local[0] = 'S';
      break;
    default:
      local = in;
  }

  const std::size_t n_chars = local.size();
  auto is_last = [&](std::size_t n) { return n + 1 == n_chars; };
  std::string code;
  std::size_t n = 0;
  while (code.size() < kMaxLen && n < n_chars) {
    const char symb = local[n];
    if (symb != 'C' && mp_prev_is(local, n, symb)) {
      ++n;
      continue;
    }
    switch (symb) {
      case 'A':
      case 'E':
      case 'I':
      case 'O':
      case 'U':
        if (n == 0) code += symb;
        break;
      case 'B':
        if (mp_prev_is(local, n, 'M') && is_last(n)) break;
        code += symb;
        break;
      case 'C':
        if (mp_prev_is(local, n, 'S') && !is_last(n) && mp_front_vowel_at(local, n + 1)) break;
        if (mp_region(local, n, "CIA")) {
          code += 'X';
          break;
        }
        if (!is_last(n) && mp_front_vowel_at(local, n + 1)) {
          code += 'S';
          break;
        }
        if (mp_prev_is(local, n, 'S') && mp_next_is(local, n, 'H')) {
          code += 'K';
          break;
        }
        if (mp_next_is(local, n, 'H')) {
          code += (n == 0 && n_chars >= 3 && mp_vowel(local, 2)) ? 'K' : 'X';
        } else {
          code += 'K';
        }
        break;
      case 'D':
        if (!is_last(n + 1) && mp_next_is(local, n, 'G') && mp_front_vowel_at(local, n + 2)) {
          code += 'J';
          n += 2;
        } else {
          code += 'T';
        }
        break;
      case 'G': {
        if (is_last(n + 1) && mp_next_is(local, n, 'H')) break;
        if (!is_last(n + 1) && mp_next_is(local, n, 'H') && !mp_vowel(local, n + 2)) break;
        if (n > 0 && (mp_region(local, n, "GN") || mp_region(local, n, "GNED"))) break;
        bool hard = mp_prev_is(local, n, 'G');
        if (!is_last(n) && mp_front_vowel_at(local, n + 1) && !hard) {
          code += 'J';
        } else {
          code += 'K';
        }
        break;
      }
      case 'H':
        if (is_last(n)) break;
        if (n > 0 && kVarson.find(local[n - 1]) != std::string_view::npos) break;
        if (mp_vowel(local, n + 1)) code += 'H';
        break;
      case 'F':
      case 'J':
      case 'L':
      case 'M':
      case 'N':
      case 'R':
        code += symb;
        break;
      case 'K':
        if (n > 0) {
          if (!mp_prev_is(local, n, 'C')) code += symb;
        } else {
          code += symb;
        }
        break;
      case 'P':
        code += mp_next_is(local, n, 'H') ? 'F' : symb;
        break;
      case 'Q':
        code += 'K';
        break;
      case 'S':
        if (mp_region(local, n, "SH") || mp_region(local, n, "SIO") || mp_region(local, n, "SIA")) {
          code += 'X';
        } else {
          code += 'S';
        }
        break;
      case 'T':
        if (mp_region(local, n, "TIA") || mp_region(local, n, "TIO")) {
          code += 'X';
          break;
        }
        if (mp_region(local, n, "TCH")) break;
        code += mp_region(local, n, "TH") ? '0' : 'T';
        break;
      case 'V':
        code += 'F';
        break;
      case 'W':
      case 'Y':
        if (!is_last(n) && mp_vowel(local, n + 1)) code += symb;
        break;
      case 'X':
        code += "KS";
        break;
      case 'Z':
        code += 'S';
        break;
      default:
        break;
    }
    ++n;
    if (code.size() > kMaxLen) code.resize(kMaxLen);
  }
  return code;
}

// -- Double Metaphone -----------------------------------------------------------

namespace {

class DoubleMetaphoneEncoder {
 public:
  explicit DoubleMetaphoneEncoder(std::string value) : v_(std::move(value)) {}

  void run() {
    slavo_germanic_ = v_.find('W') != std::string::npos || v_.find('K') != std::string::npos ||
                      v_.find("CZ") != std::string::npos || v_.find("WITZ") != std::string::npos;
    int index = silent_start() ? 1 : 0;
    const int len = static_cast<int>(v_.size());
    while (!complete() && index <= len - 1) {
      switch (v_[index]) {
        case 'A':
        case 'E':
        case 'I':
        case 'O':
        case 'U':
        case 'Y':
          if (index == 0) add('A');
          ++index;
          break;
        case 'B':
          add('P');
          index = at(index + 1) == 'B' ? index + 2 : index + 1;
          break;
        case 'C': index = handle_c(index); break;
        case 'D': index = handle_d(index); break;
        case 'F':
          add('F');
          index = at(index + 1) == 'F' ? index + 2 : index + 1;
          break;
        case 'G': index = handle_g(index); break;
        case 'H': index = handle_h(index); break;
        case 'J': index = handle_j(index); break;
        case 'K':
          add('K');
          index = at(index + 1) == 'K' ? index + 2 : index + 1;
          break;
        case 'L': index = handle_l(index); break;
        case 'M':
          add('M');
          index = condition_m0(index) ? index + 2 : index + 1;
          break;
        case 'N':
          add('N');
          index = at(index + 1) == 'N' ? index + 2 : index + 1;
          break;
        case 'P': index = handle_p(index); break;
        case 'Q':
          add('K');
          index = at(index + 1) == 'Q' ? index + 2 : index + 1;
          break;
        case 'R': index = handle_r(index); break;
        case 'S': index = handle_s(index); break;
        case 'T': index = handle_t(index); break;
        case 'V':
          add('F');
          index = at(index + 1) == 'V' ? index + 2 : index + 1;
          break;
        case 'W': index = handle_w(index); break;
        case 'X': index = handle_x(index); break;
        case 'Z': index = handle_z(index); break;
        default: ++index; break;
      }
    }
  }

  const std::string& primary() const { return primary_; }
  const std::string& alternate() const { return alternate_; }

 private:
  static constexpr std::size_t kMaxLen = 4;

  std::string v_;
  std::string primary_;
  std::string alternate_;
  bool slavo_germanic_ = false;

  int size() const { return static_cast<int>(v_.size()); }
  char at(int i) const { return (i < 0 || i >= size()) ? '\0' : v_[i]; }
  static bool vowel(char c) { return c != '\0' && std::string_view("AEIOUY").find(c) != std::string_view::npos; }

  bool contains(int start, int length, std::initializer_list<std::string_view> criteria) const {
    if (start < 0 || start + length > size()) return false;
    std::string_view target = std::string_view(v_).substr(start, length);
    for (auto c : criteria) {
      if (target == c) return true;
    }
    return false;
  }

  bool silent_start() const {
    for (std::string_view s : {"GN", "KN", "PN", "WR", "PS"}) {
      if (std::string_view(v_).starts_with(s)) return true;
    }
    return false;
  }

  bool complete() const { return primary_.size() >= kMaxLen && alternate_.size() >= kMaxLen; }

  void add_primary(std::string_view s) {
    std::size_t room = kMaxLen - std::min(kMaxLen, primary_.size());
    primary_ += s.substr(0, room);
  }
  void add_alternate(std::string_view s) {
    std::size_t room = kMaxLen - std::min(kMaxLen, alternate_.size());
    alternate_ += s.substr(0, room);
  }
  void add(char c) { add(std::string_view(&c, 1)); }
  void add(char p, char a) {
    add_primary(std::string_view(&p, 1));
    add_alternate(std::string_view(&a, 1));
  }
  void add(std::string_view s) {
    add_primary(s);
    add_alternate(s);
  }
  void add(std::string_view p, std::string_view a) {
    add_primary(p);
    add_alternate(a);
  }

  bool condition_c0(int index) const {
    if (contains(index, 4, {"CHIA"})) return true;
    if (index <= 1) return false;
    if (vowel(at(index - 2))) return false;
    if (!contains(index - 1, 3, {"ACH"})) return false;
    char c = at(index + 2);
    return (c != 'I' && c != 'E') || contains(index - 2, 6, {"BACHER", "MACHER"});
  }

  bool condition_ch0(int index) const {
    if (index != 0) return false;
    if (!contains(index + 1, 5, {"HARAC", "HARIS"}) && !contains(index + 1, 3, {"HOR", "HYM", "HIA", "HEM"})) {
      return false;
    }
    return !contains(0, 5, {"CHORE"});
  }

  bool condition_ch1(int index) const {
    return (contains(0, 4, {"VAN ", "VON "}) || contains(0, 3, {"SCH"})) ||
           contains(index - 2, 6, {"ORCHES", "ARCHIT", "ORCHID"}) || contains(index + 2, 1, {"T", "S"}) ||
           ((contains(index - 1, 1, {"A", "O", "U", "E"}) || index == 0) &&
            (contains(index + 2, 1, {"L", "R", "N", "M", "B", "H", "F", "V", "W", " "}) ||
             index + 1 == size() - 1));
  }

  bool condition_l0(int index) const {
    if (index == size() - 3 && contains(index - 1, 4, {"ILLO", "ILLA", "ALLE"})) return true;
    return (contains(size() - 2, 2, {"AS", "OS"}) || contains(size() - 1, 1, {"A", "O"})) &&
           contains(index - 1, 4, {"ALLE"});
  }

  bool condition_m0(int index) const {
    if (at(index + 1) == 'M') return true;
    return contains(index - 1, 3, {"UMB"}) && ((index + 1) == size() - 1 || contains(index + 2, 2, {"ER"}));
  }

  int handle_c(int index) {
    if (condition_c0(index)) {
      add('K');
      index += 2;
    } else if (index == 0 && contains(index, 6, {"CAESAR"})) {
      add('S');
      index += 2;
    } else if (contains(index, 2, {"CH"})) {
      index = handle_ch(index);
    } else if (contains(index, 2, {"CZ"}) && !contains(index - 2, 4, {"WICZ"})) {
      add('S', 'X');
      index += 2;
    } else if (contains(index + 1, 3, {"CIA"})) {
      add('X');
      index += 3;
    } else if (contains(index, 2, {"CC"}) && !(index == 1 && at(0) == 'M')) {
      return handle_cc(index);
    } else if (contains(index, 2, {"CK", "CG", "CQ"})) {
      add('K');
      index += 2;
    } else if (contains(index, 2, {"CI", "CE", "CY"})) {
      if (contains(index, 3, {"CIO", "CIE", "CIA"})) {
        add('S', 'X');
      } else {
        add('S');
      }
      index += 2;
    } else {
      add('K');
      if (contains(index + 1, 2, {" C", " Q", " G"})) {
        index += 3;
      } else if (contains(index + 1, 1, {"C", "K", "Q"}) && !contains(index + 1, 2, {"CE", "CI"})) {
        index += 2;
      } else {
        ++index;
      }
    }
    return index;
  }

  int handle_cc(int index) {
    if (contains(index + 2, 1, {"I", "E", "H"}) && !contains(index + 2, 2, {"HU"})) {
      if ((index == 1 && at(index - 1) == 'A') || contains(index - 1, 5, {"UCCEE", "UCCES"})) {
        add("KS");
      } else {
        add('X');
      }
      index += 3;
    } else {
      add('K');
      index += 2;
    }
    return index;
  }

  int handle_ch(int index) {
    if (index > 0 && contains(index, 4, {"CHAE"})) {
      add('K', 'X');
    } else if (condition_ch0(index) || condition_ch1(index)) {
      add('K');
    } else if (index > 0) {
      if (contains(0, 2, {"MC"})) {
        add('K');
      } else {
        add('X', 'K');
      }
    } else {
      add('X');
    }
    return index + 2;
  }

  int handle_d(int index) {
    if (contains(index, 2, {"DG"})) {
      if (contains(index + 2, 1, {"I", "E", "Y"})) {
        add('J');
        index += 3;
      } else {
        add("TK");
        index += 2;
      }
    } else if (contains(index, 2, {"DT", "DD"})) {
      add('T');
      index += 2;
    } else {
      add('T');
      ++index;
    }
    return index;
  }

  int handle_g(int index) {
    if (at(index + 1) == 'H') {
      index = handle_gh(index);
    } else if (at(index + 1) == 'N') {
      if (index == 1 && vowel(at(0)) && !slavo_germanic_) {
        add("KN", "N");
      } else if (!contains(index + 2, 2, {"EY"}) && at(index + 1) != 'Y' && !slavo_germanic_) {
        add("N", "KN");
      } else {
        add("KN");
      }
      index += 2;
    } else if (contains(index + 1, 2, {"LI"}) && !slavo_germanic_) {
      add("KL", "L");
      index += 2;
    } else if (index == 0 && (at(index + 1) == 'Y' ||
                              contains(index + 1, 2, {"ES", "EP", "EB", "EL", "EY", "IB", "IL", "IN", "IE", "EI", "ER"}))) {
      add('K', 'J');
      index += 2;
    } else if ((contains(index + 1, 2, {"ER"}) || at(index + 1) == 'Y') &&
               !contains(0, 6, {"DANGER", "RANGER", "MANGER"}) && !contains(index - 1, 1, {"E", "I"}) &&
               !contains(index - 1, 3, {"RGY", "OGY"})) {
      add('K', 'J');
      index += 2;
    } else if (contains(index + 1, 1, {"E", "I", "Y"}) || contains(index - 1, 4, {"AGGI", "OGGI"})) {
      if (contains(0, 4, {"VAN ", "VON "}) || contains(0, 3, {"SCH"}) || contains(index + 1, 2, {"ET"})) {
        add('K');
      } else if (contains(index + 1, 3, {"IER"})) {
        add('J');
      } else {
        add('J', 'K');
      }
      index += 2;
    } else if (at(index + 1) == 'G') {
      index += 2;
      add('K');
    } else {
      ++index;
      add('K');
    }
    return index;
  }

  int handle_gh(int index) {
    if (index > 0 && !vowel(at(index - 1))) {
      add('K');
      index += 2;
    } else if (index == 0) {
      add(at(index + 2) == 'I' ? 'J' : 'K');
      index += 2;
    } else if ((index > 1 && contains(index - 2, 1, {"B", "H", "D"})) ||
               (index > 2 && contains(index - 3, 1, {"B", "H", "D"})) ||
               (index > 3 && contains(index - 4, 1, {"B", "H"}))) {
      index += 2;
    } else {
      if (index > 2 && at(index - 1) == 'U' && contains(index - 3, 1, {"C", "G", "L", "R", "T"})) {
        add('F');
      } else if (index > 0 && at(index - 1) != 'I') {
        add('K');
      }
      index += 2;
    }
    return index;
  }

  int handle_h(int index) {
    if ((index == 0 || vowel(at(index - 1))) && vowel(at(index + 1))) {
      add('H');
      index += 2;
    } else {
      ++index;
    }
    return index;
  }

  int handle_j(int index) {
    if (contains(index, 4, {"JOSE"}) || contains(0, 4, {"SAN "})) {
      if (((index == 0 && at(index + 4) == ' ') || size() == 4) || contains(0, 4, {"SAN "})) {
        add('H');
      } else {
        add('J', 'H');
      }
      ++index;
    } else {
      if (index == 0 && !contains(index, 4, {"JOSE"})) {
        add('J', 'A');
      } else if (vowel(at(index - 1)) && !slavo_germanic_ && (at(index + 1) == 'A' || at(index + 1) == 'O')) {
        add('J', 'H');
      } else if (index == size() - 1) {
        add('J', ' ');
      } else if (!contains(index + 1, 1, {"L", "T", "K", "S", "N", "M", "B", "Z"}) &&
                 !contains(index - 1, 1, {"S", "K", "L"})) {
        add('J');
      }
      index = at(index + 1) == 'J' ? index + 2 : index + 1;
    }
    return index;
  }

  int handle_l(int index) {
    if (at(index + 1) == 'L') {
      if (condition_l0(index)) {
        add_primary("L");
      } else {
        add('L');
      }
      index += 2;
    } else {
      ++index;
      add('L');
    }
    return index;
  }

  int handle_p(int index) {
    if (at(index + 1) == 'H') {
      add('F');
      return index + 2;
    }
    add('P');
    return contains(index + 1, 1, {"P", "B"}) ? index + 2 : index + 1;
  }

  int handle_r(int index) {
    if (index == size() - 1 && !slavo_germanic_ && contains(index - 2, 2, {"IE"}) &&
        !contains(index - 4, 2, {"ME", "MA"})) {
      add_alternate("R");
    } else {
      add('R');
    }
    return at(index + 1) == 'R' ? index + 2 : index + 1;
  }

  int handle_s(int index) {
    if (contains(index - 1, 3, {"ISL", "YSL"})) {
      ++index;
    } else if (index == 0 && contains(index, 5, {"SUGAR"})) {
      add('X', 'S');
      ++index;
    } else if (contains(index, 2, {"SH"})) {
      if (contains(index + 1, 4, {"HEIM", "HOEK", "HOLM", "HOLZ"})) {
        add('S');
      } else {
        add('X');
      }
      index += 2;
    } else if (contains(index, 3, {"SIO", "SIA"}) || contains(index, 4, {"SIAN"})) {
      if (slavo_germanic_) {
        add('S');
      } else {
        add('S', 'X');
      }
      index += 3;
    } else if ((index == 0 && contains(index + 1, 1, {"M", "N", "L", "W"})) || contains(index + 1, 1, {"Z"})) {
      add('S', 'X');
      index = contains(index + 1, 1, {"Z"}) ? index + 2 : index + 1;
    } else if (contains(index, 2, {"SC"})) {
      index = handle_sc(index);
    } else {
      if (index == size() - 1 && contains(index - 2, 2, {"AI", "OI"})) {
        add_alternate("S");
      } else {
        add('S');
      }
      index = contains(index + 1, 1, {"S", "Z"}) ? index + 2 : index + 1;
    }
    return index;
  }

  int handle_sc(int index) {
    if (at(index + 2) == 'H') {
      if (contains(index + 3, 2, {"OO", "ER", "EN", "UY", "ED", "EM"})) {
        if (contains(index + 3, 2, {"ER", "EN"})) {
          add("X", "SK");
        } else {
          add("SK");
        }
      } else if (index == 0 && !vowel(at(3)) && at(3) != 'W') {
        add('X', 'S');
      } else {
        add('X');
      }
    } else if (contains(index + 2, 1, {"I", "E", "Y"})) {
      add('S');
    } else {
      add("SK");
    }
    return index + 3;
  }

  int handle_t(int index) {
    if (contains(index, 4, {"TION"})) {
      add('X');
      index += 3;
    } else if (contains(index, 3, {"TIA", "TCH"})) {
      add('X');
      index += 3;
    } else if (contains(index, 2, {"TH"}) || contains(index, 3, {"TTH"})) {
      if (contains(index + 2, 2, {"OM", "AM"}) || contains(0, 4, {"VAN ", "VON "}) || contains(0, 3, {"SCH"})) {
        add('T');
      } else {
        add('0', 'T');
      }
      index += 2;
    } else {
      add('T');
      index = contains(index + 1, 1, {"T", "D"}) ? index + 2 : index + 1;
    }
    return index;
  }

  int handle_w(int index) {
    if (contains(index, 2, {"WR"})) {
      add('R');
      return index + 2;
    }
    if (index == 0 && (vowel(at(index + 1)) || contains(index, 2, {"WH"}))) {
      if (vowel(at(index + 1))) {
        add('A', 'F');
      } else {
        add('A');
      }
      ++index;
    } else if ((index == size() - 1 && vowel(at(index - 1))) ||
               contains(index - 1, 5, {"EWSKI", "EWSKY", "OWSKI", "OWSKY"}) || contains(0, 3, {"SCH"})) {
      add_alternate("F");
      ++index;
    } else if (contains(index, 4, {"WICZ", "WITZ"})) {
      add("TS", "FX");
      index += 4;
    } else {
      ++index;
    }
    return index;
  }

  int handle_x(int index) {
    if (index == 0) {
      add('S');
      return index + 1;
    }
    if (!((index == size() - 1) && (contains(index - 3, 3, {"IAU", "EAU"}) || contains(index - 2, 2, {"AU", "OU"})))) {
      add("KS");
    }
    return contains(index + 1, 1, {"C", "X"}) ? index + 2 : index + 1;
  }

  int handle_z(int index) {
    if (at(index + 1) == 'H') {
      add('J');
      return index + 2;
    }
    if (contains(index + 1, 2, {"ZO", "ZI", "ZA"}) || (slavo_germanic_ && (index > 0 && at(index - 1) != 'T'))) {
      add("S", "TS");
    } else {
      add('S');
    }
    return at(index + 1) == 'Z' ? index + 2 : index + 1;
  }
};

}  // namespace

std::string double_metaphone(std::string_view word) {
  std::string s = letters_upper(word);
  if (s.empty()) return s;
  DoubleMetaphoneEncoder enc(std::move(s));
  enc.run();
  return enc.primary();
}

std::string double_metaphone_alternate(std::string_view word) {
  std::string s = letters_upper(word);
  if (s.empty()) return s;
  DoubleMetaphoneEncoder enc(std::move(s));
  enc.run();
  return enc.alternate();
}

// -- NYSIIS ---------------------------------------------------------------------

namespace {

bool ny_vowel(char c) { return c == 'A' || c == 'E' || c == 'I' || c == 'O' || c == 'U'; }

// Replacement for chars[i..] given its neighbourhood; returns the characters
// to write starting at the current position.
std::string_view ny_transcode(char prev, char curr, char next, char after_next, char& scratch) {
  if (curr == 'E' && next == 'V') return "AF";
  if (ny_vowel(curr)) return "A";
  if (curr == 'Q') return "G";
  if (curr == 'Z') return "S";
  if (curr == 'M') return "N";
  if (curr == 'K') return next == 'N' ? "NN" : "C";
  if (curr == 'S' && next == 'C' && after_next == 'H') return "SSS";
  if (curr == 'P' && next == 'H') return "FF";
  if (curr == 'H' && (!ny_vowel(prev) || !ny_vowel(next))) {
    scratch = prev;
    return std::string_view(&scratch, 1);
  }
  if (curr == 'W' && ny_vowel(prev)) {
    scratch = prev;
    return std::string_view(&scratch, 1);
  }
  scratch = curr;
  return std::string_view(&scratch, 1);
}

}  // namespace

std::string nysiis(std::string_view word) {
  constexpr std::size_t kTrueLength = 6;
  std::string s = letters_upper(word);
  if (s.empty()) return s;

  replace_prefix(s, "MAC", "MCC");
  replace_prefix(s, "KN", "NN");
  replace_prefix(s, "K", "C");
  if (s.starts_with("PH") || s.starts_with("PF")) s.replace(0, 2, "FF");
  replace_prefix(s, "SCH", "SSS");
  if (s.ends_with("EE") || s.ends_with("IE")) s.replace(s.size() - 2, 2, "Y");
  for (std::string_view suffix : {"DT", "RT", "RD", "NT", "ND"}) {
    if (s.ends_with(suffix)) {
      s.replace(s.size() - 2, 2, "D");
      break;
    }
  }

  std::string key(1, s[0]);
  const std::size_t len = s.size();
  for (std::size_t i = 1; i < len; ++i) {
    char next = i < len - 1 ? s[i + 1] : ' ';
    char after_next = i < len - 2 ? s[i + 2] : ' ';
    char scratch = 0;
    std::string_view rep = ny_transcode(s[i - 1], s[i], next, after_next, scratch);
    std::string owned(rep);
    for (std::size_t j = 0; j < owned.size() && i + j < len; ++j) s[i + j] = owned[j];
    if (s[i] != s[i - 1]) key += s[i];
  }

  if (key.size() > 1) {
    char last = key.back();
    if (last == 'S') {
      key.pop_back();
      last = key.back();
    }
    if (key.size() > 2) {
      char last2 = key[key.size() - 2];
      if (last2 == 'A' && last == 'Y') key.erase(key.size() - 2, 1);
    }
    if (last == 'A') key.pop_back();
  }
  if (key.size() > kTrueLength) key.resize(kTrueLength);
  return key;
}

// -- Caverphone -----------------------------------------------------------------

namespace {

void caverphone_common_head(std::string& t) {
  replace_all(t, "cq", "2q");
  replace_all(t, "ci", "si");
  replace_all(t, "ce", "se");
  replace_all(t, "cy", "sy");
  replace_all(t, "tch", "2ch");
  replace_all(t, "c", "k");
  replace_all(t, "q", "k");
  replace_all(t, "x", "k");
  replace_all(t, "v", "f");
  replace_all(t, "dg", "2g");
  replace_all(t, "tio", "sio");
  replace_all(t, "tia", "sia");
  replace_all(t, "d", "t");
  replace_all(t, "ph", "fh");
  replace_all(t, "b", "p");
  replace_all(t, "sh", "s2");
  replace_all(t, "z", "s");
  if (!t.empty() && is_lower_vowel(t[0])) t[0] = 'A';
  vowels_to(t, '3');
}

void caverphone_collapse_runs(std::string& t) {
  collapse_run(t, 's', 'S');
  collapse_run(t, 't', 'T');
  collapse_run(t, 'p', 'P');
  collapse_run(t, 'k', 'K');
  collapse_run(t, 'f', 'F');
  collapse_run(t, 'm', 'M');
  collapse_run(t, 'n', 'N');
}

}  // namespace

std::string caverphone1(std::string_view word) {
  constexpr std::string_view kPad = "111111";
  std::string t = letters_lower(word);
  if (t.empty()) return {};
  replace_prefix(t, "cough", "cou2f");
  replace_prefix(t, "rough", "rou2f");
  replace_prefix(t, "tough", "tou2f");
  replace_prefix(t, "enough", "enou2f");
  replace_prefix(t, "gn", "2n");
  replace_suffix(t, "mb", "m2");
  caverphone_common_head(t);
  replace_all(t, "3gh3", "3kh3");
  replace_all(t, "gh", "22");
  replace_all(t, "g", "k");
  caverphone_collapse_runs(t);
  replace_all(t, "w3", "W3");
  replace_all(t, "wy", "Wy");
  replace_all(t, "wh3", "Wh3");
  replace_all(t, "why", "Why");
  replace_all(t, "w", "2");
  if (!t.empty() && t[0] == 'h') t[0] = 'A';
  replace_all(t, "h", "2");
  replace_all(t, "r3", "R3");
  replace_all(t, "ry", "Ry");
  replace_all(t, "r", "2");
  replace_all(t, "l3", "L3");
  replace_all(t, "ly", "Ly");
  replace_all(t, "l", "2");
  replace_all(t, "j", "y");
  replace_all(t, "y3", "Y3");
  replace_all(t, "y", "2");
  replace_all(t, "2", "");
  replace_all(t, "3", "");
  t += kPad;
  return t.substr(0, kPad.size());
}

std::string caverphone2(std::string_view word) {
  constexpr std::string_view kPad = "1111111111";
  std::string t = letters_lower(word);
  if (t.empty()) return {};
  replace_suffix(t, "e", "");
  replace_prefix(t, "cough", "cou2f");
  replace_prefix(t, "rough", "rou2f");
  replace_prefix(t, "tough", "tou2f");
  replace_prefix(t, "enough", "enou2f");
  replace_prefix(t, "trough", "trou2f");
  replace_prefix(t, "gn", "2n");
  replace_suffix(t, "mb", "m2");
  caverphone_common_head(t);
  replace_all(t, "j", "y");
  replace_prefix(t, "y3", "Y3");
  replace_prefix(t, "y", "A");
  replace_all(t, "y", "3");
  replace_all(t, "3gh3", "3kh3");
  replace_all(t, "gh", "22");
  replace_all(t, "g", "k");
  caverphone_collapse_runs(t);
  replace_all(t, "w3", "W3");
  replace_all(t, "wh3", "Wh3");
  replace_suffix(t, "w", "3");
  replace_all(t, "w", "2");
  if (!t.empty() && t[0] == 'h') t[0] = 'A';
  replace_all(t, "h", "2");
  replace_all(t, "r3", "R3");
  replace_suffix(t, "r", "3");
  replace_all(t, "r", "2");
  replace_all(t, "l3", "L3");
  replace_suffix(t, "l", "3");
  replace_all(t, "l", "2");
  replace_all(t, "2", "");
  replace_suffix(t, "3", "A");
  replace_all(t, "3", "");
  t += kPad;
  return t.substr(0, kPad.size());
}

// -- Cologne phonetic ---------------------------------------------------------------

std::string cologne_phonetic(std::string_view word) {
  constexpr char kIgnore = '-';
  const std::string in = letters_upper(word);
  auto one_of = [](char c, std::string_view set) { return c != '\0' && set.find(c) != std::string_view::npos; };

  std::string out;
  char last_code = kIgnore;
  auto put = [&](char code) {
    if (code != kIgnore && last_code != code && (code != '0' || out.empty())) out += code;
    last_code = code;
  };

  char last_char = kIgnore;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char chr = in[i];
    const char next = i + 1 < in.size() ? in[i + 1] : kIgnore;
    if (one_of(chr, "AEIJOUY")) {
      put('0');
    } else if (chr == 'B' || (chr == 'P' && next != 'H')) {
      put('1');
    } else if ((chr == 'D' || chr == 'T') && !one_of(next, "CSZ")) {
      put('2');
    } else if (one_of(chr, "FPVW")) {
      put('3');
    } else if (one_of(chr, "GKQ")) {
      put('4');
    } else if (chr == 'X' && !one_of(last_char, "CKQ")) {
      put('4');
      put('8');
    } else if (chr == 'S' || chr == 'Z') {
      put('8');
    } else if (chr == 'C') {
      if (out.empty()) {
        put(one_of(next, "AHKLOQRUX") ? '4' : '8');
      } else if (one_of(last_char, "SZ") || !one_of(next, "AHKOQUX")) {
        put('8');
      } else {
        put('4');
      }
    } else if (one_of(chr, "DTX")) {
      put('8');
    } else if (chr == 'R') {
      put('7');
    } else if (chr == 'L') {
      put('5');
    } else if (chr == 'M' || chr == 'N') {
      put('6');
    } else if (chr == 'H') {
      put(kIgnore);
    }
    last_char = chr;
  }
  return out;
}

// -- Match Rating Approach ---------------------------------------------------------

std::string match_rating(std::string_view word) {
  std::string name = letters_upper(word);
  if (name.size() <= 1) return {};

  const char first = name[0];
  std::string stripped;
  for (char c : name) {
    if (!ny_vowel(c)) stripped += c;
  }
  if (ny_vowel(first)) stripped.insert(stripped.begin(), first);

  std::string single = stripped;
  for (char c = 'B'; c <= 'Z'; ++c) {
    if (ny_vowel(c)) continue;
    const char pair[2] = {c, c};
    replace_all(single, std::string_view(pair, 2), std::string_view(pair, 1));
  }
  if (single.size() > 6) single = single.substr(0, 3) + single.substr(single.size() - 3);
  return single;
}

}  // namespace erblock::phonetic
