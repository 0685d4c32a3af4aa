#pragma once

#include <string>
#include <string_view>

// Phonetic encoders following the conventions of the Apache Commons Codec
// language package. Each takes a single word; characters outside A-Z are
// ignored where the reference algorithm ignores them. An empty result means
// the word has no encoding.
namespace erblock::phonetic {

std::string soundex(std::string_view word);
std::string refined_soundex(std::string_view word);
/// Classic Metaphone, code length capped at 4.
std::string metaphone(std::string_view word);
/// Primary Double Metaphone code, length capped at 4.
std::string double_metaphone(std::string_view word);
/// Alternate Double Metaphone code, length capped at 4.
std::string double_metaphone_alternate(std::string_view word);
/// NYSIIS in strict mode (code length capped at 6).
std::string nysiis(std::string_view word);
std::string caverphone1(std::string_view word);
std::string caverphone2(std::string_view word);
std::string cologne_phonetic(std::string_view word);
std::string match_rating(std::string_view word);

}  // namespace erblock::phonetic
