#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace erblock {

double jaro(std::string_view s1, std::string_view s2);

/// Jaro-Winkler with prefix scale 0.1 over at most 4 leading characters,
/// boosted only when the Jaro similarity exceeds 0.7.
double jaro_winkler(std::string_view s1, std::string_view s2);

/// Document frequencies over a corpus of token bags. IDF is smoothed as
/// ln(1 + N/df) so tokens present in every document keep a positive weight.
class TfIdfCorpus {
 public:
  TfIdfCorpus() = default;

  void add_document(const std::vector<std::string>& tokens);
  /// Adds the statistics of another corpus (documents are disjoint).
  void merge(const TfIdfCorpus& other);

  std::size_t documents() const { return documents_; }
  double idf(const std::string& token) const;

  /// L2-normalised tf-idf vector of a token bag, sorted by token.
  std::vector<std::pair<std::string, double>> weigh(const std::vector<std::string>& tokens) const;

 private:
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

/// Soft-TFIDF with a Jaro-Winkler secondary similarity. Both strings are
/// tokenised with the blocking tokenizer; `corpus` supplies the IDF statistics
/// (when null, the two strings themselves form the corpus). Result in [0,1].
double soft_tfidf(std::string_view s1, std::string_view s2, double theta, const TfIdfCorpus* corpus = nullptr);

/// Token-vector form of soft_tfidf used when the caller already tokenised.
double soft_tfidf_tokens(const std::vector<std::string>& t1, const std::vector<std::string>& t2, double theta,
                         const TfIdfCorpus& corpus);

/// Plain tf-idf cosine of two token bags.
double tfidf_cosine(const std::vector<std::string>& t1, const std::vector<std::string>& t2, const TfIdfCorpus& corpus);

}  // namespace erblock
