#include "erblock/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "erblock/predicates.hpp"

namespace erblock {

double jaro(std::string_view s1, std::string_view s2) {
  if (s1.empty() && s2.empty()) return 1.0;
  if (s1.empty() || s2.empty()) return 0.0;
  const std::size_t window = std::max<std::size_t>(std::max(s1.size(), s2.size()) / 2, 1) - 1;
  std::vector<bool> used1(s1.size(), false), used2(s2.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    std::size_t lo = i > window ? i - window : 0;
    std::size_t hi = std::min(s2.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!used2[j] && s1[i] == s2[j]) {
        used1[i] = used2[j] = true;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;
  std::size_t half_transpositions = 0;
  for (std::size_t i = 0, j = 0; i < s1.size(); ++i) {
    if (!used1[i]) continue;
    while (!used2[j]) ++j;
    if (s1[i] != s2[j]) ++half_transpositions;
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions / 2);
  return (m / s1.size() + m / s2.size() + (m - t) / m) / 3.0;
}

double jaro_winkler(std::string_view s1, std::string_view s2) {
  double j = jaro(s1, s2);
  if (j <= 0.7) return j;
  std::size_t prefix = 0;
  while (prefix < 4 && prefix < s1.size() && prefix < s2.size() && s1[prefix] == s2[prefix]) ++prefix;
  return j + prefix * 0.1 * (1.0 - j);
}

void TfIdfCorpus::add_document(const std::vector<std::string>& tokens) {
  ++documents_;
  std::vector<std::string> distinct = tokens;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (auto& t : distinct) ++df_[t];
}

void TfIdfCorpus::merge(const TfIdfCorpus& other) {
  documents_ += other.documents_;
  for (const auto& [t, n] : other.df_) df_[t] += n;
}

double TfIdfCorpus::idf(const std::string& token) const {
  auto it = df_.find(token);
  // Unseen tokens count as occurring in one document.
  double df = it == df_.end() ? 1.0 : static_cast<double>(it->second);
  double n = std::max<double>(static_cast<double>(documents_), df);
  return std::log(1.0 + n / df);
}

std::vector<std::pair<std::string, double>> TfIdfCorpus::weigh(const std::vector<std::string>& tokens) const {
  std::map<std::string, double> tf;
  for (const auto& t : tokens) tf[t] += 1.0;
  std::vector<std::pair<std::string, double>> out;
  out.reserve(tf.size());
  double norm = 0.0;
  for (auto& [t, f] : tf) {
    double w = f * idf(t);
    out.emplace_back(t, w);
    norm += w * w;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& [t, w] : out) w /= norm;
  }
  return out;
}

double soft_tfidf_tokens(const std::vector<std::string>& t1, const std::vector<std::string>& t2, double theta,
                         const TfIdfCorpus& corpus) {
  if (t1.empty() || t2.empty()) return 0.0;
  auto v1 = corpus.weigh(t1);
  auto v2 = corpus.weigh(t2);
  double score = 0.0;
  for (const auto& [w, weight1] : v1) {
    double best = -1.0;
    double weight2 = 0.0;
    for (const auto& [v, wv] : v2) {
      double sim = w == v ? 1.0 : jaro_winkler(w, v);
      if (sim > best) {
        best = sim;
        weight2 = wv;
      }
    }
    if (best >= theta) score += weight1 * weight2 * best;
  }
  return std::clamp(score, 0.0, 1.0);
}

double soft_tfidf(std::string_view s1, std::string_view s2, double theta, const TfIdfCorpus* corpus) {
  auto t1 = tokenize(s1);
  auto t2 = tokenize(s2);
  if (corpus) return soft_tfidf_tokens(t1, t2, theta, *corpus);
  TfIdfCorpus local;
  local.add_document(t1);
  local.add_document(t2);
  return soft_tfidf_tokens(t1, t2, theta, local);
}

double tfidf_cosine(const std::vector<std::string>& t1, const std::vector<std::string>& t2, const TfIdfCorpus& corpus) {
  auto v1 = corpus.weigh(t1);
  auto v2 = corpus.weigh(t2);
  double dot = 0.0;
  auto i = v1.begin();
  auto j = v2.begin();
  while (i != v1.end() && j != v2.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot, 0.0, 1.0);
}

}  // namespace erblock
