#include "redsum/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "redsum/rng.hpp"

namespace redsum {

namespace {

// ~150 common English function words; tokens are matched after lowercasing.
const std::vector<std::string> kStopwords = {
    "a",       "about",   "above",  "after",   "again",   "against", "all",
    "am",      "an",      "and",    "any",     "are",     "aren",    "as",
    "at",      "be",      "because", "been",   "before",  "being",   "below",
    "between", "both",    "but",    "by",      "can",     "cannot",  "could",
    "did",     "do",      "does",   "doing",   "down",    "during",  "each",
    "few",     "for",     "from",   "further", "had",     "has",     "have",
    "having",  "he",      "her",    "here",    "hers",    "herself", "him",
    "himself", "his",     "how",    "i",       "if",      "in",      "into",
    "is",      "isn",     "it",     "its",     "itself",  "just",    "like",
    "me",      "more",    "most",   "my",      "myself",  "no",      "nor",
    "not",     "now",     "of",     "off",     "on",      "once",    "only",
    "or",      "other",   "ought",  "our",     "ours",    "ourselves", "out",
    "over",    "own",     "same",   "shall",   "she",     "should",  "so",
    "some",    "such",    "than",   "that",    "the",     "their",   "theirs",
    "them",    "themselves", "then", "there",  "these",   "they",    "this",
    "those",   "through", "to",     "too",     "under",   "until",   "up",
    "upon",    "us",      "very",   "was",     "we",      "were",    "what",
    "when",    "where",   "which",  "while",   "who",     "whom",    "why",
    "will",    "with",    "within", "without", "won",     "would",   "you",
    "your",    "yours",   "yourself", "yourselves", "also", "been",  "may",
    "might",   "must",    "one",    "two",     "three",   "however", "thus",
    "via",     "etc",     "ie",     "eg",
};

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set(kStopwords.begin(), kStopwords.end());
  return set;
}

bool has_alnum(const std::string& token) {
  for (unsigned char c : token) {
    if (std::isalnum(c)) return true;
  }
  return false;
}

std::unordered_map<std::string, int> ngram_counts(const std::vector<std::string>& tokens,
                                                  int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

const std::vector<std::string>& stopword_list() { return kStopwords; }

bool is_stopword(const std::string& token) { return stopword_set().count(token) > 0; }

std::vector<std::string> strip_stopwords(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (is_stopword(t) || !has_alnum(t)) continue;
    out.push_back(t);
  }
  return out;
}

double unique_ngram_ratio(const std::vector<std::string>& tokens, int n,
                          bool remove_stopwords) {
  if (n < 1) throw std::invalid_argument("unique_ngram_ratio: n must be >= 1");
  const std::vector<std::string>* source = &tokens;
  std::vector<std::string> filtered;
  if (remove_stopwords) {
    filtered = strip_stopwords(tokens);
    source = &filtered;
  }
  if (static_cast<int>(source->size()) < n) return 100.0;
  auto counts = ngram_counts(*source, n);
  size_t total = source->size() - static_cast<size_t>(n) + 1;
  return 100.0 * static_cast<double>(counts.size()) / static_cast<double>(total);
}

double nid(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2) {
    throw std::invalid_argument("nid: needs at least 2 tokens");
  }
  std::unordered_map<std::string, size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  const double n = static_cast<double>(tokens.size());
  double entropy = 0.0;
  for (const auto& [_, c] : counts) {
    double p = static_cast<double>(c) / n;
    entropy -= p * std::log(p);
  }
  double v = 1.0 - entropy / std::log(n);
  return std::min(1.0, std::max(0.0, v));
}

namespace {

RougeScore make_score(double overlap, double cand_total, double ref_total) {
  RougeScore s;
  s.precision = cand_total > 0 ? overlap / cand_total : 0.0;
  s.recall = ref_total > 0 ? overlap / ref_total : 0.0;
  double pr = s.precision + s.recall;
  s.f1 = pr > 0 ? 2.0 * s.precision * s.recall / pr : 0.0;
  return s;
}

}  // namespace

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n) {
  if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
  auto cand = ngram_counts(candidate, n);
  auto ref = ngram_counts(reference, n);
  double overlap = 0.0, cand_total = 0.0, ref_total = 0.0;
  for (const auto& [k, c] : cand) cand_total += c;
  for (const auto& [k, c] : ref) {
    ref_total += c;
    auto it = cand.find(k);
    if (it != cand.end()) overlap += std::min(c, it->second);
  }
  return make_score(overlap, cand_total, ref_total);
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference) {
  const size_t m = candidate.size(), n = reference.size();
  if (m == 0 || n == 0) return make_score(0, static_cast<double>(m), static_cast<double>(n));
  std::vector<size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (size_t i = 1; i <= m; ++i) {
    for (size_t j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  double lcs = static_cast<double>(prev[n]);
  return make_score(lcs, static_cast<double>(m), static_cast<double>(n));
}

double reward(const std::vector<std::string>& summary,
              const std::vector<std::string>& reference) {
  return (rouge_n(summary, reference, 1).f1 + rouge_n(summary, reference, 2).f1 +
          rouge_l(summary, reference).f1) /
         3.0;
}

double bootstrap_test(const std::vector<double>& per_doc_a,
                      const std::vector<double>& per_doc_b, int iterations,
                      uint64_t seed) {
  if (per_doc_a.size() != per_doc_b.size()) {
    throw std::invalid_argument("bootstrap_test: lists differ in length");
  }
  if (per_doc_a.size() < 2) {
    throw std::invalid_argument("bootstrap_test: needs at least 2 documents");
  }
  if (iterations < 1) throw std::invalid_argument("bootstrap_test: iterations must be >= 1");

  const size_t n = per_doc_a.size();
  Rng rng(seed);
  int not_better = 0;
  for (int it = 0; it < iterations; ++it) {
    double sum_a = 0.0, sum_b = 0.0;
    for (size_t k = 0; k < n; ++k) {
      size_t idx = rng.below(n);
      sum_a += per_doc_a[idx];
      sum_b += per_doc_b[idx];
    }
    if (sum_a <= sum_b) ++not_better;
  }
  return static_cast<double>(not_better) / static_cast<double>(iterations);
}

}  // namespace redsum
