#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace redsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Percentage of distinct n-grams among all n-grams; 100 when fewer than n
// tokens. Lower means more redundant.
double unique_ngram_ratio(const std::vector<std::string>& tokens, int n,
                          bool remove_stopwords = false);

// 1 - H(unigrams) / ln(|tokens|). Higher means more redundant. Requires at
// least two tokens.
double nid(const std::vector<std::string>& tokens);

// Clipped n-gram overlap precision/recall/F1.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n);

// Longest-common-subsequence precision/recall/F1.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference);

// Mean of ROUGE-1/2/L F1; the reinforcement reward.
double reward(const std::vector<std::string>& summary,
              const std::vector<std::string>& reference);

// Paired bootstrap: resample document indices with replacement and return the
// fraction of resamples where mean(a) <= mean(b). Deterministic given seed.
double bootstrap_test(const std::vector<double>& per_doc_a,
                      const std::vector<double>& per_doc_b, int iterations,
                      uint64_t seed);

bool is_stopword(const std::string& token);
// Drops stopwords and tokens without any alphanumeric character.
std::vector<std::string> strip_stopwords(const std::vector<std::string>& tokens);
const std::vector<std::string>& stopword_list();

}  // namespace redsum
