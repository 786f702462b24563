#pragma once

#include <string>
#include <vector>

#include "redsum/corpus.hpp"
#include "redsum/embeddings.hpp"

namespace redsum {

enum class SelectMethod {
  kGreedy,
  kNaiveMmr,
  kMmrSelect,
  kTrigramBlock,
  kNeusumStep,
};

SelectMethod parse_select_method(const std::string& name);
std::string select_method_name(SelectMethod m);

struct SelectionConfig {
  int budget_words = 200;
  double lambda = 0.6;
  bool with_trace = false;
};

struct TraceSkip {
  size_t index;
  std::string reason;  // "budget" or "trigram:<the blocking trigram>"
};

struct TraceStep {
  size_t picked;
  double score;      // model/importance score of the pick
  double mmr_score;  // selection-rule score of the pick (equals score for greedy)
  std::vector<TraceSkip> skipped;
  std::vector<double> candidate_scores;  // selection-rule score per sentence, -inf if taken
};

struct SelectionResult {
  std::vector<size_t> chosen;               // in selection order
  std::vector<std::string> summary_tokens;  // chosen sentences in document order
  std::string summary_text;
  size_t words = 0;
  std::vector<TraceStep> trace;  // populated when with_trace is set
};

// Descending-score order, lower index on ties; stops at the first sentence
// that would cross the word budget. No sentence is ever truncated.
SelectionResult select_greedy(const std::vector<double>& p, const Document& doc,
                              const SelectionConfig& cfg);

// Unsupervised MMR: importance is cosine similarity to the document vector,
// redundancy the max similarity to already-selected sentences (0 when none).
SelectionResult select_naive_mmr(const Document& doc, const EmbeddingTable& e,
                                 const SelectionConfig& cfg);

// MMR over model scores: argmax of lambda*p_i - (1-lambda)*max_sim, updated
// after every pick.
SelectionResult select_mmr(const std::vector<double>& p, const Document& doc,
                           const EmbeddingTable& e, const SelectionConfig& cfg);

// Descending-score order; candidates sharing a trigram with anything already
// selected are skipped, the budget stops the scan.
SelectionResult select_trigram_block(const std::vector<double>& p, const Document& doc,
                                     const SelectionConfig& cfg);

size_t word_count(const SelectionResult& result);

}  // namespace redsum
