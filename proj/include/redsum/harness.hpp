#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redsum/corpus.hpp"
#include "redsum/embeddings.hpp"
#include "redsum/metrics.hpp"
#include "redsum/scorers.hpp"
#include "redsum/selectors.hpp"

namespace redsum {

// Fans fn(0..n-1) out over a small thread pool. Callers keep results in
// index-addressed slots, so aggregation order never depends on the worker
// count.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn);

// One selection method applied to a whole corpus; results align with the
// document list.
struct MethodRun {
  std::string method;
  double lambda = 0.6;
  std::vector<SelectionResult> results;
};

// --- dataset statistics ------------------------------------------------------

struct CorpusStats {
  size_t documents = 0;
  double words_per_doc = 0.0;
  double words_per_sentence = 0.0;
  double mean_nid = 0.0;
  std::array<double, 3> unique_ratio{};  // 1/2/3-grams
};

CorpusStats corpus_stats(const std::vector<Document>& docs, bool remove_stopwords,
                         int workers);

// --- evaluation ---------------------------------------------------------------

struct DocEval {
  std::string doc_id;
  RougeScore r1, r2, rl;
  double uniq1 = 0, uniq2 = 0, uniq3 = 0;
  std::optional<double> nid;  // absent for summaries under two tokens
  size_t words = 0;
  size_t selected = 0;
};

struct MethodEval {
  std::string method;
  std::vector<DocEval> rows;
  RougeScore r1_mean, r2_mean, rl_mean;
  double uniq1_mean = 0, uniq2_mean = 0, uniq3_mean = 0;
  double nid_mean = 0;
  size_t nid_count = 0;
  // Fraction of bootstrap resamples where this method fails to beat the
  // baseline ("beat" = higher ROUGE/uniqueness, lower NID). Small means
  // significantly better.
  std::map<std::string, double> p_not_better;
};

struct EvalReport {
  std::string baseline;
  int bootstrap_iterations = 10000;
  uint64_t seed = 0;
  std::vector<MethodEval> methods;
};

EvalReport evaluate_methods(const std::vector<Document>& docs,
                            const std::vector<MethodRun>& runs, const std::string& baseline,
                            int bootstrap_iterations, uint64_t seed, int workers);
void write_eval_csv(const EvalReport& report, const std::string& path);
void write_eval_json(const EvalReport& report, const std::string& path);

// --- sweeps -------------------------------------------------------------------

struct SweepRow {
  double x = 0;  // lambda or word budget
  double r1 = 0, r2 = 0, rl = 0;  // mean F1
  double uniq1 = 0, uniq2 = 0, uniq3 = 0;
  double nid = 0;
};

std::vector<SweepRow> sweep_lambda(const std::vector<Document>& docs,
                                   const std::vector<std::vector<double>>& scores,
                                   const EmbeddingTable& e, const std::vector<double>& grid,
                                   int budget_words, int workers);
std::vector<SweepRow> sweep_budget(const std::vector<Document>& docs,
                                   const std::vector<std::vector<double>>& scores,
                                   const EmbeddingTable& e, double lambda,
                                   const std::vector<int>& budgets, int workers);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& x_name,
                     const std::string& path);

// --- conditioned analysis -------------------------------------------------------

enum class BinKind { kRedundancy, kDocLength };

struct BinRow {
  double lo = 0, hi = 0;
  size_t count = 0;
  std::map<std::string, double> mean_r1;     // per method
  std::map<std::string, double> mean_uniq1;  // per method
};

// Bins documents by source unique-unigram ratio (stopwords removed) or by
// sentence count, then averages summary quality per method inside each bin.
std::vector<BinRow> analyze_bins(const std::vector<Document>& docs,
                                 const std::vector<MethodRun>& runs, BinKind kind,
                                 double bin_width, int workers);
void write_bins_csv(const std::vector<BinRow>& rows, const std::string& path);

// --- selection overlap ----------------------------------------------------------

struct OverlapReport {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> overlap;  // % of row method's picks shared with column
  std::vector<size_t> total_selected;
  std::vector<double> words_per_selected;
};

OverlapReport selection_overlap(const std::vector<MethodRun>& runs);
void write_overlap_csv(const OverlapReport& report, const std::string& path);

// --- relative position -----------------------------------------------------------

struct PositionHistogram {
  std::vector<std::string> methods;
  std::vector<std::array<double, 10>> buckets;  // normalized per method
};

PositionHistogram position_histogram(const std::vector<Document>& docs,
                                     const std::vector<MethodRun>& runs);
void write_position_csv(const PositionHistogram& hist, const std::string& path);

// --- selections io ----------------------------------------------------------------

void write_selections(const MethodRun& run, const std::vector<Document>& docs,
                      const std::string& path, bool with_trace);
MethodRun read_selections(const std::string& path, const std::vector<Document>& docs);

// Builds the table a checkpoint was trained with: hashed vectors over the
// corpus vocabulary, or a file load.
EmbeddingTable build_embeddings(const EmbeddingSpec& spec, const std::vector<Document>& docs);

// Shortest exact decimal form (%.17g); reports round-trip bit-identically.
std::string format_double(double v);

// Minimal standalone SVG line chart; one polyline per series.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::vector<double>& xs,
                      const std::vector<std::pair<std::string, std::vector<double>>>& series);

}  // namespace redsum
