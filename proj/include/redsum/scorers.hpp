#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redsum/autodiff.hpp"
#include "redsum/corpus.hpp"
#include "redsum/embeddings.hpp"

namespace redsum {

// Where the token vectors behind a checkpoint come from, so scoring at
// selection time can rebuild the same table.
struct EmbeddingSpec {
  std::string kind = "hashed";  // "hashed" | "file"
  size_t dim = 32;
  uint64_t seed = 1;
  std::string path;  // for kind == "file"
};

struct ModelParams {
  std::string arch;  // "basic" | "sr" | "neusum"
  size_t dim = 0;
  size_t hidden = 0;
  size_t pos_dim = 0;  // sr only
  bool trained = false;
  uint64_t init_seed = 0;
  EmbeddingSpec embedding;
  std::map<std::string, Tensor> weights;  // ordered; iteration order is the update order

  std::vector<Tensor> tensors() const;
  void save(const std::string& path) const;
  static ModelParams load(const std::string& path);
};

void sgd_step(ModelParams& params, double lr);

struct TrainConfig {
  double beta = 0.3;   // CE weight in the redundancy-penalized objective
  double tau = 200.0;  // target-distribution sharpness for the stepwise decoder
  double lr = 0.1;
  int epochs = 10;
  uint64_t seed = 13;
  size_t hidden_size = 32;
  int budget_words = 200;  // stepwise decoder stopping rule
};

// Weight initialization: uniform(-0.1, 0.1), seeded.
ModelParams init_basic(size_t dim, size_t hidden, uint64_t seed);
ModelParams init_sr(size_t dim, uint64_t seed);
ModelParams init_neusum(size_t dim, size_t hidden, uint64_t seed);

// Per-sentence confidence in (0,1): two-layer feed-forward net over the
// concatenation [sentence mean; document mean], sigmoid output. Order-invariant.
Tensor score_basic(const Document& doc, const ModelParams& params, const EmbeddingTable& e);

// Sequential decoder scoring content, salience, novelty against the running
// probability-weighted summary, and position.
Tensor score_sr(const Document& doc, const ModelParams& params, const EmbeddingTable& e);

// --- losses -----------------------------------------------------------------

Tensor loss_ce(const Tensor& p, const std::vector<int>& labels);

// Expected summary redundancy: sum_ij p_i p_j sim(i,j). Sim must be symmetric
// with a zero diagonal.
Tensor loss_rd(const Tensor& p, const std::vector<std::vector<double>>& sim);

// beta * CE + (1 - beta) * redundancy.
Tensor loss_rdloss_total(const Tensor& p, const std::vector<int>& labels,
                         const std::vector<std::vector<double>>& sim, double beta);

using GainDistribution = std::vector<double>;

// ROUGE-1 F1 gain of each sentence against the partial extract.
std::vector<double> stepwise_gains(const Document& doc, const std::vector<size_t>& partial);
// Min-max normalized gains pushed through a tau-scaled softmax (uniform when
// all gains are equal).
GainDistribution neusum_target(const Document& doc, const std::vector<size_t>& partial,
                               double tau);
GainDistribution target_from_gains(const std::vector<double>& gains, double tau);

// KL(pred || target) with 0*log(0/q) = 0.
Tensor loss_neusum(const Tensor& pred, const GainDistribution& target);

// --- stepwise decoder --------------------------------------------------------

struct NeusumState {
  Tensor hidden;
  std::vector<Tensor> reprs;  // constant sentence representations
  std::vector<char> selected;
};

NeusumState neusum_init(const Document& doc, const ModelParams& params,
                        const EmbeddingTable& e);

// Distribution over sentences for the current step; selected ones are masked
// to -inf before the softmax.
Tensor neusum_scores(const NeusumState& state, const ModelParams& params);

// Feeds the chosen sentence to the recurrent cell.
NeusumState neusum_advance(const NeusumState& state, size_t pick, const ModelParams& params);

struct NeusumStep {
  Tensor dist;
  size_t picked;  // argmax of dist, lower index on ties
  NeusumState next;
};

// One decoding step: score everything, pick the best, feed it forward.
NeusumStep score_neusum_step(const NeusumState& state, const ModelParams& params);

// Stepwise selection under the word budget (greedy argmax per step).
std::vector<size_t> neusum_select(const Document& doc, const ModelParams& params,
                                  const EmbeddingTable& e, int budget_words);

// --- training ----------------------------------------------------------------

enum class Objective { kCe, kRdloss, kSr, kNeusum };
Objective parse_objective(const std::string& name);
std::string objective_name(Objective o);

struct TrainLogRow {
  int epoch;
  double loss;
  double loss_ce;
  double loss_rd;
};

ModelParams train_scorer(const std::vector<Document>& docs, const EmbeddingTable& e,
                         Objective objective, const TrainConfig& cfg,
                         std::vector<TrainLogRow>* log = nullptr);

}  // namespace redsum
