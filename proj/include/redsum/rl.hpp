#pragma once

#include <cstdint>
#include <vector>

#include "redsum/autodiff.hpp"
#include "redsum/corpus.hpp"
#include "redsum/embeddings.hpp"
#include "redsum/scorers.hpp"

namespace redsum {

struct RlConfig {
  double gamma = 0.99;  // weight of the policy-gradient term
  double lambda = 0.6;
  double lr = 1e-6;
  int epochs = 1;
  uint64_t seed = 13;
  int budget_words = 200;
  // When set, the log-probability sum runs over selected sentences only
  // instead of the probability assigned to every sentence's label.
  bool selected_only = false;
};

// One self-critical episode: the MMR selection against the plain greedy
// baseline, each rewarded by mean ROUGE-1/2/L F1 vs. the abstract.
struct Episode {
  std::vector<int> mmr_labels;   // 1 where MMR selected
  std::vector<int> base_labels;  // 1 where greedy selected
  double reward_mmr = 0.0;
  double reward_base = 0.0;
};

Episode make_episode(const Document& doc, const std::vector<double>& p,
                     const EmbeddingTable& e, const RlConfig& cfg);

// -(r_mmr - r_base) * sum_i log q_i with the reward gap held constant;
// q_i = p_i where selected, 1 - p_i otherwise (or p_i over selected only).
Tensor loss_rl(const Tensor& p, const Episode& ep, bool selected_only = false);

// gamma * policy-gradient loss + (1 - gamma) * cross entropy.
Tensor loss_mixed(const Tensor& p, const std::vector<int>& labels, const Episode& ep,
                  double gamma, bool selected_only = false);

struct FinetuneLogRow {
  int epoch;
  double mean_reward_mmr;
  double mean_reward_base;
  double mean_loss;
};

// Self-critical fine-tuning of a pretrained basic scorer. Documents are
// visited in a seeded shuffled order each epoch.
ModelParams finetune(ModelParams model, const std::vector<Document>& docs,
                     const EmbeddingTable& e, const RlConfig& cfg,
                     std::vector<FinetuneLogRow>* log = nullptr);

}  // namespace redsum
