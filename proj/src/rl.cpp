#include "redsum/rl.hpp"

#include <iostream>
#include <numeric>
#include <stdexcept>

#include "redsum/metrics.hpp"
#include "redsum/rng.hpp"
#include "redsum/selectors.hpp"

namespace redsum {

Episode make_episode(const Document& doc, const std::vector<double>& p,
                     const EmbeddingTable& e, const RlConfig& cfg) {
  if (p.size() != doc.sentences.size()) {
    throw std::invalid_argument("make_episode: scores do not align with document");
  }
  SelectionConfig sel;
  sel.budget_words = cfg.budget_words;
  sel.lambda = cfg.lambda;

  SelectionResult mmr = select_mmr(p, doc, e, sel);
  SelectionResult base = select_greedy(p, doc, sel);

  Episode ep;
  ep.mmr_labels.assign(doc.sentences.size(), 0);
  ep.base_labels.assign(doc.sentences.size(), 0);
  for (size_t idx : mmr.chosen) ep.mmr_labels[idx] = 1;
  for (size_t idx : base.chosen) ep.base_labels[idx] = 1;

  const auto reference = doc.abstract_tokens();
  ep.reward_mmr = reward(mmr.summary_tokens, reference);
  ep.reward_base = reward(base.summary_tokens, reference);
  return ep;
}

Tensor loss_rl(const Tensor& p, const Episode& ep, bool selected_only) {
  const size_t n = p.size();
  if (ep.mmr_labels.size() != n) {
    throw std::invalid_argument("loss_rl: episode does not align with scores");
  }
  double gap = ep.reward_mmr - ep.reward_base;

  std::vector<double> y(ep.mmr_labels.begin(), ep.mmr_labels.end());
  Tensor yt = Tensor::vector(y);
  Tensor log_q;
  if (selected_only) {
    log_q = mul(yt, log(p));
  } else {
    Tensor ones = Tensor::vector(std::vector<double>(n, 1.0));
    Tensor q = add(mul(yt, p), mul(sub(ones, yt), sub(ones, p)));
    log_q = log(q);
  }
  return scale(sum(log_q), -gap);
}

Tensor loss_mixed(const Tensor& p, const std::vector<int>& labels, const Episode& ep,
                  double gamma, bool selected_only) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("loss_mixed: gamma not in [0,1]");
  return add(scale(loss_rl(p, ep, selected_only), gamma),
             scale(loss_ce(p, labels), 1.0 - gamma));
}

ModelParams finetune(ModelParams model, const std::vector<Document>& docs,
                     const EmbeddingTable& e, const RlConfig& cfg,
                     std::vector<FinetuneLogRow>* log) {
  if (model.arch != "basic") {
    throw std::invalid_argument("finetune: expected a basic scorer checkpoint");
  }
  if (docs.empty()) throw std::invalid_argument("finetune: empty corpus");
  if (!model.trained) {
    std::cerr << "warning: fine-tuning a model that was never pretrained\n";
  }

  Rng shuffler(cfg.seed ^ 0xf17eULL);
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(order);
    double sum_mmr = 0.0, sum_base = 0.0, sum_loss = 0.0;
    for (size_t idx : order) {
      const Document& doc = docs[idx];
      if (!doc.labels) {
        throw std::invalid_argument("finetune: document " + doc.id +
                                    " has no labels; run the oracle first");
      }
      Tape::active().clear();
      Tensor p = score_basic(doc, model, e);
      Episode ep = make_episode(doc, p.values(), e, cfg);
      Tensor loss = loss_mixed(p, *doc.labels, ep, cfg.gamma, cfg.selected_only);
      sum_loss += loss.item();
      sum_mmr += ep.reward_mmr;
      sum_base += ep.reward_base;
      backward(loss);
      sgd_step(model, cfg.lr);
    }
    Tape::active().clear();
    if (log) {
      double n = static_cast<double>(docs.size());
      log->push_back({epoch + 1, sum_mmr / n, sum_base / n, sum_loss / n});
    }
  }
  return model;
}

}  // namespace redsum
