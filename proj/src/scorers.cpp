#include "redsum/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "redsum/metrics.hpp"
#include "redsum/rng.hpp"

namespace redsum {

using nlohmann::json;

namespace {

constexpr size_t kAbsPositions = 50;
constexpr size_t kRelPositions = 10;
constexpr size_t kPosDim = 8;
constexpr double kMaskValue = -1e30;

Tensor init_tensor(Rng& rng, std::vector<size_t> shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  std::vector<double> values(n);
  for (double& v : values) v = rng.uniform(-0.1, 0.1);
  return Tensor::param(std::move(values), std::move(shape));
}

const Tensor& weight(const ModelParams& params, const std::string& name) {
  auto it = params.weights.find(name);
  if (it == params.weights.end()) {
    throw std::runtime_error("model has no weight \"" + name + "\"");
  }
  return it->second;
}

void check_dims(const ModelParams& params, const EmbeddingTable& e, const char* op) {
  if (params.dim != e.dim()) {
    throw std::invalid_argument(std::string(op) + ": model dim " + std::to_string(params.dim) +
                                " does not match embedding dim " + std::to_string(e.dim()));
  }
}

}  // namespace

std::vector<Tensor> ModelParams::tensors() const {
  std::vector<Tensor> out;
  out.reserve(weights.size());
  for (const auto& [_, t] : weights) out.push_back(t);
  return out;
}

void sgd_step(ModelParams& params, double lr) {
  auto tensors = params.tensors();
  sgd_step(tensors, lr);
}

void ModelParams::save(const std::string& path) const {
  json config;
  config["arch"] = arch;
  config["dim"] = dim;
  config["hidden"] = hidden;
  config["pos_dim"] = pos_dim;
  config["trained"] = trained;
  config["init_seed"] = init_seed;
  config["embedding"] = {{"kind", embedding.kind},
                         {"dim", embedding.dim},
                         {"seed", embedding.seed},
                         {"path", embedding.path}};
  json weights_json;
  for (const auto& [name, t] : weights) {
    weights_json[name] = {{"shape", t.shape()}, {"values", t.values()}};
  }
  json j;
  j["config"] = std::move(config);
  j["params"] = std::move(weights_json);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("ModelParams::save: cannot open " + path);
  out << j.dump(2) << '\n';
}

ModelParams ModelParams::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ModelParams::load: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("ModelParams::load: " + path + ": " + e.what());
  }

  ModelParams params;
  const json& config = j.at("config");
  params.arch = config.at("arch").get<std::string>();
  params.dim = config.at("dim").get<size_t>();
  params.hidden = config.at("hidden").get<size_t>();
  params.pos_dim = config.value("pos_dim", size_t{0});
  params.trained = config.value("trained", false);
  params.init_seed = config.value("init_seed", uint64_t{0});
  if (config.contains("embedding")) {
    const json& emb = config["embedding"];
    params.embedding.kind = emb.value("kind", std::string("hashed"));
    params.embedding.dim = emb.value("dim", size_t{0});
    params.embedding.seed = emb.value("seed", uint64_t{0});
    params.embedding.path = emb.value("path", std::string());
  }
  for (const auto& [name, entry] : j.at("params").items()) {
    auto shape = entry.at("shape").get<std::vector<size_t>>();
    auto values = entry.at("values").get<std::vector<double>>();
    params.weights[name] = Tensor::param(std::move(values), std::move(shape));
  }
  return params;
}

// ---------------------------------------------------------------------------
// Architectures

ModelParams init_basic(size_t dim, size_t hidden, uint64_t seed) {
  if (dim == 0 || hidden == 0) throw std::invalid_argument("init_basic: zero dimension");
  ModelParams p;
  p.arch = "basic";
  p.dim = dim;
  p.hidden = hidden;
  p.init_seed = seed;
  Rng rng(seed);
  p.weights["w1"] = init_tensor(rng, {hidden, 2 * dim});
  p.weights["b1"] = init_tensor(rng, {hidden});
  p.weights["w2"] = init_tensor(rng, {hidden});
  p.weights["b2"] = init_tensor(rng, {1});
  return p;
}

ModelParams init_sr(size_t dim, uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("init_sr: zero dimension");
  ModelParams p;
  p.arch = "sr";
  p.dim = dim;
  p.pos_dim = kPosDim;
  p.init_seed = seed;
  Rng rng(seed);
  p.weights["W_c"] = init_tensor(rng, {dim});
  p.weights["W_s"] = init_tensor(rng, {dim, dim});
  p.weights["W_r"] = init_tensor(rng, {dim, dim});
  p.weights["W_ap"] = init_tensor(rng, {kPosDim});
  p.weights["W_rp"] = init_tensor(rng, {kPosDim});
  p.weights["b"] = init_tensor(rng, {1});
  p.weights["P_abs"] = init_tensor(rng, {kAbsPositions, kPosDim});
  p.weights["P_rel"] = init_tensor(rng, {kRelPositions, kPosDim});
  return p;
}

ModelParams init_neusum(size_t dim, size_t hidden, uint64_t seed) {
  if (dim == 0 || hidden == 0) throw std::invalid_argument("init_neusum: zero dimension");
  ModelParams p;
  p.arch = "neusum";
  p.dim = dim;
  p.hidden = hidden;
  p.init_seed = seed;
  Rng rng(seed);
  p.weights["W_init"] = init_tensor(rng, {hidden, dim});
  p.weights["b_init"] = init_tensor(rng, {hidden});
  p.weights["W_z"] = init_tensor(rng, {hidden, dim});
  p.weights["U_z"] = init_tensor(rng, {hidden, hidden});
  p.weights["b_z"] = init_tensor(rng, {hidden});
  p.weights["W_h"] = init_tensor(rng, {hidden, dim});
  p.weights["U_h"] = init_tensor(rng, {hidden, hidden});
  p.weights["b_h"] = init_tensor(rng, {hidden});
  p.weights["W_q"] = init_tensor(rng, {hidden, hidden});
  p.weights["W_e"] = init_tensor(rng, {hidden, dim});
  p.weights["b_a"] = init_tensor(rng, {hidden});
  p.weights["v"] = init_tensor(rng, {hidden});
  return p;
}

Tensor score_basic(const Document& doc, const ModelParams& params, const EmbeddingTable& e) {
  if (params.arch != "basic") throw std::invalid_argument("score_basic: wrong architecture");
  check_dims(params, e, "score_basic");
  const Tensor& w1 = weight(params, "w1");
  const Tensor& b1 = weight(params, "b1");
  const Tensor& w2 = weight(params, "w2");
  const Tensor& b2 = weight(params, "b2");

  Tensor doc_vec = Tensor::vector(document_repr(doc, e));
  std::vector<Tensor> scores;
  scores.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    Tensor x = concat({Tensor::vector(sentence_repr(s, e)), doc_vec});
    Tensor h = tanh(add(matmul(w1, x), b1));
    Tensor z = add(dot(w2, h), b2);
    scores.push_back(sigmoid(z));
  }
  return concat(scores);
}

Tensor score_sr(const Document& doc, const ModelParams& params, const EmbeddingTable& e) {
  if (params.arch != "sr") throw std::invalid_argument("score_sr: wrong architecture");
  check_dims(params, e, "score_sr");
  const Tensor& content_w = weight(params, "W_c");
  const Tensor& salience_w = weight(params, "W_s");
  const Tensor& novelty_w = weight(params, "W_r");
  const Tensor& abs_w = weight(params, "W_ap");
  const Tensor& rel_w = weight(params, "W_rp");
  const Tensor& bias = weight(params, "b");
  const Tensor& abs_table = weight(params, "P_abs");
  const Tensor& rel_table = weight(params, "P_rel");

  const size_t n = doc.sentences.size();
  Tensor doc_vec = Tensor::vector(document_repr(doc, e));
  Tensor salience_dir = matmul(salience_w, doc_vec);  // shared across sentences

  Tensor summ = Tensor::zeros({params.dim});
  std::vector<Tensor> scores;
  scores.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Tensor h = Tensor::vector(sentence_repr(doc.sentences[i], e));
    size_t abs_bucket = std::min(i, kAbsPositions - 1);
    size_t rel_bucket = std::min(i * kRelPositions / std::max<size_t>(n, 1), kRelPositions - 1);

    Tensor z = dot(content_w, h);
    z = add(z, dot(h, salience_dir));
    z = sub(z, dot(h, matmul(novelty_w, tanh(summ))));
    z = add(z, dot(abs_w, row(abs_table, abs_bucket)));
    z = add(z, dot(rel_w, row(rel_table, rel_bucket)));
    z = add(z, bias);

    Tensor p = sigmoid(z);
    summ = add(summ, mul(h, p));  // probability-weighted running summary
    scores.push_back(p);
  }
  return concat(scores);
}

// ---------------------------------------------------------------------------
// Losses

Tensor loss_ce(const Tensor& p, const std::vector<int>& labels) {
  if (p.size() != labels.size()) {
    throw std::invalid_argument("loss_ce: " + std::to_string(p.size()) + " scores vs " +
                                std::to_string(labels.size()) + " labels");
  }
  std::vector<double> y(labels.begin(), labels.end());
  Tensor yt = Tensor::vector(y);
  Tensor ones = Tensor::vector(std::vector<double>(labels.size(), 1.0));
  Tensor term = add(mul(yt, log(p)), mul(sub(ones, yt), log(sub(ones, p))));
  return neg(sum(term));
}

Tensor loss_rd(const Tensor& p, const std::vector<std::vector<double>>& sim) {
  const size_t n = p.size();
  if (sim.size() != n) {
    throw std::invalid_argument("loss_rd: similarity matrix does not match score length");
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (size_t i = 0; i < n; ++i) {
    if (sim[i].size() != n) throw std::invalid_argument("loss_rd: similarity matrix not square");
    if (sim[i][i] != 0.0) {
      throw std::invalid_argument("loss_rd: Sim(s_i, s_i) must be 0 (row " + std::to_string(i) +
                                  ")");
    }
    for (size_t j = 0; j < n; ++j) {
      if (std::abs(sim[i][j] - sim[j][i]) > 1e-9) {
        throw std::invalid_argument("loss_rd: similarity matrix must be symmetric");
      }
      flat.push_back(sim[i][j]);
    }
  }
  Tensor s = Tensor::constant(std::move(flat), {n, n});
  return dot(p, matmul(s, p));
}

Tensor loss_rdloss_total(const Tensor& p, const std::vector<int>& labels,
                         const std::vector<std::vector<double>>& sim, double beta) {
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("loss_rdloss_total: beta not in [0,1]");
  return add(scale(loss_ce(p, labels), beta), scale(loss_rd(p, sim), 1.0 - beta));
}

std::vector<double> stepwise_gains(const Document& doc, const std::vector<size_t>& partial) {
  const size_t n = doc.sentences.size();
  const auto reference = doc.abstract_tokens();
  std::vector<char> in_partial(n, 0);
  for (size_t idx : partial) {
    if (idx >= n) throw std::out_of_range("stepwise_gains: partial index out of range");
    in_partial[idx] = 1;
  }

  auto extract_tokens = [&](size_t extra) {
    std::vector<std::string> toks;
    for (size_t i = 0; i < n; ++i) {
      if (!in_partial[i] && i != extra) continue;
      const auto& t = doc.sentences[i].tokens;
      toks.insert(toks.end(), t.begin(), t.end());
    }
    return toks;
  };

  double base = rouge_n(extract_tokens(n), reference, 1).f1;
  std::vector<double> gains(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (in_partial[i]) continue;  // re-adding a selected sentence changes nothing
    gains[i] = rouge_n(extract_tokens(i), reference, 1).f1 - base;
  }
  return gains;
}

GainDistribution target_from_gains(const std::vector<double>& gains, double tau) {
  if (gains.empty()) throw std::invalid_argument("target_from_gains: no gains");
  double lo = *std::min_element(gains.begin(), gains.end());
  double hi = *std::max_element(gains.begin(), gains.end());
  const size_t n = gains.size();
  std::vector<double> q(n);
  if (hi - lo <= 0.0) {
    std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(n));
    return q;
  }
  double z = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double norm = (gains[i] - lo) / (hi - lo);
    q[i] = std::exp(tau * norm - tau);  // max-subtracted: tau * 1 is the peak
    z += q[i];
  }
  for (double& v : q) v /= z;
  return q;
}

GainDistribution neusum_target(const Document& doc, const std::vector<size_t>& partial,
                               double tau) {
  return target_from_gains(stepwise_gains(doc, partial), tau);
}

Tensor loss_neusum(const Tensor& pred, const GainDistribution& target) {
  const size_t n = pred.size();
  if (target.size() != n) {
    throw std::invalid_argument("loss_neusum: prediction and target lengths differ");
  }
  for (size_t i = 0; i < n; ++i) {
    if (target[i] <= 0.0 && pred.values()[i] > 0.0) {
      throw std::invalid_argument("loss_neusum: target has zero mass at index " +
                                  std::to_string(i) + " where prediction is positive");
    }
  }
  std::vector<double> log_q(n);
  for (size_t i = 0; i < n; ++i) log_q[i] = std::log(std::max(target[i], 1e-12));
  Tensor term = mul(pred, sub(log(pred), Tensor::vector(std::move(log_q))));
  return sum(term);
}

// ---------------------------------------------------------------------------
// Stepwise decoder

NeusumState neusum_init(const Document& doc, const ModelParams& params,
                        const EmbeddingTable& e) {
  if (params.arch != "neusum") throw std::invalid_argument("neusum_init: wrong architecture");
  check_dims(params, e, "neusum_init");
  NeusumState state;
  state.reprs.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    state.reprs.push_back(Tensor::vector(sentence_repr(s, e)));
  }
  Tensor doc_vec = Tensor::vector(document_repr(doc, e));
  state.hidden = tanh(add(matmul(weight(params, "W_init"), doc_vec), weight(params, "b_init")));
  state.selected.assign(doc.sentences.size(), 0);
  return state;
}

Tensor neusum_scores(const NeusumState& state, const ModelParams& params) {
  const Tensor& query_w = weight(params, "W_q");
  const Tensor& content_w = weight(params, "W_e");
  const Tensor& att_b = weight(params, "b_a");
  const Tensor& v = weight(params, "v");

  Tensor query = matmul(query_w, state.hidden);  // shared across sentences
  const size_t n = state.reprs.size();
  std::vector<Tensor> logits;
  logits.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Tensor hidden = tanh(add(add(query, matmul(content_w, state.reprs[i])), att_b));
    logits.push_back(dot(v, hidden));
  }
  std::vector<double> mask(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (state.selected[i]) mask[i] = kMaskValue;
  }
  return softmax(add(concat(logits), Tensor::vector(std::move(mask))));
}

NeusumState neusum_advance(const NeusumState& state, size_t pick, const ModelParams& params) {
  if (pick >= state.reprs.size()) throw std::out_of_range("neusum_advance: pick out of range");
  const Tensor& x = state.reprs[pick];
  const Tensor& s = state.hidden;
  Tensor gate = sigmoid(
      add(add(matmul(weight(params, "W_z"), x), matmul(weight(params, "U_z"), s)),
          weight(params, "b_z")));
  Tensor cand = tanh(
      add(add(matmul(weight(params, "W_h"), x), matmul(weight(params, "U_h"), s)),
          weight(params, "b_h")));
  Tensor ones = Tensor::vector(std::vector<double>(params.hidden, 1.0));

  NeusumState next;
  next.hidden = add(mul(sub(ones, gate), s), mul(gate, cand));
  next.reprs = state.reprs;
  next.selected = state.selected;
  next.selected[pick] = 1;
  return next;
}

NeusumStep score_neusum_step(const NeusumState& state, const ModelParams& params) {
  if (std::all_of(state.selected.begin(), state.selected.end(), [](char c) { return c != 0; })) {
    throw std::logic_error("score_neusum_step: every sentence is already selected");
  }
  NeusumStep step;
  step.dist = neusum_scores(state, params);
  const auto& values = step.dist.values();
  size_t best = state.reprs.size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (state.selected[i]) continue;
    if (best == state.reprs.size() || values[i] > values[best]) best = i;
  }
  step.picked = best;
  step.next = neusum_advance(state, best, params);
  return step;
}

std::vector<size_t> neusum_select(const Document& doc, const ModelParams& params,
                                  const EmbeddingTable& e, int budget_words) {
  NoGradGuard no_grad;
  std::vector<size_t> chosen;
  if (doc.sentences.empty()) return chosen;
  NeusumState state = neusum_init(doc, params, e);
  size_t words = 0;
  const size_t budget = static_cast<size_t>(std::max(budget_words, 0));
  while (chosen.size() < doc.sentences.size()) {
    NeusumStep step = score_neusum_step(state, params);
    size_t len = doc.sentences[step.picked].tokens.size();
    if (words + len > budget) break;
    chosen.push_back(step.picked);
    words += len;
    state = std::move(step.next);
  }
  return chosen;
}

// ---------------------------------------------------------------------------
// Training

Objective parse_objective(const std::string& name) {
  if (name == "ce") return Objective::kCe;
  if (name == "rdloss") return Objective::kRdloss;
  if (name == "sr") return Objective::kSr;
  if (name == "neusum") return Objective::kNeusum;
  throw std::invalid_argument("unknown objective: " + name);
}

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::kCe: return "ce";
    case Objective::kRdloss: return "rdloss";
    case Objective::kSr: return "sr";
    case Objective::kNeusum: return "neusum";
  }
  return "?";
}

namespace {

void require_labels(const Document& doc) {
  if (!doc.labels) {
    throw std::invalid_argument("train_scorer: document " + doc.id +
                                " has no labels; run the oracle first");
  }
}

// One stepwise-decoder pass: teacher-forced steps with tau-sharpened targets.
double train_neusum_doc(const Document& doc, ModelParams& params, const EmbeddingTable& e,
                        const TrainConfig& cfg) {
  if (doc.abstract.empty()) {
    throw std::invalid_argument("train_scorer: document " + doc.id + " has an empty abstract");
  }
  NeusumState state = neusum_init(doc, params, e);
  std::vector<size_t> partial;
  size_t words = 0;
  std::vector<Tensor> step_losses;
  const size_t budget = static_cast<size_t>(std::max(cfg.budget_words, 0));
  while (partial.size() < doc.sentences.size()) {
    auto gains = stepwise_gains(doc, partial);
    size_t teacher = doc.sentences.size();
    for (size_t i = 0; i < gains.size(); ++i) {
      if (state.selected[i]) continue;
      if (teacher == gains.size() || gains[i] > gains[teacher]) teacher = i;
    }
    if (teacher == gains.size() || gains[teacher] <= 0.0) break;
    size_t len = doc.sentences[teacher].tokens.size();
    if (words + len > budget) break;

    Tensor dist = neusum_scores(state, params);
    step_losses.push_back(loss_neusum(dist, target_from_gains(gains, cfg.tau)));
    state = neusum_advance(state, teacher, params);
    partial.push_back(teacher);
    words += len;
  }
  if (step_losses.empty()) return 0.0;
  Tensor total = step_losses.size() == 1 ? step_losses[0] : sum(concat(step_losses));
  double value = total.item();
  backward(total);
  sgd_step(params, cfg.lr);
  Tape::active().clear();
  return value;
}

}  // namespace

ModelParams train_scorer(const std::vector<Document>& docs, const EmbeddingTable& e,
                         Objective objective, const TrainConfig& cfg,
                         std::vector<TrainLogRow>* log) {
  if (docs.empty()) throw std::invalid_argument("train_scorer: empty corpus");
  if (cfg.lr <= 0.0) throw std::invalid_argument("train_scorer: lr must be positive");
  if (cfg.tau <= 0.0) throw std::invalid_argument("train_scorer: tau must be positive");

  ModelParams params;
  switch (objective) {
    case Objective::kCe:
    case Objective::kRdloss:
      params = init_basic(e.dim(), cfg.hidden_size, cfg.seed);
      break;
    case Objective::kSr:
      params = init_sr(e.dim(), cfg.seed);
      break;
    case Objective::kNeusum:
      params = init_neusum(e.dim(), cfg.hidden_size, cfg.seed);
      break;
  }

  // Per-document similarity matrices are fixed; compute them once.
  std::vector<std::vector<std::vector<double>>> sims;
  if (objective == Objective::kRdloss) {
    sims.reserve(docs.size());
    for (const auto& doc : docs) sims.push_back(similarity_matrix(doc, e));
  }

  Rng shuffler(cfg.seed ^ 0x5eedULL);
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffler.shuffle(order);
    double sum_loss = 0.0, sum_ce = 0.0, sum_rd = 0.0;
    for (size_t idx : order) {
      const Document& doc = docs[idx];
      Tape::active().clear();
      switch (objective) {
        case Objective::kCe: {
          require_labels(doc);
          Tensor p = score_basic(doc, params, e);
          Tensor loss = loss_ce(p, *doc.labels);
          sum_loss += loss.item();
          sum_ce += loss.item();
          backward(loss);
          sgd_step(params, cfg.lr);
          break;
        }
        case Objective::kRdloss: {
          require_labels(doc);
          Tensor p = score_basic(doc, params, e);
          Tensor ce = loss_ce(p, *doc.labels);
          Tensor rd = loss_rd(p, sims[idx]);
          Tensor loss = add(scale(ce, cfg.beta), scale(rd, 1.0 - cfg.beta));
          sum_loss += loss.item();
          sum_ce += ce.item();
          sum_rd += rd.item();
          backward(loss);
          sgd_step(params, cfg.lr);
          break;
        }
        case Objective::kSr: {
          require_labels(doc);
          Tensor p = score_sr(doc, params, e);
          Tensor loss = loss_ce(p, *doc.labels);
          sum_loss += loss.item();
          sum_ce += loss.item();
          backward(loss);
          sgd_step(params, cfg.lr);
          break;
        }
        case Objective::kNeusum: {
          sum_loss += train_neusum_doc(doc, params, e, cfg);
          break;
        }
      }
    }
    Tape::active().clear();
    if (log) {
      double n = static_cast<double>(docs.size());
      log->push_back({epoch + 1, sum_loss / n, sum_ce / n, sum_rd / n});
    }
  }

  params.trained = true;
  return params;
}

}  // namespace redsum
