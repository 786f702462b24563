#include "redsum/selectors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace redsum {

SelectMethod parse_select_method(const std::string& name) {
  if (name == "greedy") return SelectMethod::kGreedy;
  if (name == "naive-mmr") return SelectMethod::kNaiveMmr;
  if (name == "mmr-select") return SelectMethod::kMmrSelect;
  if (name == "trigram-block") return SelectMethod::kTrigramBlock;
  if (name == "neusum-step") return SelectMethod::kNeusumStep;
  throw std::invalid_argument("unknown selection method: " + name);
}

std::string select_method_name(SelectMethod m) {
  switch (m) {
    case SelectMethod::kGreedy: return "greedy";
    case SelectMethod::kNaiveMmr: return "naive-mmr";
    case SelectMethod::kMmrSelect: return "mmr-select";
    case SelectMethod::kTrigramBlock: return "trigram-block";
    case SelectMethod::kNeusumStep: return "neusum-step";
  }
  return "?";
}

namespace {

constexpr double kTaken = -std::numeric_limits<double>::infinity();

void check_alignment(const std::vector<double>& p, const Document& doc, const char* op) {
  if (p.size() != doc.sentences.size()) {
    throw std::invalid_argument(std::string(op) + ": got " + std::to_string(p.size()) +
                                " scores for " + std::to_string(doc.sentences.size()) +
                                " sentences");
  }
}

// Assembles summary tokens/text in document order from the chosen set.
void finish(SelectionResult& r, const Document& doc) {
  std::vector<size_t> ordered = r.chosen;
  std::sort(ordered.begin(), ordered.end());
  for (size_t idx : ordered) {
    const Sentence& s = doc.sentences[idx];
    r.summary_tokens.insert(r.summary_tokens.end(), s.tokens.begin(), s.tokens.end());
    if (!r.summary_text.empty()) r.summary_text += ' ';
    r.summary_text += s.raw;
  }
}

std::vector<std::string> sentence_trigrams(const Sentence& s) {
  std::vector<std::string> grams;
  if (s.tokens.size() < 3) return grams;
  for (size_t i = 0; i + 3 <= s.tokens.size(); ++i) {
    grams.push_back(s.tokens[i] + ' ' + s.tokens[i + 1] + ' ' + s.tokens[i + 2]);
  }
  return grams;
}

// Shared loop for the two MMR variants. importance[i] is fixed per sentence;
// the redundancy penalty is recomputed against the growing selection.
SelectionResult mmr_loop(const std::vector<double>& importance,
                         const std::vector<std::vector<double>>& sim, const Document& doc,
                         const SelectionConfig& cfg) {
  const size_t n = doc.sentences.size();
  SelectionResult result;
  std::vector<char> taken(n, 0);
  std::vector<double> max_sim(n, 0.0);  // max over empty selection is 0

  while (result.chosen.size() < n) {
    size_t best = n;
    double best_score = 0.0;
    std::vector<double> candidate_scores;
    if (cfg.with_trace) candidate_scores.assign(n, kTaken);
    for (size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      double score = cfg.lambda * importance[i] - (1.0 - cfg.lambda) * max_sim[i];
      if (cfg.with_trace) candidate_scores[i] = score;
      if (best == n || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    if (best == n) break;

    size_t len = doc.sentences[best].tokens.size();
    if (result.words + len > static_cast<size_t>(std::max(cfg.budget_words, 0))) {
      if (cfg.with_trace) {
        TraceStep step;
        step.picked = n;
        step.score = importance[best];
        step.mmr_score = best_score;
        step.skipped.push_back({best, "budget"});
        step.candidate_scores = std::move(candidate_scores);
        result.trace.push_back(std::move(step));
      }
      break;
    }

    taken[best] = 1;
    result.chosen.push_back(best);
    result.words += len;
    if (cfg.with_trace) {
      TraceStep step;
      step.picked = best;
      step.score = importance[best];
      step.mmr_score = best_score;
      step.candidate_scores = std::move(candidate_scores);
      result.trace.push_back(std::move(step));
    }
    for (size_t i = 0; i < n; ++i) {
      if (!taken[i]) max_sim[i] = std::max(max_sim[i], sim[best][i]);
    }
  }
  finish(result, doc);
  return result;
}

}  // namespace

SelectionResult select_greedy(const std::vector<double>& p, const Document& doc,
                              const SelectionConfig& cfg) {
  check_alignment(p, doc, "select_greedy");
  const size_t n = p.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return p[a] > p[b]; });

  SelectionResult result;
  for (size_t idx : order) {
    size_t len = doc.sentences[idx].tokens.size();
    if (result.words + len > static_cast<size_t>(std::max(cfg.budget_words, 0))) {
      if (cfg.with_trace) {
        TraceStep step;
        step.picked = n;
        step.score = p[idx];
        step.mmr_score = p[idx];
        step.skipped.push_back({idx, "budget"});
        result.trace.push_back(std::move(step));
      }
      break;
    }
    result.chosen.push_back(idx);
    result.words += len;
    if (cfg.with_trace) {
      TraceStep step;
      step.picked = idx;
      step.score = p[idx];
      step.mmr_score = p[idx];
      result.trace.push_back(std::move(step));
    }
  }
  finish(result, doc);
  return result;
}

SelectionResult select_naive_mmr(const Document& doc, const EmbeddingTable& e,
                                 const SelectionConfig& cfg) {
  const size_t n = doc.sentences.size();
  std::vector<std::vector<double>> reprs(n);
  for (size_t i = 0; i < n; ++i) reprs[i] = sentence_repr(doc.sentences[i], e);
  std::vector<double> doc_vec = document_repr(doc, e);

  std::vector<double> importance(n);
  for (size_t i = 0; i < n; ++i) importance[i] = cosine_sim(reprs[i], doc_vec);

  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = cosine_sim(reprs[i], reprs[j]);
    }
  }
  return mmr_loop(importance, sim, doc, cfg);
}

SelectionResult select_mmr(const std::vector<double>& p, const Document& doc,
                           const EmbeddingTable& e, const SelectionConfig& cfg) {
  check_alignment(p, doc, "select_mmr");
  return mmr_loop(p, similarity_matrix(doc, e), doc, cfg);
}

SelectionResult select_trigram_block(const std::vector<double>& p, const Document& doc,
                                     const SelectionConfig& cfg) {
  check_alignment(p, doc, "select_trigram_block");
  const size_t n = p.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return p[a] > p[b]; });

  SelectionResult result;
  std::unordered_set<std::string> seen;
  TraceStep pending;  // collects skips leading up to the next pick
  for (size_t idx : order) {
    auto grams = sentence_trigrams(doc.sentences[idx]);
    std::string blocker;
    for (const auto& g : grams) {
      if (seen.count(g)) {
        blocker = g;
        break;
      }
    }
    if (!blocker.empty()) {
      if (cfg.with_trace) pending.skipped.push_back({idx, "trigram:" + blocker});
      continue;
    }

    size_t len = doc.sentences[idx].tokens.size();
    if (result.words + len > static_cast<size_t>(std::max(cfg.budget_words, 0))) {
      if (cfg.with_trace) {
        pending.picked = n;
        pending.score = p[idx];
        pending.mmr_score = p[idx];
        pending.skipped.push_back({idx, "budget"});
        result.trace.push_back(std::move(pending));
      }
      break;
    }

    result.chosen.push_back(idx);
    result.words += len;
    seen.insert(grams.begin(), grams.end());
    if (cfg.with_trace) {
      pending.picked = idx;
      pending.score = p[idx];
      pending.mmr_score = p[idx];
      result.trace.push_back(std::move(pending));
      pending = TraceStep{};
    }
  }
  finish(result, doc);
  return result;
}

size_t word_count(const SelectionResult& result) { return result.words; }

}  // namespace redsum
