#include "redsum/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace redsum {

using nlohmann::json;

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  size_t pool = std::min<size_t>(std::max(workers, 1), n);
  if (pool <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (size_t t = 0; t < pool; ++t) {
    threads.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : threads) th.join();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Dataset statistics

CorpusStats corpus_stats(const std::vector<Document>& docs, bool remove_stopwords,
                         int workers) {
  CorpusStats stats;
  stats.documents = docs.size();
  if (docs.empty()) return stats;

  struct Row {
    size_t words = 0, sentences = 0;
    double nid_value = 0;
    std::array<double, 3> uniq{};
  };
  std::vector<Row> rows(docs.size());
  parallel_for(docs.size(), workers, [&](size_t i) {
    const Document& doc = docs[i];
    auto tokens = doc.all_tokens();
    Row& r = rows[i];
    r.words = tokens.size();
    r.sentences = doc.sentences.size();
    r.nid_value = tokens.size() >= 2 ? nid(tokens) : 0.0;
    for (int n = 1; n <= 3; ++n) {
      r.uniq[n - 1] = unique_ngram_ratio(tokens, n, remove_stopwords);
    }
  });

  size_t words = 0, sentences = 0;
  double nid_sum = 0;
  std::array<double, 3> uniq_sum{};
  for (const Row& r : rows) {
    words += r.words;
    sentences += r.sentences;
    nid_sum += r.nid_value;
    for (int k = 0; k < 3; ++k) uniq_sum[k] += r.uniq[k];
  }
  double nd = static_cast<double>(docs.size());
  stats.words_per_doc = static_cast<double>(words) / nd;
  stats.words_per_sentence =
      sentences > 0 ? static_cast<double>(words) / static_cast<double>(sentences) : 0.0;
  stats.mean_nid = nid_sum / nd;
  for (int k = 0; k < 3; ++k) stats.unique_ratio[k] = uniq_sum[k] / nd;
  return stats;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

DocEval eval_one(const Document& doc, const SelectionResult& result) {
  DocEval row;
  row.doc_id = doc.id;
  const auto reference = doc.abstract_tokens();
  row.r1 = rouge_n(result.summary_tokens, reference, 1);
  row.r2 = rouge_n(result.summary_tokens, reference, 2);
  row.rl = rouge_l(result.summary_tokens, reference);
  row.uniq1 = unique_ngram_ratio(result.summary_tokens, 1);
  row.uniq2 = unique_ngram_ratio(result.summary_tokens, 2);
  row.uniq3 = unique_ngram_ratio(result.summary_tokens, 3);
  if (result.summary_tokens.size() >= 2) row.nid = nid(result.summary_tokens);
  row.words = result.words;
  row.selected = result.chosen.size();
  return row;
}

void fill_means(MethodEval& m) {
  double n = static_cast<double>(m.rows.size());
  if (n == 0) return;
  for (const DocEval& r : m.rows) {
    m.r1_mean.precision += r.r1.precision;
    m.r1_mean.recall += r.r1.recall;
    m.r1_mean.f1 += r.r1.f1;
    m.r2_mean.precision += r.r2.precision;
    m.r2_mean.recall += r.r2.recall;
    m.r2_mean.f1 += r.r2.f1;
    m.rl_mean.precision += r.rl.precision;
    m.rl_mean.recall += r.rl.recall;
    m.rl_mean.f1 += r.rl.f1;
    m.uniq1_mean += r.uniq1;
    m.uniq2_mean += r.uniq2;
    m.uniq3_mean += r.uniq3;
    if (r.nid) {
      m.nid_mean += *r.nid;
      ++m.nid_count;
    }
  }
  for (double* v : {&m.r1_mean.precision, &m.r1_mean.recall, &m.r1_mean.f1,
                    &m.r2_mean.precision, &m.r2_mean.recall, &m.r2_mean.f1,
                    &m.rl_mean.precision, &m.rl_mean.recall, &m.rl_mean.f1,
                    &m.uniq1_mean, &m.uniq2_mean, &m.uniq3_mean}) {
    *v /= n;
  }
  if (m.nid_count > 0) m.nid_mean /= static_cast<double>(m.nid_count);
}

std::vector<double> metric_column(const MethodEval& m, const std::string& key) {
  std::vector<double> out;
  out.reserve(m.rows.size());
  for (const DocEval& r : m.rows) {
    if (key == "rouge1_f1") out.push_back(r.r1.f1);
    else if (key == "rouge2_f1") out.push_back(r.r2.f1);
    else if (key == "rougel_f1") out.push_back(r.rl.f1);
    else if (key == "uniq1") out.push_back(r.uniq1);
    else if (key == "uniq2") out.push_back(r.uniq2);
    else if (key == "uniq3") out.push_back(r.uniq3);
    else if (key == "nid") out.push_back(r.nid.value_or(std::nan("")));
    else throw std::logic_error("metric_column: unknown key " + key);
  }
  return out;
}

}  // namespace

EvalReport evaluate_methods(const std::vector<Document>& docs,
                            const std::vector<MethodRun>& runs, const std::string& baseline,
                            int bootstrap_iterations, uint64_t seed, int workers) {
  if (runs.empty()) throw std::invalid_argument("evaluate_methods: no selection runs");
  for (const auto& run : runs) {
    if (run.results.size() != docs.size()) {
      throw std::invalid_argument("evaluate_methods: method " + run.method +
                                  " covers a different document set");
    }
  }
  const MethodRun* base_run = nullptr;
  for (const auto& run : runs) {
    if (run.method == baseline) base_run = &run;
  }
  if (!base_run) {
    throw std::invalid_argument("evaluate_methods: baseline method \"" + baseline +
                                "\" not among the runs");
  }

  EvalReport report;
  report.baseline = baseline;
  report.bootstrap_iterations = bootstrap_iterations;
  report.seed = seed;
  report.methods.resize(runs.size());
  for (size_t mi = 0; mi < runs.size(); ++mi) {
    MethodEval& m = report.methods[mi];
    m.method = runs[mi].method;
    m.rows.resize(docs.size());
    parallel_for(docs.size(), workers,
                 [&, mi](size_t i) { m.rows[i] = eval_one(docs[i], runs[mi].results[i]); });
    fill_means(m);
  }

  const MethodEval* base_eval = nullptr;
  for (const auto& m : report.methods) {
    if (m.method == baseline) base_eval = &m;
  }
  for (MethodEval& m : report.methods) {
    for (const char* key :
         {"rouge1_f1", "rouge2_f1", "rougel_f1", "uniq1", "uniq2", "uniq3", "nid"}) {
      auto a = metric_column(m, key);
      auto b = metric_column(*base_eval, key);
      bool has_nan = std::any_of(a.begin(), a.end(), [](double v) { return std::isnan(v); }) ||
                     std::any_of(b.begin(), b.end(), [](double v) { return std::isnan(v); });
      if (has_nan || a.size() < 2) continue;
      if (std::string(key) == "nid") {
        // lower NID is better; flip the sign so "beat" stays "higher"
        for (double& v : a) v = -v;
        for (double& v : b) v = -v;
      }
      m.p_not_better[key] = bootstrap_test(a, b, bootstrap_iterations, seed);
    }
  }
  return report;
}

void write_eval_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_eval_csv: cannot open " + path);
  out << "method,doc_id,rouge1_p,rouge1_r,rouge1_f1,rouge2_p,rouge2_r,rouge2_f1,"
         "rougel_p,rougel_r,rougel_f1,uniq1,uniq2,uniq3,nid,words,selected\n";
  for (const auto& m : report.methods) {
    for (const auto& r : m.rows) {
      out << m.method << ',' << r.doc_id << ',' << format_double(r.r1.precision) << ','
          << format_double(r.r1.recall) << ',' << format_double(r.r1.f1) << ','
          << format_double(r.r2.precision) << ',' << format_double(r.r2.recall) << ','
          << format_double(r.r2.f1) << ',' << format_double(r.rl.precision) << ','
          << format_double(r.rl.recall) << ',' << format_double(r.rl.f1) << ','
          << format_double(r.uniq1) << ',' << format_double(r.uniq2) << ','
          << format_double(r.uniq3) << ',' << (r.nid ? format_double(*r.nid) : "") << ','
          << r.words << ',' << r.selected << '\n';
    }
  }
}

void write_eval_json(const EvalReport& report, const std::string& path) {
  json j;
  j["baseline"] = report.baseline;
  j["bootstrap_iterations"] = report.bootstrap_iterations;
  j["seed"] = report.seed;
  json methods = json::array();
  for (const auto& m : report.methods) {
    json mj;
    mj["method"] = m.method;
    mj["documents"] = m.rows.size();
    mj["rouge1"] = {{"precision", m.r1_mean.precision},
                    {"recall", m.r1_mean.recall},
                    {"f1", m.r1_mean.f1}};
    mj["rouge2"] = {{"precision", m.r2_mean.precision},
                    {"recall", m.r2_mean.recall},
                    {"f1", m.r2_mean.f1}};
    mj["rougel"] = {{"precision", m.rl_mean.precision},
                    {"recall", m.rl_mean.recall},
                    {"f1", m.rl_mean.f1}};
    mj["unique_ngram_ratio"] = {{"1", m.uniq1_mean}, {"2", m.uniq2_mean}, {"3", m.uniq3_mean}};
    mj["nid"] = {{"mean", m.nid_mean}, {"documents", m.nid_count}};
    json p = json::object();
    for (const auto& [key, value] : m.p_not_better) p[key] = value;
    mj["p_not_better_than_baseline"] = std::move(p);
    methods.push_back(std::move(mj));
  }
  j["methods"] = std::move(methods);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_eval_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

SweepRow summarize_runs(double x, const std::vector<Document>& docs,
                        const std::vector<SelectionResult>& results) {
  SweepRow row;
  row.x = x;
  double n = static_cast<double>(docs.size());
  size_t nid_count = 0;
  for (size_t i = 0; i < docs.size(); ++i) {
    const auto reference = docs[i].abstract_tokens();
    const auto& toks = results[i].summary_tokens;
    row.r1 += rouge_n(toks, reference, 1).f1;
    row.r2 += rouge_n(toks, reference, 2).f1;
    row.rl += rouge_l(toks, reference).f1;
    row.uniq1 += unique_ngram_ratio(toks, 1);
    row.uniq2 += unique_ngram_ratio(toks, 2);
    row.uniq3 += unique_ngram_ratio(toks, 3);
    if (toks.size() >= 2) {
      row.nid += nid(toks);
      ++nid_count;
    }
  }
  row.r1 /= n;
  row.r2 /= n;
  row.rl /= n;
  row.uniq1 /= n;
  row.uniq2 /= n;
  row.uniq3 /= n;
  row.nid = nid_count > 0 ? row.nid / static_cast<double>(nid_count) : 0.0;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_lambda(const std::vector<Document>& docs,
                                   const std::vector<std::vector<double>>& scores,
                                   const EmbeddingTable& e, const std::vector<double>& grid,
                                   int budget_words, int workers) {
  if (scores.size() != docs.size()) {
    throw std::invalid_argument("sweep_lambda: scores do not align with documents");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double lambda : grid) {
    SelectionConfig cfg;
    cfg.budget_words = budget_words;
    cfg.lambda = lambda;
    std::vector<SelectionResult> results(docs.size());
    parallel_for(docs.size(), workers,
                 [&](size_t i) { results[i] = select_mmr(scores[i], docs[i], e, cfg); });
    rows.push_back(summarize_runs(lambda, docs, results));
  }
  return rows;
}

std::vector<SweepRow> sweep_budget(const std::vector<Document>& docs,
                                   const std::vector<std::vector<double>>& scores,
                                   const EmbeddingTable& e, double lambda,
                                   const std::vector<int>& budgets, int workers) {
  if (scores.size() != docs.size()) {
    throw std::invalid_argument("sweep_budget: scores do not align with documents");
  }
  std::vector<SweepRow> rows;
  rows.reserve(budgets.size());
  for (int budget : budgets) {
    SelectionConfig cfg;
    cfg.budget_words = budget;
    cfg.lambda = lambda;
    std::vector<SelectionResult> results(docs.size());
    parallel_for(docs.size(), workers,
                 [&](size_t i) { results[i] = select_mmr(scores[i], docs[i], e, cfg); });
    rows.push_back(summarize_runs(static_cast<double>(budget), docs, results));
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& x_name,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  out << x_name << ",rouge1_f1,rouge2_f1,rougel_f1,uniq1,uniq2,uniq3,nid\n";
  for (const auto& r : rows) {
    out << format_double(r.x) << ',' << format_double(r.r1) << ',' << format_double(r.r2) << ','
        << format_double(r.rl) << ',' << format_double(r.uniq1) << ','
        << format_double(r.uniq2) << ',' << format_double(r.uniq3) << ','
        << format_double(r.nid) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Conditioned analysis

std::vector<BinRow> analyze_bins(const std::vector<Document>& docs,
                                 const std::vector<MethodRun>& runs, BinKind kind,
                                 double bin_width, int workers) {
  if (bin_width <= 0) throw std::invalid_argument("analyze_bins: bin width must be positive");
  for (const auto& run : runs) {
    if (run.results.size() != docs.size()) {
      throw std::invalid_argument("analyze_bins: method " + run.method +
                                  " covers a different document set");
    }
  }

  std::vector<double> key(docs.size());
  parallel_for(docs.size(), workers, [&](size_t i) {
    if (kind == BinKind::kRedundancy) {
      key[i] = unique_ngram_ratio(docs[i].all_tokens(), 1, /*remove_stopwords=*/true);
    } else {
      key[i] = static_cast<double>(docs[i].sentences.size());
    }
  });

  double max_key = *std::max_element(key.begin(), key.end());
  size_t bins = static_cast<size_t>(max_key / bin_width) + 1;
  if (kind == BinKind::kRedundancy) {
    bins = std::max(bins, static_cast<size_t>(100.0 / bin_width));
  }

  std::vector<BinRow> rows(bins);
  std::vector<std::vector<size_t>> members(bins);
  for (size_t b = 0; b < bins; ++b) {
    rows[b].lo = bin_width * static_cast<double>(b);
    rows[b].hi = bin_width * static_cast<double>(b + 1);
  }
  for (size_t i = 0; i < docs.size(); ++i) {
    size_t b = std::min(static_cast<size_t>(key[i] / bin_width), bins - 1);
    members[b].push_back(i);
  }

  for (size_t b = 0; b < bins; ++b) {
    rows[b].count = members[b].size();
    for (const auto& run : runs) {
      double r1 = 0, uniq = 0;
      for (size_t i : members[b]) {
        r1 += rouge_n(run.results[i].summary_tokens, docs[i].abstract_tokens(), 1).f1;
        uniq += unique_ngram_ratio(run.results[i].summary_tokens, 1);
      }
      double cnt = static_cast<double>(members[b].size());
      rows[b].mean_r1[run.method] = cnt > 0 ? r1 / cnt : 0.0;
      rows[b].mean_uniq1[run.method] = cnt > 0 ? uniq / cnt : 0.0;
    }
  }
  return rows;
}

void write_bins_csv(const std::vector<BinRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_bins_csv: cannot open " + path);
  out << "bin_lo,bin_hi,count";
  if (!rows.empty()) {
    for (const auto& [method, _] : rows.front().mean_r1) {
      out << ",rouge1_f1:" << method << ",uniq1:" << method;
    }
  }
  out << '\n';
  for (const auto& r : rows) {
    out << format_double(r.lo) << ',' << format_double(r.hi) << ',' << r.count;
    for (const auto& [method, v] : r.mean_r1) {
      out << ',' << format_double(v) << ',' << format_double(r.mean_uniq1.at(method));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Overlap

OverlapReport selection_overlap(const std::vector<MethodRun>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("selection_overlap: need at least 2 methods");
  const size_t docs = runs.front().results.size();
  for (const auto& run : runs) {
    if (run.results.size() != docs) {
      throw std::invalid_argument("selection_overlap: method " + run.method +
                                  " covers a different document set");
    }
  }

  OverlapReport report;
  const size_t k = runs.size();
  report.methods.reserve(k);
  for (const auto& run : runs) report.methods.push_back(run.method);
  report.overlap.assign(k, std::vector<double>(k, 0.0));
  report.total_selected.assign(k, 0);
  report.words_per_selected.assign(k, 0.0);

  for (size_t a = 0; a < k; ++a) {
    size_t total = 0, words = 0;
    for (const auto& r : runs[a].results) {
      total += r.chosen.size();
      words += r.words;
    }
    report.total_selected[a] = total;
    report.words_per_selected[a] =
        total > 0 ? static_cast<double>(words) / static_cast<double>(total) : 0.0;
  }

  for (size_t a = 0; a < k; ++a) {
    for (size_t b = 0; b < k; ++b) {
      size_t inter = 0;
      for (size_t d = 0; d < docs; ++d) {
        std::set<size_t> chosen_b(runs[b].results[d].chosen.begin(),
                                  runs[b].results[d].chosen.end());
        for (size_t idx : runs[a].results[d].chosen) inter += chosen_b.count(idx);
      }
      report.overlap[a][b] = report.total_selected[a] > 0
                                 ? 100.0 * static_cast<double>(inter) /
                                       static_cast<double>(report.total_selected[a])
                                 : 0.0;
    }
  }
  return report;
}

void write_overlap_csv(const OverlapReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_overlap_csv: cannot open " + path);
  out << "method";
  for (const auto& m : report.methods) out << ',' << m;
  out << ",total_selected,words_per_selected\n";
  for (size_t a = 0; a < report.methods.size(); ++a) {
    out << report.methods[a];
    for (size_t b = 0; b < report.methods.size(); ++b) {
      out << ',' << format_double(report.overlap[a][b]);
    }
    out << ',' << report.total_selected[a] << ','
        << format_double(report.words_per_selected[a]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Relative position

PositionHistogram position_histogram(const std::vector<Document>& docs,
                                     const std::vector<MethodRun>& runs) {
  PositionHistogram hist;
  for (const auto& run : runs) {
    if (run.results.size() != docs.size()) {
      throw std::invalid_argument("position_histogram: method " + run.method +
                                  " covers a different document set");
    }
    std::array<double, 10> buckets{};
    size_t total = 0;
    for (size_t d = 0; d < docs.size(); ++d) {
      size_t n = docs[d].sentences.size();
      if (n == 0) continue;
      for (size_t idx : run.results[d].chosen) {
        size_t b = std::min<size_t>(idx * 10 / n, 9);
        buckets[b] += 1.0;
        ++total;
      }
    }
    if (total > 0) {
      for (double& v : buckets) v /= static_cast<double>(total);
    }
    hist.methods.push_back(run.method);
    hist.buckets.push_back(buckets);
  }
  return hist;
}

void write_position_csv(const PositionHistogram& hist, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_position_csv: cannot open " + path);
  out << "method";
  for (int b = 0; b < 10; ++b) {
    out << ",bucket" << b;
  }
  out << '\n';
  for (size_t m = 0; m < hist.methods.size(); ++m) {
    out << hist.methods[m];
    for (int b = 0; b < 10; ++b) out << ',' << format_double(hist.buckets[m][b]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Selections io

void write_selections(const MethodRun& run, const std::vector<Document>& docs,
                      const std::string& path, bool with_trace) {
  if (run.results.size() != docs.size()) {
    throw std::invalid_argument("write_selections: results do not align with documents");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_selections: cannot open " + path);
  for (size_t i = 0; i < docs.size(); ++i) {
    const SelectionResult& r = run.results[i];
    json j;
    j["id"] = docs[i].id;
    j["method"] = run.method;
    j["lambda"] = run.lambda;
    j["chosen"] = r.chosen;
    j["summary"] = r.summary_text;
    if (with_trace) {
      json trace = json::array();
      for (const auto& step : r.trace) {
        json sj;
        if (step.picked < docs[i].sentences.size()) {
          sj["picked"] = step.picked;
        } else {
          sj["picked"] = nullptr;
        }
        sj["score"] = step.score;
        sj["mmr_score"] = step.mmr_score;
        if (!step.skipped.empty()) {
          json skipped = json::array();
          for (const auto& skip : step.skipped) {
            skipped.push_back({{"index", skip.index}, {"reason", skip.reason}});
          }
          sj["skipped"] = std::move(skipped);
        }
        if (!step.candidate_scores.empty()) sj["candidate_scores"] = step.candidate_scores;
        trace.push_back(std::move(sj));
      }
      j["trace"] = std::move(trace);
    }
    out << j.dump() << '\n';
  }
}

MethodRun read_selections(const std::string& path, const std::vector<Document>& docs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_selections: cannot open " + path);
  MethodRun run;
  std::string line;
  size_t lineno = 0;
  size_t doc_idx = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("read_selections: " + path + ": line " + std::to_string(lineno) +
                               ": " + e.what());
    }
    if (doc_idx >= docs.size()) {
      throw std::runtime_error("read_selections: " + path + " has more rows than documents");
    }
    const Document& doc = docs[doc_idx];
    std::string id = j.at("id").get<std::string>();
    if (id != doc.id) {
      throw std::runtime_error("read_selections: " + path + ": line " + std::to_string(lineno) +
                               ": document id \"" + id + "\" does not match dataset (\"" +
                               doc.id + "\")");
    }
    std::string method = j.at("method").get<std::string>();
    if (run.results.empty()) {
      run.method = method;
      run.lambda = j.value("lambda", 0.6);
    } else if (method != run.method) {
      throw std::runtime_error("read_selections: " + path + " mixes methods");
    }

    SelectionResult r;
    for (const auto& v : j.at("chosen")) {
      size_t idx = v.get<size_t>();
      if (idx >= doc.sentences.size()) {
        throw std::runtime_error("read_selections: " + path + ": line " +
                                 std::to_string(lineno) + ": sentence index out of range");
      }
      r.chosen.push_back(idx);
    }
    std::vector<size_t> ordered = r.chosen;
    std::sort(ordered.begin(), ordered.end());
    for (size_t idx : ordered) {
      const Sentence& s = doc.sentences[idx];
      r.summary_tokens.insert(r.summary_tokens.end(), s.tokens.begin(), s.tokens.end());
      if (!r.summary_text.empty()) r.summary_text += ' ';
      r.summary_text += s.raw;
      r.words += s.tokens.size();
    }
    run.results.push_back(std::move(r));
    ++doc_idx;
  }
  if (run.results.size() != docs.size()) {
    throw std::runtime_error("read_selections: " + path + " covers " +
                             std::to_string(run.results.size()) + " documents, dataset has " +
                             std::to_string(docs.size()));
  }
  return run;
}

EmbeddingTable build_embeddings(const EmbeddingSpec& spec, const std::vector<Document>& docs) {
  if (spec.kind == "file") {
    if (spec.path.empty()) {
      throw std::invalid_argument("build_embeddings: checkpoint expects an embedding file");
    }
    return EmbeddingTable::load_text(spec.path);
  }
  if (spec.kind == "hashed") {
    return EmbeddingTable::hashed(corpus_vocab(docs), spec.dim, spec.seed);
  }
  throw std::invalid_argument("build_embeddings: unknown kind \"" + spec.kind + "\"");
}

}  // namespace redsum
