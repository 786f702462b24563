#include "redsum/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "redsum/metrics.hpp"

namespace redsum {

using nlohmann::json;

std::vector<std::string> Document::abstract_tokens() const {
  std::vector<std::string> out;
  for (const auto& sent : abstract) {
    out.insert(out.end(), sent.begin(), sent.end());
  }
  return out;
}

std::vector<std::string> Document::all_tokens() const {
  std::vector<std::string> out;
  for (const auto& s : sentences) {
    out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  }
  return out;
}

size_t Document::word_count() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::vector<std::string> tokenize(const std::string& raw) {
  std::string spaced;
  spaced.reserve(raw.size() + raw.size() / 4);
  for (unsigned char c : raw) {
    if (std::ispunct(c)) {
      spaced.push_back(' ');
      spaced.push_back(static_cast<char>(c));
      spaced.push_back(' ');
    } else {
      spaced.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  std::vector<std::string> tokens;
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "pubmed-arxiv") return CorpusFormat::kPubmedArxiv;
  if (name == "normalized") return CorpusFormat::kNormalized;
  throw std::invalid_argument("unknown corpus format: " + name);
}

namespace {

[[noreturn]] void line_error(size_t lineno, const std::string& what) {
  throw std::runtime_error("ingest: line " + std::to_string(lineno) + ": " + what);
}

const json& require_field(const json& j, const char* field, size_t lineno) {
  auto it = j.find(field);
  if (it == j.end()) {
    line_error(lineno, std::string("missing field \"") + field + "\"");
  }
  return *it;
}

// The public Pubmed/arXiv release wraps abstract sentences in <S>...</S>.
std::string strip_sentence_tags(std::string text) {
  for (const char* tag : {"<S>", "</S>", "<s>", "</s>"}) {
    size_t pos;
    while ((pos = text.find(tag)) != std::string::npos) {
      text.erase(pos, std::strlen(tag));
    }
  }
  return text;
}

std::vector<std::string> string_array(const json& j, const char* field, size_t lineno) {
  if (!j.is_array()) {
    line_error(lineno, std::string("field \"") + field + "\" is not an array");
  }
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    if (!item.is_string()) {
      line_error(lineno, std::string("field \"") + field + "\" contains a non-string entry");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<Document> ingest_stream(std::istream& in, CorpusFormat format,
                                    const IngestOptions& opts) {
  std::vector<Document> docs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) line_error(lineno, "line is not a JSON object");

    std::vector<std::string> raw_sentences;
    std::vector<std::string> raw_abstract;
    Document doc;
    std::optional<std::vector<int>> raw_labels;

    if (format == CorpusFormat::kPubmedArxiv) {
      raw_sentences = string_array(require_field(j, "article_text", lineno), "article_text", lineno);
      raw_abstract = string_array(require_field(j, "abstract_text", lineno), "abstract_text", lineno);
      for (auto& a : raw_abstract) a = strip_sentence_tags(a);
      if (j.contains("article_id") && j["article_id"].is_string()) {
        doc.id = j["article_id"].get<std::string>();
      } else {
        doc.id = "doc" + std::to_string(lineno);
      }
    } else {
      const json& idj = require_field(j, "id", lineno);
      doc.id = idj.is_string() ? idj.get<std::string>() : idj.dump();
      raw_sentences = string_array(require_field(j, "sentences", lineno), "sentences", lineno);
      raw_abstract = string_array(require_field(j, "abstract", lineno), "abstract", lineno);
      if (j.contains("labels")) {
        if (!j["labels"].is_array() || j["labels"].size() != raw_sentences.size()) {
          line_error(lineno, "field \"labels\" must have one entry per sentence");
        }
        std::vector<int> labels;
        for (const auto& v : j["labels"]) {
          if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
            line_error(lineno, "field \"labels\" entries must be 0 or 1");
          }
          labels.push_back(v.get<int>());
        }
        raw_labels = std::move(labels);
      }
    }

    std::vector<int> kept_labels;
    for (size_t i = 0; i < raw_sentences.size(); ++i) {
      Sentence s;
      s.raw = raw_sentences[i];
      s.tokens = tokenize(s.raw);
      int n = static_cast<int>(s.tokens.size());
      if (n < opts.min_sentence_tokens || n > opts.max_sentence_tokens) continue;
      if (raw_labels) kept_labels.push_back((*raw_labels)[i]);
      doc.sentences.push_back(std::move(s));
    }
    if (doc.sentences.empty()) continue;
    if (raw_labels) doc.labels = std::move(kept_labels);

    for (const auto& a : raw_abstract) {
      auto toks = tokenize(a);
      if (!toks.empty()) doc.abstract.push_back(std::move(toks));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ingest(const std::string& path, CorpusFormat format,
                             const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest: cannot open " + path);
  return ingest_stream(in, format, opts);
}

void write_normalized(const std::vector<Document>& docs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_normalized: cannot open " + path);
  for (const auto& doc : docs) {
    json j;
    j["id"] = doc.id;
    json sentences = json::array();
    for (const auto& s : doc.sentences) sentences.push_back(s.raw);
    j["sentences"] = std::move(sentences);
    json abstract = json::array();
    for (const auto& sent : doc.abstract) {
      std::string joined;
      for (size_t i = 0; i < sent.size(); ++i) {
        if (i) joined += ' ';
        joined += sent[i];
      }
      abstract.push_back(joined);
    }
    j["abstract"] = std::move(abstract);
    if (doc.labels) j["labels"] = *doc.labels;
    out << j.dump() << '\n';
  }
}

std::vector<int> oracle_labels(const Document& doc, int budget_words) {
  if (doc.abstract.empty()) {
    throw std::invalid_argument("oracle_labels: document " + doc.id + " has an empty abstract");
  }
  const size_t n = doc.sentences.size();
  const auto reference = doc.abstract_tokens();

  auto extract_score = [&](const std::vector<char>& chosen) {
    std::vector<std::string> extract;
    for (size_t i = 0; i < n; ++i) {
      if (!chosen[i]) continue;
      const auto& t = doc.sentences[i].tokens;
      extract.insert(extract.end(), t.begin(), t.end());
    }
    return (rouge_n(extract, reference, 1).f1 + rouge_n(extract, reference, 2).f1 +
            rouge_l(extract, reference).f1) /
           3.0;
  };

  std::vector<char> chosen(n, 0);
  double best = 0.0;
  size_t words = 0;
  while (true) {
    double round_best = best;
    size_t round_idx = n;
    for (size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      size_t len = doc.sentences[i].tokens.size();
      if (budget_words > 0 && words + len > static_cast<size_t>(budget_words)) continue;
      chosen[i] = 1;
      double score = extract_score(chosen);
      chosen[i] = 0;
      if (score > round_best) {
        round_best = score;
        round_idx = i;
      }
    }
    if (round_idx == n) break;
    chosen[round_idx] = 1;
    words += doc.sentences[round_idx].tokens.size();
    best = round_best;
  }

  return std::vector<int>(chosen.begin(), chosen.end());
}

}  // namespace redsum
