#include "redsum/embeddings.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

#include "redsum/rng.hpp"

namespace redsum {

EmbeddingTable::EmbeddingTable(size_t dim) : dim_(dim), fallback_(dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("EmbeddingTable: dim must be positive");
}

void EmbeddingTable::insert(const std::string& token, std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("EmbeddingTable: vector for \"" + token + "\" has length " +
                                std::to_string(vec.size()) + ", expected " +
                                std::to_string(dim_));
  }
  vectors_[token] = std::move(vec);
}

const std::vector<double>* EmbeddingTable::find(const std::string& token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingTable::set_fallback(std::vector<double> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("EmbeddingTable: fallback vector has wrong length");
  }
  fallback_ = std::move(vec);
}

EmbeddingTable EmbeddingTable::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("EmbeddingTable: cannot open " + path);

  std::string line;
  size_t lineno = 0;
  size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    size_t pos = line.find(' ');
    if (pos == std::string::npos) {
      throw std::runtime_error("EmbeddingTable: line " + std::to_string(lineno) +
                               ": expected token followed by floats");
    }
    std::string token = line.substr(0, pos);
    std::vector<double> vec;
    const char* p = line.c_str() + pos;
    char* end = nullptr;
    while (*p) {
      double v = std::strtod(p, &end);
      if (end == p) break;
      vec.push_back(v);
      p = end;
    }
    if (dim == 0) {
      dim = vec.size();
      if (dim == 0) {
        throw std::runtime_error("EmbeddingTable: line " + std::to_string(lineno) +
                                 ": no vector components on first line");
      }
    } else if (vec.size() != dim) {
      throw std::runtime_error("EmbeddingTable: line " + std::to_string(lineno) + ": expected " +
                               std::to_string(dim) + " components, got " +
                               std::to_string(vec.size()));
    }
    entries.emplace_back(std::move(token), std::move(vec));
  }
  if (entries.empty()) throw std::runtime_error("EmbeddingTable: " + path + " is empty");

  EmbeddingTable table(dim);
  for (auto& [token, vec] : entries) table.insert(token, std::move(vec));
  return table;
}

EmbeddingTable EmbeddingTable::hashed(const std::vector<std::string>& vocab, size_t dim,
                                      uint64_t seed) {
  EmbeddingTable table(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& token : vocab) {
    uint64_t state = mix64(seed ^ hash_string(token));
    std::vector<double> vec(dim);
    for (size_t k = 0; k < dim; ++k) {
      state = mix64(state);
      double u = static_cast<double>(state >> 11) * 0x1.0p-53;  // [0,1)
      vec[k] = (2.0 * u - 1.0) * scale;
    }
    table.insert(token, std::move(vec));
  }
  return table;
}

std::vector<double> mean_repr(const std::vector<std::string>& tokens,
                              const EmbeddingTable& e) {
  std::vector<double> acc(e.dim(), 0.0);
  if (tokens.empty()) return acc;
  for (const auto& t : tokens) {
    const std::vector<double>* vec = e.find(t);
    if (!vec) vec = &e.fallback();
    for (size_t k = 0; k < acc.size(); ++k) acc[k] += (*vec)[k];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : acc) v *= inv;
  return acc;
}

std::vector<double> sentence_repr(const Sentence& s, const EmbeddingTable& e) {
  return mean_repr(s.tokens, e);
}

std::vector<double> document_repr(const Document& doc, const EmbeddingTable& e) {
  return mean_repr(doc.all_tokens(), e);
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_sim: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::vector<double>> similarity_matrix(const Document& doc,
                                                   const EmbeddingTable& e) {
  const size_t n = doc.sentences.size();
  std::vector<std::vector<double>> reprs(n);
  for (size_t i = 0; i < n; ++i) reprs[i] = sentence_repr(doc.sentences[i], e);

  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double v = cosine_sim(reprs[i], reprs[j]);
      sim[i][j] = v;
      sim[j][i] = v;
    }
  }
  return sim;
}

std::vector<std::string> corpus_vocab(const std::vector<Document>& docs) {
  std::set<std::string> vocab;
  for (const auto& doc : docs) {
    for (const auto& s : doc.sentences) vocab.insert(s.tokens.begin(), s.tokens.end());
    for (const auto& sent : doc.abstract) vocab.insert(sent.begin(), sent.end());
  }
  return std::vector<std::string>(vocab.begin(), vocab.end());
}

}  // namespace redsum
