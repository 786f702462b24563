#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "redsum/corpus.hpp"

namespace redsum {

// Token -> dense vector map. Out-of-vocabulary tokens fall back to a fixed
// vector (zero by default) so sentence means stay well-defined.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(size_t dim);

  // Plain-text format: token followed by `dim` floats per line, space
  // separated; the dimension is inferred from the first line.
  static EmbeddingTable load_text(const std::string& path);

  // Deterministic pseudo-random vectors derived from (seed, token); the same
  // token maps to the same vector in any corpus.
  static EmbeddingTable hashed(const std::vector<std::string>& vocab, size_t dim,
                               uint64_t seed);

  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  void insert(const std::string& token, std::vector<double> vec);
  const std::vector<double>* find(const std::string& token) const;
  const std::vector<double>& fallback() const { return fallback_; }
  void set_fallback(std::vector<double> vec);

 private:
  size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<double> fallback_;
};

// Arithmetic mean of the token vectors (OOV -> fallback).
std::vector<double> mean_repr(const std::vector<std::string>& tokens,
                              const EmbeddingTable& e);
std::vector<double> sentence_repr(const Sentence& s, const EmbeddingTable& e);
// Mean over every body token of the document.
std::vector<double> document_repr(const Document& doc, const EmbeddingTable& e);

// dot(a,b) / (|a||b|); 0 when either norm is 0. Throws on dimension mismatch.
double cosine_sim(std::span<const double> a, std::span<const double> b);

// Pairwise sentence cosine similarities with the diagonal fixed to 0.
std::vector<std::vector<double>> similarity_matrix(const Document& doc,
                                                   const EmbeddingTable& e);

// Sorted unique tokens across bodies and abstracts.
std::vector<std::string> corpus_vocab(const std::vector<Document>& docs);

}  // namespace redsum
