#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace redsum {

struct Sentence {
  std::vector<std::string> tokens;  // lowercased, punctuation split off
  std::string raw;                  // original text
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<std::vector<std::string>> abstract;  // reference summary, tokenized per sentence
  std::optional<std::vector<int>> labels;          // 0/1 extraction labels, one per sentence

  std::vector<std::string> abstract_tokens() const;  // abstract sentences concatenated
  std::vector<std::string> all_tokens() const;       // body tokens in document order
  size_t word_count() const;
};

// Lowercase, separate punctuation from words, split on whitespace.
std::vector<std::string> tokenize(const std::string& raw);

enum class CorpusFormat {
  kPubmedArxiv,  // {"article_text": [...], "abstract_text": [...], "article_id"?}
  kNormalized,   // {"id", "sentences": [...], "abstract": [...], "labels"?: [...]}
};

CorpusFormat parse_corpus_format(const std::string& name);

struct IngestOptions {
  int min_sentence_tokens = 2;
  int max_sentence_tokens = 300;
};

// One JSON document per line. Sentences outside the token-length window are
// dropped; documents left with no sentences are skipped entirely.
std::vector<Document> ingest(const std::string& path, CorpusFormat format,
                             const IngestOptions& opts = {});
std::vector<Document> ingest_stream(std::istream& in, CorpusFormat format,
                                    const IngestOptions& opts = {});

// Writes the normalized JSONL schema, one document per line.
void write_normalized(const std::vector<Document>& docs, const std::string& path);

// Greedy extraction labels: repeatedly add the sentence that most improves the
// mean of ROUGE-1/2/L F1 against the abstract; stop when nothing improves or
// the word budget is hit. budget_words <= 0 means unlimited.
std::vector<int> oracle_labels(const Document& doc, int budget_words = 0);

}  // namespace redsum
