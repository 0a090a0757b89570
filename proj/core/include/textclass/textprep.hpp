#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace textclass {

using TermId = std::uint32_t;
using LabelId = std::uint32_t;

// Lowercase stop words, applied after lowercasing and before stemming.
class StopwordList {
 public:
  StopwordList() = default;
  static StopwordList from_file(const std::string& path);
  static StopwordList from_words(const std::vector<std::string>& words);

  bool contains(const std::string& word) const {
    return words_.count(word) != 0;
  }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Bidirectional term <-> dense id map with training document frequencies.
class Vocabulary {
 public:
  // Adds the term if absent (fit phase) and returns its id.
  TermId add(const std::string& term);
  std::optional<TermId> lookup(const std::string& term) const;

  const std::string& term(TermId id) const { return terms_[id]; }
  std::size_t size() const { return terms_.size(); }

  // Document-frequency bookkeeping, fed once per training document.
  void count_document(const std::vector<TermId>& distinct_terms);
  std::uint32_t doc_freq(TermId id) const { return doc_freq_[id]; }
  std::size_t train_docs() const { return train_docs_; }
  void set_train_docs(std::size_t n) { train_docs_ = n; }
  void set_doc_freq(TermId id, std::uint32_t df) { doc_freq_[id] = df; }

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::unordered_map<std::string, TermId> index_;
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::size_t train_docs_ = 0;
};

struct ProcessedDocument {
  std::string id;
  // Sentences that retained at least one token; flattening them in order
  // reproduces `tokens`.
  std::vector<std::vector<TermId>> sentences;
  std::vector<TermId> tokens;
  std::vector<LabelId> labels;  // sorted ascending
  // Token count before stop-word filtering, kept for corpus statistics.
  std::uint32_t raw_token_count = 0;
};

enum class PrepMode { Fit, Apply };

// Splits on '.', '!' or '?' followed by whitespace or end of text.
// Deliberately abbreviation-blind. Whitespace-only segments are dropped.
std::vector<std::string> segment_sentences(const std::string& text);

// Lowercased maximal runs of ASCII letters; anything else separates.
// Tokens shorter than two characters are dropped.
std::vector<std::string> tokenize(const std::string& sentence);

// Full pipeline: segment -> tokenize -> stop-word filter -> stem ->
// vocabulary mapping. Fit mode grows the vocabulary; apply mode drops
// tokens it has never seen.
ProcessedDocument preprocess(const std::string& id, const std::string& text,
                             const std::vector<LabelId>& labels,
                             const StopwordList& stopwords, Vocabulary& vocab,
                             PrepMode mode);

}  // namespace textclass
