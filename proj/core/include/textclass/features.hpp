#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "textclass/corpus.hpp"
#include "textclass/sparse.hpp"
#include "textclass/textprep.hpp"

namespace textclass {

// Maximum-likelihood term statistics for one class plus its prior.
struct ClassLanguageModel {
  LabelId label = 0;
  std::vector<double> counts;  // N_i, indexed by term id
  double total = 0.0;          // sum of N_i
  double prior = 0.0;          // N_t / N_total

  double prob(TermId term) const {
    return total > 0.0 ? counts[term] / total : 0.0;
  }
};

ClassLanguageModel fit_class_lm(
    const std::vector<const ProcessedDocument*>& docs, LabelId label,
    std::size_t vocab_size, std::size_t label_train_count,
    std::size_t total_train);

// TF-IDF rows with idf(t) = ln((1+N)/(1+df(t))) + 1, L2-normalized.
SparseMatrix tfidf(const std::vector<const ProcessedDocument*>& corpus,
                   const Vocabulary& vocab);
SparseVector tfidf_row(const ProcessedDocument& doc, const Vocabulary& vocab);

// Sentence-level co-occurrence statistics for one class. A pair of
// distinct terms counts once per sentence regardless of repeats.
struct PairCounts {
  std::unordered_map<std::uint64_t, std::uint32_t> pair_count;
  std::vector<std::uint32_t> term_sentences;  // n(t)
  std::uint64_t sentence_count = 0;           // S

  static std::uint64_t key(TermId a, TermId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
};

PairCounts count_cooccurrence(const std::vector<const ProcessedDocument*>& docs,
                              std::size_t vocab_size);

enum class CoocMetric { Pmi, Jaccard };

std::string to_string(CoocMetric metric);
CoocMetric cooc_metric_from_string(const std::string& name);

// f(t1,t2) = log2( (c/S) / ((n1/S)(n2/S)) ) over pairs with c > 0.
std::unordered_map<std::uint64_t, double> pmi(const PairCounts& counts);

// f(t1,t2) = c / (n1 + n2 - c).
std::unordered_map<std::uint64_t, double> jaccard(const PairCounts& counts);

// Dependence strengths normalized into [1, inf): theta = f/mu where
// f > mu, with mu the mean of the positive f values. Pairs at theta = 1
// are not stored; lookups of absent pairs return exactly 1.
struct CooccurrenceModel {
  LabelId label = 0;
  CoocMetric metric = CoocMetric::Pmi;
  double mu = 0.0;
  std::unordered_map<std::uint64_t, double> theta;

  double theta_of(TermId a, TermId b) const {
    auto it = theta.find(PairCounts::key(a, b));
    return it == theta.end() ? 1.0 : it->second;
  }

  // CSV with a header line carrying the metric and mu, then
  // term1_id,term2_id,theta rows.
  void save_csv(const std::string& path) const;
  static CooccurrenceModel load_csv(const std::string& path);
};

CooccurrenceModel normalize_theta(
    const std::unordered_map<std::uint64_t, double>& f_table,
    CoocMetric metric, LabelId label);

}  // namespace textclass
