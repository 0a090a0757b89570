#include "textclass/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace textclass {

ClassLanguageModel fit_class_lm(
    const std::vector<const ProcessedDocument*>& docs, LabelId label,
    std::size_t vocab_size, std::size_t label_train_count,
    std::size_t total_train) {
  ClassLanguageModel model;
  model.label = label;
  model.counts.assign(vocab_size, 0.0);
  for (const auto* doc : docs) {
    for (const TermId term : doc->tokens) {
      model.counts[term] += 1.0;
      model.total += 1.0;
    }
  }
  model.prior = total_train > 0
                    ? static_cast<double>(label_train_count) / total_train
                    : 0.0;
  return model;
}

SparseVector tfidf_row(const ProcessedDocument& doc, const Vocabulary& vocab) {
  std::map<TermId, double> tf;
  for (const TermId term : doc.tokens) tf[term] += 1.0;
  const double n_docs = static_cast<double>(vocab.train_docs());
  SparseVector row;
  row.entries.reserve(tf.size());
  double norm_sq = 0.0;
  for (const auto& [term, count] : tf) {
    const double idf =
        std::log((1.0 + n_docs) / (1.0 + vocab.doc_freq(term))) + 1.0;
    const double w = count * idf;
    row.entries.emplace_back(term, w);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [term, weight] : row.entries) weight *= inv;
  }
  return row;
}

SparseMatrix tfidf(const std::vector<const ProcessedDocument*>& corpus,
                   const Vocabulary& vocab) {
  SparseMatrix matrix;
  matrix.cols = vocab.size();
  matrix.rows.reserve(corpus.size());
  for (const auto* doc : corpus) matrix.rows.push_back(tfidf_row(*doc, vocab));
  return matrix;
}

PairCounts count_cooccurrence(const std::vector<const ProcessedDocument*>& docs,
                              std::size_t vocab_size) {
  PairCounts counts;
  counts.term_sentences.assign(vocab_size, 0);
  std::vector<TermId> distinct;
  for (const auto* doc : docs) {
    for (const auto& sentence : doc->sentences) {
      ++counts.sentence_count;
      distinct.assign(sentence.begin(), sentence.end());
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());
      for (std::size_t i = 0; i < distinct.size(); ++i) {
        ++counts.term_sentences[distinct[i]];
        for (std::size_t j = i + 1; j < distinct.size(); ++j) {
          ++counts.pair_count[PairCounts::key(distinct[i], distinct[j])];
        }
      }
    }
  }
  return counts;
}

std::string to_string(CoocMetric metric) {
  return metric == CoocMetric::Pmi ? "pmi" : "jaccard";
}

CoocMetric cooc_metric_from_string(const std::string& name) {
  if (name == "pmi") return CoocMetric::Pmi;
  if (name == "jaccard") return CoocMetric::Jaccard;
  throw std::invalid_argument("unknown co-occurrence metric: " + name);
}

std::unordered_map<std::uint64_t, double> pmi(const PairCounts& counts) {
  if (counts.sentence_count == 0) return {};
  std::unordered_map<std::uint64_t, double> f;
  f.reserve(counts.pair_count.size());
  const double s = static_cast<double>(counts.sentence_count);
  for (const auto& [key, count] : counts.pair_count) {
    const TermId t1 = static_cast<TermId>(key >> 32);
    const TermId t2 = static_cast<TermId>(key & 0xffffffffu);
    const double n1 = counts.term_sentences[t1];
    const double n2 = counts.term_sentences[t2];
    f.emplace(key, std::log2((count * s) / (n1 * n2)));
  }
  return f;
}

std::unordered_map<std::uint64_t, double> jaccard(const PairCounts& counts) {
  std::unordered_map<std::uint64_t, double> f;
  f.reserve(counts.pair_count.size());
  for (const auto& [key, count] : counts.pair_count) {
    const TermId t1 = static_cast<TermId>(key >> 32);
    const TermId t2 = static_cast<TermId>(key & 0xffffffffu);
    const double n1 = counts.term_sentences[t1];
    const double n2 = counts.term_sentences[t2];
    f.emplace(key, count / (n1 + n2 - count));
  }
  return f;
}

CooccurrenceModel normalize_theta(
    const std::unordered_map<std::uint64_t, double>& f_table,
    CoocMetric metric, LabelId label) {
  CooccurrenceModel model;
  model.label = label;
  model.metric = metric;
  // The [1, inf) normalization presumes nonnegative strengths, so mu is
  // taken over the positive f values; pairs with f <= 0 stay at theta = 1.
  double sum = 0.0;
  std::size_t positive = 0;
  for (const auto& [key, f] : f_table) {
    if (f > 0.0) {
      sum += f;
      ++positive;
    }
  }
  if (positive == 0) return model;
  model.mu = sum / static_cast<double>(positive);
  for (const auto& [key, f] : f_table) {
    if (f > model.mu) model.theta.emplace(key, f / model.mu);
  }
  return model;
}

void CooccurrenceModel::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write theta table: " + path);
  char buf[64];
  auto fmt = [&buf](double v) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
  };
  out << "# metric=" << textclass::to_string(metric) << " mu=" << fmt(mu)
      << "\n";
  out << "term1_id,term2_id,theta\n";
  // Deterministic order for byte-identical reruns.
  std::map<std::uint64_t, double> sorted(theta.begin(), theta.end());
  for (const auto& [key, value] : sorted) {
    out << (key >> 32) << "," << (key & 0xffffffffu) << "," << fmt(value)
        << "\n";
  }
}

CooccurrenceModel CooccurrenceModel::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open theta table: " + path);
  CooccurrenceModel model;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty theta table: " + path);
  }
  {
    char metric_buf[32] = {0};
    double mu = 0.0;
    if (std::sscanf(line.c_str(), "# metric=%31s mu=%lf", metric_buf, &mu) !=
        2) {
      throw std::runtime_error("bad theta table header: " + line);
    }
    model.metric = cooc_metric_from_string(metric_buf);
    model.mu = mu;
  }
  std::getline(in, line);  // column header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    unsigned long t1 = 0, t2 = 0;
    double value = 0.0;
    if (std::sscanf(line.c_str(), "%lu,%lu,%lf", &t1, &t2, &value) != 3) {
      throw std::runtime_error("bad theta row: " + line);
    }
    model.theta.emplace(
        PairCounts::key(static_cast<TermId>(t1), static_cast<TermId>(t2)),
        value);
  }
  return model;
}

}  // namespace textclass
