#include "textclass/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "textclass/random.hpp"

namespace textclass {

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NaiveBayes: return "nb";
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::Svm: return "svm";
    case ClassifierKind::Copula: return "copula";
  }
  return "unknown";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "nb") return ClassifierKind::NaiveBayes;
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "svm") return ClassifierKind::Svm;
  if (name == "copula") return ClassifierKind::Copula;
  throw std::invalid_argument("unknown classifier kind: " + name);
}

std::string ClassifierSpec::name() const {
  std::ostringstream out;
  switch (kind) {
    case ClassifierKind::NaiveBayes:
      out << "nb_alpha" << alpha;
      break;
    case ClassifierKind::Knn:
      out << "knn_k" << k;
      break;
    case ClassifierKind::Svm:
      out << "svm_c" << c;
      break;
    case ClassifierKind::Copula:
      out << "copula_" << textclass::to_string(metric) << "_lambda" << lambda;
      break;
  }
  return out.str();
}

bool PreparedCorpus::multilabel_corpus() const {
  for (const auto& doc : train_docs) {
    if (doc.labels.size() > 1) return true;
  }
  for (const auto& doc : test_docs) {
    if (doc.labels.size() > 1) return true;
  }
  return false;
}

std::vector<std::vector<LabelId>> PreparedCorpus::train_label_sets() const {
  std::vector<std::vector<LabelId>> sets;
  sets.reserve(train_docs.size());
  for (const auto& doc : train_docs) sets.push_back(doc.labels);
  return sets;
}

std::vector<std::vector<LabelId>> PreparedCorpus::gold_test_labels() const {
  std::vector<std::vector<LabelId>> sets;
  sets.reserve(test_docs.size());
  for (const auto& doc : test_docs) sets.push_back(doc.labels);
  return sets;
}

PreparedCorpus assemble_prepared(std::vector<ProcessedDocument> train,
                                 std::vector<ProcessedDocument> test,
                                 LabelCatalog catalog, Vocabulary vocab) {
  PreparedCorpus prepared;
  prepared.catalog = std::move(catalog);
  prepared.vocab = std::move(vocab);
  prepared.train_docs = std::move(train);
  prepared.test_docs = std::move(test);
  std::vector<const ProcessedDocument*> train_ptrs, test_ptrs;
  for (const auto& doc : prepared.train_docs) train_ptrs.push_back(&doc);
  for (const auto& doc : prepared.test_docs) test_ptrs.push_back(&doc);
  prepared.train_matrix = tfidf(train_ptrs, prepared.vocab);
  prepared.test_matrix = tfidf(test_ptrs, prepared.vocab);
  return prepared;
}

PreparedCorpus prepare_corpus(const std::vector<const RawDocument*>& train,
                              const std::vector<const RawDocument*>& test,
                              const StopwordList& stopwords) {
  std::vector<RawDocument> all;
  all.reserve(train.size() + test.size());
  for (const auto* doc : train) all.push_back(*doc);
  for (const auto* doc : test) all.push_back(*doc);
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i].split_hint = i < train.size() ? Split::Train : Split::Test;
  }
  LabelCatalog catalog = build_catalog(all);

  auto label_ids = [&catalog](const RawDocument& doc) {
    std::vector<LabelId> ids;
    ids.reserve(doc.labels.size());
    for (const auto& label : doc.labels) ids.push_back(catalog.id_of(label));
    return ids;
  };

  Vocabulary vocab;
  std::vector<ProcessedDocument> train_docs;
  train_docs.reserve(train.size());
  std::vector<TermId> distinct;
  for (const auto* doc : train) {
    ProcessedDocument processed = preprocess(
        doc->id, doc->text, label_ids(*doc), stopwords, vocab, PrepMode::Fit);
    distinct.assign(processed.tokens.begin(), processed.tokens.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    vocab.count_document(distinct);
    train_docs.push_back(std::move(processed));
  }
  std::vector<ProcessedDocument> test_docs;
  test_docs.reserve(test.size());
  for (const auto* doc : test) {
    test_docs.push_back(preprocess(doc->id, doc->text, label_ids(*doc),
                                   stopwords, vocab, PrepMode::Apply));
  }
  return assemble_prepared(std::move(train_docs), std::move(test_docs),
                           std::move(catalog), std::move(vocab));
}

PreparedCorpus prepare_corpus(const std::vector<RawDocument>& corpus,
                              const StopwordList& stopwords) {
  std::vector<const RawDocument*> train, test;
  for (const auto& doc : corpus) {
    if (doc.split_hint == Split::Test) {
      test.push_back(&doc);
    } else {
      train.push_back(&doc);
    }
  }
  return prepare_corpus(train, test, stopwords);
}

std::vector<double> background_probs(
    const std::vector<ProcessedDocument>& train_docs, std::size_t vocab_size) {
  std::vector<double> probs(vocab_size, 0.0);
  double total = 0.0;
  for (const auto& doc : train_docs) {
    for (const TermId term : doc.tokens) {
      probs[term] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (auto& p : probs) p /= total;
  }
  return probs;
}

namespace {

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  std::size_t n_threads =
      threads > 0 ? static_cast<std::size_t>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, count);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += n_threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<const ProcessedDocument*> docs_with_label(
    const std::vector<ProcessedDocument>& docs, LabelId label, bool negate) {
  std::vector<const ProcessedDocument*> selected;
  for (const auto& doc : docs) {
    const bool has =
        std::binary_search(doc.labels.begin(), doc.labels.end(), label);
    if (has != negate) selected.push_back(&doc);
  }
  return selected;
}

std::vector<int> first_label_slots(const PreparedCorpus& corpus) {
  std::vector<int> slots(corpus.train_docs.size(), 0);
  for (std::size_t i = 0; i < corpus.train_docs.size(); ++i) {
    if (!corpus.train_docs[i].labels.empty()) {
      slots[i] = static_cast<int>(corpus.train_docs[i].labels[0]);
    }
  }
  return slots;
}

// --- naive bayes ------------------------------------------------------

class NbMulticlass final : public Classifier {
 public:
  explicit NbMulticlass(NBModel model) : model_(std::move(model)) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    for (std::size_t i = 0; i < corpus.test_matrix.row_count(); ++i) {
      out[i] = {static_cast<LabelId>(
          nb_predict(model_, corpus.test_matrix.rows[i]))};
    }
    return out;
  }

 private:
  NBModel model_;
};

// Per-label yes/no naive bayes; slot 0 = no, slot 1 = yes, so a tied
// score resolves to no.
class NbBinaryRelevance final : public Classifier {
 public:
  explicit NbBinaryRelevance(std::vector<std::optional<NBModel>> per_label)
      : per_label_(std::move(per_label)) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    for (std::size_t i = 0; i < corpus.test_matrix.row_count(); ++i) {
      const auto& row = corpus.test_matrix.rows[i];
      for (LabelId label = 0; label < per_label_.size(); ++label) {
        if (!per_label_[label]) continue;  // no positive training docs
        const auto scores = nb_scores(*per_label_[label], row);
        if (scores.front().first == 1 &&
            scores.front().second > scores.back().second) {
          out[i].push_back(label);
        }
      }
    }
    return out;
  }

 private:
  std::vector<std::optional<NBModel>> per_label_;
};

// --- k nearest neighbours ----------------------------------------------

class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(const ClassifierSpec& spec, bool multilabel)
      : multilabel_(multilabel), spec_(spec) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    if (corpus.train_matrix.row_count() == 0) {
      throw std::invalid_argument("empty training set");
    }
    if (spec_.k < 1 ||
        static_cast<std::size_t>(spec_.k) > corpus.train_matrix.row_count()) {
      throw std::invalid_argument("k out of range");
    }
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    std::vector<int> row_class;
    if (!multilabel_) row_class = first_label_slots(corpus);
    parallel_for(corpus.test_docs.size(), spec_.threads, [&](std::size_t i) {
      const auto neighbors = knn_neighbors(
          corpus.train_matrix, corpus.test_matrix.rows[i], spec_.k);
      if (!multilabel_) {
        out[i] = {static_cast<LabelId>(
            knn_vote(neighbors, row_class, corpus.catalog.size()))};
        return;
      }
      // Per-label yes/no vote over the shared neighbour set; the tie
      // chain (votes, then summed distance) ends at no.
      std::vector<LabelId> predicted;
      for (LabelId label = 0; label < corpus.catalog.size(); ++label) {
        int yes = 0, no = 0;
        double yes_dist = 0.0, no_dist = 0.0;
        for (const auto& [dist, row] : neighbors) {
          const auto& labels = corpus.train_docs[row].labels;
          if (std::binary_search(labels.begin(), labels.end(), label)) {
            ++yes;
            yes_dist += dist;
          } else {
            ++no;
            no_dist += dist;
          }
        }
        if (yes > no || (yes == no && yes_dist < no_dist)) {
          predicted.push_back(label);
        }
      }
      out[i] = std::move(predicted);
    });
    return out;
  }

 private:
  bool multilabel_;
  ClassifierSpec spec_;
};

// --- linear svm ---------------------------------------------------------

// One-vs-rest linear SVMs; multiclass decisions take the argmax score,
// multilabel keeps every label scoring >= 0.
class SvmOneVsRest final : public Classifier {
 public:
  SvmOneVsRest(std::vector<std::optional<LinearModel>> per_label,
               std::vector<double> constant_scores, bool multilabel)
      : multilabel_(multilabel),
        per_label_(std::move(per_label)),
        constant_scores_(std::move(constant_scores)) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    for (std::size_t i = 0; i < corpus.test_matrix.row_count(); ++i) {
      const auto& row = corpus.test_matrix.rows[i];
      if (multilabel_) {
        for (LabelId label = 0; label < per_label_.size(); ++label) {
          if (score(label, row) >= 0.0) out[i].push_back(label);
        }
      } else {
        LabelId best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (LabelId label = 0; label < per_label_.size(); ++label) {
          const double s = score(label, row);
          if (s > best_score) {
            best_score = s;
            best = label;
          }
        }
        out[i] = {best};
      }
    }
    return out;
  }

 private:
  double score(LabelId label, const SparseVector& row) const {
    if (!per_label_[label]) return constant_scores_[label];
    return svm_predict(*per_label_[label], row);
  }

  bool multilabel_;
  std::vector<std::optional<LinearModel>> per_label_;
  std::vector<double> constant_scores_;
};

// --- copula ---------------------------------------------------------------

class CopulaMulticlass final : public Classifier {
 public:
  explicit CopulaMulticlass(std::vector<CopulaClassModel> models)
      : models_(std::move(models)) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    parallel_for(corpus.test_docs.size(), 0, [&](std::size_t i) {
      LabelId best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto& model : models_) {
        const double s = copula_score(model, corpus.test_docs[i]);
        if (s > best_score) {
          best_score = s;
          best = model.label;
        }
      }
      out[i] = {best};
    });
    return out;
  }

 private:
  std::vector<CopulaClassModel> models_;
};

// Streaming c vs not-c copula binary relevance: each label's model pair is
// fitted, applied to every test document and discarded before the next
// label, so only one complement co-occurrence table is alive at a time.
class CopulaBinaryRelevance final : public Classifier {
 public:
  CopulaBinaryRelevance(const ClassifierSpec& spec,
                        const PreparedCorpus& corpus)
      : spec_(spec),
        background_(
            background_probs(corpus.train_docs, corpus.vocab.size())) {}

  std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const override {
    std::vector<std::vector<LabelId>> out(corpus.test_docs.size());
    const std::size_t total = corpus.catalog.total_train;
    for (LabelId label = 0; label < corpus.catalog.size(); ++label) {
      const std::size_t n_pos = corpus.catalog.train_counts[label];
      if (n_pos == 0 || n_pos == total) continue;  // no usable complement
      const auto pos_docs = docs_with_label(corpus.train_docs, label, false);
      const auto neg_docs = docs_with_label(corpus.train_docs, label, true);
      const CopulaClassModel pos =
          copula_fit(pos_docs, label, corpus.vocab.size(), n_pos, total,
                     background_, spec_.metric, spec_.lambda);
      const CopulaClassModel neg =
          copula_fit(neg_docs, label, corpus.vocab.size(), total - n_pos,
                     total, background_, spec_.metric, spec_.lambda);
      parallel_for(corpus.test_docs.size(), spec_.threads,
                   [&](std::size_t i) {
                     const double score_pos =
                         copula_score(pos, corpus.test_docs[i]);
                     const double score_neg =
                         copula_score(neg, corpus.test_docs[i]);
                     if (score_pos > score_neg) out[i].push_back(label);
                   });
    }
    return out;
  }

 private:
  ClassifierSpec spec_;
  std::vector<double> background_;
};

}  // namespace

std::unique_ptr<Classifier> make_nb_multiclass(NBModel model) {
  return std::make_unique<NbMulticlass>(std::move(model));
}

std::unique_ptr<Classifier> make_nb_binary_relevance(
    std::vector<std::optional<NBModel>> per_label) {
  return std::make_unique<NbBinaryRelevance>(std::move(per_label));
}

std::unique_ptr<Classifier> make_knn(const ClassifierSpec& spec,
                                     bool multilabel) {
  return std::make_unique<KnnClassifier>(spec, multilabel);
}

std::unique_ptr<Classifier> make_svm_ovr(
    std::vector<std::optional<LinearModel>> per_label,
    std::vector<double> constant_scores, bool multilabel) {
  return std::make_unique<SvmOneVsRest>(std::move(per_label),
                                        std::move(constant_scores),
                                        multilabel);
}

std::unique_ptr<Classifier> make_copula_multiclass(
    std::vector<CopulaClassModel> models) {
  return std::make_unique<CopulaMulticlass>(std::move(models));
}

std::unique_ptr<Classifier> make_copula_binary_relevance(
    const ClassifierSpec& spec, const PreparedCorpus& corpus) {
  return std::make_unique<CopulaBinaryRelevance>(spec, corpus);
}

std::vector<CopulaClassModel> fit_copula_models(const PreparedCorpus& corpus,
                                                const ClassifierSpec& spec) {
  const auto background =
      background_probs(corpus.train_docs, corpus.vocab.size());
  std::vector<CopulaClassModel> models(corpus.catalog.size());
  parallel_for(corpus.catalog.size(), spec.threads, [&](std::size_t label) {
    const auto docs = docs_with_label(corpus.train_docs,
                                      static_cast<LabelId>(label), false);
    models[label] =
        copula_fit(docs, static_cast<LabelId>(label), corpus.vocab.size(),
                   corpus.catalog.train_counts[label],
                   corpus.catalog.total_train, background, spec.metric,
                   spec.lambda);
  });
  return models;
}

namespace {

std::vector<std::optional<NBModel>> fit_nb_per_label(
    const PreparedCorpus& corpus, const ClassifierSpec& spec) {
  const auto train_labels = corpus.train_label_sets();
  const double total = static_cast<double>(train_labels.size());
  std::vector<std::optional<NBModel>> per_label(corpus.catalog.size());
  for (LabelId label = 0; label < corpus.catalog.size(); ++label) {
    std::vector<int> row_class(train_labels.size(), 0);
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < train_labels.size(); ++i) {
      if (std::binary_search(train_labels[i].begin(), train_labels[i].end(),
                             label)) {
        row_class[i] = 1;
        ++n_pos;
      }
    }
    if (n_pos == 0) continue;  // always-no
    const std::vector<double> priors = {(total - n_pos) / total,
                                        n_pos / total};
    per_label[label] = nb_fit(corpus.train_matrix, row_class, 2, priors,
                              SmoothingConfig{spec.alpha});
  }
  return per_label;
}

}  // namespace

std::unique_ptr<Classifier> fit_classifier(const PreparedCorpus& corpus,
                                           const ClassifierSpec& spec,
                                           bool multilabel) {
  switch (spec.kind) {
    case ClassifierKind::NaiveBayes: {
      if (multilabel) {
        return make_nb_binary_relevance(fit_nb_per_label(corpus, spec));
      }
      std::vector<int> row_class = first_label_slots(corpus);
      std::vector<double> priors(corpus.catalog.size(), 0.0);
      for (std::size_t c = 0; c < corpus.catalog.size(); ++c) {
        priors[c] = corpus.catalog.total_train > 0
                        ? static_cast<double>(corpus.catalog.train_counts[c]) /
                              corpus.catalog.total_train
                        : 0.0;
      }
      return make_nb_multiclass(nb_fit(corpus.train_matrix, row_class,
                                       corpus.catalog.size(), priors,
                                       SmoothingConfig{spec.alpha}));
    }
    case ClassifierKind::Knn:
      if (corpus.train_matrix.row_count() == 0) {
        throw std::invalid_argument("empty training set");
      }
      if (spec.k < 1 || static_cast<std::size_t>(spec.k) >
                            corpus.train_matrix.row_count()) {
        throw std::invalid_argument("k out of range");
      }
      return make_knn(spec, multilabel);
    case ClassifierKind::Svm: {
      const std::size_t n_labels = corpus.catalog.size();
      std::vector<std::optional<LinearModel>> per_label(n_labels);
      std::vector<double> constant(n_labels, 0.0);
      const auto train_labels = corpus.train_label_sets();
      parallel_for(n_labels, spec.threads, [&](std::size_t label) {
        std::vector<int> y(train_labels.size(), -1);
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < train_labels.size(); ++i) {
          if (std::binary_search(train_labels[i].begin(),
                                 train_labels[i].end(),
                                 static_cast<LabelId>(label))) {
            y[i] = 1;
            ++n_pos;
          }
        }
        if (n_pos == 0) {
          constant[label] = -std::numeric_limits<double>::infinity();
          return;
        }
        if (n_pos == train_labels.size()) {
          constant[label] = std::numeric_limits<double>::infinity();
          return;
        }
        SvmOptions options;
        options.c = spec.c;
        options.seed = derive_seed(spec.seed, "svm:" + std::to_string(label));
        per_label[label] = svm_fit(corpus.train_matrix, y, options);
      });
      return make_svm_ovr(std::move(per_label), std::move(constant),
                          multilabel);
    }
    case ClassifierKind::Copula:
      if (multilabel) return make_copula_binary_relevance(spec, corpus);
      return make_copula_multiclass(fit_copula_models(corpus, spec));
  }
  throw std::logic_error("unreachable classifier kind");
}

}  // namespace textclass
