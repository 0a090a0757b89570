#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "textclass/classifiers.hpp"
#include "textclass/copula.hpp"
#include "textclass/corpus.hpp"
#include "textclass/features.hpp"
#include "textclass/sparse.hpp"
#include "textclass/textprep.hpp"

namespace textclass {

enum class ClassifierKind { NaiveBayes, Knn, Svm, Copula };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  double alpha = 1.0;            // naive bayes smoothing
  int k = 0;                     // knn neighbours; 0 = default rule (15/100)
  double c = 1.0;                // svm regularization
  double lambda = 0.99;          // copula JM mixture weight
  CoocMetric metric = CoocMetric::Pmi;
  std::uint64_t seed = 0;
  int threads = 0;               // 0 = hardware concurrency

  // Short identifier used in report files and figure-data columns.
  std::string name() const;
};

// A corpus ready for training: catalog over all labels, vocabulary and
// document frequencies fitted on the training split, both splits
// preprocessed and TF-IDF featurized.
struct PreparedCorpus {
  LabelCatalog catalog;
  Vocabulary vocab;
  std::vector<ProcessedDocument> train_docs;
  std::vector<ProcessedDocument> test_docs;
  SparseMatrix train_matrix;
  SparseMatrix test_matrix;

  bool multilabel_corpus() const;
  std::vector<std::vector<LabelId>> train_label_sets() const;
  std::vector<std::vector<LabelId>> gold_test_labels() const;
};

PreparedCorpus prepare_corpus(const std::vector<const RawDocument*>& train,
                              const std::vector<const RawDocument*>& test,
                              const StopwordList& stopwords);

// Convenience split on split hints (documents without a hint train).
PreparedCorpus prepare_corpus(const std::vector<RawDocument>& corpus,
                              const StopwordList& stopwords);

// Builds matrices for documents that were preprocessed earlier (e.g. read
// back from a processed corpus file).
PreparedCorpus assemble_prepared(std::vector<ProcessedDocument> train,
                                 std::vector<ProcessedDocument> test,
                                 LabelCatalog catalog, Vocabulary vocab);

// Fitted classifier scoring the test split of the corpus it was fitted
// on (classifiers that search the training set, KNN and streamed copula
// binary relevance, read it back through the corpus argument).
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<std::vector<LabelId>> predict_all(
      const PreparedCorpus& corpus) const = 0;
};

std::unique_ptr<Classifier> fit_classifier(const PreparedCorpus& corpus,
                                           const ClassifierSpec& spec,
                                           bool multilabel);

// Per-class copula models for single-label classification (argmax score).
std::vector<CopulaClassModel> fit_copula_models(const PreparedCorpus& corpus,
                                                const ClassifierSpec& spec);
std::vector<double> background_probs(
    const std::vector<ProcessedDocument>& train_docs, std::size_t vocab_size);

// Classifier wrappers over already-fitted models, shared between the fit
// path and model files read back from disk. A disengaged optional stands
// for a label with no usable training signal; its constant score decides.
std::unique_ptr<Classifier> make_nb_multiclass(NBModel model);
std::unique_ptr<Classifier> make_nb_binary_relevance(
    std::vector<std::optional<NBModel>> per_label);
std::unique_ptr<Classifier> make_knn(const ClassifierSpec& spec,
                                     bool multilabel);
std::unique_ptr<Classifier> make_svm_ovr(
    std::vector<std::optional<LinearModel>> per_label,
    std::vector<double> constant_scores, bool multilabel);
std::unique_ptr<Classifier> make_copula_multiclass(
    std::vector<CopulaClassModel> models);
std::unique_ptr<Classifier> make_copula_binary_relevance(
    const ClassifierSpec& spec, const PreparedCorpus& corpus);

}  // namespace textclass
