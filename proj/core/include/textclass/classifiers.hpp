#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "textclass/corpus.hpp"
#include "textclass/sparse.hpp"

namespace textclass {

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes (additive smoothing, TF-IDF mass as counts)
// ---------------------------------------------------------------------------

struct SmoothingConfig {
  double alpha = 1.0;  // 1 = Laplace, (0,1) = Lidstone
};

struct NBModel {
  double alpha = 1.0;
  std::vector<double> log_prior;               // per class slot
  std::vector<std::vector<double>> log_prob;   // per class slot, dense |V|

  std::size_t classes() const { return log_prior.size(); }

  void save(const std::string& path) const;
  static NBModel load(const std::string& path);
};

// row_class[i] in [0, n_classes) selects each training row's class slot;
// feature mass is summed per class, then smoothed:
// P(w_i|t) = (n_i + alpha) / (N + alpha |V|).
NBModel nb_fit(const SparseMatrix& matrix, const std::vector<int>& row_class,
               std::size_t n_classes, const std::vector<double>& priors,
               const SmoothingConfig& cfg);

// score(t) = log P(t) + sum_w weight(d,w) * log P(w|t), ranked descending
// (ties by class slot). An all-zero row falls back to the prior ranking.
std::vector<std::pair<int, double>> nb_scores(const NBModel& model,
                                              const SparseVector& row);
int nb_predict(const NBModel& model, const SparseVector& row);

// ---------------------------------------------------------------------------
// Brute-force K nearest neighbours, Manhattan distance, uniform votes
// ---------------------------------------------------------------------------

struct KnnConfig {
  int k = 15;
};

// The k smallest Manhattan distances, sorted by (distance, row index).
std::vector<std::pair<double, std::size_t>> knn_neighbors(
    const SparseMatrix& train, const SparseVector& query, int k);

// Majority vote; ties broken by smaller summed distance, then by class slot.
int knn_vote(const std::vector<std::pair<double, std::size_t>>& neighbors,
             const std::vector<int>& row_class, std::size_t n_classes);

int knn_predict(const SparseMatrix& train, const std::vector<int>& row_class,
                std::size_t n_classes, const SparseVector& query,
                const KnnConfig& cfg);

// ---------------------------------------------------------------------------
// Linear SVM with squared-hinge loss, trained by dual coordinate descent
// ---------------------------------------------------------------------------

struct LinearModel {
  std::vector<double> weights;  // over the feature space
  double bias = 0.0;
  double c = 1.0;
  std::size_t epochs = 0;
  // Dual objective after each epoch. Exact per-coordinate minimization
  // makes this sequence non-increasing; the primal is not monotone under
  // dual coordinate descent.
  std::vector<double> epoch_objective;

  void save(const std::string& path) const;
  static LinearModel load(const std::string& path);
};

struct SvmOptions {
  double c = 1.0;
  double tolerance = 1e-4;  // max projected-gradient violation
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 0;
};

// labels are +1/-1 per row; both signs must be present. The bias is
// trained as an implicit constant-1 feature.
LinearModel svm_fit(const SparseMatrix& matrix, const std::vector<int>& labels,
                    const SvmOptions& options);

// w.x + b; >= 0 classifies positive.
double svm_predict(const LinearModel& model, const SparseVector& row);

// 0.5||w||^2 + C sum max(0, 1 - y(wx+b))^2 for a fitted model.
double svm_primal_objective(const LinearModel& model,
                            const SparseMatrix& matrix,
                            const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Binary relevance wrapper
// ---------------------------------------------------------------------------

// A scored document as the classifiers see it: TF-IDF row for NB/KNN/SVM,
// processed tokens for the copula model.
struct DocInput {
  const SparseVector* row = nullptr;
  const ProcessedDocument* doc = nullptr;
};

class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;
  virtual bool decide(const DocInput& input) const = 0;
};

// Labels with no positive training documents are never predicted.
class AlwaysNoClassifier final : public BinaryClassifier {
 public:
  bool decide(const DocInput&) const override { return false; }
};

// Builds the yes/no classifier for one label given the per-training-doc
// positive mask; never called when the mask is all-negative.
using BinaryFactory = std::function<std::unique_ptr<BinaryClassifier>(
    const std::vector<char>& positive, LabelId label)>;

struct BinaryRelevanceModel {
  std::vector<LabelId> labels;
  std::vector<std::unique_ptr<BinaryClassifier>> classifiers;
};

BinaryRelevanceModel br_fit(
    const BinaryFactory& factory, const LabelCatalog& catalog,
    const std::vector<std::vector<LabelId>>& train_labels);

// Every label whose classifier answers yes; may be empty.
std::vector<LabelId> br_predict(const BinaryRelevanceModel& model,
                                const DocInput& input);

}  // namespace textclass
