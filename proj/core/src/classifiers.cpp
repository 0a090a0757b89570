#include "textclass/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "textclass/random.hpp"

#include <nlohmann/json.hpp>

namespace textclass {

NBModel nb_fit(const SparseMatrix& matrix, const std::vector<int>& row_class,
               std::size_t n_classes, const std::vector<double>& priors,
               const SmoothingConfig& cfg) {
  if (matrix.cols == 0) throw std::invalid_argument("empty vocabulary");
  if (cfg.alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (row_class.size() != matrix.row_count()) {
    throw std::invalid_argument("row/class size mismatch");
  }
  if (priors.size() != n_classes) {
    throw std::invalid_argument("prior/class size mismatch");
  }

  std::vector<std::vector<double>> mass(n_classes,
                                        std::vector<double>(matrix.cols, 0.0));
  std::vector<double> totals(n_classes, 0.0);
  for (std::size_t r = 0; r < matrix.row_count(); ++r) {
    auto& class_mass = mass[row_class[r]];
    for (const auto& [term, weight] : matrix.rows[r].entries) {
      class_mass[term] += weight;
      totals[row_class[r]] += weight;
    }
  }

  NBModel model;
  model.alpha = cfg.alpha;
  model.log_prior.resize(n_classes);
  model.log_prob.resize(n_classes);
  const double vocab = static_cast<double>(matrix.cols);
  for (std::size_t c = 0; c < n_classes; ++c) {
    model.log_prior[c] = priors[c] > 0.0
                             ? std::log(priors[c])
                             : -std::numeric_limits<double>::infinity();
    auto& lp = model.log_prob[c];
    lp.resize(matrix.cols);
    const double denom = std::log(totals[c] + cfg.alpha * vocab);
    for (std::size_t t = 0; t < matrix.cols; ++t) {
      lp[t] = std::log(mass[c][t] + cfg.alpha) - denom;
    }
  }
  return model;
}

std::vector<std::pair<int, double>> nb_scores(const NBModel& model,
                                              const SparseVector& row) {
  std::vector<std::pair<int, double>> scores;
  scores.reserve(model.classes());
  for (std::size_t c = 0; c < model.classes(); ++c) {
    double score = model.log_prior[c];
    const auto& lp = model.log_prob[c];
    for (const auto& [term, weight] : row.entries) {
      score += weight * lp[term];
    }
    scores.emplace_back(static_cast<int>(c), score);
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  return scores;
}

int nb_predict(const NBModel& model, const SparseVector& row) {
  return nb_scores(model, row).front().first;
}

void NBModel::save(const std::string& path) const {
  nlohmann::json j;
  j["kind"] = "naive_bayes";
  j["alpha"] = alpha;
  j["log_prior"] = log_prior;
  j["log_prob"] = log_prob;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << j.dump() << "\n";
}

NBModel NBModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("kind") != "naive_bayes") {
    throw std::runtime_error("not a naive_bayes model: " + path);
  }
  NBModel m;
  m.alpha = j.at("alpha").get<double>();
  m.log_prior = j.at("log_prior").get<std::vector<double>>();
  m.log_prob = j.at("log_prob").get<std::vector<std::vector<double>>>();
  return m;
}

std::vector<std::pair<double, std::size_t>> knn_neighbors(
    const SparseMatrix& train, const SparseVector& query, int k) {
  if (train.row_count() == 0) {
    throw std::invalid_argument("empty training set");
  }
  if (k < 1 || static_cast<std::size_t>(k) > train.row_count()) {
    throw std::invalid_argument("k out of range");
  }
  std::vector<std::pair<double, std::size_t>> distances;
  distances.reserve(train.row_count());
  for (std::size_t r = 0; r < train.row_count(); ++r) {
    distances.emplace_back(manhattan_distance(train.rows[r], query), r);
  }
  std::partial_sort(distances.begin(), distances.begin() + k,
                    distances.end());
  distances.resize(k);
  return distances;
}

int knn_vote(const std::vector<std::pair<double, std::size_t>>& neighbors,
             const std::vector<int>& row_class, std::size_t n_classes) {
  std::vector<int> votes(n_classes, 0);
  std::vector<double> summed(n_classes, 0.0);
  for (const auto& [dist, row] : neighbors) {
    votes[row_class[row]] += 1;
    summed[row_class[row]] += dist;
  }
  int best = 0;
  for (std::size_t c = 1; c < n_classes; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && summed[c] < summed[best])) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

int knn_predict(const SparseMatrix& train, const std::vector<int>& row_class,
                std::size_t n_classes, const SparseVector& query,
                const KnnConfig& cfg) {
  return knn_vote(knn_neighbors(train, query, cfg.k), row_class, n_classes);
}

double svm_primal_objective(const LinearModel& model,
                            const SparseMatrix& matrix,
                            const std::vector<int>& labels) {
  double obj = model.bias * model.bias;
  for (const double v : model.weights) obj += v * v;
  obj *= 0.5;
  for (std::size_t i = 0; i < matrix.row_count(); ++i) {
    const double slack =
        1.0 - labels[i] * svm_predict(model, matrix.rows[i]);
    if (slack > 0.0) obj += model.c * slack * slack;
  }
  return obj;
}

LinearModel svm_fit(const SparseMatrix& matrix, const std::vector<int>& labels,
                    const SvmOptions& options) {
  if (labels.size() != matrix.row_count()) {
    throw std::invalid_argument("row/label size mismatch");
  }
  bool has_pos = false, has_neg = false;
  for (const int y : labels) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      throw std::invalid_argument("labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("degenerate labels: both classes required");
  }
  if (options.c <= 0.0) throw std::invalid_argument("C must be positive");

  // Dual coordinate descent on the L2-loss SVM (alpha_i >= 0, diagonal
  // 1/(2C) added to Q). The bias is an implicit constant-1 feature.
  const std::size_t n = matrix.row_count();
  const std::size_t bias_index = matrix.cols;
  const double diag = 1.0 / (2.0 * options.c);

  std::vector<double> q_ii(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 1.0;  // bias feature
    for (const auto& [term, weight] : matrix.rows[i].entries) {
      sq += weight * weight;
    }
    q_ii[i] = sq + diag;
  }

  std::vector<double> w(matrix.cols + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  LinearModel model;
  model.c = options.c;
  SeededRng rng(options.seed);
  for (std::size_t epoch = 0; epoch < options.max_epochs; ++epoch) {
    rng.shuffle(order);
    double max_violation = 0.0;
    for (const std::size_t i : order) {
      double margin = w[bias_index];
      for (const auto& [term, weight] : matrix.rows[i].entries) {
        margin += w[term] * weight;
      }
      const double y = labels[i];
      const double grad = y * margin - 1.0 + diag * alpha[i];
      const double projected =
          alpha[i] > 0.0 ? grad : std::min(grad, 0.0);
      max_violation = std::max(max_violation, std::abs(projected));
      if (projected == 0.0) continue;
      const double next = std::max(alpha[i] - grad / q_ii[i], 0.0);
      const double delta = (next - alpha[i]) * y;
      if (delta != 0.0) {
        for (const auto& [term, weight] : matrix.rows[i].entries) {
          w[term] += delta * weight;
        }
        w[bias_index] += delta;
      }
      alpha[i] = next;
    }
    // dual objective 0.5(||w||^2 + D sum a_i^2) - sum a_i
    double dual = 0.0;
    for (const double v : w) dual += v * v;
    for (const double a : alpha) dual += diag * a * a - 2.0 * a;
    model.epoch_objective.push_back(0.5 * dual);
    model.epochs = epoch + 1;
    if (max_violation < options.tolerance) break;
  }

  model.bias = w[bias_index];
  w.pop_back();
  model.weights = std::move(w);
  return model;
}

double svm_predict(const LinearModel& model, const SparseVector& row) {
  double score = model.bias;
  for (const auto& [term, weight] : row.entries) {
    if (term < model.weights.size()) score += model.weights[term] * weight;
  }
  return score;
}

void LinearModel::save(const std::string& path) const {
  nlohmann::json j;
  j["kind"] = "linear_svm";
  j["c"] = c;
  j["bias"] = bias;
  j["weights"] = weights;
  j["epochs"] = epochs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << j.dump() << "\n";
}

LinearModel LinearModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("kind") != "linear_svm") {
    throw std::runtime_error("not a linear_svm model: " + path);
  }
  LinearModel m;
  m.c = j.at("c").get<double>();
  m.bias = j.at("bias").get<double>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.epochs = j.at("epochs").get<std::size_t>();
  return m;
}

BinaryRelevanceModel br_fit(
    const BinaryFactory& factory, const LabelCatalog& catalog,
    const std::vector<std::vector<LabelId>>& train_labels) {
  BinaryRelevanceModel model;
  model.labels.reserve(catalog.size());
  model.classifiers.reserve(catalog.size());
  std::vector<char> positive(train_labels.size(), 0);
  for (LabelId label = 0; label < catalog.size(); ++label) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < train_labels.size(); ++i) {
      const bool has = std::binary_search(train_labels[i].begin(),
                                          train_labels[i].end(), label);
      positive[i] = has ? 1 : 0;
      n_pos += has;
    }
    model.labels.push_back(label);
    if (n_pos == 0) {
      model.classifiers.push_back(std::make_unique<AlwaysNoClassifier>());
    } else {
      model.classifiers.push_back(factory(positive, label));
    }
  }
  return model;
}

std::vector<LabelId> br_predict(const BinaryRelevanceModel& model,
                                const DocInput& input) {
  std::vector<LabelId> predicted;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    if (model.classifiers[i]->decide(input)) {
      predicted.push_back(model.labels[i]);
    }
  }
  return predicted;
}

}  // namespace textclass
