#include "textclass/copula.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace textclass {

namespace {

// -ln u, snapping u within 1e-12 of 1 to exactly 0.
double neg_log(double u) {
  if (u >= 1.0 - 1e-12) return 0.0;
  return -std::log(u);
}

void check_unit(double u, const char* name) {
  if (!(u > 0.0) || u > 1.0) {
    throw std::domain_error(std::string(name) +
                            " must lie in (0,1], got " + std::to_string(u));
  }
}

}  // namespace

double gumbel_log_bivariate(double u, double v, double theta) {
  check_unit(u, "u");
  check_unit(v, "v");
  if (theta < 1.0) {
    throw std::invalid_argument("theta must be >= 1");
  }
  const double a = neg_log(u);
  const double b = neg_log(v);
  if (a == 0.0 && b == 0.0) return 0.0;
  if (a == 0.0) return -b;
  if (b == 0.0) return -a;
  if (theta == 1.0) return -(a + b);
  // (a^t + b^t)^(1/t) via logs so large theta cannot overflow.
  const double ta = theta * std::log(a);
  const double tb = theta * std::log(b);
  const double hi = std::max(ta, tb);
  const double log_sum = hi + std::log1p(std::exp(std::min(ta, tb) - hi));
  return -std::exp(log_sum / theta);
}

double gumbel_bivariate(double u, double v, double theta) {
  return std::exp(gumbel_log_bivariate(u, v, theta));
}

CopulaClassModel copula_fit(const std::vector<const ProcessedDocument*>& docs,
                            LabelId label, std::size_t vocab_size,
                            std::size_t label_train_count,
                            std::size_t total_train,
                            const std::vector<double>& background,
                            CoocMetric metric, double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0,1)");
  }
  if (background.size() != vocab_size) {
    throw std::invalid_argument("background size mismatch");
  }
  const ClassLanguageModel lm =
      fit_class_lm(docs, label, vocab_size, label_train_count, total_train);

  CopulaClassModel model;
  model.label = label;
  model.lambda = lambda;
  model.log_prior = lm.prior > 0.0
                        ? std::log(lm.prior)
                        : -std::numeric_limits<double>::infinity();
  model.u.resize(vocab_size);
  for (TermId t = 0; t < vocab_size; ++t) {
    model.u[t] = lambda * lm.prob(t) + (1.0 - lambda) * background[t];
  }

  const PairCounts counts = count_cooccurrence(docs, vocab_size);
  const auto f_table =
      metric == CoocMetric::Pmi ? pmi(counts) : jaccard(counts);
  model.cooc = normalize_theta(f_table, metric, label);
  return model;
}

double copula_score(const CopulaClassModel& model,
                    const ProcessedDocument& doc, bool force_independence) {
  double score = model.log_prior;
  for (const auto& sentence : doc.sentences) {
    if (sentence.size() == 1) {
      score += std::log(model.u[sentence.front()]);
      continue;
    }
    for (std::size_t k = 0; k + 1 < sentence.size(); ++k) {
      const TermId t1 = sentence[k];
      const TermId t2 = sentence[k + 1];
      const double theta =
          force_independence ? 1.0 : model.cooc.theta_of(t1, t2);
      score += gumbel_log_bivariate(model.u[t1], model.u[t2], theta);
    }
  }
  return score;
}

void save_copula_bundle(const std::vector<CopulaClassModel>& models,
                        const std::vector<double>& background,
                        const std::string& dir) {
  fs::create_directories(dir);
  nlohmann::json manifest;
  manifest["kind"] = "copula";
  if (!models.empty()) {
    manifest["metric"] = to_string(models.front().cooc.metric);
    manifest["lambda"] = models.front().lambda;
  }
  manifest["vocab_size"] = background.size();
  std::vector<LabelId> labels;
  for (const auto& m : models) labels.push_back(m.label);
  manifest["labels"] = labels;
  {
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest under " + dir);
    out << manifest.dump(2) << "\n";
  }
  {
    nlohmann::json bg;
    bg["probs"] = background;
    std::ofstream out(dir + "/background.json");
    out << bg.dump() << "\n";
  }
  for (const auto& model : models) {
    const std::string stem = dir + "/class_" + std::to_string(model.label);
    nlohmann::json lm;
    lm["label"] = model.label;
    lm["lambda"] = model.lambda;
    lm["prior"] = std::isinf(model.log_prior) ? 0.0
                                              : std::exp(model.log_prior);
    // u values are stored directly: they round-trip bit-exactly and the
    // bundle stays self-contained.
    lm["u"] = model.u;
    std::ofstream out(stem + "_lm.json");
    out << lm.dump() << "\n";
    model.cooc.save_csv(stem + "_theta.csv");
  }
}

std::vector<CopulaClassModel> load_copula_bundle(const std::string& dir) {
  std::ifstream min(dir + "/manifest.json");
  if (!min) throw std::runtime_error("cannot open copula manifest in " + dir);
  nlohmann::json manifest;
  min >> manifest;
  if (manifest.at("kind") != "copula") {
    throw std::runtime_error("not a copula bundle: " + dir);
  }
  std::vector<CopulaClassModel> models;
  for (const LabelId label :
       manifest.at("labels").get<std::vector<LabelId>>()) {
    const std::string stem = dir + "/class_" + std::to_string(label);
    std::ifstream in(stem + "_lm.json");
    if (!in) throw std::runtime_error("missing class payload: " + stem);
    nlohmann::json lm;
    in >> lm;
    CopulaClassModel model;
    model.label = label;
    model.lambda = lm.at("lambda").get<double>();
    const double prior = lm.at("prior").get<double>();
    model.log_prior = prior > 0.0
                          ? std::log(prior)
                          : -std::numeric_limits<double>::infinity();
    model.u = lm.at("u").get<std::vector<double>>();
    model.cooc = CooccurrenceModel::load_csv(stem + "_theta.csv");
    model.cooc.label = label;
    models.push_back(std::move(model));
  }
  return models;
}

}  // namespace textclass
