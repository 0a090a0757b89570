#pragma once

#include <string>
#include <vector>

#include "textclass/features.hpp"
#include "textclass/textprep.hpp"

namespace textclass {

// Bivariate Gumbel copula C(u,v) = exp(-((-ln u)^theta + (-ln v)^theta)^(1/theta)).
// theta = 1 reduces to the product u*v; theta -> inf approaches min(u,v).
// Requires u, v in (0,1] and theta >= 1.
double gumbel_bivariate(double u, double v, double theta);
double gumbel_log_bivariate(double u, double v, double theta);

// Per-class dependence classifier: Jelinek-Mercer smoothed term
// probabilities chained through bivariate Gumbel copulas whose theta
// comes from the class co-occurrence table.
struct CopulaClassModel {
  LabelId label = 0;
  double lambda = 0.99;  // weight of the class model in the JM mixture
  double log_prior = 0.0;
  std::vector<double> u;  // smoothed probability per term
  CooccurrenceModel cooc;
};

// Composes the class language model, the sentence co-occurrence table and
// the theta normalization. background holds corpus-level ML probabilities.
CopulaClassModel copula_fit(const std::vector<const ProcessedDocument*>& docs,
                            LabelId label, std::size_t vocab_size,
                            std::size_t label_train_count,
                            std::size_t total_train,
                            const std::vector<double>& background,
                            CoocMetric metric, double lambda);

// Log-score of a processed document: log prior plus one chain of bivariate
// copulas per sentence over consecutive retained tokens. Unknown terms are
// already gone after apply-mode preprocessing; single-token sentences
// contribute log u directly; interior chain terms feed two factors.
// force_independence scores with every theta pinned to 1.
double copula_score(const CopulaClassModel& model, const ProcessedDocument& doc,
                    bool force_independence = false);

// Bundle layout: manifest.json naming metric/lambda plus one language-model
// JSON payload and one theta CSV per class.
void save_copula_bundle(const std::vector<CopulaClassModel>& models,
                        const std::vector<double>& background,
                        const std::string& dir);
std::vector<CopulaClassModel> load_copula_bundle(const std::string& dir);

}  // namespace textclass
