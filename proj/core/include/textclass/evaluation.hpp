#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textclass/corpus.hpp"
#include "textclass/pipeline.hpp"
#include "textclass/textprep.hpp"

namespace textclass {

struct ClassConfusion {
  std::string label;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct EvalReport {
  std::string classifier;
  std::string corpus;
  int fold = -1;  // -1 for fixed-split runs
  std::vector<ClassConfusion> per_class;  // catalog label order
  double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;

  void save_json(const std::string& path) const;
  static EvalReport load_json(const std::string& path);
  void save_csv(const std::string& path) const;
};

struct LabeledDoc {
  std::string id;
  std::vector<LabelId> labels;  // sorted ascending
};

// One-vs-rest confusion per label, micro-averaged over labels. gold and
// pred must be aligned by document id.
EvalReport micro_f1(const std::vector<LabeledDoc>& gold,
                    const std::vector<LabeledDoc>& pred,
                    const LabelCatalog& catalog);

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank test
// ---------------------------------------------------------------------------

enum class SignifCategory { I, II, III };

std::string to_string(SignifCategory category);

struct SignificanceResult {
  std::size_t n = 0;  // nonzero differences
  double w_plus = 0.0, w_minus = 0.0, w_stat = 0.0;
  double p_value = 1.0;
  SignifCategory category = SignifCategory::III;
  bool asterisk = false;    // significance direction contradicts micro-F1
  bool degenerate = false;  // every pair tied
  bool exact = false;       // exact enumeration vs normal approximation

  void save_json(const std::string& path) const;
};

// Two-sided test on paired samples; zero differences are dropped, ties get
// average ranks. Exact enumeration for n <= 20, otherwise the normal
// approximation with tie and continuity corrections.
SignificanceResult wilcoxon_signed_rank(const std::vector<double>& a,
                                        const std::vector<double>& b);

namespace detail {
// Both paths exposed so they can be cross-checked around the switchover.
double wilcoxon_exact_p(const std::vector<double>& a,
                        const std::vector<double>& b);
double wilcoxon_normal_p(const std::vector<double>& a,
                         const std::vector<double>& b);
}  // namespace detail

enum class SignifMode { PerFold, PerCategory };

// Per-fold mode pairs fold micro-F1 values; per-category mode pairs
// per-class F1 values of one report per side (classes with no gold
// positives are skipped). The asterisk flags a signed-rank direction that
// contradicts the overall micro-F1 ordering.
SignificanceResult significance_protocol(const std::vector<EvalReport>& a,
                                         const std::vector<EvalReport>& b,
                                         SignifMode mode);

// ---------------------------------------------------------------------------
// Corpus statistics and figure data
// ---------------------------------------------------------------------------

struct CorpusStats {
  double var_tf = 0.0;       // mean over classes of within-class term
                             // relative-frequency variance
  double avg_doc_len = 0.0;  // mean pre-stop-word token count
  bool multi_label = false;

  void save_json(const std::string& path) const;
};

CorpusStats corpus_stats(const std::vector<ProcessedDocument>& docs,
                         const LabelCatalog& catalog, std::size_t vocab_size);

// Rows (class, train size, one F1 column per report) sorted by descending
// training class size; min/max size filter reproduces small-class views.
void emit_figure_data(const std::vector<EvalReport>& reports,
                      const LabelCatalog& catalog, const std::string& path,
                      std::size_t min_size = 0,
                      std::size_t max_size = SIZE_MAX);

// ---------------------------------------------------------------------------
// Cross-validation driver
// ---------------------------------------------------------------------------

struct CrossvalResult {
  std::vector<EvalReport> fold_reports;
  double mean_micro_f1 = 0.0;
};

// Refits vocabulary, features and models from scratch on each fold's
// training side and evaluates the held-out fold.
CrossvalResult crossval(const std::vector<RawDocument>& corpus,
                        const StopwordList& stopwords, const SplitSpec& split,
                        const ClassifierSpec& classifier, bool multilabel,
                        const std::string& corpus_name);

}  // namespace textclass
