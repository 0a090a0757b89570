// Command-line driver: prep / train / eval / crossval / signif / stats /
// figdata subcommands over a JSON run config, every field overridable by
// flags. Exit codes: 0 success, 1 internal failure, 2 usage error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textclass/runner.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string input, format, stopwords, corpus_name, outdir, run_id;
  std::uint64_t seed = 0;
  std::string split_kind;
  int kfold_k = 0;
  bool stratified = true;
  std::string classifier_kind;
  double alpha = 1.0;
  int knn_k = 0;
  double svm_c = 1.0;
  double lambda = 0.99;
  std::string metric;
  std::string multilabel;
  int threads = 0;
};

void add_run_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run config file");
  cmd->add_option("--input", o.input, "corpus path");
  cmd->add_option("--format", o.format,
                  "corpus format: jsonl | newsgroups | reuters-sgml");
  cmd->add_option("--stopwords", o.stopwords, "stop-word list path");
  cmd->add_option("--corpus-name", o.corpus_name, "corpus name in reports");
  cmd->add_option("--outdir", o.outdir, "output directory");
  cmd->add_option("--run-id", o.run_id, "run identifier");
  cmd->add_option("--seed", o.seed, "random seed (required)");
  cmd->add_option("--split", o.split_kind, "split kind: fixed | kfold");
  cmd->add_option("--kfold", o.kfold_k, "number of folds");
  cmd->add_option("--stratified", o.stratified, "stratify kfold splits");
  cmd->add_option("--classifier", o.classifier_kind,
                  "classifier: nb | knn | svm | copula");
  cmd->add_option("--alpha", o.alpha, "naive bayes smoothing pseudo-count");
  cmd->add_option("--k", o.knn_k, "knn neighbours (0 = default rule)");
  cmd->add_option("--c", o.svm_c, "svm regularization constant");
  cmd->add_option("--lambda", o.lambda, "copula JM mixture weight");
  cmd->add_option("--metric", o.metric, "copula metric: pmi | jaccard");
  cmd->add_option("--multilabel", o.multilabel,
                  "binary relevance: auto | yes | no");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

textclass::RunConfig build_config(const CLI::App* cmd,
                                  const CliOverrides& o) {
  textclass::RunConfig config;
  if (!o.config_path.empty()) {
    config = textclass::RunConfig::from_json_file(o.config_path);
  }
  auto given = [cmd](const std::string& flag) {
    return cmd->count(flag) > 0;
  };
  if (given("--input")) config.input = o.input;
  if (given("--format")) config.format = o.format;
  if (given("--stopwords")) config.stopwords = o.stopwords;
  if (given("--corpus-name")) config.corpus_name = o.corpus_name;
  if (given("--outdir")) config.outdir = o.outdir;
  if (given("--run-id")) config.run_id = o.run_id;
  if (given("--seed")) {
    config.seed = o.seed;
    config.seed_set = true;
  }
  if (given("--split")) {
    if (o.split_kind == "kfold") {
      config.split.kind = textclass::SplitSpec::Kind::KFold;
    } else if (o.split_kind == "fixed") {
      config.split.kind = textclass::SplitSpec::Kind::Fixed;
    } else {
      throw textclass::UsageError("split must be fixed or kfold");
    }
  }
  if (given("--kfold")) {
    config.split.kind = textclass::SplitSpec::Kind::KFold;
    config.split.k = o.kfold_k;
  }
  if (given("--stratified")) config.split.stratified = o.stratified;
  if (given("--classifier")) {
    config.classifier.kind =
        textclass::classifier_kind_from_string(o.classifier_kind);
  }
  if (given("--alpha")) config.classifier.alpha = o.alpha;
  if (given("--k")) config.classifier.k = o.knn_k;
  if (given("--c")) config.classifier.c = o.svm_c;
  if (given("--lambda")) config.classifier.lambda = o.lambda;
  if (given("--metric")) {
    config.classifier.metric = textclass::cooc_metric_from_string(o.metric);
  }
  if (given("--multilabel")) {
    if (o.multilabel == "auto") {
      config.multilabel = textclass::MultilabelMode::Auto;
    } else if (o.multilabel == "yes") {
      config.multilabel = textclass::MultilabelMode::Yes;
    } else if (o.multilabel == "no") {
      config.multilabel = textclass::MultilabelMode::No;
    } else {
      throw textclass::UsageError("multilabel must be auto, yes or no");
    }
  }
  if (given("--threads")) config.classifier.threads = o.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"text classification benchmark toolkit"};
  app.require_subcommand(1);

  CliOverrides prep_o, train_o, eval_o, crossval_o, stats_o;
  auto* prep = app.add_subcommand("prep", "preprocess a corpus");
  add_run_options(prep, prep_o);
  auto* train = app.add_subcommand("train", "fit the configured classifier");
  add_run_options(train, train_o);
  auto* eval = app.add_subcommand("eval", "score the test split");
  add_run_options(eval, eval_o);
  auto* crossval =
      app.add_subcommand("crossval", "run k-fold cross validation");
  add_run_options(crossval, crossval_o);
  auto* stats = app.add_subcommand("stats", "corpus property statistics");
  add_run_options(stats, stats_o);

  std::vector<std::string> signif_a, signif_b;
  std::string signif_mode = "per-fold";
  std::string signif_out = "significance.json";
  auto* signif =
      app.add_subcommand("signif", "Wilcoxon signed-rank significance test");
  signif->add_option("--a", signif_a, "report files for classifier A")
      ->required();
  signif->add_option("--b", signif_b, "report files for classifier B")
      ->required();
  signif->add_option("--mode", signif_mode, "per-fold | per-category");
  signif->add_option("--out", signif_out, "output JSON path");

  std::vector<std::string> fig_reports;
  std::string fig_catalog, fig_out = "figdata.csv";
  std::size_t fig_min = 0, fig_max = SIZE_MAX;
  auto* figdata =
      app.add_subcommand("figdata", "per-class F1 table for plotting");
  figdata->add_option("--reports", fig_reports, "report JSON files")
      ->required();
  figdata->add_option("--catalog", fig_catalog, "label catalog JSON")
      ->required();
  figdata->add_option("--out", fig_out, "output CSV path");
  figdata->add_option("--min-size", fig_min, "smallest training class size");
  figdata->add_option("--max-size", fig_max, "largest training class size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prep->parsed()) {
      textclass::cmd_prep(build_config(prep, prep_o));
    } else if (train->parsed()) {
      textclass::cmd_train(build_config(train, train_o));
    } else if (eval->parsed()) {
      textclass::cmd_eval(build_config(eval, eval_o));
    } else if (crossval->parsed()) {
      textclass::cmd_crossval(build_config(crossval, crossval_o));
    } else if (stats->parsed()) {
      textclass::cmd_stats(build_config(stats, stats_o));
    } else if (signif->parsed()) {
      textclass::cmd_signif(signif_a, signif_b, signif_mode, signif_out);
    } else if (figdata->parsed()) {
      textclass::cmd_figdata(fig_reports, fig_catalog, fig_out, fig_min,
                             fig_max);
    }
  } catch (const textclass::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
