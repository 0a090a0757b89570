// Acceptance criteria runner: `acceptance <1..7|all>`.
//
// Each criterion prints one [PASS]/[FAIL]/[SKIP] line. Criteria 1-3 and 7
// reproduce published corpus results and need the datasets mounted under
// $TEXTCLASS_DATA_DIR (default: data/corpora at the repository root):
//   20news-bydate/<...-train|...-test>/<category>/<file>
//   reuters21578/reut2-*.sgm
// They skip when the data is absent. Criteria 4-6 are self-contained.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "textclass/copula.hpp"
#include "textclass/corpus.hpp"
#include "textclass/evaluation.hpp"
#include "textclass/pipeline.hpp"
#include "textclass/random.hpp"

namespace fs = std::filesystem;
using namespace textclass;

namespace {

enum class Outcome { Pass, Fail, Skip };

std::string data_dir() {
  if (const char* env = std::getenv("TEXTCLASS_DATA_DIR")) return env;
  return TEXTCLASS_DATA_DEFAULT;
}

std::string cache_dir() {
  fs::create_directories(TEXTCLASS_ACCEPT_CACHE);
  return TEXTCLASS_ACCEPT_CACHE;
}

StopwordList stopwords() {
  return StopwordList::from_file(TEXTCLASS_STOPWORDS);
}

ProcessedDocument doc_of(std::vector<std::vector<TermId>> sentences,
                         std::vector<LabelId> labels) {
  ProcessedDocument doc;
  doc.sentences = std::move(sentences);
  for (const auto& sentence : doc.sentences) {
    doc.tokens.insert(doc.tokens.end(), sentence.begin(), sentence.end());
  }
  doc.labels = std::move(labels);
  doc.raw_token_count = static_cast<std::uint32_t>(doc.tokens.size());
  return doc;
}

std::vector<const ProcessedDocument*> ptrs(
    const std::vector<ProcessedDocument>& docs) {
  std::vector<const ProcessedDocument*> out;
  for (const auto& doc : docs) out.push_back(&doc);
  return out;
}

// ---------------------------------------------------------------------------
// corpus loading for the reproduction criteria
// ---------------------------------------------------------------------------

std::optional<std::vector<RawDocument>> load_newsgroups_bydate() {
  const fs::path root = fs::path(data_dir()) / "20news-bydate";
  if (!fs::is_directory(root)) return std::nullopt;
  const fs::path* train = nullptr;
  const fs::path* test = nullptr;
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& dir : subdirs) {
    const std::string name = dir.filename().string();
    if (name.ends_with("train")) train = &dir;
    if (name.ends_with("test")) test = &dir;
  }
  if (!train || !test) return std::nullopt;
  std::vector<RawDocument> corpus;
  for (const auto* dir : {train, test}) {
    const Split split = dir == train ? Split::Train : Split::Test;
    const std::string prefix = dir->filename().string() + "/";
    for (auto& doc : load_newsgroups_dir(dir->string())) {
      doc.id = prefix + doc.id;
      doc.split_hint = split;
      corpus.push_back(std::move(doc));
    }
  }
  return corpus;
}

std::optional<std::vector<RawDocument>> load_reuters() {
  const fs::path root = fs::path(data_dir()) / "reuters21578";
  if (!fs::is_directory(root)) return std::nullopt;
  return load_reuters_sgml(root.string());
}

ClassifierSpec spec_of(ClassifierKind kind, double alpha = 1.0, int k = 15,
                       double c = 1.0) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.alpha = alpha;
  spec.k = k;
  spec.c = c;
  spec.lambda = 0.99;
  spec.metric = CoocMetric::Pmi;
  spec.seed = 2024;
  return spec;
}

EvalReport evaluate(const PreparedCorpus& prepared, const ClassifierSpec& spec,
                    bool multilabel, const std::string& corpus_name) {
  const auto classifier = fit_classifier(prepared, spec, multilabel);
  const auto predictions = classifier->predict_all(prepared);
  std::vector<LabeledDoc> gold, pred;
  for (std::size_t i = 0; i < prepared.test_docs.size(); ++i) {
    gold.push_back({prepared.test_docs[i].id, prepared.test_docs[i].labels});
    pred.push_back({prepared.test_docs[i].id, predictions[i]});
  }
  EvalReport report = micro_f1(gold, pred, prepared.catalog);
  report.classifier = spec.name();
  report.corpus = corpus_name;
  return report;
}

// Reports are cached across criteria (and reruns) by corpus + classifier.
EvalReport cached_evaluate(const PreparedCorpus& prepared,
                           const ClassifierSpec& spec, bool multilabel,
                           const std::string& corpus_name) {
  const std::string path =
      cache_dir() + "/" + corpus_name + "_" + spec.name() + ".report.json";
  if (fs::exists(path)) return EvalReport::load_json(path);
  const EvalReport report = evaluate(prepared, spec, multilabel, corpus_name);
  report.save_json(path);
  return report;
}

struct Expectation {
  std::string name;
  ClassifierSpec spec;
  double target;
};

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

Outcome criterion_newsgroups() {
  const auto corpus = load_newsgroups_bydate();
  if (!corpus) {
    std::cout << "[SKIP] criterion 1: 20-Newsgroups not mounted under "
              << data_dir() << "/20news-bydate\n";
    return Outcome::Skip;
  }
  std::cout << "loaded 20-newsgroups: " << corpus->size() << " documents\n";
  const PreparedCorpus prepared = prepare_corpus(*corpus, stopwords());

  const std::vector<Expectation> expectations = {
      {"SVC", spec_of(ClassifierKind::Svm), 0.85},
      {"NB(alpha=0.01)", spec_of(ClassifierKind::NaiveBayes, 0.01), 0.84},
      {"NB(alpha=1)", spec_of(ClassifierKind::NaiveBayes, 1.0), 0.78},
      {"Copula", spec_of(ClassifierKind::Copula), 0.82},
      {"KNN(k=15)", spec_of(ClassifierKind::Knn), 0.74},
  };
  bool ok = true;
  for (const auto& expectation : expectations) {
    const EvalReport report =
        cached_evaluate(prepared, expectation.spec, false, "newsgroups");
    const double delta = std::abs(report.micro_f1 - expectation.target);
    std::cout << "  " << expectation.name << ": micro-F1=" << report.micro_f1
              << " (target " << expectation.target << " +/- 0.05)\n";
    ok = ok && delta <= 0.05;
  }
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 1: 20-Newsgroups micro-F1 reproduction\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

struct ReutersRun {
  PreparedCorpus prepared;
  std::map<std::string, EvalReport> reports;
};

std::optional<ReutersRun> run_reuters() {
  const auto corpus = load_reuters();
  if (!corpus) return std::nullopt;
  ReutersRun run;
  std::cout << "loaded reuters-21578 (ModApte): " << corpus->size()
            << " documents\n";
  run.prepared = prepare_corpus(*corpus, stopwords());
  const std::vector<std::pair<std::string, ClassifierSpec>> specs = {
      {"svc", spec_of(ClassifierKind::Svm)},
      {"knn", spec_of(ClassifierKind::Knn)},
      {"nb001", spec_of(ClassifierKind::NaiveBayes, 0.01)},
      {"copula", spec_of(ClassifierKind::Copula)},
      {"nb1", spec_of(ClassifierKind::NaiveBayes, 1.0)},
  };
  for (const auto& [name, spec] : specs) {
    run.reports.emplace(name,
                        cached_evaluate(run.prepared, spec, true, "reuters"));
  }
  run.prepared.catalog.save(cache_dir() + "/reuters_catalog.json");
  return run;
}

Outcome criterion_reuters() {
  const auto run = run_reuters();
  if (!run) {
    std::cout << "[SKIP] criterion 2: Reuters-21578 not mounted under "
              << data_dir() << "/reuters21578\n";
    return Outcome::Skip;
  }
  const std::map<std::string, double> targets = {{"svc", 0.87},
                                                 {"knn", 0.79},
                                                 {"nb001", 0.77},
                                                 {"copula", 0.64},
                                                 {"nb1", 0.51}};
  bool within = true;
  for (const auto& [name, target] : targets) {
    const double f1 = run->reports.at(name).micro_f1;
    std::cout << "  " << name << ": micro-F1=" << f1 << " (target " << target
              << " +/- 0.05)\n";
    within = within && std::abs(f1 - target) <= 0.05;
  }
  bool ok = within;
  if (!within) {
    // fallback: SVC > KNN ~ NB(0.01) > Copula > NB(1)
    const double svc = run->reports.at("svc").micro_f1;
    const double knn = run->reports.at("knn").micro_f1;
    const double nb001 = run->reports.at("nb001").micro_f1;
    const double copula = run->reports.at("copula").micro_f1;
    const double nb1 = run->reports.at("nb1").micro_f1;
    ok = svc > knn && svc > nb001 && knn > copula && nb001 > copula &&
         copula > nb1;
    std::cout << "  tolerance missed; ordering fallback "
              << (ok ? "holds" : "violated") << "\n";
  }
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 2: Reuters-21578 micro-F1 reproduction\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

Outcome criterion_small_classes() {
  // reuses criterion 2's cached reports when they exist
  const auto run = run_reuters();
  if (!run) {
    std::cout << "[SKIP] criterion 3: Reuters-21578 not mounted under "
              << data_dir() << "/reuters21578\n";
    return Outcome::Skip;
  }

  // small-class view through the figdata interface
  const std::string fig_path = cache_dir() + "/reuters_small_classes.csv";
  const std::vector<EvalReport> figure_reports = {
      run->reports.at("copula"), run->reports.at("nb1"),
      run->reports.at("nb001"), run->reports.at("knn")};
  emit_figure_data(figure_reports, run->prepared.catalog, fig_path, 2, 16);

  std::ifstream in(fig_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> sums(4, 0.0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    for (int i = 0; i < 4; ++i) sums[i] += std::stod(fields[2 + i]);
    ++rows;
  }
  if (rows == 0) {
    std::cout << "[FAIL] criterion 3: no Reuters classes with train size in "
                 "[2,16]\n";
    return Outcome::Fail;
  }
  const double mean_copula = sums[0] / rows;
  const double mean_nb1 = sums[1] / rows;
  const double mean_nb001 = sums[2] / rows;
  const double mean_knn = sums[3] / rows;
  std::cout << "  small classes (n=" << rows << "): copula=" << mean_copula
            << " nb1=" << mean_nb1 << " nb001=" << mean_nb001
            << " knn=" << mean_knn << "\n";
  const bool ok = mean_copula > mean_nb1 && mean_copula > mean_nb001 &&
                  mean_copula > mean_knn;
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 3: copula leads on small Reuters classes\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

// Independence-reduction oracle shared by criterion 4.
double unigram_chain_oracle(const CopulaClassModel& model,
                            const ProcessedDocument& doc) {
  double score = model.log_prior;
  for (const auto& sentence : doc.sentences) {
    for (std::size_t k = 0; k < sentence.size(); ++k) {
      score += std::log(model.u[sentence[k]]);
      if (k > 0 && k + 1 < sentence.size()) {
        score += std::log(model.u[sentence[k]]);
      }
    }
  }
  return score;
}

Outcome criterion_independence_oracle() {
  SeededRng rng(515);
  std::size_t corpora = 0, comparisons = 0;
  double max_error = 0.0;
  bool ok = true;
  while (corpora < 120) {
    const std::size_t vocab = 3 + rng.bounded(10);
    const std::size_t n_classes = 2 + rng.bounded(4);  // <= 5 classes
    std::vector<std::vector<ProcessedDocument>> classes(n_classes);
    std::vector<ProcessedDocument> all;
    for (std::size_t c = 0; c < n_classes; ++c) {
      const std::size_t n_docs = 1 + rng.bounded(10);  // <= 50 total
      for (std::size_t d = 0; d < n_docs; ++d) {
        std::vector<std::vector<TermId>> sentences;
        for (std::size_t s = 0; s < 1 + rng.bounded(3); ++s) {
          std::vector<TermId> sentence;
          for (std::size_t t = 0; t < 1 + rng.bounded(6); ++t) {
            sentence.push_back(static_cast<TermId>(rng.bounded(vocab)));
          }
          sentences.push_back(sentence);
        }
        classes[c].push_back(
            doc_of(sentences, {static_cast<LabelId>(c)}));
        all.push_back(classes[c].back());
      }
    }
    ++corpora;
    const auto background = background_probs(all, vocab);
    std::vector<CopulaClassModel> models;
    for (std::size_t c = 0; c < n_classes; ++c) {
      models.push_back(copula_fit(ptrs(classes[c]),
                                  static_cast<LabelId>(c), vocab,
                                  classes[c].size(), all.size(), background,
                                  CoocMetric::Pmi, 0.99));
    }
    for (int probe = 0; probe < 3; ++probe) {
      const ProcessedDocument& doc = all[rng.bounded(all.size())];
      std::vector<double> forced, oracle;
      for (const auto& model : models) {
        forced.push_back(copula_score(model, doc, true));
        oracle.push_back(unigram_chain_oracle(model, doc));
        max_error = std::max(max_error,
                             std::abs(forced.back() - oracle.back()));
        ok = ok && std::abs(forced.back() - oracle.back()) <= 1e-9;
        ++comparisons;
      }
      // class rankings must agree exactly
      std::vector<std::size_t> rank_a(models.size()), rank_b(models.size());
      std::iota(rank_a.begin(), rank_a.end(), 0);
      rank_b = rank_a;
      std::stable_sort(rank_a.begin(), rank_a.end(),
                       [&](std::size_t x, std::size_t y) {
                         return forced[x] > forced[y];
                       });
      std::stable_sort(rank_b.begin(), rank_b.end(),
                       [&](std::size_t x, std::size_t y) {
                         return oracle[x] > oracle[y];
                       });
      ok = ok && rank_a == rank_b;
    }
  }
  std::cout << "  " << corpora << " corpora, " << comparisons
            << " score comparisons, max |error|=" << max_error << "\n";
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 4: theta=1 copula equals the double-counting "
               "unigram oracle\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

double wilcoxon_dp_oracle(const std::vector<double>& a,
                          const std::vector<double>& b) {
  std::vector<double> abs_diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) abs_diff.push_back(std::abs(a[i] - b[i]));
  }
  const std::size_t n = abs_diff.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return abs_diff[x] < abs_diff[y];
  });
  std::vector<long> rank2(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && abs_diff[order[j + 1]] == abs_diff[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      rank2[order[k]] = static_cast<long>(i + j) + 2;
    }
    i = j + 1;
  }
  long w_plus2 = 0, w_minus2 = 0, total2 = 0;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == b[k]) continue;
    (a[k] > b[k] ? w_plus2 : w_minus2) += rank2[idx];
    total2 += rank2[idx];
    ++idx;
  }
  const long w2 = std::min(w_plus2, w_minus2);
  std::vector<double> dp(total2 + 1, 0.0);
  dp[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (long s = total2; s >= rank2[k]; --s) dp[s] += dp[s - rank2[k]];
  }
  double count = 0.0;
  for (long s = 0; s <= w2; ++s) count += dp[s];
  return std::min(1.0, 2.0 * count / std::pow(2.0, static_cast<double>(n)));
}

Outcome criterion_wilcoxon() {
  SeededRng rng(616);
  bool ok = true;
  double max_error = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.bounded(12);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.bounded(10)) / 5.0;
      b[i] = static_cast<double>(rng.bounded(10)) / 5.0;
    }
    const SignificanceResult result = wilcoxon_signed_rank(a, b);
    const double oracle = wilcoxon_dp_oracle(a, b);
    max_error = std::max(max_error, std::abs(result.p_value - oracle));
    ok = ok && std::abs(result.p_value - oracle) <= 1e-12;
    // category boundaries at 0.01 / 0.05, honored exactly
    const SignifCategory expected =
        result.p_value < 0.01
            ? SignifCategory::I
            : (result.p_value <= 0.05 ? SignifCategory::II
                                      : SignifCategory::III);
    ok = ok && result.category == expected;
  }
  std::cout << "  1000 samples, max |p - oracle|=" << max_error << "\n";
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 5: exact Wilcoxon p matches full enumeration for "
               "n <= 12\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

Outcome criterion_properties() {
  bool all_ok = true;
  auto record = [&all_ok](const std::string& name, bool ok) {
    std::cout << "  " << (ok ? "ok  " : "FAIL") << " " << name << "\n";
    all_ok = all_ok && ok;
  };
  SeededRng rng(717);

  {  // NB smoothing normalization
    bool ok = true;
    for (const double alpha : {1.0, 0.25, 0.01}) {
      SparseMatrix matrix;
      matrix.cols = 6;
      for (int r = 0; r < 8; ++r) {
        SparseVector row;
        for (TermId t = 0; t < 6; ++t) {
          if (rng.bounded(2)) row.entries.emplace_back(t, rng.uniform01());
        }
        matrix.rows.push_back(row);
      }
      const NBModel model =
          nb_fit(matrix, {0, 1, 0, 1, 0, 1, 0, 1}, 2, {0.5, 0.5},
                 SmoothingConfig{alpha});
      for (const auto& lp : model.log_prob) {
        double sum = 0.0;
        for (const double v : lp) sum += std::exp(v);
        ok = ok && std::abs(sum - 1.0) <= 1e-6;
      }
    }
    record("naive bayes smoothed distributions normalize", ok);
  }
  {  // TF-IDF row norms
    Vocabulary vocab;
    for (int t = 0; t < 12; ++t) vocab.add("t" + std::to_string(t));
    std::vector<ProcessedDocument> docs;
    for (int d = 0; d < 20; ++d) {
      std::vector<TermId> tokens;
      for (std::size_t t = 0; t < rng.bounded(10); ++t) {
        tokens.push_back(static_cast<TermId>(rng.bounded(12)));
      }
      docs.push_back(doc_of({tokens}, {0}));
      std::vector<TermId> distinct = tokens;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());
      vocab.count_document(distinct);
    }
    const SparseMatrix matrix = tfidf(ptrs(docs), vocab);
    bool ok = true;
    for (const auto& row : matrix.rows) {
      const double norm = row.l2_norm();
      ok = ok && (row.entries.empty() ? norm == 0.0
                                      : std::abs(norm - 1.0) <= 1e-9);
    }
    record("tfidf rows have unit norm (or zero)", ok);
  }
  {  // theta table properties
    bool ok = true;
    for (int trial = 0; trial < 30; ++trial) {
      std::unordered_map<std::uint64_t, double> f;
      for (std::size_t p = 0; p < 1 + rng.bounded(15); ++p) {
        f[PairCounts::key(static_cast<TermId>(rng.bounded(8)),
                          static_cast<TermId>(8 + rng.bounded(8)))] =
            rng.uniform01() * 6.0 - 1.0;
      }
      const CooccurrenceModel model = normalize_theta(f, CoocMetric::Pmi, 0);
      for (const auto& [key, theta] : model.theta) ok = ok && theta > 1.0;
      ok = ok && model.theta_of(900, 901) == 1.0;
      const TermId t1 = static_cast<TermId>(rng.bounded(8));
      const TermId t2 = static_cast<TermId>(8 + rng.bounded(8));
      ok = ok && model.theta_of(t1, t2) == model.theta_of(t2, t1);
    }
    record("theta stored > 1, symmetric, absent pairs = 1", ok);
  }
  {  // Gumbel boundary identities and theta monotonicity
    bool ok = true;
    for (const double theta : {1.0, 2.0, 5.0, 40.0}) {
      ok = ok && std::abs(gumbel_bivariate(0.42, 1.0, theta) - 0.42) <= 1e-12;
      ok = ok && std::abs(gumbel_bivariate(1.0, 1.0, theta) - 1.0) <= 1e-12;
    }
    double previous = gumbel_bivariate(0.25, 0.25, 1.0);
    for (const double theta : {1.5, 2.0, 3.0, 6.0, 12.0, 48.0}) {
      const double value = gumbel_bivariate(0.25, 0.25, theta);
      ok = ok && value > previous && value <= 0.25 + 1e-12;
      previous = value;
    }
    record("gumbel boundary identities and theta monotonicity", ok);
  }
  {  // KNN self-query identity
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      SparseMatrix matrix;
      matrix.cols = 3;
      std::vector<int> labels;
      for (int r = 0; r < 8; ++r) {
        SparseVector row;
        row.entries.emplace_back(0, static_cast<double>(r + 1));
        row.entries.emplace_back(1 + rng.bounded(2), rng.uniform01());
        matrix.rows.push_back(row);
        labels.push_back(static_cast<int>(rng.bounded(3)));
      }
      const std::size_t pick = rng.bounded(8);
      ok = ok && knn_predict(matrix, labels, 3, matrix.rows[pick],
                             KnnConfig{1}) == labels[pick];
    }
    record("knn self-query with k=1 returns the row's label", ok);
  }
  {  // SVM objective monotone + separable data
    SparseMatrix matrix;
    matrix.cols = 2;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
      SparseVector row;
      row.entries.emplace_back(0, (i % 2 ? 1.0 : -1.0) * (1.0 + rng.uniform01()));
      row.entries.emplace_back(1, rng.uniform01() * 0.2);
      matrix.rows.push_back(row);
      labels.push_back(i % 2 ? 1 : -1);
    }
    const LinearModel model = svm_fit(matrix, labels, SvmOptions{});
    bool ok = true;
    for (std::size_t e = 1; e < model.epoch_objective.size(); ++e) {
      ok = ok && model.epoch_objective[e] <=
                     model.epoch_objective[e - 1] + 1e-9;
    }
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
      ok = ok && labels[i] * svm_predict(model, matrix.rows[i]) > 0.0;
    }
    ok = ok && svm_primal_objective(model, matrix, labels) <
                   model.c * static_cast<double>(matrix.row_count());
    record("svm objective monotone and separable data fits exactly", ok);
  }
  {  // micro-F1 equals accuracy for single-label data
    LabelCatalog catalog;
    catalog.labels = {"a", "b", "c"};
    for (LabelId i = 0; i < 3; ++i) catalog.index.emplace(catalog.labels[i], i);
    catalog.train_counts = {1, 1, 1};
    catalog.total_train = 3;
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<LabeledDoc> gold, pred;
      std::size_t correct = 0;
      const std::size_t n = 1 + rng.bounded(25);
      for (std::size_t d = 0; d < n; ++d) {
        const LabelId g = static_cast<LabelId>(rng.bounded(3));
        const LabelId p = static_cast<LabelId>(rng.bounded(3));
        gold.push_back({"d" + std::to_string(d), {g}});
        pred.push_back({"d" + std::to_string(d), {p}});
        correct += g == p;
      }
      const EvalReport report = micro_f1(gold, pred, catalog);
      ok = ok && std::abs(report.micro_f1 -
                          static_cast<double>(correct) / n) <= 1e-12;
    }
    record("micro-F1 equals accuracy for single-label predictions", ok);
  }
  {  // fold partition property
    std::vector<RawDocument> corpus;
    for (int i = 0; i < 23; ++i) {
      corpus.push_back({"doc" + std::to_string(i), "text",
                        {i % 3 == 0 ? "x" : "y"}, std::nullopt});
    }
    SplitSpec split;
    split.kind = SplitSpec::Kind::KFold;
    split.k = 5;
    split.seed = 31;
    const FoldAssignment folds = make_folds(corpus, split);
    std::set<std::string> seen;
    std::size_t total = 0;
    bool ok = true;
    for (std::size_t f = 0; f < folds.folds(); ++f) {
      for (const auto& id : folds.test_ids[f]) {
        ok = ok && seen.insert(id).second;
        ++total;
      }
    }
    ok = ok && total == corpus.size();
    record("folds partition the corpus", ok);
  }
  {  // end-to-end determinism (in-process double run)
    std::vector<RawDocument> corpus;
    const char* texts[] = {"orbit star planet. rocket fuel.",
                           "goal player match. kick ball.",
                           "star galaxy orbit. space dust.",
                           "match ball player. goal again."};
    for (int i = 0; i < 4; ++i) {
      corpus.push_back({"d" + std::to_string(i), texts[i],
                        {i % 2 ? "sport" : "space"},
                        i < 2 ? Split::Train : Split::Test});
    }
    const StopwordList stop;
    auto run_once = [&] {
      const PreparedCorpus prepared = prepare_corpus(corpus, stop);
      ClassifierSpec spec = spec_of(ClassifierKind::Svm);
      spec.threads = 1;
      const EvalReport report = evaluate(prepared, spec, false, "tiny");
      const std::string path = cache_dir() + "/determinism_probe.json";
      report.save_json(path);
      std::ifstream in(path);
      std::string bytes((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
      return bytes;
    };
    record("end-to-end determinism (byte-identical reports)",
           run_once() == run_once());
  }

  std::cout << (all_ok ? "[PASS]" : "[FAIL]")
            << " criterion 6: property suites\n";
  return all_ok ? Outcome::Pass : Outcome::Fail;
}

Outcome criterion_corpus_stats() {
  const auto corpus = load_newsgroups_bydate();
  if (!corpus) {
    std::cout << "[SKIP] criterion 7: 20-Newsgroups not mounted under "
              << data_dir() << "/20news-bydate\n";
    return Outcome::Skip;
  }
  const PreparedCorpus prepared = prepare_corpus(*corpus, stopwords());
  std::vector<ProcessedDocument> all = prepared.train_docs;
  all.insert(all.end(), prepared.test_docs.begin(), prepared.test_docs.end());
  const CorpusStats stats =
      corpus_stats(all, prepared.catalog, prepared.vocab.size());
  std::cout << "  avg_doc_len=" << stats.avg_doc_len
            << " (target 318 +/- 15%), var_tf=" << stats.var_tf
            << " (target 1.474e-04 within one order of magnitude)\n";
  const bool len_ok =
      stats.avg_doc_len >= 318.0 * 0.85 && stats.avg_doc_len <= 318.0 * 1.15;
  const bool var_ok =
      stats.var_tf >= 1.474e-05 && stats.var_tf <= 1.474e-03;
  const bool ok = len_ok && var_ok;
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " criterion 7: 20-Newsgroups corpus properties\n";
  return ok ? Outcome::Pass : Outcome::Fail;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <1..7|all>\n";
    return 2;
  }
  std::vector<int> criteria;
  if (std::strcmp(argv[1], "all") == 0) {
    criteria = {1, 2, 3, 4, 5, 6, 7};
  } else {
    criteria = {std::atoi(argv[1])};
    if (criteria[0] < 1 || criteria[0] > 7) {
      std::cerr << "unknown criterion: " << argv[1] << "\n";
      return 2;
    }
  }
  bool any_fail = false;
  for (const int criterion : criteria) {
    Outcome outcome = Outcome::Fail;
    switch (criterion) {
      case 1: outcome = criterion_newsgroups(); break;
      case 2: outcome = criterion_reuters(); break;
      case 3: outcome = criterion_small_classes(); break;
      case 4: outcome = criterion_independence_oracle(); break;
      case 5: outcome = criterion_wilcoxon(); break;
      case 6: outcome = criterion_properties(); break;
      case 7: outcome = criterion_corpus_stats(); break;
    }
    any_fail = any_fail || outcome == Outcome::Fail;
  }
  return any_fail ? 1 : 0;
}
