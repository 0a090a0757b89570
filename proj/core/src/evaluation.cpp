#include "textclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace textclass {

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double f1_of(double precision, double recall) {
  return precision + recall > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
}

}  // namespace

EvalReport micro_f1(const std::vector<LabeledDoc>& gold,
                    const std::vector<LabeledDoc>& pred,
                    const LabelCatalog& catalog) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold/pred size mismatch");
  }
  EvalReport report;
  report.per_class.resize(catalog.size());
  for (LabelId label = 0; label < catalog.size(); ++label) {
    report.per_class[label].label = catalog.labels[label];
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].id != pred[i].id) {
      throw std::invalid_argument("document id mismatch at index " +
                                  std::to_string(i) + ": '" + gold[i].id +
                                  "' vs '" + pred[i].id + "'");
    }
    const auto& g = gold[i].labels;
    const auto& p = pred[i].labels;
    for (const LabelId label : p) {
      if (std::binary_search(g.begin(), g.end(), label)) {
        ++report.per_class[label].tp;
      } else {
        ++report.per_class[label].fp;
      }
    }
    for (const LabelId label : g) {
      if (!std::binary_search(p.begin(), p.end(), label)) {
        ++report.per_class[label].fn;
      }
    }
  }
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (auto& c : report.per_class) {
    c.precision = safe_ratio(static_cast<double>(c.tp),
                             static_cast<double>(c.tp + c.fp));
    c.recall = safe_ratio(static_cast<double>(c.tp),
                          static_cast<double>(c.tp + c.fn));
    c.f1 = f1_of(c.precision, c.recall);
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  report.micro_precision =
      safe_ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
  report.micro_recall =
      safe_ratio(static_cast<double>(tp), static_cast<double>(tp + fn));
  report.micro_f1 = f1_of(report.micro_precision, report.micro_recall);
  return report;
}

void EvalReport::save_json(const std::string& path) const {
  nlohmann::json j;
  j["classifier"] = classifier;
  j["corpus"] = corpus;
  j["fold"] = fold;
  j["micro"] = {{"precision", micro_precision},
                {"recall", micro_recall},
                {"f1", micro_f1}};
  auto& classes = j["per_class"] = nlohmann::json::array();
  for (const auto& c : per_class) {
    classes.push_back({{"label", c.label},
                       {"tp", c.tp},
                       {"fp", c.fp},
                       {"fn", c.fn},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << j.dump(2) << "\n";
}

EvalReport EvalReport::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  nlohmann::json j;
  in >> j;
  EvalReport report;
  report.classifier = j.at("classifier").get<std::string>();
  report.corpus = j.at("corpus").get<std::string>();
  report.fold = j.at("fold").get<int>();
  report.micro_precision = j.at("micro").at("precision").get<double>();
  report.micro_recall = j.at("micro").at("recall").get<double>();
  report.micro_f1 = j.at("micro").at("f1").get<double>();
  for (const auto& c : j.at("per_class")) {
    ClassConfusion confusion;
    confusion.label = c.at("label").get<std::string>();
    confusion.tp = c.at("tp").get<std::uint64_t>();
    confusion.fp = c.at("fp").get<std::uint64_t>();
    confusion.fn = c.at("fn").get<std::uint64_t>();
    confusion.precision = c.at("precision").get<double>();
    confusion.recall = c.at("recall").get<double>();
    confusion.f1 = c.at("f1").get<double>();
    report.per_class.push_back(std::move(confusion));
  }
  return report;
}

void EvalReport::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << "class,tp,fp,fn,precision,recall,f1\n";
  for (const auto& c : per_class) {
    out << c.label << "," << c.tp << "," << c.fp << "," << c.fn << ","
        << c.precision << "," << c.recall << "," << c.f1 << "\n";
  }
  out << "micro,,,," << micro_precision << "," << micro_recall << ","
      << micro_f1 << "\n";
}

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank
// ---------------------------------------------------------------------------

namespace {

struct RankedDiffs {
  std::vector<double> ranks;  // per nonzero difference
  std::vector<int> signs;
  double w_plus = 0.0, w_minus = 0.0;
};

RankedDiffs rank_differences(const std::vector<double>& a,
                             const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("paired samples of equal nonzero length "
                                "required");
  }
  std::vector<double> abs_diff;
  std::vector<int> sign;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    abs_diff.push_back(std::abs(d));
    sign.push_back(d > 0.0 ? 1 : -1);
  }
  RankedDiffs ranked;
  ranked.signs = sign;
  ranked.ranks.resize(abs_diff.size());
  std::vector<std::size_t> order(abs_diff.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return abs_diff[x] < abs_diff[y];
  });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           abs_diff[order[j + 1]] == abs_diff[order[i]]) {
      ++j;
    }
    const double avg_rank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranked.ranks[order[k]] = avg_rank;
    i = j + 1;
  }
  for (std::size_t k = 0; k < ranked.ranks.size(); ++k) {
    if (ranked.signs[k] > 0) {
      ranked.w_plus += ranked.ranks[k];
    } else {
      ranked.w_minus += ranked.ranks[k];
    }
  }
  return ranked;
}

// P(sum of a random sign subset of ranks <= w) * 2, by full enumeration.
double exact_p_from_ranks(const std::vector<double>& ranks, double w) {
  const std::size_t n = ranks.size();
  const std::uint64_t total = 1ull << n;
  std::vector<double> subset_sum(total, 0.0);
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (s != 0) {
      const int low = std::countr_zero(s);
      subset_sum[s] = subset_sum[s & (s - 1)] + ranks[low];
    }
    if (subset_sum[s] <= w + 1e-9) ++count;
  }
  const double p = 2.0 * static_cast<double>(count) / static_cast<double>(total);
  return std::min(1.0, p);
}

double normal_p_from_ranks(const std::vector<double>& ranks, double w) {
  const double n = static_cast<double>(ranks.size());
  // tie correction: group sizes of equal ranks
  std::vector<double> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double z = (w - mean + 0.5) / std::sqrt(var);
  const double p = std::erfc(-z / std::sqrt(2.0));  // 2 * Phi(z)
  return std::min(1.0, p);
}

SignifCategory categorize(double p) {
  if (p < 0.01) return SignifCategory::I;
  if (p <= 0.05) return SignifCategory::II;
  return SignifCategory::III;
}

}  // namespace

namespace detail {

double wilcoxon_exact_p(const std::vector<double>& a,
                        const std::vector<double>& b) {
  const RankedDiffs ranked = rank_differences(a, b);
  if (ranked.ranks.empty()) return 1.0;
  return exact_p_from_ranks(ranked.ranks,
                            std::min(ranked.w_plus, ranked.w_minus));
}

double wilcoxon_normal_p(const std::vector<double>& a,
                         const std::vector<double>& b) {
  const RankedDiffs ranked = rank_differences(a, b);
  if (ranked.ranks.empty()) return 1.0;
  return normal_p_from_ranks(ranked.ranks,
                             std::min(ranked.w_plus, ranked.w_minus));
}

}  // namespace detail

SignificanceResult wilcoxon_signed_rank(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  const RankedDiffs ranked = rank_differences(a, b);
  SignificanceResult result;
  result.n = ranked.ranks.size();
  result.w_plus = ranked.w_plus;
  result.w_minus = ranked.w_minus;
  result.w_stat = std::min(ranked.w_plus, ranked.w_minus);
  if (result.n == 0) {
    result.degenerate = true;
    result.p_value = 1.0;
    result.category = SignifCategory::III;
    return result;
  }
  if (result.n <= 20) {
    result.exact = true;
    result.p_value = exact_p_from_ranks(ranked.ranks, result.w_stat);
  } else {
    result.p_value = normal_p_from_ranks(ranked.ranks, result.w_stat);
  }
  result.category = categorize(result.p_value);
  return result;
}

std::string to_string(SignifCategory category) {
  switch (category) {
    case SignifCategory::I: return "I";
    case SignifCategory::II: return "II";
    case SignifCategory::III: return "III";
  }
  return "?";
}

void SignificanceResult::save_json(const std::string& path) const {
  nlohmann::json j;
  j["n"] = n;
  j["w_plus"] = w_plus;
  j["w_minus"] = w_minus;
  j["w"] = w_stat;
  j["p"] = p_value;
  j["category"] = to_string(category);
  j["asterisk"] = asterisk;
  j["degenerate"] = degenerate;
  j["exact"] = exact;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write significance: " + path);
  out << j.dump(2) << "\n";
}

SignificanceResult significance_protocol(const std::vector<EvalReport>& a,
                                         const std::vector<EvalReport>& b,
                                         SignifMode mode) {
  std::vector<double> xs, ys;
  double overall_a = 0.0, overall_b = 0.0;
  if (mode == SignifMode::PerFold) {
    if (a.size() != b.size() || a.empty()) {
      throw std::invalid_argument("per-fold mode needs equal nonempty "
                                  "report lists");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].fold != b[i].fold) {
        throw std::invalid_argument("fold ids disagree between report lists");
      }
      if (a[i].fold < 0) {
        throw std::invalid_argument("per-fold mode needs fold reports");
      }
      xs.push_back(a[i].micro_f1);
      ys.push_back(b[i].micro_f1);
      overall_a += a[i].micro_f1;
      overall_b += b[i].micro_f1;
    }
    overall_a /= static_cast<double>(a.size());
    overall_b /= static_cast<double>(b.size());
  } else {
    if (a.size() != 1 || b.size() != 1) {
      throw std::invalid_argument("per-category mode needs exactly one "
                                  "report per side");
    }
    const auto& ra = a.front();
    const auto& rb = b.front();
    if (ra.per_class.size() != rb.per_class.size()) {
      throw std::invalid_argument("per-class shape mismatch");
    }
    for (std::size_t i = 0; i < ra.per_class.size(); ++i) {
      if (ra.per_class[i].label != rb.per_class[i].label) {
        throw std::invalid_argument("class labels disagree between reports");
      }
      // only classes with gold-positive test documents are paired
      if (ra.per_class[i].tp + ra.per_class[i].fn == 0) continue;
      xs.push_back(ra.per_class[i].f1);
      ys.push_back(rb.per_class[i].f1);
    }
    if (xs.empty()) {
      throw std::invalid_argument("no classes with test documents to pair");
    }
    overall_a = ra.micro_f1;
    overall_b = rb.micro_f1;
  }
  SignificanceResult result = wilcoxon_signed_rank(xs, ys);
  result.asterisk =
      (overall_a < overall_b && result.w_plus > result.w_minus) ||
      (overall_b < overall_a && result.w_minus > result.w_plus);
  return result;
}

// ---------------------------------------------------------------------------
// Corpus statistics and figure data
// ---------------------------------------------------------------------------

CorpusStats corpus_stats(const std::vector<ProcessedDocument>& docs,
                         const LabelCatalog& catalog,
                         std::size_t vocab_size) {
  if (docs.empty()) throw std::invalid_argument("empty corpus");
  if (vocab_size == 0) throw std::invalid_argument("empty vocabulary");

  CorpusStats stats;
  double token_sum = 0.0;
  for (const auto& doc : docs) {
    token_sum += doc.raw_token_count;
    if (doc.labels.size() > 1) stats.multi_label = true;
  }
  stats.avg_doc_len = token_sum / static_cast<double>(docs.size());

  const double v = static_cast<double>(vocab_size);
  double variance_sum = 0.0;
  std::vector<double> counts(vocab_size);
  for (LabelId label = 0; label < catalog.size(); ++label) {
    std::fill(counts.begin(), counts.end(), 0.0);
    double total = 0.0;
    for (const auto& doc : docs) {
      if (!std::binary_search(doc.labels.begin(), doc.labels.end(), label)) {
        continue;
      }
      for (const TermId term : doc.tokens) {
        counts[term] += 1.0;
        total += 1.0;
      }
    }
    if (total == 0.0) continue;  // class without content contributes 0
    const double mean = 1.0 / v;  // relative frequencies sum to 1
    double variance = 0.0;
    for (const double c : counts) {
      const double p = c / total;
      variance += (p - mean) * (p - mean);
    }
    variance_sum += variance / v;
  }
  stats.var_tf = catalog.size() > 0
                     ? variance_sum / static_cast<double>(catalog.size())
                     : 0.0;
  return stats;
}

void CorpusStats::save_json(const std::string& path) const {
  nlohmann::json j;
  j["var_tf"] = var_tf;
  j["avg_doc_len"] = avg_doc_len;
  j["type"] = multi_label ? "multi-label" : "multi-class";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write stats: " + path);
  out << j.dump(2) << "\n";
}

void emit_figure_data(const std::vector<EvalReport>& reports,
                      const LabelCatalog& catalog, const std::string& path,
                      std::size_t min_size, std::size_t max_size) {
  if (reports.empty()) {
    throw std::invalid_argument("at least one report required");
  }
  for (const auto& report : reports) {
    if (report.per_class.size() != catalog.size()) {
      throw std::invalid_argument("report/catalog class count mismatch");
    }
  }
  std::vector<LabelId> order(catalog.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](LabelId x, LabelId y) {
    return catalog.train_counts[x] > catalog.train_counts[y];
  });

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write figure data: " + path);
  out << "class,train_size";
  for (const auto& report : reports) out << ",f1_" << report.classifier;
  out << "\n";
  for (const LabelId label : order) {
    const std::size_t size = catalog.train_counts[label];
    if (size < min_size || size > max_size) continue;
    out << catalog.labels[label] << "," << size;
    for (const auto& report : reports) out << "," << report.per_class[label].f1;
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

CrossvalResult crossval(const std::vector<RawDocument>& corpus,
                        const StopwordList& stopwords, const SplitSpec& split,
                        const ClassifierSpec& classifier, bool multilabel,
                        const std::string& corpus_name) {
  const FoldAssignment folds = make_folds(corpus, split);
  std::unordered_map<std::string, const RawDocument*> by_id;
  for (const auto& doc : corpus) by_id.emplace(doc.id, &doc);

  CrossvalResult result;
  for (std::size_t f = 0; f < folds.folds(); ++f) {
    if (folds.test_ids[f].empty()) {
      throw std::runtime_error("fold " + std::to_string(f) +
                               " has no test documents");
    }
    std::vector<const RawDocument*> train, test;
    for (const auto& id : folds.train_ids[f]) train.push_back(by_id.at(id));
    for (const auto& id : folds.test_ids[f]) test.push_back(by_id.at(id));

    const PreparedCorpus prepared = prepare_corpus(train, test, stopwords);
    const auto model = fit_classifier(prepared, classifier, multilabel);
    const auto predictions = model->predict_all(prepared);

    std::vector<LabeledDoc> gold, pred;
    for (std::size_t i = 0; i < prepared.test_docs.size(); ++i) {
      gold.push_back({prepared.test_docs[i].id, prepared.test_docs[i].labels});
      pred.push_back({prepared.test_docs[i].id, predictions[i]});
    }
    EvalReport report = micro_f1(gold, pred, prepared.catalog);
    report.classifier = classifier.name();
    report.corpus = corpus_name;
    report.fold = static_cast<int>(f);
    result.mean_micro_f1 += report.micro_f1;
    result.fold_reports.push_back(std::move(report));
  }
  result.mean_micro_f1 /= static_cast<double>(folds.folds());
  return result;
}

}  // namespace textclass
