#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "textclass/features.hpp"
#include "textclass/random.hpp"

using namespace textclass;

namespace {

// Builds a processed document from explicit per-sentence term ids.
ProcessedDocument doc_of(std::vector<std::vector<TermId>> sentences,
                         std::vector<LabelId> labels = {0}) {
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

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("fit_class_lm computes maximum-likelihood term probabilities") {
  const std::vector<ProcessedDocument> one = {doc_of({{0, 0, 0, 1}})};
  const auto lm = fit_class_lm(ptrs(one), 0, 2, 1, 2);
  CHECK(lm.prob(0) == doctest::Approx(0.75));
  CHECK(lm.prob(1) == doctest::Approx(0.25));
  CHECK(lm.prior == doctest::Approx(0.5));

  const std::vector<ProcessedDocument> two = {doc_of({{0, 1}}),
                                              doc_of({{1, 2}})};
  const auto lm2 = fit_class_lm(ptrs(two), 0, 3, 2, 2);
  CHECK(lm2.prob(0) == doctest::Approx(0.25));
  CHECK(lm2.prob(1) == doctest::Approx(0.5));
  CHECK(lm2.prob(2) == doctest::Approx(0.25));

  const auto empty = fit_class_lm({}, 0, 3, 0, 2);
  CHECK(empty.total == 0.0);
  CHECK(empty.prior == 0.0);
  CHECK(empty.prob(0) == 0.0);
}

TEST_CASE("fit_class_lm probabilities sum to one for nonempty classes") {
  SeededRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t vocab = 1 + rng.bounded(8);
    std::vector<ProcessedDocument> docs;
    for (std::size_t d = 0; d < 1 + rng.bounded(4); ++d) {
      std::vector<TermId> tokens;
      for (std::size_t t = 0; t < 1 + rng.bounded(12); ++t) {
        tokens.push_back(static_cast<TermId>(rng.bounded(vocab)));
      }
      docs.push_back(doc_of({tokens}));
    }
    const auto lm = fit_class_lm(ptrs(docs), 0, vocab, docs.size(),
                                 docs.size());
    double sum = 0.0;
    for (TermId t = 0; t < vocab; ++t) sum += lm.prob(t);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("tfidf matches the frozen worked example") {
  // corpus {d1=[a,b], d2=[a]}: idf(a)=1, idf(b)=ln(3/2)+1
  Vocabulary vocab;
  const TermId a = vocab.add("a");
  const TermId b = vocab.add("b");
  vocab.count_document({a, b});
  vocab.count_document({a});
  const std::vector<ProcessedDocument> docs = {doc_of({{a, b}}),
                                               doc_of({{a}})};
  const SparseMatrix matrix = tfidf(ptrs(docs), vocab);
  REQUIRE(matrix.rows.size() == 2);
  REQUIRE(matrix.rows[0].entries.size() == 2);
  CHECK(matrix.rows[0].entries[0].second ==
        doctest::Approx(0.5797386715376657).epsilon(1e-9));
  CHECK(matrix.rows[0].entries[1].second ==
        doctest::Approx(0.8148024746671689).epsilon(1e-9));
  CHECK(matrix.rows[1].entries[0].second == doctest::Approx(1.0));
}

TEST_CASE("tfidf rows are unit length or empty") {
  SeededRng rng(13);
  Vocabulary vocab;
  for (int t = 0; t < 30; ++t) vocab.add("t" + std::to_string(t));
  std::vector<ProcessedDocument> docs;
  for (int d = 0; d < 25; ++d) {
    std::vector<TermId> tokens;
    for (std::size_t t = 0; t < rng.bounded(15); ++t) {
      tokens.push_back(static_cast<TermId>(rng.bounded(30)));
    }
    docs.push_back(tokens.empty() ? doc_of({}) : doc_of({tokens}));
    std::vector<TermId> distinct = tokens;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    vocab.count_document(distinct);
  }
  const SparseMatrix matrix = tfidf(ptrs(docs), vocab);
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    const double norm = matrix.rows[r].l2_norm();
    if (docs[r].tokens.empty()) {
      CHECK(norm == 0.0);
    } else {
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("tfidf of a document with no in-vocab tokens is a zero row") {
  Vocabulary vocab;
  vocab.add("known");
  vocab.count_document({0});
  const std::vector<ProcessedDocument> docs = {doc_of({})};
  const SparseMatrix matrix = tfidf(ptrs(docs), vocab);
  CHECK(matrix.rows[0].entries.empty());
}

TEST_CASE("count_cooccurrence dedupes pairs within a sentence") {
  {
    const std::vector<ProcessedDocument> docs = {doc_of({{0, 1, 0}})};
    const PairCounts counts = count_cooccurrence(ptrs(docs), 2);
    CHECK(counts.sentence_count == 1);
    CHECK(counts.pair_count.at(PairCounts::key(0, 1)) == 1);
    CHECK(counts.term_sentences[0] == 1);
    CHECK(counts.term_sentences[1] == 1);
  }
  {
    const std::vector<ProcessedDocument> docs = {doc_of({{0, 1}, {0, 1}})};
    const PairCounts counts = count_cooccurrence(ptrs(docs), 2);
    CHECK(counts.sentence_count == 2);
    CHECK(counts.pair_count.at(PairCounts::key(0, 1)) == 2);
  }
  {
    const std::vector<ProcessedDocument> docs = {doc_of({{0}, {1}})};
    const PairCounts counts = count_cooccurrence(ptrs(docs), 2);
    CHECK(counts.pair_count.empty());
  }
}

TEST_CASE("pmi matches the frozen sentence-event example") {
  // sentences [[a,b],[a,b],[c,d]]: PMI(a,b) = log2(1.5)
  const std::vector<ProcessedDocument> docs = {
      doc_of({{0, 1}, {0, 1}, {2, 3}})};
  const PairCounts counts = count_cooccurrence(ptrs(docs), 4);
  const auto f = pmi(counts);
  CHECK(f.at(PairCounts::key(0, 1)) ==
        doctest::Approx(std::log2(1.5)).epsilon(1e-12));
  // c,d co-occur once and appear only together: PMI = log2(S/count)
  CHECK(f.at(PairCounts::key(2, 3)) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("pmi is zero at exact independence") {
  // a in every sentence; b in half: p(ab) = p(a)p(b) exactly
  const std::vector<ProcessedDocument> docs = {
      doc_of({{0, 1}, {0}, {0, 1}, {0}})};
  const PairCounts counts = count_cooccurrence(ptrs(docs), 2);
  const auto f = pmi(counts);
  CHECK(f.at(PairCounts::key(0, 1)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pmi sign agrees with brute-force probabilities") {
  SeededRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_terms = 2 + rng.bounded(3);  // <= 4 terms
    const std::size_t n_sents = 1 + rng.bounded(5);  // <= 5 sentences
    std::vector<std::vector<TermId>> sentences;
    for (std::size_t s = 0; s < n_sents; ++s) {
      std::vector<TermId> sentence;
      for (TermId t = 0; t < n_terms; ++t) {
        if (rng.bounded(2) == 0) sentence.push_back(t);
      }
      if (sentence.empty()) sentence.push_back(0);
      sentences.push_back(sentence);
    }
    const std::vector<ProcessedDocument> docs = {doc_of(sentences)};
    const PairCounts counts = count_cooccurrence(ptrs(docs), n_terms);
    const auto f = pmi(counts);
    const double s = static_cast<double>(counts.sentence_count);
    for (const auto& [key, value] : f) {
      const TermId t1 = static_cast<TermId>(key >> 32);
      const TermId t2 = static_cast<TermId>(key & 0xffffffffu);
      const double joint = counts.pair_count.at(key) / s;
      const double marginal = (counts.term_sentences[t1] / s) *
                              (counts.term_sentences[t2] / s);
      if (joint > marginal) CHECK(value > 0.0);
      if (joint < marginal) CHECK(value < 0.0);
      if (joint == marginal) CHECK(value == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("jaccard is the sentence-support overlap ratio") {
  // n(a)=3, n(b)=2, count=2 -> 2/3
  const std::vector<ProcessedDocument> docs = {
      doc_of({{0, 1}, {0, 1}, {0}})};
  const PairCounts counts = count_cooccurrence(ptrs(docs), 2);
  const auto f = jaccard(counts);
  CHECK(f.at(PairCounts::key(0, 1)) == doctest::Approx(2.0 / 3.0));

  // identical sentence support -> 1
  const std::vector<ProcessedDocument> same = {doc_of({{0, 1}, {0, 1}})};
  const auto f2 = jaccard(count_cooccurrence(ptrs(same), 2));
  CHECK(f2.at(PairCounts::key(0, 1)) == doctest::Approx(1.0));

  // disjoint terms never form a pair
  const std::vector<ProcessedDocument> disjoint = {doc_of({{0}, {1}})};
  CHECK(jaccard(count_cooccurrence(ptrs(disjoint), 2)).empty());
}

TEST_CASE("normalize_theta keeps only strengths above the positive mean") {
  std::unordered_map<std::uint64_t, double> f = {
      {PairCounts::key(0, 1), 3.0},
      {PairCounts::key(2, 3), 1.0},
  };
  const CooccurrenceModel model = normalize_theta(f, CoocMetric::Pmi, 0);
  CHECK(model.mu == doctest::Approx(2.0));
  CHECK(model.theta_of(0, 1) == doctest::Approx(1.5));
  CHECK(model.theta_of(1, 0) == doctest::Approx(1.5));  // symmetric lookup
  CHECK(model.theta_of(2, 3) == 1.0);                   // dropped at theta=1
  CHECK(model.theta.size() == 1);

  // all f equal: f = mu never exceeds mu strictly
  std::unordered_map<std::uint64_t, double> equal = {
      {PairCounts::key(0, 1), 2.0},
      {PairCounts::key(2, 3), 2.0},
  };
  CHECK(normalize_theta(equal, CoocMetric::Pmi, 0).theta.empty());

  CHECK(normalize_theta({}, CoocMetric::Pmi, 0).theta.empty());

  // negative strengths neither enter mu nor the table
  std::unordered_map<std::uint64_t, double> mixed = {
      {PairCounts::key(0, 1), 4.0},
      {PairCounts::key(0, 2), 2.0},
      {PairCounts::key(1, 2), -5.0},
  };
  const CooccurrenceModel m2 = normalize_theta(mixed, CoocMetric::Pmi, 0);
  CHECK(m2.mu == doctest::Approx(3.0));
  CHECK(m2.theta_of(0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(m2.theta_of(1, 2) == 1.0);
}

TEST_CASE("theta table property: stored values exceed 1, lookups default 1") {
  SeededRng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    std::unordered_map<std::uint64_t, double> f;
    const std::size_t pairs = 1 + rng.bounded(20);
    for (std::size_t p = 0; p < pairs; ++p) {
      const TermId t1 = static_cast<TermId>(rng.bounded(10));
      const TermId t2 = static_cast<TermId>(rng.bounded(10));
      if (t1 == t2) continue;
      f[PairCounts::key(t1, t2)] = rng.uniform01() * 8.0 - 2.0;
    }
    const CooccurrenceModel model = normalize_theta(f, CoocMetric::Pmi, 0);
    for (const auto& [key, theta] : model.theta) CHECK(theta > 1.0);
    CHECK(model.theta_of(97, 98) == 1.0);
  }
}

TEST_CASE("cooccurrence model csv round trip") {
  std::unordered_map<std::uint64_t, double> f = {
      {PairCounts::key(3, 7), 5.0},
      {PairCounts::key(1, 2), 2.0},
      {PairCounts::key(0, 9), 1.0},
  };
  const CooccurrenceModel model = normalize_theta(f, CoocMetric::Jaccard, 4);
  const std::string path = "theta_roundtrip_test.csv";
  model.save_csv(path);
  const CooccurrenceModel loaded = CooccurrenceModel::load_csv(path);
  CHECK(loaded.metric == CoocMetric::Jaccard);
  CHECK(loaded.mu == doctest::Approx(model.mu).epsilon(1e-15));
  CHECK(loaded.theta.size() == model.theta.size());
  CHECK(loaded.theta_of(3, 7) == doctest::Approx(model.theta_of(3, 7)));
  std::remove(path.c_str());
}

TEST_SUITE_END();
