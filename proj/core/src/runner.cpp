#include "textclass/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "textclass/random.hpp"

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace textclass {

namespace {

#ifndef TEXTCLASS_DEFAULT_STOPWORDS
#define TEXTCLASS_DEFAULT_STOPWORDS ""
#endif

std::string default_stopwords_path() {
  if (const char* env = std::getenv("TEXTCLASS_STOPWORDS")) return env;
  return TEXTCLASS_DEFAULT_STOPWORDS;
}

json split_to_json(const SplitSpec& split) {
  return {{"kind", split.kind == SplitSpec::Kind::KFold ? "kfold" : "fixed"},
          {"k", split.k},
          {"stratified", split.stratified}};
}

SplitSpec split_from_json(const json& j) {
  SplitSpec split;
  const auto kind = j.value("kind", std::string("fixed"));
  if (kind == "kfold") {
    split.kind = SplitSpec::Kind::KFold;
  } else if (kind == "fixed") {
    split.kind = SplitSpec::Kind::Fixed;
  } else {
    throw UsageError("unknown split kind: " + kind);
  }
  split.k = j.value("k", 10);
  split.stratified = j.value("stratified", true);
  return split;
}

json classifier_to_json(const ClassifierSpec& spec) {
  return {{"kind", to_string(spec.kind)}, {"alpha", spec.alpha},
          {"k", spec.k},                  {"c", spec.c},
          {"lambda", spec.lambda},        {"metric", to_string(spec.metric)},
          {"threads", spec.threads}};
}

ClassifierSpec classifier_from_json(const json& j) {
  ClassifierSpec spec;
  spec.kind = classifier_kind_from_string(j.value("kind", std::string("nb")));
  spec.alpha = j.value("alpha", 1.0);
  spec.k = j.value("k", 0);
  spec.c = j.value("c", 1.0);
  spec.lambda = j.value("lambda", 0.99);
  spec.metric = cooc_metric_from_string(j.value("metric", std::string("pmi")));
  spec.threads = j.value("threads", 0);
  return spec;
}

std::string multilabel_to_string(MultilabelMode mode) {
  switch (mode) {
    case MultilabelMode::Auto: return "auto";
    case MultilabelMode::Yes: return "yes";
    case MultilabelMode::No: return "no";
  }
  return "auto";
}

MultilabelMode multilabel_from_string(const std::string& s) {
  if (s == "auto") return MultilabelMode::Auto;
  if (s == "yes") return MultilabelMode::Yes;
  if (s == "no") return MultilabelMode::No;
  throw UsageError("multilabel must be auto, yes or no, got: " + s);
}

std::string sha256_string(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << "0123456789abcdef"[digest[i] >> 4]
        << "0123456789abcdef"[digest[i] & 0xf];
  }
  return hex.str();
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

// Writers that take an output path run against a temp name, then the
// result is moved into place.
template <typename Writer>
void atomic_write_with(const std::string& path, Writer&& writer) {
  const std::string tmp = path + ".tmp";
  writer(tmp);
  if (fs::exists(path)) fs::remove_all(path);
  fs::rename(tmp, path);
}

std::vector<RawDocument> load_newsgroups_auto(const std::string& root) {
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  const fs::path* train_dir = nullptr;
  const fs::path* test_dir = nullptr;
  for (const auto& dir : subdirs) {
    const std::string name = lower(dir.filename().string());
    if (name.ends_with("train")) train_dir = &dir;
    if (name.ends_with("test")) test_dir = &dir;
  }
  if (subdirs.size() == 2 && train_dir && test_dir && train_dir != test_dir) {
    // bydate-style layout: one tree per split
    std::vector<RawDocument> corpus;
    for (const auto* dir : {train_dir, test_dir}) {
      const Split split = dir == train_dir ? Split::Train : Split::Test;
      const std::string prefix = dir->filename().string() + "/";
      for (auto& doc : load_newsgroups_dir(dir->string())) {
        doc.id = prefix + doc.id;
        doc.split_hint = split;
        corpus.push_back(std::move(doc));
      }
    }
    return corpus;
  }
  return load_newsgroups_dir(root);
}

std::vector<RawDocument> load_corpus(const RunConfig& config) {
  if (!fs::exists(config.input)) {
    throw UsageError("input path does not exist: " + config.input);
  }
  if (config.format == "jsonl") return load_jsonl(config.input);
  if (config.format == "newsgroups") return load_newsgroups_auto(config.input);
  if (config.format == "reuters-sgml") return load_reuters_sgml(config.input);
  throw UsageError("unknown corpus format: " + config.format);
}

StopwordList load_stopwords(const RunConfig& config) {
  std::string path = config.stopwords;
  if (path.empty()) path = default_stopwords_path();
  if (path.empty() || !fs::exists(path)) {
    throw UsageError("stop-word list not found: " +
                     (path.empty() ? std::string("<unset>") : path));
  }
  return StopwordList::from_file(path);
}

bool resolve_multilabel(const RunConfig& config,
                        const std::vector<RawDocument>& corpus) {
  switch (config.multilabel) {
    case MultilabelMode::Yes: return true;
    case MultilabelMode::No: return false;
    case MultilabelMode::Auto: break;
  }
  for (const auto& doc : corpus) {
    if (doc.labels.size() > 1) return true;
  }
  return false;
}

// Default K per the run ledger: 15, or 100 for short-text corpora
// (average document shorter than 20 pre-stop-word tokens). The automatic
// value is clamped to the available training rows; an explicit k is not.
int resolve_k(int configured, double avg_doc_len, std::size_t max_rows) {
  if (configured > 0) return configured;
  const int wanted = avg_doc_len < 20.0 ? 100 : 15;
  return std::max(1, std::min<int>(wanted, static_cast<int>(max_rows)));
}

double average_raw_tokens(const std::vector<ProcessedDocument>& docs) {
  if (docs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& doc : docs) sum += doc.raw_token_count;
  return sum / static_cast<double>(docs.size());
}

std::string prep_dir(const RunConfig& c) { return c.run_dir() + "/prep"; }
std::string model_dir(const RunConfig& c) { return c.run_dir() + "/model"; }
std::string eval_dir(const RunConfig& c) { return c.run_dir() + "/eval"; }

void write_resolved_config(const RunConfig& config) {
  fs::create_directories(config.run_dir());
  atomic_write_text(config.run_dir() + "/resolved_config.json",
                    config.to_json() + "\n");
}

struct LoadedPrep {
  LabelCatalog catalog;
  Vocabulary vocab;
  ProcessedFile processed;
};

LoadedPrep load_prep(const RunConfig& config) {
  const std::string dir = prep_dir(config);
  if (!fs::exists(dir + "/processed.jsonl")) {
    throw UsageError("no prep outputs under " + dir + "; run prep first");
  }
  LoadedPrep loaded;
  loaded.catalog = LabelCatalog::load(dir + "/catalog.json");
  loaded.vocab = Vocabulary::load(dir + "/vocab.json");
  loaded.processed =
      load_processed_jsonl(dir + "/processed.jsonl", loaded.catalog);
  return loaded;
}

PreparedCorpus assemble_from_prep(LoadedPrep loaded) {
  std::vector<ProcessedDocument> train, test;
  for (std::size_t i = 0; i < loaded.processed.docs.size(); ++i) {
    if (loaded.processed.splits[i] == Split::Test) {
      test.push_back(std::move(loaded.processed.docs[i]));
    } else {
      train.push_back(std::move(loaded.processed.docs[i]));
    }
  }
  return assemble_prepared(std::move(train), std::move(test),
                           std::move(loaded.catalog),
                           std::move(loaded.vocab));
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError("bad config JSON in " + path + ": " + e.what());
  }
  RunConfig config;
  config.input = j.value("input", std::string());
  config.format = j.value("format", std::string("jsonl"));
  config.stopwords = j.value("stopwords", std::string());
  config.corpus_name = j.value("corpus_name", std::string());
  if (j.contains("split")) config.split = split_from_json(j.at("split"));
  if (j.contains("classifier")) {
    config.classifier = classifier_from_json(j.at("classifier"));
  }
  config.multilabel =
      multilabel_from_string(j.value("multilabel", std::string("auto")));
  config.outdir = j.value("outdir", std::string("runs"));
  config.run_id = j.value("run_id", std::string());
  if (j.contains("seed")) {
    config.seed = j.at("seed").get<std::uint64_t>();
    config.seed_set = true;
  }
  return config;
}

std::string RunConfig::to_json() const {
  json j;
  j["input"] = input;
  j["format"] = format;
  j["stopwords"] = stopwords;
  j["corpus_name"] = corpus_name;
  j["split"] = split_to_json(split);
  j["classifier"] = classifier_to_json(classifier);
  j["multilabel"] = multilabel_to_string(multilabel);
  j["outdir"] = outdir;
  j["run_id"] = run_id;
  j["seed"] = seed;
  return j.dump(2);
}

void RunConfig::finalize() {
  if (!seed_set) throw UsageError("a seed is required (--seed or config)");
  if (input.empty()) throw UsageError("an input corpus is required");
  if (corpus_name.empty()) {
    corpus_name = fs::path(input).stem().string();
    if (corpus_name.empty()) corpus_name = "corpus";
  }
  if (split.kind == SplitSpec::Kind::KFold && split.k < 2) {
    throw UsageError("kfold requires k >= 2");
  }
  if (classifier.kind == ClassifierKind::NaiveBayes && classifier.alpha <= 0) {
    throw UsageError("naive bayes alpha must be positive");
  }
  if (classifier.kind == ClassifierKind::Copula &&
      (classifier.lambda <= 0.0 || classifier.lambda >= 1.0)) {
    throw UsageError("copula lambda must lie in (0,1)");
  }
  if (classifier.kind == ClassifierKind::Knn && classifier.k < 0) {
    throw UsageError("knn k must be positive (or 0 for the default rule)");
  }
  split.seed = seed;
  classifier.seed = seed;
  if (run_id.empty()) {
    json j = json::parse(to_json());
    j.erase("outdir");
    j.erase("run_id");
    run_id = sha256_string(j.dump()).substr(0, 12);
  }
}

std::string RunConfig::run_dir() const { return outdir + "/" + run_id; }

void save_processed_jsonl(const std::vector<ProcessedDocument>& docs,
                          const std::vector<std::optional<Split>>& splits,
                          const LabelCatalog& catalog,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write processed corpus: " + path);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& doc = docs[i];
    json j;
    j["id"] = doc.id;
    std::vector<std::string> labels;
    for (const LabelId label : doc.labels) {
      labels.push_back(catalog.labels[label]);
    }
    j["labels"] = labels;
    j["sentences"] = doc.sentences;
    j["raw_tokens"] = doc.raw_token_count;
    if (splits[i]) {
      j["split"] = *splits[i] == Split::Train ? "train" : "test";
    }
    out << j.dump() << "\n";
  }
}

ProcessedFile load_processed_jsonl(const std::string& path,
                                   const LabelCatalog& catalog) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open processed corpus: " + path);
  ProcessedFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error(path + ": malformed record at line " +
                               std::to_string(line_no));
    }
    ProcessedDocument doc;
    doc.id = j.at("id").get<std::string>();
    for (const auto& label : j.at("labels")) {
      doc.labels.push_back(catalog.id_of(label.get<std::string>()));
    }
    std::sort(doc.labels.begin(), doc.labels.end());
    doc.sentences = j.at("sentences").get<std::vector<std::vector<TermId>>>();
    for (const auto& sentence : doc.sentences) {
      doc.tokens.insert(doc.tokens.end(), sentence.begin(), sentence.end());
    }
    doc.raw_token_count = j.at("raw_tokens").get<std::uint32_t>();
    std::optional<Split> split;
    if (j.contains("split")) {
      split = j.at("split") == "train" ? Split::Train : Split::Test;
    }
    file.docs.push_back(std::move(doc));
    file.splits.push_back(split);
  }
  return file;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_string(buffer.str());
}

void write_manifest(const std::string& run_dir) {
  std::map<std::string, std::string> hashes;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel =
        fs::relative(entry.path(), run_dir).generic_string();
    if (rel == "manifest.json") continue;
    hashes.emplace(rel, sha256_file(entry.path().string()));
  }
  json j;
  j["files"] = hashes;
  atomic_write_text(run_dir + "/manifest.json", j.dump(2) + "\n");
}

void cmd_prep(RunConfig config) {
  config.finalize();
  const auto corpus = load_corpus(config);
  const auto stopwords = load_stopwords(config);

  const std::string dir = prep_dir(config);
  fs::create_directories(dir);

  atomic_write_with(dir + "/corpus.jsonl",
                    [&](const std::string& p) { save_jsonl(corpus, p); });

  const PreparedCorpus prepared = prepare_corpus(corpus, stopwords);
  atomic_write_with(dir + "/catalog.json", [&](const std::string& p) {
    prepared.catalog.save(p);
  });
  atomic_write_with(dir + "/vocab.json",
                    [&](const std::string& p) { prepared.vocab.save(p); });

  std::vector<ProcessedDocument> all_docs;
  std::vector<std::optional<Split>> splits;
  for (const auto& doc : prepared.train_docs) {
    all_docs.push_back(doc);
    splits.emplace_back(Split::Train);
  }
  for (const auto& doc : prepared.test_docs) {
    all_docs.push_back(doc);
    splits.emplace_back(Split::Test);
  }
  atomic_write_with(dir + "/processed.jsonl", [&](const std::string& p) {
    save_processed_jsonl(all_docs, splits, prepared.catalog, p);
  });

  const CorpusStats stats =
      corpus_stats(all_docs, prepared.catalog, prepared.vocab.size());
  atomic_write_with(dir + "/stats.json",
                    [&](const std::string& p) { stats.save_json(p); });

  if (config.split.kind == SplitSpec::Kind::KFold) {
    const FoldAssignment folds = make_folds(corpus, config.split);
    atomic_write_with(dir + "/folds.csv", [&](const std::string& p) {
      save_folds_csv(folds, p);
    });
  }

  write_resolved_config(config);
  write_manifest(config.run_dir());
  std::cout << "prep: " << corpus.size() << " documents, |V|="
            << prepared.vocab.size() << ", labels="
            << prepared.catalog.size() << " -> " << dir << "\n";
}

void cmd_train(RunConfig config) {
  config.finalize();
  LoadedPrep loaded = load_prep(config);
  const bool multilabel = [&] {
    switch (config.multilabel) {
      case MultilabelMode::Yes: return true;
      case MultilabelMode::No: return false;
      default: break;
    }
    for (const auto& doc : loaded.processed.docs) {
      if (doc.labels.size() > 1) return true;
    }
    return false;
  }();
  config.multilabel = multilabel ? MultilabelMode::Yes : MultilabelMode::No;
  {
    std::size_t train_rows = 0;
    for (const auto& split : loaded.processed.splits) {
      train_rows += !(split == Split::Test);
    }
    config.classifier.k = resolve_k(config.classifier.k,
                                    average_raw_tokens(loaded.processed.docs),
                                    train_rows);
  }

  const PreparedCorpus prepared = assemble_from_prep(std::move(loaded));
  const std::string dir = model_dir(config);
  fs::create_directories(dir);

  switch (config.classifier.kind) {
    case ClassifierKind::NaiveBayes: {
      if (multilabel) {
        const std::string sub = dir + "/nb_br";
        fs::create_directories(sub);
        json index;
        index["kind"] = "naive_bayes_br";
        index["alpha"] = config.classifier.alpha;
        auto& entries = index["labels"] = json::array();
        const auto train_labels = prepared.train_label_sets();
        const double total = static_cast<double>(train_labels.size());
        for (LabelId label = 0; label < prepared.catalog.size(); ++label) {
          std::vector<int> row_class(train_labels.size(), 0);
          std::size_t n_pos = 0;
          for (std::size_t i = 0; i < train_labels.size(); ++i) {
            if (std::binary_search(train_labels[i].begin(),
                                   train_labels[i].end(), label)) {
              row_class[i] = 1;
              ++n_pos;
            }
          }
          if (n_pos == 0) {
            entries.push_back({{"label", prepared.catalog.labels[label]},
                               {"always", "no"}});
            continue;
          }
          const std::vector<double> priors = {(total - n_pos) / total,
                                              n_pos / total};
          const NBModel model =
              nb_fit(prepared.train_matrix, row_class, 2, priors,
                     SmoothingConfig{config.classifier.alpha});
          const std::string file = "label_" + std::to_string(label) + ".json";
          atomic_write_with(sub + "/" + file, [&](const std::string& p) {
            model.save(p);
          });
          entries.push_back(
              {{"label", prepared.catalog.labels[label]}, {"file", file}});
        }
        atomic_write_text(sub + "/index.json", index.dump(2) + "\n");
      } else {
        std::vector<int> row_class(prepared.train_docs.size(), 0);
        for (std::size_t i = 0; i < prepared.train_docs.size(); ++i) {
          if (!prepared.train_docs[i].labels.empty()) {
            row_class[i] = static_cast<int>(prepared.train_docs[i].labels[0]);
          }
        }
        std::vector<double> priors(prepared.catalog.size(), 0.0);
        for (std::size_t c = 0; c < prepared.catalog.size(); ++c) {
          priors[c] = prepared.catalog.total_train > 0
                          ? static_cast<double>(
                                prepared.catalog.train_counts[c]) /
                                prepared.catalog.total_train
                          : 0.0;
        }
        const NBModel model =
            nb_fit(prepared.train_matrix, row_class, prepared.catalog.size(),
                   priors, SmoothingConfig{config.classifier.alpha});
        atomic_write_with(dir + "/nb.json", [&](const std::string& p) {
          model.save(p);
        });
      }
      break;
    }
    case ClassifierKind::Knn: {
      atomic_write_with(dir + "/train_matrix.coo", [&](const std::string& p) {
        prepared.train_matrix.save_coo(p);
      });
      json j;
      j["kind"] = "knn";
      j["k"] = config.classifier.k;
      j["distance"] = "manhattan";
      j["train_matrix"] = "train_matrix.coo";
      j["train_corpus"] = "../prep/processed.jsonl";
      atomic_write_text(dir + "/knn.json", j.dump(2) + "\n");
      break;
    }
    case ClassifierKind::Svm: {
      const std::string sub = dir + "/svm_ovr";
      fs::create_directories(sub);
      json index;
      index["kind"] = "linear_svm_ovr";
      index["c"] = config.classifier.c;
      auto& entries = index["labels"] = json::array();
      const auto train_labels = prepared.train_label_sets();
      for (LabelId label = 0; label < prepared.catalog.size(); ++label) {
        std::vector<int> y(train_labels.size(), -1);
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < train_labels.size(); ++i) {
          if (std::binary_search(train_labels[i].begin(),
                                 train_labels[i].end(), label)) {
            y[i] = 1;
            ++n_pos;
          }
        }
        if (n_pos == 0 || n_pos == train_labels.size()) {
          entries.push_back({{"label", prepared.catalog.labels[label]},
                             {"always", n_pos == 0 ? "no" : "yes"}});
          continue;
        }
        SvmOptions options;
        options.c = config.classifier.c;
        options.seed =
            derive_seed(config.seed, "svm:" + std::to_string(label));
        const LinearModel model =
            svm_fit(prepared.train_matrix, y, options);
        const std::string file = "label_" + std::to_string(label) + ".json";
        atomic_write_with(sub + "/" + file, [&](const std::string& p) {
          model.save(p);
        });
        entries.push_back(
            {{"label", prepared.catalog.labels[label]}, {"file", file}});
      }
      atomic_write_text(sub + "/index.json", index.dump(2) + "\n");
      break;
    }
    case ClassifierKind::Copula: {
      if (multilabel) {
        // The c vs not-c model pairs are streamed at evaluation time; the
        // complement co-occurrence tables are too large to materialize for
        // every label at once.
        json j;
        j["kind"] = "copula_br";
        j["metric"] = to_string(config.classifier.metric);
        j["lambda"] = config.classifier.lambda;
        j["train_corpus"] = "../prep/processed.jsonl";
        atomic_write_text(dir + "/copula_br.json", j.dump(2) + "\n");
      } else {
        const auto models = fit_copula_models(prepared, config.classifier);
        const auto background =
            background_probs(prepared.train_docs, prepared.vocab.size());
        atomic_write_with(dir + "/copula", [&](const std::string& p) {
          save_copula_bundle(models, background, p);
        });
      }
      break;
    }
  }

  write_resolved_config(config);
  write_manifest(config.run_dir());
  std::cout << "train: " << config.classifier.name() << " ("
            << (multilabel ? "binary relevance" : "single label") << ") -> "
            << dir << "\n";
}

namespace {

// Loads exactly the model the configured classifier kind would have
// written; a missing file means that classifier was never trained here.
std::unique_ptr<Classifier> load_model(const RunConfig& config,
                                       const PreparedCorpus& prepared,
                                       bool multilabel) {
  const std::string dir = model_dir(config);
  auto check_vocab = [&](std::size_t model_terms, const std::string& what) {
    if (model_terms != prepared.vocab.size()) {
      throw UsageError("vocabulary mismatch between " + what + " (" +
                       std::to_string(model_terms) + " terms) and corpus (" +
                       std::to_string(prepared.vocab.size()) + ")");
    }
  };
  auto require = [&](const std::string& path) {
    if (!fs::exists(path)) {
      throw UsageError("no trained " + to_string(config.classifier.kind) +
                       " model at " + path + "; run train first");
    }
  };
  switch (config.classifier.kind) {
    case ClassifierKind::NaiveBayes: {
      if (!multilabel) {
        require(dir + "/nb.json");
        NBModel model = NBModel::load(dir + "/nb.json");
        check_vocab(model.log_prob.empty() ? 0 : model.log_prob[0].size(),
                    "naive bayes model");
        return make_nb_multiclass(std::move(model));
      }
      require(dir + "/nb_br/index.json");
      std::ifstream in(dir + "/nb_br/index.json");
      json index;
      in >> index;
      std::vector<std::optional<NBModel>> per_label(prepared.catalog.size());
      std::size_t slot = 0;
      for (const auto& entry : index.at("labels")) {
        if (entry.contains("file")) {
          NBModel model = NBModel::load(
              dir + "/nb_br/" + entry.at("file").get<std::string>());
          check_vocab(model.log_prob[0].size(), "naive bayes model");
          per_label[slot] = std::move(model);
        }
        ++slot;
      }
      return make_nb_binary_relevance(std::move(per_label));
    }
    case ClassifierKind::Knn: {
      require(dir + "/knn.json");
      std::ifstream in(dir + "/knn.json");
      json j;
      in >> j;
      ClassifierSpec spec = config.classifier;
      spec.k = j.at("k").get<int>();
      return make_knn(spec, multilabel);
    }
    case ClassifierKind::Svm: {
      require(dir + "/svm_ovr/index.json");
      std::ifstream in(dir + "/svm_ovr/index.json");
      json index;
      in >> index;
      std::vector<std::optional<LinearModel>> per_label(
          prepared.catalog.size());
      std::vector<double> constant(prepared.catalog.size(), 0.0);
      std::size_t slot = 0;
      for (const auto& entry : index.at("labels")) {
        if (entry.contains("file")) {
          LinearModel model = LinearModel::load(
              dir + "/svm_ovr/" + entry.at("file").get<std::string>());
          check_vocab(model.weights.size(), "svm model");
          per_label[slot] = std::move(model);
        } else {
          constant[slot] = entry.at("always") == "yes"
                               ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
        }
        ++slot;
      }
      return make_svm_ovr(std::move(per_label), std::move(constant),
                          multilabel);
    }
    case ClassifierKind::Copula: {
      if (!multilabel) {
        require(dir + "/copula/manifest.json");
        auto models = load_copula_bundle(dir + "/copula");
        for (const auto& model : models) {
          check_vocab(model.u.size(), "copula model");
        }
        return make_copula_multiclass(std::move(models));
      }
      require(dir + "/copula_br.json");
      std::ifstream in(dir + "/copula_br.json");
      json j;
      in >> j;
      ClassifierSpec spec = config.classifier;
      spec.metric = cooc_metric_from_string(j.at("metric").get<std::string>());
      spec.lambda = j.at("lambda").get<double>();
      return make_copula_binary_relevance(spec, prepared);
    }
  }
  throw std::logic_error("unreachable classifier kind");
}

}  // namespace

void cmd_eval(RunConfig config) {
  config.finalize();
  LoadedPrep loaded = load_prep(config);
  const bool multilabel = [&] {
    switch (config.multilabel) {
      case MultilabelMode::Yes: return true;
      case MultilabelMode::No: return false;
      default: break;
    }
    for (const auto& doc : loaded.processed.docs) {
      if (doc.labels.size() > 1) return true;
    }
    return false;
  }();
  config.multilabel = multilabel ? MultilabelMode::Yes : MultilabelMode::No;
  {
    std::size_t train_rows = 0;
    for (const auto& split : loaded.processed.splits) {
      train_rows += !(split == Split::Test);
    }
    config.classifier.k = resolve_k(config.classifier.k,
                                    average_raw_tokens(loaded.processed.docs),
                                    train_rows);
  }

  const PreparedCorpus prepared = assemble_from_prep(std::move(loaded));
  if (prepared.test_docs.empty()) {
    throw UsageError("corpus has no test split to evaluate");
  }
  const auto model = load_model(config, prepared, multilabel);
  const auto predictions = model->predict_all(prepared);

  std::vector<LabeledDoc> gold, pred;
  for (std::size_t i = 0; i < prepared.test_docs.size(); ++i) {
    gold.push_back({prepared.test_docs[i].id, prepared.test_docs[i].labels});
    pred.push_back({prepared.test_docs[i].id, predictions[i]});
  }
  EvalReport report = micro_f1(gold, pred, prepared.catalog);
  report.classifier = config.classifier.name();
  report.corpus = config.corpus_name;

  const std::string dir = eval_dir(config);
  fs::create_directories(dir);
  atomic_write_with(dir + "/report.json",
                    [&](const std::string& p) { report.save_json(p); });
  atomic_write_with(dir + "/report.csv",
                    [&](const std::string& p) { report.save_csv(p); });
  atomic_write_with(dir + "/figdata.csv", [&](const std::string& p) {
    emit_figure_data({report}, prepared.catalog, p);
  });

  write_resolved_config(config);
  write_manifest(config.run_dir());
  std::cout << "eval: " << config.classifier.name()
            << " micro-F1=" << report.micro_f1 << " -> " << dir << "\n";
}

void cmd_crossval(RunConfig config) {
  config.finalize();
  if (config.split.kind != SplitSpec::Kind::KFold) {
    throw UsageError("crossval requires a kfold split spec");
  }
  const auto corpus = load_corpus(config);
  const auto stopwords = load_stopwords(config);
  const bool multilabel = resolve_multilabel(config, corpus);
  config.multilabel = multilabel ? MultilabelMode::Yes : MultilabelMode::No;

  if (config.classifier.k == 0) {
    // the default-K rule needs the corpus-level average document length
    Vocabulary probe_vocab;
    double sum = 0.0;
    for (const auto& doc : corpus) {
      const auto processed = preprocess(doc.id, doc.text, {}, stopwords,
                                        probe_vocab, PrepMode::Fit);
      sum += processed.raw_token_count;
    }
    // per-fold training side holds at least n - ceil(n/k) documents
    const std::size_t n = corpus.size();
    const std::size_t fold_cap = (n + config.split.k - 1) / config.split.k;
    config.classifier.k = resolve_k(
        0, corpus.empty() ? 0.0 : sum / static_cast<double>(n),
        n > fold_cap ? n - fold_cap : 1);
  }

  const CrossvalResult result =
      crossval(corpus, stopwords, config.split, config.classifier, multilabel,
               config.corpus_name);

  const std::string dir = config.run_dir() + "/crossval";
  fs::create_directories(dir);
  for (const auto& report : result.fold_reports) {
    char name[32];
    std::snprintf(name, sizeof(name), "fold_%03d.report.json", report.fold);
    atomic_write_with(dir + "/" + name,
                      [&](const std::string& p) { report.save_json(p); });
  }
  json summary;
  summary["classifier"] = config.classifier.name();
  summary["corpus"] = config.corpus_name;
  summary["folds"] = result.fold_reports.size();
  summary["mean_micro_f1"] = result.mean_micro_f1;
  atomic_write_text(dir + "/summary.json", summary.dump(2) + "\n");

  const FoldAssignment folds = make_folds(corpus, config.split);
  atomic_write_with(dir + "/folds.csv", [&](const std::string& p) {
    save_folds_csv(folds, p);
  });

  write_resolved_config(config);
  write_manifest(config.run_dir());
  std::cout << "crossval: " << config.classifier.name() << " mean micro-F1="
            << result.mean_micro_f1 << " over " << result.fold_reports.size()
            << " folds -> " << dir << "\n";
}

void cmd_stats(RunConfig config) {
  config.finalize();
  const auto corpus = load_corpus(config);
  const auto stopwords = load_stopwords(config);
  const PreparedCorpus prepared = prepare_corpus(corpus, stopwords);
  std::vector<ProcessedDocument> all_docs = prepared.train_docs;
  all_docs.insert(all_docs.end(), prepared.test_docs.begin(),
                  prepared.test_docs.end());
  const CorpusStats stats =
      corpus_stats(all_docs, prepared.catalog, prepared.vocab.size());
  const std::string dir = prep_dir(config);
  fs::create_directories(dir);
  atomic_write_with(dir + "/stats.json",
                    [&](const std::string& p) { stats.save_json(p); });
  write_resolved_config(config);
  write_manifest(config.run_dir());
  std::cout << "stats: var_tf=" << stats.var_tf
            << " avg_doc_len=" << stats.avg_doc_len << " type="
            << (stats.multi_label ? "multi-label" : "multi-class") << " -> "
            << dir << "/stats.json\n";
}

void cmd_signif(const std::vector<std::string>& reports_a,
                const std::vector<std::string>& reports_b,
                const std::string& mode, const std::string& out_path) {
  SignifMode signif_mode;
  if (mode == "per-fold") {
    signif_mode = SignifMode::PerFold;
  } else if (mode == "per-category") {
    signif_mode = SignifMode::PerCategory;
  } else {
    throw UsageError("mode must be per-fold or per-category, got: " + mode);
  }
  auto load_all = [](const std::vector<std::string>& paths) {
    std::vector<EvalReport> reports;
    for (const auto& path : paths) {
      if (!fs::exists(path)) throw UsageError("missing report: " + path);
      reports.push_back(EvalReport::load_json(path));
    }
    return reports;
  };
  const auto a = load_all(reports_a);
  const auto b = load_all(reports_b);
  SignificanceResult result;
  try {
    result = significance_protocol(a, b, signif_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  atomic_write_with(out_path,
                    [&](const std::string& p) { result.save_json(p); });
  std::cout << "signif: n=" << result.n << " W=" << result.w_stat
            << " p=" << result.p_value << " category "
            << to_string(result.category) << (result.asterisk ? "*" : "")
            << " -> " << out_path << "\n";
}

void cmd_figdata(const std::vector<std::string>& report_paths,
                 const std::string& catalog_path, const std::string& out_path,
                 std::size_t min_size, std::size_t max_size) {
  if (!fs::exists(catalog_path)) {
    throw UsageError("missing catalog: " + catalog_path);
  }
  const LabelCatalog catalog = LabelCatalog::load(catalog_path);
  std::vector<EvalReport> reports;
  for (const auto& path : report_paths) {
    if (!fs::exists(path)) throw UsageError("missing report: " + path);
    reports.push_back(EvalReport::load_json(path));
  }
  try {
    atomic_write_with(out_path, [&](const std::string& p) {
      emit_figure_data(reports, catalog, p, min_size, max_size);
    });
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::cout << "figdata: " << reports.size() << " classifiers -> " << out_path
            << "\n";
}

}  // namespace textclass
