#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "textclass/corpus.hpp"
#include "textclass/evaluation.hpp"
#include "textclass/pipeline.hpp"

namespace textclass {

// Configuration or command-line misuse; the CLI maps it to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MultilabelMode { Auto, Yes, No };

// One benchmark run resolved from a JSON config file plus flag overrides.
struct RunConfig {
  std::string input;
  std::string format = "jsonl";  // jsonl | newsgroups | reuters-sgml
  std::string stopwords;         // empty = shipped default list
  std::string corpus_name;       // empty = input file stem
  SplitSpec split;
  ClassifierSpec classifier;     // classifier.k == 0 means auto (15/100)
  MultilabelMode multilabel = MultilabelMode::Auto;
  std::string outdir = "runs";
  std::string run_id;            // empty = derived from the config hash
  std::uint64_t seed = 0;
  bool seed_set = false;

  static RunConfig from_json_file(const std::string& path);
  std::string to_json() const;

  // Fills derived fields (corpus name, run id, seeds) and validates.
  void finalize();
  std::string run_dir() const;
};

// Subcommand entry points. They throw UsageError for configuration
// problems and std::exception for internal failures.
void cmd_prep(RunConfig config);
void cmd_train(RunConfig config);
void cmd_eval(RunConfig config);
void cmd_crossval(RunConfig config);
void cmd_stats(RunConfig config);
void cmd_signif(const std::vector<std::string>& reports_a,
                const std::vector<std::string>& reports_b,
                const std::string& mode, const std::string& out_path);
void cmd_figdata(const std::vector<std::string>& report_paths,
                 const std::string& catalog_path, const std::string& out_path,
                 std::size_t min_size, std::size_t max_size);

// Processed-corpus interchange file: one record per document with label
// strings, per-sentence term-id arrays and the pre-stop-word token count.
void save_processed_jsonl(const std::vector<ProcessedDocument>& docs,
                          const std::vector<std::optional<Split>>& splits,
                          const LabelCatalog& catalog, const std::string& path);
struct ProcessedFile {
  std::vector<ProcessedDocument> docs;
  std::vector<std::optional<Split>> splits;
};
ProcessedFile load_processed_jsonl(const std::string& path,
                                   const LabelCatalog& catalog);

std::string sha256_file(const std::string& path);

// Re-hashes every file under the run directory into manifest.json.
void write_manifest(const std::string& run_dir);

}  // namespace textclass
