#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "textclass/textprep.hpp"

namespace textclass {

enum class Split { Train, Test };

struct RawDocument {
  std::string id;
  std::string text;
  std::vector<std::string> labels;  // sorted, deduplicated
  std::optional<Split> split_hint;
};

struct SplitSpec {
  enum class Kind { Fixed, KFold };
  Kind kind = Kind::Fixed;
  int k = 10;
  std::uint64_t seed = 0;
  bool stratified = true;
};

// Label universe plus per-label training-document counts.
struct LabelCatalog {
  std::vector<std::string> labels;  // sorted ascending
  std::unordered_map<std::string, LabelId> index;
  std::vector<std::size_t> train_counts;  // N_t
  std::size_t total_train = 0;            // N_total

  LabelId id_of(const std::string& label) const;
  std::optional<LabelId> find(const std::string& label) const;
  std::size_t size() const { return labels.size(); }

  void save(const std::string& path) const;
  static LabelCatalog load(const std::string& path);
};

// Builds the catalog over every document's labels; counts come from the
// training docs only (split-less docs count as training).
LabelCatalog build_catalog(const std::vector<RawDocument>& corpus);

struct LoadStats {
  std::size_t skipped_files = 0;
};

// One document per line: {"id":..., "text":..., "labels":[...], "split":?}.
std::vector<RawDocument> load_jsonl(const std::string& path);
void save_jsonl(const std::vector<RawDocument>& corpus,
                const std::string& path);

// One subdirectory per category, one file per message. Message headers
// (everything before the first blank line) are stripped.
std::vector<RawDocument> load_newsgroups_dir(const std::string& root,
                                             LoadStats* stats = nullptr);

// Reuters-21578 SGML distribution (reut2-*.sgm). Applies the ModApte
// convention: LEWISSPLIT in {TRAIN, TEST}, TOPICS="YES", labels restricted
// to the standard 90-category list, documents without a surviving label
// dropped.
std::vector<RawDocument> load_reuters_sgml(const std::string& dir);

// The standard 90 ModApte categories (>= 1 train and >= 1 test document).
const std::vector<std::string>& reuters_modapte_categories();

// Restricts labels to the ModApte category list and drops documents left
// with no label or no split assignment. Idempotent.
std::vector<RawDocument> modapte_filter(std::vector<RawDocument> corpus);

struct FoldAssignment {
  std::vector<std::vector<std::string>> train_ids;
  std::vector<std::vector<std::string>> test_ids;
  std::size_t folds() const { return test_ids.size(); }
};

// K disjoint folds covering the corpus; stratified folds keep per-label
// proportions within one document. Deterministic under a fixed seed.
FoldAssignment make_folds(const std::vector<RawDocument>& corpus,
                          const SplitSpec& spec);

void save_folds_csv(const FoldAssignment& folds, const std::string& path);

}  // namespace textclass
