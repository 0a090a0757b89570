#include "textclass/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "textclass/random.hpp"

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace textclass {

LabelId LabelCatalog::id_of(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end()) {
    throw std::runtime_error("unknown label: " + label);
  }
  return it->second;
}

std::optional<LabelId> LabelCatalog::find(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

void LabelCatalog::save(const std::string& path) const {
  nlohmann::json j;
  j["labels"] = labels;
  j["train_counts"] = train_counts;
  j["total_train"] = total_train;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write catalog: " + path);
  out << j.dump() << "\n";
}

LabelCatalog LabelCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog: " + path);
  nlohmann::json j;
  in >> j;
  LabelCatalog c;
  c.labels = j.at("labels").get<std::vector<std::string>>();
  c.train_counts = j.at("train_counts").get<std::vector<std::size_t>>();
  c.total_train = j.at("total_train").get<std::size_t>();
  for (LabelId i = 0; i < c.labels.size(); ++i) c.index.emplace(c.labels[i], i);
  return c;
}

LabelCatalog build_catalog(const std::vector<RawDocument>& corpus) {
  std::set<std::string> label_set;
  for (const auto& doc : corpus) {
    label_set.insert(doc.labels.begin(), doc.labels.end());
  }
  LabelCatalog catalog;
  catalog.labels.assign(label_set.begin(), label_set.end());
  for (LabelId i = 0; i < catalog.labels.size(); ++i) {
    catalog.index.emplace(catalog.labels[i], i);
  }
  catalog.train_counts.assign(catalog.labels.size(), 0);
  for (const auto& doc : corpus) {
    if (doc.split_hint == Split::Test) continue;
    ++catalog.total_train;
    for (const auto& label : doc.labels) {
      ++catalog.train_counts[catalog.index.at(label)];
    }
  }
  return catalog;
}

namespace {

std::vector<std::string> normalize_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

}  // namespace

std::vector<RawDocument> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<RawDocument> corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
        !j.contains("text") || !j.contains("labels")) {
      throw std::runtime_error(path + ": malformed record at line " +
                               std::to_string(line_no));
    }
    RawDocument doc;
    try {
      doc.id = j.at("id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      doc.labels =
          normalize_labels(j.at("labels").get<std::vector<std::string>>());
      if (j.contains("split")) {
        const auto split = j.at("split").get<std::string>();
        if (split == "train") {
          doc.split_hint = Split::Train;
        } else if (split == "test") {
          doc.split_hint = Split::Test;
        } else {
          throw std::runtime_error("bad split value '" + split + "'");
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": malformed record at line " +
                               std::to_string(line_no) + ": " + e.what());
    }
    if (!seen_ids.insert(doc.id).second) {
      throw std::runtime_error(path + ": duplicate document id '" + doc.id +
                               "' at line " + std::to_string(line_no));
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

void save_jsonl(const std::vector<RawDocument>& corpus,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& doc : corpus) {
    nlohmann::json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    j["labels"] = doc.labels;
    if (doc.split_hint) {
      j["split"] = *doc.split_hint == Split::Train ? "train" : "test";
    }
    out << j.dump() << "\n";
  }
}

std::vector<RawDocument> load_newsgroups_dir(const std::string& root,
                                             LoadStats* stats) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error("not a directory: " + root);
  }
  std::vector<fs::path> categories;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) categories.push_back(entry.path());
  }
  std::sort(categories.begin(), categories.end());

  std::vector<RawDocument> corpus;
  for (const auto& category : categories) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(category)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string label = category.filename().string();
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) {
        if (stats) ++stats->skipped_files;
        continue;
      }
      std::ostringstream buffer;
      buffer << in.rdbuf();
      std::string text = buffer.str();
      // Strip message headers: everything up to the first blank line.
      std::size_t pos = 0;
      std::size_t body = std::string::npos;
      while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) break;
        std::size_t len = eol - pos;
        if (len > 0 && text[pos + len - 1] == '\r') --len;
        if (len == 0) {
          body = eol + 1;
          break;
        }
        pos = eol + 1;
      }
      if (body != std::string::npos) text.erase(0, body);
      RawDocument doc;
      doc.id = label + "/" + file.filename().string();
      doc.text = std::move(text);
      doc.labels = {label};
      corpus.push_back(std::move(doc));
    }
  }
  return corpus;
}

const std::vector<std::string>& reuters_modapte_categories() {
  static const std::vector<std::string> categories = {
      "acq", "alum", "barley", "bop", "carcass", "castor-oil", "cocoa",
      "coconut", "coconut-oil", "coffee", "copper", "copra-cake", "corn",
      "cotton", "cotton-oil", "cpi", "cpu", "crude", "dfl", "dlr", "dmk",
      "earn", "fuel", "gas", "gnp", "gold", "grain", "groundnut",
      "groundnut-oil", "heat", "hog", "housing", "income", "instal-debt",
      "interest", "ipi", "iron-steel", "jet", "jobs", "l-cattle", "lead",
      "lei", "lin-oil", "livestock", "lumber", "meal-feed", "money-fx",
      "money-supply", "naphtha", "nat-gas", "nickel", "nkr", "nzdlr", "oat",
      "oilseed", "orange", "palladium", "palm-oil", "palmkernel", "pet-chem",
      "platinum", "potato", "propane", "rand", "rape-oil", "rapeseed",
      "reserves", "retail", "rice", "rubber", "rye", "ship", "silver",
      "sorghum", "soy-meal", "soy-oil", "soybean", "strategic-metal", "sugar",
      "sun-meal", "sun-oil", "sunseed", "tea", "tin", "trade", "veg-oil",
      "wheat", "wpi", "yen", "zinc"};
  return categories;
}

std::vector<RawDocument> modapte_filter(std::vector<RawDocument> corpus) {
  static const std::unordered_set<std::string> allowed(
      reuters_modapte_categories().begin(), reuters_modapte_categories().end());
  std::vector<RawDocument> filtered;
  filtered.reserve(corpus.size());
  for (auto& doc : corpus) {
    if (!doc.split_hint) continue;
    std::vector<std::string> kept;
    for (auto& label : doc.labels) {
      if (allowed.count(label)) kept.push_back(std::move(label));
    }
    if (kept.empty()) continue;
    doc.labels = std::move(kept);
    filtered.push_back(std::move(doc));
  }
  return filtered;
}

namespace {

// Decodes SGML entities; anything unrecognized becomes a space.
std::string decode_entities(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      out.push_back(raw[i++]);
      continue;
    }
    const std::size_t semi = raw.find(';', i + 1);
    if (semi == std::string::npos || semi - i > 10) {
      out.push_back(' ');
      ++i;
      continue;
    }
    const std::string name = raw.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name.size() > 1 && name[0] == '#') {
      int code = 0;
      bool ok = true;
      for (std::size_t k = 1; k < name.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(name[k]))) {
          ok = false;
          break;
        }
        code = code * 10 + (name[k] - '0');
      }
      if (ok && code >= 32 && code < 127) {
        out.push_back(static_cast<char>(code));
      } else {
        out.push_back(' ');
      }
    } else {
      out.push_back(' ');
    }
    i = semi + 1;
  }
  return out;
}

std::string extract_element(const std::string& chunk, const std::string& tag) {
  const std::string open = "<" + tag + ">";
  const std::string close = "</" + tag + ">";
  const std::size_t begin = chunk.find(open);
  if (begin == std::string::npos) return {};
  const std::size_t start = begin + open.size();
  const std::size_t end = chunk.find(close, start);
  if (end == std::string::npos) return {};
  return chunk.substr(start, end - start);
}

std::string extract_attribute(const std::string& tag_text,
                              const std::string& name) {
  const std::string key = name + "=\"";
  const std::size_t begin = tag_text.find(key);
  if (begin == std::string::npos) return {};
  const std::size_t start = begin + key.size();
  const std::size_t end = tag_text.find('"', start);
  if (end == std::string::npos) return {};
  return tag_text.substr(start, end - start);
}

std::string strip_tags(const std::string& chunk) {
  std::string out;
  out.reserve(chunk.size());
  bool in_tag = false;
  for (const char c : chunk) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>') {
      in_tag = false;
      out.push_back(' ');
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

void parse_reuters_file(const std::string& path,
                        std::vector<RawDocument>& corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open SGML file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::size_t pos = 0;
  while (true) {
    const std::size_t open = content.find("<REUTERS", pos);
    if (open == std::string::npos) break;
    const std::size_t open_end = content.find('>', open);
    if (open_end == std::string::npos) break;
    const std::size_t close = content.find("</REUTERS>", open_end);
    if (close == std::string::npos) break;
    pos = close + 10;

    const std::string tag = content.substr(open, open_end - open);
    const std::string chunk =
        content.substr(open_end + 1, close - open_end - 1);

    const std::string topics_attr = extract_attribute(tag, "TOPICS");
    const std::string lewis_split = extract_attribute(tag, "LEWISSPLIT");
    const std::string new_id = extract_attribute(tag, "NEWID");
    if (topics_attr != "YES") continue;

    RawDocument doc;
    if (lewis_split == "TRAIN") {
      doc.split_hint = Split::Train;
    } else if (lewis_split == "TEST") {
      doc.split_hint = Split::Test;
    } else {
      continue;  // NOT-USED
    }
    doc.id = new_id;

    const std::string topics = extract_element(chunk, "TOPICS");
    std::size_t dpos = 0;
    while (true) {
      const std::size_t dopen = topics.find("<D>", dpos);
      if (dopen == std::string::npos) break;
      const std::size_t dclose = topics.find("</D>", dopen);
      if (dclose == std::string::npos) break;
      doc.labels.push_back(topics.substr(dopen + 3, dclose - dopen - 3));
      dpos = dclose + 4;
    }
    doc.labels = normalize_labels(std::move(doc.labels));

    const std::string title = extract_element(chunk, "TITLE");
    const std::string body = extract_element(chunk, "BODY");
    std::string text;
    if (!title.empty()) text = title;
    if (!body.empty()) {
      if (!text.empty()) text += "\n";
      text += body;
    }
    if (text.empty()) {
      // UNPROC/BRIEF items carry their content directly inside <TEXT>.
      const std::size_t tbegin = chunk.find("<TEXT");
      if (tbegin != std::string::npos) {
        const std::size_t tend = chunk.find("</TEXT>", tbegin);
        if (tend != std::string::npos) {
          text = strip_tags(chunk.substr(tbegin, tend - tbegin));
        }
      }
    }
    doc.text = decode_entities(text);
    corpus.push_back(std::move(doc));
  }
}

}  // namespace

std::vector<RawDocument> load_reuters_sgml(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".sgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no .sgm files under " + dir);
  }
  std::vector<RawDocument> corpus;
  for (const auto& file : files) parse_reuters_file(file.string(), corpus);
  return modapte_filter(std::move(corpus));
}

FoldAssignment make_folds(const std::vector<RawDocument>& corpus,
                          const SplitSpec& spec) {
  if (spec.kind != SplitSpec::Kind::KFold) {
    throw std::invalid_argument("make_folds requires a kfold split spec");
  }
  const std::size_t k = static_cast<std::size_t>(spec.k);
  if (spec.k < 2) throw std::invalid_argument("kfold requires k >= 2");
  if (k > corpus.size()) {
    throw std::invalid_argument("k exceeds corpus size");
  }

  std::vector<int> fold_of(corpus.size(), -1);
  SeededRng rng(spec.seed);

  // Canonical id order first, so the assignment depends only on the
  // document set and the seed, not on input order.
  auto sort_by_id = [&](std::vector<std::size_t>& members) {
    std::sort(members.begin(), members.end(),
              [&](std::size_t x, std::size_t y) {
                return corpus[x].id < corpus[y].id;
              });
  };

  if (spec.stratified) {
    // Stratum key: lexicographically smallest label. Documents inside a
    // stratum are shuffled, then dealt to the least-filled fold so both the
    // stratum and the overall fold sizes stay within one document.
    std::map<std::string, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const std::string key =
          corpus[i].labels.empty() ? std::string() : corpus[i].labels.front();
      strata[key].push_back(i);
    }
    std::vector<std::size_t> fill(k, 0);
    for (auto& [key, members] : strata) {
      sort_by_id(members);
      rng.shuffle(members);
      for (const std::size_t doc : members) {
        std::size_t best = 0;
        for (std::size_t f = 1; f < k; ++f) {
          if (fill[f] < fill[best]) best = f;
        }
        fold_of[doc] = static_cast<int>(best);
        ++fill[best];
      }
    }
  } else {
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    sort_by_id(order);
    rng.shuffle(order);
    for (std::size_t j = 0; j < order.size(); ++j) {
      fold_of[order[j]] = static_cast<int>(j % k);
    }
  }

  FoldAssignment folds;
  folds.train_ids.resize(k);
  folds.test_ids.resize(k);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (static_cast<int>(f) == fold_of[i]) {
        folds.test_ids[f].push_back(corpus[i].id);
      } else {
        folds.train_ids[f].push_back(corpus[i].id);
      }
    }
  }
  return folds;
}

void save_folds_csv(const FoldAssignment& folds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write folds: " + path);
  out << "doc_id,fold\n";
  for (std::size_t f = 0; f < folds.folds(); ++f) {
    for (const auto& id : folds.test_ids[f]) {
      out << id << "," << f << "\n";
    }
  }
}

}  // namespace textclass
