#include "textclass/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "textclass/porter.hpp"

#include <nlohmann/json.hpp>

namespace textclass {

StopwordList StopwordList::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stop-word file: " + path);
  StopwordList list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t");
    list.words_.insert(line.substr(start, end - start + 1));
  }
  return list;
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
  StopwordList list;
  list.words_.insert(words.begin(), words.end());
  return list;
}

TermId Vocabulary::add(const std::string& term) {
  auto it = index_.find(term);
  if (it != index_.end()) return it->second;
  const TermId id = static_cast<TermId>(terms_.size());
  index_.emplace(term, id);
  terms_.push_back(term);
  doc_freq_.push_back(0);
  return id;
}

std::optional<TermId> Vocabulary::lookup(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::count_document(const std::vector<TermId>& distinct_terms) {
  for (const TermId id : distinct_terms) ++doc_freq_[id];
  ++train_docs_;
}

void Vocabulary::save(const std::string& path) const {
  nlohmann::json j;
  j["terms"] = terms_;
  j["doc_freq"] = doc_freq_;
  j["train_docs"] = train_docs_;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary: " + path);
  out << j.dump() << "\n";
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary: " + path);
  nlohmann::json j;
  in >> j;
  Vocabulary v;
  v.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.doc_freq_ = j.at("doc_freq").get<std::vector<std::uint32_t>>();
  v.train_docs_ = j.at("train_docs").get<std::size_t>();
  v.index_.reserve(v.terms_.size());
  for (TermId i = 0; i < v.terms_.size(); ++i) v.index_.emplace(v.terms_[i], i);
  return v;
}

std::vector<std::string> segment_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const std::size_t n = text.size();
  auto emit = [&](std::size_t end) {
    std::size_t a = start;
    while (a < end && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    std::size_t b = end;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    if (b > a) sentences.emplace_back(text, a, b - a);
    start = end;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == n || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      emit(i + 1);
    }
  }
  emit(n);
  return sentences;
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) tokens.push_back(current);
    current.clear();
  };
  for (const char ch : sentence) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

ProcessedDocument preprocess(const std::string& id, const std::string& text,
                             const std::vector<LabelId>& labels,
                             const StopwordList& stopwords, Vocabulary& vocab,
                             PrepMode mode) {
  ProcessedDocument doc;
  doc.id = id;
  doc.labels = labels;
  std::sort(doc.labels.begin(), doc.labels.end());
  for (const std::string& sentence : segment_sentences(text)) {
    std::vector<TermId> ids;
    for (const std::string& token : tokenize(sentence)) {
      ++doc.raw_token_count;
      if (stopwords.contains(token)) continue;
      const std::string stem = porter_stem(token);
      if (mode == PrepMode::Fit) {
        ids.push_back(vocab.add(stem));
      } else if (auto tid = vocab.lookup(stem)) {
        ids.push_back(*tid);
      }
    }
    if (ids.empty()) continue;
    doc.tokens.insert(doc.tokens.end(), ids.begin(), ids.end());
    doc.sentences.push_back(std::move(ids));
  }
  return doc;
}

}  // namespace textclass
