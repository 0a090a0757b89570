#include "textclass/porter.hpp"

#include <array>
#include <cstddef>
#include <string_view>

namespace textclass {
namespace {

bool is_consonant(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
      return false;
    case 'y':
      // y is a vowel when preceded by a consonant
      return i == 0 || !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// m in the [C](VC)^m[V] decomposition: vowel-to-consonant transitions.
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const bool cons = is_consonant(stem, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant where the final consonant is not
// w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
         is_consonant(w, n - 1) && last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suf) {
  return w.size() >= suf.size() &&
         w.compare(w.size() - suf.size(), suf.size(), suf) == 0;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
    return;
  }
  bool fired = false;
  if (ends_with(w, "ed") &&
      contains_vowel(std::string_view(w).substr(0, w.size() - 2))) {
    w.erase(w.size() - 2);
    fired = true;
  } else if (ends_with(w, "ing") &&
             contains_vowel(std::string_view(w).substr(0, w.size() - 3))) {
    w.erase(w.size() - 3);
    fired = true;
  }
  if (!fired) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w)) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") &&
      contains_vowel(std::string_view(w).substr(0, w.size() - 1))) {
    w.back() = 'i';
  }
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Only the rule with the longest matching suffix is considered within a
// step; if its measure condition fails, the step does nothing.
void apply_longest(std::string& w, const Rule* rules, std::size_t count) {
  const Rule* best = nullptr;
  for (std::size_t i = 0; i < count; ++i) {
    if (ends_with(w, rules[i].suffix) &&
        (best == nullptr || rules[i].suffix.size() > best->suffix.size())) {
      best = &rules[i];
    }
  }
  if (best == nullptr) return;
  const std::size_t stem_len = w.size() - best->suffix.size();
  if (measure(std::string_view(w).substr(0, stem_len)) > 0) {
    w.erase(stem_len);
    w.append(best->replacement);
  }
}

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
    {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
    {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
    {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
    {"iviti", "ive"},   {"biliti", "ble"},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
}};

constexpr std::array<std::string_view, 19> kStep4{
    "al",    "ance", "ence", "er",  "ic",  "able", "ible",
    "ant",   "ement", "ment", "ent", "ion", "ou",   "ism",
    "ate",   "iti",  "ous",  "ive", "ize",
};

void step4(std::string& w) {
  std::string_view best;
  for (const auto suf : kStep4) {
    if (ends_with(w, suf) && suf.size() > best.size()) best = suf;
  }
  if (best.empty()) return;
  const std::size_t stem_len = w.size() - best.size();
  const std::string_view stem = std::string_view(w).substr(0, stem_len);
  if (measure(stem) <= 1) return;
  if (best == "ion" && !(ends_with(stem, "s") || ends_with(stem, "t"))) return;
  w.erase(stem_len);
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const std::string_view stem = std::string_view(w).substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  std::string w = word;
  step1a(w);
  step1b(w);
  step1c(w);
  apply_longest(w, kStep2.data(), kStep2.size());
  apply_longest(w, kStep3.data(), kStep3.size());
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace textclass
