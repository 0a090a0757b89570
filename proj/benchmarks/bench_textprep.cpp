#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "textclass/porter.hpp"
#include "textclass/random.hpp"
#include "textclass/textprep.hpp"

namespace {

std::vector<std::string> synthetic_words(std::size_t count) {
  textclass::SeededRng rng(9);
  const char* suffixes[] = {"ing",  "ed",    "ation", "ness", "izer",
                            "able", "ously", "ment",  "s",    ""};
  std::vector<std::string> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string word;
    for (std::size_t c = 0; c < 4 + rng.bounded(6); ++c) {
      word.push_back(static_cast<char>('a' + rng.bounded(26)));
    }
    word += suffixes[rng.bounded(10)];
    words.push_back(std::move(word));
  }
  return words;
}

std::string synthetic_text(std::size_t sentences) {
  textclass::SeededRng rng(11);
  const auto words = synthetic_words(400);
  std::string text;
  for (std::size_t s = 0; s < sentences; ++s) {
    for (std::size_t w = 0; w < 8 + rng.bounded(12); ++w) {
      text += words[rng.bounded(words.size())];
      text.push_back(' ');
    }
    text += ". ";
  }
  return text;
}

void BM_PorterStem(benchmark::State& state) {
  const auto words = synthetic_words(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& word : words) {
      benchmark::DoNotOptimize(textclass::porter_stem(word));
    }
  }
  state.SetItemsProcessed(state.iterations() * words.size());
}
BENCHMARK(BM_PorterStem)->Arg(1000)->Arg(10000);

void BM_SegmentAndTokenize(benchmark::State& state) {
  const std::string text =
      synthetic_text(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const auto& sentence : textclass::segment_sentences(text)) {
      benchmark::DoNotOptimize(textclass::tokenize(sentence));
    }
  }
  state.SetBytesProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_SegmentAndTokenize)->Arg(50)->Arg(500);

void BM_PreprocessFit(benchmark::State& state) {
  const std::string text =
      synthetic_text(static_cast<std::size_t>(state.range(0)));
  const auto stopwords = textclass::StopwordList::from_words(
      {"the", "and", "of", "to", "in"});
  for (auto _ : state) {
    textclass::Vocabulary vocab;
    benchmark::DoNotOptimize(textclass::preprocess(
        "bench", text, {0}, stopwords, vocab, textclass::PrepMode::Fit));
  }
}
BENCHMARK(BM_PreprocessFit)->Arg(20)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
