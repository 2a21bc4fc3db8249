#include <benchmark/benchmark.h>

#include <sstream>

#include "aaechat/corpus/corpus.hpp"
#include "aaechat/speech/normalize.hpp"
#include "aaechat/speech/sentences.hpp"
#include "synthetic_corpus.hpp"

namespace {

std::vector<std::string> corpus_texts() {
  std::istringstream in(aaechat::fixturegen::make_synthetic_corpus());
  std::vector<std::string> out;
  for (const auto& d : aaechat::corpus::parse_dialogue_corpus(in).dialogues) {
    for (const auto& t : d.turns) out.push_back(t.text);
  }
  return out;
}

void BM_NormalizeForTts(benchmark::State& state) {
  const auto texts = corpus_texts();
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& t : texts) {
      benchmark::DoNotOptimize(aaechat::speech::normalize_for_tts(t));
      bytes += t.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_NormalizeForTts);

void BM_SplitLongUtterance(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "Dr. Patel will see you at noon, so please bring the forms. ";
  for (auto _ : state) benchmark::DoNotOptimize(aaechat::speech::split_long_utterance(text, 30));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SplitLongUtterance)->RangeMultiplier(4)->Range(1, 256)->Complexity();

}  // namespace
