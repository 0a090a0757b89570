#include <benchmark/benchmark.h>

#include <vector>

#include "textclass/classifiers.hpp"
#include "textclass/copula.hpp"
#include "textclass/random.hpp"
#include "textclass/sparse.hpp"

namespace {

using namespace textclass;

SparseMatrix random_matrix(std::size_t rows, std::size_t cols,
                           std::size_t nnz_per_row, std::uint64_t seed) {
  SeededRng rng(seed);
  SparseMatrix matrix;
  matrix.cols = cols;
  matrix.rows.resize(rows);
  for (auto& row : matrix.rows) {
    std::vector<TermId> terms;
    for (std::size_t i = 0; i < nnz_per_row; ++i) {
      terms.push_back(static_cast<TermId>(rng.bounded(cols)));
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (const TermId t : terms) row.entries.emplace_back(t, rng.uniform01());
  }
  return matrix;
}

void BM_ManhattanDistance(benchmark::State& state) {
  const auto matrix = random_matrix(2, 50000,
                                    static_cast<std::size_t>(state.range(0)),
                                    21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        manhattan_distance(matrix.rows[0], matrix.rows[1]));
  }
}
BENCHMARK(BM_ManhattanDistance)->Arg(50)->Arg(200);

void BM_KnnQuery(benchmark::State& state) {
  const auto train = random_matrix(static_cast<std::size_t>(state.range(0)),
                                   20000, 80, 33);
  const auto query = random_matrix(1, 20000, 80, 34);
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_neighbors(train, query.rows[0], 15));
  }
  state.SetItemsProcessed(state.iterations() * train.row_count());
}
BENCHMARK(BM_KnnQuery)->Arg(1000)->Arg(5000);

void BM_SvmFit(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0));
  const auto matrix = random_matrix(rows, 5000, 60, 55);
  std::vector<int> labels;
  SeededRng rng(56);
  for (std::size_t i = 0; i < rows; ++i) {
    labels.push_back(rng.bounded(2) ? 1 : -1);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(svm_fit(matrix, labels, SvmOptions{}));
  }
}
BENCHMARK(BM_SvmFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GumbelBivariate(benchmark::State& state) {
  SeededRng rng(77);
  std::vector<double> us, thetas;
  for (int i = 0; i < 1024; ++i) {
    us.push_back(0.01 + 0.98 * rng.uniform01());
    thetas.push_back(1.0 + 5.0 * rng.uniform01());
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t j = i++ & 1023;
    benchmark::DoNotOptimize(
        gumbel_log_bivariate(us[j], us[1023 - j], thetas[j]));
  }
}
BENCHMARK(BM_GumbelBivariate);

}  // namespace
