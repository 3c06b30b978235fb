// Serial vs OpenMP rank-4 kernels, and the per-point curvature pipeline.

#include <benchmark/benchmark.h>

#include "hkqk/correspondence.hpp"
#include "hkqk/curvature.hpp"
#include "hkqk/kernels.hpp"
#include "hkqk/sampling.hpp"

using namespace hkqk;

namespace {

Matrix random_matrix(int d, std::uint64_t seed) {
    sampling::Rng rng(seed);
    return sampling::gaussian_matrix(d, d, rng);
}

QuadCov random_quadcov(int d) {
    return kernels::serial::outer(random_matrix(d, 1), random_matrix(d, 2));
}

template <QuadCov (*Kernel)(const Matrix&, const Matrix&)>
void BM_Product(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Matrix a = random_matrix(d, 3), b = random_matrix(d, 4);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

template <QuadCov (*Kernel)(const QuadCov&)>
void BM_Symmetrize(benchmark::State& state) {
    const QuadCov phi = random_quadcov(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(phi));
}

template <QuadCov (*Kernel)(const QuadCov&, const Matrix&)>
void BM_ChangeBasis(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const QuadCov phi = random_quadcov(d);
    const Matrix F = random_matrix(d, 5);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(phi, F));
}

void BM_CurvatureNorm(benchmark::State& state) {
    const flat_model::ModelParams p{static_cast<int>(state.range(0)), 1.0, false};
    sampling::Rng rng(6);
    const Vector x = sampling::random_point(p, rng);
    for (auto _ : state) {
        const auto geom = flat_model::geometry_at(p, x);
        benchmark::DoNotOptimize(curvature::curvature_norm_frame(geom, correspondence::rtilde_closed(geom)));
    }
}

void BM_DirectPath(benchmark::State& state) {
    const flat_model::ModelParams p{static_cast<int>(state.range(0)), 1.0, false};
    sampling::Rng rng(7);
    const Vector x = sampling::random_point(p, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(correspondence::curvature_tensors(p, x, correspondence::SSource::Closed));
}

}  // namespace

BENCHMARK(BM_Product<kernels::serial::owedge_product>)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_Product<kernels::owedge_product>)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_Product<kernels::serial::obar_product>)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_Product<kernels::obar_product>)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(BM_Symmetrize<kernels::serial::obar>)->Arg(8)->Arg(16);
BENCHMARK(BM_Symmetrize<kernels::obar>)->Arg(8)->Arg(16);
BENCHMARK(BM_ChangeBasis<kernels::serial::change_basis>)->Arg(4)->Arg(8);
BENCHMARK(BM_ChangeBasis<kernels::change_basis>)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_CurvatureNorm)->Arg(0)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(BM_DirectPath)->Arg(0)->Arg(1)->Arg(2);

BENCHMARK_MAIN();
