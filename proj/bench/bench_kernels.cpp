// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>

#include "coarray/estimation.hpp"
#include "coarray/experiment.hpp"

using namespace coarray;

namespace {

CMatrix snapshots(int p, int l) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    CMatrix y(p, l);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = Complex(n(rng), n(rng));
    return y;
}

void BM_SampleCovarianceSerial(benchmark::State& st) {
    const CMatrix y = snapshots(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(sample_covariance_serial(y));
}

void BM_SampleCovarianceOmp(benchmark::State& st) {
    const CMatrix y = snapshots(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(sample_covariance(y));
}

struct SpectralFixture {
    CoarrayCovariance exact;
    CoarrayCovariance est;
    std::vector<double> grid;

    explicit SpectralFixture(int p) {
        const auto a = balanced_nested(p);
        const auto c = coarray_structure(a);
        const SourceScene scene({0.1, 0.3}, {1, 1}, 1.0);
        exact = exact_coarray_covariance(c, scene);
        est = redundancy_average(sample_covariance(sample_snapshots(a, scene, 100, 3)), c, a);
        grid = sup_grid(c.m_ca, 16);
    }
};

void BM_SpectralSerial(benchmark::State& st) {
    const SpectralFixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(spectral_magnitudes_serial(f.exact, f.est, f.grid));
}

void BM_SpectralOmp(benchmark::State& st) {
    const SpectralFixture f(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(spectral_magnitudes(f.exact, f.est, f.grid));
}

ExperimentConfig trial_config() {
    ExperimentConfig cfg;
    cfg.arms = {Arm::parse("ula:coarray"), Arm::parse("nested:coarray")};
    cfg.sensors = {12};
    cfg.snapshots = {50};
    cfg.snr_db = {0};
    cfg.delta = {DeltaSpec{2, 1}};
    cfg.dynamic_range = {1};
    cfg.trials = 40;
    return cfg;
}

void BM_TrialsSerial(benchmark::State& st) {
    const auto cfg = trial_config();
    for (auto _ : st) benchmark::DoNotOptimize(run_experiment_serial(cfg));
}

void BM_TrialsOmp(benchmark::State& st) {
    const auto cfg = trial_config();
    for (auto _ : st) benchmark::DoNotOptimize(run_experiment(cfg));
}

}  // namespace

BENCHMARK(BM_SampleCovarianceSerial)->Args({20, 100})->Args({20, 2000})->Args({64, 1000});
BENCHMARK(BM_SampleCovarianceOmp)->Args({20, 100})->Args({20, 2000})->Args({64, 1000});
BENCHMARK(BM_SpectralSerial)->Arg(10)->Arg(20);
BENCHMARK(BM_SpectralOmp)->Arg(10)->Arg(20);
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsOmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
