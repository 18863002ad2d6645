// Serial reference vs OpenMP kernels. Run with e.g.
//   OMP_NUM_THREADS=4 ./bench_kernels --benchmark_min_time=0.2
#include <benchmark/benchmark.h>

#include <random>

#include "psmkit/experiments.hpp"
#include "psmkit/kernels.hpp"

namespace {

using namespace psmkit;

const KinematicChain& chain() {
    static const KinematicChain c = bundled_psm_chain();
    return c;
}

std::vector<JointVector> trajectory(std::size_t points) {
    const auto n = static_cast<Eigen::Index>(chain().joint_count());
    TrajectorySpec spec{JointVector::Zero(n), JointVector::Zero(n), points};
    spec.start.head<3>() << -0.6, -0.5, 0.2;
    spec.end.head<3>() << 0.6, 0.5, 0.2;
    return interpolate_trajectory(spec);
}

RasterImage noise_image(int w, int h) {
    RasterImage img(w, h);
    std::mt19937 rng(7);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

template <auto Kernel>
void BM_TipPositions(benchmark::State& state) {
    const auto traj = trajectory(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(chain(), traj));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_RealignmentSpread(benchmark::State& state) {
    const auto traj = trajectory(static_cast<std::size_t>(state.range(0)));
    OffsetErrorVector delta = OffsetErrorVector::Zero(3);
    delta[1] = 0.05;
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(chain(), delta, traj, 3));
}

template <auto Kernel>
void BM_Deinterlace(benchmark::State& state) {
    const auto img = noise_image(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(img, Field::Even));
    state.SetBytesProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_TipPositions<kernels::serial::tip_positions>)->Arg(1000)->Arg(100000);
BENCHMARK(BM_TipPositions<kernels::omp::tip_positions>)->Arg(1000)->Arg(100000);
BENCHMARK(BM_RealignmentSpread<kernels::serial::realignment_spread>)->Arg(25)->Arg(1000);
BENCHMARK(BM_RealignmentSpread<kernels::omp::realignment_spread>)->Arg(25)->Arg(1000);
BENCHMARK(BM_Deinterlace<kernels::serial::deinterlace>)->Arg(512)->Arg(2048);
BENCHMARK(BM_Deinterlace<kernels::omp::deinterlace>)->Arg(512)->Arg(2048);

BENCHMARK_MAIN();
