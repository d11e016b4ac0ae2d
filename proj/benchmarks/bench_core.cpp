#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rotwalk/arclength.hpp"
#include "rotwalk/dynamics.hpp"
#include "rotwalk/geometry.hpp"

using namespace rotwalk;

namespace {

std::vector<ArcLengthProblem> random_problems(std::size_t n)
{
    std::mt19937_64 gen(1);
    std::normal_distribution<double> g;
    std::vector<ArcLengthProblem> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(Vec3{g(gen), g(gen), g(gen)}, Vec3{g(gen), g(gen), 0.0});
    return out;
}

void BM_ArcLength(benchmark::State& state)
{
    const auto problems = random_problems(1024);
    std::size_t i = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(arc_length(problems[i], 1.5));
        i = (i + 1) & 1023;
    }
}
BENCHMARK(BM_ArcLength);

void BM_InvertArcLength(benchmark::State& state)
{
    const auto problems = random_problems(1024);
    std::size_t i = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(invert_arc_length(problems[i], 2.0));
        i = (i + 1) & 1023;
    }
}
BENCHMARK(BM_InvertArcLength);

void BM_RotationTo(benchmark::State& state)
{
    std::mt19937_64 gen(2);
    std::normal_distribution<double> g;
    std::vector<Vec3> targets(1024);
    for (auto& t : targets)
        t = {g(gen), g(gen), g(gen)};
    std::size_t i = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(rotation_to(targets[i]));
        i = (i + 1) & 1023;
    }
}
BENCHMARK(BM_RotationTo);

void BM_NextEvent(benchmark::State& state)
{
    SimConfig config;
    config.stop.max_events = 1;
    RngState rng(3);
    ParticleState s = config.initial_state();
    for (auto _ : state)
        benchmark::DoNotOptimize(next_event(s, config, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NextEvent);

}  // namespace
BENCHMARK_MAIN();
