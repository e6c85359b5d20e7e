// Times the OpenMP Monte Carlo kernels against the serial reference
// implementation and verifies that both produce identical output.
// Usage: bench_measure [trial-scale]   (default 1, i.e. 2e5 base trials)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#include "tsvf/hilbert.hpp"
#include "tsvf/measure.hpp"
#include "tsvf/pointer.hpp"
#include "tsvf/scenario.hpp"
#include "tsvf/two_state.hpp"

using namespace tsvf;

namespace {

template <typename Fn>
std::pair<double, decltype(std::declval<Fn>()())> timed(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {ms, std::move(result)};
}

int g_mismatches = 0;

template <typename Fn>
void compare(const char* name, Fn&& run) {
    // run(exec) must return the same value for both execution policies
    const auto [serial_ms, serial] = timed([&] { return run(Execution::Serial); });
    const auto [parallel_ms, parallel] = timed([&] { return run(Execution::Parallel); });
    const bool same = serial == parallel;
    if (!same) ++g_mismatches;
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    std::size_t scale = 1;
    if (argc > 1) {
        const long v = std::strtol(argv[1], nullptr, 10);
        if (v < 1) {
            std::fprintf(stderr, "usage: bench_measure [trial-scale >= 1]\n");
            return 2;
        }
        scale = static_cast<std::size_t>(v);
    }
    const std::size_t base = 200000 * scale;

    const ScenarioSpec box3 = three_box();
    const TwoStateVector tsv = box3.two_state();
    const GaussianPointer pointer{10.0, 0.0};

    std::printf("trials per kernel: %zu\n", base);

    compare("strong sequence (1 step)", [&](Execution exec) {
        return run_pre_post_experiment(box3.pre, box3.post, box3.resolve_schedule(),
                                       box3.schedule_labels(), base, 42, exec);
    });

    const ScenarioSpec s = singlet();
    compare("strong sequence (2 steps)", [&](Execution exec) {
        return run_pre_post_experiment(s.pre, s.post, s.resolve_schedule(), s.schedule_labels(), base,
                                       42, exec);
    });

    const PointerMixture mix = weak_pointer_amplitudes(tsv, box3.observable("P_C"), pointer);
    compare("weak pointer sampling", [&](Execution exec) {
        return sample_pointer_many(mix, base, 42, exec).samples;
    });

    compare("ensemble pressure (N = 10)", [&](Execution exec) {
        return ensemble_pressure(tsv, box3.observable("P_C"), 10, pointer, base / 2, 42, exec, "P_C")
            .readings;
    });

    if (g_mismatches > 0) {
        std::fprintf(stderr, "%d kernel(s) diverged between serial and parallel execution\n",
                     g_mismatches);
        return 1;
    }
    return 0;
}
