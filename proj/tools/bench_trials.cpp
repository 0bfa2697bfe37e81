// Compares run_trials_serial against the OpenMP trial loop on the same
// configuration and checks that both produce bit-identical estimates.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rlp/mc_harness.hpp"

using Clock = std::chrono::steady_clock;

namespace {

template <class Fn>
double time_ms(Fn&& fn, rlp::mc::McEstimate& out) {
    const auto t0 = Clock::now();
    out = fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    rlp::mc::TrialConfig cfg;
    cfg.alpha = 20.0;
    cfg.n = 50;
    cfg.trials = 64;
    cfg.master_seed = 0;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        const std::string val = argv[i + 1];
        if (key == "--alpha") cfg.alpha = std::stod(val);
        else if (key == "--n") cfg.n = std::stoll(val);
        else if (key == "--trials") cfg.trials = std::stoll(val);
        else if (key == "--seed") cfg.master_seed = std::stoull(val);
        else {
            std::fprintf(stderr, "usage: %s [--alpha A] [--n N] [--trials T] [--seed S]\n",
                         argv[0]);
            return 2;
        }
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("alpha=%g n=%lld m=%lld trials=%lld threads=%d\n", cfg.alpha,
                static_cast<long long>(cfg.n), static_cast<long long>(cfg.m()),
                static_cast<long long>(cfg.trials), threads);

    rlp::mc::McEstimate serial, parallel;
    const double t_serial = time_ms([&] { return rlp::mc::run_trials_serial(cfg); }, serial);
    const double t_parallel = time_ms([&] { return rlp::mc::run_trials(cfg); }, parallel);

    const bool identical = serial.mean == parallel.mean &&
                           serial.std_error == parallel.std_error &&
                           serial.values == parallel.values;
    std::printf("serial    %10.1f ms   mean=%.17g\n", t_serial, serial.mean);
    std::printf("parallel  %10.1f ms   mean=%.17g\n", t_parallel, parallel.mean);
    std::printf("speedup   %10.2fx\n", t_serial / t_parallel);
    std::printf("identical results: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
