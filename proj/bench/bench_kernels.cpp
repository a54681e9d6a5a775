// Timing harness for the data-parallel kernels: each kernel runs through the
// serial reference path and the OpenMP path on identical inputs.  The fixed-block
// accumulation makes the two outputs bit-identical, which is verified here before
// any timing is reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "subrate/moments.hpp"
#include "subrate/parallel.hpp"
#include "subrate/qprocess.hpp"
#include "subrate/subordinators.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace subrate;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_once(F&& body) {
    const auto t0 = Clock::now();
    body();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const std::string& name, double serial, double parallel, bool identical) {
    std::printf("%-34s %9.3f s %9.3f s   x%-5.2f %s\n", name.c_str(), serial, parallel,
                serial / parallel, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run the serial path\n");
#endif
    std::printf("%-34s %11s %11s   %-6s %s\n", "kernel", "serial", "openmp", "speedup", "check");

    {
        const auto s = SubordinatorSampler::stable(0.5, 1.0, 1);
        const std::size_t n = 2000000;
        SampleBatch a, b;
        const double ts = time_once([&] { a = s.sample(2.0, n, 0, Exec::serial); });
        const double tp = time_once([&] { b = s.sample(2.0, n, 0, Exec::parallel); });
        report("stable batch sampling (n=2e6)", ts, tp, a.values == b.values);
    }
    {
        const auto s = SubordinatorSampler::gamma(1.0, 1.0, 2);
        const std::size_t n = 2000000;
        MomentEstimate a, b;
        const double ts = time_once([&] { a = neg_moment_mc(s, 0.5, 3.0, n, 0, Exec::serial); });
        const double tp = time_once([&] { b = neg_moment_mc(s, 0.5, 3.0, n, 0, Exec::parallel); });
        report("negative-moment estimate (n=2e6)", ts, tp,
               a.value == b.value && a.error == b.error);
    }
    {
        const auto s = SubordinatorSampler::stable(0.5, 1.0, 3);
        const std::size_t n = 500000;
        MomentEstimate a, b;
        const double ts = time_once(
            [&] { a = subexp_moment_mc(s, 1.0, 0.5, 100.0, n, 0, Exec::serial); });
        const double tp = time_once(
            [&] { b = subexp_moment_mc(s, 1.0, 0.5, 100.0, n, 0, Exec::parallel); });
        report("log-domain subexp estimate (n=5e5)", ts, tp, a.log_value == b.log_value);
    }
    {
        const QProcessModel m = QProcessModel::build(
            [](std::size_t i) { return i == 0 ? 1.0 : 1.0 / static_cast<double>(i); },
            [](std::size_t i) { return std::pow(static_cast<double>(i), -4.0); }, 200);
        const auto s = SubordinatorSampler::stable(0.5, 1.0, 4);
        SubordinateRow a, b;
        const double ts =
            time_once([&] { a = subordinate_row(m, s, 8.0, 0, 4000, 0, Exec::serial); });
        const double tp =
            time_once([&] { b = subordinate_row(m, s, 8.0, 0, 4000, 0, Exec::parallel); });
        report("subordinate row mixing (n=4e3)", ts, tp, a.row == b.row && a.se == b.se);
    }
    return 0;
}
