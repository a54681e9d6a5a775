#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subrate {

// Execution policy for the data-parallel kernels.  Serial and parallel paths share
// the same fixed-block accumulation order, so results are bit-identical; the serial
// path doubles as the reference implementation in tests and benchmarks.
enum class Exec { serial, parallel };

inline constexpr std::size_t kScalarBlock = 4096;
inline constexpr std::size_t kRowBlock = 128;

template <class F>
void parallel_for(Exec ex, std::size_t n, F&& body) {
    if (ex == Exec::parallel) {
#ifdef _OPENMP
        // exceptions must not unwind across the OpenMP region; capture and rethrow
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 256) shared(err)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(subrate_parallel_for_err)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) body(i);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

namespace detail {

template <class F>
void block_partials(Exec ex, std::size_t n, std::size_t block, F&& per_block) {
    const std::size_t nblocks = (n + block - 1) / block;
    if (ex == Exec::parallel) {
#ifdef _OPENMP
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) shared(err)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            try {
                const std::size_t lo = static_cast<std::size_t>(b) * block;
                per_block(static_cast<std::size_t>(b), lo, std::min(lo + block, n));
            } catch (...) {
#pragma omp critical(subrate_block_partials_err)
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
#endif
    }
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * block;
        per_block(b, lo, std::min(lo + block, n));
    }
}

}  // namespace detail

// Mean and standard error of term(0..n-1), accumulated in fixed blocks.
template <class F>
MeanSe blocked_mean_se(Exec ex, std::size_t n, F&& term) {
    const std::size_t nblocks = (n + kScalarBlock - 1) / kScalarBlock;
    std::vector<double> s(nblocks, 0.0), s2(nblocks, 0.0);
    detail::block_partials(ex, n, kScalarBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double acc = 0.0, acc2 = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            acc += v;
            acc2 += v * v;
        }
        s[b] = acc;
        s2[b] = acc2;
    });
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        sum += s[b];
        sumsq += s2[b];
    }
    MeanSe out;
    out.n = n;
    out.mean = sum / static_cast<double>(n);
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - sum * out.mean) / static_cast<double>(n - 1));
        out.se = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

struct LogMeanSe {
    double log_mean = 0.0;  // log of the empirical mean of exp(-x_i)
    double log_se = 0.0;    // log of its standard error; -inf when all terms equal
    std::size_t n = 0;
};

// Mean of exp(-x_i) in log domain (log-sum-exp over fixed blocks); x = exponent(i) >= 0
// may be far beyond 745, where the linear-domain mean underflows.
template <class F>
LogMeanSe blocked_logsumexp_mean(Exec ex, std::size_t n, F&& exponent) {
    const std::size_t nblocks = (n + kScalarBlock - 1) / kScalarBlock;
    std::vector<double> m(nblocks), s(nblocks), s2(nblocks);
    detail::block_partials(ex, n, kScalarBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        double mb = -exponent(lo);
        std::vector<double> xs(hi - lo);
        xs[0] = -mb;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            xs[i - lo] = exponent(i);
            mb = std::max(mb, -xs[i - lo]);
        }
        double acc = 0.0, acc2 = 0.0;
        for (double x : xs) {
            acc += std::exp(-x - mb);
            acc2 += std::exp(2.0 * (-x - mb));
        }
        m[b] = mb;
        s[b] = acc;
        s2[b] = acc2;
    });
    double mg = m[0];
    for (std::size_t b = 1; b < nblocks; ++b) mg = std::max(mg, m[b]);
    double tot = 0.0, tot2 = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        tot += std::exp(m[b] - mg) * s[b];
        tot2 += std::exp(2.0 * (m[b] - mg)) * s2[b];
    }
    LogMeanSe out;
    out.n = n;
    const double logn = std::log(static_cast<double>(n));
    out.log_mean = mg + std::log(tot) - logn;
    const double log_m2 = 2.0 * mg + std::log(tot2) - logn;
    const double gap = log_m2 - 2.0 * out.log_mean;  // log(m2 / mean^2) >= 0
    if (n > 1 && gap > 1e-15) {
        const double log_var =
            log_m2 + std::log1p(-std::exp(-gap)) + std::log(n / (n - 1.0));
        out.log_se = 0.5 * (log_var - logn);
    } else {
        out.log_se = -std::numeric_limits<double>::infinity();
    }
    return out;
}

// Per-entry sums and sums of squares of n rows of length dim.
// fill(i, row) must write row[0..dim-1] for draw i.
template <class F>
void blocked_row_moments(Exec ex, std::size_t n, std::size_t dim, F&& fill,
                         std::vector<double>& sum, std::vector<double>& sumsq) {
    const std::size_t nblocks = (n + kRowBlock - 1) / kRowBlock;
    std::vector<double> ps(nblocks * dim, 0.0), ps2(nblocks * dim, 0.0);
    detail::block_partials(ex, n, kRowBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        std::vector<double> row(dim);
        double* acc = &ps[b * dim];
        double* acc2 = &ps2[b * dim];
        for (std::size_t i = lo; i < hi; ++i) {
            fill(i, row.data());
            for (std::size_t j = 0; j < dim; ++j) {
                acc[j] += row[j];
                acc2[j] += row[j] * row[j];
            }
        }
    });
    sum.assign(dim, 0.0);
    sumsq.assign(dim, 0.0);
    for (std::size_t b = 0; b < nblocks; ++b)
        for (std::size_t j = 0; j < dim; ++j) {
            sum[j] += ps[b * dim + j];
            sumsq[j] += ps2[b * dim + j];
        }
}

}  // namespace subrate
