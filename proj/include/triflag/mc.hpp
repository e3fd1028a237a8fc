#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "triflag/mat3.hpp"

namespace triflag {

/// Monte-Carlo estimate with provenance; reproducible bit-for-bit for a
/// fixed (seed, samples, workers).
struct McEstimate {
    std::complex<double> value{0.0, 0.0};
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double real() const { return value.real(); }
};

namespace mcdetail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mcdetail

/// Deterministic derived seed for a sub-task (rows of a matrix run, etc).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (salt + 1);
    return mcdetail::splitmix64(s);
}

/// Deterministic substream: worker i of a run seeded with s draws from
/// mt19937_64 seeded by the i-th splitmix64 output of s.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t v = 0;
    for (std::uint64_t i = 0; i <= index; ++i) v = mcdetail::splitmix64(s);
    return std::mt19937_64(v);
}

/// Uniform in (0,1); fixed bit-level construction, independent of the
/// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform in (-1/2, 1/2).
inline double uniform_sym(std::mt19937_64& rng) { return uniform01(rng) - 0.5; }

/// Standard normal via Box-Muller (deterministic across platforms).
inline double normal(std::mt19937_64& rng) {
    const double u1 = uniform01(rng), u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// --- proposal densities ----------------------------------------------------

/// Laplace with scale b truncated to |x - mu| <= cap (exact density).
struct TruncLaplace {
    double mu = 0, b = 1, cap = 240;

    double sample(std::mt19937_64& rng) const {
        const double m = 1.0 - std::exp(-cap / b);
        const double u = uniform_sym(rng) * m;
        const double mag = -b * std::log1p(-2.0 * std::fabs(u));
        return mu + (u < 0 ? -mag : mag);
    }
    double log_pdf(double x) const {
        const double d = std::fabs(x - mu);
        if (d > cap) return -std::numeric_limits<double>::infinity();
        const double m = 1.0 - std::exp(-cap / b);
        return -d / b - std::log(2.0 * b * m);
    }
};

/// Even mixture of two truncated Laplace widths (wide part guarantees
/// domination of the heavy-tailed envelope, narrow part tracks the bulk).
struct LaplaceMix {
    double mu = 0, b_wide = 6.0, b_narrow = 2.0, cap = 240;

    double sample(std::mt19937_64& rng) const {
        const double b = (rng() & 1) ? b_wide : b_narrow;
        return TruncLaplace{mu, b, cap}.sample(rng);
    }
    double pdf(double x) const {
        return 0.5 * std::exp(TruncLaplace{mu, b_wide, cap}.log_pdf(x)) +
               0.5 * std::exp(TruncLaplace{mu, b_narrow, cap}.log_pdf(x));
    }
};

/// Heavy-tailed symmetric density via x = sinh(v), v ~ truncated Laplace:
/// tails ~ |x|^{-(1+1/b)} with exponentially bounded v, so no overflow.
struct SinhLaplace {
    double b = 2.0, vcap = 120;

    double sample(std::mt19937_64& rng) const {
        return std::sinh(TruncLaplace{0.0, b, vcap}.sample(rng));
    }
    double log_pdf(double x) const {
        const double v = std::asinh(x);
        if (std::fabs(v) > vcap) return -std::numeric_limits<double>::infinity();
        // log cosh without overflow
        const double lc = std::fabs(v) + std::log1p(std::exp(-2.0 * std::fabs(v))) - M_LN2;
        return TruncLaplace{0.0, b, vcap}.log_pdf(v) - lc;
    }
    double pdf(double x) const { return std::exp(log_pdf(x)); }
};

/// Haar-uniform SO(3) via a unit quaternion built from four normals.
inline MatD haar_so3(std::mt19937_64& rng) {
    double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
    const double n = std::sqrt(a * a + b * b + c * c + d * d);
    a /= n;
    b /= n;
    c /= n;
    d /= n;
    MatD k;
    k(0, 0) = a * a + b * b - c * c - d * d;
    k(0, 1) = 2 * (b * c - a * d);
    k(0, 2) = 2 * (b * d + a * c);
    k(1, 0) = 2 * (b * c + a * d);
    k(1, 1) = a * a - b * b + c * c - d * d;
    k(1, 2) = 2 * (c * d - a * b);
    k(2, 0) = 2 * (b * d - a * c);
    k(2, 1) = 2 * (c * d + a * b);
    k(2, 2) = a * a - b * b - c * c + d * d;
    return k;
}

// --- generic multi-component estimator --------------------------------------

/// Accumulates per-component sums in a fixed order; merged across workers by
/// worker index so the result depends only on (seed, samples, workers).
template <class SampleFn>
std::vector<McEstimate> estimate_many(std::uint64_t seed, std::uint64_t samples, int workers,
                                      int components, SampleFn&& fn) {
    if (workers < 1) workers = 1;
    struct Acc {
        std::vector<std::complex<double>> sum;
        std::vector<double> sum_sq;  // |value|^2 accumulators
    };
    std::vector<Acc> accs(workers);
    std::vector<std::uint64_t> counts(workers, samples / workers);
    for (std::uint64_t i = 0; i < samples % workers; ++i) ++counts[i];

    auto run_worker = [&](int widx) {
        auto rng = substream(seed, static_cast<std::uint64_t>(widx));
        Acc& acc = accs[widx];
        acc.sum.assign(components, {0.0, 0.0});
        acc.sum_sq.assign(components, 0.0);
        std::vector<std::complex<double>> vals(components);
        for (std::uint64_t i = 0; i < counts[widx]; ++i) {
            fn(rng, vals);
            for (int c = 0; c < components; ++c) {
                const auto v = vals[c];
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw std::runtime_error("monte carlo: non-finite sample");
                acc.sum[c] += v;
                acc.sum_sq[c] += std::norm(v);
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(workers);
        for (int wdx = 0; wdx < workers; ++wdx)
            pool.emplace_back([&, wdx] {
                try {
                    run_worker(wdx);
                } catch (...) {
                    errs[wdx] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    std::vector<McEstimate> out(components);
    for (int c = 0; c < components; ++c) {
        std::complex<double> sum{0.0, 0.0};
        double sum_sq = 0;
        for (const auto& acc : accs) {  // fixed reduction order
            sum += acc.sum[c];
            sum_sq += acc.sum_sq[c];
        }
        const double n = static_cast<double>(samples);
        const auto mean = sum / n;
        const double var = std::max(0.0, sum_sq / n - std::norm(mean));
        out[c] = {mean, std::sqrt(var / n), samples, seed};
    }
    return out;
}

}  // namespace triflag
