/// Seedable, portable random number generation for the counting simulation.
///
/// Draws come from per-(seed, sweep, point, channel) substreams so sweep
/// evaluation is schedule-independent: each substream seeds an mt19937_64
/// engine with a splitmix64-mixed key. Uniforms use the top 53 bits of the
/// engine output; normals use Box-Muller; Poisson counts use Knuth's product
/// method below mean 10 and Hormann's PTRD transformed rejection above.
/// Identified in run manifests as kRngId.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string_view>

namespace biphoton {

inline constexpr std::string_view kRngId =
    "mt19937_64/splitmix64-substreams/box-muller/poisson-knuth-ptrd";

/// splitmix64 finalizer (Vigna); full-avalanche 64-bit mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t x = (state += 0x9e3779b97f4a7c15ULL);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class StreamTag : std::uint64_t {
    jitter = 1,
    channel_vv = 2,
    channel_vh = 3,
    singles = 4,
    singles_xx = 5,
    singles_x = 6,
};

/// Key for the substream that owns the draws of one (sweep, point, tag) cell.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t sweep_index,
                                   std::uint64_t point_index, StreamTag tag) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64_next(s);
    s = k ^ sweep_index;
    k = splitmix64_next(s);
    s = k ^ point_index;
    k = splitmix64_next(s);
    s = k ^ static_cast<std::uint64_t>(tag);
    return splitmix64_next(s);
}

class CountingRng {
  public:
    explicit CountingRng(std::uint64_t key) : engine_(key) {}

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1); never returns an endpoint.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Box-Muller transform; consumes exactly two uniforms per draw.
    double normal(double mean, double sigma) {
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean)) {
            throw std::invalid_argument("poisson: mean must be finite and >= 0");
        }
        if (mean == 0.0) {
            return 0;
        }
        return mean < 10.0 ? poisson_knuth(mean) : poisson_ptrd(mean);
    }

  private:
    std::uint64_t poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double product = uniform_open();
        while (product > limit) {
            ++k;
            product *= uniform_open();
        }
        return k;
    }

    // Hormann's PTRD: transformed rejection with squeeze, valid for mean >= 10.
    std::uint64_t poisson_ptrd(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        while (true) {
            const double u = uniform() - 0.5;
            const double v = uniform_open();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) {
                return static_cast<std::uint64_t>(kf);
            }
            if (kf < 0.0 || (us < 0.013 && v > us)) {
                continue;
            }
            if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
                kf * loglam - mean - std::lgamma(kf + 1.0)) {
                return static_cast<std::uint64_t>(kf);
            }
        }
    }

    std::mt19937_64 engine_;
};

}  // namespace biphoton
