// Shared state generators and sweep builders for the test suite.
#pragma once

#include "biphoton/polarization.hpp"
#include "biphoton/counting_fwd.hpp"

#include <random>
#include <vector>

namespace test_helpers {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817);
    return gen;
}

inline biphoton::TwoPhotonState random_pure_state(std::mt19937& gen) {
    std::normal_distribution<double> gauss;
    Eigen::Vector4cd a;
    for (int i = 0; i < 4; ++i) {
        a(i) = biphoton::Complex(gauss(gen), gauss(gen));
    }
    a /= a.norm();
    return biphoton::TwoPhotonState(a);
}

inline biphoton::TwoPhotonDensityMatrix random_density(std::mt19937& gen, int n_components = 3) {
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<std::pair<double, biphoton::TwoPhotonDensityMatrix>> parts;
    double total = 0.0;
    std::vector<double> weights;
    for (int i = 0; i < n_components; ++i) {
        weights.push_back(unif(gen));
        total += weights.back();
    }
    for (int i = 0; i < n_components; ++i) {
        parts.emplace_back(weights[i] / total,
                           biphoton::density_from_pure(random_pure_state(gen)));
    }
    return biphoton::mix(parts);
}

// Sweep with the given curve sampled noiselessly; constant sigma on each row.
template <typename Curve>
inline biphoton::SweepResult sampled_sweep(Curve&& curve, double d_start, double d_end,
                                           int n_points, double sigma = 0.01) {
    biphoton::SweepResult sweep;
    for (int i = 0; i < n_points; ++i) {
        biphoton::SweepRow row;
        row.retardation_nm = d_start + (d_end - d_start) * i / (n_points - 1);
        row.intensity_norm = curve(row.retardation_nm);
        row.intensity_sigma = sigma;
        sweep.rows.push_back(row);
    }
    return sweep;
}

}  // namespace test_helpers
