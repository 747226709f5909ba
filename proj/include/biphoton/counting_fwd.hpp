/// Sweep configuration and result containers.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace biphoton {

struct SweepConfig {
    double d_start_nm = 0.0;
    double d_end_nm = 1350.0;
    int n_points = 80;
    double pairs_per_point = 1e4;  // expected detected pair count per point per sweep
    double jitter_lambda = 0.03;   // phase-setting error, fraction of lambda_bar
    int n_sweeps = 1;              // repeat count; counts accumulate across sweeps
    std::uint64_t seed = 1;
    double lambda_bar_nm = 885.0;

    void validate() const;
    double grid_point(int index) const;
};

struct SweepRow {
    double retardation_nm = 0.0;
    double phi_rad = 0.0;
    std::uint64_t counts_vv = 0;
    std::uint64_t counts_vh = 0;
    std::optional<double> intensity_norm;   // missing when no counts were collected
    std::optional<double> intensity_sigma;  // binomial standard error
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by retardation_nm, strictly increasing
};

}  // namespace biphoton
