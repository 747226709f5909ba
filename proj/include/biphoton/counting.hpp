/// Monte Carlo coincidence-count sweeps with shot noise, phase-setting
/// jitter, and repeated-sweep accumulation.
///
/// Counts are drawn as independent Poisson variates per detection channel
/// (the hardware records two channels, the XX-arm polarizer fixed at V).
/// Jitter perturbs the retardation actually applied; rows record the nominal
/// grid setting. A grid point whose channels collect zero counts in total is
/// recorded with missing intensity, never interpolated.
#pragma once

#include "biphoton/counting_fwd.hpp"
#include "biphoton/interferometer.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/source.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace biphoton {

inline void SweepConfig::validate() const {
    if (n_points < 2) {
        throw std::invalid_argument("SweepConfig: n_points must be >= 2");
    }
    if (!(d_end_nm > d_start_nm)) {
        throw std::invalid_argument("SweepConfig: d_end_nm must exceed d_start_nm");
    }
    if (!(pairs_per_point > 0.0)) {
        throw std::invalid_argument("SweepConfig: pairs_per_point must be > 0");
    }
    if (jitter_lambda < 0.0) {
        throw std::invalid_argument("SweepConfig: jitter_lambda must be >= 0");
    }
    if (n_sweeps < 1) {
        throw std::invalid_argument("SweepConfig: n_sweeps must be >= 1");
    }
    if (!(lambda_bar_nm > 0.0)) {
        throw std::invalid_argument("SweepConfig: lambda_bar_nm must be > 0");
    }
}

inline double SweepConfig::grid_point(int index) const {
    return d_start_nm + (d_end_nm - d_start_nm) * index / (n_points - 1);
}

namespace detail {

inline double jittered_retardation(const SweepConfig& cfg, int sweep, int point, double nominal) {
    if (cfg.jitter_lambda == 0.0) {
        return nominal;
    }
    CountingRng rng(substream_key(cfg.seed, sweep, point, StreamTag::jitter));
    return rng.normal(nominal, cfg.jitter_lambda * cfg.lambda_bar_nm);
}

inline std::uint64_t draw_counts(const SweepConfig& cfg, int sweep, int point, StreamTag tag,
                                 double mean) {
    CountingRng rng(substream_key(cfg.seed, sweep, point, tag));
    return rng.poisson(mean);
}

}  // namespace detail

/// Biphoton interferogram: channels (V_XX, V_X) and (V_XX, H_X).
inline SweepResult run_sweep(const SourceModel& model, const SweepConfig& cfg) {
    model.validate();
    cfg.validate();

    const TwoPhotonDensityMatrix emitted = emit(model);
    SweepResult result;
    result.rows.reserve(cfg.n_points);
    for (int i = 0; i < cfg.n_points; ++i) {
        SweepRow row;
        row.retardation_nm = cfg.grid_point(i);
        row.phi_rad = PhaseDelaySetting{row.retardation_nm, cfg.lambda_bar_nm}.phi();
        for (int s = 0; s < cfg.n_sweeps; ++s) {
            const double actual = detail::jittered_retardation(cfg, s, i, row.retardation_nm);
            const PhaseDelaySetting setting{actual, cfg.lambda_bar_nm};
            const CoincidenceProbabilities p = coincidence_probs(apply_delay(emitted, setting));
            row.counts_vv += detail::draw_counts(cfg, s, i, StreamTag::channel_vv,
                                                 cfg.pairs_per_point * p.p_vv);
            row.counts_vh += detail::draw_counts(cfg, s, i, StreamTag::channel_vh,
                                                 cfg.pairs_per_point * p.p_vh);
        }
        const std::uint64_t total = row.counts_vv + row.counts_vh;
        if (total > 0) {
            const double intensity = static_cast<double>(row.counts_vv) / total;
            row.intensity_norm = intensity;
            row.intensity_sigma = std::sqrt(intensity * (1.0 - intensity) / total);
        }
        result.rows.push_back(row);
    }
    return result;
}

namespace detail {

/// Poisson singles counts for one detector arm, summed over sweeps.
inline std::vector<std::uint64_t> singles_counts(const SweepConfig& cfg, StreamTag tag) {
    std::vector<std::uint64_t> counts(cfg.n_points, 0);
    for (int i = 0; i < cfg.n_points; ++i) {
        const double nominal = cfg.grid_point(i);
        for (int s = 0; s < cfg.n_sweeps; ++s) {
            const double actual = jittered_retardation(cfg, s, i, nominal);
            const double phi = PhaseDelaySetting{actual, cfg.lambda_bar_nm}.phi();
            counts[i] += draw_counts(cfg, s, i, tag, cfg.pairs_per_point * single_photon_intensity(phi));
        }
    }
    return counts;
}

}  // namespace detail

/// Singles interferogram for |V_X>, normalized to the sweep maximum.
/// Counts land in counts_vv; counts_vh stays 0.
inline SweepResult run_single_photon_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::vector<std::uint64_t> counts = detail::singles_counts(cfg, StreamTag::singles);
    std::uint64_t max_count = 0;
    for (std::uint64_t c : counts) {
        max_count = std::max(max_count, c);
    }
    if (max_count == 0) {
        throw std::runtime_error("run_single_photon_sweep: all counts zero, cannot normalize");
    }
    SweepResult result;
    result.rows.reserve(cfg.n_points);
    for (int i = 0; i < cfg.n_points; ++i) {
        SweepRow row;
        row.retardation_nm = cfg.grid_point(i);
        row.phi_rad = PhaseDelaySetting{row.retardation_nm, cfg.lambda_bar_nm}.phi();
        row.counts_vv = counts[i];
        row.intensity_norm = static_cast<double>(counts[i]) / max_count;
        row.intensity_sigma = std::sqrt(static_cast<double>(counts[i])) / max_count;
        result.rows.push_back(row);
    }
    return result;
}

/// Product-of-singles interferogram for |V_XX V_X>: the XX and X arms are
/// measured independently, each normalized to its own maximum, and the
/// normalized intensities multiplied. XX counts land in counts_vv, X counts
/// in counts_vh. The sigma column propagates Poisson error through the
/// product, var(n1 n2) ~ n1 n2 (n1 + n2), with counts floored at 1.
inline SweepResult run_product_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::vector<std::uint64_t> xx = detail::singles_counts(cfg, StreamTag::singles_xx);
    const std::vector<std::uint64_t> x = detail::singles_counts(cfg, StreamTag::singles_x);
    std::uint64_t max_xx = 0;
    std::uint64_t max_x = 0;
    for (int i = 0; i < cfg.n_points; ++i) {
        max_xx = std::max(max_xx, xx[i]);
        max_x = std::max(max_x, x[i]);
    }
    if (max_xx == 0 || max_x == 0) {
        throw std::runtime_error("run_product_sweep: an arm has all-zero counts, cannot normalize");
    }
    SweepResult result;
    result.rows.reserve(cfg.n_points);
    const double scale = static_cast<double>(max_xx) * static_cast<double>(max_x);
    for (int i = 0; i < cfg.n_points; ++i) {
        SweepRow row;
        row.retardation_nm = cfg.grid_point(i);
        row.phi_rad = PhaseDelaySetting{row.retardation_nm, cfg.lambda_bar_nm}.phi();
        row.counts_vv = xx[i];
        row.counts_vh = x[i];
        const double n1 = static_cast<double>(std::max<std::uint64_t>(xx[i], 1));
        const double n2 = static_cast<double>(std::max<std::uint64_t>(x[i], 1));
        row.intensity_norm = static_cast<double>(xx[i]) * static_cast<double>(x[i]) / scale;
        row.intensity_sigma = std::sqrt(n1 * n2 * (n1 + n2)) / scale;
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace biphoton
