/// Canonical measurement scenarios and the JSON faces of a run.
///
/// A Scenario bundles a source model with a sweep configuration under one of
/// four named setups. The JSON helpers here are the single place where run
/// manifests and analysis reports are assembled; the CLI only routes them.
#pragma once

#include "biphoton/counting.hpp"
#include "biphoton/fitting.hpp"
#include "biphoton/interferometer.hpp"
#include "biphoton/source.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace biphoton {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ScenarioKind { entangled, mixed_classical, pure_classical_product, single_photon };

inline const char* scenario_kind_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::entangled: return "entangled";
        case ScenarioKind::mixed_classical: return "mixed_classical";
        case ScenarioKind::pure_classical_product: return "pure_classical_product";
        case ScenarioKind::single_photon: return "single_photon";
    }
    throw std::invalid_argument("scenario_kind_name: unknown kind");
}

inline ScenarioKind parse_scenario_kind(const std::string& name) {
    if (name == "entangled") return ScenarioKind::entangled;
    if (name == "mixed_classical") return ScenarioKind::mixed_classical;
    if (name == "pure_classical_product") return ScenarioKind::pure_classical_product;
    if (name == "single_photon") return ScenarioKind::single_photon;
    throw std::invalid_argument("unknown scenario: " + name);
}

/// A named setup with its source parameters and sweep grid. The kind fixes
/// the coherence defaults: entangled means z = 1, mixed_classical z = 0; the
/// two classical-reference kinds ignore the source model entirely.
struct Scenario {
    ScenarioKind kind = ScenarioKind::entangled;
    SourceModel source;
    SweepConfig sweep;

    static Scenario make(ScenarioKind kind) {
        Scenario s;
        s.kind = kind;
        s.source.z = (kind == ScenarioKind::mixed_classical) ? 0.0 : 1.0;
        s.sweep.n_sweeps = 3;
        return s;
    }

    void validate() const {
        source.validate();
        sweep.validate();
    }
};

inline SweepResult run_scenario(const Scenario& scenario) {
    scenario.validate();
    switch (scenario.kind) {
        case ScenarioKind::entangled:
        case ScenarioKind::mixed_classical:
            return run_sweep(scenario.source, scenario.sweep);
        case ScenarioKind::pure_classical_product:
            return run_product_sweep(scenario.sweep);
        case ScenarioKind::single_photon:
            return run_single_photon_sweep(scenario.sweep);
    }
    throw std::invalid_argument("run_scenario: unknown kind");
}

/// Noiseless underlying curve of a scenario at biphoton phase phi.
inline double scenario_curve(const Scenario& scenario, double phi) {
    switch (scenario.kind) {
        case ScenarioKind::entangled:
        case ScenarioKind::mixed_classical: {
            const TwoPhotonDensityMatrix rho = apply_delay(emit(scenario.source), phi);
            return normalized_biphoton_intensity(coincidence_probs(rho), IntensityMode::full);
        }
        case ScenarioKind::pure_classical_product:
            return product_biphoton_intensity(phi);
        case ScenarioKind::single_photon:
            return single_photon_intensity(phi);
    }
    throw std::invalid_argument("scenario_curve: unknown kind");
}

inline nlohmann::json run_manifest(const Scenario& scenario) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["rng"] = kRngId;
    j["scenario"] = scenario_kind_name(scenario.kind);
    j["source"] = {
        {"delta_rad", scenario.source.delta_rad},
        {"z", scenario.source.z},
        {"b", scenario.source.b},
        {"s_ueV", scenario.source.s_ueV},
    };
    j["sweep"] = {
        {"d_start_nm", scenario.sweep.d_start_nm},
        {"d_end_nm", scenario.sweep.d_end_nm},
        {"n_points", scenario.sweep.n_points},
        {"pairs_per_point", scenario.sweep.pairs_per_point},
        {"jitter_lambda", scenario.sweep.jitter_lambda},
        {"n_sweeps", scenario.sweep.n_sweeps},
        {"seed", scenario.sweep.seed},
        {"lambda_bar_nm", scenario.sweep.lambda_bar_nm},
    };
    return j;
}

namespace report_detail {

inline nlohmann::json finite_or_null(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return nullptr;
}

inline const char* status_name(FitStatus status) {
    switch (status) {
        case FitStatus::ok: return "ok";
        case FitStatus::degenerate: return "degenerate";
        case FitStatus::no_converge: return "no_converge";
    }
    return "unknown";
}

}  // namespace report_detail

/// JSON analysis report for one fitted sweep. Every numeric field is
/// computed by a library operation; non-finite values serialize as null.
/// `mixed_reference_amplitude`, when supplied, adds the inferred background
/// fraction and the entanglement bounds that follow from it.
inline nlohmann::json analysis_report(const FitResult& fit, double lambda_bar_nm,
                                      const std::optional<double>& mixed_reference_amplitude =
                                          std::nullopt) {
    using report_detail::finite_or_null;
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["model"] = fit.model.kind == FitModelKind::sinusoid ? "sinusoid" : "classical_pure";
    j["status"] = report_detail::status_name(fit.status);
    j["n_used"] = fit.n_used;
    j["iterations"] = fit.iterations;
    j["lambda_bar_nm"] = lambda_bar_nm;

    nlohmann::json params;
    params["period_nm"] = finite_or_null(fit.model.period_nm);
    params["period_sigma_nm"] = finite_or_null(fit.sigma_period);
    params["phase_rad"] = finite_or_null(fit.model.phase_rad);
    params["phase_sigma_rad"] = finite_or_null(fit.sigma_phase);
    if (fit.model.kind == FitModelKind::sinusoid) {
        params["offset"] = finite_or_null(fit.model.offset);
        params["offset_sigma"] = finite_or_null(fit.sigma_offset);
        params["amplitude"] = finite_or_null(fit.model.amplitude);
        params["amplitude_sigma"] = finite_or_null(fit.sigma_amplitude);
    } else {
        params["scale"] = finite_or_null(fit.model.scale);
        params["scale_sigma"] = finite_or_null(fit.sigma_scale);
    }
    j["fit"] = params;
    j["r_squared"] = finite_or_null(fit.r_squared);

    if (fit.model.kind == FitModelKind::sinusoid && fit.status == FitStatus::ok) {
        j["de_broglie_nm"] = de_broglie_wavelength(fit);
        j["amplitude"] = fringe_amplitude(fit);
        j["phase_offset_lambda"] = phase_offset_lambda(fit, lambda_bar_nm);
        j["phase_offset_lambda_sigma"] = finite_or_null(phase_offset_lambda_sigma(fit, lambda_bar_nm));
        const double biphoton_period = lambda_bar_nm / 2.0;
        if (std::abs(fit.model.period_nm - biphoton_period) <= 0.1 * biphoton_period) {
            j["classicality"] = classicality_witness(fit, lambda_bar_nm) ==
                                        ClassicalityVerdict::nonclassical
                                    ? "nonclassical"
                                    : "classical_compatible";
        } else {
            j["classicality"] = "not_applicable";
        }
    } else {
        j["classicality"] = "not_applicable";
    }

    if (mixed_reference_amplitude) {
        const double b = background_from_mixed_amplitude(*mixed_reference_amplitude);
        const EntanglementBounds bounds = entanglement_bounds(b);
        j["mixed_reference_amplitude"] = *mixed_reference_amplitude;
        j["background_fraction"] = b;
        j["entanglement_bounds"] = {{"f_max", bounds.f_max}, {"a_max", bounds.a_max}};
    }
    return j;
}

}  // namespace biphoton
