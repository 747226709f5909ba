/// Collinear polarization-delay interferometer.
///
/// The phase delay acts per photon as diag(1, e^{i phi}) in the D/A basis:
/// A-polarized light is retarded by phi relative to D-polarized light. Applied
/// to both photons of a pair this multiplies the |AA> component by e^{2i phi},
/// so biphoton fringes run at twice the single-photon frequency.
#pragma once

#include "biphoton/polarization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

struct PhaseDelaySetting {
    double retardation_nm = 0.0;    // optical path delay between A and D photons
    double lambda_bar_nm = 885.0;   // mean single-photon wavelength

    void validate() const {
        if (!(lambda_bar_nm > 0.0)) {
            throw std::invalid_argument("PhaseDelaySetting: lambda_bar_nm must be > 0");
        }
    }

    double phi() const {
        validate();
        return 2.0 * std::numbers::pi * retardation_nm / lambda_bar_nm;
    }
};

/// Single-photon delay unitary in the rectilinear basis:
/// U = R . diag(1, e^{i phi}) . R with R the rectilinear<->diagonal rotation.
inline Eigen::Matrix2cd delay_operator(double phi_rad) {
    const Eigen::Matrix2cd r = basis_rotation(Basis::diagonal);
    Eigen::Matrix2cd d = Eigen::Matrix2cd::Identity();
    d(1, 1) = std::polar(1.0, phi_rad);
    return r.adjoint() * d * r;
}

inline TwoPhotonDensityMatrix apply_delay(const TwoPhotonDensityMatrix& rho, double phi_rad) {
    const Eigen::Matrix2cd u = delay_operator(phi_rad);
    Eigen::Matrix4cd uu;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            uu.block<2, 2>(2 * i, 2 * j) = u(i, j) * u;
        }
    }
    Eigen::Matrix4cd out = uu * rho.elems * uu.adjoint();
    // restore exact Hermitian symmetry lost to round-off
    out = 0.5 * (out + out.adjoint().eval());
    return TwoPhotonDensityMatrix(out);
}

inline TwoPhotonDensityMatrix apply_delay(const TwoPhotonDensityMatrix& rho,
                                          const PhaseDelaySetting& setting) {
    return apply_delay(rho, setting.phi());
}

struct CoincidenceProbabilities {
    double p_vv = 0.0;  // first index = XX photon polarization
    double p_vh = 0.0;
    double p_hv = 0.0;
    double p_hh = 0.0;
};

/// Projections onto the four rectilinear two-photon basis states.
inline CoincidenceProbabilities coincidence_probs(const TwoPhotonDensityMatrix& rho) {
    CoincidenceProbabilities p;
    p.p_hh = rho.elems(0, 0).real();
    p.p_hv = rho.elems(1, 1).real();
    p.p_vh = rho.elems(2, 2).real();
    p.p_vv = rho.elems(3, 3).real();
    return p;
}

enum class IntensityMode {
    full,                // (p_vv + p_hh) / (p_vv + p_vh + p_hv + p_hh)
    unpolarized_approx,  // p_vv / (p_vv + p_hv); valid for unpolarized sources
};

/// Thrown when the measured channels carry no probability (dark fringe with
/// no counts); the value is undefined there.
struct UndefinedIntensityError : std::domain_error {
    UndefinedIntensityError() : std::domain_error("normalized intensity: zero denominator") {}
};

inline double normalized_biphoton_intensity(const CoincidenceProbabilities& p,
                                            IntensityMode mode) {
    double num = 0.0;
    double den = 0.0;
    if (mode == IntensityMode::full) {
        num = p.p_vv + p.p_hh;
        den = p.p_vv + p.p_vh + p.p_hv + p.p_hh;
    } else {
        num = p.p_vv;
        den = p.p_vv + p.p_hv;
    }
    if (den <= 0.0) {
        throw UndefinedIntensityError();
    }
    return num / den;
}

/// |<V| U(phi) |V>|^2 = (1 + cos phi)/2; period 2 pi.
inline double single_photon_intensity(double phi_rad) {
    return 0.5 * (1.0 + std::cos(phi_rad));
}

/// Product of the two singles interferograms: (1 + cos phi)^2 / 4.
inline double product_biphoton_intensity(double phi_rad) {
    const double s = single_photon_intensity(phi_rad);
    return s * s;
}

}  // namespace biphoton
