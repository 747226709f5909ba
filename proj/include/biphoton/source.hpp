/// Two-photon density matrix emitted by the quantum dot.
///
/// The dot term interpolates between the entangled state and the classical
/// rectilinear mixture:
///
///   rho = (1-b) * [ z * |psi_d><psi_d| + (1-z) * (|HH><HH| + |VV><VV|)/2 ]
///         + b * I/4
///
/// with |psi_d> = (|DD> + e^{i delta} |AA>)/sqrt(2). delta is the relative
/// phase between the diagonally polarized two-photon amplitudes; at delta = 0
/// the pure term is exactly |Phi+>. Background light enters as the maximally
/// mixed (unpolarized, uncorrelated) state, which gives the bounds
/// f_max = 1 - 3b/4 and a_max = 1 - b.
#pragma once

#include "biphoton/polarization.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton {

struct SourceModel {
    double delta_rad = 0.0;  // DD/AA phase offset, radians
    double z = 1.0;          // interbasis coherence, in [0, 1]
    double b = 0.0;          // uncorrelated background fraction, in [0, 1]
    double s_ueV = 0.0;      // exciton fine-structure splitting, microeV (descriptive)

    void validate() const {
        if (!(z >= 0.0 && z <= 1.0)) {
            throw std::invalid_argument("SourceModel: z must be in [0, 1]");
        }
        if (!(b >= 0.0 && b <= 1.0)) {
            throw std::invalid_argument("SourceModel: b must be in [0, 1]");
        }
        if (s_ueV < 0.0) {
            throw std::invalid_argument("SourceModel: s_ueV must be >= 0");
        }
    }
};

inline TwoPhotonDensityMatrix emit(const SourceModel& model) {
    model.validate();

    // |psi_d> = (|DD> + e^{i delta} |AA>)/sqrt(2) in rectilinear amplitudes
    const Complex e = std::polar(1.0, model.delta_rad);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd psi;
    psi << 0.5 * (1.0 + e), 0.5 * (1.0 - e), 0.5 * (1.0 - e), 0.5 * (1.0 + e);
    psi *= r;

    Eigen::Matrix4cd rect_mixture = Eigen::Matrix4cd::Zero();
    rect_mixture(0, 0) = 0.5;
    rect_mixture(3, 3) = 0.5;

    const Eigen::Matrix4cd dot =
        model.z * (psi * psi.adjoint()).eval() + (1.0 - model.z) * rect_mixture;
    const Eigen::Matrix4cd background = 0.25 * Eigen::Matrix4cd::Identity();
    return TwoPhotonDensityMatrix((1.0 - model.b) * dot + model.b * background);
}

/// |V_XX V_X>, the pure classical reference state.
inline TwoPhotonState pure_classical() {
    Eigen::Vector4cd a = Eigen::Vector4cd::Zero();
    a(3) = Complex(1, 0);
    return TwoPhotonState(a);
}

/// Coherence surviving a fine-structure splitting S over an exciton lifetime
/// tau: z = 1/sqrt(1 + (S tau / hbar)^2). Monotone decreasing in S*tau.
inline double splitting_to_coherence(double s_ueV, double tau_ns) {
    if (s_ueV < 0.0) {
        throw std::invalid_argument("splitting_to_coherence: s_ueV must be >= 0");
    }
    if (!(tau_ns > 0.0)) {
        throw std::invalid_argument("splitting_to_coherence: tau_ns must be > 0");
    }
    constexpr double hbar_eV_s = 6.582e-16;
    const double x = (s_ueV * 1e-6) * (tau_ns * 1e-9) / hbar_eV_s;
    return 1.0 / std::sqrt(1.0 + x * x);
}

}  // namespace biphoton
