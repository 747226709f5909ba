/// Complex linear algebra for one- and two-photon polarization states and
/// density matrices.
///
/// Basis conventions, fixed throughout the library:
///   - rectilinear single-photon basis order: (H, V)
///   - diagonal basis: D = (H+V)/sqrt(2), A = (H-V)/sqrt(2)
///   - two-photon basis order: (HH, HV, VH, VV), biexciton (XX) photon first
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace biphoton {

using Complex = std::complex<double>;

// Tolerances for algebraic identities and eigenvalue positivity.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

enum class Basis { rectilinear, diagonal };

/// Unitary mapping rectilinear amplitudes to the requested basis.
/// For the diagonal basis this is ((1,1),(1,-1))/sqrt(2): self-adjoint and
/// involutive, so the same matrix maps diagonal amplitudes back.
inline Eigen::Matrix2cd basis_rotation(Basis target) {
    Eigen::Matrix2cd u;
    if (target == Basis::rectilinear) {
        u.setIdentity();
    } else {
        const double r = 1.0 / std::sqrt(2.0);
        u << r, r, r, -r;
    }
    return u;
}

struct SinglePhotonState {
    Eigen::Vector2cd amps;  // (H, V)

    explicit SinglePhotonState(Eigen::Vector2cd a) : amps(std::move(a)) {
        if (std::abs(amps.squaredNorm() - 1.0) > kAlgebraTol) {
            throw std::invalid_argument("SinglePhotonState: amplitudes not normalized");
        }
    }

    static SinglePhotonState h() { return SinglePhotonState({Complex(1, 0), Complex(0, 0)}); }
    static SinglePhotonState v() { return SinglePhotonState({Complex(0, 0), Complex(1, 0)}); }
    static SinglePhotonState d() {
        const double r = 1.0 / std::sqrt(2.0);
        return SinglePhotonState({Complex(r, 0), Complex(r, 0)});
    }
    static SinglePhotonState a() {
        const double r = 1.0 / std::sqrt(2.0);
        return SinglePhotonState({Complex(r, 0), Complex(-r, 0)});
    }

    Eigen::Vector2cd in_basis(Basis target) const { return basis_rotation(target) * amps; }
};

struct TwoPhotonState {
    Eigen::Vector4cd amps;  // (HH, HV, VH, VV), XX photon first

    explicit TwoPhotonState(Eigen::Vector4cd a) : amps(std::move(a)) {
        if (std::abs(amps.squaredNorm() - 1.0) > kAlgebraTol) {
            throw std::invalid_argument("TwoPhotonState: amplitudes not normalized");
        }
    }
};

/// amps[2i+j] = xx_i * x_j
inline TwoPhotonState tensor(const SinglePhotonState& xx, const SinglePhotonState& x) {
    Eigen::Vector4cd a;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            a(2 * i + j) = xx.amps(i) * x.amps(j);
        }
    }
    return TwoPhotonState(a);
}

enum class BellState {
    phi_plus,  // (|HH> + |VV>)/sqrt(2)
    psi_plus,  // (|HV> + |VH>)/sqrt(2)
    dd_aa,     // (|DD> + |AA>)/sqrt(2); identical to phi_plus in the rectilinear basis
};

inline TwoPhotonState bell_state(BellState kind) {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Vector4cd a = Eigen::Vector4cd::Zero();
    switch (kind) {
        case BellState::phi_plus:
            a(0) = a(3) = r;
            break;
        case BellState::psi_plus:
            a(1) = a(2) = r;
            break;
        case BellState::dd_aa: {
            // expand (|DD> + |AA>)/sqrt(2) componentwise rather than aliasing phi_plus
            const SinglePhotonState d = SinglePhotonState::d();
            const SinglePhotonState ap = SinglePhotonState::a();
            a = (tensor(d, d).amps + tensor(ap, ap).amps) * r;
            break;
        }
    }
    return TwoPhotonState(a);
}

struct TwoPhotonDensityMatrix {
    Eigen::Matrix4cd elems;  // rectilinear basis, same ordering as TwoPhotonState

    explicit TwoPhotonDensityMatrix(Eigen::Matrix4cd m) : elems(std::move(m)) {
        const double herm = (elems - elems.adjoint()).cwiseAbs().maxCoeff();
        if (herm > kAlgebraTol) {
            throw std::invalid_argument("TwoPhotonDensityMatrix: not Hermitian");
        }
        if (std::abs(elems.trace().real() - 1.0) > kAlgebraTol ||
            std::abs(elems.trace().imag()) > kAlgebraTol) {
            throw std::invalid_argument("TwoPhotonDensityMatrix: trace != 1");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(elems, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -kPsdTol) {
            throw std::invalid_argument("TwoPhotonDensityMatrix: negative eigenvalue");
        }
    }
};

inline TwoPhotonDensityMatrix density_from_pure(const TwoPhotonState& psi) {
    return TwoPhotonDensityMatrix(psi.amps * psi.amps.adjoint());
}

/// Convex combination of density matrices. Weights must be non-negative and
/// sum to 1 within kAlgebraTol.
inline TwoPhotonDensityMatrix mix(
    std::span<const std::pair<double, TwoPhotonDensityMatrix>> components) {
    if (components.empty()) {
        throw std::invalid_argument("mix: empty component list");
    }
    double total = 0.0;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (const auto& [weight, rho] : components) {
        if (weight < 0.0) {
            throw std::invalid_argument("mix: negative weight");
        }
        total += weight;
        m += weight * rho.elems;
    }
    if (std::abs(total - 1.0) > kAlgebraTol) {
        throw std::invalid_argument("mix: weights do not sum to 1");
    }
    return TwoPhotonDensityMatrix(m);
}

inline TwoPhotonDensityMatrix mix(
    const std::vector<std::pair<double, TwoPhotonDensityMatrix>>& components) {
    return mix(std::span<const std::pair<double, TwoPhotonDensityMatrix>>(components));
}

/// <target|rho|target>, real up to kAlgebraTol.
inline double fidelity_pure(const TwoPhotonDensityMatrix& rho, const TwoPhotonState& target) {
    const Complex f = (target.amps.adjoint() * rho.elems * target.amps)(0);
    return f.real();
}

/// Tr(rho^2); 1 for pure states, 1/4 for the maximally mixed state.
inline double purity(const TwoPhotonDensityMatrix& rho) {
    return (rho.elems * rho.elems).trace().real();
}

}  // namespace biphoton
