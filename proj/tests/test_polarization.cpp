#include "biphoton/polarization.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace biphoton;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("basis rotation is the symmetric Hadamard-like unitary") {
    const Eigen::Matrix2cd r = basis_rotation(Basis::diagonal);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    REQUIRE_THAT(r(0, 0).real(), WithinAbs(inv_sqrt2, kTol));
    REQUIRE_THAT(r(0, 1).real(), WithinAbs(inv_sqrt2, kTol));
    REQUIRE_THAT(r(1, 0).real(), WithinAbs(inv_sqrt2, kTol));
    REQUIRE_THAT(r(1, 1).real(), WithinAbs(-inv_sqrt2, kTol));

    // self-adjoint and involutive: applying it twice is the identity
    REQUIRE((r - r.adjoint()).cwiseAbs().maxCoeff() < kTol);
    REQUIRE((r * r - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < kTol);
    REQUIRE((r * r.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < kTol);

    REQUIRE(basis_rotation(Basis::rectilinear).isIdentity(kTol));
}

TEST_CASE("sign convention: D has both components positive, A flips V") {
    const Eigen::Vector2cd d_in_diag = SinglePhotonState::d().in_basis(Basis::diagonal);
    REQUIRE_THAT(d_in_diag(0).real(), WithinAbs(1.0, kTol));
    REQUIRE_THAT(std::abs(d_in_diag(1)), WithinAbs(0.0, kTol));

    const Eigen::Vector2cd a_in_diag = SinglePhotonState::a().in_basis(Basis::diagonal);
    REQUIRE_THAT(std::abs(a_in_diag(0)), WithinAbs(0.0, kTol));
    REQUIRE_THAT(a_in_diag(1).real(), WithinAbs(1.0, kTol));

    // H = (D + A)/sqrt(2): equal positive diagonal-basis amplitudes
    const Eigen::Vector2cd h_in_diag = SinglePhotonState::h().in_basis(Basis::diagonal);
    REQUIRE_THAT(h_in_diag(0).real(), WithinAbs(1.0 / std::sqrt(2.0), kTol));
    REQUIRE_THAT(h_in_diag(1).real(), WithinAbs(1.0 / std::sqrt(2.0), kTol));
}

TEST_CASE("single-photon states must be normalized") {
    REQUIRE_THROWS_AS(SinglePhotonState({Complex(1, 0), Complex(1, 0)}), std::invalid_argument);
    REQUIRE_THROWS_AS(SinglePhotonState({Complex(0.5, 0), Complex(0, 0)}), std::invalid_argument);
    REQUIRE_NOTHROW(SinglePhotonState({Complex(0.6, 0), Complex(0, 0.8)}));
}

TEST_CASE("rectilinear -> diagonal -> rectilinear round trip") {
    auto& gen = test_helpers::rng();
    std::normal_distribution<double> gauss;
    const Eigen::Matrix2cd r = basis_rotation(Basis::diagonal);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::Vector2cd amps(Complex(gauss(gen), gauss(gen)), Complex(gauss(gen), gauss(gen)));
        amps /= amps.norm();
        const Eigen::Vector2cd round_trip = r * (r * amps);
        REQUIRE((round_trip - amps).cwiseAbs().maxCoeff() < kTol);
    }
}

TEST_CASE("tensor product ordering puts the XX photon first") {
    const TwoPhotonState hv = tensor(SinglePhotonState::h(), SinglePhotonState::v());
    REQUIRE_THAT(std::abs(hv.amps(0)), WithinAbs(0.0, kTol));
    REQUIRE_THAT(hv.amps(1).real(), WithinAbs(1.0, kTol));
    REQUIRE_THAT(std::abs(hv.amps(2)), WithinAbs(0.0, kTol));
    REQUIRE_THAT(std::abs(hv.amps(3)), WithinAbs(0.0, kTol));

    const TwoPhotonState vh = tensor(SinglePhotonState::v(), SinglePhotonState::h());
    REQUIRE_THAT(vh.amps(2).real(), WithinAbs(1.0, kTol));
}

TEST_CASE("Bell state amplitudes") {
    const TwoPhotonState phi_plus = bell_state(BellState::phi_plus);
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE_THAT(phi_plus.amps(0).real(), WithinAbs(r, kTol));
    REQUIRE_THAT(std::abs(phi_plus.amps(1)), WithinAbs(0.0, kTol));
    REQUIRE_THAT(std::abs(phi_plus.amps(2)), WithinAbs(0.0, kTol));
    REQUIRE_THAT(phi_plus.amps(3).real(), WithinAbs(r, kTol));

    const TwoPhotonState psi_plus = bell_state(BellState::psi_plus);
    REQUIRE_THAT(psi_plus.amps(1).real(), WithinAbs(r, kTol));
    REQUIRE_THAT(psi_plus.amps(2).real(), WithinAbs(r, kTol));
}

TEST_CASE("the two written forms of the entangled state coincide") {
    // (|HH> + |VV>)/sqrt(2) and (|DD> + |AA>)/sqrt(2) are the same vector
    const TwoPhotonState rect_form = bell_state(BellState::phi_plus);
    const TwoPhotonState diag_form = bell_state(BellState::dd_aa);
    REQUIRE((rect_form.amps - diag_form.amps).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("density matrix constructor enforces physicality") {
    SECTION("not Hermitian") {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(0, 0) = 1.0;
        m(0, 1) = Complex(0.1, 0.0);  // missing conjugate partner
        REQUIRE_THROWS_AS(TwoPhotonDensityMatrix(m), std::invalid_argument);
    }
    SECTION("trace not one") {
        Eigen::Matrix4cd m = 0.5 * Eigen::Matrix4cd::Identity();
        REQUIRE_THROWS_AS(TwoPhotonDensityMatrix(m), std::invalid_argument);
    }
    SECTION("negative eigenvalue") {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(0, 0) = 1.2;
        m(1, 1) = -0.2;
        REQUIRE_THROWS_AS(TwoPhotonDensityMatrix(m), std::invalid_argument);
    }
    SECTION("valid pure projector accepted") {
        REQUIRE_NOTHROW(density_from_pure(bell_state(BellState::phi_plus)));
    }
}

TEST_CASE("mix validates its weights") {
    const TwoPhotonDensityMatrix rho = density_from_pure(bell_state(BellState::phi_plus));
    REQUIRE_THROWS_AS(mix(std::vector<std::pair<double, TwoPhotonDensityMatrix>>{}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(mix({{0.5, rho}, {0.6, rho}}), std::invalid_argument);
    REQUIRE_THROWS_AS(mix({{1.5, rho}, {-0.5, rho}}), std::invalid_argument);
    REQUIRE_NOTHROW(mix({{0.25, rho}, {0.75, rho}}));
}

TEST_CASE("random convex combinations stay physical") {
    auto& gen = test_helpers::rng();
    for (int trial = 0; trial < 100; ++trial) {
        // construction re-checks Hermiticity, trace, and positivity
        const TwoPhotonDensityMatrix rho = test_helpers::random_density(gen);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho.elems, Eigen::EigenvaluesOnly);
        REQUIRE(solver.eigenvalues().minCoeff() > -kPsdTol);
        REQUIRE_THAT(rho.elems.trace().real(), WithinAbs(1.0, kTol));
    }
}

TEST_CASE("fidelity with a pure target is linear in the state") {
    auto& gen = test_helpers::rng();
    for (int trial = 0; trial < 50; ++trial) {
        const TwoPhotonState target = test_helpers::random_pure_state(gen);
        const TwoPhotonDensityMatrix r1 = test_helpers::random_density(gen);
        const TwoPhotonDensityMatrix r2 = test_helpers::random_density(gen);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double w = unif(gen);
        const TwoPhotonDensityMatrix combined = mix({{w, r1}, {1.0 - w, r2}});
        const double direct = fidelity_pure(combined, target);
        const double linear = w * fidelity_pure(r1, target) + (1.0 - w) * fidelity_pure(r2, target);
        REQUIRE_THAT(direct, WithinAbs(linear, kTol));
    }
}

TEST_CASE("purity of canonical states") {
    REQUIRE_THAT(purity(density_from_pure(bell_state(BellState::phi_plus))), WithinAbs(1.0, kTol));

    REQUIRE_THAT(purity(TwoPhotonDensityMatrix(0.25 * Eigen::Matrix4cd::Identity())),
                 WithinAbs(0.25, kTol));

    Eigen::Matrix4cd half = Eigen::Matrix4cd::Zero();
    half(0, 0) = 0.5;
    half(3, 3) = 0.5;
    REQUIRE_THAT(purity(TwoPhotonDensityMatrix(half)), WithinAbs(0.5, kTol));
}
