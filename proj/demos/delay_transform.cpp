// Walks the textbook delay transformations of the Bell state Phi+:
// a half-wave delay swaps H and V on both photons, a quarter-wave delay
// turns Phi+ into Psi+.

#include "biphoton/biphoton.hpp"

#include <cstdio>
#include <numbers>

int main() {
    using namespace biphoton;

    const TwoPhotonDensityMatrix phi_plus = density_from_pure(bell_state(BellState::phi_plus));

    std::printf("Phi+ through a variable delay line (both photons):\n\n");
    std::printf("%10s  %8s  %8s  %8s  %8s  %9s\n", "phi", "p_vv", "p_vh", "p_hv", "p_hh",
                "intensity");
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double phi = frac * 2.0 * std::numbers::pi;
        const TwoPhotonDensityMatrix out = apply_delay(phi_plus, phi);
        const CoincidenceProbabilities p = coincidence_probs(out);
        std::printf("%8.2fpi  %8.4f  %8.4f  %8.4f  %8.4f  %9.4f\n", phi / std::numbers::pi,
                    p.p_vv, p.p_vh, p.p_hv, p.p_hh,
                    normalized_biphoton_intensity(p, IntensityMode::full));
    }

    const TwoPhotonDensityMatrix quarter =
        apply_delay(phi_plus, std::numbers::pi / 2.0);
    const double overlap =
        fidelity_pure(quarter, bell_state(BellState::psi_plus));
    std::printf("\nfidelity with Psi+ after a quarter-wave delay: %.12f\n", overlap);
    return 0;
}
