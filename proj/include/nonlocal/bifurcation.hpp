#pragma once

#include <stdexcept>
#include <vector>

#include "nonlocal/dynamics.hpp"
#include "nonlocal/spectral.hpp"
#include "nonlocal/stationary.hpp"

namespace nonlocal {

struct BranchPoint {
    double b = 0.0;
    /// Weighted L2 norm of the converged stationary state.
    double amplitude = 0.0;
    double residual = 0.0;
    /// False marks a gap where the refinement did not converge.
    bool accepted = false;
};

/// Empirical branch diagram around the critical coefficient of one mode.
///
/// For each b the smooth saturation response tanh(b x) is used and the
/// run is seeded with seed_amplitude times the chosen eigenfield. The
/// seed is first relaxed with the flow, then polished by the Newton
/// refinement; the relaxation step matters because past the critical
/// coefficient the zero state is still a root and a cold Newton start
/// would land on it, hiding the branch. A branch of nonzero amplitudes
/// emerging on one side of a / lambda_k is the numerical signature of a
/// bifurcation point there.
inline std::vector<BranchPoint> bifurcation_scan(const Kernel& kernel, double a,
                                                 const Spectrum& spectrum, int mode_index,
                                                 const std::vector<double>& b_values,
                                                 double seed_amplitude) {
    if (mode_index < 1 || static_cast<std::size_t>(mode_index) > spectrum.modes())
        throw std::invalid_argument("bifurcation_scan: mode index out of range");
    if (!(spectrum.eigenvalues[mode_index - 1] > 0.0))
        throw std::invalid_argument("bifurcation_scan: mode eigenvalue must be positive");

    const Grid& grid = spectrum.grid;
    Field seed = spectrum.eigenfields[mode_index - 1];
    for (auto& v : seed.values) v *= seed_amplitude;

    std::vector<BranchPoint> branch;
    branch.reserve(b_values.size());
    for (double b : b_values) {
        const ResponseFunction f{ResponseKind::SmoothSaturation, b};
        SimConfig cfg(grid, kernel);
        cfg.a = a;
        cfg.response = f;
        cfg.dt = 0.5 / (a + std::abs(b) * kernel.l1_norm());
        cfg.max_steps = 4000;
        cfg.stationarity_tol = 1e-9;
        RunReport run = integrate(cfg, seed);
        NewtonResult r = newton_refine(run.final, kernel, a, f, 40, 1e-11);
        BranchPoint pt;
        pt.b = b;
        pt.accepted = r.converged;
        pt.amplitude = l2_norm(r.field);
        pt.residual = r.residual;
        branch.push_back(pt);
    }
    return branch;
}

}  // namespace nonlocal
