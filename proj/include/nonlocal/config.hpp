#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"

namespace nonlocal {

/// Pointwise response applied to the convolution output.
///
/// Linear:           f(x) = b x
/// Saturation:       f(x) = clamp(b x, -1, 1)
/// SmoothSaturation: f(x) = tanh(b x), the differentiable stand-in used
///                   by branch scans.
enum class ResponseKind { Linear, Saturation, SmoothSaturation };

struct ResponseFunction {
    ResponseKind kind = ResponseKind::Linear;
    double b = 1.0;

    double operator()(double x) const {
        switch (kind) {
            case ResponseKind::Linear: return b * x;
            case ResponseKind::Saturation: return std::clamp(b * x, -1.0, 1.0);
            default: return std::tanh(b * x);
        }
    }

    /// Derivative; zero on the clamped set of the saturation response.
    double derivative(double x) const {
        switch (kind) {
            case ResponseKind::Linear: return b;
            case ResponseKind::Saturation: return std::abs(b * x) < 1.0 ? b : 0.0;
            default: {
                const double t = std::tanh(b * x);
                return b * (1.0 - t * t);
            }
        }
    }
};

inline std::string response_name(ResponseKind k) {
    switch (k) {
        case ResponseKind::Linear: return "linear";
        case ResponseKind::Saturation: return "saturation";
        default: return "smooth";
    }
}

/// How the zero extension outside the domain is handled.
/// Periodic wrapping exists solely for the periodic solutions of
/// inhibition-only kernels and must be requested explicitly.
enum class BoundaryMode { ZeroExtension, Periodic };

enum class InitialKind { Zero, Random, StepSign, SquarePlateau, ModeSeed, FromFile };

struct InitialCondition {
    InitialKind kind = InitialKind::Zero;
    std::uint64_t seed = 0;       // Random
    double amplitude = 1.0;       // Random, ModeSeed
    double half_width = 4.0;      // SquarePlateau
    int mode_index = 1;           // ModeSeed, 1-based
    std::string path;             // FromFile
};

struct SimConfig {
    Grid grid;
    Kernel kernel;
    double a = 1.0;
    ResponseFunction response;
    double dt = 0.1;
    long max_steps = 100000;
    double stationarity_tol = 1e-8;
    InitialCondition initial;
    BoundaryMode boundary = BoundaryMode::ZeroExtension;

    SimConfig(Grid g, Kernel k) : grid(std::move(g)), kernel(std::move(k)) {}

    /// Enforce the construction invariants. Returns a warning string for
    /// configurations that are admissible but likely to step too coarsely.
    std::optional<std::string> validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("config: a must be positive");
        if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
        if (!(dt * a < 1.0)) throw std::invalid_argument("config: dt*a must be below 1");
        if (max_steps <= 0) throw std::invalid_argument("config: max_steps must be positive");
        if (!(stationarity_tol > 0.0))
            throw std::invalid_argument("config: stationarity_tol must be positive");
        if (std::abs(kernel.spacing() - grid.spacing()) >
            1e-12 * std::max(1.0, grid.spacing()))
            throw std::invalid_argument("config: kernel spacing must equal grid spacing");
        if (kernel.dimension() != grid.dimension())
            throw std::invalid_argument("config: kernel and grid dimensions differ");
        const double gain = dt * (a + std::abs(response.b) * kernel.l1_norm());
        if (gain > 1.0)
            return "dt*(a + |b|*||K||_1) = " + std::to_string(gain) +
                   " exceeds 1; consider a smaller dt";
        return std::nullopt;
    }
};

}  // namespace nonlocal
