#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nonlocal/config.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/rng.hpp"
#include "nonlocal/spectral.hpp"

namespace nonlocal {

/// Raised when a step produces a non-finite value.
struct blowup_error : std::runtime_error {
    long step;
    explicit blowup_error(long s)
        : std::runtime_error("time integration blew up at step " + std::to_string(s)), step(s) {}
};

/// Trajectory summary of one integration run.
struct RunReport {
    explicit RunReport(Field f) : final(std::move(f)) {}

    Field final;
    long steps_taken = 0;
    bool stationary = false;
    /// ||-a u + f(T u)||_inf at the final state.
    double residual_inf = 0.0;
    /// ||u_{n+1} - u_n||_inf / dt at exit; for the explicit Euler update
    /// this equals the residual.
    double update_norm = 0.0;
    /// Optional (t, mode coefficients) samples.
    std::vector<std::pair<double, std::vector<double>>> mode_history;
};

/// One explicit Euler update u + dt * (-a u + f(T u)).
inline Field euler_step(const Field& u, const ConvolutionApplier& op, double a,
                        const ResponseFunction& f, double dt) {
    Field Tu = op.apply(u);
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = u[i] + dt * (-a * u[i] + f(Tu[i]));
    if (!all_finite(out)) throw blowup_error(0);
    return out;
}

inline Field euler_step(const Field& u, const Kernel& kernel, double a,
                        const ResponseFunction& f, double dt,
                        BoundaryMode boundary = BoundaryMode::ZeroExtension) {
    return euler_step(u, ConvolutionApplier(kernel, u.grid, boundary), a, f, dt);
}

/// Builds the configured initial state. ModeSeed requires a spectrum;
/// FromFile requires the preloaded field (the file layer owns parsing).
inline Field make_initial_field(const SimConfig& cfg, const Spectrum* spectrum = nullptr,
                                const Field* file_field = nullptr) {
    const Grid& g = cfg.grid;
    Field u(g);
    const InitialCondition& ic = cfg.initial;
    switch (ic.kind) {
        case InitialKind::Zero:
            break;
        case InitialKind::Random: {
            CounterRng rng{ic.seed};
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.symmetric(i, ic.amplitude);
            break;
        }
        case InitialKind::StepSign: {
            const int n = g.points_per_axis();
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double x = g.coordinate(static_cast<int>(i) % n);
                u[i] = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            }
            break;
        }
        case InitialKind::SquarePlateau: {
            const int n = g.points_per_axis();
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double x = g.coordinate(static_cast<int>(i) % n);
                const double y =
                    g.dimension() == 2 ? g.coordinate(static_cast<int>(i) / n) : 0.0;
                u[i] = std::max(std::abs(x), std::abs(y)) <= ic.half_width ? 1.0 : -1.0;
            }
            break;
        }
        case InitialKind::ModeSeed: {
            if (!spectrum)
                throw std::invalid_argument("initial condition: mode seed needs a spectrum");
            const int j = ic.mode_index;
            if (j < 1 || static_cast<std::size_t>(j) > spectrum->modes())
                throw std::invalid_argument("initial condition: mode index out of range");
            u = spectrum->eigenfields[j - 1];
            for (auto& v : u.values) v *= ic.amplitude;
            break;
        }
        case InitialKind::FromFile: {
            if (!file_field)
                throw std::invalid_argument("initial condition: field file not preloaded");
            if (file_field->grid != g)
                throw std::invalid_argument("initial condition: file grid mismatch");
            u = *file_field;
            break;
        }
    }
    return u;
}

struct IntegrateOptions {
    /// When set, mode coefficients are recorded every mode_stride steps.
    const Spectrum* record_modes = nullptr;
    long mode_stride = 10;
    /// When set, invoked every snapshot_stride steps (and at exit).
    std::function<void(long step, double t, const Field&)> on_snapshot;
    long snapshot_stride = 0;
    ApplyPath path = ApplyPath::Auto;
};

/// Step the explicit Euler scheme until the update norm drops below the
/// stationarity tolerance or the step budget runs out. Deterministic for
/// a fixed config and seed.
inline RunReport integrate(const SimConfig& cfg, Field u,
                           const IntegrateOptions& opt = {}) {
    cfg.validate();
    ConvolutionApplier op(cfg.kernel, cfg.grid, cfg.boundary, opt.path);
    RunReport report{Field(cfg.grid)};

    long n = 0;
    double norm = 0.0;
    for (;; ++n) {
        if (opt.record_modes && n % opt.mode_stride == 0)
            report.mode_history.emplace_back(n * cfg.dt, project_onto_modes(u, *opt.record_modes));
        if (opt.on_snapshot && opt.snapshot_stride > 0 && n % opt.snapshot_stride == 0)
            opt.on_snapshot(n, n * cfg.dt, u);

        Field Tu = op.apply(u);
        norm = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = -cfg.a * u[i] + cfg.response(Tu[i]);
            Tu[i] = r;  // reuse as the rhs buffer
            norm = std::max(norm, std::abs(r));
        }
        if (!std::isfinite(norm)) throw blowup_error(n);
        if (norm <= cfg.stationarity_tol) {
            report.stationary = true;
            break;
        }
        if (n >= cfg.max_steps) break;
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += cfg.dt * Tu[i];
    }

    report.final = std::move(u);
    report.steps_taken = n;
    report.residual_inf = norm;
    report.update_norm = norm;
    if (opt.on_snapshot && opt.snapshot_stride > 0) opt.on_snapshot(n, n * cfg.dt, report.final);
    return report;
}

inline RunReport integrate(const SimConfig& cfg, const IntegrateOptions& opt = {}) {
    return integrate(cfg, make_initial_field(cfg, opt.record_modes), opt);
}

struct StabilityReport {
    bool stable = false;
    /// Growth rates mu_j = b lambda_j - a over the retained modes.
    std::vector<double> mu;
    /// 1-based indices of retained modes with positive growth.
    std::vector<int> unstable_indices;
};

/// Classifies the linear dynamics: stable iff b lambda_j <= a for all j,
/// decided from the spectrum extremes.
inline StabilityReport stability_classify(double a, double b, const Spectrum& spec) {
    if (!(a > 0.0)) throw std::invalid_argument("stability_classify: a must be positive");
    if (b == 0.0) throw std::invalid_argument("stability_classify: b must be nonzero");
    StabilityReport r;
    r.mu.resize(spec.modes());
    for (std::size_t j = 0; j < spec.modes(); ++j) {
        r.mu[j] = b * spec.eigenvalues[j] - a;
        if (r.mu[j] > 1e-12) r.unstable_indices.push_back(static_cast<int>(j) + 1);
    }
    const double worst = std::max(b * spec.lambda_max, b * spec.lambda_min) - a;
    r.stable = worst <= 1e-12;
    return r;
}

struct ModeDecayCheck {
    /// Worst relative deviation of |a_j(t)| from |a_j(0)| e^{mu_j t}.
    double max_relative_error = 0.0;
    /// Largest increase of the Parseval norm over the history (stable
    /// runs should keep this at roundoff level).
    double max_l2_growth = 0.0;
};

/// Compares a recorded linear-run history against the exact exponential
/// decay rates of the modes.
inline ModeDecayCheck mode_decay_check(
    const std::vector<std::pair<double, std::vector<double>>>& history, const Spectrum& spec,
    double a, double b) {
    ModeDecayCheck out;
    if (history.empty()) return out;
    const std::vector<double>& c0 = history.front().second;
    double scale = 0.0;
    for (double c : c0) scale += c * c;
    scale = std::sqrt(scale);
    const double floor = 1e-14 * (scale + 1.0);

    for (const auto& [t, c] : history) {
        double l2 = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            l2 += c[j] * c[j];
            if (std::abs(c0[j]) <= floor) continue;
            const double mu = b * spec.eigenvalues[j] - a;
            const double expected = std::abs(c0[j]) * std::exp(mu * t);
            out.max_relative_error =
                std::max(out.max_relative_error, std::abs(std::abs(c[j]) - expected) / expected);
        }
        out.max_l2_growth = std::max(out.max_l2_growth, std::sqrt(l2) - scale);
    }
    return out;
}

}  // namespace nonlocal
