#include <catch2/catch_amalgamated.hpp>
#include <cstring>

#include "nonlocal/dynamics.hpp"

using namespace nonlocal;
using Catch::Approx;

namespace {

struct Setup {
    Grid grid;
    Kernel kernel;
    Spectrum spectrum;
};

Setup desk_setup(int n = 120, double extent = 15.0) {
    Grid g = make_grid(1, extent, n);
    Kernel k = sample_kernel(KernelFamily::K1, {1.0, 0.3, 2.0, 3.0, 0.0}, g.spacing());
    Spectrum s = eigendecompose(build_operator_matrix(k, g));
    return {g, k, std::move(s)};
}

}  // namespace

TEST_CASE("responses saturate, scale, and stay odd", "[dynamics]") {
    ResponseFunction sat{ResponseKind::Saturation, 1.0};
    CHECK(sat(2.0) == 1.0);
    CHECK(sat(0.5) == 0.5);
    CHECK(sat(-3.0) == -1.0);

    ResponseFunction lin{ResponseKind::Linear, 0.3};
    CHECK(lin(2.0) == Approx(0.6));

    ResponseFunction half{ResponseKind::Saturation, 0.5};
    CHECK(half(1.9) == Approx(0.95));

    ResponseFunction smooth{ResponseKind::SmoothSaturation, 0.8};
    for (double x : {0.1, 0.9, 2.7}) {
        CHECK(smooth(-x) == Approx(-smooth(x)).margin(1e-15));
        CHECK(sat(-x) == -sat(x));
    }
    CHECK(sat.derivative(0.5) == 1.0);
    CHECK(sat.derivative(1.5) == 0.0);
    CHECK(smooth.derivative(0.0) == Approx(0.8));
}

TEST_CASE("euler step fixes the zero state and shifts constants", "[dynamics]") {
    Setup s = desk_setup(201, 10.0);
    ResponseFunction sat{ResponseKind::Saturation, 1.0};
    Field zero(s.grid);
    Field stepped = euler_step(zero, s.kernel, 1.0, sat, 0.1);
    CHECK(max_abs(stepped) == 0.0);

    ResponseFunction lin{ResponseKind::Linear, 0.7};
    Field ones(s.grid);
    for (auto& v : ones.values) v = 1.0;
    const double a = 0.9, dt = 0.05;
    Field next = euler_step(ones, s.kernel, a, lin, dt);
    const double expected = 1.0 + dt * (-a + 0.7 * kernel_integral(s.kernel));
    const int mid = s.grid.points_per_axis() / 2;
    CHECK(next[mid] == Approx(expected).margin(1e-13));
}

TEST_CASE("a seeded eigenmode follows the scalar recurrence", "[dynamics]") {
    Setup s = desk_setup();
    const int j = 2;
    const double lam = s.spectrum.eigenvalues[j];
    const double b = 0.8, a = 1.0, dt = 0.1, eps = 1e-3;
    const double mu = b * lam - a;

    SimConfig cfg(s.grid, s.kernel);
    cfg.a = a;
    cfg.response = {ResponseKind::Linear, b};
    cfg.dt = dt;
    cfg.max_steps = 50;
    cfg.stationarity_tol = 1e-300;
    cfg.initial = {InitialKind::ModeSeed, 0, eps, 0.0, j + 1, ""};

    IntegrateOptions opt;
    opt.record_modes = &s.spectrum;
    opt.mode_stride = 1;
    RunReport r = integrate(cfg, opt);
    for (const auto& [t, coeff] : r.mode_history) {
        const long n = std::lround(t / dt);
        const double expected = eps * std::pow(1.0 + dt * mu, n);
        CHECK(coeff[j] == Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("integrate stops immediately on stationary input", "[dynamics]") {
    Setup s = desk_setup(80);
    SimConfig cfg(s.grid, s.kernel);
    cfg.response = {ResponseKind::Saturation, 1.0};
    RunReport r = integrate(cfg);
    CHECK(r.stationary);
    CHECK(r.steps_taken == 0);
    CHECK(r.residual_inf == 0.0);
}

TEST_CASE("subcritical linear runs decay to zero", "[dynamics]") {
    Setup s = desk_setup();
    SimConfig cfg(s.grid, s.kernel);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Linear, 0.5 * b_critical(s.spectrum)};
    cfg.dt = 0.1;
    cfg.max_steps = 20000;
    cfg.stationarity_tol = 1e-10;
    cfg.initial = {InitialKind::Random, 99, 1.0, 0.0, 1, ""};

    Field u0 = make_initial_field(cfg);
    RunReport r = integrate(cfg);
    CHECK(r.stationary);
    CHECK(max_abs(r.final) <= 1e-6 * max_abs(u0));
}

TEST_CASE("saturated trajectories stay in the invariant box", "[dynamics]") {
    Setup s = desk_setup();
    SimConfig cfg(s.grid, s.kernel);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Saturation, 2.0};
    cfg.dt = 0.2;
    cfg.max_steps = 400;
    cfg.stationarity_tol = 1e-300;
    cfg.initial = {InitialKind::Random, 7, 0.5, 0.0, 1, ""};

    const double bound = std::max(0.5, 1.0 / cfg.a) + 1e-12;
    double worst = 0.0;
    IntegrateOptions opt;
    opt.snapshot_stride = 1;
    opt.on_snapshot = [&](long, double, const Field& u) { worst = std::max(worst, max_abs(u)); };
    integrate(cfg, opt);
    CHECK(worst <= bound);
}

TEST_CASE("the linear flow is homogeneous", "[dynamics]") {
    Setup s = desk_setup(90);
    SimConfig cfg(s.grid, s.kernel);
    cfg.response = {ResponseKind::Linear, 0.6};
    cfg.dt = 0.1;
    cfg.max_steps = 200;
    cfg.stationarity_tol = 1e-300;
    cfg.initial = {InitialKind::Random, 11, 1.0, 0.0, 1, ""};

    RunReport base = integrate(cfg);
    Field scaled = make_initial_field(cfg);
    for (auto& v : scaled.values) v *= 3.5;
    RunReport big = integrate(cfg, std::move(scaled), {});
    double worst = 0.0;
    for (std::size_t i = 0; i < base.final.size(); ++i)
        worst = std::max(worst, std::abs(big.final[i] - 3.5 * base.final[i]));
    CHECK(worst <= 1e-10 * max_abs(big.final));
}

TEST_CASE("odd data under an even kernel stays odd", "[dynamics]") {
    Setup s = desk_setup(161, 20.0);
    SimConfig cfg(s.grid, s.kernel);
    cfg.response = {ResponseKind::Saturation, 1.0};
    cfg.dt = 0.1;
    cfg.max_steps = 2000;
    cfg.stationarity_tol = 1e-9;
    cfg.initial.kind = InitialKind::StepSign;

    RunReport r = integrate(cfg);
    const int n = s.grid.points_per_axis();
    double oddness = 0.0;
    for (int i = 0; i < n; ++i)
        oddness = std::max(oddness, std::abs(r.final[i] + r.final[n - 1 - i]));
    CHECK(oddness <= 1e-8 * std::max(1.0, max_abs(r.final)));
}

TEST_CASE("identical configurations give bitwise-identical runs", "[dynamics]") {
    Setup s = desk_setup(100);
    SimConfig cfg(s.grid, s.kernel);
    cfg.response = {ResponseKind::Saturation, 1.2};
    cfg.dt = 0.1;
    cfg.max_steps = 500;
    cfg.stationarity_tol = 1e-12;
    cfg.initial = {InitialKind::Random, 2024, 1.0, 0.0, 1, ""};

    RunReport r1 = integrate(cfg);
    RunReport r2 = integrate(cfg);
    CHECK(r1.steps_taken == r2.steps_taken);
    CHECK(std::memcmp(r1.final.values.data(), r2.final.values.data(),
                      r1.final.size() * sizeof(double)) == 0);
}

TEST_CASE("runaway linear growth raises a blow-up diagnostic", "[dynamics]") {
    Setup s = desk_setup(60);
    SimConfig cfg(s.grid, s.kernel);
    cfg.response = {ResponseKind::Linear, 1e4};
    cfg.dt = 0.09;
    cfg.max_steps = 100000;
    cfg.stationarity_tol = 1e-12;
    cfg.initial = {InitialKind::Random, 5, 1.0, 0.0, 1, ""};
    CHECK_THROWS_AS(integrate(cfg), blowup_error);
}

TEST_CASE("stability classification follows the growth rates", "[dynamics]") {
    Grid g = make_grid(1, 1.0, 3);
    Spectrum spec{g, {0.5, 0.3}, {}, 0.5, 0.3};

    StabilityReport stable = stability_classify(1.0, 1.0, spec);
    CHECK(stable.stable);
    CHECK(stable.mu[0] == Approx(-0.5));
    CHECK(stable.mu[1] == Approx(-0.7));
    CHECK(stable.unstable_indices.empty());

    StabilityReport unstable = stability_classify(1.0, 3.0, spec);
    CHECK_FALSE(unstable.stable);
    CHECK(unstable.mu[0] == Approx(0.5));
    REQUIRE(unstable.unstable_indices.size() == 1);
    CHECK(unstable.unstable_indices[0] == 1);

    StabilityReport marginal = stability_classify(1.0, 1.0 / 0.5, spec);
    CHECK(marginal.stable);
    CHECK(marginal.mu[0] == Approx(0.0).margin(1e-12));
}

TEST_CASE("mode histories track the exact exponential rates", "[dynamics]") {
    Setup s = desk_setup();
    const double a = 1.0, b = 0.5 / s.spectrum.lambda_max;

    SimConfig cfg(s.grid, s.kernel);
    cfg.a = a;
    cfg.response = {ResponseKind::Linear, b};
    cfg.stationarity_tol = 1e-300;
    cfg.initial = {InitialKind::ModeSeed, 0, 1.0, 0.0, 1, ""};

    for (double dt : {0.1, 0.05}) {
        cfg.dt = dt;
        cfg.max_steps = std::lround(1.0 / dt);
        IntegrateOptions opt;
        opt.record_modes = &s.spectrum;
        opt.mode_stride = cfg.max_steps;
        RunReport r = integrate(cfg, opt);
        ModeDecayCheck chk = mode_decay_check(r.mode_history, s.spectrum, a, b);
        CHECK(chk.max_relative_error <= 5.0 * dt);
        CHECK(chk.max_l2_growth <= 1e-8);
    }

    // An empty start decays nowhere: zero deviation by convention.
    cfg.initial = {InitialKind::Zero, 0, 1.0, 0.0, 1, ""};
    cfg.dt = 0.1;
    cfg.max_steps = 10;
    IntegrateOptions opt;
    opt.record_modes = &s.spectrum;
    RunReport rz = integrate(cfg, opt);
    ModeDecayCheck chk0 = mode_decay_check(rz.mode_history, s.spectrum, a, b);
    CHECK(chk0.max_relative_error == 0.0);

    // Multi-mode stable run: the Parseval norm must not grow.
    cfg.initial = {InitialKind::Random, 17, 1.0, 0.0, 1, ""};
    cfg.max_steps = 300;
    RunReport rm = integrate(cfg, opt);
    ModeDecayCheck chkm = mode_decay_check(rm.mode_history, s.spectrum, a, b);
    CHECK(chkm.max_l2_growth <= 1e-8 + 3.0 * cfg.dt * l2_norm(make_initial_field(cfg)));
}

TEST_CASE("config invariants are enforced", "[dynamics]") {
    Setup s = desk_setup(60);
    SimConfig cfg(s.grid, s.kernel);
    cfg.dt = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 0.5;
    cfg.a = 3.0;  // dt*a >= 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Linear, 100.0};
    auto warning = cfg.validate();
    REQUIRE(warning.has_value());

    Kernel misaligned =
        sample_kernel(KernelFamily::K1, {1.0, 0.3, 2.0, 3.0, 0.0}, 0.7 * s.grid.spacing());
    SimConfig bad(s.grid, misaligned);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
