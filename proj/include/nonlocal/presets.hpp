#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nonlocal/bifurcation.hpp"
#include "nonlocal/configfile.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/invariant_sets.hpp"
#include "nonlocal/io.hpp"
#include "nonlocal/metrics.hpp"
#include "nonlocal/spectral.hpp"

namespace nonlocal {

enum class PresetScale { Desk, Paper };

inline std::string scale_name(PresetScale s) { return s == PresetScale::Desk ? "desk" : "paper"; }

struct PresetOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
};

struct PresetOutcome {
    std::vector<std::filesystem::path> artifacts;
    std::vector<std::pair<std::string, std::string>> notes;
    RunReport report;
};

namespace detail {

inline std::string note_num(double v) { return fmt17(v); }

struct PresetContext {
    std::filesystem::path dir;
    PresetOutcome out;

    explicit PresetContext(const PresetOptions& opts, const std::string& name, PresetScale scale)
        : dir(opts.out_dir / name / scale_name(scale)), out{{}, {}, RunReport{Field(make_grid(1, 1.0, 3))}} {}

    template <typename Writer>
    void artifact(const std::string& file, Writer&& w) {
        const std::filesystem::path p = dir / file;
        w(p);
        out.artifacts.push_back(p);
    }
};

// The linear eigenfield experiments: tune b to the top eigenvalue and let
// every other mode decay.
inline PresetOutcome linear_1d(KernelFamily family, PresetScale scale,
                               const PresetOptions& opts, const std::string& name) {
    const bool desk = scale == PresetScale::Desk;
    Grid grid = desk ? make_grid(1, 25.0, 200) : make_grid(1, 50.0, 600);
    Kernel kernel = sample_kernel(family, default_kernel_params(family, 1), grid.spacing());
    Spectrum spec = eigendecompose(build_operator_matrix(kernel, grid), 64);

    SimConfig cfg(grid, kernel);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Linear, b_critical(spec, cfg.a)};
    cfg.dt = 0.1;
    cfg.max_steps = 60000;
    cfg.stationarity_tol = 1e-8;
    cfg.initial = {InitialKind::Random, opts.seed.value_or(1), 1.0, 0.0, 1, ""};

    PresetContext ctx(opts, name, scale);
    IntegrateOptions iopt;
    iopt.record_modes = &spec;
    iopt.mode_stride = 100;
    ctx.out.report = integrate(cfg, iopt);

    const auto coeff = project_onto_modes(ctx.out.report.final, spec);
    const double norm = l2_norm(ctx.out.report.final);
    ctx.out.notes = {
        {"lambda_max", note_num(spec.lambda_max)},
        {"b", note_num(cfg.response.b)},
        {"b_critical", note_num(b_critical(spec, cfg.a))},
        {"dominant_mode_ratio", note_num(norm > 0 ? std::abs(coeff[0]) / norm : 0.0)},
        {"stable", stability_classify(cfg.a, cfg.response.b, spec).stable ? "true" : "false"},
    };
    ctx.artifact("eigenvalues.csv", [&](auto& p) { write_spectrum_csv(spec, p); });
    ctx.artifact("final.csv", [&](auto& p) { write_field_csv(ctx.out.report.final, p); });
    ctx.artifact("final.pgm", [&](auto& p) { write_image(ctx.out.report.final, p); });
    ctx.artifact("report.txt", [&](auto& p) { write_report(ctx.out.report, p, ctx.out.notes); });
    return std::move(ctx.out);
}

// The saturated fixed-point experiments: slope-1 saturation, a step start,
// convergence into the odd monotone profile family.
inline PresetOutcome schauder_1d(const Kernel& kernel, PresetScale scale,
                                 const PresetOptions& opts, const std::string& name) {
    const bool desk = scale == PresetScale::Desk;
    Grid grid = desk ? make_grid(1, 25.0, 200) : make_grid(1, 50.0, 600);
    Kernel sampled = Kernel(kernel.bands(), grid.spacing(), 1, kernel.family(),
                            kernel.negative_band_width());

    SimConfig cfg(grid, sampled);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Saturation, 1.0};
    cfg.dt = 0.1;
    cfg.max_steps = 40000;
    cfg.stationarity_tol = 1e-8;
    cfg.initial.kind = InitialKind::StepSign;

    PresetContext ctx(opts, name, scale);
    ctx.out.report = integrate(cfg);

    std::vector<LemmaReport> lemmas;
    std::string applicable;
    for (LemmaTag t : {LemmaTag::Positive1, LemmaTag::Positive2, LemmaTag::SmallInhibition1,
                       LemmaTag::SmallInhibition2, LemmaTag::Negative}) {
        lemmas.push_back(check_lemma_hypotheses(sampled, t));
        if (lemmas.back().applicable) applicable += (applicable.empty() ? "" : " ") + lemma_name(t);
    }
    MembershipReport narrow =
        set_membership(ctx.out.report.final, InvariantSetSpec::narrow_gap(1e-3));
    WavelengthResult wl = stripe_wavelength(ctx.out.report.final);
    const double res = residual(ctx.out.report.final, sampled, cfg.a, cfg.response);
    ctx.out.notes = {
        {"applicable_conditions", applicable.empty() ? "none" : applicable},
        {"stationary_residual", note_num(res)},
        {"narrow_gap_member", narrow.member ? "true" : "false"},
        {"narrow_gap_violation", note_num(narrow.worst_violation)},
        {"wavelength", wl.found ? note_num(wl.wavelength) : "none"},
    };
    ctx.artifact("lemma.csv", [&](auto& p) { write_lemma_csv(lemmas, p); });
    ctx.artifact("final.csv", [&](auto& p) { write_field_csv(ctx.out.report.final, p); });
    ctx.artifact("final.pgm", [&](auto& p) { write_image(ctx.out.report.final, p); });
    ctx.artifact("report.txt", [&](auto& p) { write_report(ctx.out.report, p, ctx.out.notes); });
    return std::move(ctx.out);
}

// Inhibition-only kernel on the torus, seeded inside the periodic profile
// family; the stationary pattern keeps the construction period 4 + 2s.
inline PresetOutcome negative_periodic_1d(PresetScale scale, const PresetOptions& opts,
                                          const std::string& name) {
    const bool desk = scale == PresetScale::Desk;
    // Torus length must be an exact multiple of the period 6 with the
    // period an exact number of cells: desk 200 * 0.24 = 48, paper
    // 612 / 6 = 102.
    Grid grid = desk ? make_grid(1, 23.88, 200) : make_grid(1, 611.0 / 12.0, 612);
    Kernel kernel =
        sample_kernel(KernelFamily::K4, default_kernel_params(KernelFamily::K4, 1), grid.spacing());

    SimConfig cfg(grid, kernel);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Saturation, 1.0};
    cfg.boundary = BoundaryMode::Periodic;
    cfg.dt = 0.1;
    cfg.max_steps = 40000;
    cfg.stationarity_tol = 1e-8;

    const InvariantSetSpec per = InvariantSetSpec::periodic(1.0, 1e-3);
    Field u0 = random_set_member(grid, per, opts.seed.value_or(1), 0);

    PresetContext ctx(opts, name, scale);
    ctx.out.report = integrate(cfg, u0);

    WavelengthResult wl = stripe_wavelength(ctx.out.report.final);
    MembershipReport member = set_membership(ctx.out.report.final, per);
    const double res =
        residual(ctx.out.report.final, kernel, cfg.a, cfg.response, BoundaryMode::Periodic);
    ctx.out.notes = {
        {"kernel_integral", note_num(kernel_integral(kernel))},
        {"stationary_residual", note_num(res)},
        {"periodic_member", member.member ? "true" : "false"},
        {"wavelength", wl.found ? note_num(wl.wavelength) : "none"},
        {"expected_wavelength", note_num(per.period())},
    };
    ctx.artifact("final.csv", [&](auto& p) { write_field_csv(ctx.out.report.final, p); });
    ctx.artifact("final.pgm", [&](auto& p) { write_image(ctx.out.report.final, p); });
    ctx.artifact("report.txt", [&](auto& p) { write_report(ctx.out.report, p, ctx.out.notes); });
    return std::move(ctx.out);
}

// Branch diagram around the critical coefficient of the top mode.
inline PresetOutcome branch_1d(PresetScale scale, const PresetOptions& opts,
                               const std::string& name) {
    const bool desk = scale == PresetScale::Desk;
    Grid grid = desk ? make_grid(1, 25.0, 200) : make_grid(1, 50.0, 600);
    Kernel kernel = sample_kernel(KernelFamily::K1, {0.6, 0.0, 2.0, 2.0, 0.0}, grid.spacing());
    Spectrum spec = eigendecompose(build_operator_matrix(kernel, grid), 32);
    const double bc = b_critical(spec);

    std::vector<double> bs;
    for (int i = 0; i < 21; ++i) bs.push_back(bc * (0.9 + 0.2 * i / 20.0));
    auto branch = bifurcation_scan(kernel, 1.0, spec, 1, bs, 0.1);

    PresetContext ctx(opts, name, scale);
    ctx.out.report.final = Field(grid);
    ctx.out.notes = {{"b_critical", note_num(bc)}, {"lambda_max", note_num(spec.lambda_max)}};
    ctx.artifact("branch.csv", [&](auto& p) { write_branch_csv(branch, p); });
    ctx.artifact("eigenvalues.csv", [&](auto& p) { write_spectrum_csv(spec, p); });
    return std::move(ctx.out);
}

// The 2D pattern gallery: each kernel family, random or plateau start,
// saturated response far above or slightly above the critical coefficient.
inline PresetOutcome nonlinear_2d(KernelFamily family, bool random_start, bool large_b,
                                  PresetScale scale, const PresetOptions& opts,
                                  const std::string& name) {
    const bool desk = scale == PresetScale::Desk;
    Grid grid = desk ? make_grid(2, 16.0, 128) : make_grid(2, 50.0, 600);
    Kernel kernel =
        sample_kernel(family, default_kernel_params(family, 2), grid.spacing(), 2);

    const double lambda_max = dominant_eigenvalue(kernel, grid);
    const double bc = 1.0 / lambda_max;
    double ratio = 1.2;
    if (large_b) {
        switch (family) {
            case KernelFamily::K1: ratio = 160.0; break;
            case KernelFamily::K2: ratio = 140.0; break;
            case KernelFamily::K3: ratio = 80.0; break;
            case KernelFamily::K4: ratio = 28.0; break;
            default: ratio = 250.0; break;
        }
    }

    SimConfig cfg(grid, kernel);
    cfg.a = 1.0;
    cfg.response = {ResponseKind::Saturation, ratio * bc};
    cfg.dt = 0.1;
    cfg.max_steps = large_b ? (desk ? 1500 : 1000) : (desk ? 4000 : 2500);
    cfg.stationarity_tol = 1e-8;
    if (random_start)
        cfg.initial = {InitialKind::Random, opts.seed.value_or(1), 1.0, 0.0, 1, ""};
    else
        cfg.initial = {InitialKind::SquarePlateau, 0, 1.0, 4.0, 1, ""};

    PresetContext ctx(opts, name, scale);
    ctx.out.report = integrate(cfg);

    WavelengthResult wl = stripe_wavelength(ctx.out.report.final);
    ctx.out.notes = {
        {"lambda_max", note_num(lambda_max)},
        {"b_critical", note_num(bc)},
        {"b", note_num(cfg.response.b)},
        {"wavelength", wl.found ? note_num(wl.wavelength) : "none"},
    };
    ctx.artifact("final.csv", [&](auto& p) { write_field_csv(ctx.out.report.final, p); });
    ctx.artifact("final.pgm", [&](auto& p) { write_image(ctx.out.report.final, p); });
    ctx.artifact("report.txt", [&](auto& p) { write_report(ctx.out.report, p, ctx.out.notes); });
    return std::move(ctx.out);
}

inline Kernel positive_staircase_kernel(double spacing) {
    std::vector<Band> bands;
    constexpr int steps = 40;
    for (int i = 0; i < steps; ++i)
        bands.push_back({i * 2.0 / steps, (i + 1) * 2.0 / steps, 1.2 * (1.0 - (i + 0.5) / steps)});
    return sample_custom_kernel(std::move(bands), spacing);
}

}  // namespace detail

struct PresetInfo {
    std::string name;
    std::string description;
};

inline const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = [] {
        std::vector<PresetInfo> v = {
            {"linear-1d-K1", "1D linear response at the critical coefficient, kernel K1"},
            {"linear-1d-K2", "1D linear response at the critical coefficient, kernel K2"},
            {"linear-1d-K3", "1D linear response at the critical coefficient, kernel K3"},
            {"linear-1d-K4", "1D linear response at the critical coefficient, kernel K4"},
            {"schauder-1d-K1", "1D saturated fixed point from a step start, kernel K1"},
            {"schauder-1d-K2", "1D saturated fixed point from a step start, kernel K2"},
            {"schauder-1d-K3", "1D saturated fixed point from a step start, kernel K3"},
            {"schauder-1d-positive",
             "1D saturated fixed point from a step start, decreasing positive kernel"},
            {"negative-1d-K4-periodic",
             "1D inhibition-only kernel on the torus, periodic stationary pattern"},
            {"branch-1d-positive", "branch diagram around the critical coefficient"},
        };
        for (const char* fam : {"K1", "K2", "K3", "K4", "K5"})
            for (const char* start : {"rand", "reg"})
                for (const char* size : {"large", "small"})
                    v.push_back({std::string("nonlinear-2d-") + fam + "-" + start + "-" + size,
                                 std::string("2D saturated patterns, kernel ") + fam + ", " +
                                     (std::string(start) == "rand" ? "random" : "plateau") +
                                     " start, " + size + " coefficient"});
        return v;
    }();
    return catalog;
}

inline PresetOutcome run_preset(const std::string& name, PresetScale scale,
                                const PresetOptions& opts = {}) {
    using detail::linear_1d;
    using detail::negative_periodic_1d;
    using detail::nonlinear_2d;
    using detail::schauder_1d;

    if (name.rfind("linear-1d-K", 0) == 0 && name.size() == 12) {
        const KernelFamily fam = family_from_name(name.substr(10));
        return linear_1d(fam, scale, opts, name);
    }
    if (name == "schauder-1d-positive") {
        Kernel k = detail::positive_staircase_kernel(0.25);
        return schauder_1d(k, scale, opts, name);
    }
    if (name.rfind("schauder-1d-K", 0) == 0 && name.size() == 14) {
        const KernelFamily fam = family_from_name(name.substr(12));
        Kernel k = sample_kernel(fam, default_kernel_params(fam, 1), 0.25);
        return schauder_1d(k, scale, opts, name);
    }
    if (name == "negative-1d-K4-periodic") return negative_periodic_1d(scale, opts, name);
    if (name == "branch-1d-positive") return detail::branch_1d(scale, opts, name);
    if (name.rfind("nonlinear-2d-", 0) == 0) {
        const std::string rest = name.substr(13);
        const auto dash1 = rest.find('-');
        const auto dash2 = rest.find('-', dash1 + 1);
        if (dash1 != std::string::npos && dash2 != std::string::npos) {
            const KernelFamily fam = family_from_name(rest.substr(0, dash1));
            const std::string start = rest.substr(dash1 + 1, dash2 - dash1 - 1);
            const std::string size = rest.substr(dash2 + 1);
            if ((start == "rand" || start == "reg") && (size == "large" || size == "small"))
                return nonlinear_2d(fam, start == "rand", size == "large", scale, opts, name);
        }
    }
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace nonlocal
