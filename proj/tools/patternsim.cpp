// patternsim: simulation and analysis driver for the nonlocal
// pattern-formation model u_t = -a u + f(T u).
//
// Exit codes: 0 success, 2 configuration error, 3 numerical blow-up,
// 4 I/O error.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "nonlocal/nonlocal.hpp"

namespace fs = std::filesystem;
using namespace nonlocal;

namespace {

struct GlobalFlags {
    fs::path out_dir = "out";
    std::int64_t seed = -1;  // negative: keep the config's seed
    int threads = 1;
};

Field initial_field_for(const SimConfig& cfg, const Spectrum* spectrum) {
    if (cfg.initial.kind == InitialKind::FromFile) {
        Field file = read_field_csv(cfg.initial.path);
        return make_initial_field(cfg, spectrum, &file);
    }
    return make_initial_field(cfg, spectrum);
}

SimConfig load_config(const std::string& path, const GlobalFlags& flags) {
    SimConfig cfg = parse_config(path);
    if (flags.seed >= 0) cfg.initial.seed = static_cast<std::uint64_t>(flags.seed);
    if (auto warning = cfg.validate()) std::cerr << "warning: " << *warning << "\n";
    return cfg;
}

int cmd_run(const std::string& config_path, const GlobalFlags& flags, long snapshot_stride) {
    SimConfig cfg = load_config(config_path, flags);

    std::optional<Spectrum> spectrum;
    if (cfg.initial.kind == InitialKind::ModeSeed)
        spectrum = eigendecompose(build_operator_matrix(cfg.kernel, cfg.grid, cfg.boundary),
                                  cfg.initial.mode_index + 8);

    IntegrateOptions opt;
    opt.snapshot_stride = snapshot_stride;
    if (snapshot_stride > 0)
        opt.on_snapshot = [&](long step, double, const Field& u) {
            char name[32];
            std::snprintf(name, sizeof name, "field_%08ld.csv", step);
            write_field_csv(u, flags.out_dir / name);
        };

    RunReport report =
        integrate(cfg, initial_field_for(cfg, spectrum ? &*spectrum : nullptr), opt);

    const double res = residual(report.final, cfg.kernel, cfg.a, cfg.response, cfg.boundary);
    write_field_csv(report.final, flags.out_dir / "final.csv");
    write_image(report.final, flags.out_dir / "final.pgm");
    write_report(report, flags.out_dir / "report.txt",
                 {{"stationary_residual", detail::fmt17(res)}});
    std::cout << (report.stationary ? "stationary" : "step budget exhausted") << " after "
              << report.steps_taken << " steps; residual " << report.residual_inf << "\n";
    std::cout << "artifacts in " << flags.out_dir.string() << "\n";
    return 0;
}

int cmd_preset(const std::string& name, const std::string& scale_str, bool list,
               const GlobalFlags& flags) {
    if (list) {
        for (const PresetInfo& info : preset_catalog())
            std::cout << info.name << "\t" << info.description << "\n";
        return 0;
    }
    PresetScale scale;
    if (scale_str == "desk")
        scale = PresetScale::Desk;
    else if (scale_str == "paper")
        scale = PresetScale::Paper;
    else
        throw config_error("unknown scale: " + scale_str);
    PresetOptions opts;
    opts.out_dir = flags.out_dir;
    if (flags.seed >= 0) opts.seed = static_cast<std::uint64_t>(flags.seed);
    PresetOutcome outcome = run_preset(name, scale, opts);
    for (const auto& p : outcome.artifacts) std::cout << p.string() << "\n";
    for (const auto& [k, v] : outcome.notes) std::cout << k << ": " << v << "\n";
    return 0;
}

int cmd_spectrum(const std::string& config_path, int modes, int dump_fields,
                 const GlobalFlags& flags) {
    SimConfig cfg = load_config(config_path, flags);
    Spectrum spec =
        eigendecompose(build_operator_matrix(cfg.kernel, cfg.grid, cfg.boundary), modes);
    write_spectrum_csv(spec, flags.out_dir / "eigenvalues.csv");
    for (int j = 0; j < dump_fields && j < static_cast<int>(spec.modes()); ++j) {
        char name[32];
        std::snprintf(name, sizeof name, "mode_%03d.csv", j + 1);
        write_field_csv(spec.eigenfields[j], flags.out_dir / name);
    }
    std::cout << "lambda_max " << spec.lambda_max << ", lambda_min " << spec.lambda_min << "\n";
    if (spec.lambda_max > 0.0)
        std::cout << "b_critical " << b_critical(spec, cfg.a) << " (a = " << cfg.a << ")\n";
    return 0;
}

int cmd_check_kernel(const std::string& config_path, const std::string& lemma_arg,
                     const GlobalFlags& flags, bool write_csv) {
    SimConfig cfg = load_config(config_path, flags);
    std::vector<LemmaTag> tags;
    if (lemma_arg == "all")
        tags = {LemmaTag::Positive1, LemmaTag::Positive2, LemmaTag::SmallInhibition1,
                LemmaTag::SmallInhibition2, LemmaTag::Negative};
    else
        tags = {lemma_from_name(lemma_arg)};

    std::vector<LemmaReport> reports;
    for (LemmaTag t : tags) {
        LemmaReport rep = check_lemma_hypotheses(cfg.kernel, t);
        std::cout << lemma_name(t) << ": " << (rep.applicable ? "applicable" : "not applicable")
                  << "\n";
        for (const auto& h : rep.hypotheses)
            std::cout << "  [" << (h.satisfied ? "ok" : "FAIL") << "] " << h.name << " (value "
                      << h.value << ", threshold " << h.threshold << ")\n";
        reports.push_back(std::move(rep));
    }
    if (write_csv) write_lemma_csv(reports, flags.out_dir / "lemma.csv");
    return 0;
}

int cmd_scan(const std::string& config_path, int mode, double b_min, double b_max, int count,
             double seed_amplitude, const GlobalFlags& flags) {
    SimConfig cfg = load_config(config_path, flags);
    Spectrum spec = eigendecompose(build_operator_matrix(cfg.kernel, cfg.grid, cfg.boundary),
                                   std::max(mode + 8, 32));
    std::vector<double> bs;
    for (int i = 0; i < count; ++i)
        bs.push_back(count == 1 ? b_min : b_min + (b_max - b_min) * i / (count - 1.0));
    auto branch = bifurcation_scan(cfg.kernel, cfg.a, spec, mode, bs, seed_amplitude);
    write_branch_csv(branch, flags.out_dir / "branch.csv");
    for (const auto& p : branch)
        std::cout << p.b << "\t" << p.amplitude << "\t" << p.residual << "\t"
                  << (p.accepted ? "ok" : "gap") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal pattern-formation simulator"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--out-dir", flags.out_dir, "artifact directory (default: out)");
    app.add_option("--seed", flags.seed, "override the initial-condition seed");
    app.add_option("--threads", flags.threads, "worker threads for the convolution");

    std::string config_path, preset_name, scale = "desk", lemma = "all";
    long snapshot_stride = 0;
    bool preset_list = false, lemma_csv = false;
    int modes = 0, dump_fields = 0, scan_mode = 1, scan_count = 21;
    double b_min = 0.0, b_max = 0.0, seed_amplitude = 0.1;

    CLI::App* run = app.add_subcommand("run", "integrate a configuration");
    run->add_option("config", config_path)->required();
    run->add_option("--snapshot-stride", snapshot_stride, "write a field file every N steps");

    CLI::App* preset = app.add_subcommand("preset", "run a named experiment");
    preset->add_option("name", preset_name);
    preset->add_option("--scale", scale, "desk | paper (default desk)");
    preset->add_flag("--list", preset_list, "list available presets");

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigendecompose the operator");
    spectrum->add_option("config", config_path)->required();
    spectrum->add_option("--modes", modes, "retained modes (0 = all)");
    spectrum->add_option("--dump-fields", dump_fields, "write the first N eigenfields");

    CLI::App* check = app.add_subcommand("check-kernel", "evaluate kernel condition sets");
    check->add_option("config", config_path)->required();
    check->add_option("--lemma", lemma,
                      "Positive1|Positive2|SmallInhibition1|SmallInhibition2|Negative|all");
    check->add_flag("--csv", lemma_csv, "also write lemma.csv to the artifact directory");

    CLI::App* scan = app.add_subcommand("scan", "branch scan over the response coefficient");
    scan->add_option("config", config_path)->required();
    scan->add_option("--mode", scan_mode, "1-based mode index");
    scan->add_option("--b-min", b_min)->required();
    scan->add_option("--b-max", b_max)->required();
    scan->add_option("--count", scan_count, "number of scan points (default 21)");
    scan->add_option("--seed-amplitude", seed_amplitude, "eigenfield seed amplitude");

    CLI11_PARSE(app, argc, argv);
    thread_count() = std::max(1, flags.threads);

    try {
        if (run->parsed()) return cmd_run(config_path, flags, snapshot_stride);
        if (preset->parsed()) {
            if (!preset_list && preset_name.empty())
                throw config_error("preset: name required (or --list)");
            return cmd_preset(preset_name, scale, preset_list, flags);
        }
        if (spectrum->parsed()) return cmd_spectrum(config_path, modes, dump_fields, flags);
        if (check->parsed()) return cmd_check_kernel(config_path, lemma, flags, lemma_csv);
        if (scan->parsed())
            return cmd_scan(config_path, scan_mode, b_min, b_max, scan_count, seed_amplitude,
                            flags);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const blowup_error& e) {
        std::cerr << "numerical blow-up: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
