#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nonlocal/config.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"

namespace nonlocal {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Default band parameters of the built-in families. The 1D values are
/// chosen so K1/K2 satisfy the small-inhibition conditions and K4/K5 the
/// negative one; the 2D values set the dominant pattern wavelength near
/// the activation diameter.
inline KernelParams default_kernel_params(KernelFamily family, int dimension) {
    switch (family) {
        case KernelFamily::K1:
            return dimension == 1 ? KernelParams{1.0, 0.3, 2.0, 3.0, 0.0}
                                  : KernelParams{1.0, 1.6, 2.0, 2.6, 0.0};
        case KernelFamily::K2:
            return dimension == 1 ? KernelParams{1.0, 0.1, 2.0, 4.0, 0.0}
                                  : KernelParams{1.0, 0.15, 2.0, 4.0, 0.0};
        case KernelFamily::K3:
            return dimension == 1 ? KernelParams{1.0, 0.4, 1.0, 2.5, 4.0}
                                  : KernelParams{1.0, 0.5, 1.0, 2.5, 4.0};
        case KernelFamily::K4:
            return dimension == 1 ? KernelParams{0.0, 1.1, 2.0, 3.0, 0.0}
                                  : KernelParams{0.1, 1.0, 1.0, 3.0, 0.0};
        case KernelFamily::K5:
            return dimension == 1 ? KernelParams{0.0, 0.8, 2.0, 3.5, 0.0}
                                  : KernelParams{0.0, 1.1, 2.0, 3.0, 0.0};
        default:
            return {};
    }
}

namespace detail {

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

inline std::vector<Band> parse_bands(const std::string& text, int line) {
    std::vector<Band> bands;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        Band b;
        char colon1 = 0, colon2 = 0;
        std::stringstream bs(item);
        if (!(bs >> b.lo >> colon1 >> b.hi >> colon2 >> b.amplitude) || colon1 != ':' ||
            colon2 != ':')
            throw config_error("line " + std::to_string(line) +
                               ": kernel.bands items must look like lo:hi:amp");
        bands.push_back(b);
    }
    if (bands.empty())
        throw config_error("line " + std::to_string(line) + ": kernel.bands is empty");
    return bands;
}

}  // namespace detail

/// Plain key = value configuration, one assignment per line, '#' comments.
///
/// Keys (defaults in parentheses):
///   dimension            1 or 2
///   extent               domain half-width r
///   points               lattice points per axis
///   boundary             zero | periodic            (zero)
///   kernel.family        K1..K5 | custom
///   kernel.A/B/p/q/m     family band parameters     (per-family defaults)
///   kernel.bands         lo:hi:amp[;lo:hi:amp...]   (custom family only)
///   a                    degradation rate           (1.0)
///   response             linear | saturation | smooth
///   b                    response slope
///   dt                   time step                  (0.1)
///   max_steps            step budget                (100000)
///   stationarity_tol     update-norm threshold      (1e-8)
///   init                 zero|random|stepsign|plateau|mode|file  (zero)
///   init.seed            random seed                (0)
///   init.amplitude       random / mode amplitude    (1.0)
///   init.half_width      plateau half-width         (4.0)
///   init.index           1-based mode index         (1)
///   init.path            field file for init=file
///
/// Unknown and duplicate keys are rejected with their line number.
inline SimConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());

    std::map<std::string, detail::KeyValue> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        if (kv.count(key))
            throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key +
                               "' (first at line " + std::to_string(kv[key].line) + ")");
        kv[key] = {value, lineno, false};
    }

    auto take = [&](const std::string& key) -> detail::KeyValue* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    };
    auto need = [&](const std::string& key) -> detail::KeyValue& {
        detail::KeyValue* v = take(key);
        if (!v) throw config_error("missing required key '" + key + "'");
        return *v;
    };
    auto bad = [](const detail::KeyValue& v, const std::string& key) {
        return config_error("line " + std::to_string(v.line) + ": invalid value for '" + key +
                            "'");
    };
    auto as_double = [&](detail::KeyValue& v, const std::string& key) {
        char* end = nullptr;
        const double x = std::strtod(v.value.c_str(), &end);
        if (end == v.value.c_str() || *end != '\0') throw bad(v, key);
        return x;
    };
    auto as_long = [&](detail::KeyValue& v, const std::string& key) {
        char* end = nullptr;
        const long x = std::strtol(v.value.c_str(), &end, 10);
        if (end == v.value.c_str() || *end != '\0') throw bad(v, key);
        return x;
    };

    SimConfig cfg = [&] {
        const int dimension = static_cast<int>(as_long(need("dimension"), "dimension"));
        const double extent = as_double(need("extent"), "extent");
        const int points = static_cast<int>(as_long(need("points"), "points"));
        Grid grid = [&] {
            try {
                return make_grid(dimension, extent, points);
            } catch (const std::invalid_argument& e) {
                throw config_error(e.what());
            }
        }();

        detail::KeyValue& fam_kv = need("kernel.family");
        KernelFamily family;
        try {
            family = family_from_name(fam_kv.value);
        } catch (const std::invalid_argument&) {
            throw bad(fam_kv, "kernel.family");
        }
        Kernel kernel = [&]() -> Kernel {
            try {
                if (family == KernelFamily::Custom) {
                    detail::KeyValue& bands_kv = need("kernel.bands");
                    return sample_custom_kernel(detail::parse_bands(bands_kv.value, bands_kv.line),
                                                grid.spacing(), dimension);
                }
                KernelParams prm = default_kernel_params(family, dimension);
                if (auto* v = take("kernel.A")) prm.A = as_double(*v, "kernel.A");
                if (auto* v = take("kernel.B")) prm.B = as_double(*v, "kernel.B");
                if (auto* v = take("kernel.p")) prm.p = as_double(*v, "kernel.p");
                if (auto* v = take("kernel.q")) prm.q = as_double(*v, "kernel.q");
                if (auto* v = take("kernel.m")) prm.m = as_double(*v, "kernel.m");
                return sample_kernel(family, prm, grid.spacing(), dimension);
            } catch (const std::invalid_argument& e) {
                throw config_error(e.what());
            }
        }();
        return SimConfig(std::move(grid), std::move(kernel));
    }();

    cfg.a = as_double(need("a"), "a");
    detail::KeyValue& resp = need("response");
    if (resp.value == "linear")
        cfg.response.kind = ResponseKind::Linear;
    else if (resp.value == "saturation")
        cfg.response.kind = ResponseKind::Saturation;
    else if (resp.value == "smooth")
        cfg.response.kind = ResponseKind::SmoothSaturation;
    else
        throw bad(resp, "response");
    cfg.response.b = as_double(need("b"), "b");

    if (auto* v = take("dt")) cfg.dt = as_double(*v, "dt");
    if (auto* v = take("max_steps")) cfg.max_steps = as_long(*v, "max_steps");
    if (auto* v = take("stationarity_tol"))
        cfg.stationarity_tol = as_double(*v, "stationarity_tol");

    if (auto* v = take("boundary")) {
        if (v->value == "zero")
            cfg.boundary = BoundaryMode::ZeroExtension;
        else if (v->value == "periodic")
            cfg.boundary = BoundaryMode::Periodic;
        else
            throw bad(*v, "boundary");
    }

    if (auto* v = take("init")) {
        if (v->value == "zero")
            cfg.initial.kind = InitialKind::Zero;
        else if (v->value == "random")
            cfg.initial.kind = InitialKind::Random;
        else if (v->value == "stepsign")
            cfg.initial.kind = InitialKind::StepSign;
        else if (v->value == "plateau")
            cfg.initial.kind = InitialKind::SquarePlateau;
        else if (v->value == "mode")
            cfg.initial.kind = InitialKind::ModeSeed;
        else if (v->value == "file")
            cfg.initial.kind = InitialKind::FromFile;
        else
            throw bad(*v, "init");
    }
    if (auto* v = take("init.seed"))
        cfg.initial.seed = static_cast<std::uint64_t>(as_long(*v, "init.seed"));
    if (auto* v = take("init.amplitude")) cfg.initial.amplitude = as_double(*v, "init.amplitude");
    if (auto* v = take("init.half_width"))
        cfg.initial.half_width = as_double(*v, "init.half_width");
    if (auto* v = take("init.index"))
        cfg.initial.mode_index = static_cast<int>(as_long(*v, "init.index"));
    if (auto* v = take("init.path")) cfg.initial.path = v->value;
    if (cfg.initial.kind == InitialKind::FromFile && cfg.initial.path.empty())
        throw config_error("init = file requires init.path");

    for (const auto& [key, v] : kv)
        if (!v.used)
            throw config_error("line " + std::to_string(v.line) + ": unknown key '" + key + "'");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    return cfg;
}

}  // namespace nonlocal
