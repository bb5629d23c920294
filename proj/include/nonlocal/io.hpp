#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nonlocal/bifurcation.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/invariant_sets.hpp"
#include "nonlocal/spectral.hpp"

namespace nonlocal {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace detail

/// Field file: a '#'-prefixed grid line, a header, then one row per
/// lattice point with 17 significant digits. Values round-trip bitwise.
///
///   # grid dimension=1 extent=2.5e1 points=200
///   x,u
///   -25,0.125 ...
inline void write_field_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    const Grid& g = f.grid;
    out << "# grid dimension=" << g.dimension() << " extent=" << detail::fmt17(g.extent())
        << " points=" << g.points_per_axis() << "\n";
    const int n = g.points_per_axis();
    if (g.dimension() == 1) {
        out << "x,u\n";
        for (int i = 0; i < n; ++i)
            out << detail::fmt17(g.coordinate(i)) << ',' << detail::fmt17(f[i]) << "\n";
    } else {
        out << "x,y,u\n";
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                out << detail::fmt17(g.coordinate(ix)) << ',' << detail::fmt17(g.coordinate(iy))
                    << ',' << detail::fmt17(f[g.flat_index(ix, iy)]) << "\n";
    }
    if (!out) throw io_error("write failed: " + path.string());
}

inline Field read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open field file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# grid ", 0) != 0)
        throw io_error("field file missing grid line: " + path.string());
    int dimension = 0, points = 0;
    double extent = 0.0;
    if (std::sscanf(line.c_str(), "# grid dimension=%d extent=%lf points=%d", &dimension,
                    &extent, &points) != 3)
        throw io_error("malformed grid line in " + path.string());
    Grid g = make_grid(dimension, extent, points);
    if (!std::getline(in, line)) throw io_error("field file missing header: " + path.string());

    Field f(g);
    const int cols = dimension == 1 ? 2 : 3;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::getline(in, line))
            throw io_error("field file truncated at row " + std::to_string(i));
        std::size_t pos = 0;
        for (int c = 0; c + 1 < cols; ++c) {
            pos = line.find(',', pos);
            if (pos == std::string::npos)
                throw io_error("field file row " + std::to_string(i) + " is malformed");
            ++pos;
        }
        f[i] = std::strtod(line.c_str() + pos, nullptr);
    }
    return f;
}

/// Binary PGM with [-1, 1] mapped linearly onto [0, 255] (values clamped,
/// floor rounding: 0 maps to 127). 1D fields produce an n-by-1 image; in
/// 2D, row 0 is the y = -extent edge.
inline void write_image(const Field& f, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    const int n = f.grid.points_per_axis();
    const int h = f.grid.dimension() == 1 ? 1 : n;
    out << "P5\n" << n << ' ' << h << "\n255\n";
    std::string bytes(f.size(), '\0');
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = std::clamp(f[i], -1.0, 1.0);
        int p = static_cast<int>(std::floor((v + 1.0) * 0.5 * 255.0));
        bytes[i] = static_cast<char>(std::clamp(p, 0, 255));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path.string());
}

/// Structured-text run report; extra note lines may be appended.
inline void write_report(const RunReport& r, const std::filesystem::path& path,
                         const std::vector<std::pair<std::string, std::string>>& notes = {}) {
    std::ofstream out = detail::open_out(path);
    const Grid& g = r.final.grid;
    out << "grid: dimension=" << g.dimension() << " extent=" << detail::fmt17(g.extent())
        << " points=" << g.points_per_axis() << "\n";
    out << "steps_taken: " << r.steps_taken << "\n";
    out << "stationary: " << (r.stationary ? "true" : "false") << "\n";
    out << "residual_inf: " << detail::fmt17(r.residual_inf) << "\n";
    out << "update_norm: " << detail::fmt17(r.update_norm) << "\n";
    out << "final_max_abs: " << detail::fmt17(max_abs(r.final)) << "\n";
    out << "final_l2: " << detail::fmt17(l2_norm(r.final)) << "\n";
    out << "mode_history_samples: " << r.mode_history.size() << "\n";
    for (const auto& [key, value] : notes) out << key << ": " << value << "\n";
    if (!out) throw io_error("write failed: " + path.string());
}

inline void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "index,eigenvalue\n";
    for (std::size_t j = 0; j < s.modes(); ++j)
        out << (j + 1) << ',' << detail::fmt17(s.eigenvalues[j]) << "\n";
    if (!out) throw io_error("write failed: " + path.string());
}

inline void write_branch_csv(const std::vector<BranchPoint>& branch,
                             const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "b,amplitude,residual,accepted\n";
    for (const BranchPoint& p : branch)
        out << detail::fmt17(p.b) << ',' << detail::fmt17(p.amplitude) << ','
            << detail::fmt17(p.residual) << ',' << (p.accepted ? 1 : 0) << "\n";
    if (!out) throw io_error("write failed: " + path.string());
}

inline void write_lemma_csv(const std::vector<LemmaReport>& reports,
                            const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "lemma,hypothesis,value,threshold,satisfied,applicable\n";
    for (const LemmaReport& rep : reports)
        for (const HypothesisCheck& h : rep.hypotheses)
            out << lemma_name(rep.lemma) << ',' << h.name << ',' << detail::fmt17(h.value) << ','
                << detail::fmt17(h.threshold) << ',' << (h.satisfied ? 1 : 0) << ','
                << (rep.applicable ? 1 : 0) << "\n";
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace nonlocal
