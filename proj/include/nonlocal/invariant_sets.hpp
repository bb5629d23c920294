#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nonlocal/config.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/rng.hpp"

namespace nonlocal {

/// The five kernel condition sets under which f(T) maps the invariant
/// profile family into itself.
///
/// Positive1        positive kernel, mass >= 2, plateaus beyond |x| = 2
/// Positive2        positive non-increasing kernel, plateaus beyond |x| = 1
/// SmallInhibition1 total inhibition mass dominated by the activation
/// SmallInhibition2 band-wise and cumulative domination
/// Negative         inhibition-only ring kernel, periodic profiles
enum class LemmaTag { Positive1, Positive2, SmallInhibition1, SmallInhibition2, Negative };

inline std::string lemma_name(LemmaTag t) {
    switch (t) {
        case LemmaTag::Positive1: return "Positive1";
        case LemmaTag::Positive2: return "Positive2";
        case LemmaTag::SmallInhibition1: return "SmallInhibition1";
        case LemmaTag::SmallInhibition2: return "SmallInhibition2";
        default: return "Negative";
    }
}

inline LemmaTag lemma_from_name(const std::string& s) {
    for (LemmaTag t : {LemmaTag::Positive1, LemmaTag::Positive2, LemmaTag::SmallInhibition1,
                       LemmaTag::SmallInhibition2, LemmaTag::Negative})
        if (lemma_name(t) == s) return t;
    throw std::invalid_argument("unknown lemma tag: " + s);
}

struct HypothesisCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool satisfied = false;
};

struct LemmaReport {
    LemmaTag lemma = LemmaTag::Positive1;
    std::vector<HypothesisCheck> hypotheses;
    bool applicable = false;
};

namespace detail {

// Closed-form band integrals; every kernel carries its band profile.
inline double band_integral_1d(const std::vector<Band>& bands, bool positive_part) {
    double s = 0.0;
    for (const Band& b : bands) {
        if (positive_part && b.amplitude > 0.0) s += 2.0 * b.amplitude * (b.hi - b.lo);
        if (!positive_part && b.amplitude < 0.0) s += 2.0 * (-b.amplitude) * (b.hi - b.lo);
    }
    return s;
}

// Mass of the positive part on [0, x].
inline double positive_mass_upto(const std::vector<Band>& bands, double x) {
    double s = 0.0;
    for (const Band& b : bands)
        if (b.amplitude > 0.0) s += b.amplitude * std::max(0.0, std::min(x, b.hi) - b.lo);
    return s;
}

// Mass of the negative part (one side) on [2, 2 + x].
inline double negative_band_mass_upto(const std::vector<Band>& bands, double x) {
    double s = 0.0;
    for (const Band& b : bands)
        if (b.amplitude < 0.0)
            s += -b.amplitude * std::max(0.0, std::min(2.0 + x, b.hi) - std::max(2.0, b.lo));
    return s;
}

inline bool sample_symmetric(const Kernel& k) {
    for (int i = 1; i <= k.half_taps(); ++i)
        if (k.at(i) != k.at(-i)) return false;
    return true;
}

// Largest uptick of the positive part over increasing positive offsets;
// zero for a non-increasing profile, constants included.
inline double positive_part_worst_uptick(const Kernel& k) {
    double worst = 0.0;
    double prev = std::max(k.at(0), 0.0);
    for (int i = 1; i <= k.half_taps(); ++i) {
        const double cur = std::max(k.at(i), 0.0);
        worst = std::max(worst, cur - prev);
        prev = cur;
    }
    return worst;
}

inline double support_of(const Kernel& k, bool positive_part) {
    double sup = 0.0;
    for (int i = 0; i <= k.half_taps(); ++i) {
        const double v = k.at(i);
        if ((positive_part && v > 0.0) || (!positive_part && v < 0.0))
            sup = std::max(sup, i * k.spacing());
    }
    return sup;
}

inline double inner_edge_of_negative(const Kernel& k) {
    for (int i = 0; i <= k.half_taps(); ++i)
        if (k.at(i) < 0.0) return i * k.spacing();
    return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Evaluates one condition set against a 1D kernel. Band integrals use
/// the closed form; shape conditions are checked sample-wise.
inline LemmaReport check_lemma_hypotheses(const Kernel& kernel, LemmaTag lemma) {
    if (kernel.dimension() != 1)
        throw std::invalid_argument("check_lemma_hypotheses: 1D kernels only");
    LemmaReport rep;
    rep.lemma = lemma;
    auto add = [&](std::string name, double value, double threshold, bool ok) {
        rep.hypotheses.push_back({std::move(name), value, threshold, ok});
    };

    const auto& bands = kernel.bands();
    const bool symmetric = detail::sample_symmetric(kernel);
    add("symmetric", symmetric ? 1.0 : 0.0, 1.0, symmetric);

    const double s = kernel.negative_band_width();
    switch (lemma) {
        case LemmaTag::Positive1:
        case LemmaTag::Positive2: {
            double min_sample = 0.0;
            for (double v : kernel.samples()) min_sample = std::min(min_sample, v);
            add("nonnegative", min_sample, 0.0, min_sample >= 0.0);
            const double total = detail::band_integral_1d(bands, true) -
                                 detail::band_integral_1d(bands, false);
            add("integral >= 2", total, 2.0, total >= 2.0);
            const double sup = detail::support_of(kernel, true);
            add("support within |x|<=2", sup, 2.0, sup <= 2.0 + 1e-12);
            if (lemma == LemmaTag::Positive2) {
                const double up = detail::positive_part_worst_uptick(kernel);
                add("nonincreasing for positive offsets", up, 0.0, up <= 0.0);
            }
            break;
        }
        case LemmaTag::SmallInhibition1:
        case LemmaTag::SmallInhibition2: {
            const double sup_pos = detail::support_of(kernel, true);
            add("activation support within |x|<=2", sup_pos, 2.0, sup_pos <= 2.0 + 1e-12);
            const double inner = detail::inner_edge_of_negative(kernel);
            add("inhibition beyond |x| = 2", inner, 2.0, inner >= 2.0 - 1e-12);
            const double sup_neg = detail::support_of(kernel, false);
            add("inhibition within the s-band", sup_neg, 2.0 + s, sup_neg <= 2.0 + s + 1e-12);
            const double up = detail::positive_part_worst_uptick(kernel);
            add("activation nonincreasing for positive offsets", up, 0.0, up <= 0.0);
            const double act = detail::positive_mass_upto(bands, 2.0);
            if (lemma == LemmaTag::SmallInhibition1) {
                const double inh = detail::band_integral_1d(bands, false);
                add("activation mass >= 1 + total inhibition", act - inh, 1.0, act >= 1.0 + inh);
            } else {
                const double inh = detail::negative_band_mass_upto(bands, s);
                add("activation mass >= 1 + band inhibition", act - inh, 1.0, act >= 1.0 + inh);
                // Cumulative domination; the margin is piecewise linear in x,
                // so checking band-edge breakpoints on [0, 2] is exact.
                std::vector<double> xs = {0.0, 2.0};
                for (const Band& b : bands) {
                    for (double e : {b.lo, b.hi}) {
                        if (e > 0.0 && e < 2.0) xs.push_back(e);
                        const double shifted = e - 2.0;
                        if (shifted > 0.0 && shifted < 2.0) xs.push_back(shifted);
                    }
                }
                double margin = 0.0;
                bool first = true;
                for (double x : xs) {
                    const double m = detail::positive_mass_upto(bands, x) -
                                     detail::negative_band_mass_upto(bands, x);
                    if (first || m < margin) margin = m;
                    first = false;
                }
                add("cumulative activation dominates", margin, 0.0, margin >= -1e-12);
            }
            break;
        }
        case LemmaTag::Negative: {
            double max_sample = 0.0;
            for (double v : kernel.samples()) max_sample = std::max(max_sample, v);
            add("nonpositive", max_sample, 0.0, max_sample <= 0.0);
            const double total = kernel_integral(kernel);
            add("integral <= -2", total, -2.0, total <= -2.0);
            const double inner = detail::inner_edge_of_negative(kernel);
            add("support beyond |x| = 2", inner, 2.0, inner >= 2.0 - 1e-12);
            const double outer = detail::support_of(kernel, false);
            add("support within 2..2+s", outer, 2.0 + s, outer <= 2.0 + s + 1e-12);
            add("band width below 2", s, 2.0, s > 0.0 && s < 2.0);
            // Band profile symmetric about its own midpoint.
            double mirror_err = 0.0;
            for (int i = 0; i <= kernel.half_taps(); ++i) {
                const double r = i * kernel.spacing();
                if (r >= 2.0 - 1e-12 && r <= 2.0 + s + 1e-12)
                    mirror_err = std::max(
                        mirror_err, std::abs(kernel.at(i) - kernel.profile(4.0 + s - r)));
            }
            add("band symmetric about its midpoint", mirror_err, 0.0, mirror_err <= 1e-12);
            break;
        }
    }

    rep.applicable = true;
    for (const auto& h : rep.hypotheses) rep.applicable = rep.applicable && h.satisfied;
    return rep;
}

/// The invariant profile family: odd monotone transitions between the -1
/// and +1 plateaus, or the periodic analogue for inhibition-only kernels.
struct InvariantSetSpec {
    enum class Variant { WideGap, NarrowGap, Periodic };
    Variant variant = Variant::NarrowGap;
    double s = 0.0;  // Periodic: transition band width, period 4 + 2s
    double tolerance = 1e-6;

    static InvariantSetSpec wide_gap(double tol = 1e-6) {
        return {Variant::WideGap, 0.0, tol};
    }
    static InvariantSetSpec narrow_gap(double tol = 1e-6) {
        return {Variant::NarrowGap, 0.0, tol};
    }
    static InvariantSetSpec periodic(double s, double tol = 1e-6) {
        return {Variant::Periodic, s, tol};
    }

    double gap_edge() const { return variant == Variant::WideGap ? 2.0 : 1.0; }
    double period() const { return 4.0 + 2.0 * s; }
};

struct MembershipReport {
    bool member = false;
    double worst_violation = 0.0;
    std::vector<std::string> violations;
};

namespace detail {

inline void record(MembershipReport& rep, double violation, double tol, const std::string& what) {
    rep.worst_violation = std::max(rep.worst_violation, violation);
    if (violation > tol) rep.violations.push_back(what + " off by " + std::to_string(violation));
}

}  // namespace detail

/// Tests membership of a 1D field in the invariant family, reporting the
/// worst constraint violation. `extra_tolerance` widens every check; the
/// f(T) sweep uses it for the quadrature slack of the lattice sum.
inline MembershipReport set_membership(const Field& u, const InvariantSetSpec& spec,
                                       double extra_tolerance = 0.0) {
    if (u.grid.dimension() != 1)
        throw std::invalid_argument("set_membership: 1D fields only");
    MembershipReport rep;
    const double tol = spec.tolerance + extra_tolerance;
    const int n = u.grid.points_per_axis();
    const double dx = u.grid.spacing();

    if (spec.variant != InvariantSetSpec::Variant::Periodic) {
        for (int i = 0; i < n / 2; ++i)
            detail::record(rep, std::abs(u[i] + u[n - 1 - i]), tol, "oddness");
        for (int i = 0; i + 1 < n; ++i)
            detail::record(rep, u[i] - u[i + 1], tol, "monotonicity");
        const double edge = spec.gap_edge();
        for (int i = 0; i < n; ++i) {
            const double x = u.grid.coordinate(i);
            if (x > edge + 1e-12) detail::record(rep, std::abs(u[i] - 1.0), tol, "plateau +1");
            if (x < -edge - 1e-12) detail::record(rep, std::abs(u[i] + 1.0), tol, "plateau -1");
        }
        rep.member = rep.worst_violation <= tol;
        return rep;
    }

    // Periodic variant lives on the torus; the profile is anchored at 0.
    const double period = spec.period();
    const double torus = n * dx;
    const double cycles = torus / period;
    const long lag = std::lround(period / dx);
    if (std::abs(cycles - std::round(cycles)) > 1e-9 ||
        std::abs(lag * dx - period) > 1e-9 * period) {
        rep.violations.push_back("torus length is not a multiple of the period");
        rep.worst_violation = 1.0;
        return rep;
    }
    auto mod_coord = [&](int i) {
        const double x = u.grid.coordinate(i);
        double w = std::fmod(x, period);
        return w < 0.0 ? w + period : w;
    };
    auto interp_mod = [&](double w) {
        // Linear interpolation of u at torus mod-coordinate w.
        const double x0 = u.grid.coordinate(0);
        double off = std::fmod(w - x0, period);
        if (off < 0.0) off += period;
        // Scan cells of one period starting at index 0.
        const double pos = off / dx;
        const long i0 = static_cast<long>(std::floor(pos));
        const double frac = pos - i0;
        const double a = u[((i0 % n) + n) % n];
        const double b = u[(((i0 + 1) % n) + n) % n];
        return a + frac * (b - a);
    };

    for (int i = 0; i < n; ++i)
        detail::record(rep, std::abs(u[i] - u[(i + lag) % n]), tol, "periodicity");
    for (int i = 0; i < n; ++i) {
        const double w = mod_coord(i);
        if (w < 2.0 - 1e-12)
            detail::record(rep, std::abs(u[i] - 1.0), tol, "plateau +1");
        else if (w > 2.0 + spec.s + 1e-12 && w < 4.0 + spec.s - 1e-12)
            detail::record(rep, std::abs(u[i] + 1.0), tol, "plateau -1");
    }
    // Transition bands descend monotonically and are antisymmetric about
    // their midpoints. Mirror points are evaluated by interpolation, so a
    // lattice-resolution slack is included.
    const double islack = dx * 2.0 / std::max(spec.s, dx);
    for (int i = 0; i < n; ++i) {
        const double w = mod_coord(i);
        if (w > 2.0 + 1e-12 && w < 2.0 + spec.s - 1e-12) {
            const double next = interp_mod(w + dx <= 2.0 + spec.s ? w + dx : 2.0 + spec.s);
            detail::record(rep, (next - u[i]) - islack, tol, "transition monotonicity");
            const double mirrored = interp_mod(4.0 + spec.s - w);
            detail::record(rep, std::abs(u[i] + mirrored) - islack, tol,
                           "transition antisymmetry");
        }
    }
    rep.member = rep.worst_violation <= tol;
    return rep;
}

/// Draws a random member of the invariant family: a piecewise-linear odd
/// monotone transition profile built from sorted nonnegative increments,
/// sampled on the grid. Deterministic in (seed, sample_index).
inline Field random_set_member(const Grid& grid, const InvariantSetSpec& spec,
                               std::uint64_t seed, std::uint64_t sample_index = 0) {
    if (grid.dimension() != 1)
        throw std::invalid_argument("random_set_member: 1D grids only");
    CounterRng rng{seed ^ (0x9E3779B97F4A7C15ULL * (sample_index + 1))};

    constexpr int knots = 24;
    // Monotone profile g on [0, 1] with g(0) = 0 and g(1) = 1.
    double raw[knots + 1];
    double total = 0.0;
    for (int i = 0; i <= knots; ++i) {
        raw[i] = rng.uniform01(i) + 1e-3;
        total += raw[i];
    }
    double cum[knots + 2];
    cum[0] = 0.0;
    for (int i = 0; i <= knots; ++i) cum[i + 1] = cum[i] + raw[i] / total;
    auto g = [&](double z) {
        z = std::clamp(z, 0.0, 1.0);
        const double pos = z * (knots + 1);
        const int i0 = std::min(static_cast<int>(pos), knots);
        return cum[i0] + (pos - i0) * (cum[i0 + 1] - cum[i0]);
    };

    Field u(grid);
    if (spec.variant != InvariantSetSpec::Variant::Periodic) {
        const double edge = spec.gap_edge();
        for (int i = 0; i < grid.points_per_axis(); ++i) {
            const double x = grid.coordinate(i);
            if (x >= edge)
                u[i] = 1.0;
            else if (x <= -edge)
                u[i] = -1.0;
            else
                u[i] = x >= 0.0 ? g(x / edge) : -g(-x / edge);
        }
        return u;
    }

    const double period = spec.period();
    for (int i = 0; i < grid.points_per_axis(); ++i) {
        double w = std::fmod(grid.coordinate(i), period);
        if (w < 0.0) w += period;
        if (w <= 2.0)
            u[i] = 1.0;
        else if (w < 2.0 + spec.s) {
            // Descend from +1 to -1, antisymmetric about the band midpoint.
            const double z = (w - 2.0) / spec.s;
            u[i] = z <= 0.5 ? 1.0 - g(2.0 * z) : -(1.0 - g(2.0 * (1.0 - z)));
        } else if (w <= 4.0 + spec.s)
            u[i] = -1.0;
        else {
            const double z = (w - 4.0 - spec.s) / spec.s;
            u[i] = z <= 0.5 ? -(1.0 - g(2.0 * z)) : 1.0 - g(2.0 * (1.0 - z));
        }
    }
    return u;
}

struct InvarianceReport {
    enum class Status { Ok, HypothesisUnmet };
    Status status = Status::Ok;
    LemmaReport lemma_report;
    bool all_preserved = false;
    double worst_violation = 0.0;
    int failures = 0;
};

/// Matches the condition set to a profile family variant.
inline LemmaTag matching_lemma(const Kernel& kernel, const InvariantSetSpec& spec) {
    switch (spec.variant) {
        case InvariantSetSpec::Variant::WideGap: return LemmaTag::Positive1;
        case InvariantSetSpec::Variant::Periodic: return LemmaTag::Negative;
        default: {
            bool has_negative = false;
            for (double v : kernel.samples()) has_negative = has_negative || v < 0.0;
            if (!has_negative) return LemmaTag::Positive2;
            if (check_lemma_hypotheses(kernel, LemmaTag::SmallInhibition1).applicable)
                return LemmaTag::SmallInhibition1;
            return LemmaTag::SmallInhibition2;
        }
    }
}

/// Applies f(T) to random members of the family and re-tests membership.
/// Membership after the map is allowed the lattice quadrature slack
/// 2 dx ||K||_inf on top of the family tolerance. When the kernel fails its
/// condition set the sweep still runs but the status marks the result as
/// expected-unknown rather than a counterexample.
inline InvarianceReport verify_fT_invariance(const Kernel& kernel, const ResponseFunction& response,
                                             const InvariantSetSpec& spec, const Grid& grid,
                                             int n_samples, std::uint64_t seed) {
    InvarianceReport out;
    out.lemma_report = check_lemma_hypotheses(kernel, matching_lemma(kernel, spec));
    out.status = out.lemma_report.applicable ? InvarianceReport::Status::Ok
                                             : InvarianceReport::Status::HypothesisUnmet;
    const BoundaryMode boundary = spec.variant == InvariantSetSpec::Variant::Periodic
                                      ? BoundaryMode::Periodic
                                      : BoundaryMode::ZeroExtension;
    ConvolutionApplier op(kernel, grid, boundary);
    const double slack = 2.0 * grid.spacing() * kernel.max_abs_sample();

    out.all_preserved = true;
    for (int k = 0; k < n_samples; ++k) {
        Field u = random_set_member(grid, spec, seed, k);
        Field Tu = op.apply(u);
        for (auto& v : Tu.values) v = response(v);
        MembershipReport m = set_membership(Tu, spec, slack);
        out.worst_violation = std::max(out.worst_violation, m.worst_violation);
        if (!m.member) {
            out.all_preserved = false;
            ++out.failures;
        }
    }
    return out;
}

}  // namespace nonlocal
