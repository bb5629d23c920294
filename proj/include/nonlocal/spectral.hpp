#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nonlocal/grid.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/rng.hpp"

namespace nonlocal {

/// Eigenpairs of the discretized operator.
///
/// Retained modes are ordered by eigenvalue, descending; eigenfields are
/// orthonormal under the weighted inner product sum(e_i e_j) dx^d.
/// lambda_max / lambda_min record the extremes of the full decomposition
/// even when only part of the spectrum is retained.
struct Spectrum {
    Grid grid;
    std::vector<double> eigenvalues;
    std::vector<Field> eigenfields;
    double lambda_max = 0.0;
    double lambda_min = 0.0;

    std::size_t modes() const { return eigenvalues.size(); }
};

/// Dense symmetric eigendecomposition, keeping the k modes of largest
/// magnitude (k <= 0 keeps everything).
///
/// Degenerate clusters are ordered deterministically: each eigenfield has
/// its first significant component made positive, and ties are broken by
/// lexicographic comparison of the field values.
inline Spectrum eigendecompose(const OperatorMatrix& matrix, int k = 0) {
    const std::size_t N = matrix.grid.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix.entries);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: solver failed to converge");

    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
    Spectrum spec{matrix.grid, {}, {}, ev(N - 1), ev(0)};

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    if (k > 0 && static_cast<std::size_t>(k) < N) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(ev(a)) > std::abs(ev(b));
        });
        order.resize(k);
    }

    const double scale = 1.0 / std::sqrt(matrix.grid.cell_volume());
    std::vector<std::pair<double, Field>> modes;
    modes.reserve(order.size());
    for (std::size_t idx : order) {
        Field e(matrix.grid);
        double lead = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            e[i] = es.eigenvectors()(i, idx) * scale;
            lead = std::max(lead, std::abs(e[i]));
        }
        for (std::size_t i = 0; i < N; ++i) {
            if (std::abs(e[i]) > 1e-12 * lead) {
                if (e[i] < 0.0)
                    for (auto& v : e.values) v = -v;
                break;
            }
        }
        modes.emplace_back(ev(idx), std::move(e));
    }

    std::stable_sort(modes.begin(), modes.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    // Order degenerate clusters lexicographically; within a cluster the
    // comparison is exact, so the ordering stays a strict weak one.
    const double tie =
        1e-12 * (std::max(std::abs(spec.lambda_max), std::abs(spec.lambda_min)) + 1.0);
    for (std::size_t lo = 0; lo < modes.size();) {
        std::size_t hi = lo + 1;
        while (hi < modes.size() && modes[lo].first - modes[hi].first <= tie) ++hi;
        std::sort(modes.begin() + lo, modes.begin() + hi, [](const auto& a, const auto& b) {
            return std::lexicographical_compare(a.second.values.begin(), a.second.values.end(),
                                                b.second.values.begin(), b.second.values.end());
        });
        lo = hi;
    }

    for (auto& [lam, e] : modes) {
        spec.eigenvalues.push_back(lam);
        spec.eigenfields.push_back(std::move(e));
    }
    return spec;
}

/// Worst eigenpair residual ||T e_j - lambda_j e_j||_2 over retained modes.
inline double max_eigen_residual(const Spectrum& spec, const OperatorMatrix& matrix) {
    double worst = 0.0;
    for (std::size_t j = 0; j < spec.modes(); ++j) {
        Field r = matrix.apply(spec.eigenfields[j]);
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] -= spec.eigenvalues[j] * spec.eigenfields[j][i];
        worst = std::max(worst, l2_norm(r));
    }
    return worst;
}

/// Threshold coefficient a / lambda_max; every mode decays for b below it.
inline double b_critical(const Spectrum& spec, double a = 1.0) {
    if (!(spec.lambda_max > 0.0))
        throw std::domain_error("b_critical: spectrum has no positive eigenvalue");
    return a / spec.lambda_max;
}

/// Coefficients of the field in the retained eigenbasis.
inline std::vector<double> project_onto_modes(const Field& field, const Spectrum& spec) {
    if (field.grid != spec.grid)
        throw std::invalid_argument("project_onto_modes: grid mismatch");
    std::vector<double> coeff(spec.modes());
    for (std::size_t j = 0; j < spec.modes(); ++j)
        coeff[j] = inner_product(field, spec.eigenfields[j]);
    return coeff;
}

inline Field reconstruct(const std::vector<double>& coeff, const Spectrum& spec) {
    if (coeff.size() > spec.modes())
        throw std::invalid_argument("reconstruct: more coefficients than retained modes");
    Field out(spec.grid);
    for (std::size_t j = 0; j < coeff.size(); ++j)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += coeff[j] * spec.eigenfields[j][i];
    return out;
}

/// 1-based indices j with |a/b - lambda_j| <= tol * |lambda_1|; an empty
/// result means only the trivial stationary solution exists.
inline std::vector<int> linear_stationary_existence(double a, double b, const Spectrum& spec,
                                                    double tol = 1e-6) {
    if (b == 0.0) throw std::invalid_argument("linear_stationary_existence: b must be nonzero");
    const double target = a / b;
    const double window = tol * (spec.modes() ? std::abs(spec.eigenvalues.front()) : 0.0);
    std::vector<int> hits;
    for (std::size_t j = 0; j < spec.modes(); ++j)
        if (std::abs(target - spec.eigenvalues[j]) <= window)
            hits.push_back(static_cast<int>(j) + 1);
    return hits;
}

/// Largest (signed) eigenvalue of T, matrix-free. A plain power iteration
/// finds the dominant magnitude; if that mode is negative, a second pass
/// on the shifted operator recovers the top of the spectrum. Suited to
/// grids too large to materialize.
inline double dominant_eigenvalue(const Kernel& kernel, const Grid& grid,
                                  BoundaryMode boundary = BoundaryMode::ZeroExtension,
                                  int max_iters = 600, double tol = 1e-10) {
    ConvolutionApplier op(kernel, grid, boundary);
    CounterRng rng{0x5eedULL};
    Field v(grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.symmetric(i, 1.0);

    auto normalize = [](Field& f) {
        const double nrm = l2_norm(f);
        if (nrm > 0.0)
            for (auto& x : f.values) x /= nrm;
    };
    auto iterate = [&](double shift) {
        normalize(v);
        double rayleigh = 0.0;
        for (int it = 0; it < max_iters; ++it) {
            Field w = op.apply(v);
            if (shift != 0.0)
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += shift * v[i];
            const double r = inner_product(v, w);
            v = std::move(w);
            normalize(v);
            if (it > 2 && std::abs(r - rayleigh) <= tol * (std::abs(r) + 1.0)) {
                rayleigh = r;
                break;
            }
            rayleigh = r;
        }
        return rayleigh - shift;
    };

    const double mu = iterate(0.0);
    if (mu >= 0.0) return mu;
    // Dominant magnitude is negative; shift past it and rerun.
    const double shift = 1.0625 * std::abs(mu);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.symmetric(v.size() + i, 1.0);
    return iterate(shift);
}

}  // namespace nonlocal
