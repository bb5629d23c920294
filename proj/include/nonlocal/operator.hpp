#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nonlocal/config.hpp"
#include "nonlocal/fft.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"
#include "nonlocal/parallel.hpp"

namespace nonlocal {

enum class ApplyPath { Auto, Direct, Fast };

namespace detail {

inline void require_aligned(const Kernel& kernel, const Grid& grid) {
    if (kernel.dimension() != grid.dimension())
        throw std::invalid_argument("operator: kernel and grid dimensions differ");
    if (std::abs(kernel.spacing() - grid.spacing()) > 1e-12 * std::max(1.0, grid.spacing()))
        throw std::invalid_argument("operator: kernel spacing must equal grid spacing");
}

}  // namespace detail

/// The truncated convolution T: zero-extend the field outside the domain,
/// convolve with the kernel, restrict back to the domain. The lattice sum
/// carries the quadrature weight dx^dimension.
///
/// An applier is built once per (kernel, grid, boundary) and reused; the
/// fast path caches the padded kernel spectrum. Direct summation runs in
/// a fixed per-point tap order, so results are identical for any worker
/// count; it is also the reference the fast path is tested against.
class ConvolutionApplier {
public:
    ConvolutionApplier(Kernel kernel, Grid grid,
                       BoundaryMode boundary = BoundaryMode::ZeroExtension,
                       ApplyPath path = ApplyPath::Auto)
        : kernel_(std::move(kernel)), grid_(std::move(grid)), boundary_(boundary) {
        detail::require_aligned(kernel_, grid_);
        const int m = kernel_.half_taps();
        const double taps = std::pow(2.0 * m + 1.0, grid_.dimension());
        use_fast_ = path == ApplyPath::Fast ||
                    (path == ApplyPath::Auto && taps >= 1000.0 &&
                     boundary_ == BoundaryMode::ZeroExtension);
        if (use_fast_ && boundary_ != BoundaryMode::ZeroExtension)
            throw std::invalid_argument("fast path supports zero extension only");
        if (use_fast_) prepare_fast();
    }

    const Kernel& kernel() const { return kernel_; }
    const Grid& grid() const { return grid_; }
    bool fast() const { return use_fast_; }

    Field apply(const Field& u) const {
        if (u.grid != grid_) throw std::invalid_argument("apply: field grid mismatch");
        return use_fast_ ? apply_fast(u) : apply_direct(u);
    }

    Field apply_direct(const Field& u) const {
        Field out(grid_);
        const int n = grid_.points_per_axis();
        const int m = kernel_.half_taps();
        const double w = grid_.cell_volume();
        if (grid_.dimension() == 1) {
            parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t ii) {
                const int i = static_cast<int>(ii);
                double acc = 0.0;
                if (boundary_ == BoundaryMode::ZeroExtension) {
                    const int t_lo = std::max(-m, i - (n - 1));
                    const int t_hi = std::min(m, i);
                    for (int t = t_lo; t <= t_hi; ++t) acc += kernel_.at(t) * u[i - t];
                } else {
                    for (int t = -m; t <= m; ++t) acc += kernel_.at(t) * u[wrap(i - t, n)];
                }
                out[ii] = acc * w;
            });
        } else {
            parallel_for(0, static_cast<std::size_t>(n) * n, [&](std::size_t idx) {
                const int iy = static_cast<int>(idx) / n;
                const int ix = static_cast<int>(idx) % n;
                double acc = 0.0;
                if (boundary_ == BoundaryMode::ZeroExtension) {
                    const int ty_lo = std::max(-m, iy - (n - 1));
                    const int ty_hi = std::min(m, iy);
                    for (int ty = ty_lo; ty <= ty_hi; ++ty) {
                        const std::size_t row = grid_.flat_index(0, iy - ty);
                        const int tx_lo = std::max(-m, ix - (n - 1));
                        const int tx_hi = std::min(m, ix);
                        for (int tx = tx_lo; tx <= tx_hi; ++tx)
                            acc += kernel_.at(tx, ty) * u[row + (ix - tx)];
                    }
                } else {
                    for (int ty = -m; ty <= m; ++ty) {
                        const std::size_t row = grid_.flat_index(0, wrap(iy - ty, n));
                        for (int tx = -m; tx <= m; ++tx)
                            acc += kernel_.at(tx, ty) * u[row + wrap(ix - tx, n)];
                    }
                }
                out[idx] = acc * w;
            });
        }
        return out;
    }

private:
    static int wrap(int i, int n) {
        i %= n;
        return i < 0 ? i + n : i;
    }

    void prepare_fast() {
        const int n = grid_.points_per_axis();
        const int m = kernel_.half_taps();
        pad_ = detail::next_pow2(static_cast<std::size_t>(n) + 2 * m);
        if (grid_.dimension() == 1) {
            khat_.assign(pad_, {0.0, 0.0});
            for (int t = -m; t <= m; ++t)
                khat_[(t + static_cast<int>(pad_)) % pad_] = kernel_.at(t);
            detail::fft_pow2(khat_, false);
        } else {
            khat_.assign(pad_ * pad_, {0.0, 0.0});
            for (int ty = -m; ty <= m; ++ty) {
                const std::size_t row =
                    static_cast<std::size_t>((ty + static_cast<int>(pad_)) % pad_) * pad_;
                for (int tx = -m; tx <= m; ++tx)
                    khat_[row + (tx + static_cast<int>(pad_)) % pad_] = kernel_.at(tx, ty);
            }
            fft2(khat_, false);
        }
    }

    void fft2(std::vector<std::complex<double>>& a, bool inverse) const {
        std::vector<std::complex<double>> line(pad_);
        for (std::size_t r = 0; r < pad_; ++r) {
            std::copy(a.begin() + r * pad_, a.begin() + (r + 1) * pad_, line.begin());
            detail::fft_pow2(line, inverse);
            std::copy(line.begin(), line.end(), a.begin() + r * pad_);
        }
        for (std::size_t c = 0; c < pad_; ++c) {
            for (std::size_t r = 0; r < pad_; ++r) line[r] = a[r * pad_ + c];
            detail::fft_pow2(line, inverse);
            for (std::size_t r = 0; r < pad_; ++r) a[r * pad_ + c] = line[r];
        }
    }

    Field apply_fast(const Field& u) const {
        const int n = grid_.points_per_axis();
        const double w = grid_.cell_volume();
        Field out(grid_);
        if (grid_.dimension() == 1) {
            std::vector<std::complex<double>> uhat(pad_, {0.0, 0.0});
            for (int i = 0; i < n; ++i) uhat[i] = u[i];
            detail::fft_pow2(uhat, false);
            for (std::size_t i = 0; i < pad_; ++i) uhat[i] *= khat_[i];
            detail::fft_pow2(uhat, true);
            for (int i = 0; i < n; ++i) out[i] = uhat[i].real() * w;
        } else {
            std::vector<std::complex<double>> uhat(pad_ * pad_, {0.0, 0.0});
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    uhat[static_cast<std::size_t>(iy) * pad_ + ix] = u[grid_.flat_index(ix, iy)];
            fft2(uhat, false);
            for (std::size_t i = 0; i < uhat.size(); ++i) uhat[i] *= khat_[i];
            fft2(uhat, true);
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    out[grid_.flat_index(ix, iy)] =
                        uhat[static_cast<std::size_t>(iy) * pad_ + ix].real() * w;
        }
        return out;
    }

    Kernel kernel_;
    Grid grid_;
    BoundaryMode boundary_;
    bool use_fast_ = false;
    std::size_t pad_ = 0;
    std::vector<std::complex<double>> khat_;
};

/// One-shot application of T.
inline Field apply_T(const Kernel& kernel, const Field& u,
                     BoundaryMode boundary = BoundaryMode::ZeroExtension,
                     ApplyPath path = ApplyPath::Auto) {
    return ConvolutionApplier(kernel, u.grid, boundary, path).apply(u);
}

/// Dense matrix of the discretized operator, H(x_i, x_j) = K(x_i - x_j)
/// with the quadrature weight baked in. Materialized only for spectral
/// and Newton work; time stepping applies the convolution directly.
struct OperatorMatrix {
    Grid grid;
    Eigen::MatrixXd entries;

    Field apply(const Field& u) const {
        if (u.grid != grid) throw std::invalid_argument("matrix apply: grid mismatch");
        Eigen::Map<const Eigen::VectorXd> x(u.values.data(), u.values.size());
        Eigen::VectorXd y = entries * x;
        Field out(grid);
        Eigen::VectorXd::Map(out.values.data(), out.values.size()) = y;
        return out;
    }
};

inline OperatorMatrix build_operator_matrix(const Kernel& kernel, const Grid& grid,
                                            BoundaryMode boundary = BoundaryMode::ZeroExtension,
                                            std::size_t point_cap = 20000) {
    detail::require_aligned(kernel, grid);
    const std::size_t N = grid.size();
    if (N > point_cap)
        throw std::length_error("operator matrix: " + std::to_string(N) +
                                " points exceed the cap of " + std::to_string(point_cap));
    const int n = grid.points_per_axis();
    const int m = kernel.half_taps();
    if (boundary == BoundaryMode::Periodic && m > n)
        throw std::invalid_argument("operator matrix: kernel wraps the torus more than once");
    const double w = grid.cell_volume();
    OperatorMatrix M{grid, Eigen::MatrixXd::Zero(N, N)};

    // Offset value along one axis, including torus wrap when periodic.
    auto tap = [&](int d, auto&& value) -> double {
        double acc = 0.0;
        if (boundary == BoundaryMode::ZeroExtension) {
            if (std::abs(d) <= m) acc = value(d);
        } else {
            for (int t : {d, d - n, d + n})
                if (std::abs(t) <= m) acc += value(t);
        }
        return acc;
    };

    if (grid.dimension() == 1) {
        parallel_for(0, N, [&](std::size_t i) {
            for (std::size_t j = 0; j < N; ++j) {
                const int d = static_cast<int>(i) - static_cast<int>(j);
                M.entries(i, j) = w * tap(d, [&](int t) { return kernel.at(t); });
            }
        });
    } else {
        parallel_for(0, N, [&](std::size_t i) {
            const int iy = static_cast<int>(i) / n, ix = static_cast<int>(i) % n;
            for (std::size_t j = 0; j < N; ++j) {
                const int jy = static_cast<int>(j) / n, jx = static_cast<int>(j) % n;
                const double v = tap(ix - jx, [&](int tx) {
                    return tap(iy - jy, [&](int ty) { return kernel.at(tx, ty); });
                });
                M.entries(i, j) = w * v;
            }
        });
    }
    return M;
}

struct LinftyBoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Checks ||T u||_inf <= ||K||_2 ||u||_2 with the discrete norms.
inline LinftyBoundCheck verify_Linfty_bound(const Kernel& kernel, const Field& u) {
    LinftyBoundCheck r;
    r.lhs = max_abs(apply_T(kernel, u));
    r.rhs = kernel.l2_norm() * l2_norm(u);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-10);
    return r;
}

}  // namespace nonlocal
