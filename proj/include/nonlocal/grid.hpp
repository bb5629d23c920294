#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nonlocal {

/// Uniform lattice over the square domain [-extent, extent]^dimension.
///
/// Coordinates are evaluated in centered form, x_i = (i - (n-1)/2) * dx,
/// which keeps the lattice exactly symmetric about the origin and makes
/// index reflection i -> n-1-i an exact sign flip of the coordinate.
class Grid {
public:
    Grid(int dimension, double extent, int points_per_axis)
        : dimension_(dimension), extent_(extent), points_(points_per_axis) {
        if (dimension != 1 && dimension != 2)
            throw std::invalid_argument("Grid: dimension must be 1 or 2");
        if (points_per_axis < 3)
            throw std::invalid_argument("Grid: need at least 3 points per axis");
        if (!(extent > 0.0))
            throw std::invalid_argument("Grid: extent must be positive");
        spacing_ = 2.0 * extent / static_cast<double>(points_per_axis - 1);
    }

    int dimension() const { return dimension_; }
    double extent() const { return extent_; }
    int points_per_axis() const { return points_; }
    double spacing() const { return spacing_; }

    /// Total number of lattice points (n in 1D, n^2 in 2D).
    std::size_t size() const {
        std::size_t n = static_cast<std::size_t>(points_);
        return dimension_ == 1 ? n : n * n;
    }

    /// Coordinate of index i along one axis.
    double coordinate(int i) const {
        return (static_cast<double>(i) - 0.5 * (points_ - 1)) * spacing_;
    }

    /// Nearest axis index of a coordinate.
    int index_of(double x) const {
        return static_cast<int>(std::lround(x / spacing_ + 0.5 * (points_ - 1)));
    }

    /// Flat index of the 2D lattice point (ix, iy); row-major, x fastest.
    std::size_t flat_index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * points_ + ix;
    }

    /// Quadrature weight of one cell, dx^dimension.
    double cell_volume() const {
        return dimension_ == 1 ? spacing_ : spacing_ * spacing_;
    }

    bool operator==(const Grid& o) const {
        return dimension_ == o.dimension_ && extent_ == o.extent_ && points_ == o.points_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int dimension_;
    double extent_;
    int points_;
    double spacing_;
};

inline Grid make_grid(int dimension, double extent, int points_per_axis) {
    return Grid(dimension, extent, points_per_axis);
}

/// Real-valued function sampled on a Grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != g.size())
            throw std::invalid_argument("Field: value count does not match grid");
    }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Discrete inner product with quadrature weight dx^dimension.
inline double inner_product(const Field& a, const Field& b) {
    if (a.grid != b.grid)
        throw std::invalid_argument("inner_product: fields live on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.grid.cell_volume();
}

/// Weighted L2 norm, sqrt(sum v^2 dx^d).
inline double l2_norm(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.cell_volume());
}

}  // namespace nonlocal
