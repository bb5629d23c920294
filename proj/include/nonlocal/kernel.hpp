#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonlocal {

/// One radial band of a piecewise-constant kernel profile:
/// amplitude on lo <= |x| <= hi, zero elsewhere.
struct Band {
    double lo = 0.0;
    double hi = 0.0;
    double amplitude = 0.0;
};

/// Built-in kernel families.
///
/// K1, K2: activation disc at the origin, inhibition ring outside
///         (K2 with a dominant activation mass).
/// K3:     activation ring away from the origin, inhibition ring outside.
/// K4:     in 1D an inhibition ring with no activation; in 2D an
///         inhibition disc at the origin with a weak activation ring.
/// K5:     inhibition ring away from the origin, nothing else.
enum class KernelFamily { K1, K2, K3, K4, K5, Custom };

inline std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::K1: return "K1";
        case KernelFamily::K2: return "K2";
        case KernelFamily::K3: return "K3";
        case KernelFamily::K4: return "K4";
        case KernelFamily::K5: return "K5";
        default: return "custom";
    }
}

inline KernelFamily family_from_name(const std::string& s) {
    if (s == "K1" || s == "k1") return KernelFamily::K1;
    if (s == "K2" || s == "k2") return KernelFamily::K2;
    if (s == "K3" || s == "k3") return KernelFamily::K3;
    if (s == "K4" || s == "k4") return KernelFamily::K4;
    if (s == "K5" || s == "k5") return KernelFamily::K5;
    if (s == "custom") return KernelFamily::Custom;
    throw std::invalid_argument("unknown kernel family: " + s);
}

/// Band-edge parameters of the built-in families. A and B are the
/// activation and inhibition magnitudes; p, q, m are radial band edges
/// with 0 <= p <= q <= m.
struct KernelParams {
    double A = 1.0;
    double B = 0.0;
    double p = 0.0;
    double q = 0.0;
    double m = 0.0;
};

/// Compactly supported even kernel sampled on a lattice of offsets
/// k_i = i * spacing (tensor square of that lattice in 2D, with the
/// value taken from the radial profile).
///
/// Samples at a jump of the piecewise-constant profile take the mean of
/// the two one-sided limits, which makes the lattice sum an exact
/// trapezoid quadrature whenever the band edges land on lattice points.
class Kernel {
public:
    Kernel(std::vector<Band> bands, double spacing, int dimension,
           KernelFamily family, double negative_band_width)
        : bands_(std::move(bands)),
          spacing_(spacing),
          dimension_(dimension),
          family_(family),
          s_(negative_band_width) {
        if (dimension != 1 && dimension != 2)
            throw std::invalid_argument("Kernel: dimension must be 1 or 2");
        if (!(spacing > 0.0))
            throw std::invalid_argument("Kernel: spacing must be positive");
        support_ = 0.0;
        for (const Band& b : bands_) {
            if (b.lo < 0.0 || b.hi < b.lo)
                throw std::invalid_argument("Kernel: malformed band");
            support_ = std::max(support_, b.hi);
        }
        if (!(support_ > 0.0))
            throw std::invalid_argument("Kernel: support half-width must be positive");
        half_taps_ = static_cast<int>(std::floor(support_ / spacing_ + 1e-9));
        const int w = 2 * half_taps_ + 1;
        if (dimension_ == 1) {
            samples_.resize(w);
            for (int i = -half_taps_; i <= half_taps_; ++i)
                samples_[i + half_taps_] = profile(std::abs(i) * spacing_);
        } else {
            samples_.resize(static_cast<std::size_t>(w) * w);
            for (int j = -half_taps_; j <= half_taps_; ++j)
                for (int i = -half_taps_; i <= half_taps_; ++i)
                    samples_[flat(i, j)] = profile(spacing_ * std::hypot(double(i), double(j)));
        }
    }

    int dimension() const { return dimension_; }
    double spacing() const { return spacing_; }
    int half_taps() const { return half_taps_; }
    double support_half_width() const { return support_; }
    KernelFamily family() const { return family_; }
    /// Width of the negative-part support band (0 when there is none).
    double negative_band_width() const { return s_; }
    const std::vector<Band>& bands() const { return bands_; }
    const std::vector<double>& samples() const { return samples_; }

    /// Sample at offset index i in [-half_taps, half_taps] (1D).
    double at(int i) const { return samples_[i + half_taps_]; }
    /// Sample at offset indices (i, j) (2D).
    double at(int i, int j) const { return samples_[flat(i, j)]; }

    /// Radial profile value with the jump-midpoint convention.
    double profile(double r) const {
        double v = 0.0;
        for (const Band& b : bands_) {
            const double eps = 1e-9 * std::max(1.0, support_);
            if (r > b.lo + eps && r < b.hi - eps) {
                v += b.amplitude;
            } else if (std::abs(r - b.hi) <= eps) {
                v += 0.5 * b.amplitude;
            } else if (b.lo > eps && std::abs(r - b.lo) <= eps) {
                v += 0.5 * b.amplitude;
            } else if (b.lo <= eps && r <= b.lo + eps) {
                // A band touching the origin covers it through evenness.
                v += b.amplitude;
            }
        }
        return v;
    }

    double max_abs_sample() const {
        double m = 0.0;
        for (double v : samples_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Discrete L1 mass, sum |K| dx^d.
    double l1_norm() const {
        double s = 0.0;
        for (double v : samples_) s += std::abs(v);
        return s * cell_volume();
    }

    /// Discrete L2 norm, sqrt(sum K^2 dx^d).
    double l2_norm() const {
        double s = 0.0;
        for (double v : samples_) s += v * v;
        return std::sqrt(s * cell_volume());
    }

    double cell_volume() const {
        return dimension_ == 1 ? spacing_ : spacing_ * spacing_;
    }

private:
    std::size_t flat(int i, int j) const {
        const int w = 2 * half_taps_ + 1;
        return static_cast<std::size_t>(j + half_taps_) * w + (i + half_taps_);
    }

    std::vector<Band> bands_;
    double spacing_;
    int dimension_;
    KernelFamily family_;
    double s_;
    double support_;
    int half_taps_;
    std::vector<double> samples_;
};

namespace detail {

inline void require_band_order(double p, double q, double m, const char* fam) {
    if (!(0.0 <= p && p <= q && (m == 0.0 || q <= m)))
        throw std::invalid_argument(std::string("sample_kernel: band edges of ") + fam +
                                    " must satisfy 0 <= p <= q <= m");
}

inline std::vector<Band> family_bands(KernelFamily family, const KernelParams& prm,
                                      int dimension, double* s_out) {
    std::vector<Band> bands;
    double s = 0.0;
    switch (family) {
        case KernelFamily::K1:
        case KernelFamily::K2:
            require_band_order(prm.p, prm.q, 0.0, "K1/K2");
            if (prm.p > 0.0) bands.push_back({0.0, prm.p, prm.A});
            if (prm.q > prm.p && prm.B != 0.0) bands.push_back({prm.p, prm.q, -prm.B});
            s = prm.B != 0.0 ? prm.q - prm.p : 0.0;
            break;
        case KernelFamily::K3:
            require_band_order(prm.p, prm.q, prm.m, "K3");
            bands.push_back({prm.p, prm.q, prm.A});
            if (prm.m > prm.q && prm.B != 0.0) bands.push_back({prm.q, prm.m, -prm.B});
            s = prm.B != 0.0 ? prm.m - prm.q : 0.0;
            break;
        case KernelFamily::K4:
            require_band_order(prm.p, prm.q, 0.0, "K4");
            if (dimension == 2) {
                bands.push_back({0.0, prm.p, -prm.B});
                if (prm.q > prm.p && prm.A != 0.0) bands.push_back({prm.p, prm.q, prm.A});
                s = prm.p;
            } else {
                bands.push_back({prm.p, prm.q, -prm.B});
                s = prm.q - prm.p;
            }
            break;
        case KernelFamily::K5:
            require_band_order(prm.p, prm.q, 0.0, "K5");
            bands.push_back({prm.p, prm.q, -prm.B});
            s = prm.q - prm.p;
            break;
        case KernelFamily::Custom:
            throw std::invalid_argument("sample_kernel: custom kernels take explicit bands");
    }
    if (s_out) *s_out = s;
    return bands;
}

}  // namespace detail

/// Sample a built-in family on the offset lattice of the target grid.
inline Kernel sample_kernel(KernelFamily family, const KernelParams& params,
                            double grid_spacing, int dimension = 1) {
    double s = 0.0;
    auto bands = detail::family_bands(family, params, dimension, &s);
    return Kernel(std::move(bands), grid_spacing, dimension, family, s);
}

/// Sample an explicit band list (the custom-family extension point).
inline Kernel sample_custom_kernel(std::vector<Band> bands, double grid_spacing,
                                   int dimension = 1, double negative_band_width = 0.0) {
    return Kernel(std::move(bands), grid_spacing, dimension, KernelFamily::Custom,
                  negative_band_width);
}

/// Lattice-sum integral, sum of samples times dx^dimension.
inline double kernel_integral(const Kernel& k) {
    double s = 0.0;
    for (double v : k.samples()) s += v;
    return s * k.cell_volume();
}

namespace detail {

inline Kernel clamp_samples(const Kernel& k, bool positive) {
    std::vector<Band> bands;
    for (const Band& b : k.bands()) {
        if (positive && b.amplitude > 0.0) bands.push_back(b);
        if (!positive && b.amplitude < 0.0) bands.push_back({b.lo, b.hi, -b.amplitude});
    }
    // Keep the parent support so the tap lattices of K, K+ and K- align.
    bands.push_back({0.0, k.support_half_width(), 0.0});
    Kernel part(std::move(bands), k.spacing(), k.dimension(), KernelFamily::Custom,
                positive ? 0.0 : k.negative_band_width());
    return part;
}

}  // namespace detail

/// Positive part K+ split sample-wise, so K = K+ - K- holds at every sample.
inline Kernel kernel_positive_part(const Kernel& k) {
    return detail::clamp_samples(k, true);
}

/// Negative part K- (stored with positive sign) split sample-wise.
inline Kernel kernel_negative_part(const Kernel& k) {
    return detail::clamp_samples(k, false);
}

}  // namespace nonlocal
