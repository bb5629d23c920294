#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "nonlocal/fft.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal {

struct WavelengthResult {
    bool found = false;
    double wavelength = 0.0;
};

namespace detail {

// First near-maximal positive peak past the initial zero crossing of an
// autocorrelation sequence, refined by a parabolic fit. Harmonics repeat
// the fundamental, so among local maxima comparable to the global one
// the smallest lag wins.
inline WavelengthResult dominant_lag(const std::vector<double>& acf, double dx) {
    WavelengthResult out;
    std::size_t start = 0;
    for (std::size_t t = 1; t < acf.size(); ++t) {
        if (acf[t] <= 0.0) {
            start = t;
            break;
        }
    }
    if (start == 0) return out;  // never decorrelates: no stripe structure
    double best = 0.0;
    for (std::size_t t = start; t + 1 < acf.size(); ++t) best = std::max(best, acf[t]);
    if (best <= 0.0) return out;
    std::size_t peak = 0;
    for (std::size_t t = start; t + 1 < acf.size(); ++t) {
        if (acf[t] >= acf[t - 1] && acf[t] >= acf[t + 1] && acf[t] >= 0.85 * best) {
            peak = t;
            break;
        }
    }
    if (peak == 0) return out;
    double shift = 0.0;
    const double denom = acf[peak - 1] - 2.0 * acf[peak] + acf[peak + 1];
    if (denom < 0.0) shift = 0.5 * (acf[peak - 1] - acf[peak + 1]) / denom;
    out.found = true;
    out.wavelength = (static_cast<double>(peak) + shift) * dx;
    return out;
}

inline bool nearly_constant(const Field& u) {
    double lo = u[0], hi = u[0];
    for (double v : u.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo <= 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
}

}  // namespace detail

/// Dominant spatial period of a pattern, in length units.
///
/// 1D: the first near-maximal peak of the (unbiased) autocorrelation.
/// 2D: the autocorrelation is averaged over orientations, which would
///     shift its first ring outward (the ring-spectrum kernel is a
///     Bessel function, whose first side lobe sits past one period), so
///     the period is read off in the spectral representation instead:
///     the peak of the radially averaged power spectrum, i.e. of the
///     transformed autocorrelation.
///
/// Near-constant fields report no peak.
inline WavelengthResult stripe_wavelength(const Field& u) {
    if (detail::nearly_constant(u)) return {};
    const int n = u.grid.points_per_axis();
    const double dx = u.grid.spacing();

    double mean = 0.0;
    for (double v : u.values) mean += v;
    mean /= static_cast<double>(u.size());

    if (u.grid.dimension() == 1) {
        std::vector<double> acf(n / 2, 0.0);
        for (std::size_t t = 0; t < acf.size(); ++t) {
            double s = 0.0;
            for (int i = 0; i + static_cast<int>(t) < n; ++i)
                s += (u[i] - mean) * (u[i + t] - mean);
            acf[t] = s / static_cast<double>(n - t);  // unbiased overlap
        }
        return detail::dominant_lag(acf, dx);
    }

    const std::size_t pad = detail::next_pow2(static_cast<std::size_t>(2 * n));
    std::vector<std::complex<double>> a(pad * pad, {0.0, 0.0});
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            a[static_cast<std::size_t>(iy) * pad + ix] = u[u.grid.flat_index(ix, iy)] - mean;

    std::vector<std::complex<double>> line(pad);
    auto rows_then_cols = [&](std::vector<std::complex<double>>& v) {
        for (std::size_t r = 0; r < pad; ++r) {
            std::copy(v.begin() + r * pad, v.begin() + (r + 1) * pad, line.begin());
            detail::fft_pow2(line, false);
            std::copy(line.begin(), line.end(), v.begin() + r * pad);
        }
        for (std::size_t c = 0; c < pad; ++c) {
            for (std::size_t r = 0; r < pad; ++r) line[r] = v[r * pad + c];
            detail::fft_pow2(line, false);
            for (std::size_t r = 0; r < pad; ++r) v[r * pad + c] = line[r];
        }
    };
    rows_then_cols(a);

    // Radially averaged power spectrum over integer frequency bins.
    const std::size_t half = pad / 2;
    std::vector<double> radial(half, 0.0);
    std::vector<double> weight(half, 0.0);
    for (std::size_t iy = 0; iy < pad; ++iy) {
        const double fy = iy <= half ? static_cast<double>(iy) : static_cast<double>(iy) - pad;
        for (std::size_t ix = 0; ix < pad; ++ix) {
            const double fx = ix <= half ? static_cast<double>(ix) : static_cast<double>(ix) - pad;
            const std::size_t bin = static_cast<std::size_t>(std::lround(std::hypot(fx, fy)));
            if (bin == 0 || bin >= half) continue;
            radial[bin] += std::norm(a[iy * pad + ix]);
            weight[bin] += 1.0;
        }
    }
    for (std::size_t b = 1; b < half; ++b)
        if (weight[b] > 0.0) radial[b] /= weight[b];

    std::size_t peak = 0;
    for (std::size_t b = 1; b < half; ++b)
        if (radial[b] > radial[peak]) peak = b;
    if (peak == 0 || radial[peak] <= 0.0) return {};
    double shift = 0.0;
    if (peak + 1 < half && peak >= 2) {
        const double denom = radial[peak - 1] - 2.0 * radial[peak] + radial[peak + 1];
        if (denom < 0.0) shift = 0.5 * (radial[peak - 1] - radial[peak + 1]) / denom;
    }
    WavelengthResult out;
    out.found = true;
    const double freq = (static_cast<double>(peak) + shift) / (static_cast<double>(pad) * dx);
    out.wavelength = 1.0 / freq;
    return out;
}

}  // namespace nonlocal
