#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ssns/grid.hpp"

namespace ssns::fourier {

using Coeffs = std::vector<std::complex<double>>;

/// Unnormalized real-to-complex DFT of one scalar array (half spectrum, FFTW layout).
Coeffs forward(const Grid& grid, std::span<const double> values);

/// Inverse of `forward`, including the 1/n^3 normalization.
std::vector<double> inverse(const Grid& grid, const Coeffs& coeffs);

/// Calls f(flat_index, k1, k2, k3) for every stored half-spectrum coefficient.
template <class F>
void for_each_mode(const Grid& grid, F&& f) {
    const int n = grid.n();
    const int half = n / 2 + 1;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        const int k1 = grid.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = grid.wavenumber(j);
            for (int k = 0; k < half; ++k, ++idx) {
                f(idx, k1, k2, k);
            }
        }
    }
}

/// Zeroes every coefficient outside the symmetric dealiasing band.
void dealias(const Grid& grid, Coeffs& coeffs);

/// Applies the isotropic multiplier m(|xi|^2) with xi = k / L (no Nyquist special-casing).
template <class M>
void apply_radial_multiplier(const Grid& grid, Coeffs& coeffs, M&& multiplier) {
    const double inv_l2 = 1.0 / (grid.box_side() * grid.box_side());
    for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 = (double(k1) * k1 + double(k2) * k2 + double(k3) * k3) * inv_l2;
        coeffs[idx] *= multiplier(xi2);
    });
}

}  // namespace ssns::fourier
