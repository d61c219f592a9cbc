#include "ssns/field_ops.hpp"

#include <cmath>
#include <complex>

#include "ssns/errors.hpp"

namespace ssns {

using cd = std::complex<double>;

namespace fourier {

VectorCoeffs forward(const VectorField& f) {
    return {forward(f.grid, f[0]), forward(f.grid, f[1]), forward(f.grid, f[2])};
}

VectorField inverse(const Grid& grid, const VectorCoeffs& coeffs) {
    VectorField out(grid);
    for (int c = 0; c < 3; ++c) out[c] = inverse(grid, coeffs[c]);
    return out;
}

void leray_project_in_place(const Grid& grid, VectorCoeffs& coeffs) {
    for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double q[3] = {grid.derivative_wavenumber(k1), grid.derivative_wavenumber(k2),
                             grid.derivative_wavenumber(k3)};
        const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
        if (q2 == 0.0) return;
        const cd dot = (q[0] * coeffs[0][idx] + q[1] * coeffs[1][idx] + q[2] * coeffs[2][idx]) / q2;
        for (int c = 0; c < 3; ++c) coeffs[c][idx] -= q[c] * dot;
    });
}

VectorCoeffs tensor_divergence_coeffs(const VectorField& U, const VectorField& V) {
    require_same_grid(U.grid, V.grid, "tensor_divergence");
    const Grid& grid = U.grid;

    auto band_limit = [&](const VectorField& f) {
        if (grid.dealias_fraction() >= 1.0) return f;
        VectorCoeffs c = forward(f);
        for (auto& comp : c) dealias(grid, comp);
        return inverse(grid, c);
    };
    const VectorField Ud = band_limit(U);
    const VectorField Vd = &U == &V ? Ud : band_limit(V);

    VectorCoeffs out;
    for (auto& c : out) c.assign(grid.spectral_size(), 0.0);
    std::vector<double> product(grid.size());
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (std::size_t m = 0; m < product.size(); ++m) product[m] = Ud[j][m] * Vd[i][m];
            Coeffs pc = fourier::forward(grid, product);
            dealias(grid, pc);
            for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
                const int ks[3] = {k1, k2, k3};
                out[i][idx] += cd(0.0, grid.derivative_wavenumber(ks[j])) * pc[idx];
            });
        }
    }
    return out;
}

}  // namespace fourier

namespace {

double phase_sign(int k1, int k2, int k3) { return ((k1 + k2 + k3) & 1) ? -1.0 : 1.0; }

// Multiplies raw coefficients by i * kappa_axis.
fourier::Coeffs derivative(const Grid& grid, const fourier::Coeffs& in, int axis) {
    fourier::Coeffs out(in.size());
    fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const int ks[3] = {k1, k2, k3};
        out[idx] = cd(0.0, grid.derivative_wavenumber(ks[axis])) * in[idx];
    });
    return out;
}

void laplacian_in_place(const Grid& grid, fourier::Coeffs& c) {
    fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double a = grid.derivative_wavenumber(k1), b = grid.derivative_wavenumber(k2),
                     d = grid.derivative_wavenumber(k3);
        c[idx] *= -(a * a + b * b + d * d);
    });
}

}  // namespace

SpectralField to_spectral(const VectorField& f) {
    const Grid& grid = f.grid;
    SpectralField out(grid);
    const double h3 = grid.cell_volume();
    for (int c = 0; c < 3; ++c) {
        if (f[c].size() != grid.size()) throw DimensionError("to_spectral: component size mismatch");
        out.components[c] = fourier::forward(grid, f[c]);
        fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
            out.components[c][idx] *= h3 * phase_sign(k1, k2, k3);
        });
    }
    return out;
}

VectorField from_spectral(const SpectralField& F) {
    const Grid& grid = F.grid;
    VectorField out(grid);
    const double inv_h3 = 1.0 / grid.cell_volume();
    for (int c = 0; c < 3; ++c) {
        if (F.components[c].size() != grid.spectral_size())
            throw DimensionError("from_spectral: component size mismatch");
        fourier::Coeffs raw = F.components[c];
        fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
            raw[idx] *= inv_h3 * phase_sign(k1, k2, k3);
        });
        out[c] = fourier::inverse(grid, raw);
    }
    return out;
}

double lp_norm_of_magnitudes(const Grid& grid, std::span<const double> magnitudes, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must be finite and >= 1");
    double peak = 0.0;
    for (double m : magnitudes) peak = std::max(peak, m);
    if (peak == 0.0) return 0.0;
    // Scale by the peak so |f|^p neither overflows nor underflows for large p.
    double sum = 0.0;
    for (double m : magnitudes) sum += std::pow(m / peak, p);
    return peak * std::pow(sum * grid.cell_volume(), 1.0 / p);
}

std::vector<double> magnitude(const VectorField& f) {
    std::vector<double> m(f.grid.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = std::sqrt(f[0][i] * f[0][i] + f[1][i] * f[1][i] + f[2][i] * f[2][i]);
    return m;
}

std::vector<double> magnitude(const TensorField& f) {
    std::vector<double> m(f.grid.size(), 0.0);
    for (const auto& c : f.components)
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += c[i] * c[i];
    for (double& v : m) v = std::sqrt(v);
    return m;
}

double lp_norm(const VectorField& f, double p) {
    return lp_norm_of_magnitudes(f.grid, magnitude(f), p);
}

double lp_norm(const ScalarField& f, double p) {
    std::vector<double> m(f.values.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(f.values[i]);
    return lp_norm_of_magnitudes(f.grid, m, p);
}

double lp_norm(const TensorField& f, double p) {
    return lp_norm_of_magnitudes(f.grid, magnitude(f), p);
}

double l2_inner(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid, "l2_inner");
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a[c].size(); ++i) s += a[c][i] * b[c][i];
    return s * a.grid.cell_volume();
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid, "l2_inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.grid.cell_volume();
}

VectorField gradient(const ScalarField& s) {
    const auto c = fourier::forward(s.grid, s.values);
    VectorField out(s.grid);
    for (int d = 0; d < 3; ++d) out[d] = fourier::inverse(s.grid, derivative(s.grid, c, d));
    return out;
}

TensorField gradient(const VectorField& f) {
    TensorField out(f.grid);
    for (int i = 0; i < 3; ++i) {
        const auto c = fourier::forward(f.grid, f[i]);
        for (int j = 0; j < 3; ++j) out.at(i, j) = fourier::inverse(f.grid, derivative(f.grid, c, j));
    }
    return out;
}

ScalarField divergence(const VectorField& f) {
    const Grid& grid = f.grid;
    fourier::Coeffs acc(grid.spectral_size(), 0.0);
    for (int d = 0; d < 3; ++d) {
        const auto c = derivative(grid, fourier::forward(grid, f[d]), d);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c[i];
    }
    ScalarField out(grid);
    out.values = fourier::inverse(grid, acc);
    return out;
}

ScalarField laplacian(const ScalarField& s) {
    auto c = fourier::forward(s.grid, s.values);
    laplacian_in_place(s.grid, c);
    ScalarField out(s.grid);
    out.values = fourier::inverse(s.grid, c);
    return out;
}

VectorField laplacian(const VectorField& f) {
    VectorField out(f.grid);
    for (int d = 0; d < 3; ++d) {
        auto c = fourier::forward(f.grid, f[d]);
        laplacian_in_place(f.grid, c);
        out[d] = fourier::inverse(f.grid, c);
    }
    return out;
}

VectorField curl(const VectorField& f) {
    const Grid& grid = f.grid;
    const auto c = fourier::forward(f);
    auto d = [&](int comp, int axis) { return derivative(grid, c[comp], axis); };
    fourier::VectorCoeffs out;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        auto a = d(k, j);
        const auto b = d(j, k);
        for (std::size_t m = 0; m < a.size(); ++m) a[m] -= b[m];
        out[i] = std::move(a);
    }
    return fourier::inverse(grid, out);
}

VectorField leray_project(const VectorField& f) {
    auto c = fourier::forward(f);
    fourier::leray_project_in_place(f.grid, c);
    return fourier::inverse(f.grid, c);
}

VectorField tensor_divergence(const VectorField& U, const VectorField& V) {
    return fourier::inverse(U.grid, fourier::tensor_divergence_coeffs(U, V));
}

VectorField coordinate_advection(const VectorField& f) {
    const Grid& grid = f.grid;
    const int n = grid.n();
    const TensorField J = gradient(f);
    VectorField out(grid);
    for (int i = 0; i < n; ++i) {
        const double y1 = grid.coordinate(i);
        for (int j = 0; j < n; ++j) {
            const double y2 = grid.coordinate(j);
            for (int k = 0; k < n; ++k) {
                const double y3 = grid.coordinate(k);
                const std::size_t m = grid.index(i, j, k);
                for (int c = 0; c < 3; ++c)
                    out[c][m] = y1 * J.at(c, 0)[m] + y2 * J.at(c, 1)[m] + y3 * J.at(c, 2)[m];
            }
        }
    }
    return out;
}

double relative_divergence(const VectorField& f) {
    const double g = lp_norm(gradient(f), 2.0);
    if (g == 0.0) return 0.0;
    return lp_norm(divergence(f), 2.0) / g;
}

}  // namespace ssns
