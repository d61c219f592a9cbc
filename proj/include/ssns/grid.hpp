#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ssns {

/// Uniform periodic box [-L/2, L/2)^3 with n points per axis, standing in for R^3.
///
/// Grid coordinates are y_m = (m - n/2) * spacing, so the origin is a grid node.
/// Wavenumbers are integers k in [-n/2, n/2) (cycles per box); the physical
/// frequency is xi = k / L, and derivatives use the multiplier 2*pi*i*xi.
class Grid {
public:
    Grid() = default;
    Grid(int n, double box_side, double dealias_fraction = 2.0 / 3.0);

    int n() const { return n_; }
    double box_side() const { return box_side_; }
    double spacing() const { return box_side_ / n_; }
    double dealias_fraction() const { return dealias_fraction_; }

    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    /// Number of stored complex coefficients in the half spectrum n x n x (n/2+1).
    std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * n_ * (n_ / 2 + 1); }
    double cell_volume() const { const double h = spacing(); return h * h * h; }

    double coordinate(int m) const { return (m - n_ / 2) * spacing(); }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }

    /// Signed integer wavenumber for FFT slot m.
    int wavenumber(int m) const { return m <= n_ / 2 ? m : m - n_; }
    bool is_nyquist(int k) const { return k == n_ / 2 || k == -n_ / 2; }
    /// Angular derivative wavenumber 2*pi*k/L, with the Nyquist slot set to zero.
    double derivative_wavenumber(int k) const;
    /// True if |k| lies inside the retained (dealiased) band.
    bool in_dealias_band(int k) const;

    /// Grid with the same resolution and a box scaled by `factor`.
    Grid scaled(double factor) const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.box_side_ == b.box_side_ &&
               a.dealias_fraction_ == b.dealias_fraction_;
    }

private:
    int n_ = 0;
    double box_side_ = 0.0;
    double dealias_fraction_ = 2.0 / 3.0;
};

/// Throws DimensionError unless both grids are equal.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Real scalar field (pressure, test scalars).
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
};

/// Three-component real field on a grid.
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 3> components;

    VectorField() = default;
    explicit VectorField(const Grid& g);

    std::vector<double>& operator[](int c) { return components[c]; }
    const std::vector<double>& operator[](int c) const { return components[c]; }

    bool all_finite() const;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(double s);
    /// this += s * other
    VectorField& add_scaled(double s, const VectorField& other);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Fourier coefficients of a VectorField under f^(xi) = \int f(x) e^{-2 pi i x.xi} dx,
/// approximated by the trapezoidal sum on the grid. Only the half spectrum along
/// the third axis is stored; the other half follows from conjugate symmetry.
struct SpectralField {
    Grid grid;
    std::array<std::vector<std::complex<double>>, 3> components;

    SpectralField() = default;
    explicit SpectralField(const Grid& g);

    /// Coefficient at integer wavenumbers (k1, k2, k3), each in [-n/2, n/2).
    std::complex<double> coefficient(int c, int k1, int k2, int k3) const;
};

}  // namespace ssns
