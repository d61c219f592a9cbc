#include "ssns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ssns/errors.hpp"

namespace ssns {

Grid::Grid(int n, double box_side, double dealias_fraction)
    : n_(n), box_side_(box_side), dealias_fraction_(dealias_fraction) {
    if (n <= 0 || n % 2 != 0) {
        throw DomainError("grid: points per axis must be a positive even integer, got " +
                          std::to_string(n));
    }
    if (!(box_side > 0.0) || !std::isfinite(box_side)) {
        throw DomainError("grid: box side must be positive and finite");
    }
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
        throw DomainError("grid: dealias fraction must lie in (0, 1]");
    }
}

double Grid::derivative_wavenumber(int k) const {
    if (is_nyquist(k)) return 0.0;
    return 2.0 * std::numbers::pi * k / box_side_;
}

bool Grid::in_dealias_band(int k) const {
    return std::abs(k) <= dealias_fraction_ * (n_ / 2) + 1e-12;
}

Grid Grid::scaled(double factor) const {
    return Grid(n_, box_side_ * factor, dealias_fraction_);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) {
        throw DimensionError(std::string(what) + ": fields live on different grids");
    }
}

VectorField::VectorField(const Grid& g) : grid(g) {
    for (auto& c : components) c.assign(g.size(), 0.0);
}

bool VectorField::all_finite() const {
    for (const auto& c : components)
        for (double v : c)
            if (!std::isfinite(v)) return false;
    return true;
}

VectorField& VectorField::operator+=(const VectorField& other) {
    return add_scaled(1.0, other);
}

VectorField& VectorField::operator-=(const VectorField& other) {
    return add_scaled(-1.0, other);
}

VectorField& VectorField::operator*=(double s) {
    for (auto& c : components)
        for (double& v : c) v *= s;
    return *this;
}

VectorField& VectorField::add_scaled(double s, const VectorField& other) {
    require_same_grid(grid, other.grid, "vector field arithmetic");
    for (int c = 0; c < 3; ++c) {
        auto& dst = components[c];
        const auto& src = other.components[c];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    }
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

SpectralField::SpectralField(const Grid& g) : grid(g) {
    for (auto& c : components) c.assign(g.spectral_size(), {0.0, 0.0});
}

std::complex<double> SpectralField::coefficient(int c, int k1, int k2, int k3) const {
    const int n = grid.n();
    auto slot = [n](int k) { return k < 0 ? k + n : k; };
    const std::size_t half = n / 2 + 1;
    if (k3 >= 0 || k3 == -n / 2) {
        // The Nyquist plane k3 = -n/2 coincides with +n/2.
        const int s3 = k3 < 0 ? n / 2 : k3;
        return components[c][(static_cast<std::size_t>(slot(k1)) * n + slot(k2)) * half + s3];
    }
    // slot(n/2) == slot(-n/2), so negating a Nyquist index stays in range.
    const std::size_t idx =
        (static_cast<std::size_t>(slot(-k1)) * n + slot(-k2)) * half + (-k3);
    return std::conj(components[c][idx]);
}

}  // namespace ssns
