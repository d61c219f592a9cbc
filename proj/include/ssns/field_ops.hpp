#pragma once

#include <array>
#include <span>
#include <vector>

#include "ssns/fourier.hpp"
#include "ssns/grid.hpp"

namespace ssns {

/// Jacobian of a vector field: component (i, j) holds d f_i / d y_j at index 3*i + j.
struct TensorField {
    Grid grid;
    std::array<std::vector<double>, 9> components;

    TensorField() = default;
    explicit TensorField(const Grid& g) : grid(g) {
        for (auto& c : components) c.assign(g.size(), 0.0);
    }
    std::vector<double>& at(int i, int j) { return components[3 * i + j]; }
    const std::vector<double>& at(int i, int j) const { return components[3 * i + j]; }
};

SpectralField to_spectral(const VectorField& f);
VectorField from_spectral(const SpectralField& F);

/// (sum |f|^p h^3)^{1/p}, |f| the Euclidean magnitude. Throws DomainError for p < 1.
double lp_norm(const VectorField& f, double p);
double lp_norm(const ScalarField& f, double p);
double lp_norm(const TensorField& f, double p);  // Frobenius magnitude
/// L^p norm of nonnegative pointwise magnitudes sampled on `grid`.
double lp_norm_of_magnitudes(const Grid& grid, std::span<const double> magnitudes, double p);

std::vector<double> magnitude(const VectorField& f);
std::vector<double> magnitude(const TensorField& f);

/// Trapezoidal L^2 inner product.
double l2_inner(const VectorField& a, const VectorField& b);
double l2_inner(const ScalarField& a, const ScalarField& b);

VectorField gradient(const ScalarField& s);
TensorField gradient(const VectorField& f);
ScalarField divergence(const VectorField& f);
ScalarField laplacian(const ScalarField& s);
VectorField laplacian(const VectorField& f);
VectorField curl(const VectorField& f);

/// Projection onto divergence-free fields, 1 + grad (-Lap)^{-1} div. The mean mode is kept.
VectorField leray_project(const VectorField& f);

/// Component i = sum_j d_j (U_j V_i), with 2/3-rule (grid.dealias_fraction) dealiasing
/// of both factors and of the product.
VectorField tensor_divergence(const VectorField& U, const VectorField& V);

/// Pointwise (y . grad) f, spectral gradient times the sawtooth coordinate.
VectorField coordinate_advection(const VectorField& f);

/// ||div f||_2 / ||grad f||_2, or 0 for a constant field.
double relative_divergence(const VectorField& f);

namespace fourier {

using VectorCoeffs = std::array<Coeffs, 3>;

VectorCoeffs forward(const VectorField& f);
VectorField inverse(const Grid& grid, const VectorCoeffs& coeffs);

void leray_project_in_place(const Grid& grid, VectorCoeffs& coeffs);

/// Raw coefficients of div(U (x) V) as used by tensor_divergence.
VectorCoeffs tensor_divergence_coeffs(const VectorField& U, const VectorField& V);

}  // namespace fourier

}  // namespace ssns
