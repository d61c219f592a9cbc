#pragma once

#include <array>
#include <cstdint>

#include "ssns/grid.hpp"

// Deterministic field generators shared by the CLI, the constant estimator and the tests.
namespace ssns::fields {

using Point = std::array<double, 3>;

/// exp(-pi |y - center|^2 / width) sampled on the grid.
ScalarField gaussian(const Grid& grid, double width, Point center = {0.0, 0.0, 0.0});

/// (amplitude * gaussian, 0, 0).
VectorField gaussian_vector(const Grid& grid, double width, double amplitude = 1.0,
                            Point center = {0.0, 0.0, 0.0});

/// Spectral curl of a sum of three offset Gaussian potentials, one per axis.
/// Exactly divergence-free under the grid's spectral divergence.
VectorField solenoidal_gaussian(const Grid& grid, double width, double amplitude);

/// White noise filtered to 1 <= |k|_inf <= kmax; zero mean, unit L^2 norm.
VectorField random_band_limited(const Grid& grid, int kmax, std::uint64_t seed);

/// Leray projection of random_band_limited, renormalized to unit L^2 norm.
VectorField random_solenoidal(const Grid& grid, int kmax, std::uint64_t seed);

/// random_band_limited(kmax) times a Gaussian envelope, then projected; unit L^2 norm.
VectorField localized_random_solenoidal(const Grid& grid, int kmax, double envelope_width,
                                        std::uint64_t seed);

/// One-dimensional C-infinity bump exp(-beta s^2 / (1 - s^2)) on |s| < 1, zero outside.
double bump1d(double s, double beta);

/// Tensor-product bump prod_d bump1d((y_d - c_d) / radius).
ScalarField tensor_bump(const Grid& grid, Point center, double radius, double beta);

/// Divergence-free test function: spectral curl of tensor_bump * direction, with
/// support radius L/8 placed inside the trusted ball |y| < L/4. The seed picks the
/// center offset and the direction.
struct TestFunction {
    VectorField phi;
    Point center;
    double radius;
};
TestFunction make_test_function(const Grid& grid, std::uint64_t seed);

/// Seeds of the three shipped test functions.
inline constexpr std::array<std::uint64_t, 3> kTestFunctionSeeds = {11, 23, 37};

}  // namespace ssns::fields
