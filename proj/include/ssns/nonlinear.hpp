#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssns/field_ops.hpp"
#include "ssns/grid.hpp"
#include "ssns/quadrature.hpp"
#include "ssns/semigroup.hpp"

namespace ssns {

/// A trajectory s -> V(s) sampled at increasing times starting at 0, linear in between.
struct TimeSlices {
    std::vector<double> taus;
    std::vector<VectorField> fields;

    /// Throws DimensionError on mismatched lengths or grids, DomainError on bad taus.
    void validate() const;
    const Grid& grid() const { return fields.front().grid; }
    double tau_max() const { return taus.back(); }
    /// Index i with taus[i] <= s <= taus[i+1] (clamped to the last interval).
    std::size_t interval(double s) const;
    /// Piecewise-linear value at s; DomainError outside [0, tau_max].
    VectorField at(double s) const;
};

/// F(U, V) = 2 P div(U (x) V), P the Leray projector; dealiased products.
VectorField bilinear_F(const VectorField& U, const VectorField& V);
/// Raw spectral coefficients of bilinear_F.
fourier::VectorCoeffs bilinear_F_coeffs(const VectorField& U, const VectorField& V);

/// Pressure of a velocity field: -Lap P = div div (U (x) U), zero mean.
ScalarField pressure_from_velocity(const VectorField& U);

/// G(U, V)(tau) = \int_0^tau e^{-(tau-s)A} F(U(s), V(s)) ds.
///
/// Keeps the spectral F of every slice pair it touches, so evaluating many taus
/// against the same trajectories is cheap. U(s), V(s) are linear between slices,
/// which makes F(U(s), V(s)) an exact quadratic blend of the slice products.
class DuhamelIntegrator {
public:
    DuhamelIntegrator(const TimeSlices& U, const TimeSlices& V, QuadratureRule rule,
                      Interpolation interp = Interpolation::fourier_resample);

    VectorField operator()(double tau);
    /// Spectral F(U(s), V(s)).
    fourier::VectorCoeffs integrand_coeffs(double s);

private:
    struct Pieces {
        fourier::VectorCoeffs aa, ab, ba, bb;  // F(U_a, V_a), F(U_a, V_b), F(U_b, V_a), F(U_b, V_b)
    };
    const Pieces& pieces(std::size_t interval);

    const TimeSlices& U_;
    const TimeSlices& V_;
    QuadratureRule rule_;
    Interpolation interp_;
    std::map<std::size_t, Pieces> cache_;
};

VectorField duhamel_G(const TimeSlices& U, const TimeSlices& V, double tau, const QuadratureRule& rule,
                      Interpolation interp = Interpolation::fourier_resample);

/// Strong residual of the steady rescaled equations,
///   U + (y.grad)U + 2(U.grad)U + 2 grad P - 2 Lap U,
/// zeroed outside the trusted ball |y| < L/4.
struct SteadyResidual {
    VectorField field;
    double l2_abs = 0.0;
    double l2_rel = 0.0;  ///< relative to ||U||_2 on the trusted ball (0 when U vanishes there)
    double trusted_radius = 0.0;
};

/// Throws PreconditionError if relative_divergence(U) exceeds 1e-6.
SteadyResidual steady_residual(const VectorField& U);

/// \int phi.U - div(phi (x) y).U - 2 grad(phi):(U (x) U) - 2 Lap(phi).U dy.
/// phi must be divergence-free and below support_tol of its peak outside |y| < L/4,
/// else PreconditionError. The shipped test functions ring at about 4e-4 of their
/// peak at n = 64 and 1e-2 at n = 32, so the default suits n >= 64.
double weak_steady_residual(const VectorField& U, const VectorField& phi, double support_tol = 1e-3);

struct HolderPair {
    double lhs = 0.0;  ///< |\int grad(phi) : (R (x) R)|
    double rhs = 0.0;  ///< ||grad phi||_q ||R||_p^2
    double q = 0.0;    ///< p / (p - 2)
};

/// DomainError for p <= 2.
HolderPair holder_gap(const VectorField& R, const VectorField& phi, double p);

struct ResidualRow {
    std::string tag;
    double tau;  ///< NaN when not attached to a time
    double residual_l2_rel;
    double trusted_radius;
};

/// CSV: tag,tau_or_na,residual_l2_rel,trusted_radius.
void write_residual_csv(std::ostream& out, const std::vector<ResidualRow>& rows);

}  // namespace ssns
