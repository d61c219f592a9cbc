#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssns/field_ops.hpp"
#include "ssns/grid.hpp"

namespace ssns {

/// How fields are evaluated at dilated points.
enum class Interpolation {
    fourier_resample,  ///< trigonometric interpolant, exact for band-limited data
    cubic_spline,      ///< periodic cubic spline, cheaper and less accurate
};

const char* to_string(Interpolation interp);
Interpolation interpolation_from_string(const std::string& name);

/// Time reached by the smoothing semigroup after rescaled time tau: 1 - exp(-2 tau).
double t0(double tau);

/// Heat smoothing: multiplies every component by exp(-4 pi^2 |xi|^2 t).
VectorField heat_apply(const VectorField& f, double t);

/// g(y) = f(lambda y) for lambda in (0, 1].
VectorField dilate(const VectorField& f, double lambda,
                   Interpolation interp = Interpolation::fourier_resample);

/// g(y) = f(scale * y) sampled on `target` (same n as the source). Points that fall
/// outside the source box evaluate to zero, matching decaying data on R^3.
VectorField resample(const VectorField& f, const Grid& target, double scale,
                     Interpolation interp = Interpolation::fourier_resample);

/// Solution operator of V_tau + V + (y.grad) V - 2 Lap V = 0:
///   (e^{-tau A} V0)(y) = e^{-tau} (heat(t0(tau)) V0)(e^{-tau} y).
VectorField semigroup_apply(const VectorField& V0, double tau,
                            Interpolation interp = Interpolation::fourier_resample);

/// Jacobian of semigroup_apply, differentiated before the dilation:
///   grad e^{-tau A} V0 = e^{-2 tau} ((grad heat(t0) V0)(e^{-tau} y)).
TensorField semigroup_gradient_apply(const VectorField& V0, double tau,
                                     Interpolation interp = Interpolation::fourier_resample);

/// Semigroup applied to raw (unnormalized FFT) coefficients, used inside the Duhamel
/// integral where the input is already spectral.
VectorField semigroup_apply_coeffs(const Grid& grid, fourier::VectorCoeffs coeffs, double tau,
                                   Interpolation interp = Interpolation::fourier_resample);

// ---------------------------------------------------------------------------
// Empirical heat-kernel constants.

/// ||D e^{t Lap} w||_{q} t^{sigma/2} / ||w||_{p}, where D is the identity or the
/// Jacobian and sigma = 3/p - 3/q (+1 with the gradient).
double heat_ratio(const VectorField& w, double t, double p_tilde, double q_tilde, bool with_gradient);

/// Test family for estimate_c0. Every member lives on `grid`.
struct C0Family {
    Grid grid{32, 16.0};
    int gaussians = 6;      ///< widths geometric between min_width and max_width
    int random_fields = 6;  ///< zero-mean band-limited, |k|_inf <= n/4
    int bumps = 6;          ///< tensor bumps at seeded centers and radii
    int t_points = 12;      ///< log-spaced heat times
    std::uint64_t seed = 0;

    C0Family doubled() const;
    std::string describe() const;
};

struct C0Sample {
    double t;
    int member_id;
    double ratio;
};

struct C0Estimate {
    double p_tilde;
    double q_tilde;
    bool with_gradient;
    double value;  ///< sup of the sampled ratios
    std::string family;
    std::vector<C0Sample> samples;
};

/// Empirical sup of heat_ratio over the family and its time grid. When the weight
/// exponent vanishes the t = 0 limit (ratio exactly 1) is included.
/// Throws DomainError unless 1 < p_tilde <= q_tilde < infinity.
C0Estimate estimate_c0(double p_tilde, double q_tilde, bool with_gradient, const C0Family& family);

/// CSV: p_tilde,q_tilde,gradient,t,family_member_id,ratio then a summary row.
void write_c0_csv(std::ostream& out, const C0Estimate& estimate);

}  // namespace ssns
