#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ssns/errors.hpp"
#include "ssns/nonlinear.hpp"

namespace ssns {

enum class Integrator { rk4_integrating_factor };

struct SolverConfig {
    double dt = 0.01;
    double t_end = 0.5;
    Integrator integrator = Integrator::rk4_integrating_factor;
    double cfl_safety = 0.8;
    /// Times at which slices are stored; must start at 0 and end at t_end.
    /// Empty: 11 equispaced nodes.
    std::vector<double> output_taus;
};

/// Raised when the state stops being finite; carries everything up to the last good slice.
class SchemeBlowup : public NumericError {
public:
    SchemeBlowup(double tau, TimeSlices partial);
    double tau;
    TimeSlices partial;
};

/// Full right side -U - P[(y.grad)U] - F(U, U) + 2 Lap U of the rescaled equations.
/// PreconditionError unless U is divergence-free to 1e-8 relative.
VectorField rhs(const VectorField& U);

/// Largest stable RK4 step estimated from the drift |y| <= sqrt(3) L / 2 and max |U|.
double stability_limit(const VectorField& U);

/// Lawson RK4: exp(-(1 + 2|k|^2) dt) exactly, RK4 on the drift and the nonlinearity.
/// Steps are shortened so that every output time is hit exactly.
TimeSlices evolve(const VectorField& U0, const SolverConfig& config);

/// CSV: tau,norm_l2,norm_lp,div_residual.
void write_trace_csv(std::ostream& out, const TimeSlices& traj, double p);

}  // namespace ssns
