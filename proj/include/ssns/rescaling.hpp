#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "ssns/grid.hpp"
#include "ssns/nonlinear.hpp"
#include "ssns/scalar_lemmas.hpp"
#include "ssns/semigroup.hpp"

namespace ssns {

/// tau = (1/2) log(T / (T - t)); DomainError unless 0 <= t < T.
double tau_of_t(double T, double t);
/// t = T (1 - e^{-2 tau}); DomainError unless tau >= 0.
double t_of_tau(double T, double tau);

/// Physical time t < T and rescaled time tau, kept consistent.
struct TimeMap {
    double T = 1.0;
    double t = 0.0;
    double tau = 0.0;

    static TimeMap at_t(double T, double t) { return {T, t, tau_of_t(T, t)}; }
    static TimeMap at_tau(double T, double tau) { return {T, t_of_tau(T, tau), tau}; }
    /// sqrt(T - t), the spatial scale of the rescaled variables.
    double scale() const;
};

/// U(y) = s u(s y), s = sqrt(T - t). The result lives on the x-grid scaled by 1/s,
/// so every sample is reused and no interpolation happens.
VectorField to_selfsimilar(const VectorField& u, double T, double t);
/// Same map sampled on `target` (same n), resampling as in dilate.
VectorField to_selfsimilar(const VectorField& u, double T, double t, const Grid& target,
                           Interpolation interp = Interpolation::fourier_resample);

/// u(x) = U(x / s) / s with s = sqrt(T - t(tau)), on the y-grid scaled by s.
VectorField from_selfsimilar(const VectorField& U, double T, double tau);
VectorField from_selfsimilar(const VectorField& U, double T, double tau, const Grid& target,
                             Interpolation interp = Interpolation::fourier_resample);

struct ProfileConvergence {
    std::vector<std::pair<double, double>> trace;  ///< (tau, ||U(tau) - U_bar||_p)
    bool converged = false;  ///< last three values below tol and non-increasing
};

ProfileConvergence profile_convergence(const TimeSlices& traj, const VectorField& U_bar, double p,
                                       double tol = 1e-8);

struct DecayReport {
    double max_value = 0.0;  ///< max |U(y)| |y| on L/8 <= |y| <= L/4
    double argmax_radius = 0.0;
    std::size_t samples = 0;
    bool pass = false;
};

/// |U(y)| |y| <= C on the trusted annulus. DomainError unless C > 0.
DecayReport pointwise_decay_check(const VectorField& U, double C);

/// K_max e^{(1-gamma) tau_m} / T^{(1-gamma)/2}; PreconditionError for an uncertified ledger.
double non_blowup_bound(const lemmas::ConstantsLedger& ledger, double T);

/// Relative gap between (T-t)^{-(1-gamma)/2} e^{-(1-gamma) tau(t)} and T^{-(1-gamma)/2}.
double cancellation_residual(double T, double t, double gamma);

/// 3/p + 2/q <= 1; q may be +infinity. DomainError unless p >= 3 and q >= 1.
bool lps_check(double p, double q);

struct BoundRow {
    double tau, t, norm_U, norm_u, envelope, bound;
    bool pass;
};

/// CSV: tau,t,norm_U,norm_u,envelope,bound,pass.
void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows);

}  // namespace ssns
