#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ssns/errors.hpp"
#include "ssns/nonlinear.hpp"
#include "ssns/quadrature.hpp"
#include "ssns/scalar_lemmas.hpp"
#include "ssns/semigroup.hpp"

namespace ssns {

/// Raised by picard_step when K_{n+1} exceeds K0 + M K_n^2 beyond the slack.
class RecurrenceViolation : public NumericError {
public:
    RecurrenceViolation(double lhs, double rhs);
    double lhs;
    double rhs;
};

struct PicardParams {
    double p = 4.0;
    double c0 = 1.0;            ///< ledger constant, normally estimated
    QuadratureRule rule{};
    Interpolation interp = Interpolation::fourier_resample;
    double slack = 0.05;        ///< relative slack on recurrence and envelope checks
    bool keep_all_iterates = false;  ///< otherwise only V^(0) and the two newest are stored
};

/// Successive approximations V^(n+1) = V^(0) - G(V^(n), V^(n)) on a fixed tau grid.
struct PicardState {
    PicardParams params;
    double gamma = 0.0;
    double c1 = 0.0;
    double M = 0.0;         ///< 2 c0 c1
    double K0_bound = 0.0;  ///< c0 ||V0||_p
    double K_max = 0.0;     ///< majorant bound for K0_bound

    /// Stored iterates; iterate_index[i] is the n of iterates[i].
    std::vector<TimeSlices> iterates;
    std::vector<int> iterate_index;
    /// K_n = sup_tau e^{(1-gamma) tau} ||V^(n)(tau)||_p for every n computed so far.
    std::vector<double> kn_ledger;
    /// gap_history[n] = sup_tau e^{(1-gamma) tau} ||V^(n+1) - V^(n)||_p.
    std::vector<double> gap_history;
    /// Largest ||V^(n)(tau)||_p / (K_max e^{-(1-gamma) tau}) for n >= 1.
    std::vector<double> envelope_ratio;

    const std::vector<double>& taus() const { return iterates.front().taus; }
    const TimeSlices& latest() const { return iterates.back(); }
    int iteration() const { return iterate_index.back(); }
};

/// Default grid: `nodes` points on [0, tau_max], geometrically refined near 0.
std::vector<double> default_tau_grid(double tau_max = 6.0, int nodes = 25);

/// Weighted sup norm sup_tau e^{(1-gamma) tau} ||V(tau)||_p.
double weighted_sup(const TimeSlices& V, double p);

/// Iterate 0: tau -> semigroup_apply(V0, tau). PreconditionError unless V0 is
/// divergence-free to 1e-8 relative.
PicardState picard_init(const VectorField& V0, const std::vector<double>& tau_grid, const PicardParams& params);

/// Appends V^(n+1), K_{n+1} and the gap; throws RecurrenceViolation when
/// K_{n+1} > (K0 + M K_n^2)(1 + slack).
PicardState picard_step(PicardState state);

struct PicardReport {
    bool converged = false;
    int iterations = 0;
    bool smallness_ok = false;  ///< 2 c0^2 c1 ||V0||_p <= 1/6
    std::string warning;
    lemmas::ConstantsLedger ledger;
    std::vector<double> kn_ledger;
    std::vector<double> majorant;  ///< scalar K~_n for (K0_bound, M)
    std::vector<double> gap_history;
    std::vector<double> envelope_ratio;
    /// sup_tau e^{(1-gamma) tau} ||V^(n) - limit||_p, only with keep_all_iterates.
    std::vector<double> error_history;
    std::vector<double> taus;
    std::vector<double> limit_norm;      ///< ||limit(tau)||_p
    std::vector<double> envelope;        ///< K_max e^{-(1-gamma) tau}
    std::vector<double> eq_residual;     ///< ||limit - V^(0) + G(limit, limit)||_p
    bool decay_ok = false;               ///< limit_norm <= envelope (1 + slack)
};

struct PicardResult {
    TimeSlices limit;
    PicardReport report;
};

/// Iterates until the gap drops below tol or max_iter steps were taken.
PicardResult picard_solve(const VectorField& V0, const std::vector<double>& tau_grid, const PicardParams& params,
                          int max_iter = 30, double tol = 1e-8);

/// CSV blocks (n, K_n, majorant, gap_n) and (tau, norm, envelope, fixed-point residual).
void write_picard_csv(std::ostream& out, const PicardReport& report);

}  // namespace ssns
