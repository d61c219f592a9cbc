#include "ssns/rescaling.hpp"

#include <cmath>
#include <ostream>

#include "ssns/csv.hpp"
#include "ssns/errors.hpp"

namespace ssns {

double tau_of_t(double T, double t) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("tau_of_t: T must be positive");
    if (!(t >= 0.0) || !(t < T)) throw DomainError("tau_of_t: need 0 <= t < T");
    return -0.5 * std::log1p(-t / T);
}

double t_of_tau(double T, double tau) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("t_of_tau: T must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("t_of_tau: tau must be >= 0");
    return -T * std::expm1(-2.0 * tau);
}

double TimeMap::scale() const { return std::sqrt(T) * std::exp(-tau); }

namespace {

VectorField scaled_copy(const VectorField& f, const Grid& grid, double amplitude) {
    VectorField out(grid);
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < grid.size(); ++m) out[c][m] = amplitude * f[c][m];
    return out;
}

}  // namespace

VectorField to_selfsimilar(const VectorField& u, double T, double t) {
    const double s = TimeMap::at_t(T, t).scale();
    return scaled_copy(u, u.grid.scaled(1.0 / s), s);
}

VectorField to_selfsimilar(const VectorField& u, double T, double t, const Grid& target, Interpolation interp) {
    const double s = TimeMap::at_t(T, t).scale();
    VectorField out = resample(u, target, s, interp);
    out *= s;
    return out;
}

VectorField from_selfsimilar(const VectorField& U, double T, double tau) {
    const double s = TimeMap::at_tau(T, tau).scale();
    return scaled_copy(U, U.grid.scaled(s), 1.0 / s);
}

VectorField from_selfsimilar(const VectorField& U, double T, double tau, const Grid& target,
                             Interpolation interp) {
    const double s = TimeMap::at_tau(T, tau).scale();
    VectorField out = resample(U, target, 1.0 / s, interp);
    out *= 1.0 / s;
    return out;
}

ProfileConvergence profile_convergence(const TimeSlices& traj, const VectorField& U_bar, double p, double tol) {
    traj.validate();
    require_same_grid(traj.grid(), U_bar.grid, "profile_convergence");
    ProfileConvergence out;
    for (std::size_t i = 0; i < traj.taus.size(); ++i)
        out.trace.emplace_back(traj.taus[i], lp_norm(traj.fields[i] - U_bar, p));
    const std::size_t n = out.trace.size();
    if (n >= 3) {
        out.converged = true;
        for (std::size_t i = n - 3; i < n; ++i) {
            if (!(out.trace[i].second < tol)) out.converged = false;
            if (i > n - 3 && out.trace[i].second > out.trace[i - 1].second) out.converged = false;
        }
    }
    return out;
}

DecayReport pointwise_decay_check(const VectorField& U, double C) {
    if (!(C > 0.0)) throw DomainError("pointwise_decay_check: C must be positive");
    const Grid& g = U.grid;
    const double r_in = g.box_side() / 8.0, r_out = g.box_side() / 4.0;
    DecayReport out;
    const int n = g.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double y1 = g.coordinate(i), y2 = g.coordinate(j), y3 = g.coordinate(k);
                const double r = std::sqrt(y1 * y1 + y2 * y2 + y3 * y3);
                if (r < r_in || r > r_out) continue;
                const std::size_t m = g.index(i, j, k);
                const double mag = std::sqrt(U[0][m] * U[0][m] + U[1][m] * U[1][m] + U[2][m] * U[2][m]);
                ++out.samples;
                if (mag * r > out.max_value) {
                    out.max_value = mag * r;
                    out.argmax_radius = r;
                }
            }
    out.pass = out.max_value <= C;
    return out;
}

double non_blowup_bound(const lemmas::ConstantsLedger& ledger, double T) {
    if (!ledger.certified) throw PreconditionError("non_blowup_bound: ledger is not certified (K0 M > 1/6)");
    if (!(T > 0.0)) throw DomainError("non_blowup_bound: T must be positive");
    const double a = 1.0 - ledger.gamma;
    return ledger.K_max * std::exp(a * ledger.tau_m) / std::pow(T, a / 2.0);
}

double cancellation_residual(double T, double t, double gamma) {
    const double a = 1.0 - gamma;
    const double tau = tau_of_t(T, t);
    const double lhs = std::pow(T - t, -a / 2.0) * std::exp(-a * tau);
    const double rhs = std::pow(T, -a / 2.0);
    return std::abs(lhs - rhs) / rhs;
}

bool lps_check(double p, double q) {
    if (!(p >= 3.0)) throw DomainError("lps_check: p must be >= 3");
    if (!(q >= 1.0)) throw DomainError("lps_check: q must be >= 1");
    const double a = std::isinf(p) ? 0.0 : 3.0 / p;
    const double b = std::isinf(q) ? 0.0 : 2.0 / q;
    return a + b <= 1.0;
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
    csv::Writer w(out);
    w.row({"tau", "t", "norm_U", "norm_u", "envelope", "bound", "pass"});
    for (const auto& r : rows)
        w.row({csv::num(r.tau), csv::num(r.t), csv::num(r.norm_U), csv::num(r.norm_u), csv::num(r.envelope),
               csv::num(r.bound), r.pass ? "1" : "0"});
}

}  // namespace ssns
