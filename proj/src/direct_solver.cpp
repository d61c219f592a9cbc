#include "ssns/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "ssns/csv.hpp"

namespace ssns {

using fourier::VectorCoeffs;

SchemeBlowup::SchemeBlowup(double t, TimeSlices p)
    : NumericError("evolve: non-finite state at tau = " + csv::num(t)), tau(t), partial(std::move(p)) {}

namespace {

// Drift and nonlinearity, projected: -P[(y.grad)U] - F(U, U).
VectorCoeffs nonlinear_part(const Grid& grid, const VectorCoeffs& u) {
    const VectorField U = fourier::inverse(grid, u);
    VectorCoeffs drift = fourier::forward(coordinate_advection(U));
    VectorCoeffs F = fourier::tensor_divergence_coeffs(U, U);
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < drift[c].size(); ++m) drift[c][m] += 2.0 * F[c][m];
    fourier::leray_project_in_place(grid, drift);
    for (auto& comp : drift)
        for (auto& v : comp) v = -v;
    return drift;
}

// exp(-(1 + 8 pi^2 |xi|^2) h) per mode.
std::vector<double> linear_factor(const Grid& grid, double h) {
    std::vector<double> e(grid.spectral_size());
    const double inv_l2 = 1.0 / (grid.box_side() * grid.box_side());
    const double c = 8.0 * std::numbers::pi * std::numbers::pi;
    fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 = (double(k1) * k1 + double(k2) * k2 + double(k3) * k3) * inv_l2;
        e[idx] = std::exp(-(1.0 + c * xi2) * h);
    });
    return e;
}

void scale(VectorCoeffs& u, const std::vector<double>& e) {
    for (auto& comp : u)
        for (std::size_t m = 0; m < comp.size(); ++m) comp[m] *= e[m];
}

// out = a + s * b
VectorCoeffs axpy(const VectorCoeffs& a, double s, const VectorCoeffs& b) {
    VectorCoeffs out = a;
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < out[c].size(); ++m) out[c][m] += s * b[c][m];
    return out;
}

bool finite(const VectorCoeffs& u) {
    for (const auto& comp : u)
        for (const auto& v : comp)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void rk4_step(const Grid& grid, VectorCoeffs& u, double h, const std::vector<double>& e_half,
              const std::vector<double>& e_full) {
    const VectorCoeffs k1 = nonlinear_part(grid, u);
    VectorCoeffs a = axpy(u, 0.5 * h, k1);
    scale(a, e_half);
    const VectorCoeffs k2 = nonlinear_part(grid, a);
    VectorCoeffs u_half = u;
    scale(u_half, e_half);
    const VectorCoeffs k3 = nonlinear_part(grid, axpy(u_half, 0.5 * h, k2));
    VectorCoeffs k3h = k3;
    scale(k3h, e_half);
    VectorCoeffs u_full = u;
    scale(u_full, e_full);
    const VectorCoeffs k4 = nonlinear_part(grid, axpy(u_full, h, k3h));

    // u_{n+1} = E u + h/6 (E k1 + 2 E_{1/2}(k2 + k3) + k4)
    VectorCoeffs k1e = k1;
    scale(k1e, e_full);
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < u[c].size(); ++m)
            u[c][m] = u_full[c][m] +
                      h / 6.0 * (k1e[c][m] + 2.0 * e_half[m] * (k2[c][m] + k3[c][m]) + k4[c][m]);
}

}  // namespace

VectorField rhs(const VectorField& U) {
    if (relative_divergence(U) > 1e-8) throw PreconditionError("rhs: input is not divergence-free");
    const Grid& grid = U.grid;
    VectorCoeffs u = fourier::forward(U);
    VectorCoeffs n = nonlinear_part(grid, u);
    const double inv_l2 = 1.0 / (grid.box_side() * grid.box_side());
    const double c = 8.0 * std::numbers::pi * std::numbers::pi;
    fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
        const double xi2 = (double(k1) * k1 + double(k2) * k2 + double(k3) * k3) * inv_l2;
        for (int d = 0; d < 3; ++d) n[d][idx] -= (1.0 + c * xi2) * u[d][idx];
    });
    return fourier::inverse(grid, n);
}

double stability_limit(const VectorField& U) {
    const Grid& g = U.grid;
    double umax = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m)
        umax = std::max(umax, std::sqrt(U[0][m] * U[0][m] + U[1][m] * U[1][m] + U[2][m] * U[2][m]));
    const double kmax = std::numbers::pi / g.spacing();
    return 2.8 / (kmax * (std::sqrt(3.0) * g.box_side() / 2.0 + 2.0 * umax));
}

TimeSlices evolve(const VectorField& U0, const SolverConfig& config) {
    if (!(config.dt > 0.0)) throw DomainError("evolve: dt must be positive");
    if (!(config.t_end >= 0.0)) throw DomainError("evolve: t_end must be >= 0");
    if (!(config.cfl_safety > 0.0 && config.cfl_safety < 1.0))
        throw DomainError("evolve: cfl_safety must lie in (0, 1)");
    if (!U0.all_finite()) throw PreconditionError("evolve: non-finite initial data");
    if (relative_divergence(U0) > 1e-8) throw PreconditionError("evolve: initial data is not divergence-free");
    if (config.dt > config.cfl_safety * stability_limit(U0))
        throw PreconditionError("evolve: dt exceeds cfl_safety times the stability limit");

    std::vector<double> outputs = config.output_taus;
    if (outputs.empty()) {
        for (int i = 0; i <= 10; ++i) outputs.push_back(config.t_end * i / 10.0);
    }
    if (outputs.front() != 0.0) throw DomainError("evolve: output times must start at 0");
    for (std::size_t i = 1; i < outputs.size(); ++i)
        if (!(outputs[i] > outputs[i - 1])) throw DomainError("evolve: output times must increase");

    const Grid& grid = U0.grid;
    TimeSlices traj;
    traj.taus.push_back(0.0);
    traj.fields.push_back(U0);

    VectorCoeffs u = fourier::forward(U0);
    fourier::leray_project_in_place(grid, u);
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        const double span = outputs[i] - outputs[i - 1];
        const int steps = std::max(1, static_cast<int>(std::ceil(span / config.dt - 1e-9)));
        const double h = span / steps;
        const std::vector<double> e_half = linear_factor(grid, 0.5 * h);
        const std::vector<double> e_full = linear_factor(grid, h);
        for (int s = 0; s < steps; ++s) {
            rk4_step(grid, u, h, e_half, e_full);
            if (!finite(u)) throw SchemeBlowup(outputs[i - 1] + (s + 1) * h, traj);
        }
        traj.taus.push_back(outputs[i]);
        traj.fields.push_back(fourier::inverse(grid, u));
    }
    return traj;
}

void write_trace_csv(std::ostream& out, const TimeSlices& traj, double p) {
    csv::Writer w(out);
    w.row({"tau", "norm_l2", "norm_lp", "div_residual"});
    for (std::size_t i = 0; i < traj.taus.size(); ++i)
        w.row({csv::num(traj.taus[i]), csv::num(lp_norm(traj.fields[i], 2.0)), csv::num(lp_norm(traj.fields[i], p)),
               csv::num(relative_divergence(traj.fields[i]))});
}

}  // namespace ssns
