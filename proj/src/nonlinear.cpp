#include "ssns/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ssns/csv.hpp"
#include "ssns/errors.hpp"

namespace ssns {

using cd = std::complex<double>;

void TimeSlices::validate() const {
    if (taus.empty() || taus.size() != fields.size())
        throw DimensionError("TimeSlices: taus and fields must be nonempty and of equal length");
    if (taus.front() != 0.0) throw DomainError("TimeSlices: first tau must be 0");
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (!(taus[i] > taus[i - 1])) throw DomainError("TimeSlices: taus must be strictly increasing");
        require_same_grid(fields[0].grid, fields[i].grid, "TimeSlices");
    }
}

std::size_t TimeSlices::interval(double s) const {
    if (taus.size() < 2) return 0;
    auto it = std::upper_bound(taus.begin(), taus.end(), s);
    std::size_t i = it == taus.begin() ? 0 : static_cast<std::size_t>(it - taus.begin()) - 1;
    return std::min(i, taus.size() - 2);
}

VectorField TimeSlices::at(double s) const {
    if (!(s >= 0.0 && s <= tau_max())) throw DomainError("TimeSlices::at: time outside the trajectory");
    if (taus.size() == 1) return fields[0];
    const std::size_t i = interval(s);
    const double theta = (s - taus[i]) / (taus[i + 1] - taus[i]);
    if (theta == 0.0) return fields[i];
    if (theta == 1.0) return fields[i + 1];
    VectorField out = fields[i];
    out *= 1.0 - theta;
    out.add_scaled(theta, fields[i + 1]);
    return out;
}

// ---------------------------------------------------------------------------

fourier::VectorCoeffs bilinear_F_coeffs(const VectorField& U, const VectorField& V) {
    fourier::VectorCoeffs c = fourier::tensor_divergence_coeffs(U, V);
    fourier::leray_project_in_place(U.grid, c);
    for (auto& comp : c)
        for (auto& v : comp) v *= 2.0;
    return c;
}

VectorField bilinear_F(const VectorField& U, const VectorField& V) {
    return fourier::inverse(U.grid, bilinear_F_coeffs(U, V));
}

ScalarField pressure_from_velocity(const VectorField& U) {
    const Grid& grid = U.grid;
    fourier::VectorCoeffs uc = fourier::forward(U);
    for (auto& comp : uc) fourier::dealias(grid, comp);
    const VectorField Ud = fourier::inverse(grid, uc);

    fourier::Coeffs P(grid.spectral_size(), 0.0);
    std::vector<double> product(grid.size());
    for (int j = 0; j < 3; ++j) {
        for (int k = j; k < 3; ++k) {
            for (std::size_t m = 0; m < product.size(); ++m) product[m] = Ud[j][m] * Ud[k][m];
            fourier::Coeffs pc = fourier::forward(grid, product);
            fourier::dealias(grid, pc);
            const double mult = j == k ? 1.0 : 2.0;
            fourier::for_each_mode(grid, [&](std::size_t idx, int k1, int k2, int k3) {
                const double q[3] = {grid.derivative_wavenumber(k1), grid.derivative_wavenumber(k2),
                                     grid.derivative_wavenumber(k3)};
                const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
                if (q2 == 0.0) return;
                P[idx] -= mult * q[j] * q[k] / q2 * pc[idx];
            });
        }
    }
    ScalarField out(grid);
    out.values = fourier::inverse(grid, P);
    return out;
}

// ---------------------------------------------------------------------------

DuhamelIntegrator::DuhamelIntegrator(const TimeSlices& U, const TimeSlices& V, QuadratureRule rule,
                                     Interpolation interp)
    : U_(U), V_(V), rule_(rule), interp_(interp) {
    rule_.validate();
    U_.validate();
    V_.validate();
    require_same_grid(U_.grid(), V_.grid(), "duhamel_G");
    if (U_.taus != V_.taus) throw DimensionError("duhamel_G: trajectories need the same tau grid");
}

const DuhamelIntegrator::Pieces& DuhamelIntegrator::pieces(std::size_t i) {
    auto it = cache_.find(i);
    if (it != cache_.end()) return it->second;
    Pieces p;
    const std::size_t j = std::min(i + 1, U_.taus.size() - 1);
    p.aa = bilinear_F_coeffs(U_.fields[i], V_.fields[i]);
    p.bb = bilinear_F_coeffs(U_.fields[j], V_.fields[j]);
    p.ab = bilinear_F_coeffs(U_.fields[i], V_.fields[j]);
    p.ba = bilinear_F_coeffs(U_.fields[j], V_.fields[i]);
    return cache_.emplace(i, std::move(p)).first->second;
}

fourier::VectorCoeffs DuhamelIntegrator::integrand_coeffs(double s) {
    const std::size_t i = U_.interval(s);
    const Pieces& p = pieces(i);
    double theta = 0.0;
    if (U_.taus.size() > 1) theta = (s - U_.taus[i]) / (U_.taus[i + 1] - U_.taus[i]);
    const double a = 1.0 - theta, b = theta;
    const double waa = a * a, wab = a * b, wba = b * a, wbb = b * b;
    fourier::VectorCoeffs out;
    for (int c = 0; c < 3; ++c) {
        out[c].resize(p.aa[c].size());
        for (std::size_t m = 0; m < out[c].size(); ++m)
            out[c][m] = waa * p.aa[c][m] + wab * p.ab[c][m] + wba * p.ba[c][m] + wbb * p.bb[c][m];
    }
    return out;
}

VectorField DuhamelIntegrator::operator()(double tau) {
    if (!(tau >= 0.0) || tau > U_.tau_max() * (1.0 + 1e-14))
        throw DomainError("duhamel_G: tau outside the trajectory range");
    tau = std::min(tau, U_.tau_max());
    const Grid& grid = U_.grid();
    VectorField acc(grid);
    if (tau == 0.0) return acc;
    // Slice times are kinks of the piecewise-linear trajectories.
    const QuadratureNodes q = graded_nodes(rule_, 0.0, tau, U_.taus);
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const double s = q.nodes[k];
        acc.add_scaled(q.weights[k], semigroup_apply_coeffs(grid, integrand_coeffs(s), tau - s, interp_));
    }
    // The semigroup commutes with the projector; projecting again removes what the
    // dilation leaks through the periodic boundary.
    return leray_project(acc);
}

VectorField duhamel_G(const TimeSlices& U, const TimeSlices& V, double tau, const QuadratureRule& rule,
                      Interpolation interp) {
    DuhamelIntegrator g(U, V, rule, interp);
    return g(tau);
}

// ---------------------------------------------------------------------------

namespace {

// 1 inside |y| < radius.
std::vector<char> ball_mask(const Grid& grid, double radius) {
    const int n = grid.n();
    std::vector<char> mask(grid.size(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double y1 = grid.coordinate(i), y2 = grid.coordinate(j), y3 = grid.coordinate(k);
                mask[grid.index(i, j, k)] = y1 * y1 + y2 * y2 + y3 * y3 < radius * radius;
            }
    return mask;
}

}  // namespace

SteadyResidual steady_residual(const VectorField& U) {
    if (!U.all_finite()) throw PreconditionError("steady_residual: non-finite input");
    if (relative_divergence(U) > 1e-6) throw PreconditionError("steady_residual: input is not divergence-free");
    const Grid& grid = U.grid;
    VectorField r = U;
    r += coordinate_advection(U);
    r.add_scaled(2.0, tensor_divergence(U, U));
    r.add_scaled(2.0, gradient(pressure_from_velocity(U)));
    r.add_scaled(-2.0, laplacian(U));

    SteadyResidual out;
    out.trusted_radius = grid.box_side() / 4.0;
    const std::vector<char> mask = ball_mask(grid, out.trusted_radius);
    VectorField u_in = U;
    for (int c = 0; c < 3; ++c)
        for (std::size_t m = 0; m < grid.size(); ++m)
            if (!mask[m]) r[c][m] = u_in[c][m] = 0.0;
    out.l2_abs = lp_norm(r, 2.0);
    const double base = lp_norm(u_in, 2.0);
    out.l2_rel = base > 0.0 ? out.l2_abs / base : 0.0;
    out.field = std::move(r);
    return out;
}

double weak_steady_residual(const VectorField& U, const VectorField& phi, double support_tol) {
    require_same_grid(U.grid, phi.grid, "weak_steady_residual");
    const Grid& grid = U.grid;
    const int n = grid.n();

    const std::vector<double> mag = magnitude(phi);
    const double peak = *std::max_element(mag.begin(), mag.end());
    if (peak > 0.0) {
        const std::vector<char> mask = ball_mask(grid, grid.box_side() / 4.0);
        for (std::size_t m = 0; m < grid.size(); ++m)
            if (!mask[m] && mag[m] > support_tol * peak)
                throw PreconditionError("weak_steady_residual: test function reaches the untrusted region");
        if (relative_divergence(phi) > 1e-8)
            throw PreconditionError("weak_steady_residual: test function is not divergence-free");
    }

    // div(phi (x) y)_i = d_j (phi_i y_j), differentiated spectrally to mirror the strong form.
    VectorField phi_y[3] = {VectorField(grid), VectorField(grid), VectorField(grid)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t m = grid.index(i, j, k);
                const double y[3] = {grid.coordinate(i), grid.coordinate(j), grid.coordinate(k)};
                for (int a = 0; a < 3; ++a)
                    for (int c = 0; c < 3; ++c) phi_y[a][c][m] = phi[c][m] * y[a];
            }
    VectorField drift(grid);
    for (int a = 0; a < 3; ++a) {
        const TensorField J = gradient(phi_y[a]);
        for (int c = 0; c < 3; ++c)
            for (std::size_t m = 0; m < grid.size(); ++m) drift[c][m] += J.at(c, a)[m];
    }

    // Products as in the strong form: band-limited factors, dealiased product.
    fourier::VectorCoeffs uc = fourier::forward(U);
    for (auto& comp : uc) fourier::dealias(grid, comp);
    const VectorField Ud = fourier::inverse(grid, uc);
    const TensorField gphi = gradient(phi);
    double nonlinear = 0.0;
    std::vector<double> product(grid.size());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            for (std::size_t m = 0; m < product.size(); ++m) product[m] = Ud[j][m] * Ud[i][m];
            fourier::Coeffs pc = fourier::forward(grid, product);
            fourier::dealias(grid, pc);
            const std::vector<double> pd = fourier::inverse(grid, pc);
            const auto& g = gphi.at(i, j);
            for (std::size_t m = 0; m < product.size(); ++m) nonlinear += g[m] * pd[m];
        }
    nonlinear *= grid.cell_volume();

    return l2_inner(phi, U) - l2_inner(drift, U) - 2.0 * nonlinear - 2.0 * l2_inner(laplacian(phi), U);
}

HolderPair holder_gap(const VectorField& R, const VectorField& phi, double p) {
    if (!(p > 2.0) || !std::isfinite(p)) throw DomainError("holder_gap: p must be finite and exceed 2");
    require_same_grid(R.grid, phi.grid, "holder_gap");
    HolderPair out;
    out.q = p / (p - 2.0);
    const TensorField g = gradient(phi);
    double sum = 0.0;
    for (std::size_t m = 0; m < R.grid.size(); ++m)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) sum += g.at(i, j)[m] * R[i][m] * R[j][m];
    out.lhs = std::abs(sum * R.grid.cell_volume());
    const double r = lp_norm(R, p);
    out.rhs = lp_norm(g, out.q) * r * r;
    return out;
}

void write_residual_csv(std::ostream& out, const std::vector<ResidualRow>& rows) {
    csv::Writer w(out);
    w.row({"tag", "tau_or_na", "residual_l2_rel", "trusted_radius"});
    for (const auto& r : rows)
        w.row({r.tag, std::isnan(r.tau) ? "na" : csv::num(r.tau), csv::num(r.residual_l2_rel),
               csv::num(r.trusted_radius)});
}

}  // namespace ssns
