#include "ssns/semigroup.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "ssns/csv.hpp"
#include "ssns/errors.hpp"
#include "ssns/fourier.hpp"
#include "ssns/test_fields.hpp"

namespace ssns {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
constexpr double kPi = std::numbers::pi;

// Row j evaluates the source trigonometric interpolant at x_j = scale * y_j(target).
RowMatrix fourier_interpolation_matrix(const Grid& source, const Grid& target, double scale) {
    const int n = source.n();
    const double L = source.box_side();
    RowMatrix M = RowMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const double x = scale * target.coordinate(j);
        if (x < -0.5 * L - 1e-12 * L || x > 0.5 * L + 1e-12 * L) continue;
        for (int m = 0; m < n; ++m) {
            const double d = x - source.coordinate(m);
            double s = 1.0;
            for (int k = 1; k < n / 2; ++k) s += 2.0 * std::cos(2.0 * kPi * k * d / L);
            s += std::cos(kPi * n * d / L);
            M(j, m) = s / n;
        }
    }
    return M;
}

// Periodic cubic spline through the source samples, evaluated at the dilated points.
RowMatrix spline_interpolation_matrix(const Grid& source, const Grid& target, double scale) {
    const int n = source.n();
    const double L = source.box_side();
    const double h = source.spacing();
    // Second derivatives S = (6/h^2) A^{-1} D2 with A, D2 circulant.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), D2 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = 4.0;
        A(i, (i + 1) % n) += 1.0;
        A(i, (i + n - 1) % n) += 1.0;
        D2(i, i) = -2.0;
        D2(i, (i + 1) % n) += 1.0;
        D2(i, (i + n - 1) % n) += 1.0;
    }
    const Eigen::MatrixXd S = (6.0 / (h * h)) * A.partialPivLu().solve(D2);

    RowMatrix M = RowMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const double x = scale * target.coordinate(j);
        if (x < -0.5 * L - 1e-12 * L || x > 0.5 * L + 1e-12 * L) continue;
        const double u = (x - source.coordinate(0)) / h;
        double cell = std::floor(u);
        double t = u - cell;
        int i0 = static_cast<int>(cell);
        i0 = ((i0 % n) + n) % n;
        const int i1 = (i0 + 1) % n;
        const double a = 1.0 - t;
        const double ca = h * h / 6.0 * (a * a * a - a);
        const double cb = h * h / 6.0 * (t * t * t - t);
        M(j, i0) += a;
        M(j, i1) += t;
        for (int m = 0; m < n; ++m) M(j, m) += ca * S(i0, m) + cb * S(i1, m);
    }
    return M;
}

// Interpolation matrices depend only on (n, source L, target L, scale, method) and the
// Duhamel integral reuses the same handful of dilation factors every Picard sweep.
std::shared_ptr<const RowMatrix> interpolation_matrix(const Grid& source, const Grid& target,
                                                      double scale, Interpolation interp) {
    using Key = std::tuple<int, double, double, double, int>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const RowMatrix>> cache;
    static std::size_t cached_bytes = 0;
    constexpr std::size_t kBudget = 256u << 20;

    const Key key{source.n(), source.box_side(), target.box_side(), scale, static_cast<int>(interp)};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto M = std::make_shared<const RowMatrix>(
        interp == Interpolation::fourier_resample ? fourier_interpolation_matrix(source, target, scale)
                                                  : spline_interpolation_matrix(source, target, scale));
    std::lock_guard lock(mutex);
    const std::size_t bytes = sizeof(double) * M->size();
    if (cached_bytes + bytes > kBudget) {
        cache.clear();
        cached_bytes = 0;
    }
    cache.emplace(key, M);
    cached_bytes += bytes;
    return M;
}

// Applies M along each of the three axes of a row-major n^3 array.
std::vector<double> apply_separable(const RowMatrix& M, const std::vector<double>& in, int n) {
    using Map = Eigen::Map<RowMatrix>;
    using ConstMap = Eigen::Map<const RowMatrix>;
    const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
    std::vector<double> a(in.size()), b(in.size());
    // axis 0: (n) x (n^2)
    Map(a.data(), n, nn).noalias() = M * ConstMap(in.data(), n, nn);
    // axis 1: per slab i, (n) x (n)
    for (int i = 0; i < n; ++i) {
        Map(b.data() + i * nn, n, n).noalias() = M * ConstMap(a.data() + i * nn, n, n);
    }
    // axis 2: (n^2) x (n) times M^T
    Map(a.data(), nn, n).noalias() = ConstMap(b.data(), nn, n) * M.transpose();
    return a;
}

void require_finite_nonnegative(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string(what) + " must be finite and >= 0");
}

fourier::VectorCoeffs heat_coeffs(const VectorField& f, double t) {
    auto c = fourier::forward(f);
    if (t > 0.0) {
        for (auto& comp : c)
            fourier::apply_radial_multiplier(f.grid, comp,
                                             [t](double xi2) { return std::exp(-4.0 * kPi * kPi * xi2 * t); });
    }
    return c;
}

}  // namespace

const char* to_string(Interpolation interp) {
    return interp == Interpolation::fourier_resample ? "fourier_resample" : "cubic_spline";
}

Interpolation interpolation_from_string(const std::string& name) {
    if (name == "fourier_resample") return Interpolation::fourier_resample;
    if (name == "cubic_spline") return Interpolation::cubic_spline;
    throw DomainError("unknown interpolation '" + name + "'");
}

double t0(double tau) {
    require_finite_nonnegative(tau, "tau");
    return -std::expm1(-2.0 * tau);
}

VectorField heat_apply(const VectorField& f, double t) {
    require_finite_nonnegative(t, "heat time");
    if (t == 0.0) return f;
    return fourier::inverse(f.grid, heat_coeffs(f, t));
}

VectorField resample(const VectorField& f, const Grid& target, double scale, Interpolation interp) {
    if (target.n() != f.grid.n()) throw DimensionError("resample: target grid must have the same n");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("resample: scale must be positive");
    if (scale == 1.0 && target == f.grid) return f;
    const auto M = interpolation_matrix(f.grid, target, scale, interp);
    VectorField out(target);
    for (int c = 0; c < 3; ++c) out[c] = apply_separable(*M, f[c], f.grid.n());
    return out;
}

VectorField dilate(const VectorField& f, double lambda, Interpolation interp) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("dilate: lambda must lie in (0, 1]");
    return resample(f, f.grid, lambda, interp);
}

VectorField semigroup_apply_coeffs(const Grid& grid, fourier::VectorCoeffs coeffs, double tau,
                                   Interpolation interp) {
    const double t = t0(tau);
    if (t > 0.0) {
        for (auto& comp : coeffs)
            fourier::apply_radial_multiplier(grid, comp,
                                             [t](double xi2) { return std::exp(-4.0 * kPi * kPi * xi2 * t); });
    }
    VectorField smoothed = fourier::inverse(grid, coeffs);
    if (tau == 0.0) return smoothed;
    VectorField out = dilate(smoothed, std::exp(-tau), interp);
    out *= std::exp(-tau);
    return out;
}

VectorField semigroup_apply(const VectorField& V0, double tau, Interpolation interp) {
    require_finite_nonnegative(tau, "tau");
    if (tau == 0.0) return V0;
    return semigroup_apply_coeffs(V0.grid, fourier::forward(V0), tau, interp);
}

TensorField semigroup_gradient_apply(const VectorField& V0, double tau, Interpolation interp) {
    require_finite_nonnegative(tau, "tau");
    const TensorField J = gradient(heat_apply(V0, t0(tau)));
    if (tau == 0.0) return J;
    const double lambda = std::exp(-tau);
    const auto M = interpolation_matrix(V0.grid, V0.grid, lambda, interp);
    TensorField out(V0.grid);
    for (int c = 0; c < 9; ++c) {
        out.components[c] = apply_separable(*M, J.components[c], V0.grid.n());
        for (double& v : out.components[c]) v *= lambda * lambda;
    }
    return out;
}

// ---------------------------------------------------------------------------

double heat_ratio(const VectorField& w, double t, double p_tilde, double q_tilde, bool with_gradient) {
    const double denom = lp_norm(w, p_tilde);
    if (denom == 0.0) return 0.0;
    const double sigma = 3.0 / p_tilde - 3.0 / q_tilde + (with_gradient ? 1.0 : 0.0);
    const VectorField smoothed = heat_apply(w, t);
    const double num = with_gradient ? lp_norm(gradient(smoothed), q_tilde) : lp_norm(smoothed, q_tilde);
    return num * std::pow(t, 0.5 * sigma) / denom;
}

C0Family C0Family::doubled() const {
    C0Family f = *this;
    f.gaussians *= 2;
    f.random_fields *= 2;
    f.bumps *= 2;
    f.t_points *= 2;
    return f;
}

std::string C0Family::describe() const {
    std::ostringstream os;
    os << "n=" << grid.n() << " L=" << grid.box_side() << " gaussians=" << gaussians
       << " random_band_limited=" << random_fields << " bumps=" << bumps << " t_points=" << t_points
       << " seed=" << seed;
    return os.str();
}

namespace {

struct Member {
    VectorField field;
    double scale2;  // natural length scale squared; heat times are t = scale2 * theta
};

std::vector<Member> build_family(const C0Family& fam) {
    const Grid& g = fam.grid;
    const double L = g.box_side();
    const double xi_nyq = g.n() / (2.0 * L);
    std::vector<Member> members;
    // Gaussians: resolved to ~1e-3 at Nyquist and still decayed at the box edge after
    // the largest heat time (b = a (1 + 4 pi theta_max)).
    const double a_min = 7.0 / (kPi * xi_nyq * xi_nyq);
    const double a_max = std::max(a_min, kPi * L * L / 28.0 / (1.0 + 4.0 * kPi * 0.5));
    for (int i = 0; i < fam.gaussians; ++i) {
        const double f = fam.gaussians == 1 ? 0.0 : double(i) / (fam.gaussians - 1);
        const double a = a_min * std::pow(a_max / a_min, f);
        members.push_back({fields::gaussian_vector(g, a), a});
    }
    const int kmax = std::max(1, g.n() / 4);
    for (int i = 0; i < fam.random_fields; ++i) {
        const double wavelength = L / kmax;
        members.push_back({fields::random_band_limited(g, kmax, fam.seed * 1000003u + 17u * i + 1u),
                           wavelength * wavelength});
    }
    std::mt19937_64 rng(fam.seed + 7919u);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int i = 0; i < fam.bumps; ++i) {
        const double radius = L * (1.0 / 6.0 + (1.0 / 12.0) * 0.5 * (unit(rng) + 1.0));
        const fields::Point center{L / 16.0 * unit(rng), L / 16.0 * unit(rng), L / 16.0 * unit(rng)};
        VectorField b(g);
        b[0] = fields::tensor_bump(g, center, radius, 6.0).values;
        members.push_back({std::move(b), radius * radius / 16.0});
    }
    return members;
}

}  // namespace

C0Estimate estimate_c0(double p_tilde, double q_tilde, bool with_gradient, const C0Family& family) {
    if (!(p_tilde > 1.0) || !std::isfinite(q_tilde) || !(p_tilde <= q_tilde))
        throw DomainError("estimate_c0: requires 1 < p_tilde <= q_tilde < infinity");
    if (family.t_points < 2) throw DomainError("estimate_c0: need at least two heat times");

    C0Estimate est{p_tilde, q_tilde, with_gradient, 0.0, family.describe(), {}};
    const double sigma = 3.0 / p_tilde - 3.0 / q_tilde + (with_gradient ? 1.0 : 0.0);
    const auto members = build_family(family);
    constexpr double theta_min = 1e-3, theta_max = 0.5;
    for (std::size_t id = 0; id < members.size(); ++id) {
        const Member& m = members[id];
        if (sigma == 0.0) {
            // t -> 0 limit of the unweighted ratio.
            est.samples.push_back({0.0, static_cast<int>(id), 1.0});
        }
        for (int i = 0; i < family.t_points; ++i) {
            const double theta =
                theta_min * std::pow(theta_max / theta_min, double(i) / (family.t_points - 1));
            const double t = m.scale2 * theta;
            est.samples.push_back({t, static_cast<int>(id), heat_ratio(m.field, t, p_tilde, q_tilde, with_gradient)});
        }
    }
    for (const auto& s : est.samples) est.value = std::max(est.value, s.ratio);
    return est;
}

void write_c0_csv(std::ostream& out, const C0Estimate& e) {
    csv::Writer w(out);
    w.comment("family: " + e.family);
    w.row({"p_tilde", "q_tilde", "gradient", "t", "family_member_id", "ratio"});
    for (const auto& s : e.samples) {
        w.row({csv::num(e.p_tilde), csv::num(e.q_tilde), e.with_gradient ? "1" : "0", csv::num(s.t),
               std::to_string(s.member_id), csv::num(s.ratio)});
    }
    w.row({csv::num(e.p_tilde), csv::num(e.q_tilde), e.with_gradient ? "1" : "0", "sup", "all",
           csv::num(e.value)});
}

}  // namespace ssns
