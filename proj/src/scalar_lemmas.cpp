#include "ssns/scalar_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssns/errors.hpp"
#include "ssns/quadrature.hpp"

namespace ssns::lemmas {
namespace {


double c1_prefactor(double gamma) { return std::pow(-std::expm1(-2.0), -(1.0 + gamma) / 2.0); }

void require_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
}

// \int_0^{T} e^{-gamma u} (1 - e^{-2u})^{-(1+gamma)/2} du after u = T v^g, g = 2/(1-gamma),
// which turns the endpoint singularity into a bounded integrand in v.
double singular_piece(double gamma, double T, int panels, const QuadratureNodes& gl) {
    const double g = 2.0 / (1.0 - gamma);
    const double e = -(1.0 + gamma) / 2.0;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = double(p) / panels, hi = double(p + 1) / panels;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double v = mid + half * gl.nodes[k];
            const double u = T * std::pow(v, g);
            const double jac = g * T * std::pow(v, g - 1.0);
            sum += half * gl.weights[k] * jac * std::exp(-gamma * u) * std::pow(-std::expm1(-2.0 * u), e);
        }
    }
    return sum;
}

// Smooth remainder over [a, b] with a >= 1.
double smooth_piece(double gamma, double a, double b, int panels, const QuadratureNodes& gl) {
    if (b <= a) return 0.0;
    const double e = -(1.0 + gamma) / 2.0;
    double sum = 0.0;
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double half = 0.5 * width, mid = lo + half;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double u = mid + half * gl.nodes[k];
            sum += half * gl.weights[k] * std::exp(-gamma * u) * std::pow(-std::expm1(-2.0 * u), e);
        }
    }
    return sum;
}

}  // namespace

double gamma_of_p(double p) {
    if (!(p > 3.0) || !std::isfinite(p)) throw DomainError("gamma_of_p: p must lie in (3, infinity)");
    return 3.0 / p;
}

double c1_formula(double gamma) {
    require_gamma(gamma);
    return (2.0 / (1.0 - gamma) + std::max(1.0 / gamma, 0.5)) * c1_prefactor(gamma);
}

double c1_short_form(double gamma) {
    require_gamma(gamma);
    return (2.0 / (1.0 - gamma) + 0.5) * c1_prefactor(gamma);
}

double c1_two_piece_form(double gamma) {
    require_gamma(gamma);
    return (2.0 / (1.0 - gamma) + 1.0 / gamma) * c1_prefactor(gamma);
}

double c1_integral(double gamma, double tau, double rel_tol) {
    require_gamma(gamma);
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("c1_integral: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    const QuadratureNodes gl = gauss_legendre(8);
    const double split = std::min(tau, 1.0);
    auto evaluate = [&](int panels) {
        const int tail_panels = std::max(1, static_cast<int>(std::ceil(panels * (tau - split))));
        const double integral =
            singular_piece(gamma, split, panels, gl) + smooth_piece(gamma, split, tau, tail_panels, gl);
        return std::exp(-(1.0 - gamma) * tau) * integral;
    };
    int panels = 4;
    double prev = evaluate(panels);
    double change = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 12; ++level) {
        panels *= 2;
        const double next = evaluate(panels);
        change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
        prev = next;
        if (change < rel_tol) return next;
    }
    if (change > 1e-6) throw NumericError("c1_integral: quadrature did not converge");
    return prev;
}

C1Sup c1_integral_sup(double gamma, double tau_max, int n_tau) {
    require_gamma(gamma);
    if (!(tau_max >= 4.0)) throw DomainError("c1_integral_sup: tau_max must be >= 4");
    if (n_tau < 2) throw DomainError("c1_integral_sup: need at least two tau nodes");
    C1Sup out;
    for (int i = 0; i < n_tau; ++i) {
        const double tau = tau_max * i / (n_tau - 1);
        const double v = c1_integral(gamma, tau);
        out.trace.emplace_back(tau, v);
        if (v > out.sup) {
            out.sup = v;
            out.argmax = tau;
        }
    }
    return out;
}

InequalityReport basic_inequality_check(std::size_t samples) {
    if (samples < 2) throw DomainError("basic_inequality_check: need at least two samples");
    InequalityReport r;
    r.samples = samples;
    r.min_slack = std::numeric_limits<double>::infinity();
    const double c = -std::expm1(-2.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = double(i) / double(samples - 1);
        const double slack = std::abs(-std::expm1(-2.0 * x)) - c * std::abs(x);
        if (slack < r.min_slack) {
            r.min_slack = slack;
            r.argmin = x;
        }
    }
    r.pass = r.min_slack >= 0.0;
    return r;
}

Majorant recurrence_majorant(double K0, double M, int n_max) {
    if (n_max < 1) throw DomainError("recurrence_majorant: n_max must be >= 1");
    if (!(K0 >= 0.0) || !(M > 0.0)) throw DomainError("recurrence_majorant: need K0 >= 0 and M > 0");
    Majorant out;
    out.sequence.reserve(n_max + 1);
    double k = K0;
    out.sequence.push_back(k);
    for (int n = 0; n < n_max; ++n) {
        k = K0 + M * k * k;
        if (!std::isfinite(k) || k > 1e300) k = std::numeric_limits<double>::infinity();
        out.sequence.push_back(k);
    }
    const double disc = 1.0 - 4.0 * K0 * M;
    if (disc >= 0.0) out.fixed_point = (1.0 - std::sqrt(disc)) / (2.0 * M);

    constexpr double kTol = 1e-12;
    if (K0 * M <= 1.0 / 6.0 + kTol) {
        const double k_max = 4.0 / 3.0 * K0;
        const bool bounded = std::all_of(out.sequence.begin(), out.sequence.end(),
                                         [&](double v) { return v <= k_max * (1.0 + kTol) + kTol; });
        out.two_m_kmax = 2.0 * M * k_max;
        out.certified = bounded && out.two_m_kmax <= 4.0 / 9.0 + kTol;
        out.k_max = k_max;
    } else {
        out.k_max = out.fixed_point.value_or(std::numeric_limits<double>::infinity());
        out.two_m_kmax = 2.0 * M * out.k_max;
    }
    return out;
}

TauM tau_m_rule(const std::vector<std::pair<double, double>>& norm_trace, double c0, double c1) {
    if (norm_trace.empty()) throw DomainError("tau_m_rule: empty trace");
    TauM r;
    r.threshold_norm = 1.0 / (12.0 * c0 * c0 * c1);
    for (std::size_t i = 0; i < norm_trace.size(); ++i) {
        if (2.0 * c0 * c0 * c1 * norm_trace[i].second <= 1.0 / 6.0) {
            r.index = i;
            r.tau = norm_trace[i].first;
            break;
        }
    }
    return r;
}

ConstantsLedger make_ledger(double p, double c0, double v0_norm, double tau_m) {
    ConstantsLedger l;
    l.p = p;
    l.gamma = gamma_of_p(p);
    l.c0 = c0;
    l.c1 = c1_formula(l.gamma);
    l.M = 2.0 * c0 * l.c1;
    l.K0 = c0 * v0_norm;
    l.tau_m = tau_m;
    const Majorant maj = recurrence_majorant(l.K0, l.M, 64);
    l.certified = l.K0 * l.M <= 1.0 / 6.0;
    l.K_max = maj.k_max;
    return l;
}

}  // namespace ssns::lemmas
