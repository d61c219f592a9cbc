#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace ssns::lemmas {

/// gamma = 3/p; DomainError unless 3 < p < infinity.
double gamma_of_p(double p);

/// Constant bounding e^{-tau} \int_0^tau e^{gamma s} (1 - e^{-2(tau-s)})^{-(1+gamma)/2} ds.
/// (2/(1-gamma) + max(1/gamma, 1/2)) (1 - e^{-2})^{-(1+gamma)/2}.
double c1_formula(double gamma);
/// (2/(1-gamma) + 1/2) (1 - e^{-2})^{-(1+gamma)/2}, reported for comparison.
double c1_short_form(double gamma);
/// (2/(1-gamma) + 1/gamma) (1 - e^{-2})^{-(1+gamma)/2}.
double c1_two_piece_form(double gamma);

/// The weakly singular integral above at one tau, self-converged by panel doubling
/// to `rel_tol`. Throws NumericError if the doubling never settles below 1e-6.
double c1_integral(double gamma, double tau, double rel_tol = 1e-10);

struct C1Sup {
    double sup = 0.0;
    double argmax = 0.0;
    std::vector<std::pair<double, double>> trace;  ///< (tau, value)
};

/// Max of c1_integral over n_tau uniform nodes of [0, tau_max] (tau_max >= 4).
C1Sup c1_integral_sup(double gamma, double tau_max, int n_tau);

struct InequalityReport {
    std::size_t samples = 0;
    double min_slack = 0.0;
    double argmin = 0.0;
    bool pass = false;
};

/// |1 - e^{-2x}| >= (1 - e^{-2}) |x| on a uniform grid of [0, 1].
InequalityReport basic_inequality_check(std::size_t samples);

struct Majorant {
    std::vector<double> sequence;        ///< K~_0 .. K~_{n_max}
    double k_max = 0.0;                  ///< (4/3) K0 when certified, else the fixed point or inf
    bool certified = false;              ///< K0 M <= 1/6 and every bound verified
    std::optional<double> fixed_point;   ///< (1 - sqrt(1 - 4 K0 M)) / (2M) when real
    double two_m_kmax = 0.0;
};

/// Iterates K~_{n+1} = K0 + M K~_n^2 and checks the bounded-growth lemma.
Majorant recurrence_majorant(double K0, double M, int n_max);

struct TauM {
    std::optional<std::size_t> index;  ///< empty: the trace never becomes small enough
    double tau = 0.0;
    double threshold_norm = 0.0;       ///< 1 / (12 c0^2 c1)
};

/// First trace node with 2 c0^2 c1 ||U||_p <= 1/6. No interpolation between nodes.
TauM tau_m_rule(const std::vector<std::pair<double, double>>& norm_trace, double c0, double c1);

/// Constants of the contraction argument for one exponent p.
struct ConstantsLedger {
    double p = 0.0;
    double gamma = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double M = 0.0;       ///< 2 c0 c1
    double K0 = 0.0;      ///< c0 ||V0||_p
    double K_max = 0.0;
    double tau_m = 0.0;
    bool certified = false;  ///< K0 M <= 1/6
};

/// Fills gamma, c1, M, K0 = c0 * v0_norm and K_max from the majorant.
ConstantsLedger make_ledger(double p, double c0, double v0_norm, double tau_m = 0.0);

}  // namespace ssns::lemmas
