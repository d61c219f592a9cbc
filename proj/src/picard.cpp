#include "ssns/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "ssns/csv.hpp"

namespace ssns {

RecurrenceViolation::RecurrenceViolation(double l, double r)
    : NumericError("picard_step: K_{n+1} = " + csv::num(l) + " exceeds K0 + M K_n^2 = " + csv::num(r)),
      lhs(l),
      rhs(r) {}

std::vector<double> default_tau_grid(double tau_max, int nodes) {
    if (!(tau_max > 0.0) || nodes < 2) throw DomainError("default_tau_grid: need tau_max > 0 and >= 2 nodes");
    constexpr double alpha = 3.0;
    std::vector<double> out(nodes);
    for (int i = 0; i < nodes; ++i)
        out[i] = tau_max * std::expm1(alpha * i / (nodes - 1)) / std::expm1(alpha);
    out.back() = tau_max;
    return out;
}

double weighted_sup(const TimeSlices& V, double p) {
    const double gamma = 3.0 / p;
    double sup = 0.0;
    for (std::size_t i = 0; i < V.taus.size(); ++i)
        sup = std::max(sup, std::exp((1.0 - gamma) * V.taus[i]) * lp_norm(V.fields[i], p));
    return sup;
}

namespace {

double weighted_sup_difference(const TimeSlices& a, const TimeSlices& b, double p) {
    const double gamma = 3.0 / p;
    double sup = 0.0;
    for (std::size_t i = 0; i < a.taus.size(); ++i)
        sup = std::max(sup, std::exp((1.0 - gamma) * a.taus[i]) * lp_norm(a.fields[i] - b.fields[i], p));
    return sup;
}

double envelope_ratio(const TimeSlices& V, double p, double K_max) {
    const double gamma = 3.0 / p;
    double worst = 0.0;
    for (std::size_t i = 0; i < V.taus.size(); ++i) {
        const double norm = lp_norm(V.fields[i], p);
        if (norm == 0.0) continue;
        const double env = K_max * std::exp(-(1.0 - gamma) * V.taus[i]);
        worst = std::max(worst, env > 0.0 ? norm / env : std::numeric_limits<double>::infinity());
    }
    return worst;
}

}  // namespace

PicardState picard_init(const VectorField& V0, const std::vector<double>& tau_grid, const PicardParams& params) {
    if (!V0.all_finite()) throw PreconditionError("picard_init: non-finite initial data");
    if (relative_divergence(V0) > 1e-8) throw PreconditionError("picard_init: initial data is not divergence-free");
    if (tau_grid.empty() || tau_grid.front() != 0.0) throw DomainError("picard_init: tau grid must start at 0");
    params.rule.validate();

    PicardState s;
    s.params = params;
    s.gamma = lemmas::gamma_of_p(params.p);
    s.c1 = lemmas::c1_formula(s.gamma);
    s.M = 2.0 * params.c0 * s.c1;
    s.K0_bound = params.c0 * lp_norm(V0, params.p);
    s.K_max = lemmas::recurrence_majorant(s.K0_bound, s.M, 1).k_max;

    TimeSlices v0;
    v0.taus = tau_grid;
    v0.fields.reserve(tau_grid.size());
    for (double tau : tau_grid) v0.fields.push_back(leray_project(semigroup_apply(V0, tau, params.interp)));
    v0.validate();

    s.kn_ledger.push_back(weighted_sup(v0, params.p));
    s.iterates.push_back(std::move(v0));
    s.iterate_index.push_back(0);
    return s;
}

PicardState picard_step(PicardState s) {
    if (s.iterates.empty()) throw PreconditionError("picard_step: no iterate present");
    const TimeSlices& v0 = s.iterates.front();
    const TimeSlices& vn = s.iterates.back();

    TimeSlices next;
    next.taus = v0.taus;
    next.fields.reserve(v0.taus.size());
    DuhamelIntegrator G(vn, vn, s.params.rule, s.params.interp);
    for (std::size_t i = 0; i < v0.taus.size(); ++i) {
        VectorField f = v0.fields[i];
        f -= G(v0.taus[i]);
        next.fields.push_back(std::move(f));
    }

    const double p = s.params.p;
    const double kn = s.kn_ledger.back();
    const double k_next = weighted_sup(next, p);
    const double bound = s.K0_bound + s.M * kn * kn;
    if (k_next > bound * (1.0 + s.params.slack)) throw RecurrenceViolation(k_next, bound);

    s.kn_ledger.push_back(k_next);
    s.gap_history.push_back(weighted_sup_difference(next, vn, p));
    s.envelope_ratio.push_back(envelope_ratio(next, p, s.K_max));

    const int n = s.iterate_index.back() + 1;
    s.iterates.push_back(std::move(next));
    s.iterate_index.push_back(n);
    if (!s.params.keep_all_iterates && s.iterates.size() > 3) {
        s.iterates.erase(s.iterates.begin() + 1);
        s.iterate_index.erase(s.iterate_index.begin() + 1);
    }
    return s;
}

PicardResult picard_solve(const VectorField& V0, const std::vector<double>& tau_grid, const PicardParams& params,
                          int max_iter, double tol) {
    if (max_iter < 1) throw DomainError("picard_solve: max_iter must be >= 1");
    PicardState s = picard_init(V0, tau_grid, params);
    PicardReport r;
    const double v0_norm = lp_norm(V0, params.p);
    r.smallness_ok = 2.0 * params.c0 * params.c0 * s.c1 * v0_norm <= 1.0 / 6.0;
    if (!r.smallness_ok) r.warning = "smallness rule violated; convergence not guaranteed";

    for (int it = 0; it < max_iter; ++it) {
        s = picard_step(std::move(s));
        if (s.gap_history.back() < tol) {
            r.converged = true;
            break;
        }
    }
    r.iterations = s.iteration();

    PicardResult out;
    out.limit = s.latest();
    const TimeSlices& v0 = s.iterates.front();

    r.ledger = lemmas::make_ledger(params.p, params.c0, v0_norm);
    r.kn_ledger = s.kn_ledger;
    r.majorant = lemmas::recurrence_majorant(s.K0_bound, s.M, std::max(1, r.iterations)).sequence;
    r.gap_history = s.gap_history;
    r.envelope_ratio = s.envelope_ratio;
    if (params.keep_all_iterates)
        for (const auto& it : s.iterates) r.error_history.push_back(weighted_sup_difference(it, out.limit, params.p));

    DuhamelIntegrator G(out.limit, out.limit, params.rule, params.interp);
    r.taus = v0.taus;
    r.decay_ok = true;
    for (std::size_t i = 0; i < v0.taus.size(); ++i) {
        const double tau = v0.taus[i];
        VectorField res = out.limit.fields[i] - v0.fields[i];
        res += G(tau);
        const double norm = lp_norm(out.limit.fields[i], params.p);
        const double env = s.K_max * std::exp(-(1.0 - s.gamma) * tau);
        r.limit_norm.push_back(norm);
        r.envelope.push_back(env);
        r.eq_residual.push_back(lp_norm(res, params.p));
        if (norm > env * (1.0 + params.slack)) r.decay_ok = false;
    }
    out.report = std::move(r);
    return out;
}

void write_picard_csv(std::ostream& out, const PicardReport& r) {
    csv::Writer w(out);
    w.row({"n", "K_n", "majorant", "gap_n"});
    for (std::size_t n = 0; n < r.kn_ledger.size(); ++n) {
        const std::string gap = n < r.gap_history.size() ? csv::num(r.gap_history[n]) : "na";
        const std::string maj = n < r.majorant.size() ? csv::num(r.majorant[n]) : "na";
        w.row({std::to_string(n), csv::num(r.kn_ledger[n]), maj, gap});
    }
    w.separator();
    w.row({"tau", "norm_lp", "envelope", "fixed_point_residual"});
    for (std::size_t i = 0; i < r.taus.size(); ++i)
        w.row({csv::num(r.taus[i]), csv::num(r.limit_norm[i]), csv::num(r.envelope[i]), csv::num(r.eq_residual[i])});
}

}  // namespace ssns
