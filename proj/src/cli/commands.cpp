#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "ssns/csv.hpp"
#include "ssns/direct_solver.hpp"
#include "ssns/errors.hpp"
#include "ssns/field_io.hpp"
#include "ssns/picard.hpp"
#include "ssns/rescaling.hpp"
#include "ssns/scalar_lemmas.hpp"
#include "ssns/semigroup.hpp"
#include "ssns/test_fields.hpp"

namespace ssns::cli {

namespace fs = std::filesystem;
using csv::num;

namespace {

void log(const Options& o, const std::string& msg) {
    if (o.verbose) std::cerr << msg << '\n';
}

std::ofstream open_csv(const Options& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    std::ofstream out(fs::path(o.out_dir) / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (fs::path(o.out_dir) / name).string());
    return out;
}

VectorField initial_data(const RunConfig& c, const Grid& grid) {
    const DataConfig& d = c.data;
    VectorField v(grid);
    if (d.kind == "zero") return v;
    if (d.kind == "solenoidal_gaussian") {
        v = fields::solenoidal_gaussian(grid, d.width, 1.0);
    } else if (d.kind == "localized_random") {
        v = fields::localized_random_solenoidal(grid, d.kmax, d.envelope_width, c.seed);
    } else {
        try {
            v = io::load_vector_field(d.path);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("data.path: ") + e.what());
        }
    }
    if (d.lp_norm) {
        const double n = lp_norm(v, c.p);
        if (n > 0.0) v *= *d.lp_norm / n;
    } else {
        v *= d.amplitude;
    }
    return v;
}

struct ResolvedC0 {
    double value = 1.0;
    std::string source;
    std::vector<C0Estimate> estimates;
};

std::vector<C0Pair> ledger_pairs(double p) { return {{p, p, false}, {p, p, true}, {p / 2.0, p, true}}; }

ResolvedC0 resolve_c0(const RunConfig& c, const Options& o) {
    ResolvedC0 r;
    if (c.c0.mode == "fixed") {
        r.value = c.c0.value;
        r.source = "fixed";
        return r;
    }
    r.value = 0.0;
    for (const C0Pair& pr : ledger_pairs(c.p)) {
        log(o, "estimating c0 for (" + num(pr.p_tilde) + ", " + num(pr.q_tilde) + ", " +
                   (pr.with_gradient ? "gradient" : "value") + ")");
        r.estimates.push_back(estimate_c0(pr.p_tilde, pr.q_tilde, pr.with_gradient, c.c0.family));
        r.value = std::max(r.value, r.estimates.back().value);
    }
    r.source = "empirical max over (p,p), (p,p) gradient, (p/2,p) gradient; " + c.c0.family.describe();
    return r;
}

std::string ledger_line(const lemmas::ConstantsLedger& l) {
    return "ledger p=" + num(l.p) + " gamma=" + num(l.gamma) + " c0=" + num(l.c0) + " c1=" + num(l.c1) +
           " M=" + num(l.M) + " K0=" + num(l.K0) + " K_max=" + num(l.K_max) + " tau_m=" + num(l.tau_m) +
           " certified=" + (l.certified ? "1" : "0");
}

void write_header(csv::Writer& w, const char* command, const RunConfig& c, const lemmas::ConstantsLedger& l,
                  const std::string& c0_source) {
    w.comment("schema_version=" + std::to_string(csv::kSchemaVersion));
    w.comment(std::string("command=") + command);
    w.comment("config=" + dump_config(c));
    w.comment(ledger_line(l));
    w.comment("c0_source=" + c0_source);
}

std::vector<double> uniform_taus(double t_end, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = t_end * i / (count - 1);
    out.back() = t_end;
    return out;
}

PicardParams picard_params(const RunConfig& c, double c0) {
    PicardParams p;
    p.p = c.p;
    p.c0 = c0;
    p.rule = c.quadrature;
    p.interp = c.interpolation;
    return p;
}

void dump_slices(const Options& o, const std::string& stem, const TimeSlices& traj) {
    fs::create_directories(o.out_dir);
    for (std::size_t i = 0; i < traj.taus.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu.ssns", stem.c_str(), i);
        io::save(fs::path(o.out_dir) / name, traj.fields[i]);
    }
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_verify_lemmas(const RunConfig& c, const Options& o) {
    const LemmaConfig& lc = c.lemmas;
    const Grid grid(c.grid.n, c.grid.L);
    const ResolvedC0 c0 = resolve_c0(c, o);
    const lemmas::ConstantsLedger ledger = lemmas::make_ledger(c.p, c0.value, lp_norm(initial_data(c, grid), c.p));

    struct Row {
        std::string id, params;
        double lhs, rhs, slack;
        std::string pass;
    };
    std::vector<Row> rows;
    auto add = [&](std::string id, std::string params, double lhs, double rhs, bool ok) {
        rows.push_back({std::move(id), std::move(params), lhs, rhs, rhs - lhs, ok ? "1" : "0"});
    };

    log(o, "gamma and c1 families");
    for (double p : {3.5, 4.0, 6.0, 12.0}) {
        const double g = lemmas::gamma_of_p(p);
        add("gamma_of_p", "p=" + num(p), g, 3.0 / p, g == 3.0 / p && g > 0.0 && g < 1.0);
    }
    for (double g : lc.gammas) {
        const double f = lemmas::c1_formula(g);
        const double s = lemmas::c1_short_form(g), t = lemmas::c1_two_piece_form(g);
        add("c1_forms", "gamma=" + num(g), s, t, f >= std::max(s, t));
        const lemmas::C1Sup sup = lemmas::c1_integral_sup(g, lc.tau_max, lc.n_tau);
        add("c1_integral_sup", "gamma=" + num(g), sup.sup, f, sup.sup <= f);
        const double tau = 0.01;
        const double small = lemmas::c1_integral(g, tau);
        const double bound = f * std::pow(tau, (1.0 - g) / 2.0) * std::exp(-(1.0 - g) * tau);
        add("c1_small_tau", "gamma=" + num(g) + ";tau=" + num(tau), small, bound, small <= bound);
    }

    log(o, "basic inequality");
    const lemmas::InequalityReport ineq = lemmas::basic_inequality_check(static_cast<std::size_t>(lc.inequality_samples));
    add("basic_inequality", "samples=" + std::to_string(ineq.samples), 0.0, ineq.min_slack, ineq.pass);

    log(o, "recurrence families");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < lc.random_pairs; ++i) {
        const double K0 = 10.0 * (1.0 - unit(rng));
        const double M = (1.0 - unit(rng)) / (6.0 * K0);
        const lemmas::Majorant m = lemmas::recurrence_majorant(K0, M, lc.n_max);
        const double kmax = *std::max_element(m.sequence.begin(), m.sequence.end());
        add("recurrence_certified", "K0=" + num(K0) + ";M=" + num(M), kmax, 4.0 / 3.0 * K0,
            m.certified && 2.0 * M * kmax < 0.5);
    }
    {
        const lemmas::Majorant m = lemmas::recurrence_majorant(1.0, 1.0 / 6.0, lc.n_max);
        const double fp = m.fixed_point.value_or(std::numeric_limits<double>::infinity());
        add("recurrence_boundary", "K0=1;M=1/6", fp, 4.0 / 3.0, m.certified && fp <= 4.0 / 3.0);
    }
    for (int i = 0; i < lc.divergent_pairs; ++i) {
        const double K0 = 10.0 * (1.0 - unit(rng));
        const double M = 0.25 * (1.0 + 3.0 * (1.0 - unit(rng))) / K0;
        const lemmas::Majorant m = lemmas::recurrence_majorant(K0, M, lc.n_max);
        add("recurrence_divergent", "K0=" + num(K0) + ";M=" + num(M), K0 * M, 0.25,
            !m.certified && !m.fixed_point.has_value());
    }
    {
        const lemmas::Majorant m = lemmas::recurrence_majorant(lc.K0, lc.M, lc.n_max);
        const double kmax = *std::max_element(m.sequence.begin(), m.sequence.end());
        rows.push_back({"recurrence_config", "K0=" + num(lc.K0) + ";M=" + num(lc.M), kmax, 4.0 / 3.0 * lc.K0,
                        4.0 / 3.0 * lc.K0 - kmax, m.certified ? "1" : "uncertified"});
    }

    for (auto [p, q, expect] : {std::tuple{4.0, std::numeric_limits<double>::infinity(), true},
                                std::tuple{3.0, std::numeric_limits<double>::infinity(), true},
                                std::tuple{4.0, 4.0, false}}) {
        const bool got = lps_check(p, q);
        add("lps_check", "p=" + num(p) + ";q=" + num(q), 3.0 / p + (std::isinf(q) ? 0.0 : 2.0 / q), 1.0,
            got == expect);
    }

    std::ofstream out = open_csv(o, "verify-lemmas.csv");
    csv::Writer w(out);
    write_header(w, "verify-lemmas", c, ledger, c0.source);
    w.row({"check_id", "gamma_or_params", "lhs", "rhs", "slack", "pass"});
    int failures = 0;
    for (const Row& r : rows) {
        w.row({r.id, r.params, num(r.lhs), num(r.rhs), num(r.slack), r.pass});
        if (r.pass == "0") {
            ++failures;
            std::cerr << "FAILED " << r.id << ',' << r.params << ',' << num(r.lhs) << ',' << num(r.rhs) << '\n';
        }
    }
    return failures == 0 ? kPass : kNumericFailure;
}

int cmd_estimate_c0(const RunConfig& c, const Options& o) {
    const std::vector<C0Pair> pairs = c.c0_pairs.empty() ? ledger_pairs(c.p) : c.c0_pairs;
    std::vector<C0Estimate> estimates;
    double ledger_c0 = 0.0;
    for (const C0Pair& pr : pairs) {
        log(o, "estimating c0 for (" + num(pr.p_tilde) + ", " + num(pr.q_tilde) + ")");
        estimates.push_back(estimate_c0(pr.p_tilde, pr.q_tilde, pr.with_gradient, c.c0.family));
        ledger_c0 = std::max(ledger_c0, estimates.back().value);
    }
    const Grid grid(c.grid.n, c.grid.L);
    const lemmas::ConstantsLedger ledger = lemmas::make_ledger(c.p, ledger_c0, lp_norm(initial_data(c, grid), c.p));

    std::ofstream out = open_csv(o, "estimate-c0.csv");
    csv::Writer w(out);
    write_header(w, "estimate-c0", c, ledger, "empirical max over the listed pairs; " + c.c0.family.describe());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (i) w.separator();
        write_c0_csv(out, estimates[i]);
    }
    return kPass;
}

int cmd_picard(const RunConfig& c, const Options& o) {
    const Grid grid(c.grid.n, c.grid.L);
    const VectorField V0 = initial_data(c, grid);
    const ResolvedC0 c0 = resolve_c0(c, o);
    const lemmas::ConstantsLedger ledger = lemmas::make_ledger(c.p, c0.value, lp_norm(V0, c.p));
    const std::vector<double> taus = default_tau_grid(c.picard.tau_max, c.picard.tau_nodes);

    std::ofstream out = open_csv(o, "picard.csv");
    csv::Writer w(out);
    write_header(w, "picard", c, ledger, c0.source);
    w.row({"status", "value"});
    log(o, "picard iterations");
    PicardResult res;
    try {
        res = picard_solve(V0, taus, picard_params(c, c0.value), c.picard.max_iter, c.picard.tol);
    } catch (const RecurrenceViolation& e) {
        w.row({"recurrence_violation", num(e.lhs), num(e.rhs)});
        std::cerr << e.what() << '\n';
        return kNumericFailure;
    }
    const PicardReport& r = res.report;
    if (!r.smallness_ok) w.row({"warning", "smallness rule violated"});
    w.row({r.converged ? "converged" : "no-convergence", std::to_string(r.iterations)});
    w.row({"decay_envelope", r.decay_ok ? "1" : "0"});
    w.separator();
    write_picard_csv(out, r);
    if (c.picard.dump_fields) dump_slices(o, "picard_limit", res.limit);
    if (!r.converged) {
        std::cerr << "no-convergence after " << r.iterations << " iterations\n";
        return kNumericFailure;
    }
    return kPass;
}

int cmd_direct(const RunConfig& c, const Options& o) {
    const Grid grid(c.grid.n, c.grid.L);
    const VectorField U0 = initial_data(c, grid);
    const ResolvedC0 c0 = resolve_c0(c, o);
    const lemmas::ConstantsLedger ledger = lemmas::make_ledger(c.p, c0.value, lp_norm(U0, c.p));

    SolverConfig sc;
    sc.dt = std::min(c.solver.dt, c.solver.cfl_safety * stability_limit(U0) * (1.0 - 1e-12));
    sc.t_end = c.solver.t_end;
    sc.cfl_safety = c.solver.cfl_safety;
    sc.output_taus = uniform_taus(c.solver.t_end, c.solver.outputs);

    std::ofstream out = open_csv(o, "direct.csv");
    csv::Writer w(out);
    write_header(w, "direct", c, ledger, c0.source);
    w.comment("dt_used=" + num(sc.dt));
    log(o, "time stepping");
    try {
        const TimeSlices traj = evolve(U0, sc);
        write_trace_csv(out, traj, c.p);
        if (c.solver.dump_fields) dump_slices(o, "direct", traj);
    } catch (const SchemeBlowup& e) {
        write_trace_csv(out, e.partial, c.p);
        w.row({"blowup", num(e.tau)});
        std::cerr << e.what() << '\n';
        return kNumericFailure;
    }
    return kPass;
}

int cmd_pipeline(const RunConfig& c, const Options& o) {
    const Grid xgrid(c.grid.n, c.grid.L);
    const VectorField u0 = initial_data(c, xgrid);
    const VectorField U0 = to_selfsimilar(u0, c.T, 0.0);
    const ResolvedC0 c0 = resolve_c0(c, o);
    const double gamma = lemmas::gamma_of_p(c.p);
    const double c1 = lemmas::c1_formula(gamma);

    log(o, "picard solve in rescaled variables");
    const std::vector<double> taus = default_tau_grid(c.picard.tau_max, c.picard.tau_nodes);
    PicardResult res;
    try {
        res = picard_solve(U0, taus, picard_params(c, c0.value), c.picard.max_iter, c.picard.tol);
    } catch (const RecurrenceViolation& e) {
        std::cerr << e.what() << '\n';
        return kNumericFailure;
    }

    std::vector<std::pair<double, double>> trace;
    for (std::size_t i = 0; i < taus.size(); ++i) trace.emplace_back(taus[i], res.report.limit_norm[i]);
    const lemmas::TauM tm = lemmas::tau_m_rule(trace, c0.value, c1);
    lemmas::ConstantsLedger ledger =
        lemmas::make_ledger(c.p, c0.value, tm.index ? trace[*tm.index].second : lp_norm(U0, c.p), tm.tau);

    std::ofstream out = open_csv(o, "pipeline.csv");
    csv::Writer w(out);
    write_header(w, "pipeline", c, ledger, c0.source);
    w.row({"status", "value"});
    w.row({res.report.converged ? "converged" : "no-convergence", std::to_string(res.report.iterations)});
    w.row({"lps_q_infinity", lps_check(c.p, std::numeric_limits<double>::infinity()) ? "1" : "0"});
    if (!tm.index) {
        w.row({"tau_m", "not-yet-small"});
        std::cerr << "the smallness rule never holds on the tau grid\n";
        return kNumericFailure;
    }
    w.row({"tau_m", num(tm.tau)});
    if (!res.report.converged) {
        std::cerr << "no-convergence\n";
        return kNumericFailure;
    }

    const double bound = non_blowup_bound(ledger, c.T);
    w.row({"bound", num(bound)});
    w.separator();
    std::vector<BoundRow> rows;
    bool ok = true;
    for (std::size_t i = *tm.index; i < taus.size(); ++i) {
        const double tau = taus[i];
        const VectorField u = from_selfsimilar(res.limit.fields[i], c.T, tau);
        BoundRow r{};
        r.tau = tau;
        r.t = t_of_tau(c.T, tau);
        r.norm_U = res.report.limit_norm[i];
        r.norm_u = lp_norm(u, c.p);
        r.envelope = ledger.K_max * std::exp(-(1.0 - gamma) * (tau - tm.tau));
        r.bound = bound;
        r.pass = r.norm_u <= 1.05 * bound && r.norm_U <= 1.05 * r.envelope;
        ok = ok && r.pass;
        rows.push_back(r);
    }
    write_bound_csv(out, rows);
    if (!ok) std::cerr << "physical norm trace exceeds the bound\n";
    return ok ? kPass : kNumericFailure;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
    CLI::App app{"Self-similar Navier-Stokes verification toolkit"};
    std::string config_path;
    Options options;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", options.out_dir, "output directory");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
    app.add_flag("--verbose", options.verbose, "progress on stderr");
    app.require_subcommand(1);
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&, const Options&);
    };
    const std::vector<Command> commands = {
        {"verify-lemmas", "scalar constants, recurrence and inequality checks", cmd_verify_lemmas},
        {"estimate-c0", "empirical heat-kernel constants", cmd_estimate_c0},
        {"picard", "successive approximations in rescaled variables", cmd_picard},
        {"direct", "time-stepping oracle for the rescaled equations", cmd_direct},
        {"pipeline", "Picard limit mapped back to physical variables", cmd_pipeline},
    };
    for (const auto& cmd : commands) app.add_subcommand(cmd.name, cmd.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigFailure;
    }

    try {
        RunConfig config = config_path.empty() ? parse_config("{\"schema_version\": 1}") : load_config(config_path);
        if (*seed_opt) {
            config.seed = seed;
            config.c0.family.seed = seed;
        }
        for (const auto& cmd : commands)
            if (app.got_subcommand(cmd.name)) return cmd.run(config, options);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kConfigFailure;
}

}  // namespace ssns::cli
