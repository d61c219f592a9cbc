#include "cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace ssns::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void parse_grid(const json& j, GridConfig& g) {
    allow_keys(j, "grid", {"n", "L"});
    read(j, "n", g.n, "grid");
    read(j, "L", g.L, "grid");
    require(g.n >= 4 && g.n % 2 == 0, "grid.n must be even and >= 4");
    require(g.L > 0.0, "grid.L must be positive");
}

void parse_data(const json& j, DataConfig& d) {
    allow_keys(j, "data", {"kind", "width", "lp_norm", "amplitude", "kmax", "envelope_width", "path"});
    read(j, "kind", d.kind, "data");
    read(j, "width", d.width, "data");
    if (j.contains("lp_norm")) {
        if (j.at("lp_norm").is_null()) {
            d.lp_norm.reset();
        } else {
            double v = 0.0;
            read(j, "lp_norm", v, "data");
            d.lp_norm = v;
        }
    }
    read(j, "amplitude", d.amplitude, "data");
    read(j, "kmax", d.kmax, "data");
    read(j, "envelope_width", d.envelope_width, "data");
    read(j, "path", d.path, "data");
    require(d.kind == "zero" || d.kind == "solenoidal_gaussian" || d.kind == "localized_random" || d.kind == "file",
            "data.kind must be zero, solenoidal_gaussian, localized_random or file");
    require(d.width > 0.0, "data.width must be positive");
    require(!d.lp_norm || *d.lp_norm >= 0.0, "data.lp_norm must be >= 0");
    require(d.kmax >= 1, "data.kmax must be >= 1");
    require(d.envelope_width > 0.0, "data.envelope_width must be positive");
    require(d.kind != "file" || !d.path.empty(), "data.path is required for kind 'file'");
}

void parse_c0(const json& j, C0Config& c) {
    allow_keys(j, "c0", {"mode", "value", "family"});
    read(j, "mode", c.mode, "c0");
    read(j, "value", c.value, "c0");
    require(c.mode == "estimate" || c.mode == "fixed", "c0.mode must be estimate or fixed");
    require(c.value > 0.0, "c0.value must be positive");
    if (j.contains("family")) {
        const json& f = j.at("family");
        allow_keys(f, "c0.family", {"n", "L", "gaussians", "random_fields", "bumps", "t_points"});
        int n = c.family.grid.n();
        double L = c.family.grid.box_side();
        read(f, "n", n, "c0.family");
        read(f, "L", L, "c0.family");
        require(n >= 4 && n % 2 == 0 && L > 0.0, "c0.family grid is invalid");
        c.family.grid = Grid(n, L);
        read(f, "gaussians", c.family.gaussians, "c0.family");
        read(f, "random_fields", c.family.random_fields, "c0.family");
        read(f, "bumps", c.family.bumps, "c0.family");
        read(f, "t_points", c.family.t_points, "c0.family");
        require(c.family.gaussians >= 0 && c.family.random_fields >= 0 && c.family.bumps >= 0,
                "c0.family member counts must be >= 0");
        require(c.family.t_points >= 2, "c0.family.t_points must be >= 2");
    }
}

void parse_quadrature(const json& j, QuadratureRule& q) {
    allow_keys(j, "quadrature", {"nodes_per_panel", "grading_exponent", "panels"});
    read(j, "nodes_per_panel", q.nodes_per_panel, "quadrature");
    read(j, "grading_exponent", q.grading_exponent, "quadrature");
    read(j, "panels", q.panels, "quadrature");
    require(q.nodes_per_panel >= 2 && q.grading_exponent >= 1.0 && q.panels >= 1, "quadrature rule is invalid");
}

void parse_picard(const json& j, PicardConfig& p) {
    allow_keys(j, "picard", {"tau_max", "tau_nodes", "max_iter", "tol", "dump_fields"});
    read(j, "tau_max", p.tau_max, "picard");
    read(j, "tau_nodes", p.tau_nodes, "picard");
    read(j, "max_iter", p.max_iter, "picard");
    read(j, "tol", p.tol, "picard");
    read(j, "dump_fields", p.dump_fields, "picard");
    require(p.tau_max > 0.0 && p.tau_nodes >= 2, "picard tau grid is invalid");
    require(p.max_iter >= 1 && p.tol > 0.0, "picard.max_iter and picard.tol must be positive");
}

void parse_solver(const json& j, SolverSection& s) {
    allow_keys(j, "solver", {"dt", "t_end", "cfl_safety", "outputs", "dump_fields"});
    read(j, "dt", s.dt, "solver");
    read(j, "t_end", s.t_end, "solver");
    read(j, "cfl_safety", s.cfl_safety, "solver");
    read(j, "outputs", s.outputs, "solver");
    read(j, "dump_fields", s.dump_fields, "solver");
    require(s.dt > 0.0 && s.t_end > 0.0, "solver.dt and solver.t_end must be positive");
    require(s.cfl_safety > 0.0 && s.cfl_safety < 1.0, "solver.cfl_safety must lie in (0, 1)");
    require(s.outputs >= 2, "solver.outputs must be >= 2");
}

void parse_lemmas(const json& j, LemmaConfig& l) {
    allow_keys(j, "lemmas", {"gammas", "tau_max", "n_tau", "inequality_samples", "random_pairs", "divergent_pairs",
                             "K0", "M", "n_max"});
    read(j, "gammas", l.gammas, "lemmas");
    read(j, "tau_max", l.tau_max, "lemmas");
    read(j, "n_tau", l.n_tau, "lemmas");
    read(j, "inequality_samples", l.inequality_samples, "lemmas");
    read(j, "random_pairs", l.random_pairs, "lemmas");
    read(j, "divergent_pairs", l.divergent_pairs, "lemmas");
    read(j, "K0", l.K0, "lemmas");
    read(j, "M", l.M, "lemmas");
    read(j, "n_max", l.n_max, "lemmas");
    for (double g : l.gammas) require(g > 0.0 && g < 1.0, "lemmas.gammas must lie in (0, 1)");
    require(l.tau_max >= 4.0 && l.n_tau >= 2, "lemmas.tau_max must be >= 4 and n_tau >= 2");
    require(l.inequality_samples >= 2, "lemmas.inequality_samples must be >= 2");
    require(l.random_pairs >= 0 && l.divergent_pairs >= 0, "lemmas pair counts must be >= 0");
    require(l.K0 >= 0.0 && l.M > 0.0 && l.n_max >= 1, "lemmas recurrence parameters are invalid");
}

void parse_pairs(const json& j, std::vector<C0Pair>& pairs) {
    if (!j.is_array()) throw ConfigError("c0_pairs: expected an array");
    pairs.clear();
    for (const json& e : j) {
        allow_keys(e, "c0_pairs[]", {"p_tilde", "q_tilde", "gradient"});
        C0Pair pr{0.0, 0.0, false};
        if (!e.contains("p_tilde") || !e.contains("q_tilde")) throw ConfigError("c0_pairs[]: p_tilde and q_tilde required");
        read(e, "p_tilde", pr.p_tilde, "c0_pairs[]");
        read(e, "q_tilde", pr.q_tilde, "c0_pairs[]");
        read(e, "gradient", pr.with_gradient, "c0_pairs[]");
        require(pr.p_tilde > 1.0 && pr.p_tilde <= pr.q_tilde, "c0_pairs[]: need 1 < p_tilde <= q_tilde");
        pairs.push_back(pr);
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    allow_keys(j, "config", {"schema_version", "seed", "p", "T", "grid", "data", "c0", "quadrature", "interpolation",
                             "picard", "solver", "lemmas", "c0_pairs"});
    RunConfig c;
    if (!j.contains("schema_version")) throw ConfigError("config: schema_version is required");
    read(j, "schema_version", c.schema_version, "config");
    if (c.schema_version != kConfigSchemaVersion)
        throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
    read(j, "seed", c.seed, "config");
    read(j, "p", c.p, "config");
    read(j, "T", c.T, "config");
    require(c.p > 3.0, "config.p must exceed 3");
    require(c.T > 0.0, "config.T must be positive");
    if (j.contains("grid")) parse_grid(j.at("grid"), c.grid);
    if (j.contains("data")) parse_data(j.at("data"), c.data);
    if (j.contains("c0")) parse_c0(j.at("c0"), c.c0);
    if (j.contains("quadrature")) parse_quadrature(j.at("quadrature"), c.quadrature);
    if (j.contains("interpolation")) {
        std::string name;
        read(j, "interpolation", name, "config");
        try {
            c.interpolation = interpolation_from_string(name);
        } catch (const std::exception&) {
            throw ConfigError("config.interpolation: unknown method '" + name + "'");
        }
    }
    if (j.contains("picard")) parse_picard(j.at("picard"), c.picard);
    if (j.contains("solver")) parse_solver(j.at("solver"), c.solver);
    if (j.contains("lemmas")) parse_lemmas(j.at("lemmas"), c.lemmas);
    if (j.contains("c0_pairs")) parse_pairs(j.at("c0_pairs"), c.c0_pairs);
    c.c0.family.seed = c.seed;
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["seed"] = c.seed;
    j["p"] = c.p;
    j["T"] = c.T;
    j["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}};
    json data = {{"kind", c.data.kind},     {"width", c.data.width},
                 {"amplitude", c.data.amplitude}, {"kmax", c.data.kmax},
                 {"envelope_width", c.data.envelope_width}, {"path", c.data.path}};
    data["lp_norm"] = c.data.lp_norm ? json(*c.data.lp_norm) : json(nullptr);
    j["data"] = data;
    j["c0"] = {{"mode", c.c0.mode},
               {"value", c.c0.value},
               {"family",
                {{"n", c.c0.family.grid.n()},
                 {"L", c.c0.family.grid.box_side()},
                 {"gaussians", c.c0.family.gaussians},
                 {"random_fields", c.c0.family.random_fields},
                 {"bumps", c.c0.family.bumps},
                 {"t_points", c.c0.family.t_points}}}};
    j["quadrature"] = {{"nodes_per_panel", c.quadrature.nodes_per_panel},
                       {"grading_exponent", c.quadrature.grading_exponent},
                       {"panels", c.quadrature.panels}};
    j["interpolation"] = to_string(c.interpolation);
    j["picard"] = {{"tau_max", c.picard.tau_max},
                   {"tau_nodes", c.picard.tau_nodes},
                   {"max_iter", c.picard.max_iter},
                   {"tol", c.picard.tol},
                   {"dump_fields", c.picard.dump_fields}};
    j["solver"] = {{"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"cfl_safety", c.solver.cfl_safety},
                   {"outputs", c.solver.outputs},
                   {"dump_fields", c.solver.dump_fields}};
    j["lemmas"] = {{"gammas", c.lemmas.gammas},
                   {"tau_max", c.lemmas.tau_max},
                   {"n_tau", c.lemmas.n_tau},
                   {"inequality_samples", c.lemmas.inequality_samples},
                   {"random_pairs", c.lemmas.random_pairs},
                   {"divergent_pairs", c.lemmas.divergent_pairs},
                   {"K0", c.lemmas.K0},
                   {"M", c.lemmas.M},
                   {"n_max", c.lemmas.n_max}};
    json pairs = json::array();
    for (const auto& p : c.c0_pairs)
        pairs.push_back({{"p_tilde", p.p_tilde}, {"q_tilde", p.q_tilde}, {"gradient", p.with_gradient}});
    j["c0_pairs"] = pairs;
    return j.dump();
}

}  // namespace ssns::cli
