#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssns/direct_solver.hpp"
#include "ssns/quadrature.hpp"
#include "ssns/semigroup.hpp"

namespace ssns::cli {

inline constexpr int kConfigSchemaVersion = 1;

/// Malformed JSON, unknown keys, wrong types or out-of-range values. Exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    int n = 32;
    double L = 50.0;
};

/// Initial data on the run grid.
struct DataConfig {
    std::string kind = "solenoidal_gaussian";  ///< zero | solenoidal_gaussian | localized_random | file
    double width = 40.0;
    std::optional<double> lp_norm = 0.007;  ///< rescale to this L^p norm (p of the run)
    double amplitude = 1.0;                 ///< used when lp_norm is absent
    int kmax = 8;
    double envelope_width = 40.0;
    std::string path;
};

struct C0Config {
    std::string mode = "estimate";  ///< estimate | fixed
    double value = 1.0;
    C0Family family{};
};

struct PicardConfig {
    double tau_max = 6.0;
    int tau_nodes = 25;
    int max_iter = 30;
    double tol = 1e-8;
    bool dump_fields = false;
};

struct SolverSection {
    double dt = 0.02;
    double t_end = 0.5;
    double cfl_safety = 0.8;
    int outputs = 11;
    bool dump_fields = false;
};

struct LemmaConfig {
    std::vector<double> gammas{0.1, 0.25, 0.5, 0.75, 0.9};
    double tau_max = 8.0;
    int n_tau = 81;
    int inequality_samples = 100000;
    int random_pairs = 200;
    int divergent_pairs = 50;
    double K0 = 1.0;
    double M = 0.1;
    int n_max = 64;
};

struct C0Pair {
    double p_tilde;
    double q_tilde;
    bool with_gradient;
};

struct RunConfig {
    int schema_version = kConfigSchemaVersion;
    std::uint64_t seed = 0;
    double p = 4.0;
    double T = 1.0;
    GridConfig grid{};
    DataConfig data{};
    C0Config c0{};
    QuadratureRule quadrature{};
    Interpolation interpolation = Interpolation::fourier_resample;
    PicardConfig picard{};
    SolverSection solver{};
    LemmaConfig lemmas{};
    /// Pairs for estimate-c0; empty means the three the ledger needs.
    std::vector<C0Pair> c0_pairs;
};

/// Parses and validates a JSON document. Missing keys keep their defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical JSON of the resolved configuration (stable key order).
std::string dump_config(const RunConfig& config);

}  // namespace ssns::cli
