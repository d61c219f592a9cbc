#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "ssns/errors.hpp"
#include "ssns/field_ops.hpp"
#include "ssns/picard.hpp"
#include "ssns/test_fields.hpp"

using namespace ssns;
using std::numbers::pi;

namespace {

const Grid kGrid(32, 50.0);
constexpr double kWidth = 40.0;
constexpr double kNorm = 0.007;

VectorField small_data() {
    VectorField V0 = fields::solenoidal_gaussian(kGrid, kWidth, 1.0);
    V0 *= kNorm / lp_norm(V0, 4.0);
    return V0;
}

// Semigroup of solenoidal_gaussian in closed form: the potentials are heat-smoothed and
// dilated analytically, then curled spectrally (the curl commutes with both).
VectorField semigroup_oracle(double amplitude, double tau) {
    const Grid& g = kGrid;
    const double s = 0.15 * std::sqrt(kWidth), lam = std::exp(-tau), b = kWidth + 4 * pi * t0(tau);
    const std::array<std::array<double, 3>, 3> offsets = {{{s, 0, 0}, {0, -s, 0}, {0, 0, s}}};
    VectorField pot(g);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                for (int k = 0; k < g.n(); ++k) {
                    const double y[3] = {g.coordinate(i), g.coordinate(j), g.coordinate(k)};
                    double r2 = 0.0;
                    for (int d = 0; d < 3; ++d) r2 += std::pow(lam * y[d] - offsets[c][d], 2);
                    pot[c][g.index(i, j, k)] = amplitude * std::pow(kWidth / b, 1.5) * std::exp(-pi * r2 / b);
                }
    return curl(pot);
}

double max_abs(const VectorField& f) {
    double m = 0.0;
    for (const auto& c : f.components)
        for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("tau grid") {
    const auto t = default_tau_grid();
    CHECK(t.size() == 25);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 6.0);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
    CHECK(t[1] - t[0] < t[24] - t[23]);
    CHECK_THROWS_AS(default_tau_grid(0.0, 5), DomainError);
}

TEST_CASE("zero data") {
    const std::vector<double> taus = default_tau_grid(2.0, 5);
    PicardState s = picard_init(VectorField(kGrid), taus, PicardParams{});
    CHECK(s.kn_ledger[0] == 0.0);
    s = picard_step(std::move(s));
    for (const auto& f : s.latest().fields) CHECK(max_abs(f) == 0.0);
    const PicardResult r = picard_solve(VectorField(kGrid), taus, PicardParams{});
    CHECK(r.report.converged);
    for (double e : r.report.eq_residual) CHECK(e == 0.0);
    for (const auto& f : r.limit.fields) CHECK(max_abs(f) == 0.0);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(picard_init(fields::gaussian_vector(kGrid, 40.0), {0.0, 1.0}, PicardParams{}), PreconditionError);
    CHECK_THROWS_AS(picard_init(VectorField(kGrid), {0.5, 1.0}, PicardParams{}), DomainError);
}

TEST_CASE("initial iterate") {
    const VectorField V0 = small_data();
    const std::vector<double> taus{0.0, 0.05, 0.1, 0.25};
    const PicardParams params;
    const PicardState s = picard_init(V0, taus, params);
    CHECK(s.kn_ledger[0] <= params.c0 * lp_norm(V0, 4.0) * (1 + 1e-12));
    const double amplitude = kNorm / lp_norm(fields::solenoidal_gaussian(kGrid, kWidth, 1.0), 4.0);
    double k0 = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double norm = lp_norm(semigroup_oracle(amplitude, taus[i]), 4.0);
        CHECK(std::abs(lp_norm(s.iterates[0].fields[i], 4.0) - norm) < 1e-6 * norm);
        k0 = std::max(k0, std::exp(0.25 * taus[i]) * norm);
    }
    CHECK(std::abs(s.kn_ledger[0] - k0) < 1e-6 * k0);
}

TEST_CASE("contraction for small data") {
    const VectorField V0 = small_data();
    PicardParams params;
    params.keep_all_iterates = true;
    const PicardResult res = picard_solve(V0, default_tau_grid(2.0, 9), params, 12, 1e-10);
    const PicardReport& r = res.report;
    CHECK(r.smallness_ok);
    CHECK(r.warning.empty());
    CHECK(r.converged);
    CHECK(r.iterations <= 12);
    for (std::size_t n = 1; n < r.gap_history.size(); ++n) CHECK(r.gap_history[n] <= 0.55 * r.gap_history[n - 1]);
    for (std::size_t n = 0; n < r.kn_ledger.size(); ++n) CHECK(r.kn_ledger[n] <= 1.05 * r.majorant[n]);
    for (double e : r.envelope_ratio) CHECK(e <= 1.05);
    CHECK(r.decay_ok);
    for (double e : r.eq_residual) CHECK(e < 1e-9);
    for (std::size_t n = 1; n + 1 < r.error_history.size(); ++n)
        CHECK(r.error_history[n] <= 0.55 * r.error_history[n - 1]);
    for (const auto& f : res.limit.fields) CHECK(relative_divergence(f) < 1e-9);
    CHECK(r.ledger.M == 2 * r.ledger.c0 * r.ledger.c1);

    std::ostringstream os;
    write_picard_csv(os, r);
    CHECK(os.str().find("n,K_n,majorant,gap_n") != std::string::npos);
    CHECK(os.str().find("tau,norm_lp,envelope,fixed_point_residual") != std::string::npos);
}

TEST_CASE("recurrence violation carries both sides") {
    PicardParams params;
    params.c0 = 1e-3;  // K0 bound far below the true K_1
    PicardState s = picard_init(small_data(), {0.0, 0.1, 0.2}, params);
    try {
        s = picard_step(std::move(s));
        FAIL("expected a recurrence violation");
    } catch (const RecurrenceViolation& e) {
        CHECK(e.lhs > e.rhs * 1.05);
        CHECK(std::string(e.what()).find("exceeds") != std::string::npos);
    }
}

TEST_CASE("large data and iteration budget") {
    VectorField V0 = small_data();
    V0 *= 5.0;
    const PicardResult r = picard_solve(V0, {0.0, 0.1, 0.2}, PicardParams{}, 1, 1e-30);
    CHECK_FALSE(r.report.smallness_ok);
    CHECK_FALSE(r.report.warning.empty());
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.iterations == 1);
    CHECK(r.limit.fields.size() == 3);
}
