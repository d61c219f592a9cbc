#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ssns/errors.hpp"
#include "ssns/field_ops.hpp"
#include "ssns/picard.hpp"
#include "ssns/rescaling.hpp"
#include "ssns/test_fields.hpp"

using namespace ssns;
using std::numbers::pi;

namespace {

VectorField radial_x(const Grid& g, auto&& profile) {
    VectorField out(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            for (int k = 0; k < g.n(); ++k) {
                const double y1 = g.coordinate(i), y2 = g.coordinate(j), y3 = g.coordinate(k);
                out[0][g.index(i, j, k)] = profile(std::sqrt(y1 * y1 + y2 * y2 + y3 * y3));
            }
    return out;
}

double max_abs(const VectorField& f) {
    double m = 0.0;
    for (const auto& c : f.components)
        for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("time map") {
    CHECK(tau_of_t(1.0, 0.0) == 0.0);
    CHECK(tau_of_t(1.0, 1.0 - std::exp(-2.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t_of_tau(2.0, 0.0) == 0.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double T = 0.1 + 10.0 * u(rng), t = T * u(rng) * 0.999;
        CHECK(std::abs(t_of_tau(T, tau_of_t(T, t)) - t) <= 1e-14 * std::max(t, T));
        const double tau = 5.0 * u(rng);
        // Recovering tau from T - t amplifies rounding by e^{2 tau}.
        CHECK(std::abs(tau_of_t(T, t_of_tau(T, tau)) - tau) <= 4e-16 * std::exp(2 * tau));
    }
    double prev = -1.0;
    for (double t = 0.0; t < 1.0; t += 0.01) {
        CHECK(tau_of_t(1.0, t) > prev);
        prev = tau_of_t(1.0, t);
    }
    CHECK_THROWS_AS(tau_of_t(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(tau_of_t(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(t_of_tau(1.0, -0.1), DomainError);
    const TimeMap m = TimeMap::at_tau(4.0, 0.5);
    CHECK(m.scale() == doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("self-similar transforms") {
    Grid g(64, 16.0);
    const double a = 2.0;
    const VectorField u = radial_x(g, [&](double r) { return std::exp(-pi * r * r / a); });

    SUBCASE("initial time with T = 1") {
        const VectorField U = to_selfsimilar(u, 1.0, 0.0);
        CHECK(U.grid == g);
        CHECK(max_abs(U - u) == 0.0);
    }
    SUBCASE("norm relation on the natural grid") {
        for (double p : {4.0, 6.0}) {
            const double gamma = 3.0 / p;
            for (double t : {0.3, 0.75, 0.96}) {
                const double T = 1.0, tau = tau_of_t(T, t);
                const VectorField U = to_selfsimilar(u, T, t);
                const double lhs = lp_norm(u, p), rhs = std::pow(T - t, (gamma - 1) / 2) * lp_norm(U, p);
                CHECK(std::abs(lhs - rhs) < 1e-8 * lhs);
                const VectorField back = from_selfsimilar(U, T, tau);
                CHECK(back.grid.box_side() == doctest::Approx(g.box_side()).epsilon(1e-14));
                double diff = 0.0;
                for (int c = 0; c < 3; ++c)
                    for (std::size_t m = 0; m < g.size(); ++m) diff = std::max(diff, std::abs(back[c][m] - u[c][m]));
                CHECK(diff < 1e-8);
            }
        }
    }
    SUBCASE("analytic dilation on a fixed grid") {
        const double T = 1.0, t = 0.75, s = std::sqrt(T - t);
        const VectorField U = to_selfsimilar(u, T, t, g);
        const VectorField exact = radial_x(g, [&](double r) { return s * std::exp(-pi * s * s * r * r / a); });
        CHECK(max_abs(U - exact) < 1e-8);
        const double gamma = 0.75;
        CHECK(std::abs(lp_norm(u, 4.0) - std::pow(T - t, (gamma - 1) / 2) * lp_norm(U, 4.0)) < 1e-8 * lp_norm(u, 4.0));
        const VectorField back = from_selfsimilar(U, T, tau_of_t(T, t), g);
        CHECK(max_abs(back - u) < 1e-8);
    }
    SUBCASE("t at or beyond T") { CHECK_THROWS_AS(to_selfsimilar(u, 1.0, 1.0), DomainError); }
}

TEST_CASE("profile convergence") {
    Grid g(16, 8.0);
    const VectorField Ubar = fields::random_solenoidal(g, 3, 1);
    SUBCASE("constant trajectory") {
        TimeSlices t{{0.0, 1.0, 2.0}, {Ubar, Ubar, Ubar}};
        const auto r = profile_convergence(t, Ubar, 4.0);
        CHECK(r.converged);
        for (const auto& [tau, d] : r.trace) CHECK(d == 0.0);
    }
    SUBCASE("oscillating trajectory") {
        TimeSlices t{{0.0, 1.0, 2.0, 3.0}, {Ubar, VectorField(g), Ubar, VectorField(g)}};
        CHECK_FALSE(profile_convergence(t, VectorField(g), 4.0).converged);
    }
    SUBCASE("Picard limit under the decay envelope") {
        Grid pg(32, 50.0);
        VectorField V0 = fields::solenoidal_gaussian(pg, 40.0, 1.0);
        V0 *= 0.007 / lp_norm(V0, 4.0);
        const PicardResult res = picard_solve(V0, default_tau_grid(2.0, 6), PicardParams{});
        const auto r = profile_convergence(res.limit, VectorField(pg), 4.0);
        const double K_max = lemmas::make_ledger(4.0, 1.0, lp_norm(V0, 4.0)).K_max;
        for (const auto& [tau, d] : r.trace) CHECK(d <= 1.05 * K_max * std::exp(-0.25 * tau));
    }
    SUBCASE("grid mismatch") {
        TimeSlices t{{0.0}, {Ubar}};
        CHECK_THROWS_AS(profile_convergence(t, VectorField(Grid(16, 9.0)), 4.0), DimensionError);
    }
}

TEST_CASE("pointwise decay") {
    SUBCASE("zero field") {
        const DecayReport r = pointwise_decay_check(VectorField(Grid(16, 8.0)), 1.0);
        CHECK(r.max_value == 0.0);
        CHECK(r.pass);
        CHECK(r.samples > 0);
    }
    SUBCASE("Gaussian") {
        // On L = 2 the trusted annulus [0.25, 0.5] contains the peak of r e^{-pi r^2} at r = 1/sqrt(2 pi).
        Grid g(64, 2.0);
        auto f = [](double r) { return r * std::exp(-pi * r * r); };
        const DecayReport rep = pointwise_decay_check(radial_x(g, [](double r) { return std::exp(-pi * r * r); }), 1.0);
        double sampled = 0.0;
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                for (int k = 0; k < g.n(); ++k) {
                    const double r = std::hypot(g.coordinate(i), g.coordinate(j), g.coordinate(k));
                    if (r >= 0.25 && r <= 0.5) sampled = std::max(sampled, f(r));
                }
        CHECK(std::abs(rep.max_value - sampled) < 1e-8);
        const double r_star = 1.0 / std::sqrt(2 * pi);
        CHECK(rep.max_value <= f(r_star) + 1e-12);
        CHECK(rep.max_value > f(r_star) - 1e-4);
        CHECK(std::abs(rep.argmax_radius - r_star) < g.spacing());
    }
    SUBCASE("algebraic tail") {
        Grid g(32, 16.0);
        const double c = 0.37;
        const DecayReport r = pointwise_decay_check(radial_x(g, [&](double r) { return r > 0 ? c / r : 0.0; }), 0.5);
        CHECK(r.max_value == doctest::Approx(c).epsilon(1e-12));
        CHECK(r.pass);
        CHECK_FALSE(pointwise_decay_check(radial_x(g, [&](double r) { return r > 0 ? c / r : 0.0; }), 0.3).pass);
    }
    SUBCASE("non-positive constant") { CHECK_THROWS_AS(pointwise_decay_check(VectorField(Grid(8, 4.0)), 0.0), DomainError); }
}

TEST_CASE("non-blowup bound") {
    SUBCASE("zero data") { CHECK(non_blowup_bound(lemmas::make_ledger(4.0, 1.0, 0.0, 1.0), 1.0) == 0.0); }
    SUBCASE("closed form") {
        const auto l = lemmas::make_ledger(4.0, 1.0, 0.005, 0.7);
        REQUIRE(l.certified);
        CHECK(non_blowup_bound(l, 2.0) == doctest::Approx(l.K_max * std::exp(0.25 * 0.7) / std::pow(2.0, 0.125)));
    }
    SUBCASE("uncertified ledger") {
        CHECK_THROWS_AS(non_blowup_bound(lemmas::make_ledger(4.0, 1.0, 10.0), 1.0), PreconditionError);
    }
    SUBCASE("cancellation identity") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) CHECK(cancellation_residual(1.0, 0.999 * u(rng), 0.75) < 1e-13);
    }
}

TEST_CASE("LPS criterion") {
    CHECK(lps_check(4.0, INFINITY));
    CHECK(lps_check(3.0, INFINITY));
    CHECK_FALSE(lps_check(4.0, 4.0));
    CHECK(lps_check(INFINITY, 2.0));
    CHECK(lps_check(6.0, 4.0));
    CHECK_THROWS_AS(lps_check(2.5, 4.0), DomainError);
    CHECK_THROWS_AS(lps_check(4.0, 0.5), DomainError);
}

TEST_CASE("bound report") {
    std::ostringstream os;
    write_bound_csv(os, {{0.5, 0.63, 0.01, 0.012, 0.02, 0.03, true}});
    CHECK(os.str().find("tau,t,norm_U,norm_u,envelope,bound,pass") != std::string::npos);
}
