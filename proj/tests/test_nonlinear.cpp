#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "ssns/errors.hpp"
#include "ssns/field_ops.hpp"
#include "ssns/nonlinear.hpp"
#include "ssns/picard.hpp"
#include "ssns/test_fields.hpp"

using namespace ssns;
using std::numbers::pi;

namespace {

double max_abs(const VectorField& f) {
    double m = 0.0;
    for (const auto& c : f.components)
        for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double rel_l2(const VectorField& a, const VectorField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

TimeSlices linear_path(const VectorField& V0, const std::vector<double>& taus) {
    TimeSlices out;
    out.taus = taus;
    for (double tau : taus) out.fields.push_back(leray_project(semigroup_apply(V0, tau)));
    return out;
}

TimeSlices scaled(TimeSlices t, double a) {
    for (auto& f : t.fields) f *= a;
    return t;
}

}  // namespace

TEST_CASE("bilinear operator") {
    Grid g(32, 16.0);
    const VectorField U = fields::random_solenoidal(g, 4, 1);
    const VectorField V = fields::random_band_limited(g, 6, 2);
    SUBCASE("zero argument") { CHECK(max_abs(bilinear_F(VectorField(g), V)) == 0.0); }
    SUBCASE("divergence-free values") {
        const VectorField F = bilinear_F(U, V);
        CHECK(lp_norm(divergence(F), 2.0) / lp_norm(gradient(F), 2.0) < 1e-10);
    }
    SUBCASE("bilinear") {
        const VectorField W = fields::random_band_limited(g, 6, 3);
        const VectorField lhs = bilinear_F(U, 2.5 * V - 0.5 * W);
        VectorField rhs = 2.5 * bilinear_F(U, V);
        rhs.add_scaled(-0.5, bilinear_F(U, W));
        CHECK(rel_l2(lhs, rhs) < 1e-13);
    }
    SUBCASE("pressure identity") {
        const VectorField F = bilinear_F(U, U);
        VectorField expect = tensor_divergence(U, U);
        expect += gradient(pressure_from_velocity(U));
        expect *= 2.0;
        CHECK(rel_l2(F, expect) < 1e-8);
    }
    SUBCASE("grid mismatch") { CHECK_THROWS_AS(bilinear_F(U, VectorField(Grid(32, 17.0))), DimensionError); }
}

TEST_CASE("pressure") {
    Grid g(32, 16.0);
    const double L = g.box_side(), a = 2 * pi / L;
    SUBCASE("zero velocity") { CHECK(max_abs(pressure_from_velocity(VectorField(g))) == 0.0); }
    SUBCASE("shear pair against the Poisson solution") {
        // U = (sin a y2, sin a y1, 0): div div (U (x) U) = 2 a^2 cos a y1 cos a y2, so P = cos a y1 cos a y2.
        VectorField U(g);
        ScalarField exact(g);
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j)
                for (int k = 0; k < g.n(); ++k) {
                    const std::size_t m = g.index(i, j, k);
                    const double y1 = g.coordinate(i), y2 = g.coordinate(j);
                    U[0][m] = std::sin(a * y2);
                    U[1][m] = std::sin(a * y1);
                    exact.values[m] = std::cos(a * y1) * std::cos(a * y2);
                }
        const ScalarField P = pressure_from_velocity(U);
        double err = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) err = std::max(err, std::abs(P.values[m] - exact.values[m]));
        CHECK(err < 1e-10);
    }
    SUBCASE("constant shift of a solenoidal field") {
        // Cross terms c_j U_k contribute c_j d_j (div U) = 0 to the Poisson source.
        const VectorField U = fields::random_solenoidal(g, 4, 5);
        VectorField shifted = U;
        for (int c = 0; c < 3; ++c)
            for (double& v : shifted[c]) v += 0.3 * (c + 1);
        const ScalarField P = pressure_from_velocity(U), Q = pressure_from_velocity(shifted);
        double diff = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) diff = std::max(diff, std::abs(P.values[m] - Q.values[m]));
        CHECK(diff < 1e-10 * max_abs(P));
    }
}

TEST_CASE("Duhamel integral") {
    Grid g(32, 50.0);
    VectorField V0 = fields::solenoidal_gaussian(g, 40.0, 1.0);
    V0 *= 0.007 / lp_norm(V0, 4.0);
    const std::vector<double> taus{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
    const TimeSlices U = linear_path(V0, taus);
    const QuadratureRule rule{};

    SUBCASE("zero path") {
        const TimeSlices Z = scaled(U, 0.0);
        CHECK(max_abs(duhamel_G(Z, U, 0.8, rule)) == 0.0);
    }
    SUBCASE("bilinear under scaling") {
        const double a = 3.0, b = -0.4;
        const VectorField lhs = duhamel_G(scaled(U, a), scaled(U, b), 0.8, rule);
        const VectorField rhs = (a * b) * duhamel_G(U, U, 0.8, rule);
        CHECK(rel_l2(lhs, rhs) < 1e-12);
    }
    SUBCASE("divergence-free") {
        const VectorField G = duhamel_G(U, U, 1.0, rule);
        CHECK(lp_norm(divergence(G), 2.0) / lp_norm(gradient(G), 2.0) < 1e-9);
    }
    SUBCASE("panel doubling") {
        const double a = lp_norm(duhamel_G(U, U, 1.0, rule), 2.0);
        const double b = lp_norm(duhamel_G(U, U, 1.0, rule.refined()), 2.0);
        CHECK(std::abs(a - b) / b < 1e-6);
    }
    SUBCASE("cached evaluation matches one-shot") {
        DuhamelIntegrator G(U, U, rule);
        for (double tau : {0.3, 1.0, 0.05}) CHECK(max_abs(G(tau) - duhamel_G(U, U, tau, rule)) == 0.0);
    }
    SUBCASE("beyond the trajectory") { CHECK_THROWS_AS(duhamel_G(U, U, 1.5, rule), DomainError); }
    SUBCASE("norm bound") {
        // Scalar majorant 2 c0 \int e^{-(2-gamma)(tau-s)} t0(tau-s)^{-(1+gamma)/2} |U(s)| |U(s)| ds with c0 = 1.
        const double p = 4.0, gamma = 0.75;
        for (double tau : {0.25, 0.5, 1.0}) {
            const double lhs = lp_norm(duhamel_G(U, U, tau, rule), p);
            // u = tau - s = tau * v^8 removes the u^{-7/8} singularity.
            const QuadratureNodes q = graded_nodes(QuadratureRule{8, 1.0, 16}, 0.0, 1.0);
            double rhs = 0.0;
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                const double v = q.nodes[i];
                const double u = tau * std::pow(v, 8.0), du = 8.0 * tau * std::pow(v, 7.0);
                const double norm = lp_norm(U.at(tau - u), p);
                rhs += q.weights[i] * du * std::exp(-(2 - gamma) * u) * std::pow(t0(u), -(1 + gamma) / 2) * norm * norm;
            }
            rhs *= 2.0;
            CHECK(lhs <= 1.05 * rhs);
        }
    }
}

TEST_CASE("strong steady residual") {
    Grid g(32, 16.0);
    SUBCASE("zero state") {
        const SteadyResidual r = steady_residual(VectorField(g));
        CHECK(r.l2_abs == 0.0);
        CHECK(r.l2_rel == 0.0);
        CHECK(r.trusted_radius == 4.0);
    }
    SUBCASE("linear in small amplitude") {
        const VectorField U = fields::localized_random_solenoidal(g, 4, 6.0, 9);
        const double r1 = steady_residual(1e-6 * U).l2_abs;
        const double r2 = steady_residual(2e-6 * U).l2_abs;
        CHECK(r1 > 0.0);
        CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-4));
    }
    SUBCASE("non-solenoidal input") {
        CHECK_THROWS_AS(steady_residual(fields::gaussian_vector(g, 2.0)), PreconditionError);
    }
}

TEST_CASE("weak steady residual") {
    Grid g(64, 16.0);
    // Curl of Gaussian potentials: solenoidal with Gaussian tails, so nothing leaks past L/4.
    const VectorField U = 0.05 * fields::solenoidal_gaussian(g, 2.0, 1.0);
    SUBCASE("zero state") {
        const auto tf = fields::make_test_function(g, fields::kTestFunctionSeeds[0]);
        CHECK(weak_steady_residual(VectorField(g), tf.phi) == 0.0);
    }
    SUBCASE("agrees with the strong form") {
        const SteadyResidual strong = steady_residual(U);
        for (std::uint64_t seed : fields::kTestFunctionSeeds) {
            const VectorField phi = fields::make_test_function(g, seed).phi;
            const double weak = weak_steady_residual(U, phi);
            const double pairing = l2_inner(phi, strong.field);
            CHECK(std::abs(weak - pairing) < 1e-6 * lp_norm(phi, 2.0) * strong.l2_abs);
        }
    }
    SUBCASE("disjoint supports") {
        const auto tf = fields::make_test_function(g, fields::kTestFunctionSeeds[1]);
        // A solenoidal bump near the box corner, away from the test function.
        const ScalarField b = fields::tensor_bump(g, {-6.0, -6.0, -6.0}, 1.5, 6.0);
        VectorField pot(g);
        pot[2] = b.values;
        const VectorField far = curl(pot);
        CHECK(std::abs(weak_steady_residual(far, tf.phi)) < 1e-6 * lp_norm(tf.phi, 2.0) * lp_norm(far, 2.0));
    }
    SUBCASE("test function reaching the boundary") {
        CHECK_THROWS_AS(weak_steady_residual(U, fields::solenoidal_gaussian(g, 20.0, 1.0)), PreconditionError);
        const VectorField coarse_phi = fields::make_test_function(Grid(32, 16.0), fields::kTestFunctionSeeds[0]).phi;
        CHECK_THROWS_AS(weak_steady_residual(VectorField(Grid(32, 16.0)), coarse_phi), PreconditionError);
        CHECK_NOTHROW(weak_steady_residual(VectorField(Grid(32, 16.0)), coarse_phi, 0.05));
    }
    SUBCASE("non-solenoidal test function") {
        CHECK_THROWS_AS(weak_steady_residual(U, fields::gaussian_vector(g, 1.0)), PreconditionError);
    }
}

TEST_CASE("Holder pairing") {
    Grid g(16, 8.0);
    SUBCASE("zero field") {
        const HolderPair h = holder_gap(VectorField(g), fields::random_band_limited(g, 4, 0), 4.0);
        CHECK(h.lhs == 0.0);
        CHECK(h.rhs == 0.0);
        CHECK(h.q == 2.0);
    }
    SUBCASE("random trials") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const VectorField R = fields::random_band_limited(g, 5, seed);
            const VectorField phi = fields::random_band_limited(g, 3, seed + 1000);
            const double p = 2.5 + 0.1 * static_cast<double>(seed % 40);
            const HolderPair h = holder_gap(R, phi, p);
            CHECK(h.lhs <= h.rhs + 1e-10);
        }
    }
    SUBCASE("exponent at or below two") {
        CHECK_THROWS_AS(holder_gap(VectorField(g), VectorField(g), 2.0), DomainError);
    }
}

TEST_CASE("residual report") {
    std::ostringstream os;
    write_residual_csv(os, {{"steady", NAN, 0.5, 4.0}, {"picard", 0.25, 1e-3, 12.5}});
    const std::string s = os.str();
    CHECK(s.find("tag,tau_or_na,residual_l2_rel,trusted_radius") != std::string::npos);
    CHECK(s.find("steady,na,") != std::string::npos);
    CHECK(s.find("picard,2.5") != std::string::npos);
}
