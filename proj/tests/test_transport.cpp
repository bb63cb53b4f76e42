#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "corrode/config.hpp"
#include "corrode/mesh.hpp"
#include "corrode/transport.hpp"

using namespace corrode;

namespace {

// Strip along x whose left edge receives the anodic influx.
Mesh influx_strip(double length, double height, double size, double porosity) {
    Mesh m = generate_bar_mesh(length, height, size);
    assign_porosity(m, porosity, porosity);
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        if (m.nodes[i].x != 0.0) continue;
        for (std::size_t j = 0; j < m.node_count(); ++j) {
            if (m.nodes[j].x == 0.0 && std::abs(m.nodes[j].y - m.nodes[i].y - size) < 1e-12) {
                BoundaryEdge e;
                e.nodes = {static_cast<int>(i), static_cast<int>(j)};
                e.tag = BoundaryTag::RebarSurface;
                m.boundary_edges.push_back(e);
            }
        }
    }
    return m;
}

ScalarSpace porous_space(const Mesh& m) { return make_scalar_space(m, is_porous); }

}  // namespace

TEST(Reactions, ZeroConcentrationsGiveZeroRates) {
    const auto r = reaction_rates(0.0, 0.0, 0.28, 0.1, 2e-4);
    EXPECT_EQ(r.ferrous, 0.0);
    EXPECT_EQ(r.ferric, 0.0);
    EXPECT_EQ(r.precipitation, 0.0);
}

TEST(Reactions, HandArithmetic) {
    const auto r = reaction_rates(1.0, 100.0, 0.28, 0.1, 2e-4);
    EXPECT_NEAR(r.ferrous, -0.028, 1e-15);
    EXPECT_NEAR(r.precipitation, 0.02, 1e-15);
    EXPECT_NEAR(r.ferric, 0.008, 1e-15);
}

TEST(Reactions, RatesSumToZero) {
    for (double c2 : {0.0, 0.3, 17.0, 950.0})
        for (double c3 : {0.0, 2.5, 400.0}) {
            const auto r = reaction_rates(c2, c3, 0.28, 0.1, 2e-4);
            EXPECT_NEAR(r.ferrous + r.ferric + r.precipitation, 0.0,
                        1e-15 * (std::abs(r.ferrous) + std::abs(r.precipitation) + 1e-300));
        }
}

TEST(Faraday, InfluxValues) {
    EXPECT_EQ(faraday_influx(0.0, 96485.0), 0.0);
    EXPECT_NEAR(faraday_influx(0.1, 96485.0), 1.0364e-6, 1e-10);
    EXPECT_NEAR(faraday_influx(0.05, 96485.0), 5.182e-7, 1e-10);
}

TEST(Diffusivity, IntactCrackedAndClogged) {
    const double p0 = 0.26;
    EXPECT_NEAR(effective_diffusivity(p0, 0.0, 1e-11 / p0, 7e-10), 1e-11, 1e-25);
    EXPECT_NEAR(effective_diffusivity(0.13, 1.0, 1e-11 / p0, 7e-10), 7e-10, 1e-24);
    EXPECT_NEAR(effective_diffusivity(0.0, 1.0, 1e-11 / p0, 7e-10), 7e-10, 1e-24);
    EXPECT_EQ(effective_diffusivity(0.0, 0.0, 1e-11 / p0, 7e-10), 0.0);
}

TEST(Precipitate, NoFerricNoChangeAndNoOvershoot) {
    EXPECT_EQ(update_precipitate(0.05, 0.0, 8640.0, 0.10685, 3560.0, 2e-4, 0.26), 0.05);
    EXPECT_EQ(update_precipitate(0.26, 500.0, 8640.0, 0.10685, 3560.0, 2e-4, 0.26), 0.26);
    EXPECT_LE(update_precipitate(0.2, 1e9, 8640.0, 0.10685, 3560.0, 2e-4, 0.26), 0.26);
}

TEST(Precipitate, ClosedFormAtOneMillionSeconds) {
    const double a = 0.10685 / 3560.0 * 2e-4 * 100.0;
    EXPECT_NEAR(a, 6.0028e-7, 1e-11);
    EXPECT_NEAR(0.26 * (1.0 - std::exp(-a * 1e6)), 0.1173, 1e-4);
}

TEST(Precipitate, TimeSteppingTracksClosedForm) {
    const double p0 = 0.26, c3 = 100.0;
    const double a = 0.10685 / 3560.0 * 2e-4 * c3;
    for (double dt : {4000.0, 2000.0, 1000.0}) {
        double theta = 0.0, worst = 0.0;
        for (int n = 1; n * dt <= 4e6; ++n) {
            theta = update_precipitate(theta, c3, dt, 0.10685, 3560.0, 2e-4, p0);
            const double exact = p0 * (1.0 - std::exp(-a * n * dt));
            worst = std::max(worst, std::abs(theta - exact) / exact);
        }
        EXPECT_LE(worst, 2.0 * dt * a) << "dt " << dt;
    }
}

TEST(TransportSolver, ZeroCurrentKeepsZeroState) {
    const Mesh m = influx_strip(0.01, 0.002, 0.5e-3, 0.26);
    const ScalarSpace space = porous_space(m);
    TransportParams tp;
    tp.current_density = 0.0;
    TransportSolver solver(m, space, tp, RustParams{});
    SpeciesState s = solver.initial_state();
    const std::vector<double> phi(space.size(), 0.0);
    for (int k = 0; k < 10; ++k) solver.step(s, phi, 8640.0);
    for (std::size_t i = 0; i < space.size(); ++i) {
        EXPECT_EQ(s.ferrous[i], 0.0);
        EXPECT_EQ(s.ferric[i], 0.0);
        EXPECT_EQ(s.precipitate[i], 0.0);
    }
}

TEST(TransportSolver, ConstantFluxMatchesHalfSpaceSolution) {
    const double p0 = 0.26, size = 0.25e-3;
    const Mesh m = influx_strip(0.05, 2 * size, size, p0);
    const ScalarSpace space = porous_space(m);
    TransportParams tp;
    tp.bulk_porosity = p0;
    tp.rate_ii_to_iii = 0.0;
    tp.rate_iii_to_p = 0.0;
    tp.current_density = 0.1;
    TransportSolver solver(m, space, tp, RustParams{});
    SpeciesState s = solver.initial_state();
    const std::vector<double> phi(space.size(), 0.0);
    const double dt = 1800.0, t_end = 10 * 86400.0;
    for (double t = 0; t < t_end - 1e-6; t += dt) solver.step(s, phi, dt);

    const double flux = faraday_influx(0.1, tp.faraday);
    const double kappa = tp.scaled_diffusivity_ii;
    const double diff = kappa / p0;
    const double root = std::sqrt(diff * t_end);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double x = m.nodes[space.dof_to_node[i]].x;
        const double exact = flux / kappa *
                             (2.0 * root / std::sqrt(M_PI) * std::exp(-x * x / (4.0 * diff * t_end)) -
                              x * std::erfc(x / (2.0 * root)));
        err += space.lumped_area[i] * std::pow(s.ferrous[i] - exact, 2);
        norm += space.lumped_area[i] * exact * exact;
    }
    EXPECT_LE(std::sqrt(err / norm), 0.01);
}

TEST(TransportSolver, ClosedSystemConservesIron) {
    const Mesh m = influx_strip(0.01, 0.004, 0.5e-3, 0.26);
    const ScalarSpace space = porous_space(m);
    TransportParams tp;
    tp.current_density = 0.0;
    TransportSolver solver(m, space, tp, RustParams{});
    SpeciesState s = solver.initial_state();
    for (std::size_t i = 0; i < space.size(); ++i) s.ferrous[i] = 200.0 + 50.0 * m.nodes[space.dof_to_node[i]].x / 0.01;
    const double start = solver.iron_content(s);
    const std::vector<double> phi(space.size(), 0.0);
    std::vector<double> previous = s.precipitate;
    for (int k = 0; k < 1000; ++k) {
        solver.step(s, phi, 8640.0);
        for (std::size_t i = 0; i < space.size(); ++i) {
            ASSERT_GE(s.precipitate[i], previous[i]);  // clogging is monotone
            ASSERT_LE(s.precipitate[i], solver.pore_capacity()[i]);
        }
        previous = s.precipitate;
    }
    EXPECT_LE(std::abs(solver.iron_content(s) - start) / start, 1e-3);
    const auto theta_l = solver.liquid_fraction(s);
    for (std::size_t i = 0; i < space.size(); ++i) {
        EXPECT_NEAR(theta_l[i], solver.pore_capacity()[i] - s.precipitate[i], 1e-14);
    }
}

TEST(TransportSolver, OpenSystemBalancesInjectedIron) {
    const Mesh m = influx_strip(0.01, 0.002, 0.25e-3, 0.26);
    const ScalarSpace space = porous_space(m);
    TransportParams tp;
    TransportSolver solver(m, space, tp, RustParams{});
    SpeciesState s = solver.initial_state();
    const std::vector<double> phi(space.size(), 0.0);
    double injected = 0.0;
    for (int k = 0; k < 300; ++k) injected += solver.step(s, phi, 8640.0).injected;
    EXPECT_LE(std::abs(solver.iron_content(s) - injected) / injected, 1e-9);
}

TEST(TransportSolver, PureDiffusionObeysMaximumPrinciple) {
    const Mesh m = influx_strip(0.01, 0.003, 0.5e-3, 0.26);
    const ScalarSpace space = porous_space(m);
    TransportParams tp;
    tp.current_density = 0.0;
    tp.rate_ii_to_iii = 0.0;
    tp.rate_iii_to_p = 0.0;
    TransportSolver solver(m, space, tp, RustParams{});
    SpeciesState s = solver.initial_state();
    for (std::size_t i = 0; i < space.size(); ++i) {
        s.ferrous[i] = m.nodes[space.dof_to_node[i]].x < 0.005 ? 10.0 : 1.0;
    }
    const std::vector<double> phi(space.size(), 0.0);
    for (int k = 0; k < 50; ++k) {
        const double lo = *std::min_element(s.ferrous.begin(), s.ferrous.end());
        const double hi = *std::max_element(s.ferrous.begin(), s.ferrous.end());
        solver.step(s, phi, 3600.0);
        for (double c : s.ferrous) {
            ASSERT_GE(c, lo - 1e-12 * hi);
            ASSERT_LE(c, hi + 1e-12 * hi);
        }
    }
}
