#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pqrm/band_models.hpp"
#include "pqrm/observables.hpp"

using namespace pqrm;

TEST(BandGrid, Layout) {
    const auto two = make_band_grid(2, 8);
    EXPECT_EQ(two->lowest_band, 0);
    EXPECT_DOUBLE_EQ(two->p_min(), -2.0);
    EXPECT_DOUBLE_EQ(two->p_max(), 2.0);
    EXPECT_DOUBLE_EQ(two->p(two->zero_index()), 0.0);
    EXPECT_DOUBLE_EQ(two->p(0), -2.0 + 0.25);

    const auto six = make_band_grid(6, 8);
    EXPECT_EQ(six->lowest_band, -2);
    EXPECT_DOUBLE_EQ(six->p_min(), -6.0);
    EXPECT_DOUBLE_EQ(six->p(six->zero_index()), 0.0);
    EXPECT_EQ(six->block_of_band(0), 2);
    EXPECT_EQ(six->block_of_band(5), -1);

    EXPECT_THROW(make_band_grid(1, 8), std::invalid_argument);
    EXPECT_THROW(make_band_grid(2, 2), std::invalid_argument);
}

TEST(BandGrid, FoldingOfSamples) {
    const auto g = make_band_grid(4, 16);
    for (int i = 0; i < g->size(); ++i) {
        const auto f = fold_scaled(g->p(i));
        EXPECT_EQ(f.band, g->band_of_block(i / g->n_q));
        EXPECT_NEAR(f.q, g->q(i % g->n_q), 1e-12);
    }
}

TEST(BandInitialState, MatchesGridProjection) {
    const auto p = PhysicalParams::rubidium87(346.0, 800.0);
    const auto grid = make_grid(p);
    for (auto kind : {InitialKind::momentum_kick, InitialKind::qubit_g, InitialKind::qubit_e}) {
        InitialStateSpec spec;
        spec.kind = kind;
        const auto proj = project_grid_to_bands(initial_state(spec, p, grid), 2);
        EXPECT_LT(proj.discarded_weight, 1e-12);
        const auto direct = band_initial_state(spec, p, proj.state.grid);
        EXPECT_GT(std::norm(direct.amp.dot(proj.state.amp)), 1.0 - 1e-10);
    }
}

TEST(BandProjection, ThrowsWhenPopulationLeavesTheKeptBands) {
    const auto p = PhysicalParams::rubidium87(346.0);
    const auto grid = make_grid(p);
    InitialStateSpec spec;
    spec.momentum_offset = 8.0 * constants::hbar * p.wavevector();  // centre at +6 hbar k, band 2
    const auto s = initial_state(spec, p, grid);
    EXPECT_THROW(project_grid_to_bands(s, 2), BandBreakdownError);
    try {
        project_grid_to_bands(s, 2);
    } catch (const BandBreakdownError& e) {
        EXPECT_GT(e.discarded_weight, 0.99);
    }
    EXPECT_NO_THROW(project_grid_to_bands(s, 6));
}

// With the trap switched (almost) off, a plane wave at p = -2 hbar k flops
// into p = +2 hbar k at rate V/4.
TEST(BandPropagator, DegenerateTwoLevelRabiFlop) {
    const auto p = PhysicalParams::rubidium87(1e-3, 1280.0);
    const auto sp = nondimensionalize(p);
    const auto g = make_band_grid(2, 64);
    BandPropagator prop(g, p);
    BandState s{g, Eigen::VectorXcd::Zero(g->size()), 0.0};
    const int j = g->n_q / 2 - 1;  // q = 0 column
    ASSERT_NEAR(g->p(j), -1.0, 1e-12);
    s.amp[j] = 1.0;
    const double dt = 1e-6;
    for (int k = 1; k <= 8; ++k) {
        s = prop.propagate(s, dt, 50);
        const double t = sp.from_time(s.time);
        EXPECT_NEAR(s.band_population(0), oracle::rabi_population(sp.lattice_depth, t), 1e-9) << "step " << k;
    }
}

TEST(BandPropagator, NormPreservedAndZeroStepIdentity) {
    const auto p = PhysicalParams::rubidium87(346.0, 1750.0);
    const auto g = make_band_grid(2, 408);
    BandPropagator prop(g, p);
    const auto s0 = band_initial_state({}, p, g);
    EXPECT_EQ(prop.propagate(s0, 1e-7, 0).amp, s0.amp);
    const auto s = prop.propagate(s0, 1e-7, 5000);
    EXPECT_LT(std::abs(s.norm() - 1.0), 1e-10);
    EXPECT_GE(s.max_edge_weight, 0.0);
}

// At V = 0 the bands decouple, so adding more of them changes nothing while
// the packet stays inside n_b in {0, 1}.
TEST(BandPropagator, MultibandReducesToTwoBandsWithoutLattice) {
    const auto p = PhysicalParams::rubidium87(346.0, 0.0);
    const auto g2 = make_band_grid(2, 408);
    const auto g6 = make_band_grid(6, 408);
    BandPropagator p2(g2, p), p6(g6, p);
    auto a = band_initial_state({}, p, g2);
    auto b = band_initial_state({}, p, g6);
    const double T = derive(p).trap_period;
    for (int k = 0; k < 4; ++k) {
        a = p2.propagate(a, 1e-7, static_cast<long>(T / 8 / 1e-7));
        b = p6.propagate(b, 1e-7, static_cast<long>(T / 8 / 1e-7));
        EXPECT_NEAR(excitation_number(a, p), excitation_number(b, p), 1e-9 * excitation_number(b, p) + 1e-12);
        EXPECT_NEAR(band_occupation(a), band_occupation(b), 1e-9);
    }
}

TEST(BandRaman, ReadsOutQubitStates) {
    const auto p = PhysicalParams::rubidium87(346.0);
    for (int nb : {2, 6}) {
        const auto g = make_band_grid(nb, 408);
        InitialStateSpec spec;
        spec.kind = InitialKind::qubit_g;
        EXPECT_NEAR(sigma_z_readout(band_initial_state(spec, p, g)), 1.0, 1e-12);
        spec.kind = InitialKind::qubit_e;
        EXPECT_NEAR(sigma_z_readout(band_initial_state(spec, p, g)), -1.0, 1e-12);
    }
}

TEST(BandPropagator, FreeFunctionsCheckBandCount) {
    const auto p = PhysicalParams::rubidium87(346.0, 800.0);
    const auto g6 = make_band_grid(6, 64);
    const auto s = band_initial_state({}, p, g6);
    EXPECT_THROW(pqrm_propagate(s, p, 1e-7, 1), std::invalid_argument);
    EXPECT_NO_THROW(multiband_propagate(s, p, 1e-7, 1));
}
