#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pqrm/band_models.hpp"
#include "pqrm/observables.hpp"
#include "pqrm/qrm.hpp"

using namespace pqrm;

TEST(Fold, Examples) {
    struct Case {
        double p, q;
        int band;
    };
    // p, q in units of 2 hbar k
    for (const Case& c : {Case{-1.0, 0.0, 0}, Case{1.0, 0.0, 1}, Case{0.0, 1.0, 0}, Case{2.0, 1.0, 1},
                          Case{-2.0, 1.0, -1}, Case{2.5, -0.5, 2}, Case{-1.9, -0.9, 0}, Case{3.0, 0.0, 2}}) {
        const auto f = fold_scaled(c.p);
        EXPECT_NEAR(f.q, c.q, 1e-12) << c.p;
        EXPECT_EQ(f.band, c.band) << c.p;
        EXPECT_NEAR(f.q, oracle::folded(c.p), 1e-12) << c.p;
    }
}

TEST(Fold, SiUnits) {
    const auto p = PhysicalParams::rubidium87(346.0);
    const double hk = constants::hbar * p.wavevector();
    const auto f = fold_momentum(-3.0 * hk, p);  // p = -1.5 in 2 hbar k
    EXPECT_EQ(f.band, 0);
    EXPECT_NEAR(f.q / hk, -1.0, 1e-12);
}

TEST(Fold, CeilDiv) {
    EXPECT_EQ(detail::ceil_div(5, 2), 3);
    EXPECT_EQ(detail::ceil_div(4, 2), 2);
    EXPECT_EQ(detail::ceil_div(0, 2), 0);
    EXPECT_EQ(detail::ceil_div(-1, 2), 0);
    EXPECT_EQ(detail::ceil_div(-3, 2), -1);
}

TEST(Observables, InitialExcitationIsZeroEverywhere) {
    const auto p = PhysicalParams::rubidium87(346.0, 800.0);
    const auto grid = make_grid(p);
    EXPECT_NEAR(excitation_number(initial_state({}, p, grid), p), 0.0, 1e-9);
    const auto bands = make_band_grid(2, grid->lattice_periods);
    EXPECT_NEAR(excitation_number(band_initial_state({}, p, bands), p), 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(excitation_number(fock_initial_state({}, p, 10)), 0.0);
}

TEST(Observables, BandOccupationOfPreparedStates) {
    const auto p = PhysicalParams::rubidium87(346.0);
    const auto grid = make_grid(p);
    EXPECT_NEAR(band_occupation(initial_state({}, p, grid)), 1.0, 1e-12);
    InitialStateSpec g;
    g.kind = InitialKind::qubit_g;
    EXPECT_NEAR(band_occupation(initial_state(g, p, grid)), 0.0, 1e-12);
}

TEST(Observables, GridAndBandMomentsAgreeOnProjectedState) {
    const auto p = PhysicalParams::rubidium87(346.0, 1280.0);
    const auto grid = make_grid(p);
    GridPropagator prop(grid, p);
    const auto s = prop.propagate(initial_state({}, p, grid), 1e-7, 3000);
    const auto b = project_grid_to_bands(s, 6, 1e-6).state;
    const auto mg = moments(s), mb = moments(b);
    EXPECT_NEAR(mg.q2, mb.q2, 1e-9);
    EXPECT_NEAR(mg.q, mb.q, 1e-9);
    EXPECT_NEAR(mg.p, mb.p, 1e-9);
    EXPECT_NEAR(mg.x, mb.x, 1e-6 * std::max(1.0, std::abs(mg.x)));
    EXPECT_NEAR(mg.x2, mb.x2, 1e-6 * mg.x2);
    EXPECT_NEAR(band_occupation(s), band_occupation(b), 1e-9);
}

TEST(Observables, FockMomentsOfCoherentState) {
    const auto p = PhysicalParams::rubidium87(346.0);
    const auto sp = nondimensionalize(p);
    InitialStateSpec spec;
    spec.momentum_offset = 0.3 * sp.momentum_unit;
    const auto s = fock_initial_state(spec, p, 60);
    const auto m = moments(s, sp);
    EXPECT_NEAR(m.q, 0.3, 1e-10);
    EXPECT_NEAR(m.x, 0.0, 1e-12);
    // |alpha|^2 = q^2 / w
    EXPECT_NEAR(excitation_number(s), 0.09 / sp.trap_freq, 1e-8);
}

TEST(Observables, RecordsCarryUnitsAndOptionalFields) {
    const auto p = PhysicalParams::rubidium87(346.0);
    const auto grid = make_grid(p);
    const auto r = observe(initial_state({}, p, grid), p);
    EXPECT_EQ(r.model, Model::grid);
    ASSERT_TRUE(r.readout.has_value());
    EXPECT_FALSE(r.overlap.has_value());
    EXPECT_NEAR(r.mean_p, -2.0 * constants::hbar * p.wavevector(), 1e-10 * std::abs(r.mean_p));
    EXPECT_NEAR(r.mean_q, 0.0, 1e-12 * std::abs(r.mean_p));
    const auto none = observe(initial_state({}, p, grid), p, std::nullopt);
    EXPECT_FALSE(none.readout.has_value());
    const auto f0 = fock_initial_state({}, p, 10);
    const auto rq = observe(f0, p, &f0);
    ASSERT_TRUE(rq.overlap.has_value());
    EXPECT_NEAR(*rq.overlap, 1.0, 1e-15);
}

TEST(Observables, ModelNames) {
    for (auto m : {Model::grid, Model::pqrm, Model::multiband, Model::qrm}) EXPECT_EQ(parse_model(to_string(m)), m);
    EXPECT_FALSE(parse_model("bogus").has_value());
}

TEST(Observables, PhaseSpaceTrajectory) {
    std::vector<ObservableRecord> rs(3);
    for (int i = 0; i < 3; ++i) rs[i].mean_x = i, rs[i].mean_p = 2 * i, rs[i].mean_q = -i;
    const auto t = phase_space_trajectory(rs);
    ASSERT_EQ(t.position_momentum.size(), 3u);
    EXPECT_EQ(t.position_momentum[2], std::make_pair(2.0, 4.0));
    EXPECT_EQ(t.position_quasimomentum[2], std::make_pair(2.0, -2.0));
}

// Independent check of the folding observable against the V = 0 Liouville oracle.
TEST(Observables, FoldedExcitationMatchesLiouvilleOracleAtZeroSplitting) {
    const auto p = PhysicalParams::rubidium87(346.0, 0.0);
    const auto sp = nondimensionalize(p);
    const auto bands = make_band_grid(2, make_grid(p)->lattice_periods);
    BandPropagator prop(bands, p);
    auto s = band_initial_state({}, p, bands);
    const double T = derive(p).trap_period;
    for (int k = 1; k <= 4; ++k) {
        const long n = static_cast<long>(std::ceil(T / 8 / 1e-7));
        s = prop.propagate(s, T / 8 / n, n);
        const double ref = oracle::folded_excitation(sp.trap_freq, p.trap_freq() * s.time);
        EXPECT_NEAR(excitation_number(s, p), ref, 0.03 * std::max(ref, 1.0)) << k;
    }
}
