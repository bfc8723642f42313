#include <gtest/gtest.h>

#include <cmath>

#include "pqrm/scenario.hpp"

using namespace pqrm;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.params = PhysicalParams::rubidium87(346.0);
    c.models = {Model::pqrm, Model::qrm};
    c.t_end_periods = 0.5;
    c.n_samples = 6;
    c.qubit_splits_hz = {0.0, 800.0};
    c.n_max = 400;
    return c;
}

void expect_identical(const ObservableSeries& a, const ObservableSeries& b) {
    ASSERT_EQ(a.records.size(), b.records.size());
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.qubit_split_hz, b.qubit_split_hz);
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].excitation_number, b.records[k].excitation_number);
        EXPECT_EQ(a.records[k].mean_x, b.records[k].mean_x);
        EXPECT_EQ(a.records[k].band_occupation, b.records[k].band_occupation);
        EXPECT_EQ(a.records[k].readout, b.records[k].readout);
        EXPECT_EQ(a.records[k].overlap, b.records[k].overlap);
    }
}

}  // namespace

TEST(GaussHermite, Moments) {
    const auto one = gauss_hermite(1);
    EXPECT_EQ(one.nodes, std::vector<double>{0.0});
    EXPECT_EQ(one.weights, std::vector<double>{1.0});
    const auto r = gauss_hermite(5);  // exact up to degree 9
    auto moment = [&](int k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
        return s;
    };
    EXPECT_NEAR(moment(0), 1.0, 1e-14);
    EXPECT_NEAR(moment(1), 0.0, 1e-14);
    EXPECT_NEAR(moment(2), 1.0, 1e-13);
    EXPECT_NEAR(moment(4), 3.0, 1e-12);
    EXPECT_NEAR(moment(8), 105.0, 1e-9);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(r.nodes[i], -r.nodes[4 - i]);
        EXPECT_EQ(r.weights[i], r.weights[4 - i]);
    }
    EXPECT_THROW(gauss_hermite(0), ConfigError);
}

TEST(Scenario, Validation) {
    auto c = small_config();
    EXPECT_NO_THROW(validate(c));
    c.t_end_periods = c.t_start_periods;
    EXPECT_THROW(validate(c), ConfigError);
    c = small_config();
    c.models.clear();
    EXPECT_THROW(validate(c), ConfigError);
    c = small_config();
    c.n_samples = 1;
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_NO_THROW(validate(c, 1));
    c = small_config();
    c.grid_points = 1000;
    EXPECT_THROW(validate(c), ConfigError);
    c = small_config();
    c.qubit_splits_hz = {-5.0};
    EXPECT_THROW(validate(c), ConfigError);
    c = small_config();
    c.pulse.area = 7.0;
    EXPECT_THROW(validate(c), ConfigError);
}

TEST(Scenario, SampleTimesSpanThePeriodRange) {
    auto c = small_config();
    c.t_start_periods = 0.2;
    c.t_end_periods = 1.2;
    c.n_samples = 11;
    const auto t = sample_times(c);
    const double T = 1.0 / 346.0;
    ASSERT_EQ(t.size(), 11u);
    EXPECT_NEAR(t.front(), 0.2 * T, 1e-15);
    EXPECT_NEAR(t.back(), 1.2 * T, 1e-15);
    EXPECT_NEAR(t[5], 0.7 * T, 1e-15);
}

TEST(Scenario, RunProducesOneSeriesPerSplittingAndModel) {
    const auto c = small_config();
    const auto res = run_scenario(c, 1, "abc");
    ASSERT_EQ(res.series.size(), 4u);
    EXPECT_EQ(res.series[0].model, Model::pqrm);
    EXPECT_EQ(res.series[1].model, Model::qrm);
    EXPECT_EQ(res.series[2].qubit_split_hz, 800.0);
    for (const auto& s : res.series) {
        EXPECT_EQ(s.records.size(), 6u);
        EXPECT_EQ(s.records.front().time, 0.0);
        EXPECT_EQ(s.model == Model::qrm, s.records.back().overlap.has_value());
        EXPECT_EQ(s.model != Model::qrm, s.records.back().readout.has_value());
    }
    EXPECT_EQ(res.provenance.config_hash, "abc");
    EXPECT_FALSE(res.provenance.started_at.empty());
    // at w_q = 0 both models start at N = 0 and reach 4(g/w)^2 = QRM peak at T/2
    const double gw = derive(c.params).coupling_ratio;
    EXPECT_NEAR(res.series[1].records.back().excitation_number, 4 * gw * gw, 0.005 * 4 * gw * gw);
}

TEST(Scenario, DeterministicAcrossThreadCounts) {
    const auto c = small_config();
    const auto a = run_scenario(c, 1);
    const auto b = run_scenario(c, 3);
    ASSERT_EQ(a.series.size(), b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) expect_identical(a.series[i], b.series[i]);
}

TEST(Scenario, SpreadAverageIsTheWeightedQuadrature) {
    auto c = small_config();
    c.models = {Model::pqrm};
    c.spread_hbar_k = 0.05;
    c.quadrature_nodes = 3;
    const auto p = with_qubit_split_hz(c.params, 1280.0);
    const auto times = sample_times(c);
    const auto avg = spread_average(c, Model::pqrm, p, initial_spec(c), times);
    const auto rule = gauss_hermite(3);
    const double sigma = 0.05 * constants::hbar * p.wavevector();
    double manual = 0.0;
    for (int i = 0; i < 3; ++i) {
        InitialStateSpec spec = initial_spec(c);
        spec.momentum_offset = sigma * rule.nodes[i];
        manual += rule.weights[i] * detail::trajectory(c, Model::pqrm, p, spec, times).records.back().excitation_number;
    }
    EXPECT_NEAR(avg.records.back().excitation_number, manual, 1e-12 * std::abs(manual));

    // the spread does something once the lattice couples the branches
    c.spread_hbar_k = 0.0;
    const auto sharp = spread_average(c, Model::pqrm, p, initial_spec(c), times);
    EXPECT_GT(std::abs(sharp.records.back().excitation_number - avg.records.back().excitation_number), 1e-6);
}

TEST(Scenario, ErrorsCarryCoordinates) {
    auto c = small_config();
    c.models = {Model::grid};
    c.grid_points = 256;
    c.grid_length = 1e-6;
    c.qubit_splits_hz = {0.0};
    try {
        run_scenario(c);
        FAIL() << "expected a numerical error";
    } catch (const NumericalError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("model=grid"), std::string::npos) << what;
        EXPECT_NE(what.find("omega_q/2pi=0"), std::string::npos) << what;
    }
}

TEST(Scenario, ExcitationDifferenceShapeAndOrder) {
    auto c = small_config();
    c.models = {Model::pqrm};
    c.t_end_periods = 0.3;
    c.n_samples = 4;
    c.qubit_splits_hz = {1250.0, 350.0, 700.0};
    const auto a = excitation_difference(c, 1);
    const auto b = excitation_difference(c, 2);
    ASSERT_EQ(a.values.rows(), 3);
    ASSERT_EQ(a.values.cols(), 4);
    EXPECT_EQ(a.qubit_splits_hz, c.qubit_splits_hz);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NEAR(a.values(0, 0), 0.0, 1e-12);  // both states start at N = 0
    c.n_samples = 1;
    EXPECT_NO_THROW(excitation_difference(c));
}

TEST(Scenario, Names) {
    for (auto id : {ScenarioId::excitation_number, ScenarioId::band_occupation, ScenarioId::phase_space,
                    ScenarioId::collapse_revival, ScenarioId::excitation_difference})
        EXPECT_EQ(parse_scenario_id(to_string(id)), id);
    EXPECT_FALSE(parse_scenario_id("fig9").has_value());
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}
