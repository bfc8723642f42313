#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "pqrm/svg.hpp"

using namespace pqrm;

namespace {

std::vector<CsvRow> fig2_rows() {
    std::vector<CsvRow> rows;
    for (double w : {0.0, 800.0, 1280.0})
        for (Model m : {Model::grid, Model::pqrm, Model::qrm})
            for (int k = 0; k < 20; ++k) {
                CsvRow r;
                r.model = m;
                r.time = k * 1e-4;
                r.ex_number = 80.0 * (1 - std::cos(k * 0.3));
                r.omega_q_hz = w;
                r.mean_x = 1e-6 * std::sin(k * 0.3);
                r.mean_q = 1e-28 * std::cos(k * 0.3);
                if (m == Model::qrm) r.overlap = 0.5;
                else r.readout = 0.2;
                rows.push_back(r);
            }
    return rows;
}

int count(const std::string& s, const std::string& needle) {
    int n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Svg, StackedPanelsWithLineStyles) {
    PlotSpec spec;
    spec.period = 1.0 / 346.0;
    const auto svg = render_svg(fig2_rows(), spec);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
    EXPECT_EQ(count(svg, "Hz</text>"), 3);                       // one label per panel
    EXPECT_EQ(count(svg, "fill=\"none\" stroke=\"#000\"/>"), 3);  // three frames
    EXPECT_NE(svg.find("stroke-dasharray=\"6,4\""), std::string::npos);  // qrm dashed
    EXPECT_GE(count(svg, "<circle"), 60);                          // grid as points
    EXPECT_NE(svg.find("t / (2&#960;/&#969;)"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, MillisecondAxisWithoutPeriod) {
    const auto svg = render_svg(fig2_rows(), PlotSpec{});
    EXPECT_NE(svg.find("t (ms)"), std::string::npos);
}

TEST(Svg, RevivalUsesOverlapForQrm) {
    auto rows = fig2_rows();
    PlotSpec spec = plot_spec_for(ScenarioId::collapse_revival, 1.0 / 650.0);
    EXPECT_EQ(spec.quantity, PlotQuantity::revival);
    const auto svg = render_svg(rows, spec);
    EXPECT_NE(svg.find("stroke-dasharray=\"6,4\""), std::string::npos);
}

TEST(Svg, SweepBecomesColourMap) {
    std::vector<CsvRow> rows;
    for (int w = 0; w <= 40; ++w)
        for (int k = 0; k < 10; ++k) {
            CsvRow r;
            r.time = k * 1e-4;
            r.omega_q_hz = 50.0 * w;
            r.ex_number = (w - 20) * 0.1 * std::sin(k);
            rows.push_back(r);
        }
    const auto svg = render_svg(rows, PlotSpec{});
    EXPECT_GE(count(svg, "<rect"), 410);
    EXPECT_NE(svg.find("&#916;N"), std::string::npos);
    EXPECT_NE(svg.find("#ffffff"), std::string::npos);  // zero maps to white
}

TEST(Svg, PhaseSpacePanels) {
    const auto svg = render_svg(fig2_rows(), plot_spec_for(ScenarioId::phase_space, 1.0 / 346.0));
    EXPECT_NE(svg.find("&lt;x&gt; (&#956;m)"), std::string::npos);
    EXPECT_EQ(count(svg, "Hz</text>"), 3);
}

TEST(Svg, EmptyCsvWritesNothing) {
    const auto dir = std::filesystem::temp_directory_path() / "pqrm_svg_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "empty.csv";
    const auto svg = dir / "empty.svg";
    std::filesystem::remove(svg);
    { std::ofstream(csv) << csv_header << "\n"; }
    EXPECT_THROW(plot_csv_file(csv.string(), svg.string(), {}), CsvError);
    EXPECT_FALSE(std::filesystem::exists(svg));
    { std::ofstream(csv) << ""; }
    EXPECT_THROW(plot_csv_file(csv.string(), svg.string(), {}), CsvError);
    EXPECT_FALSE(std::filesystem::exists(svg));
}

TEST(Svg, NiceTicks) {
    const auto t = detail::nice_ticks(0.0, 2.2);
    ASSERT_FALSE(t.empty());
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_NEAR(t[1], 0.5, 1e-12);
    EXPECT_LE(t.back(), 2.2);
}
