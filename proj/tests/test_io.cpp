/*
 Copyright 2026 The hystab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <charconv>
#include <clocale>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hystab/io.hpp"
#include "hystab/scenarios.hpp"

using namespace hystab;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

/// Switches to a comma-decimal locale when one is installed.
struct CommaLocale {
    std::locale saved = std::locale();
    bool active = false;
    CommaLocale() {
        for (const char* name : {"de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8"}) {
            try {
                std::locale::global(std::locale(name));
                std::setlocale(LC_ALL, name);
                active = true;
                return;
            } catch (const std::runtime_error&) {
            }
        }
    }
    ~CommaLocale() {
        std::locale::global(saved);
        std::setlocale(LC_ALL, "C");
    }
};

}  // namespace

TEST(Format, ShortestRoundTrip) {
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        const auto s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        EXPECT_EQ(back, v) << s;
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Format, IgnoresGlobalLocale) {
    CommaLocale guard;
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_fixed(1.25, 2), "1.25");
    std::ostringstream s;
    CsvWriter(s).row({1.5, -2.25});
    EXPECT_EQ(s.str(), "1.5,-2.25\n");
}

TEST(Csv, TrajectoryColumns) {
    auto sc = build_oscillator(101.0);
    sc.t_end = 0.01;
    const auto r = run(sc);
    std::ostringstream out;
    write_trajectory_csv(out, r.trajectory);
    const auto lines = split(out.str(), '\n');
    ASSERT_EQ(lines.size(), r.trajectory.size() + 1);
    EXPECT_EQ(lines[0], "t,x1,x2,x3,x4,y,xi,u,V,dissipated");
    const auto first = split(lines[1], ',');
    ASSERT_EQ(first.size(), 10u);
    EXPECT_EQ(first[0], "0");
    EXPECT_EQ(first[1], "1");
}

TEST(Csv, EnergyColumns) {
    FeedbackSpec f{OperatorKind::sign, 1.0, 1.0, 1.0, std::nullopt, {}};
    const std::vector<double> ys{1.0, 0.0};
    std::ostringstream out;
    write_energy_csv(out, ledger_for_inputs(initial_state(f, 0.0), ys));
    const auto lines = split(out.str(), '\n');
    EXPECT_EQ(lines[0], "t,y,xi,w,V,dissipated");
    ASSERT_EQ(lines.size(), 6u);  // start, branch jump, up, reversal jump, down
    EXPECT_EQ(lines[4], "1,1,0,0,0.5,1");
}

TEST(Json, ReportShapes) {
    const auto so = build_second_order();
    const auto tl = transformed_loop_check(so.sys, static_sector(so.feedback), 1.0);
    const auto v = to_json(tl.phi_h);
    for (const char* k : {"loop", "status", "min_distance", "witness_omega", "encirclements"})
        EXPECT_TRUE(v.contains(k)) << k;
    EXPECT_EQ(v["status"], "touching");
    EXPECT_EQ(v["witness_omega"], 0.0);
    EXPECT_TRUE(v["encirclements"].is_null());

    auto sc = build_second_order();
    sc.t_end = 1.0;
    const auto d = to_json(run(sc).diagnostics);
    for (const char* k : {"bounded", "period", "amplitude", "growth_rate", "set_verdict"})
        EXPECT_TRUE(d.contains(k)) << k;

    const auto e = to_json(equilibrium(so.sys, so.feedback));
    EXPECT_EQ(e["points"].size(), 2u);
    EXPECT_FALSE(e.dump().find("-0.0") != std::string::npos);
}

TEST(Svg, PlotsAreWellFormed) {
    auto sc = build_second_order();
    sc.t_end = 2.0;
    const auto r = run(sc);
    const auto phase = render_svg(phase_portrait(r.trajectory, 0, 1));
    EXPECT_EQ(phase.rfind("<svg", 0), 0u);
    EXPECT_NE(phase.find("<polyline"), std::string::npos);
    EXPECT_NE(phase.find("</svg>"), std::string::npos);
    EXPECT_THROW(phase_portrait(r.trajectory, 0, 2), InvalidArgument);

    const auto locus = frequency_response(sc.sys, OmegaGrid{}, LocusKind::sG);
    const auto nyq = render_svg(nyquist_plot(locus, critical_disk(kInf, kInf)));
    EXPECT_NE(nyq.find("<path"), std::string::npos);  // the critical point marker
    const auto pm = render_svg(pole_map(poles(sc.sys)));
    EXPECT_NE(pm.find("<path"), std::string::npos);
    const auto hl = render_svg(hysteresis_loop(r.trajectory, "a<b"));
    EXPECT_NE(hl.find("a&lt;b"), std::string::npos);
}
