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

#include <random>

#include <gtest/gtest.h>

#include "hystab/config.hpp"
#include "hystab/scenarios.hpp"

using namespace hystab;

namespace {

void expect_same(const Scenario& a, const Scenario& b) {
    EXPECT_EQ(a.id, b.id);
    EXPECT_TRUE(a.sys == b.sys);
    EXPECT_TRUE(a.feedback == b.feedback);
    EXPECT_EQ(a.x0, b.x0);
    EXPECT_EQ(a.t_end, b.t_end);
    EXPECT_EQ(a.dt, b.dt);
    EXPECT_EQ(a.solver, b.solver);
    EXPECT_EQ(a.blowup_bound, b.blowup_bound);
    EXPECT_EQ(a.deadband, b.deadband);
    EXPECT_EQ(a.stick_resolution, b.stick_resolution);
    EXPECT_EQ(a.tail_fraction, b.tail_fraction);
    EXPECT_EQ(a.cycle_floor, b.cycle_floor);
    EXPECT_EQ(a.cycle_state, b.cycle_state);
    EXPECT_EQ(a.target_set, b.target_set);
    EXPECT_EQ(a.seed, b.seed);
}

constexpr const char* kMinimal = R"({"A": [[0, 1], [-1, -1]], "B": [0, 1], "C": [0, 1],
                                     "feedback": {"kind": "sign", "gamma": 1, "h": 1}})";

}  // namespace

TEST(Config, PresetsRoundTripBitExact) {
    for (const auto& sc : {build_double_integrator(), build_second_order(), build_oscillator(99.0),
                           build_oscillator(101.0, 100.0, 50.0, OscillatorFeedback::stop),
                           build_oscillator(101.0, 100.0, 50.0, OscillatorFeedback::none)}) {
        const auto text = to_json(sc).dump();
        const auto back = parse_scenario(text);
        expect_same(sc, back);
        EXPECT_EQ(to_json(back).dump(), text);
    }
}

TEST(Config, RandomDoublesRoundTripBitExact) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1e3);
    for (int trial = 0; trial < 50; ++trial) {
        Scenario sc;
        Matrix A(3, 3);
        for (Eigen::Index i = 0; i < 9; ++i) A(i / 3, i % 3) = n(rng) * std::exp(n(rng) * 1e-2);
        Vector B(3), C(3), x0(3);
        for (Eigen::Index i = 0; i < 3; ++i) {
            B(i) = n(rng);
            C(i) = n(rng) / 7.0;
            x0(i) = n(rng) / 3.0;
        }
        sc.sys = StateSpace(A, B, C);
        sc.x0 = x0;
        sc.dt = 1.0 / (3.0 + trial);
        sc.t_end = 10.0 / 3.0;
        sc.feedback = FeedbackSpec{OperatorKind::stop, 0.0, 0.1 + std::abs(n(rng)), 0.5 + std::abs(n(rng)),
                                   std::nullopt, {}};
        sc.seed = rng();
        expect_same(sc, parse_scenario(to_json(sc).dump()));
    }
}

TEST(Config, MinimalDocumentUsesDefaults) {
    const auto sc = parse_scenario(kMinimal);
    EXPECT_EQ(sc.sys.order(), 2);
    EXPECT_EQ(sc.x0, Vector::Zero(2));
    EXPECT_EQ(sc.feedback.kind, OperatorKind::sign);
    EXPECT_FALSE(sc.feedback.xi0.has_value());
}

TEST(Config, ParseErrorsAreConfigErrors) {
    EXPECT_THROW(parse_scenario(""), ConfigError);
    EXPECT_THROW(parse_scenario("{"), ConfigError);
    EXPECT_THROW(parse_scenario("[]"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"A": [[1]], "B": [1], "C": [1]})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"A": [[1]], "B": [1], "C": [1], "feedback": {"kind": "magic"}})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"A": [[1]], "B": ["x"], "C": [1], "feedback": {"kind": "sign"}})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"A": [[1]], "B": [1], "C": [1], "feedback": {"kind": "sign", "h": -1}})"),
                 ConfigError);
    EXPECT_THROW(parse_scenario(R"({"A": [[1]], "B": [1], "C": [1], "dt": 0, "feedback": {"kind": "sign"}})"),
                 ConfigError);
}

TEST(Config, ShapeMismatchesAreModelErrors) {
    EXPECT_THROW(parse_scenario(R"({"A": [[0, 1], [0]], "B": [0, 1], "C": [1, 0], "feedback": {"kind": "sign"}})"),
                 InvalidModel);
    EXPECT_THROW(parse_scenario(R"({"A": [[0, 1], [0, 0]], "B": [0, 1, 2], "C": [1, 0], "feedback": {"kind": "sign"}})"),
                 InvalidModel);
    EXPECT_THROW(parse_scenario(R"({"A": [[0, 1], [0, 0]], "B": [0, 1], "C": [1, 0], "x0": [1],
                                    "feedback": {"kind": "sign"}})"),
                 InvalidModel);
}

TEST(Config, TabulatedFeedback) {
    const auto sc = parse_scenario(R"({"A": [[-1]], "B": [1], "C": [1],
        "feedback": {"kind": "static", "table": [[-1, -0.5], [0, 0], [1, 1]]}})");
    ASSERT_EQ(sc.feedback.table.size(), 3u);
    EXPECT_EQ(parse_scenario(to_json(sc).dump()).feedback, sc.feedback);
}

TEST(Hash, Fnv1aVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Manifest, EmbedsScenarioForReruns) {
    auto sc = build_second_order();
    sc.seed = 17;
    const auto m = make_manifest("simulate", sc);
    const auto j = to_json(m);
    EXPECT_EQ(j["scenario_hash"], scenario_hash(sc));
    EXPECT_EQ(j["seed"], 17u);
    EXPECT_EQ(j["tool_version"], std::string(kToolVersion));
    const auto back = scenario_from_manifest(json::parse(j.dump()));
    expect_same(sc, back);
    EXPECT_EQ(scenario_hash(back), scenario_hash(sc));
    auto other = sc;
    other.dt *= 2.0;
    EXPECT_NE(scenario_hash(other), scenario_hash(sc));
    EXPECT_THROW(scenario_from_manifest(json::object()), ConfigError);
}
