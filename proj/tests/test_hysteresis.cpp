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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hystab/hysteresis.hpp"

using namespace hystab;

namespace {

FeedbackSpec sign_spec(double gamma, double h) { return {OperatorKind::sign, gamma, h, 1.0, std::nullopt, {}}; }
FeedbackSpec stop_spec(double c, double h) { return {OperatorKind::stop, 0.0, h, c, std::nullopt, {}}; }

std::vector<double> outputs(OperatorState s, const std::vector<double>& ys) {
    std::vector<double> out;
    for (double y : ys) {
        auto u = update(s, y);
        out.push_back(u.xi);
        s = u.state;
    }
    return out;
}

std::vector<double> dyadic_walk(std::mt19937_64& rng, int n) {
    std::vector<double> y;
    double v = 0.0;
    for (int k = 0; k < n; ++k) {
        v += std::ldexp(static_cast<double>(static_cast<int>(rng() % 33) - 16), -5);
        y.push_back(v);
    }
    return y;
}

}  // namespace

TEST(SignHysteresis, BranchesFollowInputDirection) {
    auto s = initial_state(sign_spec(2.0, 0.5), 0.0);
    EXPECT_EQ(s.xi_prev, 0.0);  // starts on the midline
    auto u = update(s, 1.0);
    EXPECT_DOUBLE_EQ(u.xi, 2.5);
    u = update(u.state, 0.5);
    EXPECT_DOUBLE_EQ(u.xi, 0.5);
    u = update(u.state, 0.5);  // zero increment keeps the direction
    EXPECT_DOUBLE_EQ(u.xi, 0.5);
    EXPECT_EQ(std::get<SignHysteresis>(u.state.op).direction, -1);
}

TEST(SignHysteresis, DeadbandHoldsDirection) {
    auto s = update(initial_state(sign_spec(1.0, 1.0), 0.0), 1.0).state;
    auto u = update(s, 1.0 - 1e-14, 1e-12);
    EXPECT_EQ(std::get<SignHysteresis>(u.state.op).direction, 1);
}

TEST(SignHysteresis, ZeroHeightEqualsStaticMap) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = std::abs(n(rng));
        std::vector<double> ys(100);
        for (auto& y : ys) y = 3.0 * n(rng);
        const auto a = outputs(initial_state(sign_spec(gamma, 0.0), 0.0), ys);
        FeedbackSpec st{OperatorKind::static_map, gamma, 0.0, 1.0, std::nullopt, {}};
        const auto b = outputs(initial_state(st, 0.0), ys);
        EXPECT_EQ(a, b);
    }
}

TEST(SignHysteresis, InitialStateMustLieOnABranch) {
    auto f = sign_spec(1.0, 1.0);
    f.xi0 = 3.0;
    EXPECT_EQ(std::get<SignHysteresis>(initial_state(f, 2.0).op).direction, 1);
    f.xi0 = 1.0;
    EXPECT_EQ(std::get<SignHysteresis>(initial_state(f, 2.0).op).direction, -1);
    f.xi0 = 2.0;
    EXPECT_EQ(std::get<SignHysteresis>(initial_state(f, 2.0).op).direction, 0);
    f.xi0 = 2.5;
    EXPECT_THROW(initial_state(f, 2.0), InconsistentInitialState);
}

TEST(StopElement, SlopeAndSaturation) {
    auto s = initial_state(stop_spec(2.0, 1.0), 0.0);
    auto u = update(s, 0.25);
    EXPECT_DOUBLE_EQ(u.xi, 0.5);
    u = update(u.state, 3.0);
    EXPECT_DOUBLE_EQ(u.xi, 1.0);
    u = update(u.state, 2.5);  // reversal leaves saturation with slope c
    EXPECT_DOUBLE_EQ(u.xi, 0.0);
    u = update(u.state, -10.0);
    EXPECT_DOUBLE_EQ(u.xi, -1.0);
}

TEST(StopElement, InitialStateInsideBand) {
    auto f = stop_spec(1.0, 1.0);
    f.xi0 = 0.5;
    EXPECT_DOUBLE_EQ(initial_state(f, 4.0).xi_prev, 0.5);
    f.xi0 = 1.5;
    EXPECT_THROW(initial_state(f, 4.0), InconsistentInitialState);
}

TEST(Operators, RejectBadParameters) {
    EXPECT_THROW(validate(sign_spec(-1.0, 1.0)), InvalidArgument);
    EXPECT_THROW(validate(sign_spec(1.0, -1.0)), InvalidArgument);
    EXPECT_THROW(validate(stop_spec(0.0, 1.0)), InvalidArgument);
    EXPECT_THROW(validate(stop_spec(1.0, 0.0)), InvalidArgument);
    auto s = initial_state(sign_spec(1.0, 1.0), 0.0);
    EXPECT_THROW(update(s, std::numeric_limits<double>::quiet_NaN()), NonFiniteInput);
    EXPECT_THROW(initial_state(sign_spec(1.0, 1.0), std::numeric_limits<double>::infinity()), NonFiniteInput);
}

TEST(Operators, RateIndependentUnderResampling) {
    // the operators see only the input sequence, so any monotone re-timing
    // that keeps the samples gives the same outputs; here also check that
    // splitting a monotone step into dyadic halves lands on the same value
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ys = dyadic_walk(rng, 200);
        std::vector<double> fine;
        double prev = 0.0;
        for (double y : ys) {
            fine.push_back(prev + 0.5 * (y - prev));
            fine.push_back(y);
            prev = y;
        }
        for (const auto& f : {sign_spec(1.0, 0.5), stop_spec(4.0, 0.75)}) {
            const auto coarse_out = outputs(initial_state(f, 0.0), ys);
            const auto fine_out = outputs(initial_state(f, 0.0), fine);
            for (std::size_t k = 0; k < ys.size(); ++k) EXPECT_EQ(coarse_out[k], fine_out[2 * k + 1]);
        }
    }
}

TEST(Operators, ClockwiseOnReversalCycles) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double lo = -0.2 - 2.0 * u(rng);
        const double hi = 0.2 + 2.0 * u(rng);
        std::vector<double> cyc;
        for (int k = 0; k <= 40; ++k) cyc.push_back(lo + (hi - lo) * k / 40.0);
        for (int k = 39; k >= 0; --k) cyc.push_back(lo + (hi - lo) * k / 40.0);
        for (const auto& f : {sign_spec(u(rng), 0.1 + u(rng)), stop_spec(0.5 + 3.0 * u(rng), 0.1 + u(rng))}) {
            auto s = initial_state(f, 0.0);
            s = update(s, lo).state;
            EXPECT_TRUE(is_clockwise(trace(s, cyc)));
        }
    }
}

TEST(IsClockwise, DetectsCounterClockwiseAndMissingOverlap) {
    // forward branch below the backward branch
    const std::vector<PathPoint> ccw{{0.0, -1.0}, {1.0, 0.0}, {1.0, 2.0}, {0.0, 1.0}};
    EXPECT_FALSE(is_clockwise(ccw));
    const std::vector<PathPoint> cw{{0.0, 1.0}, {1.0, 2.0}, {1.0, 0.0}, {0.0, -1.0}};
    EXPECT_TRUE(is_clockwise(cw));
    const std::vector<PathPoint> monotone{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    EXPECT_THROW(is_clockwise(monotone), NoOverlap);
    const std::vector<PathPoint> still{{1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}};
    EXPECT_THROW(is_clockwise(still), NoOverlap);
}

TEST(IncrementPath, SignJumpAndStopKink) {
    auto s = update(initial_state(sign_spec(1.0, 1.0), 0.0), 1.0).state;  // on the upper branch
    auto u = update(s, 0.0);
    const auto p = increment_path(s, u.state);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_DOUBLE_EQ(p[0].y, 1.0);  // vertical jump at the reversal
    EXPECT_DOUBLE_EQ(p[0].xi, 0.0);
    EXPECT_DOUBLE_EQ(p[1].xi, -1.0);

    auto t = initial_state(stop_spec(1.0, 1.0), 0.0);
    auto v = update(t, 3.0);
    const auto q = increment_path(t, v.state);
    ASSERT_EQ(q.size(), 2u);
    EXPECT_DOUBLE_EQ(q[0].y, 1.0);  // saturation kink
    EXPECT_DOUBLE_EQ(q[0].xi, 1.0);
}

TEST(StaticMap, TabulatedInterpolationAndSector) {
    const auto m = StaticMap::tabulated({{-1.0, -0.5}, {0.0, 0.0}, {1.0, 1.0}, {2.0, 1.5}}, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(m(0.5), 0.5);
    EXPECT_DOUBLE_EQ(m(1.5), 1.25);
    EXPECT_DOUBLE_EQ(m(4.0), 3.0);    // ray through the origin beyond the table
    EXPECT_DOUBLE_EQ(m(-2.0), -1.0);
    // energy against a fine midpoint rule
    double e = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) e += m((k + 0.5) * 1.5 / n) * 1.5 / n;
    EXPECT_NEAR(m.energy(1.5), e, 1e-9);
    EXPECT_THROW(StaticMap::tabulated({{-1.0, -2.0}, {0.0, 0.0}, {1.0, 1.0}}, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(StaticMap::tabulated({{-1.0, -1.0}, {1.0, 1.0}}, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(StaticMap::tabulated({{0.0, 0.0}, {1.0, 1.0}}, 0.0, 1.0), InvalidArgument);
}
