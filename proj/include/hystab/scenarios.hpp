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
#pragma once

/**
 * @file scenarios.hpp
 * @brief Ready-to-run example loops: a double integrator, a damped
 * second-order plant and a two-mass oscillator with a destabilizing
 * spring, each closed by hysteresis feedback.
 */

#include <optional>
#include <string>
#include <string_view>

#include "hystab/errors.hpp"
#include "hystab/hysteresis.hpp"
#include "hystab/lti.hpp"
#include "hystab/simulate.hpp"

namespace hystab {

enum class PresetId { double_integrator, second_order, oscillator };

inline const char* to_string(PresetId p) {
    switch (p) {
        case PresetId::double_integrator: return "double_integrator";
        case PresetId::second_order: return "second_order";
        case PresetId::oscillator: return "oscillator";
    }
    return "?";
}

inline PresetId parse_preset(std::string_view s) {
    if (s == "double_integrator") return PresetId::double_integrator;
    if (s == "second_order") return PresetId::second_order;
    if (s == "oscillator") return PresetId::oscillator;
    throw ConfigError("unknown preset '" + std::string(s) + "'");
}

/// Oscillator feedback: relay, stop element, or none (open loop).
enum class OscillatorFeedback { sign, stop, none };

inline const char* to_string(OscillatorFeedback f) {
    switch (f) {
        case OscillatorFeedback::sign: return "sign";
        case OscillatorFeedback::stop: return "stop";
        case OscillatorFeedback::none: return "none";
    }
    return "?";
}

inline OscillatorFeedback parse_oscillator_feedback(std::string_view s) {
    if (s == "sign") return OscillatorFeedback::sign;
    if (s == "stop") return OscillatorFeedback::stop;
    if (s == "none" || s == "static") return OscillatorFeedback::none;
    throw ConfigError("unknown feedback kind '" + std::string(s) + "'");
}

/// Sign of the (4,4) damping entry: +damping as printed, or -damping.
enum class DampingSign { as_printed, dissipative };

/// Orientation of the hysteresis input vector: (0,0,-1,1) as printed, or
/// (0,0,1,-1) so that the operator opposes the relative velocity.
enum class CouplingSign { as_printed, dissipative };

inline const char* to_string(DampingSign d) { return d == DampingSign::as_printed ? "as_printed" : "dissipative"; }
inline const char* to_string(CouplingSign c) { return c == CouplingSign::as_printed ? "as_printed" : "dissipative"; }

inline DampingSign parse_damping_sign(std::string_view s) {
    if (s == "as_printed") return DampingSign::as_printed;
    if (s == "dissipative") return DampingSign::dissipative;
    throw ConfigError("damping_sign must be as_printed or dissipative");
}

inline CouplingSign parse_coupling_sign(std::string_view s) {
    if (s == "as_printed") return CouplingSign::as_printed;
    if (s == "dissipative") return CouplingSign::dissipative;
    throw ConfigError("coupling_sign must be as_printed or dissipative");
}

inline constexpr double kFirstExampleDt = 1e-3;
inline constexpr double kFirstExampleTEnd = 50.0;
inline constexpr double kOscillatorDt = 1e-4;
inline constexpr double kOscillatorTEnd = 100.0;
/// Stop element slope; saturates after 2h/c = 0.1 of relative travel at h = 50.
inline constexpr double kOscillatorStopSlope = 1000.0;

/// x1 in [-1.02, 1.02], |x2| < 1e-3
inline InvariantSet double_integrator_target() { return {-1.02, 1.02, 1e-3}; }

/// x1 in [-h/gamma, h/gamma], |x2| < 1e-3
inline InvariantSet second_order_target(double gamma, double h) {
    const double w = gamma > 0.0 ? h / gamma : h;
    return {-w, w, 1e-3};
}

/// xdot = [[0,1],[0,0]] x + (0,1) u, y = x1, xi = gamma y + h sign(ydot).
inline Scenario build_double_integrator(double gamma = 1.0, double h = 1.0) {
    Matrix A(2, 2);
    A << 0.0, 1.0, 0.0, 0.0;
    Vector B(2), C(2), x0(2);
    B << 0.0, 1.0;
    C << 1.0, 0.0;
    x0 << 2.0, 0.0;
    Scenario sc;
    sc.id = "double_integrator";
    sc.sys = StateSpace(A, B, C);
    sc.feedback = FeedbackSpec{OperatorKind::sign, gamma, h, 1.0, std::nullopt, {}};
    sc.x0 = x0;
    sc.dt = kFirstExampleDt;
    sc.t_end = kFirstExampleTEnd;
    sc.cycle_state = 0;
    sc.target_set = double_integrator_target();
    sc.validate();
    return sc;
}

/// xdot = [[0,1],[-1,-1]] x + (0,1) u, y = x2.
inline Scenario build_second_order(double gamma = 1.0, double h = 1.0) {
    Matrix A(2, 2);
    A << 0.0, 1.0, -1.0, -1.0;
    Vector B(2), C(2), x0(2);
    B << 0.0, 1.0;
    C << 0.0, 1.0;
    x0 << 2.0, 0.0;
    Scenario sc;
    sc.id = "second_order";
    sc.sys = StateSpace(A, B, C);
    sc.feedback = FeedbackSpec{OperatorKind::sign, gamma, h, 1.0, std::nullopt, {}};
    sc.x0 = x0;
    sc.dt = kFirstExampleDt;
    sc.t_end = kFirstExampleTEnd;
    sc.cycle_state = 0;
    sc.target_set = second_order_target(gamma, h);
    sc.validate();
    return sc;
}

struct OscillatorParams {
    double K = 101.0;
    double g = 100.0;
    double h = 50.0;
    OscillatorFeedback feedback = OscillatorFeedback::sign;
    double damping = 0.01;
    DampingSign damping_sign = DampingSign::dissipative;
    CouplingSign coupling_sign = CouplingSign::dissipative;
    double c = kOscillatorStopSlope;
};

/// Plant matrix of the two-mass oscillator with unit masses.
inline Matrix oscillator_matrix(double K, double g, double damping, DampingSign sign = DampingSign::dissipative) {
    Matrix A = Matrix::Zero(4, 4);
    A(0, 2) = 1.0;
    A(1, 3) = 1.0;
    A(2, 0) = -g;
    A(2, 1) = g - K;
    A(3, 0) = g;
    A(3, 1) = -g;
    A(3, 3) = sign == DampingSign::as_printed ? damping : -damping;
    return A;
}

/**
 * Two unit masses joined by a spring g, mass 2 tied to ground by a negative
 * spring g - K, and hysteresis acting on the relative displacement x1 - x2.
 */
inline Scenario build_oscillator(const OscillatorParams& p) {
    if (!(p.K > 0.0) || !std::isfinite(p.K)) throw InvalidModel("K must be positive");
    if (!std::isfinite(p.g) || !std::isfinite(p.damping)) throw InvalidModel("oscillator constants must be finite");
    Vector B(4), C(4), x0(4);
    if (p.coupling_sign == CouplingSign::as_printed)
        B << 0.0, 0.0, -1.0, 1.0;
    else
        B << 0.0, 0.0, 1.0, -1.0;
    C << 1.0, -1.0, 0.0, 0.0;
    x0 << 1.0, 0.0, 0.0, 0.0;
    Scenario sc;
    sc.id = "oscillator";
    sc.sys = StateSpace(oscillator_matrix(p.K, p.g, p.damping, p.damping_sign), B, C);
    switch (p.feedback) {
        case OscillatorFeedback::sign:
            // the linear stiffness already sits in A
            sc.feedback = FeedbackSpec{OperatorKind::sign, 0.0, p.h, 1.0, std::nullopt, {}};
            break;
        case OscillatorFeedback::stop:
            sc.feedback = FeedbackSpec{OperatorKind::stop, 0.0, p.h, p.c, std::nullopt, {}};
            break;
        case OscillatorFeedback::none:
            sc.feedback = FeedbackSpec{OperatorKind::static_map, 0.0, 0.0, 1.0, std::nullopt, {}};
            break;
    }
    sc.x0 = x0;
    sc.dt = kOscillatorDt;
    sc.t_end = kOscillatorTEnd;
    sc.cycle_state = 1;
    sc.blowup_bound = 1e6;
    sc.validate();
    return sc;
}

inline Scenario build_oscillator(double K, double g = 100.0, double h = 50.0,
                                 OscillatorFeedback feedback = OscillatorFeedback::sign, double damping = 0.01) {
    OscillatorParams p;
    p.K = K;
    p.g = g;
    p.h = h;
    p.feedback = feedback;
    p.damping = damping;
    return build_oscillator(p);
}

/// Overridable preset parameters; unset fields keep the preset defaults.
struct PresetParams {
    std::optional<double> gamma;
    std::optional<double> h;
    std::optional<double> K;
    std::optional<double> g;
    std::optional<double> c;
    std::optional<double> damping;
    std::optional<OscillatorFeedback> feedback;
    std::optional<DampingSign> damping_sign;
    std::optional<CouplingSign> coupling_sign;
    std::optional<Vector> x0;
    std::optional<double> xi0;
};

inline Scenario build_preset(PresetId id, const PresetParams& p = {}) {
    Scenario sc;
    switch (id) {
        case PresetId::double_integrator:
            sc = build_double_integrator(p.gamma.value_or(1.0), p.h.value_or(1.0));
            break;
        case PresetId::second_order:
            sc = build_second_order(p.gamma.value_or(1.0), p.h.value_or(1.0));
            break;
        case PresetId::oscillator: {
            OscillatorParams o;
            o.K = p.K.value_or(o.K);
            o.g = p.g.value_or(o.g);
            o.h = p.h.value_or(o.h);
            o.c = p.c.value_or(o.c);
            o.damping = p.damping.value_or(o.damping);
            o.feedback = p.feedback.value_or(o.feedback);
            o.damping_sign = p.damping_sign.value_or(o.damping_sign);
            o.coupling_sign = p.coupling_sign.value_or(o.coupling_sign);
            sc = build_oscillator(o);
            if (p.gamma && sc.feedback.kind != OperatorKind::stop) sc.feedback.gamma = *p.gamma;
            break;
        }
    }
    if (p.x0) sc.x0 = *p.x0;
    if (p.xi0) sc.feedback.xi0 = *p.xi0;
    sc.validate();
    return sc;
}

}  // namespace hystab
