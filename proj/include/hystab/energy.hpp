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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hystab/errors.hpp"
#include "hystab/hysteresis.hpp"

namespace hystab {

/// Power flowing into the operator.
inline double supply_rate(double y_dot, double xi) { return y_dot * xi; }

/// Trapezoidal line integral of xi dy along the path, with E(0) = 0.
/// Branch jumps must appear as separate points with equal y.
inline double path_energy(std::span<const PathPoint> path) {
    double e = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i)
        e += 0.5 * (path[i].xi + path[i - 1].xi) * (path[i].y - path[i - 1].y);
    return e;
}

/// Cyclic integral of xi dy; positive for clockwise loops.
inline double loop_area(std::span<const PathPoint> cycle, double tol = 1e-9) {
    if (cycle.size() < 2) throw OpenPath("cycle needs at least two points");
    double scale = 0.0;
    for (const auto& p : cycle) scale = std::max(scale, std::abs(p.y));
    if (std::abs(cycle.back().y - cycle.front().y) > tol * (1.0 + scale))
        throw OpenPath("cycle does not return to its starting input");
    return path_energy(cycle);
}

/// 1/2 gamma y^2 minus the energy dissipated so far.
inline double storage_value(double gamma, double y, double dissipated_so_far) {
    if (!(dissipated_so_far >= 0.0)) throw InvalidArgument("dissipated energy must be non-negative");
    return 0.5 * gamma * y * y - dissipated_so_far;
}

struct LedgerSample {
    double t;
    double y;
    double xi;
    double w;           // supply rate over the increment ending here
    double V;           // recoverable storage
    double supplied;    // running path integral of xi dy
    double dissipated;  // running loss from the operator law
};

struct EnergyLedger {
    double supplied = 0.0;
    double stored = 0.0;
    double stored_initial = 0.0;
    double dissipated = 0.0;
    std::vector<LedgerSample> samples;

    [[nodiscard]] double scale() const { return 1.0 + std::abs(supplied) + std::abs(stored) + std::abs(dissipated); }
    /// supplied - dV - dissipated; zero up to rounding for a consistent ledger.
    [[nodiscard]] double residual() const { return supplied - (stored - stored_initial) - dissipated; }
};

namespace detail {

inline double storage_at(const Operator& op, const PathPoint& p) {
    return std::visit(
        [&](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>)
                return 0.5 * o.gamma * p.y * p.y;
            else if constexpr (std::is_same_v<T, StopElement>)
                return 0.5 * p.xi * p.xi / o.c;
            else
                return o.energy(p.y);
        },
        op);
}

}  // namespace detail

/**
 * Builds an EnergyLedger from successive operator updates. Each increment is
 * expanded into its exact branch-resolved breakpoints, so the supplied energy
 * is a trapezoid sum that never straddles a branch jump.
 */
class EnergyAccumulator {
public:
    EnergyAccumulator(const OperatorState& initial, double t0, bool keep_samples = true)
        : keep_samples_(keep_samples) {
        ledger_.stored_initial = ledger_.stored = stored_energy(initial);
        last_ = {initial.y_prev, initial.xi_prev};
        if (keep_samples_)
            ledger_.samples.push_back({t0, last_.y, last_.xi, 0.0, ledger_.stored, 0.0, 0.0});
    }

    void record(double t_prev, double t, const OperatorState& before, const OperatorState& after) {
        const double y0 = before.y_prev;
        const double y1 = after.y_prev;
        const double dt = t - t_prev;
        const double rate = dt > 0.0 ? (y1 - y0) / dt : 0.0;
        const auto pts = increment_path(before, after);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& p = pts[i];
            ledger_.supplied += 0.5 * (p.xi + last_.xi) * (p.y - last_.y);
            const bool final_point = i + 1 == pts.size();
            if (final_point) ledger_.dissipated += dissipated_energy(before, after);
            const double v = detail::storage_at(after.op, p);
            if (keep_samples_) {
                const double ts = final_point ? t
                                  : (y1 != y0) ? t_prev + dt * (p.y - y0) / (y1 - y0)
                                               : t_prev;
                ledger_.samples.push_back({ts, p.y, p.xi, supply_rate(rate, p.xi), v, ledger_.supplied,
                                           ledger_.dissipated});
            }
            last_ = p;
        }
        ledger_.stored = stored_energy(after);
    }

    [[nodiscard]] const EnergyLedger& ledger() const { return ledger_; }
    EnergyLedger take() { return std::move(ledger_); }

private:
    EnergyLedger ledger_;
    PathPoint last_{};
    bool keep_samples_;
};

/// Runs an input sequence through the operator and returns its ledger.
/// Time stamps are the sample indices unless given.
inline EnergyLedger ledger_for_inputs(OperatorState s, std::span<const double> inputs,
                                      std::span<const double> times = {}, double deadband = 0.0) {
    if (!times.empty() && times.size() != inputs.size() + 1)
        throw InvalidArgument("times must have one entry more than inputs");
    auto time_at = [&](std::size_t k) { return times.empty() ? static_cast<double>(k) : times[k]; };
    EnergyAccumulator acc(s, time_at(0));
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        auto u = update(s, inputs[k], deadband);
        acc.record(time_at(k), time_at(k + 1), s, u.state);
        s = std::move(u.state);
    }
    return acc.take();
}

struct DissipationReport {
    /// max over t1 < t2 of [V(t2) - V(t1)] - integral of w; <= 0 when dissipative
    double max_inequality_violation = 0.0;
    /// max |supplied - dV - dissipated| with supplied recomputed from the path
    double identity_residual = 0.0;
    /// smallest supplied - dV seen at any sample
    double min_dissipated = 0.0;
    /// max |d(V - supplied) + h|dy|| per increment; only for sign hysteresis
    std::optional<double> vdot_max_error;
    double scale = 1.0;
    bool dissipative = true;
};

/**
 * Audits a ledger (or any sampled (t, y, xi, V) record with its dissipated
 * column). The supplied energy is recomputed from the path, independent of
 * the ledger's own running sums. With sign_h set, also checks that
 * V - integral(xi dy) decreases at rate h|ydot|.
 */
inline DissipationReport verify_dissipation(std::span<const LedgerSample> samples,
                                            std::optional<double> sign_h = std::nullopt, double rel_tol = 1e-8) {
    DissipationReport r;
    if (samples.empty()) return r;
    const double v0 = samples.front().V;
    double supplied = 0.0;
    double scale = 0.0;
    double run_min = samples.front().V;  // min over earlier samples of V - supplied
    r.min_dissipated = 0.0;
    r.max_inequality_violation = -std::numeric_limits<double>::infinity();
    if (sign_h) r.vdot_max_error = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const auto& a = samples[k - 1];
        const auto& b = samples[k];
        const double dy = b.y - a.y;
        const double dS = 0.5 * (a.xi + b.xi) * dy;
        supplied += dS;
        const double slack = b.V - supplied;
        r.max_inequality_violation = std::max(r.max_inequality_violation, slack - run_min);
        run_min = std::min(run_min, slack);

        const double d_here = supplied - (b.V - v0);
        r.min_dissipated = std::min(r.min_dissipated, d_here);
        r.identity_residual = std::max(r.identity_residual, std::abs(d_here - b.dissipated));
        if (sign_h) {
            const double dL = (b.V - a.V) - dS;
            r.vdot_max_error = std::max(*r.vdot_max_error, std::abs(dL + *sign_h * std::abs(dy)));
        }
        scale = std::max({scale, std::abs(supplied), std::abs(b.V), std::abs(b.dissipated)});
    }
    if (samples.size() == 1) r.max_inequality_violation = 0.0;
    r.scale = 1.0 + scale;
    const double tol = rel_tol * r.scale;
    r.dissipative = r.max_inequality_violation <= tol && r.min_dissipated >= -tol && r.identity_residual <= tol;
    return r;
}

inline DissipationReport verify_dissipation(const EnergyLedger& ledger, std::optional<double> sign_h = std::nullopt,
                                            double rel_tol = 1e-8) {
    return verify_dissipation(std::span<const LedgerSample>(ledger.samples), sign_h, rel_tol);
}

}  // namespace hystab
