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
 * @file simulate.hpp
 * @brief Fixed-step integration of the closed loop
 *
 *     xdot = A x + B u,  y = C' x,  u = -xi[y]
 *
 * The feedback is split into its memoryless part g(y), evaluated at every
 * integrator stage, and its hysteretic part (h*direction for the sign
 * operator, z for the stop element), which is decided once per step from
 * the operator state after feeding it y_k and then held across the step.
 * The branch decision therefore lags the input by one step.
 *
 * For the sign operator the lag makes the loop chatter whenever the motion
 * should stop inside the hysteresis band. With stick resolution enabled the
 * stepper computes the hysteretic force that keeps ydot at zero (directly
 * for relative degree one, after one step for relative degree two) and uses
 * it whenever it fits in [-h, h].
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hystab/energy.hpp"
#include "hystab/errors.hpp"
#include "hystab/hysteresis.hpp"
#include "hystab/lti.hpp"

namespace hystab {

enum class Solver { rk4_fixed, euler_fixed };

inline const char* to_string(Solver s) { return s == Solver::rk4_fixed ? "rk4_fixed" : "euler_fixed"; }

/// {x1 in [lo, hi], x2 = 0}
struct InvariantSet {
    double lo = -1.0;
    double hi = 1.0;
    double tol = 1e-3;

    friend bool operator==(const InvariantSet&, const InvariantSet&) = default;
};

struct Scenario {
    std::string id = "custom";
    StateSpace sys;
    FeedbackSpec feedback;
    Vector x0;
    double t_end = 10.0;
    double dt = 1e-3;
    Solver solver = Solver::rk4_fixed;
    double blowup_bound = 1e9;
    double deadband = 1e-12;
    bool stick_resolution = true;
    double tail_fraction = 0.25;
    double cycle_floor = 1e-6;
    int cycle_state = 1;
    std::optional<InvariantSet> target_set;
    std::uint64_t seed = 0;

    void validate() const {
        sys.validate();
        hystab::validate(feedback);
        if (x0.size() != sys.order()) throw InvalidModel("x0 dimension does not match the system order");
        if (!x0.allFinite()) throw InvalidModel("x0 must be finite");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
        if (!(t_end >= dt) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be at least dt");
        if (!(blowup_bound > 0.0)) throw InvalidArgument("blow-up bound must be positive");
        if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InvalidArgument("tail fraction must be in (0, 1]");
        if (cycle_state < 0 || cycle_state >= sys.order()) throw InvalidModel("cycle state index out of range");
    }

    [[nodiscard]] std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
};

struct Trajectory {
    Eigen::Index n = 0;
    std::vector<double> t;
    std::vector<double> x;  // row-major, n values per sample
    std::vector<double> y;
    std::vector<double> xi;
    std::vector<double> u;
    std::vector<double> V;           // recoverable operator storage
    std::vector<double> dissipated;  // running operator loss
    EnergyLedger ledger;
    std::vector<double> reversal_times;
    bool blew_up = false;

    [[nodiscard]] std::size_t size() const { return t.size(); }
    [[nodiscard]] double state(std::size_t k, Eigen::Index i) const {
        return x[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    }
    [[nodiscard]] Vector state(std::size_t k) const {
        return Eigen::Map<const Vector>(x.data() + k * static_cast<std::size_t>(n), n);
    }
    [[nodiscard]] double state_norm_inf(std::size_t k) const {
        double m = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, std::abs(state(k, i)));
        return m;
    }
};

struct LimitCycle {
    double period = 0.0;
    double amplitude = 0.0;
    std::vector<double> amplitudes;  // half peak-to-peak per state over the tail
};

struct CycleDiagnostics {
    bool bounded = true;
    std::optional<LimitCycle> limit_cycle;
    std::optional<bool> set_verdict;
    double growth_rate = 0.0;  // 1/s, exponential fit of the ||x|| envelope
    double max_norm = 0.0;
};

/// One integration sample: x_k and the feedback applied over [t_k, t_k + dt).
struct StepSample {
    double t;
    Vector x;
    double y;
    double xi;
    double u;
};

struct StepResult {
    Vector x_next;
    OperatorState op;
    StepSample sample;
    bool stuck = false;
};

namespace detail {

inline double memoryless_part(const Operator& op, double y) {
    return std::visit(
        [y](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>)
                return o.gamma * y;
            else if constexpr (std::is_same_v<T, StopElement>)
                return 0.0;
            else
                return o(y);
        },
        op);
}

inline double hysteretic_part(const Operator& op) {
    return std::visit(
        [](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>)
                return o.h * o.direction;
            else if constexpr (std::is_same_v<T, StopElement>)
                return o.z;
            else
                return 0.0;
        },
        op);
}

}  // namespace detail

/// Precomputed loop data for repeated steps of one scenario.
class Stepper {
public:
    explicit Stepper(const Scenario& sc) : sc_(sc), rel_degree_(hystab::relative_degree(sc.sys)) {
        CA_ = sc.sys.A.transpose() * sc.sys.C;
        CAA_ = sc.sys.A.transpose() * CA_;
        CB_ = sc.sys.C.dot(sc.sys.B);
        CAB_ = CA_.dot(sc.sys.B);
    }

    [[nodiscard]] int relative_degree() const { return rel_degree_; }

    /// Feeds y_k to the operator and decides the hysteretic force for the step.
    struct Decision {
        OperatorState op;
        double eta;
        bool stuck;
    };

    [[nodiscard]] Decision decide(const Vector& x, const OperatorState& op) const {
        const double y = sc_.sys.C.dot(x);
        auto upd = update(op, y, sc_.deadband);
        double eta = detail::hysteretic_part(upd.state.op);
        bool stuck = false;
        if (sc_.stick_resolution) {
            if (const auto* s = std::get_if<SignHysteresis>(&upd.state.op); s && s->h > 0.0) {
                const double g = s->gamma * y;
                std::optional<double> eq;
                if (rel_degree_ == 1 && CB_ > 0.0)
                    eq = (CA_.dot(x) - CB_ * g) / CB_;
                else if (rel_degree_ == 2 && CAB_ > 0.0)
                    eq = (CA_.dot(x) / sc_.dt + CAA_.dot(x) - CAB_ * g) / CAB_;
                if (eq && std::abs(*eq) <= s->h) {
                    eta = *eq;
                    stuck = true;
                }
            }
        }
        return {std::move(upd.state), eta, stuck};
    }

    [[nodiscard]] Vector advance(const Vector& x, const Operator& op, double eta) const {
        const auto& sys = sc_.sys;
        auto f = [&](const Vector& s) -> Vector {
            const double xi = detail::memoryless_part(op, sys.C.dot(s)) + eta;
            return sys.A * s - sys.B * xi;
        };
        const double h = sc_.dt;
        if (sc_.solver == Solver::euler_fixed) return x + h * f(x);
        const Vector k1 = f(x);
        const Vector k2 = f(x + 0.5 * h * k1);
        const Vector k3 = f(x + 0.5 * h * k2);
        const Vector k4 = f(x + h * k3);
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    [[nodiscard]] StepResult step(const Vector& x, const OperatorState& op, double t) const {
        auto d = decide(x, op);
        const double y = sc_.sys.C.dot(x);
        const double xi = detail::memoryless_part(d.op.op, y) + d.eta;
        StepResult r{advance(x, d.op.op, d.eta), d.op, StepSample{t, x, y, xi, -xi}, d.stuck};
        r.op = std::move(d.op);
        return r;
    }

private:
    const Scenario& sc_;
    int rel_degree_;
    Vector CA_;
    Vector CAA_;
    double CB_ = 0.0;
    double CAB_ = 0.0;
};

/// One fixed step from x_k; see the file comment for how xi is held.
inline StepResult step(const Scenario& sc, const Vector& x, const OperatorState& op, double t = 0.0) {
    return Stepper(sc).step(x, op, t);
}

/// Period and half peak-to-peak amplitude of a sustained oscillation in the
/// tail of a sampled signal; empty when the tail decays or grows.
inline std::optional<LimitCycle> detect_limit_cycle(std::span<const double> t, std::span<const double> s,
                                                    double tail_fraction = 0.25, double floor = 1e-6) {
    const std::size_t n = std::min(t.size(), s.size());
    if (n < 8) return std::nullopt;
    const auto start = n - std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
    double mean = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = start; k < n; ++k) {
        mean += s[k];
        lo = std::min(lo, s[k]);
        hi = std::max(hi, s[k]);
    }
    mean /= static_cast<double>(n - start);
    const double amplitude = 0.5 * (hi - lo);
    if (!std::isfinite(amplitude) || amplitude < floor) return std::nullopt;

    std::vector<double> crossings;
    std::vector<std::size_t> crossing_idx;
    for (std::size_t k = start + 1; k < n; ++k) {
        const double a = s[k - 1] - mean;
        const double b = s[k] - mean;
        if (a < 0.0 && b >= 0.0) {
            crossings.push_back(t[k - 1] + (t[k] - t[k - 1]) * (-a) / (b - a));
            crossing_idx.push_back(k);
        }
    }
    if (crossings.size() < 3) return std::nullopt;

    // the first and last full cycles must have comparable swing
    auto swing = [&](std::size_t from, std::size_t to) {
        double l = std::numeric_limits<double>::infinity();
        double h = -l;
        for (std::size_t k = from; k < to; ++k) {
            l = std::min(l, s[k]);
            h = std::max(h, s[k]);
        }
        return 0.5 * (h - l);
    };
    const double first = swing(crossing_idx[0], crossing_idx[1]);
    const double last = swing(crossing_idx[crossing_idx.size() - 2], crossing_idx.back());
    if (!(last >= 0.5 * first && last <= 2.0 * first)) return std::nullopt;

    LimitCycle lc;
    lc.period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    lc.amplitude = amplitude;
    return lc;
}

inline std::optional<LimitCycle> detect_limit_cycle(const Trajectory& traj, double tail_fraction = 0.25,
                                                    Eigen::Index state_index = 1, double floor = 1e-6) {
    if (traj.size() == 0 || state_index < 0 || state_index >= traj.n) return std::nullopt;
    std::vector<double> s(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) s[k] = traj.state(k, state_index);
    auto lc = detect_limit_cycle(traj.t, s, tail_fraction, floor);
    if (!lc) return lc;
    const std::size_t n = traj.size();
    const auto start = n - std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(tail_fraction * n)));
    lc->amplitudes.assign(static_cast<std::size_t>(traj.n), 0.0);
    for (Eigen::Index i = 0; i < traj.n; ++i) {
        double l = std::numeric_limits<double>::infinity();
        double h = -l;
        for (std::size_t k = start; k < n; ++k) {
            l = std::min(l, traj.state(k, i));
            h = std::max(h, traj.state(k, i));
        }
        lc->amplitudes[static_cast<std::size_t>(i)] = 0.5 * (h - l);
    }
    return lc;
}

/// True when x2 ~ 0 and x1 in [lo, hi] (inflated by tol) over the last 5% of samples.
inline bool converged_to_set(const Trajectory& traj, const InvariantSet& set, double tol) {
    if (traj.size() == 0 || traj.n < 2 || traj.blew_up) return false;
    const std::size_t n = traj.size();
    const std::size_t start = n - std::max<std::size_t>(1, n / 20);
    for (std::size_t k = start; k < n; ++k) {
        const double x1 = traj.state(k, 0);
        const double x2 = traj.state(k, 1);
        if (!(std::abs(x2) < tol) || !(x1 >= set.lo - tol && x1 <= set.hi + tol)) return false;
    }
    return true;
}

inline bool converged_to_set(const Trajectory& traj, const InvariantSet& set) {
    return converged_to_set(traj, set, set.tol);
}

/// Least-squares slope of log max||x|| over 20 windows after the first 10%.
inline double growth_rate(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if (n < 40) return 0.0;
    const std::size_t start = n / 10;
    const std::size_t windows = 20;
    const std::size_t len = (n - start) / windows;
    if (len == 0) return 0.0;
    std::vector<double> tm;
    std::vector<double> lg;
    for (std::size_t w = 0; w < windows; ++w) {
        double m = 0.0;
        const std::size_t a = start + w * len;
        for (std::size_t k = a; k < a + len; ++k) m = std::max(m, traj.state_norm_inf(k));
        tm.push_back(0.5 * (traj.t[a] + traj.t[a + len - 1]));
        lg.push_back(std::log(std::max(m, 1e-300)));
    }
    double mt = 0.0;
    double ml = 0.0;
    for (std::size_t i = 0; i < tm.size(); ++i) {
        mt += tm[i];
        ml += lg[i];
    }
    mt /= static_cast<double>(tm.size());
    ml /= static_cast<double>(tm.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < tm.size(); ++i) {
        num += (tm[i] - mt) * (lg[i] - ml);
        den += (tm[i] - mt) * (tm[i] - mt);
    }
    return den > 0.0 ? num / den : 0.0;
}

struct RunOptions {
    bool keep_ledger_samples = true;
};

struct RunResult {
    Trajectory trajectory;
    CycleDiagnostics diagnostics;
};

inline CycleDiagnostics diagnose(const Scenario& sc, const Trajectory& traj) {
    CycleDiagnostics d;
    d.bounded = !traj.blew_up;
    for (std::size_t k = 0; k < traj.size(); ++k) d.max_norm = std::max(d.max_norm, traj.state_norm_inf(k));
    d.growth_rate = growth_rate(traj);
    if (d.bounded) d.limit_cycle = detect_limit_cycle(traj, sc.tail_fraction, sc.cycle_state, sc.cycle_floor);
    if (sc.target_set) d.set_verdict = converged_to_set(traj, *sc.target_set);
    return d;
}

/**
 * Integrates the scenario to t_end, or until ||x||_inf exceeds the blow-up
 * bound (which ends the run with bounded = false; not an error).
 */
inline RunResult run(const Scenario& sc, const RunOptions& opt = {}) {
    sc.validate();
    const Stepper stepper(sc);
    const auto n = sc.sys.order();
    const std::size_t steps = sc.steps();

    Trajectory tr;
    tr.n = n;
    tr.t.reserve(steps + 1);
    tr.x.reserve((steps + 1) * static_cast<std::size_t>(n));
    tr.y.reserve(steps + 1);
    tr.xi.reserve(steps + 1);
    tr.u.reserve(steps + 1);
    tr.V.reserve(steps + 1);
    tr.dissipated.reserve(steps + 1);

    Vector x = sc.x0;
    OperatorState op = initial_state(sc.feedback, sc.sys.C.dot(x));
    EnergyAccumulator energy(op, 0.0, opt.keep_ledger_samples);
    int last_dir = 0;
    double t_prev = 0.0;

    auto record = [&](const StepSample& s) {
        tr.t.push_back(s.t);
        tr.x.insert(tr.x.end(), s.x.data(), s.x.data() + n);
        tr.y.push_back(s.y);
        tr.xi.push_back(s.xi);
        tr.u.push_back(s.u);
    };
    auto track = [&](const OperatorState& before, const OperatorState& after, double t) {
        if (tr.t.size() > 1) energy.record(t_prev, t, before, after);
        const double dy = after.y_prev - before.y_prev;
        if (std::abs(dy) > sc.deadband) {
            const int dir = dy > 0.0 ? 1 : -1;
            if (last_dir != 0 && dir != last_dir) tr.reversal_times.push_back(t_prev);
            last_dir = dir;
        }
        t_prev = t;
    };
    auto book = [&] {
        tr.V.push_back(energy.ledger().stored);
        tr.dissipated.push_back(energy.ledger().dissipated);
    };

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * sc.dt;
        const bool blown = !x.allFinite() || x.cwiseAbs().maxCoeff() > sc.blowup_bound;
        if (k == steps || blown) {
            // final sample: feed the operator once more without integrating
            auto d = stepper.decide(x.allFinite() ? x : Vector::Zero(n), op);
            const double y = sc.sys.C.dot(x);
            const double xi = detail::memoryless_part(d.op.op, y) + d.eta;
            record({t, x, y, xi, -xi});
            if (x.allFinite()) track(op, d.op, t);
            book();
            tr.blew_up = blown;
            break;
        }
        auto r = stepper.step(x, op, t);
        record(r.sample);
        track(op, r.op, t);
        book();
        op = std::move(r.op);
        x = std::move(r.x_next);
    }
    tr.ledger = energy.take();
    RunResult res{std::move(tr), {}};
    res.diagnostics = diagnose(sc, res.trajectory);
    return res;
}

/// Uniform draw on [-half_width, half_width]^n from a seeded generator.
inline Vector random_initial_state(Eigen::Index n, double half_width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-half_width, half_width);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = dist(rng);
    return x;
}

struct BatchEntry {
    std::uint64_t seed;
    Vector x0;
    RunResult result;
};

/**
 * Runs the scenario once per seed with x0 drawn on the box. Runs are
 * independent and spread over worker threads; results come back ordered by
 * seed regardless of scheduling.
 */
inline std::vector<BatchEntry> run_batch(const Scenario& base, std::span<const std::uint64_t> seeds, double half_width,
                                         const RunOptions& opt = {}, unsigned workers = 0) {
    std::vector<BatchEntry> out(seeds.size());
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            try {
                Scenario sc = base;
                sc.seed = seeds[i];
                sc.x0 = random_initial_state(base.sys.order(), half_width, seeds[i]);
                out[i] = BatchEntry{seeds[i], sc.x0, run(sc, opt)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace hystab
