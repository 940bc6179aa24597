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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "hystab/hystab.hpp"

using namespace hystab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

// 1: equilibrium set of the second-order loop
Outcome equilibrium_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = build_second_order();
    const auto eq = equilibrium(sc.sys, sc.feedback);
    Outcome o;
    bool minus = false;
    bool plus = false;
    double worst = 0.0;
    for (const auto& p : eq.x0_points) {
        worst = std::max(worst, p.residual);
        if (std::abs(p.x0(0) + 1.0) < 1e-12 && std::abs(p.x0(1)) < 1e-12) minus = true;
        if (std::abs(p.x0(0) - 1.0) < 1e-12 && std::abs(p.x0(1)) < 1e-12) plus = true;
    }
    const bool interval = eq.invariant_interval && std::abs(eq.invariant_interval->lo + 1.0) < 1e-12 &&
                          std::abs(eq.invariant_interval->hi - 1.0) < 1e-12;
    const double rt = seconds_since(t0);
    o.pass = minus && plus && interval && worst < 1e-10 && rt < 1.0;
    o.detail = "points (-1,0) " + std::string(minus ? "yes" : "no") + ", (1,0) " + (plus ? "yes" : "no") +
               ", interval " + (interval ? "[-1,1]" : "missing") + ", residual " + fmt(worst) + ", " + fmt(rt) +
               " s";
    return o;
}

// 2: random initial states end in the invariant set
Outcome invariant_set_attraction() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::uint64_t> seeds(100);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
    RunOptions ro;
    ro.keep_ledger_samples = false;

    auto count = [&](const Scenario& sc, double x1_lo, double x1_hi, double& worst_x2) {
        const auto batch = run_batch(sc, seeds, 3.0, ro);
        int ok = 0;
        worst_x2 = 0.0;
        for (const auto& e : batch) {
            const auto& tr = e.result.trajectory;
            const auto k = tr.size() - 1;
            const double x1 = tr.state(k, 0);
            const double x2 = tr.state(k, 1);
            worst_x2 = std::max(worst_x2, std::abs(x2));
            if (!tr.blew_up && std::abs(x2) < 1e-3 && x1 >= x1_lo && x1 <= x1_hi) ++ok;
        }
        return ok;
    };
    double w1 = 0.0;
    double w2 = 0.0;
    const int di = count(build_double_integrator(), -1.02, 1.02, w1);
    const int so = count(build_second_order(), -1.0 - 1e-3, 1.0 + 1e-3, w2);
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = di == 100 && so == 100 && rt < 60.0;
    o.detail = "double_integrator " + std::to_string(di) + "/100 (max |x2| " + fmt(w1) + "), second_order " +
               std::to_string(so) + "/100 (max |x2| " + fmt(w2) + "), " + fmt(rt) + " s";
    return o;
}

// 3: pole crossing of the oscillator at K = g
Outcome marginal_crossing() {
    const auto t0 = std::chrono::steady_clock::now();
    auto maxre = [](double K) { return poles(build_oscillator(K, 100.0, 50.0, OscillatorFeedback::none).sys).max_real_part(); };
    const double a = maxre(99.0);
    const double b = maxre(100.0);
    const double c = maxre(101.0);
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = a < 0.0 && std::abs(b) < 1e-2 && c > 0.0 && rt < 1.0;
    o.detail = "max Re: K=99 " + fmt(a) + ", K=100 " + fmt(b) + ", K=101 " + fmt(c) + ", " + fmt(rt) + " s";
    return o;
}

// 4: divergence without feedback, limit cycles with hysteresis
Outcome stabilization_by_hysteresis() {
    const auto t0 = std::chrono::steady_clock::now();
    RunOptions ro;
    ro.keep_ledger_samples = false;

    auto open = build_oscillator(101.0, 100.0, 50.0, OscillatorFeedback::none);
    open.blowup_bound = 1e6;
    const auto r0 = run(open, ro);
    const bool diverged = r0.trajectory.blew_up && r0.trajectory.t.back() < 100.0;

    const auto rs = run(build_oscillator(101.0, 100.0, 50.0, OscillatorFeedback::sign), ro);
    const auto rp = run(build_oscillator(101.0, 100.0, 50.0, OscillatorFeedback::stop), ro);
    auto ok = [](const RunResult& r) { return r.diagnostics.bounded && r.diagnostics.limit_cycle.has_value(); };
    auto desc = [](const RunResult& r) {
        if (!r.diagnostics.limit_cycle) return std::string("no cycle");
        return "T=" + fmt(r.diagnostics.limit_cycle->period) + " A=" + fmt(r.diagnostics.limit_cycle->amplitude);
    };
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = diverged && ok(rs) && ok(rp) && rt < 120.0;
    o.detail = "open loop " + std::string(diverged ? "diverges at t=" + fmt(r0.trajectory.t.back()) : "stays bounded") +
               ", sign " + desc(rs) + ", stop " + desc(rp) + ", " + fmt(rt) + " s";
    return o;
}

std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double scale) {
    std::normal_distribution<double> step(0.0, scale);
    std::bernoulli_distribution hold(0.1);
    std::vector<double> y(n);
    double v = 0.0;
    for (auto& e : y) {
        if (!hold(rng)) v += step(rng);
        e = v;
    }
    return y;
}

// 5: energy balance over random paths and the loss of sinusoidal cycles
Outcome dissipativity_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260501);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t failures = 0;
    double worst_rel = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const bool sign = trial % 2 == 0;
        FeedbackSpec f;
        f.kind = sign ? OperatorKind::sign : OperatorKind::stop;
        f.gamma = sign ? 2.0 * unif(rng) : 0.0;
        f.h = 0.1 + 2.0 * unif(rng);
        f.c = 0.5 + 5.0 * unif(rng);
        const auto inputs = random_walk(rng, 400, 0.05 + unif(rng));
        const auto led = ledger_for_inputs(initial_state(f, 0.0), inputs);
        const auto rep = verify_dissipation(led, sign ? std::optional<double>(f.h) : std::nullopt);
        const double rel = std::abs(led.residual()) / led.scale();
        worst_rel = std::max(worst_rel, std::max(rel, rep.identity_residual / rep.scale));
        if (rel > 1e-8 || !rep.dissipative || led.dissipated < 0.0) ++failures;
    }

    // sinusoid through the sign operator: loss per period 4 h A
    double worst_cycle = 0.0;
    for (const double amp : {0.5, 1.0, 3.0}) {
        FeedbackSpec f{OperatorKind::sign, 1.0, 0.7, 1.0, std::nullopt, {}};
        const int per = 1000;
        const int periods = 5;
        std::vector<double> y;
        for (int k = 1; k <= per * periods; ++k) y.push_back(amp * std::sin(2.0 * std::numbers::pi * k / per));
        const auto led = ledger_for_inputs(initial_state(f, 0.0), y);
        // skip the first period (starts on the midline)
        double d1 = 0.0;
        for (const auto& s : led.samples)
            if (s.t <= per) d1 = s.dissipated;
        const double per_period = (led.dissipated - d1) / (periods - 1);
        worst_cycle = std::max(worst_cycle, std::abs(per_period - 4.0 * f.h * amp) / (4.0 * f.h * amp));
    }
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = failures == 0 && worst_cycle < 0.01 && rt < 30.0;
    o.detail = "1000 paths, " + std::to_string(failures) + " failures, worst relative residual " + fmt(worst_rel) +
               ", sinusoid loss error " + fmt(100.0 * worst_cycle) + "%, " + fmt(rt) + " s";
    return o;
}

// 6: rate independence and clockwise cycles
Outcome rate_independence_and_orientation() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t mismatch = 0;
    std::size_t not_clockwise = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const bool sign = trial % 2 == 0;
        FeedbackSpec f;
        f.kind = sign ? OperatorKind::sign : OperatorKind::stop;
        f.gamma = sign ? 1.0 + unif(rng) : 0.0;
        f.h = 0.25 + unif(rng);
        f.c = 1.0 + 4.0 * unif(rng);

        // input v(s) sampled at s_k = k/64, and at tau_k with s = a + b tau (dyadic a, b)
        const int n = 256;
        const double a = std::ldexp(static_cast<double>(rng() % 64), -4);
        const double b = std::ldexp(1.0, static_cast<int>(rng() % 5) - 2);
        const double w1 = 1.0 + 3.0 * unif(rng);
        const double w2 = 5.0 * unif(rng);
        auto v = [&](double s) { return std::sin(w1 * s) + 0.3 * std::sin(w2 * s); };
        std::vector<double> y1(n), y2(n), t1(n + 1), t2(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double s = a + std::ldexp(static_cast<double>(k), -6);
            t1[static_cast<std::size_t>(k)] = s;
            t2[static_cast<std::size_t>(k)] = (s - a) / b;
        }
        for (int k = 0; k < n; ++k) {
            y1[static_cast<std::size_t>(k)] = v(t1[static_cast<std::size_t>(k) + 1]);
            y2[static_cast<std::size_t>(k)] = v(a + b * t2[static_cast<std::size_t>(k) + 1]);
        }
        const auto s0 = initial_state(f, v(a));
        const auto p1 = trace(s0, y1);
        const auto p2 = trace(s0, y2);
        bool same = p1.size() == p2.size();
        for (std::size_t i = 0; same && i < p1.size(); ++i) same = p1[i].y == p2[i].y && p1[i].xi == p2[i].xi;
        const auto l1 = ledger_for_inputs(s0, y1, t1);
        const auto l2 = ledger_for_inputs(s0, y2, t2);
        same = same && l1.supplied == l2.supplied && l1.dissipated == l2.dissipated;
        if (!same) ++mismatch;

        // reversal cycle lo -> hi -> lo after a preconditioning sweep
        const double lo = -0.5 - 2.0 * unif(rng);
        const double hi = 0.5 + 2.0 * unif(rng);
        std::vector<double> pre;
        for (int k = 1; k <= 50; ++k) pre.push_back(lo * k / 50.0);
        auto st = s0;
        st = initial_state(f, 0.0);
        for (double y : pre) st = update(st, y).state;
        std::vector<double> cyc;
        const int m = 20 + static_cast<int>(rng() % 200);
        for (int k = 1; k <= m; ++k) cyc.push_back(lo + (hi - lo) * k / m);
        for (int k = m - 1; k >= 0; --k) cyc.push_back(lo + (hi - lo) * k / m);
        const auto path = trace(st, cyc);
        if (!is_clockwise(path)) ++not_clockwise;
    }
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = mismatch == 0 && not_clockwise == 0 && rt < 10.0;
    o.detail = "500 reparameterized paths, " + std::to_string(mismatch) + " mismatches; " +
               std::to_string(not_clockwise) + " counter-clockwise cycles, " + fmt(rt) + " s";
    return o;
}

// 7: circle-criterion verdicts, stable under grid refinement
Outcome circle_verdicts() {
    const auto t0 = std::chrono::steady_clock::now();
    const OmegaGrid coarse{1e-3, 1e3, 2000, true};
    const OmegaGrid fine{1e-3, 1e3, 8000, true};
    const auto so = build_second_order();
    const auto di = build_double_integrator();
    const auto osc = build_oscillator(101.0);
    bool ok = true;
    std::string d;
    for (const auto& grid : {coarse, fine}) {
        const auto r2 = transformed_loop_check(so.sys, static_sector(so.feedback), so.feedback.h, grid);
        const auto r1 = transformed_loop_check(di.sys, static_sector(di.feedback), di.feedback.h, grid);
        const auto r3 = transformed_loop_check(osc.sys, static_sector(osc.feedback), osc.feedback.h, grid);
        const bool touch = r2.phi_h.status == CriterionStatus::touching && r2.phi_h.witness_omega == 0.0;
        const bool unfulfilled = r1.phi_g.status == CriterionStatus::violated;
        const bool inconclusive = r3.phi_g.status == CriterionStatus::inconclusive_unstable_linear;
        ok = ok && touch && unfulfilled && inconclusive;
        d += std::to_string(grid.points) + " pts: second_order phi_h " + to_string(r2.phi_h.status) + " at w=" +
             fmt(r2.phi_h.witness_omega) + ", double_integrator phi_g " + to_string(r1.phi_g.status) +
             ", oscillator " + to_string(r3.phi_g.status) + "; ";
    }
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = ok && rt < 5.0;
    o.detail = d + fmt(rt) + " s";
    return o;
}

// 8: h = 0 against the matrix exponential of the linear closed loop
Outcome linear_limit() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (auto sc : {build_double_integrator(1.0, 0.0), build_second_order(1.0, 0.0)}) {
        sc.t_end = 10.0;
        sc.x0 = Vector(2);
        sc.x0 << 1.5, -0.7;
        const auto res = run(sc);
        const Matrix Acl = sc.sys.A - sc.feedback.gamma * sc.sys.B * sc.sys.C.transpose();
        const auto& tr = res.trajectory;
        for (std::size_t k = 0; k < tr.size(); k += 10) {
            const Matrix E = (Acl * tr.t[k]).exp();
            const Vector ref = E * sc.x0;
            worst = std::max(worst, (tr.state(k) - ref).cwiseAbs().maxCoeff());
        }
    }
    const double rt = seconds_since(t0);
    Outcome o;
    o.pass = worst < 1e-4;
    o.detail = "max |x - expm(Acl t) x0| = " + fmt(worst) + ", " + fmt(rt) + " s";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"equilibrium reproduction", equilibrium_reproduction},
        {"invariant-set attraction", invariant_set_attraction},
        {"marginal-stability crossing", marginal_crossing},
        {"stabilization by hysteresis", stabilization_by_hysteresis},
        {"dissipativity suite", dissipativity_suite},
        {"rate independence and clockwise cycles", rate_independence_and_orientation},
        {"circle-criterion verdicts", circle_verdicts},
        {"linear-limit oracle", linear_limit},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed;
}
