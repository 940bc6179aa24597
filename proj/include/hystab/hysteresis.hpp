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
 * @file hysteresis.hpp
 * @brief Rate-independent clockwise feedback operators y -> xi.
 *
 * Every operator is advanced by input increments only; no time or rate
 * enters an update, so any monotone reparameterization of time leaves the
 * (y, xi) path unchanged.
 *
 *  - SignHysteresis: xi = gamma*y + h*direction, direction = sign of the
 *    last nonzero increment (held on zero increments).
 *  - StopElement:    z <- clamp(z + c*dy, -h, h), xi = z.
 *  - StaticMap:      memoryless xi = g(y), linear or tabulated.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hystab/errors.hpp"

namespace hystab {

struct PathPoint {
    double y;
    double xi;
};

struct SignHysteresis {
    double gamma = 1.0;
    double h = 1.0;
    int direction = 0;
};

struct StopElement {
    double c = 1.0;
    double h = 1.0;
    double z = 0.0;
};

/**
 * Memoryless g(y). With an empty table g(y) = gamma*y; otherwise g is the
 * piecewise-linear interpolant through the table (which must contain (0, 0))
 * and is extended beyond the end points along the ray through the origin.
 */
struct StaticMap {
    double gamma = 1.0;
    std::vector<PathPoint> table;

    [[nodiscard]] double operator()(double y) const {
        if (table.empty()) return gamma * y;
        if (y <= table.front().y) return table.front().xi / table.front().y * y;
        if (y >= table.back().y) return table.back().xi / table.back().y * y;
        auto hi = std::upper_bound(table.begin(), table.end(), y,
                                   [](double v, const PathPoint& p) { return v < p.y; });
        auto lo = hi - 1;
        const double f = (y - lo->y) / (hi->y - lo->y);
        return lo->xi + f * (hi->xi - lo->xi);
    }

    /// Integral of g from 0 to y; exact for the piecewise-linear shape.
    [[nodiscard]] double energy(double y) const {
        if (table.empty()) return 0.5 * gamma * y * y;
        double e = 0.0;
        double a = 0.0;
        const double dir = y >= 0.0 ? 1.0 : -1.0;
        // walk the breakpoints from 0 toward y
        std::vector<double> knots;
        for (const auto& p : table)
            if (p.y * dir > 0.0 && std::abs(p.y) < std::abs(y)) knots.push_back(p.y);
        if (dir < 0.0) std::reverse(knots.begin(), knots.end());
        knots.push_back(y);
        for (const double b : knots) {
            e += 0.5 * ((*this)(a) + (*this)(b)) * (b - a);
            a = b;
        }
        return e;
    }

    /// Builds a tabulated map and checks it against the sector [alpha, beta].
    static StaticMap tabulated(std::vector<PathPoint> points, double alpha, double beta) {
        if (points.size() < 2) throw InvalidArgument("tabulated map needs at least two points");
        std::sort(points.begin(), points.end(),
                  [](const PathPoint& a, const PathPoint& b) { return a.y < b.y; });
        bool has_origin = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (!std::isfinite(p.y) || !std::isfinite(p.xi))
                throw InvalidArgument("tabulated map entries must be finite");
            if (i > 0 && !(p.y > points[i - 1].y))
                throw InvalidArgument("tabulated map abscissae must be distinct");
            if (p.y == 0.0) {
                if (p.xi != 0.0) throw InvalidArgument("tabulated map must pass through the origin");
                has_origin = true;
            }
            const double s = p.xi * p.y;
            const double y2 = p.y * p.y;
            const double tol = 1e-12 * (1.0 + y2);
            if (s < alpha * y2 - tol || s > beta * y2 + tol)
                throw InvalidArgument("tabulated map leaves the sector [" + std::to_string(alpha) +
                                      ", " + std::to_string(beta) + "]");
        }
        if (!has_origin) throw InvalidArgument("tabulated map must contain the point (0, 0)");
        if (points.front().y >= 0.0 || points.back().y <= 0.0)
            throw InvalidArgument("tabulated map must cover both signs of y");
        StaticMap m;
        m.gamma = 0.0;
        m.table = std::move(points);
        return m;
    }
};

using Operator = std::variant<SignHysteresis, StopElement, StaticMap>;

/// Operator plus the last input it saw and the output it produced.
struct OperatorState {
    Operator op;
    double y_prev = 0.0;
    double xi_prev = 0.0;
};

enum class OperatorKind { sign, stop, static_map };

inline const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::sign: return "sign";
        case OperatorKind::stop: return "stop";
        case OperatorKind::static_map: return "static";
    }
    return "?";
}

inline OperatorKind kind_of(const Operator& op) {
    return static_cast<OperatorKind>(op.index());
}

/// Serializable operator description (the "feedback" block of a scenario).
struct FeedbackSpec {
    OperatorKind kind = OperatorKind::sign;
    double gamma = 1.0;
    double h = 1.0;
    double c = 1.0;
    std::optional<double> xi0;
    std::vector<PathPoint> table;  // static maps only; empty means linear gamma*y

    friend bool operator==(const FeedbackSpec& a, const FeedbackSpec& b) {
        if (a.kind != b.kind || a.gamma != b.gamma || a.h != b.h || a.c != b.c || a.xi0 != b.xi0 ||
            a.table.size() != b.table.size())
            return false;
        for (std::size_t i = 0; i < a.table.size(); ++i)
            if (a.table[i].y != b.table[i].y || a.table[i].xi != b.table[i].xi) return false;
        return true;
    }
};

namespace detail {

inline double output_of(const Operator& op, double y) {
    return std::visit(
        [y](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>)
                return o.gamma * y + o.h * o.direction;
            else if constexpr (std::is_same_v<T, StopElement>)
                return o.z;
            else
                return o(y);
        },
        op);
}

inline bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace detail

inline void validate(const FeedbackSpec& f) {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    switch (f.kind) {
        case OperatorKind::sign:
            if (!finite_nonneg(f.gamma) || !finite_nonneg(f.h))
                throw InvalidArgument("sign hysteresis needs finite gamma >= 0 and h >= 0");
            break;
        case OperatorKind::stop:
            if (!(std::isfinite(f.c) && f.c > 0.0) || !(std::isfinite(f.h) && f.h > 0.0))
                throw InvalidArgument("stop element needs finite c > 0 and h > 0");
            break;
        case OperatorKind::static_map:
            if (!finite_nonneg(f.gamma)) throw InvalidArgument("static map needs finite gamma >= 0");
            break;
    }
    if (f.xi0 && !std::isfinite(*f.xi0)) throw InvalidArgument("xi0 must be finite");
}

/**
 * Operator state that reproduces xi0 at input y0. Without xi0 the sign
 * operator starts on the midline (direction 0), the stop element relaxed
 * (z = 0) and the static map on g(y0).
 */
inline OperatorState initial_state(const FeedbackSpec& f, double y0) {
    validate(f);
    if (!std::isfinite(y0)) throw NonFiniteInput("initial input must be finite");
    OperatorState s;
    s.y_prev = y0;
    switch (f.kind) {
        case OperatorKind::sign: {
            SignHysteresis op{f.gamma, f.h, 0};
            if (f.xi0) {
                const double mid = f.gamma * y0;
                if (detail::close(*f.xi0, mid))
                    op.direction = 0;
                else if (detail::close(*f.xi0, mid + f.h))
                    op.direction = 1;
                else if (detail::close(*f.xi0, mid - f.h))
                    op.direction = -1;
                else
                    throw InconsistentInitialState("xi0 = " + std::to_string(*f.xi0) +
                                                   " is not on a branch of the sign hysteresis at y0 = " +
                                                   std::to_string(y0));
            }
            s.op = op;
            break;
        }
        case OperatorKind::stop: {
            const double z = f.xi0.value_or(0.0);
            if (std::abs(z) > f.h)
                throw InconsistentInitialState("stop element xi0 outside [-h, h]");
            s.op = StopElement{f.c, f.h, z};
            break;
        }
        case OperatorKind::static_map: {
            StaticMap m;
            m.gamma = f.gamma;
            m.table = f.table;
            if (!m.table.empty()) m = StaticMap::tabulated(f.table, 0.0, std::numeric_limits<double>::infinity());
            if (f.xi0 && !detail::close(*f.xi0, m(y0)))
                throw InconsistentInitialState("static map xi0 differs from g(y0)");
            s.op = std::move(m);
            break;
        }
    }
    s.xi_prev = detail::output_of(s.op, y0);
    return s;
}

struct Update {
    OperatorState state;
    double xi;
};

/**
 * Advances the operator by dy = y_new - y_prev. Increments with
 * |dy| <= deadband leave the sign direction unchanged.
 */
inline Update update(const OperatorState& s, double y_new, double deadband = 0.0) {
    if (!std::isfinite(y_new)) throw NonFiniteInput("operator input must be finite");
    const double dy = y_new - s.y_prev;
    OperatorState next = s;
    std::visit(
        [&](auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>) {
                if (std::abs(dy) > deadband && dy != 0.0) o.direction = dy > 0.0 ? 1 : -1;
            } else if constexpr (std::is_same_v<T, StopElement>) {
                o.z = std::clamp(o.z + o.c * dy, -o.h, o.h);
            }
        },
        next.op);
    next.y_prev = y_new;
    next.xi_prev = detail::output_of(next.op, y_new);
    return {std::move(next), next.xi_prev};
}

/**
 * Exact (y, xi) breakpoints traversed by the update before -> after,
 * excluding the starting point (before.y_prev, before.xi_prev). A branch
 * switch of the sign operator appears as an extra point at the old input,
 * and saturation of the stop element as a kink point.
 */
inline std::vector<PathPoint> increment_path(const OperatorState& before, const OperatorState& after) {
    std::vector<PathPoint> pts;
    const double y0 = before.y_prev;
    const double y1 = after.y_prev;
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>) {
                const double xi_start = o.gamma * y0 + o.h * o.direction;
                if (xi_start != before.xi_prev) pts.push_back({y0, xi_start});
            } else if constexpr (std::is_same_v<T, StopElement>) {
                const auto& b = std::get<StopElement>(before.op);
                const double trial = b.z + b.c * (y1 - y0);
                if (std::abs(trial) > b.h) {
                    const double sat = trial > 0.0 ? b.h : -b.h;
                    const double yk = y0 + (sat - b.z) / b.c;
                    if (yk != y0 && yk != y1) pts.push_back({yk, sat});
                }
            } else {
                if (!o.table.empty()) {
                    const double lo = std::min(y0, y1);
                    const double hi = std::max(y0, y1);
                    std::vector<PathPoint> inner;
                    for (const auto& p : o.table)
                        if (p.y > lo && p.y < hi) inner.push_back(p);
                    if (y1 < y0) std::reverse(inner.begin(), inner.end());
                    pts.insert(pts.end(), inner.begin(), inner.end());
                }
            }
        },
        after.op);
    pts.push_back({y1, after.xi_prev});
    return pts;
}

/// Recoverable energy held by the operator at its current input.
inline double stored_energy(const OperatorState& s) {
    return std::visit(
        [&](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>)
                return 0.5 * o.gamma * s.y_prev * s.y_prev;
            else if constexpr (std::is_same_v<T, StopElement>)
                return 0.5 * o.z * o.z / o.c;
            else
                return o.energy(s.y_prev);
        },
        s.op);
}

/// Energy dissipated by the update before -> after, from the operator's
/// own law rather than from the traversed path.
inline double dissipated_energy(const OperatorState& before, const OperatorState& after) {
    const double dy = after.y_prev - before.y_prev;
    return std::visit(
        [&](const auto& o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, SignHysteresis>) {
                return o.h * o.direction * dy;
            } else if constexpr (std::is_same_v<T, StopElement>) {
                const auto& b = std::get<StopElement>(before.op);
                const double trial = b.z + b.c * dy;
                const double slip = std::max(0.0, std::abs(trial) - b.h) / b.c;
                return b.h * slip;
            } else {
                return 0.0;
            }
        },
        after.op);
}

/// Feeds a whole input sequence through the operator and returns the exact
/// branch-resolved path, starting with the initial point.
inline std::vector<PathPoint> trace(OperatorState s, std::span<const double> inputs, double deadband = 0.0) {
    std::vector<PathPoint> path{{s.y_prev, s.xi_prev}};
    for (const double y : inputs) {
        auto u = update(s, y, deadband);
        const auto seg = increment_path(s, u.state);
        path.insert(path.end(), seg.begin(), seg.end());
        s = std::move(u.state);
    }
    return path;
}

/**
 * True when, over the common input range, the forward (increasing-input)
 * branch lies on or above the backward branch. The path must consist of
 * one forward and one backward segment joined at a single reversal.
 */
inline bool is_clockwise(std::span<const PathPoint> path, double tol = 1e-9) {
    if (path.size() < 3) throw NoOverlap("path too short to contain a reversal");

    // the reversal sits at the input extremum; a vertical jump there belongs
    // to neither branch
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t probe = 1;
    while (probe < path.size() && path[probe].y == path[0].y) ++probe;
    if (probe == path.size()) throw NoOverlap("input never moves");
    const bool rises = path[probe].y > path[0].y;
    double ext = path[0].y;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const bool better = rises ? path[i].y > ext : path[i].y < ext;
        if (better) {
            ext = path[i].y;
            first = last = i;
        } else if (path[i].y == ext && last + 1 == i) {
            last = i;
        }
    }
    std::vector<PathPoint> a(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(first) + 1);
    std::vector<PathPoint> b(path.begin() + static_cast<std::ptrdiff_t>(last), path.end());
    auto strip_vertical = [](std::vector<PathPoint>& seg) {
        // drop duplicate-y neighbours, keeping the one adjacent to the segment interior
        std::vector<PathPoint> out;
        for (const auto& p : seg) {
            if (!out.empty() && out.back().y == p.y)
                out.back() = p;
            else
                out.push_back(p);
        }
        seg = std::move(out);
    };
    std::reverse(b.begin(), b.end());  // make both segments start away from the reversal
    strip_vertical(a);
    strip_vertical(b);
    std::reverse(b.begin(), b.end());
    if (a.size() < 2 || b.size() < 2) throw NoOverlap("missing forward or backward segment");

    auto& fwd = rises ? a : b;
    auto& bwd = rises ? b : a;
    auto as_increasing = [](std::vector<PathPoint> seg) {
        if (seg.front().y > seg.back().y) std::reverse(seg.begin(), seg.end());
        return seg;
    };
    const auto f = as_increasing(fwd);
    const auto g = as_increasing(bwd);
    const double lo = std::max(f.front().y, g.front().y);
    const double hi = std::min(f.back().y, g.back().y);
    if (!(hi > lo)) throw NoOverlap("forward and backward segments share no input interval");

    auto interp = [](const std::vector<PathPoint>& seg, double y) {
        auto it = std::lower_bound(seg.begin(), seg.end(), y,
                                   [](const PathPoint& p, double v) { return p.y < v; });
        if (it == seg.begin()) return it->xi;
        if (it == seg.end()) return seg.back().xi;
        const auto& p1 = *it;
        const auto& p0 = *(it - 1);
        if (p1.y == p0.y) return p1.xi;
        return p0.xi + (y - p0.y) / (p1.y - p0.y) * (p1.xi - p0.xi);
    };
    std::vector<double> probes{lo, hi};
    for (const auto& p : f)
        if (p.y > lo && p.y < hi) probes.push_back(p.y);
    for (const auto& p : g)
        if (p.y > lo && p.y < hi) probes.push_back(p.y);
    return std::all_of(probes.begin(), probes.end(),
                       [&](double y) { return interp(f, y) >= interp(g, y) - tol; });
}

}  // namespace hystab
