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
 * @file stability.hpp
 * @brief Equilibrium sets and circle-criterion checks for the loop with
 * hysteresis feedback.
 *
 * The sign-hysteresis feedback xi = g(y) + h*sign(ydot) is analysed as two
 * parallel loops: the memoryless g-loop, tested on G(jw) against the disk
 * of its sector, and the relay loop, whose sector collapses to a single
 * point at the origin and which is tested on the rate-weighted locus
 * jw G(jw). Both must pass for absolute stability.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hystab/errors.hpp"
#include "hystab/hysteresis.hpp"
#include "hystab/lti.hpp"

namespace hystab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// --- equilibria ----------------------------------------------------------

enum class LineOrientation { horizontal, vertical, sloped };

inline const char* to_string(LineOrientation o) {
    switch (o) {
        case LineOrientation::horizontal: return "horizontal";
        case LineOrientation::vertical: return "vertical";
        case LineOrientation::sloped: return "sloped";
    }
    return "?";
}

/// Steady-state line y + G(0) xi = 0 in the (y, xi) plane.
struct GammaLine {
    LineOrientation orientation = LineOrientation::sloped;
    double slope = 0.0;  // d xi / d y; infinite for the vertical line
};

/// {x1 in [lo, hi], x_i = 0 otherwise}
struct InvariantInterval {
    double lo;
    double hi;
};

struct EquilibriumPoint {
    Vector x0;
    double xi0;
    double residual;  // ||A x0 - B xi0||_inf
};

struct EquilibriumReport {
    GammaLine gamma_line;
    DcGain dc;
    std::vector<EquilibriumPoint> x0_points;
    std::optional<double> xi0_lo;
    std::optional<double> xi0_hi;
    /// end points of the equilibrium segment in state space
    std::optional<std::pair<Vector, Vector>> segment;
    std::optional<InvariantInterval> invariant_interval;
    bool unbounded = false;
};

namespace detail {

/// Interval [lo, hi] of xi on the line y = -k*xi that lies in the
/// operator's output band. Empty optional means unbounded.
inline std::optional<std::pair<double, double>> band_cut_vertical_family(const FeedbackSpec& f, double k) {
    switch (f.kind) {
        case OperatorKind::sign: {
            // |xi - gamma*y| <= h with y = -k xi  ->  |xi| (1 + gamma k) <= h
            const double a = std::abs(1.0 + f.gamma * k);
            if (a < 1e-14) return std::nullopt;
            return std::pair{-f.h / a, f.h / a};
        }
        case OperatorKind::stop:
            return std::pair{-f.h, f.h};
        case OperatorKind::static_map: {
            if (!f.table.empty()) return std::pair{0.0, 0.0};
            const double a = std::abs(1.0 + f.gamma * k);
            if (a < 1e-14) return std::nullopt;
            return std::pair{0.0, 0.0};
        }
    }
    return std::nullopt;
}

inline std::optional<InvariantInterval> axis_interval(const Vector& a, const Vector& b, double tol = 1e-12) {
    for (Eigen::Index i = 1; i < a.size(); ++i)
        if (std::abs(a(i)) > tol || std::abs(b(i)) > tol) return std::nullopt;
    return InvariantInterval{std::min(a(0), b(0)), std::max(a(0), b(0))};
}

}  // namespace detail

/**
 * Equilibria of the loop with the given feedback operator. For nonsingular A
 * every admissible xi0 on the steady-state line gives x0 = A^-1 B xi0; for
 * singular A the line is xi0 = 0 and the equilibria are the kernel states
 * whose output lies in the band's zero cut.
 */
inline EquilibriumReport equilibrium(const StateSpace& sys, const FeedbackSpec& f, const LtiOptions& opt = {}) {
    sys.validate();
    validate(f);
    EquilibriumReport r;
    r.dc = dc_gain(sys, opt);
    if (r.dc.infinite()) {
        r.gamma_line = {LineOrientation::horizontal, 0.0};
    } else if (r.dc.finite() == 0.0) {
        r.gamma_line = {LineOrientation::vertical, kInf};
    } else {
        r.gamma_line = {LineOrientation::sloped, -1.0 / r.dc.finite()};
    }

    auto add_point = [&](const Vector& x0, double xi0) {
        const double res = (sys.A * x0 - sys.B * xi0).cwiseAbs().maxCoeff();
        r.x0_points.push_back({x0, xi0, res});
    };

    if (!r.dc.infinite()) {
        const auto cut = detail::band_cut_vertical_family(f, r.dc.finite());
        if (!cut) {
            r.unbounded = true;
            return r;
        }
        Eigen::PartialPivLU<Matrix> lu(sys.A);
        const Vector base = lu.solve(sys.B);
        r.xi0_lo = cut->first;
        r.xi0_hi = cut->second;
        add_point(base * cut->first, cut->first);
        if (cut->second != cut->first) add_point(base * cut->second, cut->second);
        r.segment = {base * cut->first, base * cut->second};
    } else {
        // xi0 = 0: states with A x = 0 whose output y lies where 0 is in the band
        r.xi0_lo = r.xi0_hi = 0.0;
        Eigen::FullPivLU<Matrix> lu(sys.A);
        const Matrix kernel = lu.kernel();
        std::optional<Vector> dir;
        for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
            const double cy = sys.C.dot(kernel.col(j));
            if (std::abs(cy) > 1e-12) {
                dir = kernel.col(j) / cy;  // unit output
                break;
            }
        }
        double ylo = 0.0;
        double yhi = 0.0;
        switch (f.kind) {
            case OperatorKind::sign:
                if (f.gamma == 0.0) {
                    r.unbounded = true;
                    return r;
                }
                ylo = -f.h / f.gamma;
                yhi = f.h / f.gamma;
                break;
            case OperatorKind::stop:
                // z = 0 is reachable at any output
                r.unbounded = true;
                return r;
            case OperatorKind::static_map:
                if (f.table.empty() && f.gamma == 0.0) {
                    r.unbounded = true;
                    return r;
                }
                break;
        }
        if (!dir) {
            add_point(Vector::Zero(sys.order()), 0.0);
            r.segment = {Vector::Zero(sys.order()), Vector::Zero(sys.order())};
        } else {
            add_point(*dir * ylo, 0.0);
            if (yhi != ylo) add_point(*dir * yhi, 0.0);
            r.segment = {*dir * ylo, *dir * yhi};
        }
    }
    if (r.segment) r.invariant_interval = detail::axis_interval(r.segment->first, r.segment->second);
    return r;
}

// --- circle criterion ----------------------------------------------------

enum class RegionKind { disk, half_plane, point, empty };

inline const char* to_string(RegionKind k) {
    switch (k) {
        case RegionKind::disk: return "disk";
        case RegionKind::half_plane: return "half_plane";
        case RegionKind::point: return "point";
        case RegionKind::empty: return "empty";
    }
    return "?";
}

/// Critical region D(alpha, beta) in the complex plane.
struct CriticalDisk {
    RegionKind kind = RegionKind::empty;
    Complex center{0.0, 0.0};  // disk center, or the point
    double radius = 0.0;
    double boundary_re = 0.0;  // half-plane Re s <= boundary_re

    /// Signed distance; negative inside the region.
    [[nodiscard]] double distance(Complex z) const {
        switch (kind) {
            case RegionKind::disk: return std::abs(z - center) - radius;
            case RegionKind::half_plane: return z.real() - boundary_re;
            case RegionKind::point: return std::abs(z - center);
            case RegionKind::empty: return kInf;
        }
        return kInf;
    }

    /// Reference point used for encirclement counting.
    [[nodiscard]] Complex anchor() const {
        switch (kind) {
            case RegionKind::disk:
            case RegionKind::point: return center;
            case RegionKind::half_plane: return {boundary_re, 0.0};
            case RegionKind::empty: return {0.0, 0.0};
        }
        return {};
    }
};

struct Sector {
    double alpha = 0.0;
    double beta = kInf;
};

inline CriticalDisk critical_disk(double alpha, double beta) {
    if (std::isnan(alpha) || std::isnan(beta) || alpha < 0.0 || alpha > beta)
        throw InvalidSector("sector needs 0 <= alpha <= beta");
    CriticalDisk d;
    if (beta == 0.0) {
        d.kind = RegionKind::empty;  // no nonlinearity: only the linear part matters
    } else if (alpha == beta) {
        d.kind = RegionKind::point;
        d.center = std::isinf(beta) ? Complex{0.0, 0.0} : Complex{-1.0 / beta, 0.0};
    } else if (alpha == 0.0) {
        d.kind = RegionKind::half_plane;
        d.boundary_re = std::isinf(beta) ? 0.0 : -1.0 / beta;
    } else {
        const double a = -1.0 / alpha;
        const double b = std::isinf(beta) ? 0.0 : -1.0 / beta;
        d.kind = RegionKind::disk;
        d.center = {0.5 * (a + b), 0.0};
        d.radius = 0.5 * (b - a);
    }
    return d;
}

inline CriticalDisk critical_disk(const Sector& s) { return critical_disk(s.alpha, s.beta); }

enum class LoopId { phi_g, phi_h };

inline const char* to_string(LoopId l) { return l == LoopId::phi_g ? "phi_g" : "phi_h"; }

enum class CriterionStatus { satisfied, touching, violated, inconclusive_unstable_linear };

inline const char* to_string(CriterionStatus s) {
    switch (s) {
        case CriterionStatus::satisfied: return "satisfied";
        case CriterionStatus::touching: return "touching";
        case CriterionStatus::violated: return "violated";
        case CriterionStatus::inconclusive_unstable_linear: return "inconclusive_unstable_linear";
    }
    return "?";
}

struct CriterionVerdict {
    LoopId loop = LoopId::phi_g;
    CriterionStatus status = CriterionStatus::satisfied;
    double min_distance = kInf;
    std::optional<int> encirclements = 0;  ///< empty when the contour passes through the anchor
    double witness_omega = std::numeric_limits<double>::quiet_NaN();
    std::size_t unstable_poles = 0;
    std::size_t marginal_poles = 0;
    std::vector<double> skipped_omegas;
    std::string note;
};

struct CircleOptions {
    LtiOptions lti;
    /// |min_distance| below touching_tol * (1 + locus scale) is touching.
    double touching_tol = 1e-6;
};

/// Winding number of the closed polygon around z, counter-clockwise positive.
inline int winding_number(const std::vector<Complex>& poly, Complex z) {
    if (poly.size() < 2) return 0;
    double total = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Complex a = poly[i] - z;
        const Complex b = poly[(i + 1) % poly.size()] - z;
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) continue;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

/**
 * Tests the locus (G or jw G) against the critical region of the sector.
 * The w = 0 end of the locus is evaluated as a separate stationary point so
 * that a locus reaching the region only in the static limit is reported as
 * touching with witness 0.
 */
inline CriterionVerdict circle_check(const StateSpace& sys, const Sector& sector, const OmegaGrid& grid,
                                     LocusKind kind, LoopId loop = LoopId::phi_g, const CircleOptions& opt = {}) {
    const auto region = critical_disk(sector);
    const auto pr = poles(sys, opt.lti);
    CriterionVerdict v;
    v.loop = loop;
    v.unstable_poles = pr.unstable;
    v.marginal_poles = pr.marginal;

    const auto locus = frequency_response(sys, grid, kind, opt.lti);
    v.skipped_omegas = locus.excluded;

    // static end of the locus
    std::optional<Complex> at_zero;
    if (kind == LocusKind::sG) {
        const auto dc = dc_gain(sys, opt.lti);
        if (!dc.infinite()) at_zero = Complex{0.0, 0.0};
    } else {
        const auto dc = dc_gain(sys, opt.lti);
        if (!dc.infinite()) at_zero = Complex{dc.finite(), 0.0};
    }

    double scale = 0.0;
    for (const auto& s : locus.samples) {
        scale = std::max(scale, std::abs(s.value));
        const double d = region.distance(s.value);
        if (d < v.min_distance) {
            v.min_distance = d;
            v.witness_omega = s.omega;
        }
    }
    const double tol = opt.touching_tol * (1.0 + scale);
    if (at_zero) {
        const double d0 = region.distance(*at_zero);
        // the static point only decides the witness if it is at least as close
        if (d0 <= v.min_distance || (std::abs(d0) <= tol && v.min_distance > tol)) {
            v.min_distance = std::min(v.min_distance, d0);
            v.witness_omega = 0.0;
            if (std::abs(d0) <= tol) v.note = "locus reaches the critical region only in the stationary case w = 0";
        }
    }

    // full Nyquist contour: negative frequencies are the mirror image
    std::vector<Complex> contour;
    for (auto it = locus.samples.rbegin(); it != locus.samples.rend(); ++it) contour.push_back(std::conj(it->value));
    if (at_zero) contour.push_back(*at_zero);
    for (const auto& s : locus.samples) contour.push_back(s.value);
    if (region.kind != RegionKind::empty) {
        const auto anchor = region.anchor();
        const bool through = std::any_of(contour.begin(), contour.end(),
                                         [&](const Complex& z) { return std::abs(z - anchor) <= tol; });
        if (through)
            v.encirclements.reset();
        else
            v.encirclements = winding_number(contour, anchor);
    }

    if (pr.marginal > 0) {
        v.status = CriterionStatus::violated;
        v.note = "linear part has poles on the imaginary axis";
    } else if (pr.unstable > 0) {
        v.status = CriterionStatus::inconclusive_unstable_linear;
        v.note = "linear part has " + std::to_string(pr.unstable) + " right half-plane poles";
    } else if (region.kind == RegionKind::empty) {
        v.status = CriterionStatus::satisfied;
    } else if (std::abs(v.min_distance) <= tol) {
        v.status = CriterionStatus::touching;
    } else if (v.min_distance > 0.0 && v.encirclements == 0) {
        v.status = CriterionStatus::satisfied;
    } else {
        v.status = CriterionStatus::violated;
    }
    return v;
}

enum class OverallStatus { absolutely_stable, bounded_output, not_established };

inline const char* to_string(OverallStatus s) {
    switch (s) {
        case OverallStatus::absolutely_stable: return "absolutely_stable";
        case OverallStatus::bounded_output: return "bounded_output";
        case OverallStatus::not_established: return "not_established";
    }
    return "?";
}

struct TransformedLoopReport {
    CriterionVerdict phi_g;
    CriterionVerdict phi_h;
    OverallStatus overall = OverallStatus::not_established;
};

/**
 * Runs the criterion on both transformed loops: phi_g with G(jw) and the
 * static sector, phi_h with jw G(jw) and the point region of the relay
 * (skipped when h = 0).
 */
inline TransformedLoopReport transformed_loop_check(const StateSpace& sys, const Sector& g_sector, double h,
                                                    const OmegaGrid& grid = {}, const CircleOptions& opt = {}) {
    if (!(h >= 0.0)) throw InvalidArgument("h must be non-negative");
    TransformedLoopReport r;
    r.phi_g = circle_check(sys, g_sector, grid, LocusKind::G, LoopId::phi_g, opt);
    if (h > 0.0) {
        r.phi_h = circle_check(sys, Sector{kInf, kInf}, grid, LocusKind::sG, LoopId::phi_h, opt);
    } else {
        r.phi_h.loop = LoopId::phi_h;
        r.phi_h.status = CriterionStatus::satisfied;
        r.phi_h.note = "no relay loop (h = 0)";
        r.phi_h.unstable_poles = r.phi_g.unstable_poles;
        r.phi_h.marginal_poles = r.phi_g.marginal_poles;
    }
    const bool hurwitz = r.phi_g.unstable_poles == 0 && r.phi_g.marginal_poles == 0;
    auto ok = [](CriterionStatus s) { return s == CriterionStatus::satisfied; };
    auto ok_or_touch = [](CriterionStatus s) {
        return s == CriterionStatus::satisfied || s == CriterionStatus::touching;
    };
    if (ok(r.phi_g.status) && ok(r.phi_h.status) && hurwitz)
        r.overall = OverallStatus::absolutely_stable;
    else if (ok_or_touch(r.phi_g.status) && ok_or_touch(r.phi_h.status) && hurwitz)
        r.overall = OverallStatus::bounded_output;
    else
        r.overall = OverallStatus::not_established;
    return r;
}

/// The sector [0, gamma] of the memoryless part of a feedback spec.
inline Sector static_sector(const FeedbackSpec& f) {
    switch (f.kind) {
        case OperatorKind::sign: return {0.0, f.gamma};
        case OperatorKind::stop: return {0.0, 0.0};
        case OperatorKind::static_map: {
            if (f.table.empty()) return {0.0, f.gamma};
            double b = 0.0;
            for (const auto& p : f.table)
                if (p.y != 0.0) b = std::max(b, p.xi / p.y);
            return {0.0, b};
        }
    }
    return {};
}

}  // namespace hystab
