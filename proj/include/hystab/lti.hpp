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
#include <complex>
#include <limits>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hystab/errors.hpp"

namespace hystab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/**
 * @brief Single-input single-output linear plant
 *
 *   xdot = A x + B u,   y = C' x
 *
 * B and C are column vectors of the same length as A's side.
 */
struct StateSpace {
    Matrix A;
    Vector B;
    Vector C;

    StateSpace() = default;
    StateSpace(Matrix a, Vector b, Vector c) : A(std::move(a)), B(std::move(b)), C(std::move(c)) {
        validate();
    }

    [[nodiscard]] Eigen::Index order() const { return A.rows(); }

    void validate() const {
        const auto n = A.rows();
        if (n < 1) throw InvalidModel("state dimension must be at least 1");
        if (A.cols() != n) throw InvalidModel("A must be square");
        if (B.size() != n) throw InvalidModel("B length does not match A");
        if (C.size() != n) throw InvalidModel("C length does not match A");
        if (!A.allFinite() || !B.allFinite() || !C.allFinite())
            throw InvalidModel("state-space entries must be finite");
    }

    friend bool operator==(const StateSpace& l, const StateSpace& r) {
        return l.A.rows() == r.A.rows() && l.A == r.A && l.B == r.B && l.C == r.C;
    }
};

struct LtiOptions {
    /// sI - A is treated as singular above this condition number.
    double cond_cap = 1e12;
    /// |Re p| < marginal_tol * (1 + |p|) counts as on the imaginary axis.
    double marginal_tol = 1e-9;
    /// Frequency samples closer than this (relative) to a pole are excluded.
    double pole_distance = 1e-9;
};

/// G(s) = C' (sI - A)^-1 B.
inline Complex transfer_eval(const StateSpace& sys, Complex s, const LtiOptions& opt = {}) {
    const auto n = sys.order();
    ComplexMatrix M = -sys.A.cast<Complex>();
    M.diagonal().array() += s;
    Eigen::PartialPivLU<ComplexMatrix> lu(M);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / opt.cond_cap))
        throw SingularAtS("sI - A is singular at s = (" + std::to_string(s.real()) + ", " +
                          std::to_string(s.imag()) + ")");
    const ComplexVector x = lu.solve(sys.B.cast<Complex>());
    Complex g{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) g += sys.C(i) * x(i);
    return g;
}

/// Static gain, or the distinguished infinite value when A is singular.
struct DcGain {
    std::optional<double> value;

    [[nodiscard]] bool infinite() const { return !value.has_value(); }
    [[nodiscard]] double finite() const { return value.value(); }

    static DcGain Infinite() { return DcGain{}; }
};

inline DcGain dc_gain(const StateSpace& sys, const LtiOptions& opt = {}) {
    Eigen::PartialPivLU<Matrix> lu(sys.A);
    if (!(lu.rcond() > 1.0 / opt.cond_cap)) return DcGain::Infinite();
    const Vector x = lu.solve(sys.B);
    return DcGain{-sys.C.dot(x)};
}

enum class PoleClass { hurwitz, marginal, unstable };

inline const char* to_string(PoleClass c) {
    switch (c) {
        case PoleClass::hurwitz: return "hurwitz";
        case PoleClass::marginal: return "marginal";
        case PoleClass::unstable: return "unstable";
    }
    return "?";
}

struct PoleReport {
    std::vector<Complex> poles;   // sorted by real part, then imaginary part
    std::size_t unstable = 0;     // strictly right half-plane (v)
    std::size_t marginal = 0;     // on the imaginary axis within tolerance
    PoleClass classification = PoleClass::hurwitz;

    [[nodiscard]] double max_real_part() const {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& p : poles) m = std::max(m, p.real());
        return m;
    }
};

inline bool on_imaginary_axis(Complex p, double tol) {
    return std::abs(p.real()) < tol * (1.0 + std::abs(p));
}

inline PoleReport poles(const StateSpace& sys, const LtiOptions& opt = {}) {
    Eigen::EigenSolver<Matrix> es(sys.A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw EigFailure("eigenvalue iteration did not converge");

    PoleReport r;
    const auto ev = es.eigenvalues();
    r.poles.assign(ev.data(), ev.data() + ev.size());
    std::sort(r.poles.begin(), r.poles.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (const auto& p : r.poles) {
        if (on_imaginary_axis(p, opt.marginal_tol))
            ++r.marginal;
        else if (p.real() > 0.0)
            ++r.unstable;
    }
    if (r.unstable > 0)
        r.classification = PoleClass::unstable;
    else if (r.marginal > 0)
        r.classification = PoleClass::marginal;
    return r;
}

/// Which locus to sample: G(jw) or the rate-weighted jw G(jw).
enum class LocusKind { G, sG };

inline const char* to_string(LocusKind k) { return k == LocusKind::G ? "G" : "sG"; }

struct OmegaGrid {
    double lo = 1e-3;
    double hi = 1e3;
    std::size_t points = 2000;
    bool logarithmic = true;

    [[nodiscard]] std::vector<double> values() const {
        if (points == 0 || !(lo > 0.0) || !(hi >= lo))
            throw InvalidArgument("frequency grid needs points > 0 and 0 < lo <= hi");
        std::vector<double> w(points);
        if (points == 1) {
            w[0] = lo;
            return w;
        }
        const double denom = static_cast<double>(points - 1);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / denom;
            w[i] = logarithmic ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
        }
        w.back() = hi;
        return w;
    }
};

struct LocusSample {
    double omega;
    Complex value;
};

struct FrequencyLocus {
    LocusKind kind = LocusKind::G;
    std::vector<LocusSample> samples;
    std::vector<double> excluded;  // grid points skipped for being too close to a pole
};

inline FrequencyLocus frequency_response(const StateSpace& sys, const std::vector<double>& omegas,
                                         LocusKind kind, const LtiOptions& opt = {}) {
    FrequencyLocus locus;
    locus.kind = kind;
    if (omegas.empty()) throw InvalidArgument("frequency grid is empty");
    for (std::size_t i = 1; i < omegas.size(); ++i)
        if (!(omegas[i] > omegas[i - 1]))
            throw InvalidArgument("frequency grid must be strictly increasing");

    const auto pr = poles(sys, opt);
    locus.samples.reserve(omegas.size());
    for (const double w : omegas) {
        const Complex s{0.0, w};
        const bool near_pole = std::any_of(pr.poles.begin(), pr.poles.end(), [&](Complex p) {
            return std::abs(p - s) < opt.pole_distance * (1.0 + std::abs(w));
        });
        if (near_pole) {
            locus.excluded.push_back(w);
            continue;
        }
        Complex g;
        try {
            g = transfer_eval(sys, s, opt);
        } catch (const SingularAtS&) {
            locus.excluded.push_back(w);
            continue;
        }
        const Complex v = kind == LocusKind::G ? g : s * g;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            locus.excluded.push_back(w);
            continue;
        }
        locus.samples.push_back({w, v});
    }
    return locus;
}

inline FrequencyLocus frequency_response(const StateSpace& sys, const OmegaGrid& grid, LocusKind kind,
                                         const LtiOptions& opt = {}) {
    return frequency_response(sys, grid.values(), kind, opt);
}

/// Smallest r >= 1 with C' A^(r-1) B != 0, or 0 when none up to n is found.
inline int relative_degree(const StateSpace& sys, double tol = 1e-12) {
    Vector v = sys.B;
    const double scale = 1.0 + sys.C.norm() * sys.B.norm();
    for (int r = 1; r <= sys.order(); ++r) {
        if (std::abs(sys.C.dot(v)) > tol * scale) return r;
        v = sys.A * v;
    }
    return 0;
}

}  // namespace hystab
