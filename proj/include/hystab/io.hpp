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
 * @file io.hpp
 * @brief Locale-independent CSV writers, JSON reports and polyline SVG plots.
 *
 * Numbers go through std::to_chars (shortest round-trip form), so output
 * bytes depend only on the values, never on the global locale.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hystab/energy.hpp"
#include "hystab/errors.hpp"
#include "hystab/lti.hpp"
#include "hystab/simulate.hpp"
#include "hystab/stability.hpp"

namespace hystab {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

/// Fixed-precision variant for plot coordinates.
inline std::string format_fixed(double v, int precision = 2) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    return std::string(buf, r.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

/// t, x1..xn, y, xi, u, V, dissipated
inline void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    CsvWriter w(out);
    std::vector<std::string> cols{"t"};
    for (Eigen::Index i = 0; i < tr.n; ++i) cols.push_back("x" + std::to_string(i + 1));
    for (const char* c : {"y", "xi", "u", "V", "dissipated"}) cols.emplace_back(c);
    w.header(cols);
    std::vector<double> row;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        row.clear();
        row.push_back(tr.t[k]);
        for (Eigen::Index i = 0; i < tr.n; ++i) row.push_back(tr.state(k, i));
        row.push_back(tr.y[k]);
        row.push_back(tr.xi[k]);
        row.push_back(tr.u[k]);
        row.push_back(k < tr.V.size() ? tr.V[k] : std::numeric_limits<double>::quiet_NaN());
        row.push_back(k < tr.dissipated.size() ? tr.dissipated[k] : std::numeric_limits<double>::quiet_NaN());
        w.row(row);
    }
}

/// t, y, xi, w, V, dissipated
inline void write_energy_csv(std::ostream& out, const EnergyLedger& ledger) {
    CsvWriter w(out);
    w.header({"t", "y", "xi", "w", "V", "dissipated"});
    for (const auto& s : ledger.samples) w.row({s.t, s.y, s.xi, s.w, s.V, s.dissipated});
}

/// Drops the sign of zero so reports never show -0.0.
inline double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

inline nlohmann::json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(clean_zero(v)) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const CycleDiagnostics& d) {
    nlohmann::json j;
    j["bounded"] = d.bounded;
    j["period"] = d.limit_cycle ? nlohmann::json(d.limit_cycle->period) : nlohmann::json(nullptr);
    j["amplitude"] = d.limit_cycle ? nlohmann::json(d.limit_cycle->amplitude) : nlohmann::json(nullptr);
    j["growth_rate"] = finite_or_null(d.growth_rate);
    j["set_verdict"] = d.set_verdict ? nlohmann::json(*d.set_verdict) : nlohmann::json(nullptr);
    j["max_norm"] = finite_or_null(d.max_norm);
    if (d.limit_cycle && !d.limit_cycle->amplitudes.empty()) j["amplitudes"] = d.limit_cycle->amplitudes;
    return j;
}

inline nlohmann::json to_json(const CriterionVerdict& v) {
    nlohmann::json j;
    j["loop"] = to_string(v.loop);
    j["status"] = to_string(v.status);
    j["min_distance"] = finite_or_null(v.min_distance);
    j["witness_omega"] = finite_or_null(v.witness_omega);
    j["encirclements"] = v.encirclements ? nlohmann::json(*v.encirclements) : nlohmann::json(nullptr);
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

inline nlohmann::json to_json(Complex c) { return nlohmann::json::array({clean_zero(c.real()), clean_zero(c.imag())}); }

inline nlohmann::json to_json(const PoleReport& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& z : p.poles) a.push_back(to_json(z));
    return a;
}

inline nlohmann::json to_json(const EquilibriumReport& e) {
    nlohmann::json j;
    j["gamma_line"] = {{"orientation", to_string(e.gamma_line.orientation)},
                       {"slope", finite_or_null(e.gamma_line.slope)}};
    j["dc_gain"] = e.dc.infinite() ? nlohmann::json("infinite") : nlohmann::json(clean_zero(e.dc.finite()));
    j["unbounded"] = e.unbounded;
    j["xi0_range"] = (e.xi0_lo && e.xi0_hi) ? nlohmann::json::array({clean_zero(*e.xi0_lo), clean_zero(*e.xi0_hi)}) : nlohmann::json(nullptr);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : e.x0_points) {
        nlohmann::json x = nlohmann::json::array();
        for (Eigen::Index i = 0; i < p.x0.size(); ++i) x.push_back(clean_zero(p.x0(i)));
        pts.push_back({{"x0", x}, {"xi0", clean_zero(p.xi0)}, {"residual", p.residual}});
    }
    j["points"] = pts;
    j["invariant_interval"] = e.invariant_interval
                                  ? nlohmann::json{{"x1", {clean_zero(e.invariant_interval->lo), clean_zero(e.invariant_interval->hi)}}}
                                  : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const DissipationReport& r) {
    nlohmann::json j{{"max_inequality_violation", finite_or_null(r.max_inequality_violation)},
                     {"identity_residual", r.identity_residual},
                     {"min_dissipated", r.min_dissipated},
                     {"scale", r.scale},
                     {"dissipative", r.dissipative}};
    j["vdot_max_error"] = r.vdot_max_error ? nlohmann::json(*r.vdot_max_error) : nlohmann::json(nullptr);
    return j;
}

inline void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

// --- SVG ---------------------------------------------------------------------

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;  // crosses instead of a polyline
    std::string label;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 640;
    int height = 480;
    /// fixed bounds; NaN means fit to the data
    double x_min = std::numeric_limits<double>::quiet_NaN();
    double x_max = std::numeric_limits<double>::quiet_NaN();
    double y_min = std::numeric_limits<double>::quiet_NaN();
    double y_max = std::numeric_limits<double>::quiet_NaN();
    bool equal_aspect = false;
    std::size_t max_points = 4000;  // polylines are decimated above this
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string o;
    for (const char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec) {
    double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    if (!std::isnan(spec.x_min)) xlo = spec.x_min;
    if (!std::isnan(spec.x_max)) xhi = spec.x_max;
    if (!std::isnan(spec.y_min)) ylo = spec.y_min;
    if (!std::isnan(spec.y_max)) yhi = spec.y_max;
    if (!(xlo <= xhi)) xlo = -1.0, xhi = 1.0;
    if (!(ylo <= yhi)) ylo = -1.0, yhi = 1.0;
    auto pad = [](double& lo, double& hi) {
        const double span = hi - lo;
        const double p = span > 0.0 ? 0.05 * span : 0.5 * (1.0 + std::abs(lo));
        lo -= p;
        hi += p;
    };
    pad(xlo, xhi);
    pad(ylo, yhi);

    const double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    if (spec.equal_aspect) {
        const double sx = (xhi - xlo) / pw;
        const double sy = (yhi - ylo) / ph;
        if (sx > sy) {
            const double mid = 0.5 * (ylo + yhi);
            ylo = mid - 0.5 * sx * ph;
            yhi = mid + 0.5 * sx * ph;
        } else {
            const double mid = 0.5 * (xlo + xhi);
            xlo = mid - 0.5 * sy * pw;
            xhi = mid + 0.5 * sy * pw;
        }
    }
    auto px = [&](double v) { return left + (v - xlo) / (xhi - xlo) * pw; };
    auto py = [&](double v) { return top + (yhi - v) / (yhi - ylo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<rect x=\"" << format_fixed(left) << "\" y=\"" << format_fixed(top) << "\" width=\"" << format_fixed(pw)
      << "\" height=\"" << format_fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (xlo < 0.0 && xhi > 0.0)
        o << "<line x1=\"" << format_fixed(px(0)) << "\" y1=\"" << format_fixed(top) << "\" x2=\""
          << format_fixed(px(0)) << "\" y2=\"" << format_fixed(top + ph) << "\" stroke=\"#bbbbbb\"/>\n";
    if (ylo < 0.0 && yhi > 0.0)
        o << "<line x1=\"" << format_fixed(left) << "\" y1=\"" << format_fixed(py(0)) << "\" x2=\""
          << format_fixed(left + pw) << "\" y2=\"" << format_fixed(py(0)) << "\" stroke=\"#bbbbbb\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xlo + (xhi - xlo) * i / 4.0;
        const double fy = ylo + (yhi - ylo) * i / 4.0;
        o << "<text x=\"" << format_fixed(px(fx)) << "\" y=\"" << format_fixed(top + ph + 16)
          << "\" text-anchor=\"middle\">" << format_double(std::round(fx * 1e4) / 1e4) << "</text>\n";
        o << "<text x=\"" << format_fixed(left - 6) << "\" y=\"" << format_fixed(py(fy) + 4)
          << "\" text-anchor=\"end\">" << format_double(std::round(fy * 1e4) / 1e4) << "</text>\n";
    }
    o << "<text x=\"" << format_fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << detail::xml_escape(spec.title) << "</text>\n";
    o << "<text x=\"" << format_fixed(left + pw / 2) << "\" y=\"" << spec.height - 10
      << "\" text-anchor=\"middle\">" << detail::xml_escape(spec.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << format_fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << format_fixed(top + ph / 2) << ")\">" << detail::xml_escape(spec.y_label) << "</text>\n";

    int legend_row = 0;
    for (const auto& s : spec.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                const double cx = px(s.x[i]), cy = py(s.y[i]);
                o << "<path d=\"M" << format_fixed(cx - 4) << ' ' << format_fixed(cy - 4) << " L"
                  << format_fixed(cx + 4) << ' ' << format_fixed(cy + 4) << " M" << format_fixed(cx - 4) << ' '
                  << format_fixed(cy + 4) << " L" << format_fixed(cx + 4) << ' ' << format_fixed(cy - 4)
                  << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            }
        } else if (n > 0) {
            const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, spec.max_points));
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
            bool first = true;
            for (std::size_t i = 0; i < n; i += stride) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o << (first ? "" : " ") << format_fixed(px(s.x[i])) << ',' << format_fixed(py(s.y[i]));
                first = false;
            }
            if ((n - 1) % stride != 0 && std::isfinite(s.x[n - 1]) && std::isfinite(s.y[n - 1]))
                o << ' ' << format_fixed(px(s.x[n - 1])) << ',' << format_fixed(py(s.y[n - 1]));
            o << "\"/>\n";
        }
        if (!s.label.empty()) {
            const double ly = top + 14 + 16 * legend_row++;
            o << "<text x=\"" << format_fixed(left + pw - 8) << "\" y=\"" << format_fixed(ly)
              << "\" text-anchor=\"end\" fill=\"" << s.color << "\">" << detail::xml_escape(s.label) << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

/// State i against state j (zero-based).
inline PlotSpec phase_portrait(const Trajectory& tr, Eigen::Index i, Eigen::Index j, std::string title = {}) {
    if (i < 0 || j < 0 || i >= tr.n || j >= tr.n) throw InvalidArgument("phase axes out of range");
    PlotSeries s;
    s.x.reserve(tr.size());
    s.y.reserve(tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        s.x.push_back(tr.state(k, i));
        s.y.push_back(tr.state(k, j));
    }
    PlotSpec p;
    p.title = title.empty() ? "phase portrait" : std::move(title);
    p.x_label = "x" + std::to_string(i + 1);
    p.y_label = "x" + std::to_string(j + 1);
    p.series.push_back(std::move(s));
    return p;
}

/// Operator input-output map xi over y.
inline PlotSpec hysteresis_loop(const Trajectory& tr, std::string title = {}) {
    PlotSeries s;
    s.x = tr.y;
    s.y = tr.xi;
    s.color = "#d62728";
    PlotSpec p;
    p.title = title.empty() ? "hysteresis loop" : std::move(title);
    p.x_label = "y";
    p.y_label = "xi";
    p.series.push_back(std::move(s));
    return p;
}

/// Locus for positive and negative frequencies plus the critical region.
inline PlotSpec nyquist_plot(const FrequencyLocus& locus, const CriticalDisk& region, std::string title = {}) {
    PlotSeries pos, neg, crit;
    pos.label = locus.kind == LocusKind::G ? "G(jw)" : "jw G(jw)";
    neg.color = "#9ecae1";
    for (const auto& s : locus.samples) {
        pos.x.push_back(s.value.real());
        pos.y.push_back(s.value.imag());
        neg.x.push_back(s.value.real());
        neg.y.push_back(-s.value.imag());
    }
    // keep the view on the interesting part of the locus
    double extent = 0.0;
    for (std::size_t i = 0; i < pos.x.size(); ++i) extent = std::max({extent, std::abs(pos.x[i]), std::abs(pos.y[i])});
    extent = std::min(extent, 10.0);
    crit.color = "#d62728";
    crit.label = std::string("critical ") + to_string(region.kind);
    switch (region.kind) {
        case RegionKind::disk:
            for (int k = 0; k <= 180; ++k) {
                const double a = 2.0 * std::numbers::pi * k / 180.0;
                crit.x.push_back(region.center.real() + region.radius * std::cos(a));
                crit.y.push_back(region.center.imag() + region.radius * std::sin(a));
            }
            break;
        case RegionKind::half_plane:
            crit.x = {region.boundary_re, region.boundary_re};
            crit.y = {-extent, extent};
            break;
        case RegionKind::point:
            crit.markers = true;
            crit.x = {region.center.real()};
            crit.y = {region.center.imag()};
            break;
        case RegionKind::empty: break;
    }
    PlotSpec p;
    p.title = title.empty() ? "Nyquist locus" : std::move(title);
    p.x_label = "Re";
    p.y_label = "Im";
    p.equal_aspect = true;
    if (extent > 0.0) {
        p.x_min = p.y_min = -extent;
        p.x_max = p.y_max = extent;
    }
    p.series = {std::move(neg), std::move(pos), std::move(crit)};
    return p;
}

inline PlotSpec pole_map(const PoleReport& pr, std::string title = {}) {
    PlotSeries s;
    s.markers = true;
    s.color = "#2ca02c";
    for (const auto& z : pr.poles) {
        s.x.push_back(z.real());
        s.y.push_back(z.imag());
    }
    PlotSpec p;
    p.title = title.empty() ? "poles" : std::move(title);
    p.x_label = "Re";
    p.y_label = "Im";
    p.series.push_back(std::move(s));
    return p;
}

}  // namespace hystab
