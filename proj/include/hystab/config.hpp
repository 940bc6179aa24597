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
 * @file config.hpp
 * @brief JSON scenario documents and run manifests.
 *
 * A scenario document looks like
 *
 *   {
 *     "id": "second_order",
 *     "A": [[0, 1], [-1, -1]], "B": [0, 1], "C": [0, 1],
 *     "x0": [2, 0],
 *     "feedback": {"kind": "sign", "gamma": 1, "h": 1, "c": 1, "xi0": null},
 *     "t_end": 50, "dt": 0.001, "solver": "rk4_fixed", "seed": 0
 *   }
 *
 * Only "A", "B", "C" and "feedback" are required. Doubles are written with
 * round-trip precision, so a scenario survives to_json/from_json bit-exactly.
 */

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hystab/errors.hpp"
#include "hystab/hysteresis.hpp"
#include "hystab/lti.hpp"
#include "hystab/simulate.hpp"

namespace hystab {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "1.0.0";

namespace detail {

inline double get_number(const json& j, std::string_view key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing key '" + std::string(key) + "'");
    if (!it->is_number()) throw ConfigError("key '" + std::string(key) + "' must be a number");
    return it->get<double>();
}

inline double get_number_or(const json& j, std::string_view key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_number()) throw ConfigError("key '" + std::string(key) + "' must be a number");
    return it->get<double>();
}

inline Vector vector_from(const json& j, std::string_view what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

inline json vector_to(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

/// Row-major nested array; ragged rows are a model error, not a parse error.
inline Matrix matrix_from(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("A must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : Eigen::Index{0};
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array()) throw ConfigError("A must be an array of rows");
        if (static_cast<Eigen::Index>(row.size()) != cols) throw InvalidModel("A has rows of different lengths");
        const Vector v = vector_from(row, "A row");
        m.row(r) = v.transpose();
    }
    return m;
}

inline json matrix_to(const Matrix& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vector_to(m.row(r).transpose()));
    return a;
}

}  // namespace detail

inline OperatorKind parse_operator_kind(std::string_view s) {
    if (s == "sign") return OperatorKind::sign;
    if (s == "stop") return OperatorKind::stop;
    if (s == "static") return OperatorKind::static_map;
    throw ConfigError("feedback kind must be sign, stop or static");
}

inline Solver parse_solver(std::string_view s) {
    if (s == "rk4_fixed" || s == "rk4") return Solver::rk4_fixed;
    if (s == "euler_fixed" || s == "euler") return Solver::euler_fixed;
    throw ConfigError("solver must be rk4_fixed or euler_fixed");
}

inline json to_json(const StateSpace& sys) {
    return json{{"A", detail::matrix_to(sys.A)}, {"B", detail::vector_to(sys.B)}, {"C", detail::vector_to(sys.C)}};
}

inline StateSpace state_space_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    for (const char* k : {"A", "B", "C"})
        if (!j.contains(k)) throw ConfigError(std::string("missing key '") + k + "'");
    return StateSpace(detail::matrix_from(j["A"]), detail::vector_from(j["B"], "B"), detail::vector_from(j["C"], "C"));
}

inline json to_json(const FeedbackSpec& f) {
    json j{{"kind", to_string(f.kind)}, {"gamma", f.gamma}, {"h", f.h}, {"c", f.c}};
    j["xi0"] = f.xi0 ? json(*f.xi0) : json(nullptr);
    if (!f.table.empty()) {
        json t = json::array();
        for (const auto& p : f.table) t.push_back(json::array({p.y, p.xi}));
        j["table"] = t;
    }
    return j;
}

inline FeedbackSpec feedback_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("feedback must be an object");
    FeedbackSpec f;
    const auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) throw ConfigError("feedback.kind must be a string");
    f.kind = parse_operator_kind(kind->get<std::string>());
    f.gamma = detail::get_number_or(j, "gamma", f.kind == OperatorKind::stop ? 0.0 : 1.0);
    f.h = detail::get_number_or(j, "h", f.kind == OperatorKind::static_map ? 0.0 : 1.0);
    f.c = detail::get_number_or(j, "c", 1.0);
    if (j.contains("xi0") && !j["xi0"].is_null()) f.xi0 = detail::get_number(j, "xi0");
    if (j.contains("table")) {
        const auto& t = j["table"];
        if (!t.is_array()) throw ConfigError("feedback.table must be an array of [y, xi] pairs");
        for (const auto& p : t) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ConfigError("feedback.table must be an array of [y, xi] pairs");
            f.table.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }
    try {
        validate(f);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("feedback: ") + e.what());
    }
    return f;
}

inline json to_json(const Scenario& sc) {
    json j = to_json(sc.sys);
    j["id"] = sc.id;
    j["feedback"] = to_json(sc.feedback);
    j["x0"] = detail::vector_to(sc.x0);
    j["t_end"] = sc.t_end;
    j["dt"] = sc.dt;
    j["solver"] = to_string(sc.solver);
    j["blowup_bound"] = sc.blowup_bound;
    j["deadband"] = sc.deadband;
    j["stick_resolution"] = sc.stick_resolution;
    j["tail_fraction"] = sc.tail_fraction;
    j["cycle_floor"] = sc.cycle_floor;
    j["cycle_state"] = sc.cycle_state;
    j["seed"] = sc.seed;
    if (sc.target_set)
        j["target_set"] = json{{"lo", sc.target_set->lo}, {"hi", sc.target_set->hi}, {"tol", sc.target_set->tol}};
    else
        j["target_set"] = nullptr;
    return j;
}

/**
 * Parses a scenario document. Syntax, type and missing-key problems raise
 * ConfigError; well-formed documents describing an inconsistent model
 * raise InvalidModel.
 */
inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    if (!j.contains("feedback")) throw ConfigError("missing key 'feedback'");
    Scenario sc;
    sc.sys = state_space_from_json(j);
    sc.feedback = feedback_from_json(j["feedback"]);
    if (j.contains("id")) {
        if (!j["id"].is_string()) throw ConfigError("id must be a string");
        sc.id = j["id"].get<std::string>();
    }
    sc.x0 = j.contains("x0") ? detail::vector_from(j["x0"], "x0") : Vector::Zero(sc.sys.order());
    sc.t_end = detail::get_number_or(j, "t_end", sc.t_end);
    sc.dt = detail::get_number_or(j, "dt", sc.dt);
    if (j.contains("solver")) {
        if (!j["solver"].is_string()) throw ConfigError("solver must be a string");
        sc.solver = parse_solver(j["solver"].get<std::string>());
    }
    sc.blowup_bound = detail::get_number_or(j, "blowup_bound", sc.blowup_bound);
    sc.deadband = detail::get_number_or(j, "deadband", sc.deadband);
    if (j.contains("stick_resolution")) {
        if (!j["stick_resolution"].is_boolean()) throw ConfigError("stick_resolution must be a boolean");
        sc.stick_resolution = j["stick_resolution"].get<bool>();
    }
    sc.tail_fraction = detail::get_number_or(j, "tail_fraction", sc.tail_fraction);
    sc.cycle_floor = detail::get_number_or(j, "cycle_floor", sc.cycle_floor);
    if (sc.sys.order() == 1) sc.cycle_state = 0;
    if (j.contains("cycle_state")) {
        if (!j["cycle_state"].is_number_integer()) throw ConfigError("cycle_state must be an integer");
        sc.cycle_state = j["cycle_state"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ConfigError("seed must be a non-negative integer");
        if (!j["seed"].is_number_unsigned() && j["seed"].get<std::int64_t>() < 0)
            throw ConfigError("seed must be a non-negative integer");
        sc.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("target_set") && !j["target_set"].is_null()) {
        const auto& t = j["target_set"];
        if (!t.is_object()) throw ConfigError("target_set must be an object");
        sc.target_set = InvariantSet{detail::get_number(t, "lo"), detail::get_number(t, "hi"),
                                     detail::get_number_or(t, "tol", 1e-3)};
    }
    try {
        sc.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

inline Scenario parse_scenario(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has the wrong shape: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

/// Canonical text used for hashing: sorted keys, no whitespace.
inline std::string canonical_text(const Scenario& sc) { return to_json(sc).dump(); }

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string scenario_hash(const Scenario& sc) {
    static constexpr char digits[] = "0123456789abcdef";
    std::uint64_t h = fnv1a(canonical_text(sc));
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    return out;
}

struct RunManifest {
    std::string command;
    std::string scenario_hash;
    std::uint64_t seed = 0;
    std::string solver;
    double dt = 0.0;
    double t_end = 0.0;
    std::string tool_version{kToolVersion};
    std::vector<std::string> outputs;
    double wall_clock_seconds = 0.0;
    json scenario;
};

inline json to_json(const RunManifest& m) {
    return json{{"command", m.command},
                {"scenario_hash", m.scenario_hash},
                {"seed", m.seed},
                {"solver", {{"name", m.solver}, {"dt", m.dt}, {"t_end", m.t_end}}},
                {"tool_version", m.tool_version},
                {"outputs", m.outputs},
                {"wall_clock_seconds", m.wall_clock_seconds},
                {"scenario", m.scenario}};
}

inline RunManifest make_manifest(std::string command, const Scenario& sc) {
    RunManifest m;
    m.command = std::move(command);
    m.scenario_hash = scenario_hash(sc);
    m.seed = sc.seed;
    m.solver = to_string(sc.solver);
    m.dt = sc.dt;
    m.t_end = sc.t_end;
    m.scenario = to_json(sc);
    return m;
}

/// Scenario embedded in a manifest, for re-running it.
inline Scenario scenario_from_manifest(const json& manifest) {
    if (!manifest.is_object() || !manifest.contains("scenario")) throw ConfigError("manifest has no scenario");
    return scenario_from_json(manifest["scenario"]);
}

}  // namespace hystab
