#pragma once

// Run configuration: one JSON document per run, covering the model
// parameters, the geometry recipe, the incident wave, and per-task options.
// Parsing is strict about shapes but fills defaults for omitted sections, and
// emit -> parse round-trips exactly.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimerscat/errors.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/incident.hpp"
#include "dimerscat/materials.hpp"
#include "dimerscat/solver.hpp"

namespace dimerscat {

using Json = nlohmann::json;

namespace detail {

inline Complex complex_from_json(const Json& j, const char* what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return Complex(j.at(0).get<double>(), j.at(1).get<double>());
    throw ConfigError(std::string(what) + ": expected a number or [re, im]");
}

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Mat3C tensor_from_json(const Json& j, const char* what) {
    if (j.is_object() && j.contains("iso"))
        return isotropic_tensor(complex_from_json(j.at("iso"), what));
    if (j.is_array() && j.size() == 3) {
        Mat3C m;
        for (int r = 0; r < 3; ++r) {
            const Json& row = j.at(r);
            if (!row.is_array() || row.size() != 3)
                throw ConfigError(std::string(what) + ": expected 3x3 array of [re, im]");
            for (int c = 0; c < 3; ++c) m(r, c) = complex_from_json(row.at(c), what);
        }
        return m;
    }
    throw ConfigError(std::string(what) + ": expected {\"iso\": c} or a 3x3 complex array");
}

inline Json tensor_to_json(const Mat3C& m) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 3; ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline Vec3R vec3_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(what) + ": expected [x, y, z]");
    return Vec3R(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

inline Json vec3_to_json(const Vec3R& v) { return Json::array({v.x(), v.y(), v.z()}); }

} // namespace detail

enum class GeometryKind { lattice, random, file };

struct GeometryConfig {
    GeometryKind kind = GeometryKind::lattice;
    std::uint64_t seed = 1;
    std::optional<std::size_t> count_override;
    std::optional<Vec3R> orientation = Vec3R::UnitZ(); // absent -> random axes (random kind)
    std::string path; // input file for kind == file
    int max_attempts = 100000;
};

struct IncidentConfig {
    double theta = 0.0; // polar angle of the propagation direction, radians
    double phi = 0.0;   // azimuthal angle, radians
    Vec3R polarization = Vec3R::UnitX();

    Vec3R direction() const {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)};
    }
};

struct SolverConfig {
    SolveMethod method = SolveMethod::dense;
    double tol = 1e-10;
    int max_iter = 500;
    std::size_t unknown_cap = default_unknown_cap;
};

struct RunConfig {
    ModelParams model;
    std::optional<double> resonance_lambda; // when set, k is derived from it
    PolarizationTensors tensors;
    GeometryConfig geometry;
    IncidentConfig incident;
    SolverConfig solver;
    int n_theta = 16;
    int n_phi = 32;
    std::vector<double> sweep_a_values;
    bool dump_matrix = false;
    double validation_tol = 1e-9;
    std::string output_dir = "out";

    IncidentWave incident_wave() const {
        IncidentWave w;
        w.theta = incident.direction();
        w.p = incident.polarization;
        w.k = model.k;
        w.validate();
        return w;
    }
};

inline Json to_json(const RunConfig& cfg) {
    Json j;
    Json& m = j["model"];
    m["a"] = cfg.model.a;
    m["h"] = cfg.model.h;
    m["t1"] = cfg.model.t1;
    m["t2"] = cfg.model.t2;
    m["alpha0"] = cfg.model.alpha0;
    m["beta0"] = cfg.model.beta0;
    if (cfg.resonance_lambda)
        m["resonance"] = Json{{"lambda_n0", *cfg.resonance_lambda}};
    else
        m["k"] = cfg.model.k;
    m["eta0"] = detail::complex_to_json(cfg.model.eta0);
    m["eta2"] = detail::complex_to_json(cfg.model.eta2);
    m["c0"] = cfg.model.c0;
    m["d0"] = cfg.model.d0;
    m["sign_c"] = cfg.model.sign_c;
    m["sign_d"] = cfg.model.sign_d;
    m["eps0"] = cfg.model.eps0;
    m["mu0"] = cfg.model.mu0;
    Json& tens = m["tensors"];
    tens["P011"] = detail::tensor_to_json(cfg.tensors.P011);
    tens["P012"] = detail::tensor_to_json(cfg.tensors.P012);
    tens["P021"] = detail::tensor_to_json(cfg.tensors.P021);
    tens["P022"] = detail::tensor_to_json(cfg.tensors.P022);

    Json& g = j["geometry"];
    g["kind"] = cfg.geometry.kind == GeometryKind::lattice ? "lattice"
                : cfg.geometry.kind == GeometryKind::random ? "random"
                                                            : "file";
    g["seed"] = cfg.geometry.seed;
    if (cfg.geometry.count_override) g["count_override"] = *cfg.geometry.count_override;
    if (cfg.geometry.orientation) g["orientation"] = detail::vec3_to_json(*cfg.geometry.orientation);
    if (!cfg.geometry.path.empty()) g["path"] = cfg.geometry.path;
    g["max_attempts"] = cfg.geometry.max_attempts;

    Json& inc = j["incident"];
    inc["theta"] = cfg.incident.theta;
    inc["phi"] = cfg.incident.phi;
    inc["polarization"] = detail::vec3_to_json(cfg.incident.polarization);

    Json& s = j["solver"];
    s["method"] = to_string(cfg.solver.method);
    s["tol"] = cfg.solver.tol;
    s["max_iter"] = cfg.solver.max_iter;
    s["unknown_cap"] = cfg.solver.unknown_cap;

    j["farfield"] = Json{{"n_theta", cfg.n_theta}, {"n_phi", cfg.n_phi}};
    if (!cfg.sweep_a_values.empty()) j["sweep"] = Json{{"a_values", cfg.sweep_a_values}};
    j["dump_matrix"] = cfg.dump_matrix;
    j["validation_tol"] = cfg.validation_tol;
    j["output_dir"] = cfg.output_dir;
    return j;
}

inline RunConfig config_from_json(const Json& j) {
    RunConfig cfg;
    try {
        if (!j.contains("model")) throw ConfigError("missing \"model\" section");
        const Json& m = j.at("model");
        cfg.model.a = m.at("a").get<double>();
        cfg.model.h = m.at("h").get<double>();
        cfg.model.t1 = m.at("t1").get<double>();
        cfg.model.t2 = m.at("t2").get<double>();
        cfg.model.alpha0 = m.value("alpha0", 1.0);
        cfg.model.beta0 = m.value("beta0", 1.0);
        cfg.model.eta0 = detail::complex_from_json(m.value("eta0", Json(1.0)), "eta0");
        cfg.model.eta2 = detail::complex_from_json(m.value("eta2", Json(1.0)), "eta2");
        cfg.model.c0 = m.value("c0", 1.0);
        cfg.model.d0 = m.value("d0", 1.0);
        cfg.model.sign_c = m.value("sign_c", 1);
        cfg.model.sign_d = m.value("sign_d", 1);
        cfg.model.eps0 = m.value("eps0", 1.0);
        cfg.model.mu0 = m.value("mu0", 1.0);
        if (cfg.model.sign_c != 1 && cfg.model.sign_c != -1)
            throw ConfigError("sign_c must be +1 or -1");
        if (cfg.model.sign_d != 1 && cfg.model.sign_d != -1)
            throw ConfigError("sign_d must be +1 or -1");

        if (m.contains("tensors")) {
            const Json& tens = m.at("tensors");
            if (tens.contains("P011")) cfg.tensors.P011 = detail::tensor_from_json(tens.at("P011"), "P011");
            if (tens.contains("P012")) cfg.tensors.P012 = detail::tensor_from_json(tens.at("P012"), "P012");
            if (tens.contains("P021")) cfg.tensors.P021 = detail::tensor_from_json(tens.at("P021"), "P021");
            if (tens.contains("P022")) cfg.tensors.P022 = detail::tensor_from_json(tens.at("P022"), "P022");
        }

        if (m.contains("resonance")) {
            if (m.contains("k")) throw ConfigError("specify either \"k\" or \"resonance\", not both");
            cfg.resonance_lambda = m.at("resonance").at("lambda_n0").get<double>();
            cfg.model.k = wavenumber_from_resonance(*cfg.resonance_lambda, cfg.model);
        } else if (m.contains("k")) {
            cfg.model.k = m.at("k").get<double>();
        } else {
            throw ConfigError("model needs \"k\" or \"resonance\": {\"lambda_n0\": ...}");
        }

        if (j.contains("geometry")) {
            const Json& g = j.at("geometry");
            const std::string kind = g.value("kind", "lattice");
            if (kind == "lattice") cfg.geometry.kind = GeometryKind::lattice;
            else if (kind == "random") cfg.geometry.kind = GeometryKind::random;
            else if (kind == "file") cfg.geometry.kind = GeometryKind::file;
            else throw ConfigError("geometry.kind must be lattice, random or file");
            cfg.geometry.seed = g.value("seed", std::uint64_t{1});
            if (g.contains("count_override"))
                cfg.geometry.count_override = g.at("count_override").get<std::size_t>();
            if (g.contains("orientation"))
                cfg.geometry.orientation = detail::vec3_from_json(g.at("orientation"), "orientation");
            else if (cfg.geometry.kind == GeometryKind::random)
                cfg.geometry.orientation.reset(); // random per-dimer axes
            cfg.geometry.path = g.value("path", std::string{});
            cfg.geometry.max_attempts = g.value("max_attempts", 100000);
            if (cfg.geometry.kind == GeometryKind::file) {
                if (cfg.geometry.path.empty())
                    throw ConfigError("geometry.kind == file requires geometry.path");
                if (!std::filesystem::exists(cfg.geometry.path))
                    throw ConfigError("geometry file does not exist: " + cfg.geometry.path);
            }
        }

        if (j.contains("incident")) {
            const Json& inc = j.at("incident");
            cfg.incident.theta = inc.value("theta", 0.0);
            cfg.incident.phi = inc.value("phi", 0.0);
            if (inc.contains("polarization"))
                cfg.incident.polarization =
                    detail::vec3_from_json(inc.at("polarization"), "polarization");
            try {
                cfg.incident_wave();
            } catch (const NonTransversePolarization& e) {
                throw ConfigError(std::string("incident wave: ") + e.what());
            }
        }

        if (j.contains("solver")) {
            const Json& s = j.at("solver");
            const std::string method = s.value("method", "dense");
            if (method == "dense") cfg.solver.method = SolveMethod::dense;
            else if (method == "jacobi" || method == "block-jacobi")
                cfg.solver.method = SolveMethod::block_jacobi;
            else if (method == "gauss-seidel" || method == "block-gauss-seidel")
                cfg.solver.method = SolveMethod::block_gauss_seidel;
            else throw ConfigError("solver.method must be dense, jacobi or gauss-seidel");
            cfg.solver.tol = s.value("tol", 1e-10);
            cfg.solver.max_iter = s.value("max_iter", 500);
            cfg.solver.unknown_cap = s.value("unknown_cap", default_unknown_cap);
        }

        if (j.contains("farfield")) {
            cfg.n_theta = j.at("farfield").value("n_theta", 16);
            cfg.n_phi = j.at("farfield").value("n_phi", 32);
        }
        if (j.contains("sweep"))
            cfg.sweep_a_values = j.at("sweep").at("a_values").get<std::vector<double>>();
        cfg.dump_matrix = j.value("dump_matrix", false);
        cfg.validation_tol = j.value("validation_tol", 1e-9);
        cfg.output_dir = j.value("output_dir", std::string{"out"});
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    Json j;
    try {
        is >> j;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

/// FNV-1a over the canonical serialized config; recorded in every CSV header.
inline std::string config_hash(const RunConfig& cfg) {
    const std::string dump = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Builds the cluster a config describes.
inline ClusterGeometry build_geometry(const RunConfig& cfg) {
    const ScalingParams s = cfg.model.scaling();
    switch (cfg.geometry.kind) {
        case GeometryKind::lattice:
            return make_lattice_cluster(s, cfg.geometry.orientation.value_or(Vec3R::UnitZ()),
                                        cfg.geometry.count_override);
        case GeometryKind::random:
            return make_random_cluster(s, cfg.geometry.seed, cfg.geometry.max_attempts,
                                       cfg.geometry.orientation, cfg.geometry.count_override);
        case GeometryKind::file:
            return load_geometry(cfg.geometry.path);
    }
    throw ConfigError("unknown geometry kind");
}

} // namespace dimerscat
