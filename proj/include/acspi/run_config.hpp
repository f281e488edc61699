#pragma once

// Strict JSON run configuration.  Unknown keys are rejected so a typo in a
// config file fails loudly instead of silently falling back to a default.

#include <complex>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acspi/errors.hpp"
#include "acspi/models.hpp"
#include "acspi/params.hpp"
#include "acspi/quadrature.hpp"

namespace acspi {

struct RunConfig {
    double hbar = 1.0;
    double mass = 1.0;
    double omega0 = 1.0;

    std::string potential_type;         // "harmonic" | "double_well" | "polynomial"
    double Q0 = 0.0;                    // double_well only
    std::vector<double> poly_coeffs;    // polynomial only, ascending powers of Q
    double S = 0.0;                     // drive amplitude, 0 disables the drive
    double drive_omega = 0.0;           // required when S != 0

    Complex alpha0{0.0, 0.0};

    int n_re = 0;
    int n_im = 0;
    double s_re = 1.0;
    double s_im = 1.0;
    Complex grid_center{0.0, 0.0};

    double t_total = 0.0;
    int n_steps = 0;
    int K = 6;
    double norm_floor = 0.5;
    int norm_check_every = 16;

    int oracle_dim = 200;

    std::string out_path;               // empty: stdout
    int stride = 1;

    PhysicalParams physical() const { return PhysicalParams(hbar, mass, omega0); }
};

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& j, const std::string& ctx,
                                    const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw config_error(ctx + ": missing required key '" + key + "'");
    return *it;
}

inline void expect_object(const nlohmann::json& j, const std::string& ctx,
                          std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw config_error(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw config_error(ctx + ": unknown key '" + it.key() + "'");
    }
}

inline double number_at(const nlohmann::json& j, const std::string& ctx, const char* key,
                        std::optional<double> fallback = std::nullopt) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (fallback) return *fallback;
        throw config_error(ctx + ": missing required key '" + key + "'");
    }
    if (!it->is_number())
        throw config_error(ctx + "." + key + ": expected a number");
    return it->get<double>();
}

inline int integer_at(const nlohmann::json& j, const std::string& ctx, const char* key,
                      std::optional<int> fallback = std::nullopt) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (fallback) return *fallback;
        throw config_error(ctx + ": missing required key '" + key + "'");
    }
    if (!it->is_number_integer())
        throw config_error(ctx + "." + key + ": expected an integer");
    return it->get<int>();
}

inline std::string string_at(const nlohmann::json& j, const std::string& ctx,
                             const char* key) {
    const auto& v = member(j, ctx, key);
    if (!v.is_string())
        throw config_error(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline void require_range_i(int v, int lo, int hi, const std::string& what) {
    if (v < lo || v > hi)
        throw config_error(what + " must be in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "], got " + std::to_string(v));
}

inline void require_positive(double v, const std::string& what) {
    if (!(v > 0.0))
        throw config_error(what + " must be positive, got " + std::to_string(v));
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& root) {
    using detail::expect_object;
    using detail::integer_at;
    using detail::member;
    using detail::number_at;
    using detail::string_at;

    expect_object(root, "config",
                  {"physical", "potential", "initial", "grid", "stepping", "oracle",
                   "output"});

    RunConfig cfg;

    if (root.contains("physical")) {
        const auto& j = root.at("physical");
        expect_object(j, "physical", {"hbar", "mass", "omega0"});
        cfg.hbar = number_at(j, "physical", "hbar", 1.0);
        cfg.mass = number_at(j, "physical", "mass", 1.0);
        cfg.omega0 = number_at(j, "physical", "omega0", 1.0);
        detail::require_positive(cfg.hbar, "physical.hbar");
        detail::require_positive(cfg.mass, "physical.mass");
        detail::require_positive(cfg.omega0, "physical.omega0");
    }

    {
        const auto& j = member(root, "config", "potential");
        expect_object(j, "potential", {"type", "Q0", "S", "omega", "coefficients"});
        cfg.potential_type = string_at(j, "potential", "type");
        if (cfg.potential_type != "harmonic" && cfg.potential_type != "double_well" &&
            cfg.potential_type != "polynomial")
            throw config_error("potential.type: expected 'harmonic', 'double_well' or "
                               "'polynomial', got '" + cfg.potential_type + "'");

        if (cfg.potential_type == "double_well") {
            cfg.Q0 = number_at(j, "potential", "Q0");
            detail::require_positive(cfg.Q0, "potential.Q0");
        } else if (j.contains("Q0")) {
            throw config_error("potential.Q0 only applies to type 'double_well'");
        }

        if (cfg.potential_type == "polynomial") {
            const auto& c = member(j, "potential", "coefficients");
            if (!c.is_array() || c.empty())
                throw config_error("potential.coefficients: expected a non-empty array");
            for (const auto& v : c) {
                if (!v.is_number())
                    throw config_error("potential.coefficients: entries must be numbers");
                cfg.poly_coeffs.push_back(v.get<double>());
            }
        } else if (j.contains("coefficients")) {
            throw config_error("potential.coefficients only applies to type 'polynomial'");
        }

        cfg.S = number_at(j, "potential", "S", 0.0);
        if (cfg.S != 0.0) {
            cfg.drive_omega = number_at(j, "potential", "omega");
            detail::require_positive(cfg.drive_omega, "potential.omega");
        } else {
            cfg.drive_omega = number_at(j, "potential", "omega", 0.0);
        }
    }

    {
        const auto& j = member(root, "config", "initial");
        expect_object(j, "initial", {"alpha0_re", "alpha0_im"});
        cfg.alpha0 = Complex(number_at(j, "initial", "alpha0_re"),
                             number_at(j, "initial", "alpha0_im", 0.0));
    }

    {
        const auto& j = member(root, "config", "grid");
        expect_object(j, "grid", {"n_re", "n_im", "s_re", "s_im", "center_re", "center_im"});
        cfg.n_re = integer_at(j, "grid", "n_re");
        cfg.n_im = integer_at(j, "grid", "n_im");
        detail::require_range_i(cfg.n_re, 1, 256, "grid.n_re");
        detail::require_range_i(cfg.n_im, 1, 256, "grid.n_im");
        cfg.s_re = number_at(j, "grid", "s_re", 1.0);
        cfg.s_im = number_at(j, "grid", "s_im", 1.0);
        detail::require_positive(cfg.s_re, "grid.s_re");
        detail::require_positive(cfg.s_im, "grid.s_im");
        cfg.grid_center = Complex(number_at(j, "grid", "center_re", 0.0),
                                  number_at(j, "grid", "center_im", 0.0));
    }

    {
        const auto& j = member(root, "config", "stepping");
        expect_object(j, "stepping",
                      {"t_total", "n_steps", "K", "norm_floor", "norm_check_every"});
        cfg.t_total = number_at(j, "stepping", "t_total");
        detail::require_positive(cfg.t_total, "stepping.t_total");
        cfg.n_steps = integer_at(j, "stepping", "n_steps");
        detail::require_range_i(cfg.n_steps, 1, 1 << 28, "stepping.n_steps");
        cfg.K = integer_at(j, "stepping", "K", 6);
        detail::require_range_i(cfg.K, 1, 16, "stepping.K");
        cfg.norm_floor = number_at(j, "stepping", "norm_floor", 0.5);
        if (!(cfg.norm_floor >= 0.0 && cfg.norm_floor < 1.0))
            throw config_error("stepping.norm_floor must be in [0, 1)");
        cfg.norm_check_every = integer_at(j, "stepping", "norm_check_every", 16);
        detail::require_range_i(cfg.norm_check_every, 1, 1 << 20,
                                "stepping.norm_check_every");
    }

    if (root.contains("oracle")) {
        const auto& j = root.at("oracle");
        expect_object(j, "oracle", {"dim"});
        cfg.oracle_dim = integer_at(j, "oracle", "dim", 200);
        detail::require_range_i(cfg.oracle_dim, 2, 4096, "oracle.dim");
    }

    if (root.contains("output")) {
        const auto& j = root.at("output");
        expect_object(j, "output", {"path", "stride"});
        if (j.contains("path")) {
            const auto& p = j.at("path");
            if (!p.is_string())
                throw config_error("output.path: expected a string");
            cfg.out_path = p.get<std::string>();
        }
        cfg.stride = integer_at(j, "output", "stride", 1);
        detail::require_range_i(cfg.stride, 1, 1 << 28, "output.stride");
    }

    return cfg;
}

inline RunConfig load_run_config(std::istream& in) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(root);
}

inline RunConfig load_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    return load_run_config(in);
}

// Potential described by the config, in the model types the engine consumes.
inline PotentialSpec make_potential(const RunConfig& cfg) {
    const PhysicalParams params = cfg.physical();
    if (cfg.potential_type == "harmonic") {
        PotentialSpec spec = harmonic(params);
        return polynomial_potential(spec.static_part, cfg.S, cfg.drive_omega);
    }
    if (cfg.potential_type == "double_well")
        return double_well(params, cfg.Q0, cfg.S, cfg.drive_omega);
    PositionPolynomial v = PositionPolynomial::zero();
    for (std::size_t k = 0; k < cfg.poly_coeffs.size(); ++k)
        v += PositionPolynomial::monomial(static_cast<int>(k), cfg.poly_coeffs[k]);
    return polynomial_potential(v, cfg.S, cfg.drive_omega);
}

inline std::shared_ptr<const QuadratureGrid> make_run_grid(const RunConfig& cfg) {
    return std::make_shared<const QuadratureGrid>(
        product_grid(cfg.n_re, cfg.n_im, cfg.s_re, cfg.s_im, cfg.grid_center));
}

}  // namespace acspi
