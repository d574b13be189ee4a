#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bogo/bogoliubov.hpp"
#include "bogo/error.hpp"
#include "bogo/potential.hpp"

namespace bogo::config {

using json = nlohmann::ordered_json;

/// Built-in defaults. There is no default potential.
inline json defaults() {
    return json::parse(R"({
  "potential": null,
  "a_override": null,
  "N": 100,
  "beta": 2.0,
  "cutoff_norm_sq": 100,
  "ell": 0.495,
  "tol": 1e-12,
  "variant": "both",
  "scatter": {"r_max_factor": 20.0},
  "oracle": {
    "a": 0.05,
    "shells": [1],
    "cap": 12,
    "size_limit": 200000,
    "rotation_beta": 1000.0,
    "toy": {"enabled": false, "N": 20, "cap": 6, "coupling": 0.1}
  }
})");
}

namespace detail {

inline void merge_into(json& base, const json& patch, const std::string& path) {
    if (!patch.is_object()) throw InvalidArgument("config: expected an object at '" + path + "'");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) throw InvalidArgument("config: unknown key '" + key + "'");
        json& slot = base[it.key()];
        // Free-form leaves: the potential object and nullable values.
        if (key == "potential" || slot.is_null() || !slot.is_object())
            slot = it.value();
        else
            merge_into(slot, it.value(), key);
    }
}

} // namespace detail

/// Recursive merge; keys absent from `base` are rejected.
inline void merge(json& base, const json& patch) { detail::merge_into(base, patch, ""); }

/// Applies "dotted.key=value". The value is read as JSON when it parses,
/// otherwise as a string.
inline void apply_set(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    std::vector<std::string> parts;
    for (std::size_t start = 0;;) {
        const auto dot = key.find('.', start);
        parts.push_back(key.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (parts.back().empty()) throw InvalidArgument("--set: malformed key '" + key + "'");
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    json patch = value;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
    // Keys below "potential" are free-form; merge them into the existing object.
    if (key.rfind("potential.", 0) == 0 && cfg["potential"].is_object()) {
        json pot = cfg["potential"];
        pot.merge_patch(patch["potential"]);
        cfg["potential"] = pot;
        return;
    }
    merge(cfg, patch);
}

inline RadialPotential parse_potential(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("potential: expected an object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    auto num = [&](const char* k) {
        if (!j.contains(k) || !j.at(k).is_number()) throw InvalidArgument(std::string("potential: missing number '") + k + "'");
        return j.at(k).get<double>();
    };
    if (kind == "zero") return RadialPotential::zero();
    if (kind == "soft_sphere") return RadialPotential::soft_sphere(num("v0"), num("radius"));
    if (kind == "gaussian_truncated")
        return RadialPotential::gaussian_truncated(num("v0"), num("width"), num("support_radius"));
    if (kind == "tabulated")
        return RadialPotential::tabulated(j.at("grid").get<std::vector<double>>(),
                                          j.at("values").get<std::vector<double>>());
    throw InvalidArgument("potential: unknown kind '" + kind + "'");
}

struct ToyConfig {
    bool enabled = false;
    int N = 20;
    int cap = 6;
    double coupling = 0.1;
};

struct OracleConfig {
    double a = 0.05;
    std::vector<int> shells{1};
    int cap = 12;
    std::size_t size_limit = 200000;
    double rotation_beta = 1000.0;
    ToyConfig toy;
};

struct RunConfig {
    std::optional<RadialPotential> potential;
    std::optional<double> a_override;
    int N = 100;
    double beta = 2.0;
    int cutoff_norm_sq = 100;
    double ell = 0.495;
    double tol = 1e-12;
    std::vector<Variant> variants{Variant::A_paper, Variant::B_derived};
    double r_max_factor = 20.0;
    OracleConfig oracle;
};

inline std::vector<Variant> parse_variants(const std::string& s) {
    if (s == "A" || s == "A_paper") return {Variant::A_paper};
    if (s == "B" || s == "B_derived") return {Variant::B_derived};
    if (s == "both") return {Variant::A_paper, Variant::B_derived};
    throw InvalidArgument("variant must be A, B or both, got '" + s + "'");
}

inline RunConfig from_json(const json& j) {
    RunConfig c;
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string("config: ") + name + " must be > 0");
        return x;
    };
    auto positive_int = [](int x, const char* name) {
        if (x < 1) throw InvalidArgument(std::string("config: ") + name + " must be >= 1");
        return x;
    };
    try {
        if (!j.at("potential").is_null()) c.potential = parse_potential(j.at("potential"));
        if (!j.at("a_override").is_null()) {
            c.a_override = j.at("a_override").get<double>();
            if (!(*c.a_override >= 0.0)) throw InvalidArgument("config: a_override must be >= 0");
        }
        c.N = positive_int(j.at("N").get<int>(), "N");
        c.beta = positive(j.at("beta").get<double>(), "beta");
        c.cutoff_norm_sq = positive_int(j.at("cutoff_norm_sq").get<int>(), "cutoff_norm_sq");
        c.ell = positive(j.at("ell").get<double>(), "ell");
        c.tol = positive(j.at("tol").get<double>(), "tol");
        c.variants = parse_variants(j.at("variant").get<std::string>());
        const json& s = j.at("scatter");
        c.r_max_factor = positive(s.at("r_max_factor").get<double>(), "scatter.r_max_factor");
        const json& o = j.at("oracle");
        c.oracle.a = o.at("a").get<double>();
        if (!(c.oracle.a >= 0.0)) throw InvalidArgument("config: oracle.a must be >= 0");
        c.oracle.shells = o.at("shells").get<std::vector<int>>();
        if (c.oracle.shells.empty()) throw InvalidArgument("config: oracle.shells must not be empty");
        for (int s2 : c.oracle.shells) positive_int(s2, "oracle.shells entries");
        c.oracle.cap = positive_int(o.at("cap").get<int>(), "oracle.cap");
        c.oracle.size_limit = o.at("size_limit").get<std::size_t>();
        c.oracle.rotation_beta = positive(o.at("rotation_beta").get<double>(), "oracle.rotation_beta");
        const json& t = o.at("toy");
        c.oracle.toy.enabled = t.at("enabled").get<bool>();
        c.oracle.toy.N = positive_int(t.at("N").get<int>(), "oracle.toy.N");
        c.oracle.toy.cap = positive_int(t.at("cap").get<int>(), "oracle.toy.cap");
        c.oracle.toy.coupling = t.at("coupling").get<double>();
        if (!(c.oracle.toy.coupling >= 0.0)) throw InvalidArgument("config: oracle.toy.coupling must be >= 0");
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return c;
}

} // namespace bogo::config
