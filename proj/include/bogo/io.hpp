#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bogo/bogoliubov.hpp"
#include "bogo/error.hpp"
#include "bogo/fock/oracle.hpp"
#include "bogo/lattice.hpp"
#include "bogo/scattering.hpp"

namespace bogo::io {

using json = nlohmann::ordered_json;

/// Round-trip decimal form (%.17g).
inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

using Cell = std::variant<long long, double, std::string>;

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != header_.size()) throw InvalidArgument("CsvTable: row width does not match header");
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            os << format_number(v);
                        else
                            os << v;
                    },
                    row[i]);
            }
            os << '\n';
        }
        return os.str();
    }

    std::size_t size() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline CsvTable kernel_csv(const KernelTable& kt) {
    CsvTable t({"norm_sq", "p_abs", "eta", "tau", "nu"});
    for (const auto& r : kt.shell_rows()) t.add_row({static_cast<long long>(r.norm_sq), r.p_abs, r.eta, r.tau, r.nu});
    return t;
}

inline CsvTable coefficients_csv(const std::vector<ModeCoefficients>& rows) {
    CsvTable t({"norm_sq", "eps", "mu_sq", "theta_sq_A", "theta_sq_B", "nu", "pairing_A", "pairing_B"});
    for (const auto& c : rows)
        t.add_row({static_cast<long long>(c.mode.norm_sq()), c.eps, c.mu_sq, c.theta_sq_A, c.theta_sq_B, c.nu,
                   c.pairing_A, c.pairing_B});
    return t;
}

inline CsvTable comparison_csv(const std::vector<fock::ComparisonRow>& rows) {
    CsvTable t({"norm_sq", "oracle_occ", "model_occ_A", "model_occ_B", "oracle_pair", "model_pair_A", "model_pair_B"});
    for (const auto& r : rows)
        t.add_row({static_cast<long long>(r.norm_sq), r.oracle_occ, r.model_occ_A, r.model_occ_B, r.oracle_pair,
                   r.model_pair_A, r.model_pair_B});
    return t;
}

inline json to_json(const SumResult& s) {
    return json{{"value", s.value}, {"tail_bound", s.tail_bound}, {"cutoff_norm_sq", s.cutoff_norm_sq}};
}

inline json to_json(const fock::VariantVerdict& v) {
    return json{{"winner", v.winner},
                {"residual_A", v.residual_A},
                {"residual_B", v.residual_B},
                {"ratio", v.ratio},
                {"oracle_thermal", v.oracle_thermal},
                {"model_thermal_A", v.model_thermal_A},
                {"model_thermal_B", v.model_thermal_B},
                {"oracle_total", v.oracle_total},
                {"model_total_A", v.model_total_A},
                {"model_total_B", v.model_total_B}};
}

inline json to_json(const fock::AdjudicationReport& r) {
    return json{{"a", r.a},
                {"beta", r.beta},
                {"cap", r.cap},
                {"shells", r.shells},
                {"basis_size", r.basis_size},
                {"unitarity_defect", r.unitarity_defect},
                {"theta", to_json(r.theta)},
                {"pairing", to_json(r.pairing)}};
}

inline json to_json(const fock::PartitionCheck& p) {
    return json{{"brute", p.brute},
                {"product_lower", p.product_lower},
                {"product_upper", p.product_upper},
                {"product_full", p.product_full},
                {"excess", p.excess},
                {"gap", p.gap},
                {"mu", p.mu},
                {"sandwich_holds", p.sandwich_holds()},
                {"gap_holds", p.gap_holds()}};
}

inline json to_json(const fock::ToyReport& r) {
    json modes = json::array();
    for (std::size_t k = 0; k < r.gibbs.modes.size(); ++k) {
        const auto& n = r.gibbs.modes[k].n;
        modes.push_back(json{{"n", {n[0], n[1], n[2]}},
                             {"occupation", r.gibbs.occupations[k]},
                             {"pairing", r.gibbs.pairings[k]}});
    }
    return json{{"N", r.N},
                {"cap", r.cap},
                {"a_model", r.a_model},
                {"basis_size", r.basis_size},
                {"max_block", r.max_block},
                {"beta", r.gibbs.beta},
                {"partition", r.gibbs.partition},
                {"ground_energy", r.gibbs.ground_energy},
                {"n_plus", r.gibbs.n_plus},
                {"n_plus_sq", r.gibbs.n_plus_sq},
                {"max_offdiagonal", r.max_offdiagonal},
                {"modes", modes}};
}

} // namespace bogo::io
