// bogo: command-line driver for the scattering, coefficient, density-matrix
// and Fock-space oracle computations.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bogo/bogoliubov.hpp"
#include "bogo/config.hpp"
#include "bogo/density.hpp"
#include "bogo/error.hpp"
#include "bogo/fock/oracle.hpp"
#include "bogo/io.hpp"
#include "bogo/scattering.hpp"

#ifndef BOGO_VERSION
#define BOGO_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using bogo::io::json;

namespace {

enum Exit { ok = 0, usage = 2, guard = 3, solver = 4 };

struct Session {
    std::string command;
    json config;
    bogo::config::RunConfig run;
    fs::path out;
    std::vector<std::string> files;

    json provenance() const {
        return json{{"tool", "bogo"}, {"version", BOGO_VERSION}, {"command", command}, {"config", config}};
    }

    void emit_json(const std::string& name, json body) {
        body["provenance"] = provenance();
        bogo::io::write_json((out / name).string(), body);
        files.push_back(name);
    }

    void emit_csv(const std::string& name, const bogo::io::CsvTable& t) {
        bogo::io::write_text((out / name).string(), t.str());
        files.push_back(name);
    }

    const bogo::RadialPotential& potential() const {
        if (!run.potential) throw bogo::InvalidArgument("no potential given (set 'potential' in the config)");
        return *run.potential;
    }
};

double r_max_for(const Session& s, const bogo::RadialPotential& V) {
    const double R = V.support_radius();
    return s.run.r_max_factor * (R > 0 ? R : 1.0);
}

// Scattering length: the override when given, else the ODE route.
double resolve_a(const Session& s) {
    if (s.run.a_override) return *s.run.a_override;
    const auto& V = s.potential();
    return bogo::solve_scattering(V, r_max_for(s, V), s.run.tol).a;
}

void cmd_scatter(Session& s) {
    const auto& V = s.potential();
    const auto sol = bogo::solve_scattering(V, r_max_for(s, V), s.run.tol);
    const double a_fun = bogo::energy_functional(sol);
    const auto kt = bogo::build_kernel_table(V, sol.a, s.run.N, s.run.ell, s.run.cutoff_norm_sq, s.run.tol);
    const auto& ns = *kt.neumann;

    double max_eta = 0.0, max_tau = 0.0, max_id = 0.0;
    for (std::size_t i = 0; i < kt.modes.size(); ++i) {
        const double p2 = kt.modes[i].p_sq();
        max_eta = std::max(max_eta, std::abs(kt.eta[i]) * p2);
        max_tau = std::max(max_tau, std::abs(kt.tau[i]) * p2 * p2);
    }
    for (const auto& sh : *bogo::enumerate_shells(s.run.cutoff_norm_sq)) {
        const auto& m = sh.members.front();
        std::size_t i = 0;
        while (kt.modes[i] != m) ++i;
        const auto id = bogo::kernel_identity(ns, s.run.N, m, kt.eta[i]);
        max_id = std::max(max_id, std::abs(id.lhs - id.rhs));
    }

    json j;
    j["potential"] = s.config["potential"];
    j["a_ode"] = sol.a;
    j["a_functional"] = a_fun;
    j["r_max"] = sol.r_max;
    j["neumann"] = json{{"R", ns.R},
                        {"lambda", ns.lambda},
                        {"lambda_R3_over_3", ns.lambda * ns.R * ns.R * ns.R / 3.0},
                        {"boundary_residual", ns.boundary_residual}};
    j["kernel"] = json{{"N", kt.N},
                       {"ell", kt.ell},
                       {"cutoff_norm_sq", s.run.cutoff_norm_sq},
                       {"modes", kt.modes.size()},
                       {"max_eta_p2", max_eta},
                       {"max_tau_p4", max_tau},
                       {"max_identity_residual", max_id}};
    s.emit_json("scatter_summary.json", j);
    s.emit_csv("kernel_table.csv", bogo::io::kernel_csv(kt));
}

void cmd_coeffs(Session& s) {
    const double a = resolve_a(s);
    const bogo::ThermalConfig base{a, s.run.beta, bogo::Variant::B_derived};
    s.emit_csv("coefficients.csv", bogo::io::coefficients_csv(bogo::shell_coefficients(base, s.run.cutoff_norm_sq)));

    json j;
    j["a"] = a;
    j["beta"] = s.run.beta;
    j["cutoff_norm_sq"] = s.run.cutoff_norm_sq;
    json vs = json::object();
    for (auto v : s.run.variants) {
        const auto d = bogo::depletion_sums({a, s.run.beta, v}, s.run.cutoff_norm_sq);
        vs[bogo::variant_name(v)] = json{{"sum_mu_sq", bogo::io::to_json(d.sum_mu)},
                                         {"sum_theta_sq", bogo::io::to_json(d.sum_theta)},
                                         {"total", d.total()}};
    }
    j["variants"] = vs;
    s.emit_json("depletion.json", j);
}

void cmd_rho(Session& s) {
    const double a = resolve_a(s);
    json summary;
    summary["a"] = a;
    summary["N"] = s.run.N;
    summary["beta"] = s.run.beta;
    summary["cutoff_norm_sq"] = s.run.cutoff_norm_sq;
    json vs = json::object();
    std::vector<bogo::SecondOrderDM1> d1;
    std::vector<bogo::SecondOrderDM2> d2;
    for (auto v : s.run.variants) {
        const bogo::ThermalConfig cfg{a, s.run.beta, v};
        d1.push_back(bogo::build_rho1(cfg, s.run.N, s.run.cutoff_norm_sq));
        d2.push_back(bogo::build_rho2(cfg, s.run.N, s.run.cutoff_norm_sq));
        const std::string tag = v == bogo::Variant::A_paper ? "A" : "B";
        s.emit_json("dm1_" + tag + ".json", bogo::to_json(d1.back()));
        s.emit_json("dm2_" + tag + ".json", bogo::to_json(d2.back()));
        vs[bogo::variant_name(v)] = json{{"trace_dm1", d1.back().trace()},
                                         {"trace_dm2", d2.back().trace()},
                                         {"trace_dm1_equals_N", d1.back().trace() == s.run.N},
                                         {"trace_dm2_equals_N", d2.back().trace() == s.run.N},
                                         {"condensate_dm1", d1.back().condensate_weight},
                                         {"condensate_dm2", d2.back().w00},
                                         {"dm2_min_eigenvalue", bogo::dm2_min_eigenvalue(d2.back())}};
    }
    summary["variants"] = vs;
    if (d1.size() == 2)
        summary["distance_A_B"] =
            json{{"dm1", bogo::dm_trace_norm_diff(d1[0], d1[1])}, {"dm2", bogo::dm_trace_norm_diff(d2[0], d2[1])}};
    s.emit_json("rho_summary.json", summary);
}

json occupation_check(const Session& s) {
    namespace fk = bogo::fock;
    const auto& o = s.run.oracle;
    auto basis = std::make_shared<const fk::FockBasis>(fk::shell_modes(o.shells), o.cap,
                                                       fk::BasisOptions{o.size_limit, false});
    std::vector<double> eps;
    for (const auto& m : basis->modes()) eps.push_back(bogo::dispersion(m.p_sq(), o.a));
    const auto g = fk::gibbs(fk::build_D(basis, eps), s.run.beta);
    const auto joint = fk::capped_occupations(eps, s.run.beta, o.cap);
    double dev_joint = 0.0, dev_single = 0.0;
    json modes = json::array();
    for (std::size_t k = 0; k < eps.size(); ++k) {
        const double n = fk::expect(g, fk::mode_number(basis, basis->modes()[k]));
        const auto cf = fk::occupation_closed_form(eps[k], s.run.beta, o.cap);
        dev_joint = std::max(dev_joint, std::abs(n - joint[k]));
        dev_single = std::max(dev_single, std::abs(n - cf.capped));
        if (k == 0 || basis->modes()[k].norm_sq() != basis->modes()[k - 1].norm_sq())
            modes.push_back(json{{"norm_sq", basis->modes()[k].norm_sq()},
                                 {"gibbs", n},
                                 {"capped_joint", joint[k]},
                                 {"capped_single", cf.capped},
                                 {"uncapped", cf.uncapped}});
    }
    const auto pc = fk::partition_product_check(*basis, eps, s.run.beta);
    return json{{"basis_size", basis->size()},
                {"shells", modes},
                {"max_dev_joint_cap", dev_joint},
                {"max_dev_single_cap", dev_single},
                {"partition", bogo::io::to_json(pc)}};
}

json rotation_check(const Session& s) {
    namespace fk = bogo::fock;
    const auto& o = s.run.oracle;
    const double beta = o.rotation_beta;
    auto basis = std::make_shared<const fk::FockBasis>(fk::shell_modes(o.shells), o.cap,
                                                       fk::BasisOptions{o.size_limit, false});
    std::vector<double> nu, eps, pair_c;
    for (const auto& m : basis->modes()) {
        nu.push_back(bogo::nu_coefficient(m.p_sq(), o.a));
        eps.push_back(bogo::dispersion(m.p_sq(), o.a));
        if (-m < m) pair_c.push_back(nu.back());
    }
    const auto tail = fk::squeezing_truncation_bound(pair_c, o.cap);
    const auto num = fk::rotated_number_expectation(basis, nu, eps, beta);
    double expected_n = 0.0;
    for (double c : pair_c) expected_n += 2.0 * std::sinh(c) * std::sinh(c);
    const auto& p = basis->modes().front();
    const auto pair = fk::pairing_expectation(basis, nu, eps, beta, p);
    const double expected_pair = 0.5 * std::sinh(2.0 * nu[0]);
    const double nb = tail.number_bound + fk::rounding_allowance(o.cap, expected_n);
    const double pb = tail.pairing_bound + fk::rounding_allowance(o.cap, expected_pair);
    return json{{"beta", beta},
                {"number", json{{"oracle", num.oracle.value},
                                {"expected", expected_n},
                                {"bound", nb},
                                {"within_bound", std::abs(num.oracle.value - expected_n) <= nb}}},
                {"pairing", json{{"n", {p.n[0], p.n[1], p.n[2]}},
                                 {"oracle", pair.oracle.value},
                                 {"expected", expected_pair},
                                 {"bound", pb},
                                 {"within_bound", std::abs(pair.oracle.value - expected_pair) <= pb}}},
                {"unitarity_defect", num.oracle.unitarity_defect}};
}

void cmd_oracle(Session& s) {
    namespace fk = bogo::fock;
    const auto& o = s.run.oracle;
    const auto rep = fk::adjudicate_variants(o.a, s.run.beta, o.shells, o.cap, o.size_limit);
    s.emit_csv("oracle_comparison.csv", bogo::io::comparison_csv(rep.rows));
    json j;
    j["occupation"] = occupation_check(s);
    j["rotation_ground_state"] = rotation_check(s);
    j["adjudication"] = bogo::io::to_json(rep);
    s.emit_json("oracle_report.json", j);

    if (o.toy.enabled) {
        const auto V = s.potential().scaled(o.toy.coupling);
        const double a_model = resolve_a(s) * o.toy.coupling;
        const auto toy = fk::toy_gibbs_experiment(o.toy.N, V, o.shells, o.toy.cap, s.run.beta, a_model, o.size_limit);
        s.emit_csv("toy_comparison.csv", bogo::io::comparison_csv(toy.rows));
        s.emit_json("toy_report.json", bogo::io::to_json(toy));
    }
}

void write_error(const fs::path& out, const std::string& kind, int code, const std::string& msg) {
    const json j{{"status", code}, {"kind", kind}, {"message", msg}};
    std::cerr << "bogo: " << kind << ": " << msg << "\n";
    std::error_code ec;
    if (out.empty()) return;
    fs::create_directories(out, ec);
    if (ec) return;
    std::ofstream f(out / "error.json");
    if (f) f << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bogoliubov theory toolkit for the dilute Bose gas on the unit torus"};
    app.require_subcommand(1, 1);
    std::string config_path, output_dir = ".", variant;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "Override a config value, key=value (dotted keys; repeatable)");
    app.add_option("--output-dir", output_dir, "Directory for result files");
    app.add_option("--variant", variant, "Thermal convention")->check(CLI::IsMember({"A", "B", "both"}));
    for (const char* name : {"scatter", "coeffs", "rho", "oracle", "all"}) app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : Exit::usage;
    }

    Session s;
    s.command = app.get_subcommands().front()->get_name();
    s.out = output_dir;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        s.config = bogo::config::defaults();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            const json user = json::parse(f, nullptr, false);
            if (user.is_discarded()) throw bogo::InvalidArgument("cannot parse config file " + config_path);
            bogo::config::merge(s.config, user);
        }
        for (const auto& a : sets) bogo::config::apply_set(s.config, a);
        if (!variant.empty()) s.config["variant"] = variant;
        s.run = bogo::config::from_json(s.config);
        fs::create_directories(s.out);

        if (s.command == "scatter" || s.command == "all") cmd_scatter(s);
        if (s.command == "coeffs" || s.command == "all") cmd_coeffs(s);
        if (s.command == "rho" || s.command == "all") cmd_rho(s);
        if (s.command == "oracle" || s.command == "all") cmd_oracle(s);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json m;
        m["provenance"] = s.provenance();
        m["files"] = s.files;
        m["wall_time_s"] = wall;
        bogo::io::write_json((s.out / "manifest.json").string(), m);
    } catch (const bogo::InvalidArgument& e) {
        write_error(s.out, "usage", Exit::usage, e.what());
        return Exit::usage;
    } catch (const bogo::GuardError& e) {
        write_error(s.out, "guard", Exit::guard, e.what());
        return Exit::guard;
    } catch (const bogo::SolverError& e) {
        write_error(s.out, "solver", Exit::solver, e.what());
        return Exit::solver;
    } catch (const std::exception& e) {
        write_error(s.out, "solver", Exit::solver, e.what());
        return Exit::solver;
    }
    return Exit::ok;
}
