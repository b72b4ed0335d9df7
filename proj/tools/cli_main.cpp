// Command line frontend for the nclp shared library. Subcommands: norm,
// verify, suite, moments, rosenthal, budget. Reports are JSON (canonical) or
// a flattened CSV projection; identical config and seed give byte-identical
// output. Exit codes: 0 pass, 1 invariant failure, 2 usage/parse error.

#include "nclp/nclp.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

struct CliError {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{2, "cannot open input file: " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_file(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw CliError{2, "parse error in " + path + ": " + e.what()};
    }
}

std::string take_report(char* report) {
    std::string out = report ? report : "";
    nclp_string_free(report);
    return out;
}

void flatten_csv(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_csv(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& v : j) flatten_csv(v, prefix + "[" + std::to_string(i++) + "]", out);
    } else {
        out << prefix << "," << j.dump() << "\n";
    }
}

void emit(const std::string& report_json, const std::string& format, const std::string& output) {
    std::string text;
    if (format == "csv") {
        std::ostringstream ss;
        flatten_csv(Json::parse(report_json), "", ss);
        text = ss.str();
    } else {
        text = Json::parse(report_json).dump(2);
        text += "\n";
    }
    if (output.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(output);
        if (!out) throw CliError{2, "cannot write output file: " + output};
        out << text;
    }
}

int status_to_exit(nclp_status st) {
    if (st == NCLP_OK) return 0;
    if (st == NCLP_ERR_PARSE) return 2;
    if (st == NCLP_ERR_DOMAIN) return 2;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nclp: finite-dimensional noncommutative L_p norm toolkit"};
    app.require_subcommand(1);

    std::string output, format = "json";
    uint64_t seed = 0;
    app.add_option("--output", output, "write the report to a file instead of stdout");
    app.add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "root seed for all randomized computations");

    // ---- norm ----
    auto* norm = app.add_subcommand("norm", "evaluate a single norm");
    std::string n_input, n_density, n_spec, n_side = "row";
    std::vector<std::string> n_inputs;
    double n_p = 2.0, n_u = 4.0, n_v = 4.0, n_theta = 0.5, n_tol = 1e-11;
    bool n_p_inf = false;
    bool k_schatten = false, k_statelp = false, k_fact = false, k_cond = false, k_oh = false,
         k_mixed = false, k_rc = false, k_couple = false;
    norm->add_flag("--schatten", k_schatten, "Schatten p-norm");
    norm->add_flag("--state-lp", k_statelp, "weighted L_p norm for a state density");
    norm->add_flag("--factorization", k_fact, "asymmetric factorization norm");
    norm->add_flag("--conditional", k_cond, "conditional L_p norm from a spec file");
    norm->add_flag("--oh", k_oh, "OH-valued sup norm of a family");
    norm->add_flag("--mixed-theta", k_mixed, "mixed-theta sup norm of a family");
    norm->add_flag("--rc-square", k_rc, "row/column square function norm");
    norm->add_option("-p,--p", n_p, "exponent p");
    norm->add_flag("--p-inf", n_p_inf, "use p = infinity");
    norm->add_option("-u,--u", n_u, "exponent u");
    norm->add_option("-v,--v", n_v, "exponent v");
    norm->add_option("--theta", n_theta, "interpolation parameter");
    norm->add_option("--side", n_side, "row or column")->check(CLI::IsMember({"row", "column"}));
    std::string n_placement;
    norm->add_option("--placement", n_placement, "density placement for --state-lp")
        ->check(CLI::IsMember({"symmetric", "left", "right", "both-quarter"}));
    norm->add_option("--input", n_input, "matrix JSON file");
    norm->add_option("--inputs", n_inputs, "matrix JSON files (families)");
    norm->add_option("--density", n_density, "density JSON file");
    std::string n_couple;
    norm->add_option("--spec", n_spec, "NormSpec JSON file (conditional norms)");
    norm->add_option("--couple", n_couple, "CoupleSpec JSON file (closed-form interpolation)");
    norm->add_flag("--couple-closed", k_couple, "closed-form interpolation norm of a couple");
    norm->add_option("--tol", n_tol, "solver tolerance override");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run one named verification check");
    std::string v_name;
    verify->add_option("check", v_name,
                       "one of: closed-forms, harmonic-measure, endpoint-interpolation, "
                       "graph-tensor, quotient-sum, sign-symmetry, poisson-clt-moments, "
                       "rosenthal-mc, oh-graph, transference")
        ->required();

    // ---- suite ----
    auto* suite = app.add_subcommand("suite", "run a verification suite");
    std::string s_name;
    int s_jobs = 1;
    suite->add_option("name", s_name, "closed-forms | interpolation | graphs | copies | all")
        ->required();
    suite->add_option("--jobs", s_jobs, "parallel check execution limit");

    // ---- moments ----
    auto* moments = app.add_subcommand("moments", "finite-s moment vs direct simulation");
    int m_m = 4;
    long m_s = 5, m_dim = 2;
    std::vector<double> m_gammas;
    moments->add_option("--m", m_m, "moment order");
    moments->add_option("--s", m_s, "tensor copies in the finite-s state");
    moments->add_option("--dim", m_dim, "base matrix dimension");
    moments->add_option("--gammas", m_gammas, "diagonal weight entries");

    // ---- rosenthal ----
    auto* rosenthal = app.add_subcommand("rosenthal", "classical Rosenthal Monte Carlo");
    std::string r_dist = "gaussian";
    int r_n = 16;
    double r_p = 2.0, r_q = 1.0;
    long r_samples = 100000;
    rosenthal->add_option("--dist", r_dist, "gaussian | exponential | two-point")
        ->check(CLI::IsMember({"gaussian", "exponential", "two-point"}));
    rosenthal->add_option("--n", r_n, "number of independent variables");
    rosenthal->add_option("--p", r_p, "outer exponent");
    rosenthal->add_option("--q", r_q, "inner exponent");
    rosenthal->add_option("--samples", r_samples, "Monte Carlo samples (>= 10^4)");

    // ---- strip ----
    auto* strip = app.add_subcommand("strip", "dump a boundary quadrature grid as CSV");
    double st_theta = 0.5;
    int st_grid = 1536;
    strip->add_option("--theta", st_theta, "interior point of the strip");
    strip->add_option("--grid", st_grid, "nodes per boundary side");

    // ---- budget ----
    auto* budget = app.add_subcommand("budget", "dimension budget tracker");
    long b_m = 2;
    double b_alpha = 1.0, b_beta = 1.0, b_gamma = 1.0;
    budget->add_option("--m", b_m, "target dimension m");
    budget->add_option("--alpha", b_alpha, "exponent alpha_p");
    budget->add_option("--beta", b_beta, "exponent beta_p");
    budget->add_option("--gamma", b_gamma, "OH-embedding parameter gamma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        char* report = nullptr;
        nclp_status st = NCLP_OK;
        int passed = 1;

        if (*norm) {
            Json cfg;
            cfg["seed"] = seed;
            const double p = n_p_inf ? INFINITY : n_p;
            auto exp_json = [](double e) { return std::isinf(e) ? Json("inf") : Json(e); };
            if (k_schatten) cfg["kind"] = "schatten";
            else if (k_statelp) cfg["kind"] = "state-lp";
            else if (k_fact) cfg["kind"] = "factorization";
            else if (k_cond) cfg["kind"] = "conditional";
            else if (k_oh) cfg["kind"] = "oh";
            else if (k_mixed) cfg["kind"] = "mixed-theta";
            else if (k_rc) cfg["kind"] = "rc-square";
            else if (k_couple) cfg["kind"] = "couple-closed";
            else throw CliError{2, "norm: choose one of --schatten/--state-lp/--factorization/"
                                   "--conditional/--oh/--mixed-theta/--rc-square/--couple-closed"};
            cfg["p"] = exp_json(p);
            cfg["u"] = exp_json(n_u);
            cfg["v"] = exp_json(n_v);
            cfg["theta"] = n_theta;
            cfg["side"] = n_side;
            if (!n_input.empty()) cfg["input"] = parse_file(n_input);
            if (!n_inputs.empty()) {
                Json arr = Json::array();
                for (const auto& f : n_inputs) arr.push_back(parse_file(f));
                cfg["inputs"] = arr;
            }
            if (!n_density.empty()) cfg["density"] = parse_file(n_density);
            if (!n_spec.empty()) cfg["spec"] = parse_file(n_spec);
            if (!n_couple.empty()) cfg["couple"] = parse_file(n_couple);
            if (!n_placement.empty()) cfg["placement"] = n_placement;
            cfg["tol"] = n_tol;
            st = nclp_cmd_norm(cfg.dump().c_str(), &report);
        } else if (*verify) {
            st = nclp_cmd_verify(v_name.c_str(), seed, &report, &passed);
        } else if (*suite) {
            st = nclp_cmd_suite(s_name.c_str(), seed, s_jobs, &report, &passed);
        } else if (*moments) {
            Json cfg{{"m", m_m}, {"s", m_s}, {"dim", m_dim}, {"seed", seed}};
            if (!m_gammas.empty()) cfg["gammas"] = m_gammas;
            st = nclp_cmd_moments(cfg.dump().c_str(), &report, &passed);
        } else if (*rosenthal) {
            Json cfg{{"dist", r_dist}, {"n", r_n},       {"p", r_p},
                     {"q", r_q},       {"samples", r_samples}, {"seed", seed}};
            st = nclp_cmd_rosenthal(cfg.dump().c_str(), &report);
        } else if (*strip) {
            Json cfg{{"theta", st_theta}, {"grid", st_grid}};
            char* csv = nullptr;
            const nclp_status sst = nclp_cmd_strip(cfg.dump().c_str(), &csv);
            if (sst != NCLP_OK) {
                std::fprintf(stderr, "error: %s\n", nclp_last_error());
                return status_to_exit(sst);
            }
            const std::string text = take_report(csv);
            if (output.empty()) {
                std::fputs(text.c_str(), stdout);
            } else {
                std::ofstream out(output);
                out << text;
            }
            return 0;
        } else if (*budget) {
            Json cfg{{"m", b_m}, {"alpha_p", b_alpha}, {"beta_p", b_beta}, {"gamma", b_gamma}};
            st = nclp_cmd_budget(cfg.dump().c_str(), &report);
        }

        if (st != NCLP_OK) {
            std::fprintf(stderr, "error: %s\n", nclp_last_error());
            return status_to_exit(st);
        }
        emit(take_report(report), format, output);
        return passed ? 0 : 1;
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
