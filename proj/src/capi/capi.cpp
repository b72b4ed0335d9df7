#include "nclp/nclp.h"

#include "core/copies.hpp"
#include "core/interp.hpp"
#include "core/json_io.hpp"
#include "core/rng.hpp"
#include "core/spaces.hpp"
#include "core/verify.hpp"

#include <cstdio>
#include <cstring>
#include <string>

using namespace nclp;

struct nclp_matrix {
    Mat m;
};
struct nclp_density {
    Density d;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = (char*)std::malloc(s.size() + 1);
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Maps C++ failures onto status codes: domain_error -> DOMAIN, json parse
// errors -> PARSE, the rest -> INTERNAL.
template <typename F>
nclp_status guarded(F&& f) {
    try {
        f();
        return NCLP_OK;
    } catch (const domain_error& e) {
        g_last_error = e.what();
        return NCLP_ERR_DOMAIN;
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return NCLP_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NCLP_ERR_INTERNAL;
    }
}

Json parse(const char* text) {
    if (!text) throw nlohmann::json::parse_error::create(101, 0, "null config", nullptr);
    return Json::parse(text);
}

} // namespace

extern "C" {

const char* nclp_last_error(void) { return g_last_error.c_str(); }

void nclp_string_free(char* s) { std::free(s); }

nclp_status nclp_matrix_create(long rows, long cols, const double* re, const double* im,
                               nclp_matrix** out) {
    return guarded([&] {
        if (rows < 0 || cols < 0 || !re || !out) throw domain_error("matrix_create: bad arguments");
        Mat m(rows, cols);
        for (long i = 0; i < rows; ++i)
            for (long j = 0; j < cols; ++j)
                m(i, j) = Complex(re[i * cols + j], im ? im[i * cols + j] : 0.0);
        check_finite(m, "matrix_create");
        *out = new nclp_matrix{std::move(m)};
    });
}

nclp_status nclp_matrix_from_json(const char* json, nclp_matrix** out) {
    return guarded([&] {
        if (!out) throw domain_error("matrix_from_json: null output");
        *out = new nclp_matrix{matrix_from_json(parse(json))};
    });
}

nclp_status nclp_matrix_to_json(const nclp_matrix* m, char** json_out) {
    return guarded([&] {
        if (!m || !json_out) throw domain_error("matrix_to_json: bad arguments");
        *json_out = dup_string(matrix_to_json(m->m).dump());
    });
}

void nclp_matrix_free(nclp_matrix* m) { delete m; }

nclp_status nclp_density_create(const nclp_matrix* m, double mass, nclp_density** out) {
    return guarded([&] {
        if (!m || !out) throw domain_error("density_create: bad arguments");
        *out = new nclp_density{Density(m->m, mass)};
    });
}

nclp_status nclp_density_from_json(const char* json, nclp_density** out) {
    return guarded([&] {
        if (!out) throw domain_error("density_from_json: null output");
        *out = new nclp_density{density_from_json(parse(json))};
    });
}

void nclp_density_free(nclp_density* d) { delete d; }

nclp_status nclp_schatten_norm(const nclp_matrix* x, double p, double* out) {
    return guarded([&] {
        if (!x || !out) throw domain_error("schatten_norm: bad arguments");
        *out = schatten_norm(x->m, p);
    });
}

nclp_status nclp_state_lp_norm(const nclp_matrix* x, const nclp_density* d, double p,
                               double* out) {
    return guarded([&] {
        if (!x || !d || !out) throw domain_error("state_lp_norm: bad arguments");
        *out = state_lp_norm(x->m, d->d, p);
    });
}

nclp_status nclp_factorization_norm(const nclp_matrix* x, double u, double v, uint64_t seed,
                                    char** report_json) {
    return guarded([&] {
        if (!x || !report_json) throw domain_error("factorization_norm: bad arguments");
        SolveOptions opts;
        opts.seed = seed;
        *report_json = dup_string(report_to_json(factorization_norm(x->m, u, v, opts)).dump());
    });
}

nclp_status nclp_conditional_norm(const nclp_matrix* x, const char* norm_spec_json,
                                  uint64_t seed, char** report_json) {
    return guarded([&] {
        if (!x || !report_json) throw domain_error("conditional_norm: bad arguments");
        const NormSpec spec = norm_spec_from_json(parse(norm_spec_json));
        SolveOptions opts;
        opts.seed = seed;
        *report_json = dup_string(report_to_json(conditional_lp_norm(x->m, spec, opts)).dump());
    });
}

nclp_status nclp_cmd_norm(const char* config_json, char** report_json) {
    return guarded([&] {
        if (!report_json) throw domain_error("cmd_norm: null output");
        const Json cfg = parse(config_json);
        const std::string kind = cfg.at("kind").get<std::string>();
        SolveOptions opts;
        opts.seed = cfg.value("seed", 0ULL);
        if (cfg.contains("tol")) opts.tol = cfg.at("tol").get<double>();

        Json rep{{"kind", kind}};
        auto input = [&] { return matrix_from_json(cfg.at("input")); };
        auto density = [&] { return density_from_json(cfg.at("density")); };
        auto inputs = [&] {
            std::vector<Mat> xs;
            for (const auto& j : cfg.at("inputs")) xs.push_back(matrix_from_json(j));
            return xs;
        };

        if (kind == "schatten") {
            rep["value"] = schatten_norm(input(), exponent_from_json(cfg.at("p")));
        } else if (kind == "state-lp") {
            const double p = exponent_from_json(cfg.at("p"));
            if (cfg.contains("placement")) {
                const NormSpec ps = norm_spec_from_json(Json{{"placement", cfg.at("placement")}});
                rep["value"] = placed_lp_norm(input(), density(), p, ps.placement);
            } else {
                rep["value"] = state_lp_norm(input(), density(), p);
            }
        } else if (kind == "factorization") {
            const auto r = factorization_norm(input(), exponent_from_json(cfg.at("u")),
                                              exponent_from_json(cfg.at("v")), opts);
            rep["report"] = report_to_json(r);
            rep["value"] = r.value;
        } else if (kind == "conditional") {
            const NormSpec spec = norm_spec_from_json(cfg.at("spec"));
            const auto r = conditional_lp_norm(input(), spec, opts);
            rep["report"] = report_to_json(r);
            rep["value"] = r.value;
        } else if (kind == "oh") {
            std::optional<Density> d;
            if (cfg.contains("density")) d = density();
            const auto r = oh_valued_norm(inputs(), d ? &*d : nullptr, opts);
            rep["report"] = report_to_json(r);
            rep["value"] = r.value;
        } else if (kind == "mixed-theta") {
            const auto r = mixed_theta_norm(inputs(), cfg.at("theta").get<double>(),
                                            exponent_from_json(cfg.at("p")), opts);
            rep["report"] = report_to_json(r);
            rep["value"] = r.value;
        } else if (kind == "rc-square") {
            const std::string side = cfg.value("side", "row");
            rep["value"] = rc_square_norm(inputs(), density(), exponent_from_json(cfg.at("p")),
                                          side == "row" ? Side::Row : Side::Column);
        } else if (kind == "couple-closed") {
            const CoupleSpec couple = couple_spec_from_json(cfg.at("couple"));
            rep["value"] = couple_norm_closed(input(), couple, density());
        } else {
            throw nlohmann::json::other_error::create(501, "unknown norm kind: " + kind, nullptr);
        }
        *report_json = dup_string(rep.dump());
    });
}

namespace {

void require_known_check(const std::string& name) {
    for (const auto& info : check_catalog())
        if (info.name == name) return;
    throw nlohmann::json::other_error::create(501, "unknown check: " + name, nullptr);
}

void require_known_suite(const std::string& name) {
    if (name == "all") return;
    for (const auto& info : check_catalog())
        if (info.suite == name) return;
    throw nlohmann::json::other_error::create(501, "unknown suite: " + name, nullptr);
}

} // namespace

nclp_status nclp_cmd_verify(const char* check_name, uint64_t seed, char** report_json,
                            int* passed) {
    return guarded([&] {
        if (!check_name || !report_json || !passed) throw domain_error("cmd_verify: bad arguments");
        require_known_check(check_name);
        CheckResult res = run_check(check_name, seed);
        Json rep{{"check", res.name}, {"seed", seed}, {"passed", res.passed},
                 {"detail", res.detail}};
        *report_json = dup_string(rep.dump());
        *passed = res.passed ? 1 : 0;
    });
}

nclp_status nclp_cmd_suite(const char* suite_name, uint64_t seed, int jobs, char** report_json,
                           int* all_passed) {
    return guarded([&] {
        if (!suite_name || !report_json || !all_passed)
            throw domain_error("cmd_suite: bad arguments");
        require_known_suite(suite_name);
        const SuiteResult res = run_suite(suite_name, seed, jobs);
        Json checks = Json::array();
        for (const auto& r : res.results)
            checks.push_back(Json{{"check", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        Json rep{{"suite", res.suite}, {"seed", seed}, {"all_passed", res.all_passed},
                 {"checks", checks}};
        *report_json = dup_string(rep.dump());
        *all_passed = res.all_passed ? 1 : 0;
    });
}

nclp_status nclp_cmd_moments(const char* config_json, char** report_json, int* passed) {
    return guarded([&] {
        if (!report_json || !passed) throw domain_error("cmd_moments: bad arguments");
        const Json cfg = parse(config_json);
        const int m = cfg.value("m", 4);
        const long s = cfg.value("s", 5L);
        const long dim = cfg.value("dim", 2L);
        const uint64_t seed = cfg.value("seed", 0ULL);
        Vec gammas;
        if (cfg.contains("gammas")) {
            const auto& g = cfg.at("gammas");
            gammas.resize((Eigen::Index)g.size());
            for (size_t i = 0; i < g.size(); ++i) gammas[(Eigen::Index)i] = g.at(i).get<double>();
        } else {
            gammas = Vec::Constant(dim, 1.0);
        }
        const Density weight = DiagonalWeight(gammas).weight_density();
        std::vector<Mat> xs;
        for (int i = 0; i < m; ++i) {
            Mat x = random_matrix(dim, dim, splitmix64(seed ^ (1234 + i)));
            xs.push_back(x / std::max(1.0, operator_norm(x)));
        }
        const Complex comb = clt_moment_finite_s(xs, weight, s);
        const Complex sim = clt_simulated_moment(xs, weight, s);
        const Complex lim = clt_moment_limit(xs, weight);
        const double err = std::abs(comb - sim);
        const bool ok = err <= 1e-10;
        Json rep{{"m", m},
                 {"s", s},
                 {"dim", dim},
                 {"seed", seed},
                 {"finite_s", Json{{"re", comb.real()}, {"im", comb.imag()}}},
                 {"simulated", Json{{"re", sim.real()}, {"im", sim.imag()}}},
                 {"limit", Json{{"re", lim.real()}, {"im", lim.imag()}}},
                 {"abs_error", err},
                 {"passed", ok}};
        *report_json = dup_string(rep.dump());
        *passed = ok ? 1 : 0;
    });
}

nclp_status nclp_cmd_rosenthal(const char* config_json, char** report_json) {
    return guarded([&] {
        if (!report_json) throw domain_error("cmd_rosenthal: null output");
        const Json cfg = parse(config_json);
        const std::string dist = cfg.value("dist", "gaussian");
        McDistribution d;
        if (dist == "gaussian") d = McDistribution::Gaussian;
        else if (dist == "exponential") d = McDistribution::Exponential;
        else if (dist == "two-point") d = McDistribution::TwoPoint;
        else throw nlohmann::json::other_error::create(501, "unknown distribution: " + dist, nullptr);
        const auto rep = rosenthal_classical_mc(d, cfg.value("n", 16), cfg.value("p", 2.0),
                                                cfg.value("q", 1.0), cfg.value("samples", 100000L),
                                                cfg.value("seed", 0ULL));
        Json out{{"dist", dist},   {"n", cfg.value("n", 16)}, {"lhs", rep.lhs},
                 {"rhs", rep.rhs}, {"ratio", rep.ratio},      {"ci", Json{rep.ci_lo, rep.ci_hi}},
                 {"samples", rep.samples}, {"seed", rep.seed}};
        *report_json = dup_string(out.dump());
    });
}

nclp_status nclp_cmd_strip(const char* config_json, char** csv_out) {
    return guarded([&] {
        if (!csv_out) throw domain_error("cmd_strip: null output");
        const Json cfg = parse(config_json);
        const StripMeasure mu =
            strip_measure(cfg.value("theta", 0.5), cfg.value("grid", 1536));
        std::string text = "# side,t,weight\n";
        char buf[96];
        for (size_t i = 0; i < mu.t0.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "0,%.17g,%.17g\n", mu.t0[i], mu.w0[i]);
            text += buf;
        }
        for (size_t i = 0; i < mu.t1.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "1,%.17g,%.17g\n", mu.t1[i], mu.w1[i]);
            text += buf;
        }
        *csv_out = dup_string(text);
    });
}

nclp_status nclp_cmd_budget(const char* config_json, char** report_json) {
    return guarded([&] {
        if (!report_json) throw domain_error("cmd_budget: null output");
        const Json cfg = parse(config_json);
        const auto b = dimension_budget(cfg.value("m", 2L), cfg.value("alpha_p", 1.0),
                                        cfg.value("beta_p", 1.0), cfg.value("gamma", 1.0));
        Json out{{"m", b.m},
                 {"n", b.n},
                 {"k_n", b.k_n},
                 {"log10_w", b.log10_w},
                 {"log10_M", b.log10_M},
                 {"log10_paper_form", b.log10_paper_form}};
        *report_json = dup_string(out.dump());
    });
}

} // extern "C"
