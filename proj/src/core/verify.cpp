#include "core/verify.hpp"

#include "core/copies.hpp"
#include "core/interp.hpp"
#include "core/rng.hpp"
#include "core/spaces.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace nclp {

namespace {

struct Row {
    std::string what;
    double got = 0.0;
    double want = 0.0;
    double err = 0.0;
    bool pass = false;
};

Json rows_to_json(const std::vector<Row>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back(Json{{"case", r.what}, {"got", r.got}, {"want", r.want},
                           {"err", r.err}, {"pass", r.pass}});
    return arr;
}

bool all_pass(const std::vector<Row>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return !rows.empty();
}

void push_abs(std::vector<Row>& rows, const std::string& what, double got, double want,
              double tol) {
    const double err = std::abs(got - want);
    rows.push_back({what, got, want, err, err <= tol});
}

void push_rel(std::vector<Row>& rows, const std::string& what, double got, double want,
              double tol) {
    const double err = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    rows.push_back({what, got, want, err, err <= tol});
}

void push_flag(std::vector<Row>& rows, const std::string& what, bool ok, double got = 0.0,
               double want = 0.0) {
    rows.push_back({what, got, want, 0.0, ok});
}

// -------------------------------------------------------------- criterion 1

CheckResult check_closed_forms(uint64_t seed) {
    std::vector<Row> rows;

    // Schatten vs an SVD-free oracle (eigenvalues of x*x).
    for (int t = 0; t < 4; ++t) {
        const Eigen::Index n = 3 + t % 3;
        const Mat x = random_matrix(n, n, splitmix64(seed ^ (11 + t)));
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(x.adjoint() * x));
        const Vec ev = es.eigenvalues().cwiseMax(0.0);
        for (double p : {1.0, 1.7, 2.0, 3.0, INF}) {
            double want;
            if (std::isinf(p)) want = std::sqrt(ev.maxCoeff());
            else {
                double acc = 0;
                for (Eigen::Index i = 0; i < ev.size(); ++i) acc += std::pow(ev[i], p / 2.0);
                want = std::pow(acc, 1.0 / p);
            }
            push_abs(rows, "schatten p=" + std::to_string(p) + " dim=" + std::to_string(n),
                     schatten_norm(x, p), want, 1e-12 * std::max(1.0, want));
        }
    }
    push_abs(rows, "schatten identity I_3 p=4", schatten_norm(identity(3), 4.0),
             std::pow(3.0, 0.25), 1e-12);
    {
        Mat d = Mat::Zero(2, 2);
        d(0, 0) = 3;
        d(1, 1) = 4;
        push_abs(rows, "schatten diag(3,4) p=2", schatten_norm(d, 2.0), 5.0, 1e-12);
    }

    // state_lp identities
    for (int t = 0; t < 3; ++t) {
        const Eigen::Index n = 2 + t;
        const Density d = random_state(n, splitmix64(seed ^ (31 + t)));
        for (double p : {1.0, 2.0, 3.5, INF})
            push_abs(rows, "state_lp unit element p=" + std::to_string(p),
                     state_lp_norm(identity(n), d, p), 1.0, 1e-10);
        const Mat x = random_matrix(n, n, splitmix64(seed ^ (41 + t)));
        const Mat h = d.power(0.5);
        const double want2 = std::sqrt(std::abs((h * x.adjoint() * h * x).trace().real()));
        push_abs(rows, "state_lp p=2 trace oracle", state_lp_norm(x, d, 2.0), want2,
                 1e-12 * std::max(1.0, want2));
        const Density uni(Mat(Mat::Identity(n, n)) / (double)n, 1.0);
        for (double p : {1.0, 2.5, 4.0})
            push_rel(rows, "state_lp uniform rescale p=" + std::to_string(p),
                     state_lp_norm(x, uni, p), std::pow((double)n, -1.0 / p) * schatten_norm(x, p),
                     1e-12);
    }

    // factorization on PSD inputs equals ||x||_{S_p}
    for (int t = 0; t < 3; ++t) {
        const Eigen::Index n = 2 + 2 * t;
        const Mat g = random_matrix(n, n, splitmix64(seed ^ (61 + t)));
        const Mat x = g * g.adjoint();
        for (auto [u, v] : std::vector<std::pair<double, double>>{{4, 4}, {2, INF}, {6, 3}}) {
            const double ip = inv(u) + inv(v);
            const double p = ip == 0 ? INF : 1.0 / ip;
            const auto rep = factorization_norm(x, u, v, {seed});
            const double want = schatten_norm(x, p);
            push_rel(rows, "factorization psd u=" + std::to_string(u) + " v=" + std::to_string(v),
                     rep.value, want, 1e-6);
            push_flag(rows, "factorization holder lower bound", rep.value >= want - 1e-8,
                      rep.value, want);
        }
    }
    {
        Mat e12 = Mat::Zero(2, 2);
        e12(0, 1) = 1;
        push_rel(rows, "factorization rank-one e12 (4,4)", factorization_norm(e12, 4, 4, {seed}).value,
                 1.0, 1e-6);
        push_rel(rows, "factorization identity (4,4)", factorization_norm(identity(4), 4, 4, {seed}).value,
                 2.0, 1e-6);
    }

    // conditional degenerate cases
    for (int t = 0; t < 2; ++t) {
        const Eigen::Index n = 3 + t;
        const Density d = random_positive_state(n, splitmix64(seed ^ (81 + t)));
        const Mat x = random_matrix(n, n, splitmix64(seed ^ (91 + t)));
        NormSpec s1;
        s1.p = 3.0;
        s1.u = INF;
        s1.v = INF;
        s1.density = d;
        push_rel(rows, "conditional (inf,inf) = state_lp", conditional_lp_norm(x, s1, {seed}).value,
                 state_lp_norm(x, d, 3.0), 1e-10);
        NormSpec s2;
        s2.p = INF;
        s2.u = 4.0;
        s2.v = 4.0;
        s2.density = d;
        s2.subalgebra = SubalgebraSpec::scalars();
        const Mat w = d.power(0.25);
        push_rel(rows, "conditional scalars closed form", conditional_lp_norm(x, s2, {seed}).value,
                 schatten_norm(w * x * w, 2.0), 1e-10);
    }

    return {"closed-forms", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 2

CheckResult check_harmonic_measure(uint64_t) {
    std::vector<Row> rows;
    for (int i = 1; i <= 9; ++i) {
        const double theta = 0.1 * i;
        const StripMeasure mu = strip_measure(theta, 1536);
        push_abs(rows, "mass side0 theta=" + std::to_string(theta), mu.mass0(), 1.0 - theta, 1e-8);
        push_abs(rows, "mass side1 theta=" + std::to_string(theta), mu.mass1(), theta, 1e-8);
    }
    const StripMeasure mu3 = strip_measure(1.0 / 3.0, 1536);
    const StripMeasure mu5 = strip_measure(0.5, 1536);
    const StripMeasure mu7 = strip_measure(0.7, 1536);
    const std::vector<Complex> exponents = {Complex(0, 0),    Complex(1, 0),  Complex(-1, 0),
                                            Complex(2, 0),    Complex(0, 1),  Complex(0, -1),
                                            Complex(1, 1),    Complex(0.5, -2)};
    int idx = 0;
    for (const Complex a : exponents) {
        const StripMeasure& mu = idx % 3 == 0 ? mu3 : (idx % 3 == 1 ? mu5 : mu7);
        ExpFunction f{{{Complex(1.0, 0.0), a}}};
        const Complex got = reproduce(f, mu);
        const Complex want = std::exp(a * mu.theta);
        push_abs(rows, "reproduce exp(a z), a=(" + std::to_string(a.real()) + "," +
                           std::to_string(a.imag()) + ")",
                 std::abs(got - want), 0.0, 1e-6);
        ++idx;
    }
    // f == 1 reproduces 1 and the linear limit (e^{eps z} - 1)/eps -> theta
    push_abs(rows, "reproduce constant", std::abs(reproduce(ExpFunction{{{1.0, 0.0}}}, mu5) - 1.0),
             0.0, 1e-10);
    const double eps = 1e-6;
    ExpFunction lin{{{Complex(1.0 / eps, 0), Complex(eps, 0)}, {Complex(-1.0 / eps, 0), Complex(0, 0)}}};
    push_abs(rows, "reproduce linear limit", std::abs(reproduce(lin, mu5) - 0.5), 0.0, 1e-5);
    return {"harmonic-measure", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 3

CheckResult check_endpoint_interpolation(uint64_t seed) {
    std::vector<Row> rows;
    int cfg = 0;
    for (double theta : {0.25, 0.5, 0.75}) {
        for (double p : {2.0, 4.0, INF}) {
            const Eigen::Index n = 2 + cfg % 2;
            const Density d = random_positive_state(n, splitmix64(seed ^ (700 + cfg)));
            const Mat x = random_matrix(n, n, splitmix64(seed ^ (800 + cfg)));
            const double iq = 0.5 - inv(p);

            // middle case: [L_p^c, L_p^r]_theta vs the conditional sup formula
            CoupleSpec mid{CoupleEndpoint::col_lp(p), CoupleEndpoint::row_lp(p), theta};
            const double closed = couple_norm_closed(x, mid, d);
            NormSpec spec;
            spec.p = p;
            spec.u = theta * iq == 0.0 ? INF : 1.0 / (theta * iq);
            spec.v = (1.0 - theta) * iq == 0.0 ? INF : 1.0 / ((1.0 - theta) * iq);
            spec.density = d;
            const auto opt = conditional_lp_norm(x, spec, {seed});
            push_rel(rows, "endpoint couple middle theta=" + std::to_string(theta) + " p=" + std::to_string(p),
                     closed, opt.value, 1e-3);
            push_flag(rows, "closed form dominates optimizer", closed >= opt.value * (1.0 - 1e-9),
                      closed, opt.value);

            // one-sided cases on a commuting pair (diagonal x and d)
            auto gen = seeded_stream(seed, "endpoint_interp/diag/" + std::to_string(cfg));
            std::uniform_real_distribution<double> un(0.4, 1.8);
            Vec dd(n), xx(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                dd[i] = un(gen);
                xx[i] = un(gen);
            }
            const Density ddiag(Mat(dd.cast<Complex>().asDiagonal()) / dd.sum(), 1.0);
            const Mat xdiag = xx.cast<Complex>().asDiagonal();
            CoupleSpec left{CoupleEndpoint::lp_state(p), CoupleEndpoint::row_lp(p), theta};
            NormSpec sl;
            sl.p = p;
            sl.u = spec.u;
            sl.v = INF;
            sl.density = ddiag;
            push_rel(rows, "endpoint couple row side theta=" + std::to_string(theta) + " p=" + std::to_string(p),
                     couple_norm_closed(xdiag, left, ddiag),
                     conditional_lp_norm(xdiag, sl, {seed}).value, 1e-3);
            CoupleSpec right{CoupleEndpoint::col_lp(p), CoupleEndpoint::lp_state(p), theta};
            NormSpec sr;
            sr.p = p;
            sr.u = INF;
            sr.v = spec.v;
            sr.density = ddiag;
            push_rel(rows, "endpoint couple col side theta=" + std::to_string(theta) + " p=" + std::to_string(p),
                     couple_norm_closed(xdiag, right, ddiag),
                     conditional_lp_norm(xdiag, sr, {seed}).value, 1e-3);
            ++cfg;
        }
    }
    return {"endpoint-interpolation", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 4

CheckResult check_graph_tensor(uint64_t seed) {
    std::vector<Row> rows;
    const std::vector<std::pair<Eigen::Index, Eigen::Index>> configs = {
        {2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}};
    for (size_t c = 0; c < configs.size(); ++c) {
        const auto [dim, m] = configs[c];
        auto gen = seeded_stream(seed, "graph_tensor/lambda/" + std::to_string(c));
        std::uniform_real_distribution<double> un(0.5, 2.0);
        Vec lambdas(dim);
        for (Eigen::Index i = 0; i < dim; ++i) lambdas[i] = un(gen);
        const auto rep = graph_tensor_check(lambdas, dim, m, 5, splitmix64(seed ^ (900 + c)));
        for (size_t s = 0; s < rep.ratios.size(); ++s)
            push_abs(rows,
                     "graph-weight ratio dim=" + std::to_string(dim) + " m=" + std::to_string(m) +
                         " sample=" + std::to_string(s),
                     rep.ratios[s], 1.0, 1e-6);
    }
    return {"graph-tensor", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 5

CheckResult check_quotient_sum(uint64_t seed) {
    std::vector<Row> rows;
    int converged = 0, tried = 0;
    for (int inst = 0; inst < 30 && converged < 20; ++inst) {
        ++tried;
        const Eigen::Index n = 2 + inst % 2;
        const double p = inst % 3 == 0 ? 1.0 : (inst % 3 == 1 ? 1.5 : 2.0);
        auto gen = seeded_stream(seed, "quotient/" + std::to_string(inst));
        std::uniform_real_distribution<double> un(0.5, 2.0);
        Vec gammas(n);
        for (Eigen::Index i = 0; i < n; ++i) gammas[i] = un(gen);
        const DiagonalWeight dw(gammas);
        std::array<Mat, 4> tuple;
        for (int i = 0; i < 4; ++i)
            tuple[i] = random_matrix(n, n, splitmix64(seed ^ (1000 + 17 * inst + i)));

        SolveOptions opts;
        opts.seed = splitmix64(seed ^ (2000 + inst));
        const auto quot = k_quotient_norm(tuple, dw, p, opts);
        const auto sum = k_sum_norm(k_tuple_image(tuple, dw), dw, p, opts);
        if (!(quot.converged && sum.converged)) continue;
        ++converged;
        push_rel(rows,
                 "quotient=sum inst=" + std::to_string(inst) + " p=" + std::to_string(p) +
                     " n=" + std::to_string(n),
                 quot.value, sum.value, 1e-4);
        push_flag(rows, "duality gap positive and small inst=" + std::to_string(inst),
                  quot.duality_gap.value_or(1.0) >= 0.0 && quot.duality_gap.value_or(1.0) <= 1e-4,
                  quot.duality_gap.value_or(1.0), 1e-4);
    }
    push_flag(rows, "20 converged instances", converged >= 20, converged, 20);
    return {"quotient-sum", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 6

CheckResult check_sign_symmetry(uint64_t seed) {
    std::vector<Row> rows;
    int inst = 0;
    for (int k = 1; k <= 4; ++k) {
        const int per = k <= 2 ? 13 : 12;
        for (int t = 0; t < per; ++t, ++inst) {
            const Density d = random_positive_state(2, splitmix64(seed ^ (3000 + inst)));
            const Mat x = random_matrix(2, 2, splitmix64(seed ^ (4000 + inst)));
            const CopySystem sys(d, k, true);
            const auto rep = sign_symmetry_check(x, sys, 1.0);
            push_flag(rows,
                      "sign band k=" + std::to_string(k) + " inst=" + std::to_string(t) + " [" +
                          std::to_string(rep.min_ratio) + "," + std::to_string(rep.max_ratio) + "]",
                      rep.within_band, rep.min_ratio, rep.max_ratio);
        }
    }
    push_flag(rows, "50 instances", inst == 50, inst, 50);
    return {"sign-symmetry", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 7

CheckResult check_poisson_clt(uint64_t seed) {
    std::vector<Row> rows;
    Vec gammas(2);
    gammas << 1.2, 0.8; // k_n = 2
    const Density weight = DiagonalWeight(gammas).weight_density();

    for (int m = 1; m <= 4; ++m) {
        std::vector<Mat> xs;
        for (int i = 0; i < m; ++i) {
            Mat x = random_matrix(2, 2, splitmix64(seed ^ (5000 + 31 * m + i)));
            xs.push_back(x / std::max(1.0, operator_norm(x)));
        }
        for (long s = 2; s <= 5; ++s) {
            const Complex comb = clt_moment_finite_s(xs, weight, s);
            const Complex sim = clt_simulated_moment(xs, weight, s);
            push_abs(rows, "clt finite-s vs tuple sim m=" + std::to_string(m) + " s=" + std::to_string(s),
                     std::abs(comb - sim), 0.0, 1e-10);
            const Complex mat = clt_matrix_moment(xs, weight, s);
            push_abs(rows, "clt finite-s vs matrix sim m=" + std::to_string(m) + " s=" + std::to_string(s),
                     std::abs(comb - mat), 0.0, 1e-10);
        }
        if (m % 2 == 1)
            push_abs(rows, "clt odd moment vanishes m=" + std::to_string(m),
                     std::abs(clt_moment_limit(xs, weight)), 0.0, 1e-14);
    }

    // Touchard oracle on integer-mass weights
    for (double k : {2.0, 3.0}) {
        Vec g = k == 2.0 ? (Vec(2) << 1.0, 1.0).finished() : (Vec(2) << 2.0, 1.0).finished();
        const Density w = DiagonalWeight(g).weight_density();
        for (int m = 1; m <= 6; ++m) {
            std::vector<Mat> xs(m, identity(2));
            push_rel(rows, "touchard m=" + std::to_string(m) + " k=" + std::to_string((int)k),
                     poisson_moment(xs, w).real(), touchard_number(m, k), 1e-12);
        }
    }
    // hand-enumerated m = 2: psi(x1 x2) + psi(x1) psi(x2)
    {
        const Mat x1 = random_matrix(2, 2, splitmix64(seed ^ 7100));
        const Mat x2 = random_matrix(2, 2, splitmix64(seed ^ 7200));
        const Complex want = (weight.matrix() * x1 * x2).trace() +
                             (weight.matrix() * x1).trace() * (weight.matrix() * x2).trace();
        push_abs(rows, "poisson m=2 hand enumeration",
                 std::abs(poisson_moment({x1, x2}, weight) - want), 0.0, 1e-12);
    }
    return {"poisson-clt-moments", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 8

CheckResult check_rosenthal_mc(uint64_t seed) {
    std::vector<Row> rows;
    std::vector<double> ratios;
    for (int n : {4, 16, 64}) {
        const auto rep = rosenthal_classical_mc(McDistribution::Gaussian, n, 2.0, 1.0, 100000,
                                                splitmix64(seed ^ (7700 + n)));
        ratios.push_back(rep.ratio);
        push_flag(rows, "gaussian (2,1) n=" + std::to_string(n) + " ratio=" + std::to_string(rep.ratio),
                  rep.ratio > 0.0 && std::isfinite(rep.ratio), rep.ratio, 0.0);
        const double ci_width = (rep.ci_hi - rep.ci_lo) / rep.ratio;
        push_flag(rows, "bootstrap ci width n=" + std::to_string(n), ci_width < 0.05, ci_width, 0.05);
        push_flag(rows, "ratio inside ci n=" + std::to_string(n),
                  rep.ratio >= rep.ci_lo - 1e-12 && rep.ratio <= rep.ci_hi + 1e-12, rep.ratio, 0.0);
    }
    const double band = *std::max_element(ratios.begin(), ratios.end()) /
                        *std::min_element(ratios.begin(), ratios.end());
    push_flag(rows, "two-sided ratio within factor-5 band across n", band <= 5.0, band, 5.0);
    return {"rosenthal-mc", all_pass(rows), rows_to_json(rows)};
}

// -------------------------------------------------------------- criterion 9

CheckResult check_oh_graph(uint64_t seed) {
    std::vector<Row> rows;
    std::vector<Vec> seqs;
    seqs.push_back((Vec(1) << 2.0).finished());
    seqs.push_back((Vec(1) << 0.5).finished());
    seqs.push_back((Vec(2) << 1.0, 2.0).finished());
    seqs.push_back((Vec(3) << 1.0, 1.0, 1.0).finished());
    {
        Vec pw(6);
        for (int i = 0; i < 6; ++i) pw[i] = std::pow(2.0, i + 1);
        seqs.push_back(pw);
    }
    for (int t = 0; t < 5; ++t) {
        auto gen = seeded_stream(seed, "oh_graph_seq/" + std::to_string(t));
        std::uniform_real_distribution<double> un(0.6, 3.0);
        Vec l(2 + t);
        for (Eigen::Index i = 0; i < l.size(); ++i) l[i] = un(gen);
        seqs.push_back(l);
    }
    for (size_t t = 0; t < seqs.size(); ++t) {
        const auto rep = oh_graph_map(seqs[t], 2, splitmix64(seed ^ (8800 + t)));
        push_flag(rows,
                  "distortion <= bound seq=" + std::to_string(t) + " (" +
                      std::to_string(rep.distortion) + " <= " + std::to_string(rep.distortion_bound) + ")",
                  rep.within_bound, rep.distortion, rep.distortion_bound);
        push_flag(rows, "projection contractive seq=" + std::to_string(t),
                  rep.projection_norm <= 1.0 + 1e-9, rep.projection_norm, 1.0);
    }
    // single-lambda closed form sqrt(1 + lambda^{-2})
    const auto single = oh_graph_map(seqs[0], 2, seed);
    push_abs(rows, "single lambda exact distortion", single.distortion, std::sqrt(1.0 + 0.25),
             1e-9);
    return {"oh-graph", all_pass(rows), rows_to_json(rows)};
}

// ------------------------------------------------------------- criterion 10

CheckResult check_transference(uint64_t seed) {
    std::vector<Row> rows;
    Json log = Json::array();
    double lo = 1e300, hi = 0.0;
    int inst = 0;
    for (int k : {2, 3, 4}) {
        for (double p : {1.0, 1.5, 2.0}) {
            const Density d = random_positive_state(2, splitmix64(seed ^ (9100 + inst)));
            Mat x = random_matrix(2, 2, splitmix64(seed ^ (9200 + inst)));
            x /= operator_norm(x);
            const CopySystem sys(d, k, true);
            SolveOptions opts;
            opts.seed = splitmix64(seed ^ (9300 + inst));
            const auto rep = rosenthal_bound_check(x, sys, p, 2.0, opts);
            log.push_back(Json{{"k", k}, {"p", p}, {"lhs", rep.lhs}, {"rhs", rep.rhs},
                               {"ratio", rep.ratio}, {"rhs_converged", rep.rhs_converged}});
            lo = std::min(lo, rep.ratio);
            hi = std::max(hi, rep.ratio);
            push_flag(rows,
                      "transference ratio k=" + std::to_string(k) + " p=" + std::to_string(p) +
                          " ratio=" + std::to_string(rep.ratio),
                      rep.ratio >= 0.1 && rep.ratio <= 10.0, rep.ratio, 0.0);
            ++inst;
        }
    }
    push_flag(rows, "common band [1/10,10]", lo >= 0.1 && hi <= 10.0, lo, hi);
    CheckResult res{"transference", all_pass(rows), rows_to_json(rows)};
    res.detail = Json{{"rows", res.detail}, {"ratio_log", log}};
    return res;
}

using CheckFn = CheckResult (*)(uint64_t);

struct Entry {
    CheckInfo info;
    CheckFn fn;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {{"closed-forms", "closed-forms", "Schatten/state/factorization/conditional closed forms"},
         check_closed_forms},
        {{"harmonic-measure", "interpolation", "strip harmonic measure masses and reproduction"},
         check_harmonic_measure},
        {{"endpoint-interpolation", "interpolation",
          "row/column endpoint interpolation vs conditional sup"},
         check_endpoint_interpolation},
        {{"graph-tensor", "graphs", "graph tuple norm equals weighted 4-term intersection"},
         check_graph_tensor},
        {{"quotient-sum", "graphs", "K-space quotient equals sum-space computation"},
         check_quotient_sum},
        {{"sign-symmetry", "copies", "exhaustive sign-flip two-sidedness on copy sums"},
         check_sign_symmetry},
        {{"poisson-clt-moments", "copies", "partition moments vs direct tensor simulation"},
         check_poisson_clt},
        {{"rosenthal-mc", "copies", "classical Rosenthal Monte Carlo stability"},
         check_rosenthal_mc},
        {{"oh-graph", "graphs", "diagonal graph embedding distortion bound"}, check_oh_graph},
        {{"transference", "copies", "copy-sum vs three-term K-functional band"},
         check_transference},
    };
    return entries;
}

} // namespace

const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> infos = [] {
        std::vector<CheckInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

CheckResult run_check(const std::string& name, uint64_t seed) {
    for (const auto& e : registry())
        if (e.info.name == name) return e.fn(splitmix64(seed ^ fnv1a(e.info.name)));
    throw domain_error("unknown check: " + name);
}

SuiteResult run_suite(const std::string& suite, uint64_t seed, int jobs) {
    std::vector<const Entry*> selected;
    for (const auto& e : registry())
        if (suite == "all" || e.info.suite == suite) selected.push_back(&e);
    if (selected.empty()) throw domain_error("unknown suite: " + suite);

    SuiteResult out;
    out.suite = suite;
    out.results.resize(selected.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < selected.size(); ++i)
            out.results[i] = selected[i]->fn(splitmix64(seed ^ fnv1a(selected[i]->info.name)));
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < selected.size(); i = next.fetch_add(1))
                    out.results[i] = selected[i]->fn(splitmix64(seed ^ fnv1a(selected[i]->info.name)));
            });
        for (auto& t : pool) t.join();
    }
    std::sort(out.results.begin(), out.results.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    out.all_passed = true;
    for (const auto& r : out.results) out.all_passed = out.all_passed && r.passed;
    return out;
}

} // namespace nclp
