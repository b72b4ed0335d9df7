#include "core/spaces.hpp"

#include "core/descent.hpp"
#include "core/rng.hpp"

#include <cmath>

namespace nclp {

DiagonalWeight::DiagonalWeight(Vec g) : gammas(std::move(g)) {
    if (gammas.size() == 0) throw domain_error("DiagonalWeight: empty sequence");
    for (Eigen::Index i = 0; i < gammas.size(); ++i)
        if (!(gammas[i] > 0) || !std::isfinite(gammas[i]))
            throw domain_error("DiagonalWeight: gammas must be strictly positive");
}

long DiagonalWeight::rounded_k() const { return std::lround(k_n()); }

Vec DiagonalWeight::lambdas(double p) const {
    const double pp = conjugate_exponent(p);
    const double e = 0.25 - 0.5 * inv(pp);
    return gammas.unaryExpr([&](double g) { return std::pow(g, e); });
}

Density DiagonalWeight::weight_density() const { return Density::from_diagonal(gammas); }

Density DiagonalWeight::state_density() const {
    return Density(Mat(gammas.cast<Complex>().asDiagonal()) / k_n(), 1.0);
}

GraphSpace::GraphSpace(Vec l, double pp) : lambdas(std::move(l)), p_prime(pp) {
    for (Eigen::Index i = 0; i < lambdas.size(); ++i)
        if (!(lambdas[i] > 0))
            throw domain_error("GraphSpace: eigenvalues must be strictly positive");
}

std::pair<Vec, double> perturb_lambdas(const Vec& lambdas, double eps) {
    Vec out = lambdas;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (out[i] <= 0.0) {
            out[i] = eps;
            acc += std::pow(eps, 4.0);
        }
    return {out, std::pow(acc, 0.25)};
}

double lambda_norm(const Mat& x, const Density& d, const SubalgebraSpec& N, double u,
                   double v, double n_copies, const SolveOptions& opts) {
    NormSpec spec;
    spec.p = INF;
    spec.u = u;
    spec.v = v;
    spec.density = d;
    spec.subalgebra = N;
    const double ixi = inv(u) + inv(v);
    const double scale = ixi == 0.0 ? 1.0 : std::pow(n_copies, ixi);
    return scale * conditional_lp_norm(x, spec, opts).value;
}

double j_infty2_norm(const Mat& x, const Density& d, const SubalgebraSpec& N,
                     double n_copies, const SolveOptions& opts) {
    double best = 0.0;
    for (double u : {4.0, INF})
        for (double v : {4.0, INF})
            best = std::max(best, lambda_norm(x, d, N, u, v, n_copies, opts));
    return best;
}

double j_pq_norm(const Mat& x, const Density& d, double p, double q, double n_copies,
                 Eigen::Index amplification, const SolveOptions& opts) {
    if (!(q >= 1.0) || q > p + 1e-12) throw domain_error("j_pq_norm: need 1 <= q <= p");
    const double ir = inv(q) - inv(p);
    const double two_r = ir == 0.0 ? INF : 2.0 / ir;
    double best = 0.0;
    for (double u : {two_r, INF})
        for (double v : {two_r, INF}) {
            NormSpec spec;
            spec.p = p;
            spec.u = u;
            spec.v = v;
            spec.density = d;
            spec.subalgebra = amplification > 1 ? SubalgebraSpec::left_factor(amplification)
                                                : SubalgebraSpec::scalars();
            const double scale = std::pow(n_copies, inv(u) + inv(p) + inv(v));
            best = std::max(best, scale * conditional_lp_norm(x, spec, opts).value);
            if (std::isinf(two_r)) return best; // r = inf collapses to one term
        }
    return best;
}

Mat k_tuple_image(const std::array<Mat, 4>& tuple, const DiagonalWeight& dw) {
    const Density d = dw.weight_density();
    const Mat q = d.power(0.25);
    return tuple[0] + tuple[1] * q + q * tuple[2] + q * tuple[3] * q;
}

std::array<double, 4> k_component_exponents(double p) {
    if (!(p >= 1.0)) throw domain_error("K space: need p >= 1");
    const double sp = 1.0 / (0.5 * inv(p) + 0.25);
    return {p, sp, sp, 2.0};
}

namespace {

// oplus_2 objective over the kernel parametrization
//   (t1 - (b q + q c + q e q), t2 + b, t3 + c, t4 + e),  q = d^{1/4},
// with plain Schatten component norms.
struct KernelObjective {
    std::array<Mat, 4> tuple;
    Mat q;
    std::array<double, 4> exps;

    std::array<Mat, 4> point(const Mat& b, const Mat& c, const Mat& e) const {
        return {tuple[0] - (b * q + q * c + q * e * q), tuple[1] + b, tuple[2] + c,
                tuple[3] + e};
    }
    double value(const std::array<Mat, 4>& pt) const {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double v = schatten_norm(pt[i], exps[i]);
            acc += v * v;
        }
        return std::sqrt(acc);
    }
};

double smoothed_schatten(const Mat& y, double r, double mu, Mat* grad) {
    Eigen::BDCSVD<Mat> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    const Eigen::Index k = sv.size();
    Eigen::VectorXd sm(k);
    for (Eigen::Index i = 0; i < k; ++i) sm[i] = std::sqrt(sv[i] * sv[i] + mu * mu);
    const double top = sm.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) acc += std::pow(sm[i] / top, r);
    const double val = top * std::pow(acc, 1.0 / r);
    if (grad) {
        Eigen::VectorXd gs(k);
        for (Eigen::Index i = 0; i < k; ++i)
            gs[i] = std::pow(sm[i] / val, r - 1.0) * (sv[i] / sm[i]);
        *grad = svd.matrixU() * gs.asDiagonal() * svd.matrixV().adjoint();
    }
    return val;
}

} // namespace

OptimizerReport k_quotient_norm(const std::array<Mat, 4>& tuple, const DiagonalWeight& dw,
                                double p, const SolveOptions& opts) {
    const Eigen::Index n = dw.n();
    for (const Mat& t : tuple) {
        check_finite(t, "k_quotient_norm");
        if (t.rows() != n || t.cols() != n) throw domain_error("k_quotient_norm: dimension mismatch");
    }
    const Density d = dw.weight_density();
    if (!d.strictly_positive(1e-13)) throw domain_error("k_quotient_norm: singular density");

    OptimizerReport rep;
    rep.seed = opts.seed;
    KernelObjective obj;
    obj.tuple = tuple;
    obj.q = d.power(0.25);
    obj.exps = k_component_exponents(p);

    MatVec state = {Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
    double best = obj.value(obj.point(state[0], state[1], state[2]));
    const double scale = std::max(best, 1e-12);

    const long per_stage = opts.max_iters > 0 ? opts.max_iters : 1500;
    for (double mu : {1e-2 * scale, 1e-4 * scale, 1e-7 * scale, 1e-11 * scale}) {
        auto objective = [&](const MatVec& st, MatVec* grad_out) {
            const auto pt = obj.point(st[0], st[1], st[2]);
            std::array<double, 4> vals;
            std::array<Mat, 4> grads;
            double f0sq = 0.0;
            for (int i = 0; i < 4; ++i) {
                vals[i] = smoothed_schatten(pt[i], obj.exps[i], mu, grad_out ? &grads[i] : nullptr);
                f0sq += vals[i] * vals[i];
            }
            const double f0 = std::sqrt(f0sq);
            if (grad_out) {
                // chain rule: component i contributes (vals[i]/f0) * grads[i]
                // through its dependence on (b, c, e).
                const Mat g0 = (vals[0] / f0) * grads[0];
                grad_out->resize(3);
                (*grad_out)[0] = (vals[1] / f0) * grads[1] - g0 * obj.q;
                (*grad_out)[1] = (vals[2] / f0) * grads[2] - obj.q * g0;
                (*grad_out)[2] = (vals[3] / f0) * grads[3] - obj.q * g0 * obj.q;
            }
            return f0;
        };
        fista_minimize(state, objective, per_stage, 1e-13, &rep.iterations);
        best = std::min(best, obj.value(obj.point(state[0], state[1], state[2])));
    }
    rep.value = best;

    // Duality gap against the sum-route certificate for the same functional.
    OptimizerReport sum = k_sum_norm(k_tuple_image(tuple, dw), dw, p, opts);
    const double sum_lower = sum.value * (1.0 - sum.duality_gap.value_or(0.0));
    const double gap = std::max(0.0, rep.value - sum_lower);
    rep.duality_gap = gap / std::max(rep.value, 1e-300);
    rep.converged = *rep.duality_gap <= 1e-4;
    return rep;
}

OptimizerReport k_sum_norm(const Mat& y, const DiagonalWeight& dw, double p,
                           const SolveOptions& opts) {
    const Density d = dw.weight_density();
    if (!d.strictly_positive(1e-13)) throw domain_error("k_sum_norm: singular density");
    const Mat qinv = d.power(-0.25);
    const auto exps = k_component_exponents(p);
    std::vector<WeightedSchattenNorm> comps(4);
    comps[0] = {1.0, exps[0], Mat(), Mat()};
    comps[1] = {1.0, exps[1], Mat(), qinv};
    comps[2] = {1.0, exps[2], qinv, Mat()};
    comps[3] = {1.0, exps[3], qinv, qinv};
    return sum_norm(y, comps, SumAggregator::L2, opts);
}

GraphTensorReport graph_tensor_check(const Vec& lambdas, Eigen::Index dim,
                                     Eigen::Index amplification, int samples,
                                     uint64_t seed) {
    if (lambdas.size() != dim) throw domain_error("graph_tensor_check: lambda length must equal dim");
    GraphSpace graph(lambdas); // validates strict positivity
    const Eigen::Index m = amplification;
    const Mat dmat = Mat(lambdas.cast<Complex>().asDiagonal());
    const Mat eye = Mat::Identity(dim, dim);

    // gamma = lambda^4, psi_n = k_n phi_n
    const Vec gammas = lambdas.unaryExpr([](double l) { return l * l * l * l; });
    const DiagonalWeight dw(gammas);
    const Density state = dw.state_density();
    const double k = dw.k_n();

    GraphTensorReport rep;
    for (int s = 0; s < samples; ++s) {
        const Mat x = random_matrix(m * dim, m * dim, splitmix64(seed ^ (0x6772 + 131 * s)));
        SolveOptions opts;
        opts.seed = splitmix64(seed ^ (0x7473 + 977 * s));

        // left: intersection norm of (z, zD, Dz, DzD) with amplified
        // cross-term suprema
        double left = conditional_sup_raw(x, m, eye, eye, INF, INF, INF, opts).value;
        left = std::max(left, conditional_sup_raw(x, m, eye, dmat, 4.0, INF, 4.0, opts).value);
        left = std::max(left, conditional_sup_raw(x, m, dmat, eye, 4.0, 4.0, INF, opts).value);
        left = std::max(left, conditional_sup_raw(x, m, dmat, dmat, 2.0, 4.0, 4.0, opts).value);

        const SubalgebraSpec sub =
            m > 1 ? SubalgebraSpec::left_factor(m) : SubalgebraSpec::scalars();
        const double right = j_infty2_norm(x, state, sub, k, opts);
        const double ratio = left / right;
        rep.ratios.push_back(ratio);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(ratio - 1.0));
    }
    return rep;
}

namespace {

// M_m(OH_n) norm: || sum c_k (x) conj(c_k) ||^{1/2} over M_{m^2}.
double oh_level_norm(const std::vector<Mat>& cs) {
    const Eigen::Index m = cs[0].rows();
    Mat acc = Mat::Zero(m * m, m * m);
    for (const Mat& ci : cs) acc += tensor_product(ci, ci.conjugate());
    return std::sqrt(operator_norm(acc));
}

double row_level_norm_sq(const std::vector<Mat>& cs, const Vec& scale) {
    const Eigen::Index m = cs[0].rows();
    Mat acc = Mat::Zero(m, m);
    for (size_t k = 0; k < cs.size(); ++k) acc += scale[k] * scale[k] * cs[k] * cs[k].adjoint();
    return operator_norm(acc);
}

} // namespace

OhGraphReport oh_graph_map(const Vec& lambdas, Eigen::Index level, uint64_t seed) {
    GraphSpace graph(lambdas);
    const Eigen::Index n = lambdas.size(), m = level;
    const Vec mu = lambdas.cwiseInverse();

    OhGraphReport rep;
    rep.xi_bound = std::pow(mu.array().pow(4.0).sum(), 0.25);
    rep.distortion_bound = std::sqrt(1.0 + rep.xi_bound * rep.xi_bound);

    // xi at level m: sup ||sum mu_k^2 c_k c_k*||^{1/2} / ||sum c_k (x) conj c_k||^{1/2}.
    // Projected ascent over coefficient tuples; any sample certifies a lower
    // bound; the certified bound must dominate every sample.
    double best_ratio_sq = 0.0;
    double proj_norm = 0.0;
    const int restarts = 12;
    for (int r = 0; r < restarts; ++r) {
        std::vector<Mat> cs(n);
        auto gen = seeded_stream(seed, "oh_graph/" + std::to_string(r));
        std::normal_distribution<double> g(0.0, 1.0);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (r == 0) {
                cs[k] = Mat::Zero(m, m);
                if (k == 0) cs[k] = Mat::Identity(m, m);
            } else {
                cs[k] = Mat(m, m);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j) cs[k](i, j) = Complex(g(gen), g(gen));
            }
        }
        double denom = oh_level_norm(cs);
        if (denom == 0.0) continue;
        double cur = row_level_norm_sq(cs, mu) / (denom * denom);
        // coordinate random-perturbation hill climb, kept simple and certified
        double eta = 0.5;
        for (int it = 0; it < 300 && eta > 1e-7; ++it) {
            std::vector<Mat> cand = cs;
            for (Eigen::Index k = 0; k < n; ++k) {
                Mat dm(m, m);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j) dm(i, j) = Complex(g(gen), g(gen));
                cand[k] += eta * dm;
            }
            const double dn = oh_level_norm(cand);
            if (dn == 0.0) { eta *= 0.7; continue; }
            const double val = row_level_norm_sq(cand, mu) / (dn * dn);
            if (val > cur * (1.0 + 1e-12)) {
                cs = cand;
                cur = val;
            } else {
                eta *= 0.9;
            }
        }
        best_ratio_sq = std::max(best_ratio_sq, cur);
        // graph norm of u(c) is (row part + oh part)^{1/2}; the coordinate
        // projection back to OH is a contraction at every level.
        const double graph_sq = row_level_norm_sq(cs, mu) + oh_level_norm(cs) * oh_level_norm(cs);
        proj_norm = std::max(proj_norm, oh_level_norm(cs) / std::sqrt(graph_sq));
    }
    rep.xi_measured = std::sqrt(best_ratio_sq);
    rep.distortion = std::sqrt(1.0 + best_ratio_sq);
    rep.projection_norm = proj_norm;
    rep.within_bound = rep.distortion <= rep.distortion_bound * (1.0 + 1e-9);
    return rep;
}

DiscretizationReport discretize_spectrum(const Density& d, double delta) {
    if (!(delta > 0)) throw domain_error("discretize_spectrum: delta must be positive");
    const Vec ev = d.eigenvalues();
    Vec floored(ev.size());
    double raw = 1.0, graph = 1.0;
    int flagged = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lam = ev[i];
        // grid value k*delta for lam in [k delta, (k+1) delta)
        double g = delta * std::floor(lam / delta * (1.0 + 1e-15));
        floored[i] = g;
        if (g <= 0.0) {
            ++flagged;
            floored[i] = 0.0;
        } else {
            raw = std::max(raw, lam / g);
        }
        graph = std::max(graph, std::sqrt((1.0 + lam * lam) / (1.0 + floored[i] * floored[i])));
    }
    Vec kept(ev.size() - flagged);
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (floored[i] > 0.0) kept[j++] = floored[i];
    if (kept.size() == 0) throw domain_error("discretize_spectrum: all eigenvalues below delta");
    DiscretizationReport rep{DiagonalWeight(kept), raw, graph, flagged};
    return rep;
}

DimensionBudget dimension_budget(long m, double alpha_p, double beta_p, double gamma) {
    if (m < 2) throw domain_error("dimension_budget: m >= 2");
    DimensionBudget b;
    b.m = m;
    b.n = (long)std::ceil(m * std::log((double)m));
    b.k_n = std::ceil(std::pow((double)b.n, alpha_p));
    b.log10_w = gamma * b.k_n * std::log10(std::max(2.0, b.k_n));
    b.log10_M = b.k_n * std::log10((double)b.n) + b.log10_w;
    b.log10_paper_form = beta_p * std::pow((double)m, alpha_p) * std::log10((double)m);
    return b;
}

} // namespace nclp
