#include "core/norms.hpp"

#include "core/descent.hpp"
#include "core/rng.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace nclp {

namespace {

Eigen::VectorXd singular_values(const Mat& x) {
    return Eigen::BDCSVD<Mat>(x).singularValues();
}

Mat herm(const Mat& m) { return 0.5 * (m + m.adjoint().eval()); }

// Partial trace over the second factor of M_m (x) M_n.
Mat ptr2(const Mat& z, Eigen::Index m) {
    const Eigen::Index n = z.rows() / m;
    Mat out = Mat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out(i, j) = z.block(i * n, j * n, n, n).trace();
    return out;
}

// (a (x) I_n) * x
Mat kron_left(const Mat& a, const Mat& x) {
    const Eigen::Index m = a.rows(), n = x.rows() / m;
    Mat out = Mat::Zero(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index k = 0; k < m; ++k) {
            if (a(i, k) == Complex(0, 0)) continue;
            out.middleRows(i * n, n) += a(i, k) * x.middleRows(k * n, n);
        }
    return out;
}

// x * (b (x) I_n)
Mat kron_right(const Mat& x, const Mat& b) {
    const Eigen::Index m = b.rows(), n = x.cols() / m;
    Mat out = Mat::Zero(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index j = 0; j < m; ++j) {
            if (b(k, j) == Complex(0, 0)) continue;
            out.middleCols(j * n, n) += b(k, j) * x.middleCols(k * n, n);
        }
    return out;
}

Mat hermitian_sqrt(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(herm(h));
    Vec ev = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

Mat random_ball_point(Eigen::Index m, double u, std::mt19937_64& gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = Complex(g(gen), g(gen));
    const double nrm = schatten_norm(a, u);
    if (nrm > 0) a /= nrm;
    return a;
}

// argmax_{||a||_{S_u} <= 1, a = h^{1/2}} tr(h W) for Hermitian PSD W: the
// optimal h lies on the S_{u/2} sphere and is a power of W.
Mat quadratic_step_argmax(const Mat& wmat, double u) {
    const Eigen::Index n = wmat.rows();
    Eigen::SelfAdjointEigenSolver<Mat> es(herm(wmat));
    Vec ev = es.eigenvalues().cwiseMax(0.0);
    const double rho = u / 2.0;
    Mat h;
    if (std::isinf(u)) {
        h = Mat::Identity(n, n);
    } else if (rho <= 1.0 + 1e-14) {
        Eigen::Index top = 0;
        ev.maxCoeff(&top);
        h = es.eigenvectors().col(top) * es.eigenvectors().col(top).adjoint();
    } else {
        const double rhop = conjugate_exponent(rho);
        const double top = ev.maxCoeff();
        if (top <= 0.0) return Mat::Identity(n, n) / schatten_norm(Mat::Identity(n, n), u);
        Vec hv = ev.unaryExpr([&](double e) { return e > 0 ? std::pow(e / top, rhop - 1.0) : 0.0; });
        h = es.eigenvectors() * hv.asDiagonal() * es.eigenvectors().adjoint();
        const double nrm = schatten_norm(h, rho);
        h /= nrm;
    }
    return hermitian_sqrt(h);
}

} // namespace

double conjugate_exponent(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return INF;
    return p / (p - 1.0);
}

double NormSpec::conditional_s() const {
    const double is = inv(u) + inv(p) + inv(v);
    return is == 0.0 ? INF : 1.0 / is;
}

double NormSpec::amalgamated_p() const {
    const double ip = inv(u) + inv(q) + inv(v);
    return ip == 0.0 ? INF : 1.0 / ip;
}

void NormSpec::require_in_K(double u, double v, double r) {
    if (!(u >= 2.0) || !(v >= 2.0)) throw domain_error("indices outside K: need 2 <= u,v");
    if (!(r >= 1.0)) throw domain_error("indices outside K: need 1 <= q");
    if (inv(u) + inv(r) + inv(v) > 1.0 + 1e-12)
        throw domain_error("indices outside K: 1/u + 1/q + 1/v > 1");
}

double schatten_norm(const Mat& x, double p) {
    if (!(p >= 1.0)) throw domain_error("schatten_norm: p < 1 is outside the norm range");
    check_finite(x, "schatten_norm");
    if (x.size() == 0) return 0.0;
    Eigen::VectorXd sv = singular_values(x);
    if (std::isinf(p)) return sv.size() ? sv.maxCoeff() : 0.0;
    const double top = sv.maxCoeff();
    if (top == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv[i] / top, p);
    return top * std::pow(acc, 1.0 / p);
}

double operator_norm(const Mat& x) { return schatten_norm(x, INF); }

double state_lp_norm(const Mat& x, const Density& d, double p) {
    if (!(p >= 1.0)) throw domain_error("state_lp_norm: p < 1");
    if (x.rows() != d.dim() || x.cols() != d.dim())
        throw domain_error("state_lp_norm: dimension mismatch");
    if (std::isinf(p)) return operator_norm(x);
    const Mat w = d.power(0.5 / p);
    return schatten_norm(w * x * w, p);
}

double placed_lp_norm(const Mat& x, const Density& d, double p, DensityPlacement placement) {
    if (!(p >= 1.0)) throw domain_error("placed_lp_norm: p < 1");
    if (x.rows() != d.dim() || x.cols() != d.dim())
        throw domain_error("placed_lp_norm: dimension mismatch");
    switch (placement) {
        case DensityPlacement::Symmetric:
            return state_lp_norm(x, d, p);
        case DensityPlacement::Left:
            return std::isinf(p) ? operator_norm(x) : schatten_norm(d.power(1.0 / p) * x, p);
        case DensityPlacement::Right:
            return std::isinf(p) ? operator_norm(x) : schatten_norm(x * d.power(1.0 / p), p);
        case DensityPlacement::BothQuarter: {
            const Mat w = d.power(0.25);
            return schatten_norm(w * x * w, p);
        }
    }
    return 0.0;
}

double rc_square_norm(const std::vector<Mat>& xs, const Density& d, double p, Side side) {
    if (xs.empty()) return 0.0;
    const Mat w = std::isinf(p) ? Mat(Mat::Identity(d.dim(), d.dim())) : d.power(0.5 / p);
    Mat s = Mat::Zero(d.dim(), d.dim());
    for (const Mat& x : xs) {
        if (x.rows() != d.dim() || x.cols() != d.dim())
            throw domain_error("rc_square_norm: dimension mismatch");
        Mat y = w * x * w;
        s += (side == Side::Row) ? Mat(y * y.adjoint()) : Mat(y.adjoint() * y);
    }
    return schatten_norm(hermitian_sqrt(s), p);
}

Mat schatten_subgradient(const Mat& x, double p) {
    Eigen::BDCSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double top = sv.size() ? sv.maxCoeff() : 0.0;
    if (top == 0.0) return Mat::Zero(x.rows(), x.cols());
    if (std::isinf(p))
        return svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
    Eigen::VectorXd g(sv.size());
    if (p == 1.0) {
        for (Eigen::Index i = 0; i < sv.size(); ++i) g[i] = sv[i] > 1e-14 * top ? 1.0 : 0.0;
    } else {
        const double nrm = schatten_norm(x, p);
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            g[i] = std::pow(sv[i] / nrm, p - 1.0);
    }
    return svd.matrixU() * g.asDiagonal() * svd.matrixV().adjoint();
}

// ---------------------------------------------------------------------------
// factorization_norm

OptimizerReport factorization_norm(const Mat& x, double u, double v, const SolveOptions& opts) {
    if (!(u >= 2.0) || !(v >= 2.0)) throw domain_error("factorization_norm: need 2 <= u,v <= inf");
    check_finite(x, "factorization_norm");
    OptimizerReport rep;
    rep.seed = opts.seed;

    Eigen::BDCSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() == 0 || sv.maxCoeff() == 0.0) {
        rep.converged = true;
        return rep;
    }
    const double t = inv(u) + inv(v);
    const double ea = (t == 0.0) ? 1.0 : inv(u) / t;
    const double eb = 1.0 - ea;
    Eigen::VectorXd sa(sv.size()), sb(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        sa[i] = std::pow(sv[i], ea);
        sb[i] = std::pow(sv[i], eb);
    }
    // Polar split alpha0 = w |x|^{p/u}, beta0 = |x|^{p/v}.
    Mat alpha = svd.matrixU() * sa.asDiagonal() * svd.matrixV().adjoint();
    Mat beta = svd.matrixV() * sb.asDiagonal() * svd.matrixV().adjoint();

    auto value = [&](const Mat& a, const Mat& b) {
        return schatten_norm(a, u) * schatten_norm(b, v);
    };
    double best = value(alpha, beta);

    // Gauge refinement over x = (alpha e^{-h/2})(e^{h/2} beta), h Hermitian.
    const long max_iters = opts.max_iters > 0 ? opts.max_iters : 60;
    double step = 0.25;
    for (long it = 0; it < max_iters && step > 1e-12; ++it) {
        ++rep.iterations;
        const Mat ga = schatten_subgradient(alpha, u);
        const Mat gb = schatten_subgradient(beta, v);
        Mat grad = 0.5 * (schatten_norm(alpha, u) * herm(gb * beta.adjoint()) -
                          schatten_norm(beta, v) * herm(alpha.adjoint() * ga));
        const double gn = grad.norm();
        if (gn < 1e-14 * std::max(best, 1.0)) break;
        grad /= gn;
        bool improved = false;
        while (step > 1e-12) {
            Eigen::SelfAdjointEigenSolver<Mat> es(Mat(-step * grad));
            const Mat eh = es.eigenvectors() *
                           es.eigenvalues().unaryExpr([](double e) { return std::exp(0.5 * e); }).asDiagonal() *
                           es.eigenvectors().adjoint();
            const Mat ehi = es.eigenvectors() *
                            es.eigenvalues().unaryExpr([](double e) { return std::exp(-0.5 * e); }).asDiagonal() *
                            es.eigenvectors().adjoint();
            const double cand = value(alpha * ehi, eh * beta);
            if (cand < best * (1.0 - 1e-14)) {
                alpha = alpha * ehi;
                beta = eh * beta;
                best = cand;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    rep.value = best;
    rep.converged = true;
    return rep;
}

// ---------------------------------------------------------------------------
// conditional norms

OptimizerReport conditional_sup_raw(const Mat& x, Eigen::Index m, const Mat& L, const Mat& R,
                                    double s, double ball_u, double ball_v,
                                    const SolveOptions& opts) {
    check_finite(x, "conditional norm");
    if (x.rows() != x.cols() || x.rows() % m != 0)
        throw domain_error("conditional norm: x must be square with dimension divisible by m");
    OptimizerReport rep;
    rep.seed = opts.seed;
    const Eigen::Index n = x.rows() / m;
    if (L.rows() != n || R.rows() != n) throw domain_error("conditional norm: bad dressing dimension");

    // Dress the inner factor once: X' = (I (x) L) X (I (x) R).
    Mat xp(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            xp.block(i * n, j * n, n, n) = L * x.block(i * n, j * n, n, n) * R;

    if (m == 1) { // sup over unit scalars is attained at 1
        rep.value = schatten_norm(xp, s);
        rep.converged = true;
        return rep;
    }

    auto eval = [&](const Mat& a, const Mat& b) {
        return schatten_norm(kron_right(kron_left(a, xp), b), s);
    };

    const int restarts = opts.restarts > 0 ? opts.restarts : 8;
    const long iters = opts.max_iters > 0 ? opts.max_iters : 400;
    const bool quadratic = std::abs(s - 2.0) < 1e-14;
    double best = 0.0;

    for (int r = 0; r <= restarts; ++r) {
        auto gen = seeded_stream(opts.seed, "conditional_sup/" + std::to_string(r));
        Mat a, b;
        if (r == 0) {
            a = Mat::Identity(m, m);
            a /= schatten_norm(a, ball_u);
            b = Mat::Identity(m, m);
            b /= schatten_norm(b, ball_v);
        } else {
            a = random_ball_point(m, ball_u, gen);
            b = random_ball_point(m, ball_v, gen);
        }
        double cur = eval(a, b);

        if (quadratic) {
            // Alternating exact partial steps; each one is a closed form, the
            // sequence of values is nondecreasing.
            for (long it = 0; it < 200; ++it) {
                ++rep.iterations;
                const Mat qb = kron_right(xp, b);
                a = quadratic_step_argmax(ptr2(qb * qb.adjoint(), m), ball_u);
                const Mat pa = kron_left(a, xp);
                b = quadratic_step_argmax(ptr2(pa.adjoint() * pa, m), ball_v);
                const double nxt = eval(a, b);
                if (nxt <= cur * (1.0 + 1e-13)) { cur = std::max(cur, nxt); break; }
                cur = nxt;
            }
        } else {
            double step = 0.3;
            for (long it = 0; it < iters && step > 1e-12; ++it) {
                ++rep.iterations;
                const Mat mm = kron_right(kron_left(a, xp), b);
                const Mat g = schatten_subgradient(mm, s);
                const Mat qb = kron_right(xp, b);
                const Mat pa = kron_left(a, xp);
                const Mat ga = ptr2(qb * g.adjoint(), m).adjoint();
                const Mat gb = ptr2(g.adjoint() * pa, m).adjoint();
                const double gs = std::max(ga.norm(), gb.norm());
                if (gs < 1e-15 * std::max(cur, 1.0)) break;
                bool improved = false;
                while (step > 1e-12) {
                    Mat a2 = a + (step / gs) * ga;
                    Mat b2 = b + (step / gs) * gb;
                    a2 /= schatten_norm(a2, ball_u);
                    b2 /= schatten_norm(b2, ball_v);
                    const double cand = eval(a2, b2);
                    if (cand > cur * (1.0 + 1e-14)) {
                        a = a2;
                        b = b2;
                        cur = cand;
                        improved = true;
                        step *= 1.5;
                        break;
                    }
                    step *= 0.5;
                }
                if (!improved) break;
            }
        }
        best = std::max(best, cur);
        ++rep.restarts;
    }
    rep.value = best;
    rep.converged = true;
    return rep;
}

OptimizerReport conditional_lp_norm(const Mat& x, const NormSpec& spec, const SolveOptions& opts) {
    NormSpec::require_in_K(spec.u, spec.v, spec.p);
    const Eigen::Index m =
        spec.subalgebra.kind == SubalgebraSpec::LeftMatrixFactor ? spec.subalgebra.m : 1;
    if (x.rows() % m != 0)
        throw domain_error("conditional_lp_norm: ambient dimension not divisible by m");
    const Eigen::Index n = x.rows() / m;

    const double s = spec.conditional_s();
    const double lp = inv(spec.u) + 0.5 * inv(spec.p);
    const double rp = 0.5 * inv(spec.p) + inv(spec.v);
    Mat L, R;
    if (spec.density) {
        if (spec.density->dim() != n) throw domain_error("conditional_lp_norm: density dimension mismatch");
        const Density state = spec.density->normalized();
        L = state.power(lp);
        R = state.power(rp);
    } else {
        if (lp != 0.0 || rp != 0.0)
            throw domain_error("conditional_lp_norm: density required for finite exponents");
        L = Mat::Identity(n, n);
        R = Mat::Identity(n, n);
    }
    return conditional_sup_raw(x, m, L, R, s, spec.u, spec.v, opts);
}

// ---------------------------------------------------------------------------
// oh_valued_norm

OptimizerReport oh_valued_norm(const std::vector<Mat>& xs, const Density* d, const SolveOptions& opts) {
    OptimizerReport rep;
    rep.seed = opts.seed;
    if (xs.empty()) { rep.converged = true; return rep; }
    const Eigen::Index n = xs[0].rows();
    for (const Mat& x : xs)
        if (x.rows() != n || x.cols() != n)
            throw domain_error("oh_valued_norm: common square dimension required");

    // In gamma = W alpha W coordinates the problem is the operator norm of
    // gamma -> W T(W^{-1} gamma W^{-1}) W over PSD gamma with ||gamma||_2 <= 1;
    // the map is CP so the cone is preserved without projection. The weighted
    // ball only makes sense for invertible densities.
    Mat w = Mat::Identity(n, n), wi = w;
    if (d) {
        if (d->dim() != n) throw domain_error("oh_valued_norm: density dimension mismatch");
        const Density state = d->normalized();
        if (!state.strictly_positive(1e-13))
            throw domain_error("oh_valued_norm: weighted ball needs a strictly positive density");
        w = state.power(0.25);
        wi = state.power(-0.25);
    }
    auto fwd = [&](const Mat& gamma) { // W T(W^{-1} gamma W^{-1}) W
        const Mat inner = wi * gamma * wi;
        Mat acc = Mat::Zero(n, n);
        for (const Mat& x : xs) acc += x.adjoint() * inner * x;
        return Mat(w * acc * w);
    };
    auto bwd = [&](const Mat& z) { // adjoint
        const Mat inner = w * z * w;
        Mat acc = Mat::Zero(n, n);
        for (const Mat& x : xs) acc += x * inner * x.adjoint();
        return Mat(wi * acc * wi);
    };

    const int restarts = opts.restarts > 0 ? opts.restarts : 16;
    const long iters = opts.max_iters > 0 ? opts.max_iters : 300;
    double best = 0.0;

    for (int r = 0; r <= restarts; ++r) {
        Mat beta;
        if (r == 0) {
            beta = Mat::Identity(n, n);
        } else {
            auto gen = seeded_stream(opts.seed, "oh_valued/" + std::to_string(r));
            std::normal_distribution<double> g(0.0, 1.0);
            Mat gm(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) gm(i, j) = Complex(g(gen), g(gen));
            beta = gm * gm.adjoint();
        }
        double bn = beta.norm();
        if (bn == 0.0) continue;
        beta /= bn;
        double cur = fwd(beta).norm();
        for (long it = 0; it < iters; ++it) {
            ++rep.iterations;
            Mat nxt = herm(bwd(fwd(beta)));
            const double nn = nxt.norm();
            if (nn < 1e-300) break;
            nxt /= nn;
            const double val = fwd(nxt).norm();
            if (val <= cur * (1.0 + 1e-15)) {
                cur = std::max(cur, val);
                break;
            }
            beta = nxt;
            cur = val;
        }
        best = std::max(best, cur);
        ++rep.restarts;
    }
    rep.value = std::sqrt(best);
    rep.converged = true;
    return rep;
}

// ---------------------------------------------------------------------------
// mixed_theta_norm

OptimizerReport mixed_theta_norm(const std::vector<Mat>& xs, double theta, double p,
                                 const SolveOptions& opts) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw domain_error("mixed_theta_norm: theta outside [0,1]");
    if (!(p >= 2.0)) throw domain_error("mixed_theta_norm: need 2 <= p <= inf");
    OptimizerReport rep;
    rep.seed = opts.seed;
    if (xs.empty()) { rep.converged = true; return rep; }
    const Eigen::Index n = xs[0].rows();
    for (const Mat& x : xs)
        if (x.rows() != n || x.cols() != n)
            throw domain_error("mixed_theta_norm: common square dimension required");

    const double iq = 0.5 - inv(p);
    const double iu = theta * iq, iv = (1.0 - theta) * iq;
    const double u = iu == 0.0 ? INF : 1.0 / iu;
    const double v = iv == 0.0 ? INF : 1.0 / iv;

    auto val = [&](const Mat& a, const Mat& b) {
        double acc = 0.0;
        for (const Mat& x : xs) acc += (a * x * b).squaredNorm();
        return std::sqrt(acc);
    };
    // Each half-step is an exact closed form: the objective is quadratic in a
    // for fixed b (and conversely).
    auto step_a = [&](const Mat& b) {
        Mat wmat = Mat::Zero(n, n);
        for (const Mat& x : xs) {
            Mat y = x * b;
            wmat += y * y.adjoint();
        }
        return quadratic_step_argmax(wmat, u);
    };
    auto step_b = [&](const Mat& a) {
        Mat wmat = Mat::Zero(n, n);
        for (const Mat& x : xs) {
            Mat y = a * x;
            wmat += y.adjoint() * y;
        }
        return quadratic_step_argmax(wmat, v);
    };

    const int restarts = opts.restarts > 0 ? opts.restarts : 8;
    double best = 0.0;
    for (int r = 0; r <= restarts; ++r) {
        Mat b;
        if (r == 0) {
            b = Mat::Identity(n, n);
            b /= schatten_norm(b, v);
        } else {
            auto gen = seeded_stream(opts.seed, "mixed_theta/" + std::to_string(r));
            b = random_ball_point(n, v, gen);
        }
        Mat a = step_a(b);
        double cur = val(a, b);
        for (long it = 0; it < 200; ++it) {
            ++rep.iterations;
            b = step_b(a);
            a = step_a(b);
            const double nxt = val(a, b);
            if (nxt <= cur * (1.0 + 1e-13)) { cur = std::max(cur, nxt); break; }
            cur = nxt;
        }
        best = std::max(best, cur);
        ++rep.restarts;
    }
    rep.value = best;
    rep.converged = true;
    return rep;
}

// ---------------------------------------------------------------------------
// sum_norm

double WeightedSchattenNorm::eval(const Mat& y) const {
    Mat z = y;
    if (left.size()) z = left * z;
    if (right.size()) z = z * right;
    return weight * schatten_norm(z, r);
}

Mat WeightedSchattenNorm::subgradient(const Mat& y) const {
    Mat z = y;
    if (left.size()) z = left * z;
    if (right.size()) z = z * right;
    Mat g = schatten_subgradient(z, r);
    if (left.size()) g = left.adjoint() * g;
    if (right.size()) g = g * right.adjoint();
    return weight * g;
}

double WeightedSchattenNorm::dual_eval(const Mat& z) const {
    Mat y = z;
    if (left.size()) y = left.inverse() * y;
    if (right.size()) y = y * right.inverse();
    return schatten_norm(y, conjugate_exponent(r)) / weight;
}

Mat WeightedSchattenNorm::dual_subgradient(const Mat& z) const {
    Mat y = z;
    const Mat li = left.size() ? Mat(left.inverse()) : Mat();
    const Mat ri = right.size() ? Mat(right.inverse()) : Mat();
    if (li.size()) y = li * y;
    if (ri.size()) y = y * ri;
    Mat g = schatten_subgradient(y, conjugate_exponent(r));
    if (li.size()) g = li.adjoint() * g;
    if (ri.size()) g = g * ri.adjoint();
    return g / weight;
}

namespace {

// Smoothed Schatten norm (sigma -> sqrt(sigma^2 + mu^2)) and its gradient;
// the smoothed value dominates the true norm.
std::pair<double, Mat> smooth_norm_grad(const WeightedSchattenNorm& c, const Mat& y, double mu) {
    Mat z = y;
    if (c.left.size()) z = c.left * z;
    if (c.right.size()) z = z * c.right;
    const double r = std::isinf(c.r) ? 64.0 : c.r;
    Eigen::BDCSVD<Mat> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    const Eigen::Index k = sv.size();
    Eigen::VectorXd sm(k);
    for (Eigen::Index i = 0; i < k; ++i) sm[i] = std::sqrt(sv[i] * sv[i] + mu * mu);
    const double top = sm.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) acc += std::pow(sm[i] / top, r);
    const double val = top * std::pow(acc, 1.0 / r);
    Eigen::VectorXd gs(k);
    for (Eigen::Index i = 0; i < k; ++i)
        gs[i] = std::pow(sm[i] / val, r - 1.0) * (sv[i] / sm[i]);
    Mat g = svd.matrixU() * gs.asDiagonal() * svd.matrixV().adjoint();
    if (c.left.size()) g = c.left.adjoint() * g;
    if (c.right.size()) g = g * c.right.adjoint();
    return {c.weight * val, c.weight * g};
}

} // namespace

OptimizerReport sum_norm(const Mat& x, const std::vector<WeightedSchattenNorm>& comps,
                         SumAggregator agg, const SolveOptions& opts) {
    if (comps.empty()) throw domain_error("sum_norm: no components");
    for (const auto& c : comps)
        if (!(c.weight > 0)) throw domain_error("sum_norm: weights must be positive");
    check_finite(x, "sum_norm");
    OptimizerReport rep;
    rep.seed = opts.seed;
    const size_t K = comps.size();

    if (K == 1) {
        rep.value = comps[0].eval(x);
        rep.duality_gap = 0.0;
        rep.converged = true;
        return rep;
    }
    const double scale = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) {
        rep.value = 0.0;
        rep.duality_gap = 0.0;
        rep.converged = true;
        return rep;
    }

    auto aggregate = [&](const std::vector<double>& vals) {
        double s = 0;
        if (agg == SumAggregator::L1) {
            for (double v : vals) s += v;
            return s;
        }
        for (double v : vals) s += v * v;
        return std::sqrt(s);
    };
    auto true_value = [&](const std::vector<Mat>& parts) {
        std::vector<double> vals(K);
        for (size_t i = 0; i < K; ++i) vals[i] = comps[i].eval(parts[i]);
        return aggregate(vals);
    };

    size_t best_single = 0;
    double best_single_val = comps[0].eval(x);
    for (size_t i = 1; i < K; ++i) {
        const double v = comps[i].eval(x);
        if (v < best_single_val) { best_single_val = v; best_single = i; }
    }
    std::vector<Mat> parts(K, Mat::Zero(x.rows(), x.cols()));
    parts[best_single] = x;
    double best = best_single_val;
    std::vector<Mat> best_parts = parts;

    // Smoothed objective over the free parts x_1..x_{K-1}; x_K is eliminated
    // through the constraint sum x_i = x.
    const long per_stage = opts.max_iters > 0 ? opts.max_iters : 1500;
    MatVec free_parts(parts.begin(), parts.end() - 1);
    for (double mu : {1e-2 * scale, 1e-4 * scale, 1e-7 * scale, 1e-11 * scale}) {
        auto objective = [&](const MatVec& st, MatVec* grad_out) {
            std::vector<Mat> full(K);
            Mat acc = Mat::Zero(x.rows(), x.cols());
            for (size_t i = 0; i + 1 < K; ++i) {
                full[i] = st[i];
                acc += st[i];
            }
            full[K - 1] = x - acc;
            std::vector<double> vals(K);
            std::vector<Mat> grads(K);
            for (size_t i = 0; i < K; ++i) {
                auto [v, g] = smooth_norm_grad(comps[i], full[i], mu);
                vals[i] = v;
                if (grad_out) grads[i] = std::move(g);
            }
            const double f0 = aggregate(vals);
            if (grad_out) {
                if (agg == SumAggregator::L2)
                    for (size_t i = 0; i < K; ++i) grads[i] *= vals[i] / std::max(f0, 1e-300);
                grad_out->resize(K - 1);
                for (size_t i = 0; i + 1 < K; ++i) (*grad_out)[i] = grads[i] - grads[K - 1];
            }
            return f0;
        };
        fista_minimize(free_parts, objective, per_stage, 1e-13, &rep.iterations);
        Mat acc = Mat::Zero(x.rows(), x.cols());
        for (size_t i = 0; i + 1 < K; ++i) {
            parts[i] = free_parts[i];
            acc += free_parts[i];
        }
        parts[K - 1] = x - acc;
        const double tv = true_value(parts);
        if (tv < best) {
            best = tv;
            best_parts = parts;
        }
    }
    rep.value = best;

    // Dual certificate: any z with D(z) <= 1 gives the lower bound Re<z,x>.
    auto dual_den = [&](const Mat& z) {
        double dd = 0;
        for (const auto& c : comps) {
            const double e = c.dual_eval(z);
            if (agg == SumAggregator::L1) dd = std::max(dd, e);
            else dd += e * e;
        }
        return agg == SumAggregator::L1 ? dd : std::sqrt(dd);
    };
    auto pair_re = [&](const Mat& z) { return z.conjugate().cwiseProduct(x).sum().real(); };
    double lower = 0.0;
    Mat zbest;
    std::vector<Mat> cands;
    for (size_t i = 0; i < K; ++i)
        if (comps[i].eval(best_parts[i]) > 1e-12 * best)
            cands.push_back(comps[i].subgradient(best_parts[i]));
    cands.push_back(x);
    for (const Mat& z : cands) {
        const double den = dual_den(z);
        if (den < 1e-300) continue;
        const double b = pair_re(z) / den;
        if (b > lower) {
            lower = b;
            zbest = z / den;
        }
    }
    // Dinkelbach-style ascent on Re<z,x>/D(z): step along x - lower*grad D,
    // rescale into the dual ball, keep improvements only.
    auto dual_grad = [&](const Mat& z) {
        Mat g = Mat::Zero(x.rows(), x.cols());
        if (agg == SumAggregator::L1) {
            size_t arg = 0;
            double best_d = -1.0;
            for (size_t i = 0; i < K; ++i) {
                const double e = comps[i].dual_eval(z);
                if (e > best_d) { best_d = e; arg = i; }
            }
            g = comps[arg].dual_subgradient(z);
        } else {
            const double den = dual_den(z);
            for (size_t i = 0; i < K; ++i)
                g += (comps[i].dual_eval(z) / std::max(den, 1e-300)) * comps[i].dual_subgradient(z);
        }
        return g;
    };
    if (zbest.size()) {
        double eta = 0.5;
        const double xn = std::max(x.norm(), 1e-300);
        for (int it = 0; it < 400 && eta > 1e-12; ++it) {
            const Mat dir = x / xn - (lower / xn) * dual_grad(zbest);
            Mat z2 = zbest + eta * dir;
            const double den = dual_den(z2);
            if (den > 1e-300) {
                z2 /= den;
                const double b = pair_re(z2);
                if (b > lower * (1.0 + 1e-15)) {
                    lower = b;
                    zbest = z2;
                    eta *= 1.2;
                    continue;
                }
            }
            eta *= 0.6;
        }
    }
    const double gap = std::max(0.0, rep.value - lower);
    const double rel = gap / std::max(rep.value, 1e-300);
    rep.duality_gap = rel;
    rep.converged = rel <= 1e-4;
    return rep;
}

std::vector<Mat> block_rows(const Mat& x, Eigen::Index m) {
    std::vector<Mat> out;
    const Eigen::Index n = x.rows() / m;
    for (Eigen::Index i = 0; i < m; ++i) out.push_back(x.middleRows(i * n, n));
    return out;
}

} // namespace nclp
