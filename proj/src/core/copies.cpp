#include "core/copies.hpp"

#include "core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nclp {

int SetPartition::ground_size() const {
    int n = 0;
    for (const auto& b : blocks) n += (int)b.size();
    return n;
}

bool SetPartition::is_even() const {
    for (const auto& b : blocks)
        if (b.size() % 2 != 0) return false;
    return true;
}

std::string SetPartition::format() const {
    std::ostringstream out;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (i) out << "|";
        for (size_t j = 0; j < blocks[i].size(); ++j) {
            if (j) out << " ";
            out << blocks[i][j];
        }
    }
    return out.str();
}

std::vector<SetPartition> enumerate_partitions(int m) {
    if (m < 1 || m > 8) throw domain_error("enumerate_partitions: m must be in [1,8]");
    // restricted growth strings
    std::vector<SetPartition> out;
    std::vector<int> a(m, 0);
    while (true) {
        int nblocks = 1 + *std::max_element(a.begin(), a.end());
        SetPartition p;
        p.blocks.assign(nblocks, {});
        for (int i = 0; i < m; ++i) p.blocks[a[i]].push_back(i + 1);
        out.push_back(std::move(p));
        // next RGS
        int i = m - 1;
        for (; i > 0; --i) {
            int prefix_max = *std::max_element(a.begin(), a.begin() + i);
            if (a[i] <= prefix_max) { ++a[i]; break; }
        }
        if (i == 0) break;
        std::fill(a.begin() + i + 1, a.end(), 0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CopySystem

CopySystem::CopySystem(Density base_state, int copies, bool symmetrized, Eigen::Index cap)
    : d_(std::move(base_state)), k_(copies), sym_(symmetrized) {
    if (k_ < 1) throw domain_error("CopySystem: copies >= 1");
    double dim = 1.0;
    for (int j = 0; j < k_; ++j) dim *= (double)slot_dim();
    if (dim > (double)cap) throw domain_error("CopySystem: ambient dimension cap exceeded");
}

Eigen::Index CopySystem::ambient_dim() const {
    Eigen::Index dim = 1;
    for (int j = 0; j < k_; ++j) dim *= slot_dim();
    return dim;
}

Mat CopySystem::embed_copy(const Mat& x, int j) const {
    if (j < 1 || j > k_) throw domain_error("embed_copy: slot index out of range");
    if (x.rows() != base_dim() || x.cols() != base_dim())
        throw domain_error("embed_copy: base dimension mismatch");
    std::vector<Mat> factors;
    const Mat slot_id = Mat::Identity(slot_dim(), slot_dim());
    for (int i = 1; i <= k_; ++i) {
        if (i != j) {
            factors.push_back(slot_id);
        } else if (sym_) {
            factors.push_back(direct_sum(x, Mat(-x)));
        } else {
            factors.push_back(x);
        }
    }
    return tensor_power(factors);
}

Density CopySystem::product_state() const {
    std::vector<Mat> factors;
    Mat slot = d_.matrix();
    if (sym_) slot = 0.5 * direct_sum(d_.matrix(), d_.matrix());
    for (int i = 0; i < k_; ++i) factors.push_back(slot);
    return Density(tensor_power(factors), 1.0);
}

std::vector<Mat> CopySystem::sector_sum(const Mat& x, const SignPattern* signs) const {
    if (x.rows() != base_dim() || x.cols() != base_dim())
        throw domain_error("sector_sum: base dimension mismatch");
    const Eigen::Index n = base_dim();
    Eigen::Index nk = 1;
    for (int j = 0; j < k_; ++j) nk *= n;

    // slot embeddings of x inside the plain tensor power M_{n^k}
    std::vector<Mat> slot_embed(k_);
    for (int j = 0; j < k_; ++j) {
        std::vector<Mat> factors;
        for (int i = 0; i < k_; ++i) factors.push_back(i == j ? x : Mat(Mat::Identity(n, n)));
        slot_embed[j] = tensor_power(factors);
    }
    std::vector<double> eps(k_, 1.0);
    if (signs) {
        if ((int)signs->eps.size() != k_) throw domain_error("sector_sum: bad sign pattern length");
        for (int j = 0; j < k_; ++j) {
            if (signs->eps[j] != 1 && signs->eps[j] != -1)
                throw domain_error("sector_sum: signs must be +-1");
            eps[j] = signs->eps[j];
        }
    }
    std::vector<Mat> out;
    const long secs = sectors();
    for (long w = 0; w < secs; ++w) {
        Mat block = Mat::Zero(nk, nk);
        for (int j = 0; j < k_; ++j) {
            const double sgn = (sym_ && ((w >> j) & 1)) ? -1.0 : 1.0;
            block += eps[j] * sgn * slot_embed[j];
        }
        out.push_back(std::move(block));
    }
    return out;
}

Mat CopySystem::sector_state_block() const {
    std::vector<Mat> factors;
    for (int i = 0; i < k_; ++i) factors.push_back(d_.matrix());
    return tensor_power(factors) / (double)sectors();
}

// ---------------------------------------------------------------------------
// norms of copy sums

namespace {

double blockdiag_state_lp(const std::vector<Mat>& blocks, const Mat& state_block, double p) {
    if (std::isinf(p)) {
        double best = 0.0;
        for (const Mat& b : blocks) best = std::max(best, operator_norm(b));
        return best;
    }
    const Density bd(state_block, state_block.trace().real());
    const Mat w = bd.power(0.5 / p);
    double acc = 0.0;
    for (const Mat& b : blocks) {
        const double v = schatten_norm(w * b * w, p);
        acc += std::pow(v, p);
    }
    return std::pow(acc, 1.0 / p);
}

// OH-valued sup norm of a copy family, exploiting the sector decomposition:
// the superoperator splits over XOR patterns tau, with per-pattern map
// S_tau(g) = sum_j s_j B_j g B_j^*, B_j = W X_j^* W^{-1}.
double oh_valued_sectors(const Mat& x, const CopySystem& sys, const SolveOptions& opts,
                         long* iterations) {
    const Eigen::Index n = sys.base_dim();
    const int k = sys.copies();
    Eigen::Index nk = 1;
    for (int j = 0; j < k; ++j) nk *= n;

    const Mat state_block = sys.sector_state_block();
    const Density bd(state_block, state_block.trace().real());
    if (!bd.strictly_positive(1e-13))
        throw domain_error("oh copy norm: strictly positive base state required");
    const Mat w = bd.power(0.25), winv = bd.power(-0.25);

    std::vector<Mat> bmats(k);
    {
        std::vector<Mat> slot(k);
        for (int j = 0; j < k; ++j) {
            std::vector<Mat> factors;
            for (int i = 0; i < k; ++i) factors.push_back(i == j ? x : Mat(Mat::Identity(n, n)));
            slot[j] = tensor_power(factors);
        }
        for (int j = 0; j < k; ++j) bmats[j] = w * slot[j].adjoint() * winv;
    }

    const long patterns = sys.symmetrized() ? (1L << k) : 1;
    auto s_tau = [&](long tau, const Mat& g) {
        Mat acc = Mat::Zero(nk, nk);
        for (int j = 0; j < k; ++j) {
            const double sgn = ((tau >> j) & 1) ? -1.0 : 1.0;
            acc += sgn * bmats[j] * g * bmats[j].adjoint();
        }
        return acc;
    };
    auto s_tau_adj = [&](long tau, const Mat& z) {
        Mat acc = Mat::Zero(nk, nk);
        for (int j = 0; j < k; ++j) {
            const double sgn = ((tau >> j) & 1) ? -1.0 : 1.0;
            acc += sgn * bmats[j].adjoint() * z * bmats[j];
        }
        return acc;
    };

    const long iters = opts.max_iters > 0 ? opts.max_iters : 160;
    std::vector<double> svals(patterns, 0.0);
    std::vector<Mat> svecs(patterns);
    for (long tau = 0; tau < patterns; ++tau) {
        Mat g;
        if (tau == 0) {
            g = Mat::Identity(nk, nk); // PSD start keeps the CP iterates feasible
        } else {
            auto gen = seeded_stream(opts.seed, "oh_sector/" + std::to_string(tau));
            std::normal_distribution<double> gd(0.0, 1.0);
            g = Mat(nk, nk);
            for (Eigen::Index i = 0; i < nk; ++i)
                for (Eigen::Index j = 0; j < nk; ++j) g(i, j) = Complex(gd(gen), gd(gen));
        }
        g /= g.norm();
        double cur = s_tau(tau, g).norm();
        for (long it = 0; it < iters; ++it) {
            if (iterations) ++*iterations;
            Mat nxt = s_tau_adj(tau, s_tau(tau, g));
            if (tau == 0) nxt = 0.5 * (nxt + nxt.adjoint().eval());
            const double nn = nxt.norm();
            if (nn < 1e-300) break;
            nxt /= nn;
            const double val = s_tau(tau, nxt).norm();
            if (val <= cur * (1.0 + 1e-14) && it > 8) { cur = std::max(cur, val); break; }
            g = nxt;
            cur = val;
        }
        svals[tau] = cur;
        svecs[tau] = g;
    }

    // Feasible value: diagonal sectors realize the tau = 0 rate directly; an
    // off-diagonal pattern needs the PSD completion [[P, beta],[beta*, Q]].
    double best = svals[0];
    long best_tau = 0;
    for (long tau = 1; tau < patterns; ++tau)
        if (svals[tau] > svals[best_tau]) best_tau = tau;
    if (best_tau != 0) {
        const Mat beta = winv * svecs[best_tau] * winv;
        Eigen::BDCSVD<Mat> svd(beta, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Mat p = svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixU().adjoint();
        const Mat q = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
        const Mat gp = w * p * w, gq = w * q * w, gb = svecs[best_tau];
        const double num = std::sqrt(std::pow(s_tau(0, gp).norm(), 2) + 2.0 * std::pow(s_tau(best_tau, gb).norm(), 2) +
                                     std::pow(s_tau(0, gq).norm(), 2));
        const double den = std::sqrt(gp.squaredNorm() + 2.0 * gb.squaredNorm() + gq.squaredNorm());
        if (den > 0) best = std::max(best, num / den);
    }
    return std::sqrt(best);
}

} // namespace

double sum_copies_norm(const Mat& x, const CopySystem& sys, double p, const SignPattern* signs,
                       VectorMode mode, const SolveOptions& opts) {
    if (mode == VectorMode::Plain) {
        const auto blocks = sys.sector_sum(x, signs);
        return blockdiag_state_lp(blocks, sys.sector_state_block(), p);
    }
    long iters = 0;
    return oh_valued_sectors(x, sys, opts, &iters);
}

SignSymmetryReport sign_symmetry_check(const Mat& x, const CopySystem& sys, double p) {
    if (!sys.symmetrized()) throw domain_error("sign_symmetry_check: symmetrized copies required");
    if (sys.copies() > 8) throw domain_error("sign_symmetry_check: k <= 8 for exhaustive enumeration");
    const int k = sys.copies();
    const double base = sum_copies_norm(x, sys, p, nullptr, VectorMode::Plain);
    SignSymmetryReport rep;
    rep.min_ratio = 1.0;
    rep.max_ratio = 1.0;
    for (long bits = 0; bits < (1L << k); ++bits) {
        SignPattern sp;
        sp.eps.resize(k);
        for (int j = 0; j < k; ++j) sp.eps[j] = ((bits >> j) & 1) ? -1 : 1;
        const double v = sum_copies_norm(x, sys, p, &sp, VectorMode::Plain);
        const double ratio = v / base;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.patterns;
    }
    rep.within_band = rep.min_ratio >= 0.5 - 1e-9 && rep.max_ratio <= 2.0 + 1e-9;
    return rep;
}

RosenthalReport rosenthal_bound_check(const Mat& x, const CopySystem& sys, double p, double q,
                                      const SolveOptions& opts) {
    if (!(p >= 1.0 && p <= 2.0)) throw domain_error("rosenthal_bound_check: p in [1,2]");
    if (q != 2.0) throw domain_error("rosenthal_bound_check: only the q = 2 path is implemented");
    if (!sys.symmetrized()) throw domain_error("rosenthal_bound_check: symmetrized copies required");

    RosenthalReport rep;
    rep.lhs = sum_copies_norm(x, sys, p, nullptr, VectorMode::OhValued, opts);

    // K-functional on the single-copy algebra M (+) M with state (phi (+) phi)/2.
    const Eigen::Index n = sys.base_dim();
    const Mat slot = 0.5 * direct_sum(sys.base_state().matrix(), sys.base_state().matrix());
    const Density phi(slot, 1.0);
    if (!phi.strictly_positive(1e-13))
        throw domain_error("rosenthal_bound_check: strictly positive base state required");
    const Mat y = direct_sum(x, Mat(-x));
    const double k = sys.copies();

    std::vector<WeightedSchattenNorm> comps(3);
    const Mat wp = phi.power(0.5 * inv(p));
    comps[0] = {k, p, wp, wp};
    comps[1] = {std::sqrt(k), 2.0, phi.power(0.5), Mat()};
    comps[2] = {std::sqrt(k), 2.0, Mat(), phi.power(0.5)};
    const OptimizerReport sum = sum_norm(y, comps, SumAggregator::L1, opts);
    rep.rhs = sum.value;
    rep.rhs_converged = sum.converged;
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
    (void)n;
    return rep;
}

// ---------------------------------------------------------------------------
// classical Monte Carlo

namespace {

double abs_moment(McDistribution dist, double r) {
    switch (dist) {
        case McDistribution::Gaussian:
            // E|g|^r for standard normal
            return std::pow(2.0, r / 2.0) * std::tgamma((r + 1.0) / 2.0) / std::sqrt(std::acos(-1.0));
        case McDistribution::Exponential:
            return std::tgamma(1.0 + r);
        case McDistribution::TwoPoint:
            return 1.0;
    }
    return 0.0;
}

} // namespace

McReport rosenthal_classical_mc(McDistribution dist, int n, double p, double q, long samples,
                                uint64_t seed) {
    if (!(q >= 1.0 && q <= p) || std::isinf(p)) throw domain_error("rosenthal_classical_mc: need 1 <= q <= p < inf");
    if (samples < 10000) throw domain_error("rosenthal_classical_mc: samples >= 10^4");
    McReport rep;
    rep.samples = samples;
    rep.seed = seed;

    auto gen = seeded_stream(seed, "mc/draws");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<int> twop(0, 1);

    std::vector<double> a(samples);
    for (long s = 0; s < samples; ++s) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double f = 0.0;
            switch (dist) {
                case McDistribution::Gaussian: f = gauss(gen); break;
                case McDistribution::Exponential: f = expo(gen); break;
                case McDistribution::TwoPoint: f = twop(gen) ? 1.0 : -1.0; break;
            }
            acc += std::pow(std::abs(f), q);
        }
        a[s] = std::pow(acc, p / q);
    }
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / samples;
    rep.lhs = std::pow(mean_a, 1.0 / p);
    rep.rhs = std::pow(n * abs_moment(dist, p), 1.0 / p) + std::pow(n * abs_moment(dist, q), 1.0 / q);
    rep.ratio = rep.lhs / rep.rhs;

    // bootstrap over the sample-level statistics
    auto bgen = seeded_stream(seed, "mc/bootstrap");
    std::uniform_int_distribution<long> pick(0, samples - 1);
    std::vector<double> boot(1000);
    for (int b = 0; b < 1000; ++b) {
        double acc = 0.0;
        for (long s = 0; s < samples; ++s) acc += a[pick(bgen)];
        boot[b] = std::pow(acc / samples, 1.0 / p) / rep.rhs;
    }
    std::sort(boot.begin(), boot.end());
    rep.ci_lo = boot[24];
    rep.ci_hi = boot[974];
    return rep;
}

// ---------------------------------------------------------------------------
// Poisson / CLT moment combinatorics

namespace {

Complex weight_of(const Density& weight, const Mat& y) {
    return (weight.matrix() * y).trace();
}

Complex block_product_weight(const std::vector<Mat>& xs, const std::vector<int>& block,
                             const Density& weight) {
    Mat prod = xs[block[0] - 1];
    for (size_t i = 1; i < block.size(); ++i) prod = prod * xs[block[i] - 1];
    return weight_of(weight, prod);
}

} // namespace

Complex poisson_moment(const std::vector<Mat>& xs, const Density& weight) {
    const int m = (int)xs.size();
    if (m < 1 || m > 8) throw domain_error("poisson_moment: m must be in [1,8]");
    for (const Mat& x : xs)
        if (x.rows() != weight.dim() || x.cols() != weight.dim())
            throw domain_error("poisson_moment: dimension mismatch");
    Complex acc = 0.0;
    for (const auto& part : enumerate_partitions(m)) {
        Complex term = 1.0;
        for (const auto& b : part.blocks) term *= block_product_weight(xs, b, weight);
        acc += term;
    }
    return acc;
}

namespace {

Complex clt_even_sum(const std::vector<Mat>& xs, const Density& weight, long s, bool limit) {
    const int m = (int)xs.size();
    if (m < 1 || m > 8) throw domain_error("clt moment: m must be in [1,8]");
    for (const Mat& x : xs)
        if (x.rows() != weight.dim() || x.cols() != weight.dim())
            throw domain_error("clt moment: dimension mismatch");
    Complex acc = 0.0;
    for (const auto& part : enumerate_partitions(m)) {
        if (!part.is_even()) continue;
        const long r = (long)part.blocks.size();
        double coeff = 1.0;
        if (!limit) {
            if (r > s) continue; // no injective slot assignment
            for (long i = 0; i < r; ++i) coeff *= (double)(s - i) / (double)s;
        }
        Complex term = coeff;
        for (const auto& b : part.blocks) term *= block_product_weight(xs, b, weight);
        acc += term;
    }
    return acc;
}

} // namespace

Complex clt_moment_finite_s(const std::vector<Mat>& xs, const Density& weight, long s) {
    if (s < 1) throw domain_error("clt_moment_finite_s: s >= 1");
    return clt_even_sum(xs, weight, s, false);
}

Complex clt_moment_limit(const std::vector<Mat>& xs, const Density& weight) {
    return clt_even_sum(xs, weight, 1, true);
}

Complex clt_simulated_moment(const std::vector<Mat>& xs, const Density& weight, long s) {
    const int m = (int)xs.size();
    if (m < 1 || m > 8) throw domain_error("clt_simulated_moment: m in [1,8]");
    const double k = weight.mass();
    const double lambda = k / (double)s;
    if (lambda > 1.0 + 1e-12)
        throw domain_error("clt_simulated_moment: requires s >= mass of the weight");
    double tuples = 1.0;
    for (int i = 0; i < m; ++i) tuples *= (double)s;
    if (tuples > 4e6) throw domain_error("clt_simulated_moment: s^m too large");
    const Density state = weight.normalized();

    std::vector<long> idx(m, 0);
    Complex acc = 0.0;
    while (true) {
        // group positions by slot, preserving order
        Complex term = 1.0;
        for (long slot = 0; slot < s && term != Complex(0, 0); ++slot) {
            Mat prod;
            int count = 0;
            for (int i = 0; i < m; ++i) {
                if (idx[i] != slot) continue;
                prod = count == 0 ? xs[i] : Mat(prod * xs[i]);
                ++count;
            }
            if (count == 0) continue;
            if (count % 2 != 0) { term = 0.0; break; } // (x,-x) average kills odd powers
            term *= lambda * weight_of(state, prod);
        }
        acc += term;
        int i = m - 1;
        for (; i >= 0; --i) {
            if (++idx[i] < s) break;
            idx[i] = 0;
        }
        if (i < 0) break;
    }
    return acc;
}

Complex clt_matrix_moment(const std::vector<Mat>& xs, const Density& weight, long s) {
    const int m = (int)xs.size();
    if (m < 1 || m > 8) throw domain_error("clt_matrix_moment: m in [1,8]");
    const Eigen::Index n = weight.dim();
    const double k = weight.mass();
    const double lambda = k / (double)s;
    if (lambda > 1.0 + 1e-12) throw domain_error("clt_matrix_moment: requires s >= mass");
    double dim = 1.0;
    for (long j = 0; j < s; ++j) dim *= (double)n;
    if (dim > 64.0) throw domain_error("clt_matrix_moment: n^s too large");
    const Eigen::Index nk = (Eigen::Index)dim;
    const Density state = weight.normalized();

    // slot embeddings of each x_i into M_{n^s}
    std::vector<std::vector<Mat>> slot_embed(m, std::vector<Mat>(s));
    for (int i = 0; i < m; ++i)
        for (long j = 0; j < s; ++j) {
            std::vector<Mat> factors;
            for (long l = 0; l < s; ++l)
                factors.push_back(l == j ? xs[i] : Mat(Mat::Identity(n, n)));
            slot_embed[i][j] = tensor_power(factors);
        }
    std::vector<Mat> state_factors;
    for (long j = 0; j < s; ++j) state_factors.push_back(state.matrix());
    const Mat state_dense = tensor_power(state_factors);

    // sectors: per slot a pair (tau, omega): tau = indicator support bit of
    // the two-point model of L_inf[0,1], omega = the (+),(-) component.
    Complex acc = 0.0;
    const long nsec = 1L << (2 * s);
    for (long sec = 0; sec < nsec; ++sec) {
        double wgt = 1.0;
        bool any_in = false;
        for (long j = 0; j < s; ++j) {
            const bool in = (sec >> (2 * j)) & 1;
            wgt *= (in ? lambda : 1.0 - lambda) * 0.5;
            any_in = any_in || in;
        }
        if (wgt == 0.0) continue;
        if (!any_in) continue; // u(x) vanishes on this sector
        Mat prod = Mat::Identity(nk, nk);
        for (int i = 0; i < m; ++i) {
            Mat u = Mat::Zero(nk, nk);
            for (long j = 0; j < s; ++j) {
                const bool in = (sec >> (2 * j)) & 1;
                if (!in) continue;
                const bool minus = (sec >> (2 * j + 1)) & 1;
                u += (minus ? -1.0 : 1.0) * slot_embed[i][j];
            }
            prod = prod * u;
        }
        acc += wgt * (state_dense * prod).trace();
    }
    return acc;
}

double touchard_number(int m, double x) {
    if (m < 0) throw domain_error("touchard_number: m >= 0");
    std::vector<double> t(m + 1);
    t[0] = 1.0;
    for (int r = 0; r < m; ++r) {
        double acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= r; ++j) {
            acc += binom * t[j];
            binom = binom * (double)(r - j) / (double)(j + 1);
        }
        t[r + 1] = x * acc;
    }
    return t[m];
}

} // namespace nclp
