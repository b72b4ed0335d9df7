#include "core/interp.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nclp {

namespace {

constexpr double PI = std::numbers::pi;

std::string cache_key(double theta, int n) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(theta));
    std::memcpy(&bits, &theta, sizeof(bits));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "strip_%016llx_n%d.csv", (unsigned long long)bits, n);
    return buf;
}

bool load_cached(const std::string& path, StripMeasure& mu) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int side;
        double t, w;
        char c1, c2;
        if (!(ss >> side >> c1 >> t >> c2 >> w)) return false;
        if (side == 0) {
            mu.t0.push_back(t);
            mu.w0.push_back(w);
        } else {
            mu.t1.push_back(t);
            mu.w1.push_back(w);
        }
    }
    return !mu.t0.empty() && !mu.t1.empty();
}

} // namespace

double StripMeasure::mass0() const {
    double s = 0;
    for (double w : w0) s += w;
    return s;
}

double StripMeasure::mass1() const {
    double s = 0;
    for (double w : w1) s += w;
    return s;
}

StripMeasure strip_measure(double theta, int grid_size) {
    if (!(theta > 0.0 && theta < 1.0)) throw domain_error("strip_measure: theta outside (0,1)");
    if (grid_size < 64) throw domain_error("strip_measure: grid size >= 64 required");

    StripMeasure mu;
    mu.theta = theta;

    const char* cache_dir = std::getenv("NCLP_CACHE_DIR");
    std::string cache_path;
    if (cache_dir && *cache_dir) {
        cache_path = std::string(cache_dir) + "/" + cache_key(theta, grid_size);
        StripMeasure cached;
        cached.theta = theta;
        if (load_cached(cache_path, cached)) return cached;
    }

    // The point theta maps to w0 = exp(i pi theta) in the upper half plane;
    // side 0 is the positive real axis (w = e^{-pi t}), side 1 the negative
    // one. Pulled back to the boundary parameter t, the density is
    // eta w / ((w -+ xi)^2 + eta^2) with w = e^{-pi t}, which decays like
    // e^{-pi |t|} and is analytic in a strip around the real axis, so the
    // truncated midpoint rule converges geometrically. The nodes are the
    // images of a uniform grid under t = (2/pi) atanh(u).
    const double xi = std::cos(PI * theta), eta = std::sin(PI * theta);
    const double T = 18.0;
    const double h = 2.0 * T / grid_size;

    auto emit = [&](int side) {
        for (int i = 0; i < grid_size; ++i) {
            const double t = -T + (i + 0.5) * h;
            const double w = std::exp(-PI * t);
            const double sgn = side == 0 ? 1.0 : -1.0;
            const double dens = eta * w / ((sgn * w - xi) * (sgn * w - xi) + eta * eta);
            if (side == 0) {
                mu.t0.push_back(t);
                mu.w0.push_back(dens * h);
            } else {
                mu.t1.push_back(t);
                mu.w1.push_back(dens * h);
            }
        }
    };
    emit(0);
    emit(1);

    // Exact measure mass beyond |t| > T, written through the subtraction
    // identity atan(a) - atan(b) = atan((a-b)/(1+ab)) so the tiny tails do
    // not cancel in floating point.
    const double wlo = std::exp(-PI * T), whi = std::exp(PI * T);
    auto small_diff = [&](double delta, double prod) { return std::atan(delta / (1.0 + prod)) / PI; };
    const double tail_s0_far = small_diff(wlo / eta, (wlo - xi) * (-xi) / (eta * eta));
    const double tail_s0_neg = std::atan(eta / (whi - xi)) / PI;
    const double tail_s1_far = small_diff(wlo / eta, (-xi) * (-wlo - xi) / (eta * eta));
    const double tail_s1_neg = std::atan(eta / (whi + xi)) / PI;
    mu.tail_bound = std::abs(tail_s0_far) + std::abs(tail_s0_neg) + std::abs(tail_s1_far) +
                    std::abs(tail_s1_neg);

    if (!cache_path.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        dump_quadrature_csv(mu, cache_path);
    }
    return mu;
}

void dump_quadrature_csv(const StripMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    out << "# side,t,weight\n";
    char buf[96];
    for (size_t i = 0; i < mu.t0.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "0,%.17g,%.17g\n", mu.t0[i], mu.w0[i]);
        out << buf;
    }
    for (size_t i = 0; i < mu.t1.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "1,%.17g,%.17g\n", mu.t1[i], mu.w1[i]);
        out << buf;
    }
}

Complex ExpFunction::operator()(Complex z) const {
    Complex acc = 0.0;
    for (const auto& [c, a] : terms) acc += c * std::exp(a * z);
    return acc;
}

Complex reproduce(const ExpFunction& f, const StripMeasure& mu) {
    if (f.terms.size() > 16) throw domain_error("reproduce: more than 16 basis terms");
    for (const auto& [c, a] : f.terms) {
        if (std::abs(a) > 4.0 + 1e-12) throw domain_error("reproduce: unsupported basis (|a| > 4)");
        if (std::abs(a.imag()) > 3.0 + 1e-12)
            throw domain_error("reproduce: unsupported basis (|Im a| too close to pi)");
    }
    Complex acc = 0.0;
    for (size_t i = 0; i < mu.t0.size(); ++i) acc += mu.w0[i] * f(Complex(0.0, mu.t0[i]));
    for (size_t i = 0; i < mu.t1.size(); ++i) acc += mu.w1[i] * f(Complex(1.0, mu.t1[i]));
    return acc;
}

CoupleEndpoint CoupleEndpoint::row_lp(double p) {
    if (!(p >= 2.0)) throw domain_error("row_lp endpoint: need 2 <= p <= inf");
    return {2.0, 0.5 - 0.5 * inv(p), 0.5 * inv(p)};
}

CoupleEndpoint CoupleEndpoint::col_lp(double p) {
    if (!(p >= 2.0)) throw domain_error("col_lp endpoint: need 2 <= p <= inf");
    return {2.0, 0.5 * inv(p), 0.5 - 0.5 * inv(p)};
}

double endpoint_norm(const CoupleEndpoint& e, const Mat& y, const Density& d) {
    const Mat l = d.power(e.dl), r = d.power(e.dr);
    return schatten_norm(l * y * r, e.p);
}

namespace {

bool commutes(const Mat& a, const Mat& b) {
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300) *
                         std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    return (a * b - b * a).cwiseAbs().maxCoeff() <= 1e-10 * std::max(scale, 1e-300);
}

} // namespace

double couple_norm_closed(const Mat& x, const CoupleSpec& couple, const Density& d) {
    const double th = couple.theta;
    if (!(th >= 0.0 && th <= 1.0)) throw domain_error("couple_norm_closed: theta outside [0,1]");
    const CoupleEndpoint &e0 = couple.e0, &e1 = couple.e1;
    const double dl = (1.0 - th) * e0.dl + th * e1.dl;
    const double dr = (1.0 - th) * e0.dr + th * e1.dr;
    const double ipt = (1.0 - th) * inv(e0.p) + th * inv(e1.p);
    const double pt = ipt == 0.0 ? INF : 1.0 / ipt;

    const bool hilbert = e0.p == 2.0 && e1.p == 2.0;
    if (!hilbert && !commutes(x, d.matrix()))
        throw domain_error("no closed form: endpoints with p != 2 require x commuting with d");
    const Mat l = d.power(dl), r = d.power(dr);
    return schatten_norm(l * x * r, pt);
}

PowerCompetitor PowerCompetitor::constant(const Mat& x) {
    PowerCompetitor f;
    f.alpha = x;
    f.beta = Mat::Identity(x.rows(), x.rows());
    f.gamma = Mat::Identity(x.cols(), x.cols());
    f.delta = Mat::Identity(x.cols(), x.cols());
    return f;
}

namespace {

Mat psd_complex_power(const Mat& b, Complex w) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (b + b.adjoint().eval()));
    const Vec ev = es.eigenvalues();
    if (ev.minCoeff() <= 0.0)
        throw domain_error("competitor: beta/delta factors must be positive definite");
    Eigen::VectorXcd pw(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) pw[i] = std::exp(w * std::log(ev[i]));
    return es.eigenvectors() * pw.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

Mat PowerCompetitor::at(Complex z) const {
    Mat f = alpha * psd_complex_power(beta, Complex(1.0, 0.0) - z) * gamma * psd_complex_power(delta, z);
    if (shift != Complex(0.0, 0.0)) f *= std::exp(shift * z);
    return f;
}

double competitor_upper_bound(const Mat& x, const CoupleSpec& couple, const Density& d,
                              const PowerCompetitor& f, const StripMeasure& mu) {
    PowerCompetitor g = f;
    // normalise the scalar drift so that the shift factor is exp(shift (z - theta))
    if (g.shift != Complex(0.0, 0.0)) {
        // fold exp(-shift*theta) into alpha
        g.alpha = g.alpha * std::exp(-g.shift * couple.theta);
    }
    const Mat at_theta = g.at(Complex(couple.theta, 0.0));
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if ((at_theta - x).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw domain_error("competitor: infeasible factorization, f(theta) != x");

    double acc = 0.0;
    for (size_t i = 0; i < mu.t0.size(); ++i) {
        const double nrm = endpoint_norm(couple.e0, g.at(Complex(0.0, mu.t0[i])), d);
        acc += mu.w0[i] * nrm * nrm;
    }
    for (size_t i = 0; i < mu.t1.size(); ++i) {
        const double nrm = endpoint_norm(couple.e1, g.at(Complex(1.0, mu.t1[i])), d);
        acc += mu.w1[i] * nrm * nrm;
    }
    return std::sqrt(acc);
}

PowerCompetitor make_extremal_competitor(const Mat& x, const CoupleSpec& couple, const Density& d) {
    if (!commutes(x, d.matrix()))
        throw domain_error("extremal competitor requires x commuting with d");
    Eigen::SelfAdjointEigenSolver<Mat> es(d.matrix());
    const Mat u = es.eigenvectors();
    const Mat xd = u.adjoint() * x * u;
    const Vec delta_ev = es.eigenvalues();
    const Eigen::Index n = d.dim();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (delta_ev[i] <= 0) throw domain_error("extremal competitor requires d > 0");
        if (xd(i, i).real() <= 0 || std::abs(xd(i, i).imag()) > 1e-10)
            throw domain_error("extremal competitor requires x > 0 on the joint eigenbasis");
    }

    const double th = couple.theta;
    const double a0 = couple.e0.dl, b0 = couple.e0.dr, a1 = couple.e1.dl, b1 = couple.e1.dr;
    const double at = (1 - th) * a0 + th * a1, bt = (1 - th) * b0 + th * b1;
    const double ipt = (1 - th) * inv(couple.e0.p) + th * inv(couple.e1.p);
    const double pt = ipt == 0.0 ? INF : 1.0 / ipt;

    // Closed-form target M and the normalized element F_i / M.
    Vec fvals(n);
    for (Eigen::Index i = 0; i < n; ++i)
        fvals[i] = std::pow(delta_ev[i], at + bt) * xd(i, i).real();
    double m_norm;
    if (std::isinf(pt)) m_norm = fvals.maxCoeff();
    else {
        double s = 0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::pow(fvals[i], pt);
        m_norm = std::pow(s, 1.0 / pt);
    }

    // f(z)_i = x_i * delta_i^{g(z)} * (F_i/M)^{h(z)} with affine g, h,
    // g(theta) = h(theta) = 0, matching every boundary norm to M.
    // h(j) = p_theta / p_j - 1 reshapes the Schatten exponent between the
    // boundary lines; g(j) does the same for the density powers.
    const double g0 = (at + bt) - (a0 + b0), g1 = (at + bt) - (a1 + b1);
    const double h0 = ipt == 0.0 ? 0.0 : inv(couple.e0.p) / ipt - 1.0;
    const double h1 = ipt == 0.0 ? 0.0 : inv(couple.e1.p) / ipt - 1.0;

    Vec beta_d(n), delta_d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ratio = fvals[i] / m_norm;
        beta_d[i] = std::pow(delta_ev[i], g0) * std::pow(ratio, h0);
        delta_d[i] = std::pow(delta_ev[i], g1) * std::pow(ratio, h1);
    }
    PowerCompetitor f;
    f.alpha = x;
    f.beta = u * beta_d.cast<Complex>().asDiagonal() * u.adjoint();
    f.gamma = Mat::Identity(n, n);
    f.delta = u * delta_d.cast<Complex>().asDiagonal() * u.adjoint();
    return f;
}

} // namespace nclp
