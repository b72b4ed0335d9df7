#include "core/matrix.hpp"

#include "core/rng.hpp"

#include <cmath>

namespace nclp {

void check_finite(const Mat& m, const char* what) {
    if (!m.allFinite())
        throw domain_error(std::string(what) + ": entries must be finite");
}

Density::Density(Mat m, double mass) : mat_(std::move(m)), mass_(mass) {
    if (mat_.rows() != mat_.cols()) throw domain_error("Density: matrix must be square");
    check_finite(mat_, "Density");
    if (!(mass_ > 0) || !std::isfinite(mass_)) throw domain_error("Density: mass must be positive");

    const double scale = mat_.cwiseAbs().maxCoeff();
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        throw domain_error("Density: matrix must be Hermitian");
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());

    Eigen::SelfAdjointEigenSolver<Mat> es(mat_);
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();

    // Numerical PSD drift is tolerated within -1e-12*||d|| and clipped to 0;
    // anything more negative is a genuine violation.
    const double norm = std::max(std::abs(evals_.maxCoeff()), std::abs(evals_.minCoeff()));
    if (evals_.minCoeff() < -1e-12 * std::max(norm, 1.0))
        throw domain_error("Density: matrix is not positive semidefinite");
    bool clipped = false;
    for (Eigen::Index i = 0; i < evals_.size(); ++i)
        if (evals_[i] < 0) { evals_[i] = 0; clipped = true; }
    if (clipped) mat_ = evecs_ * evals_.asDiagonal() * evecs_.adjoint();

    const double tr = mat_.trace().real();
    if (std::abs(tr - mass_) > 1e-10 * std::max(std::abs(mass_), 1.0))
        throw domain_error("Density: trace does not match declared mass");
}

bool Density::strictly_positive(double rel_tol) const {
    return evals_.minCoeff() > rel_tol * std::max(evals_.maxCoeff(), 1e-300);
}

Mat Density::power(double a) const {
    if (a == 0.0) return Mat::Identity(dim(), dim());
    const double top = evals_.maxCoeff();
    Vec powered(evals_.size());
    for (Eigen::Index i = 0; i < evals_.size(); ++i) {
        const double ev = evals_[i];
        if (ev <= top * 1e-300) {
            if (a < 0) throw domain_error("non-invertible density");
            powered[i] = 0.0; // 0^a = 0 convention for a > 0
        } else {
            powered[i] = std::pow(ev, a);
        }
    }
    return evecs_ * powered.asDiagonal() * evecs_.adjoint();
}

Density Density::normalized() const {
    if (mass_ == 1.0) return *this;
    return Density(mat_ / mass_, 1.0);
}

Density Density::from_diagonal(const Vec& gammas) {
    Mat m = gammas.cast<Complex>().asDiagonal();
    return Density(m, gammas.sum());
}

Mat frac_power(const Density& d, double a) { return d.power(a); }

Mat cond_expect(const Mat& x, const Density& d, Eigen::Index m) {
    const Eigen::Index n = d.dim();
    if (x.rows() != x.cols() || x.rows() != m * n)
        throw domain_error("cond_expect: x must be square of dimension m*n");
    if (std::abs(d.mass() - 1.0) > 1e-10)
        throw domain_error("cond_expect: density must be a state (mass 1)");
    Mat out(m, m);
    const Mat dt = d.matrix().transpose();
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out(i, j) = x.block(i * n, j * n, n, n).cwiseProduct(dt).sum();
    return out;
}

Mat tensor_product(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat tensor_power(const std::vector<Mat>& xs) {
    if (xs.empty()) throw domain_error("tensor_power: empty list");
    Mat out = xs[0];
    check_finite(out, "tensor_power");
    for (size_t k = 1; k < xs.size(); ++k) {
        check_finite(xs[k], "tensor_power");
        out = tensor_product(out, xs[k]);
    }
    return out;
}

Mat direct_sum(const Mat& a, const Mat& b) {
    check_finite(a, "direct_sum");
    check_finite(b, "direct_sum");
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, uint64_t seed) {
    auto gen = seeded_stream(seed, "random_matrix");
    std::normal_distribution<double> g(0.0, 1.0);
    Mat out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = g(gen), im = g(gen);
            out(i, j) = Complex(re, im);
        }
    return out;
}

Mat random_hermitian(Eigen::Index n, uint64_t seed) {
    Mat g = random_matrix(n, n, seed);
    return 0.5 * (g + g.adjoint().eval());
}

Density random_state(Eigen::Index n, uint64_t seed) {
    Mat g = random_matrix(n, n, splitmix64(seed ^ 0x5741534844ULL));
    Mat w = g * g.adjoint();
    w /= w.trace().real();
    return Density(w, 1.0);
}

Density random_positive_state(Eigen::Index n, uint64_t seed, double floor) {
    Mat g = random_matrix(n, n, splitmix64(seed ^ 0x504f534954ULL));
    Mat w = g * g.adjoint() + floor * Mat::Identity(n, n);
    w /= w.trace().real();
    return Density(w, 1.0);
}

} // namespace nclp
