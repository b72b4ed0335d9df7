#pragma once

// Dense complex matrix algebra, functional calculus on positive matrices,
// tensor and direct-sum constructions, conditional expectations onto matrix
// factors. Everything here is a pure function on immutable values.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nclp {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;

// Thrown on contract violations (bad dimensions, NaN input, singular density
// with negative exponent, ...). The C API maps it to an error code.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void check_finite(const Mat& m, const char* what);

// Positive semidefinite matrix with a declared total mass (its trace).
// mass == 1 models a state, mass == k_n models a finite weight psi_n.
class Density {
  public:
    Density(Mat m, double mass);

    const Mat& matrix() const { return mat_; }
    double mass() const { return mass_; }
    Eigen::Index dim() const { return mat_.rows(); }

    // Eigenvalues ascending, clipped to [0, inf).
    const Vec& eigenvalues() const { return evals_; }
    const Mat& eigenvectors() const { return evecs_; }

    bool strictly_positive(double rel_tol = 1e-14) const;

    // d^a via functional calculus; 0^a = 0 for a > 0, error for a < 0 on a
    // singular density.
    Mat power(double a) const;

    // Same matrix declared as a state (divides by mass).
    Density normalized() const;

    static Density from_diagonal(const Vec& gammas);

  private:
    Mat mat_;
    double mass_;
    Vec evals_;
    Mat evecs_;
};

// N = C*1 or N = M_m (x) 1 inside M_m (x) M_n.
struct SubalgebraSpec {
    enum Kind { Scalars, LeftMatrixFactor } kind = Scalars;
    Eigen::Index m = 1;

    static SubalgebraSpec scalars() { return {Scalars, 1}; }
    static SubalgebraSpec left_factor(Eigen::Index m) {
        if (m < 1) throw domain_error("LeftMatrixFactor requires m >= 1");
        return {LeftMatrixFactor, m};
    }
};

Mat frac_power(const Density& d, double a);

// E_m = id (x) phi : M_m (x) M_n -> M_m, entrywise E(x)_{ij} = tr(d x_{ij}).
Mat cond_expect(const Mat& x, const Density& d, Eigen::Index m);

Mat tensor_product(const Mat& a, const Mat& b);
Mat tensor_power(const std::vector<Mat>& xs);
Mat direct_sum(const Mat& a, const Mat& b);

Mat random_matrix(Eigen::Index rows, Eigen::Index cols, uint64_t seed);
Mat random_hermitian(Eigen::Index n, uint64_t seed);
Density random_state(Eigen::Index n, uint64_t seed);
// Strictly positive state: Wishart plus a floor on the spectrum.
Density random_positive_state(Eigen::Index n, uint64_t seed, double floor = 0.05);

inline Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

} // namespace nclp
