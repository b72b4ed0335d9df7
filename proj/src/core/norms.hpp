#pragma once

// Norm solvers: Schatten, weighted L_p (Kosaki symmetric embedding),
// asymmetric factorization norms, conditional (unit-ball supremum) norms,
// row/column square functions, OH-valued and mixed-theta sup norms, and
// sum-space / K-functional norms by convex duality.
//
// Sup-type norms are nonconvex maximizations: solvers return the value of the
// best feasible point found, so results are certified lower bounds.
// Inf-type norms return certified upper bounds (the final feasible
// factorization or decomposition).

#include "core/matrix.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace nclp {

constexpr double INF = std::numeric_limits<double>::infinity();

// 1/p with exact 0 at p = infinity.
inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Conjugate exponent, 1/p + 1/p' = 1.
double conjugate_exponent(double p);

struct OptimizerReport {
    double value = 0.0;
    long iterations = 0;
    std::optional<double> duality_gap;
    int restarts = 0;
    bool converged = false;
    uint64_t seed = 0;
};

struct SolveOptions {
    uint64_t seed = 0;
    int restarts = 0;      // 0 = per-operation default
    long max_iters = 0;    // 0 = per-operation default
    double tol = 1e-11;
};

enum class DensityPlacement { Symmetric, Left, Right, BothQuarter };
enum class Side { Row, Column };

// Descriptor of a conditional / amalgamated norm computation.
struct NormSpec {
    double p = INF;
    double q = INF;
    double u = INF;
    double v = INF;
    // Reported level; the conditional solver takes its matrix level from the
    // subalgebra (LeftMatrixFactor(m) supremizes over S_u^m / S_v^m balls).
    Eigen::Index amplification = 1;
    std::optional<Density> density;
    DensityPlacement placement = DensityPlacement::Symmetric;
    SubalgebraSpec subalgebra = SubalgebraSpec::scalars();

    // 1/s = 1/u + 1/p + 1/v (conditional inner index).
    double conditional_s() const;
    // 1/p = 1/u + 1/q + 1/v (amalgamated index).
    double amalgamated_p() const;

    // (1/u, 1/v, 1/r) must lie in the solid K: 2 <= u,v <= inf,
    // 1 <= r <= inf, 1/u + 1/r + 1/v <= 1.
    static void require_in_K(double u, double v, double r);
};

double schatten_norm(const Mat& x, double p);
double operator_norm(const Mat& x);

// || d^{1/2p} x d^{1/2p} ||_{S_p}; p = inf gives the plain operator norm.
double state_lp_norm(const Mat& x, const Density& d, double p);

// Weighted Schatten norm with an explicit placement of the density power:
// symmetric d^{1/2p} (.) d^{1/2p}, one-sided d^{1/p}, or d^{1/4} (.) d^{1/4}.
double placed_lp_norm(const Mat& x, const Density& d, double p, DensityPlacement placement);

// Weighted L_p norm of the square function: blocks are dressed first
// (y_k = d^{1/2p} x_k d^{1/2p}), then || (sum y y*)^{1/2} ||_{S_p}.
double rc_square_norm(const std::vector<Mat>& xs, const Density& d, double p, Side side);

// inf { ||alpha||_{S_u} ||beta||_{S_v} : x = alpha beta }, 2 <= u,v <= inf.
OptimizerReport factorization_norm(const Mat& x, double u, double v,
                                   const SolveOptions& opts = {});

// sup { || (a (x) d^{1/u+1/2p}) X (b (x) d^{1/2p+1/v}) ||_{S_s} } over the
// unit balls ||a||_{S_u^m}, ||b||_{S_v^m} <= 1, with 1/s = 1/u + 1/p + 1/v.
// Scalars subalgebra means m = 1. Exact partial steps when s = 2, projected
// gradient ascent with restarts otherwise.
OptimizerReport conditional_lp_norm(const Mat& x, const NormSpec& spec,
                                    const SolveOptions& opts = {});

// Internal form of the conditional solver with the constraint-ball exponents
// decoupled from the objective; used by property tests for ball-inclusion
// monotonicity. Objective: || (a (x) L) X (b (x) R) ||_{S_s}.
OptimizerReport conditional_sup_raw(const Mat& x, Eigen::Index m, const Mat& L,
                                    const Mat& R, double s, double ball_u,
                                    double ball_v, const SolveOptions& opts = {});

// sup { || sum_k x_k* alpha x_k ||_{S_2}^{1/2} : alpha PSD, ||alpha||_{S_2} <= 1 },
// density-weighted when d is supplied.
OptimizerReport oh_valued_norm(const std::vector<Mat>& xs, const Density* d,
                               const SolveOptions& opts = {});

// sup { (sum_k ||a x_k b||_{S_2}^2)^{1/2} : ||a||_{S_u}, ||b||_{S_v} <= 1 }
// with (1/u, 1/v) = (theta/q, (1-theta)/q), 1/2 = 1/p + 1/q.
OptimizerReport mixed_theta_norm(const std::vector<Mat>& xs, double theta, double p,
                                 const SolveOptions& opts = {});

// Component norm of a sum space: y -> weight * || left y right ||_{S_r}.
// An empty left/right factor means identity.
struct WeightedSchattenNorm {
    double weight = 1.0;
    double r = 2.0;
    Mat left;
    Mat right;

    double eval(const Mat& y) const;
    Mat subgradient(const Mat& y) const;
    double dual_eval(const Mat& z) const; // || left^{-1} z right^{-1} ||_{r'} / weight
    Mat dual_subgradient(const Mat& z) const;
};

enum class SumAggregator { L1, L2 };

// inf over decompositions x = sum_i x_i of the aggregated component norms
// (L1: sum of norms, L2: quadratic mean as in an oplus_2 quotient).
// The report carries the duality gap from a feasible dual certificate.
OptimizerReport sum_norm(const Mat& x, const std::vector<WeightedSchattenNorm>& comps,
                         SumAggregator agg = SumAggregator::L1,
                         const SolveOptions& opts = {});

// Schatten-norm subgradient, exposed for solvers and tests.
Mat schatten_subgradient(const Mat& x, double p);

std::vector<Mat> block_rows(const Mat& x, Eigen::Index m); // not used externally

} // namespace nclp
