#pragma once

// Intersection, sum, quotient and graph spaces: Lambda norms, the 4-term
// J-spaces and their K-space duals, graph-weight identities, diagonal-graph
// embeddings, spectrum discretization and dimension budgeting.

#include "core/matrix.hpp"
#include "core/norms.hpp"

#include <array>
#include <vector>

namespace nclp {

// Finite positive sequence (gamma_k) with mass k_n = sum gamma_k; the graph
// eigenvalues follow the exponent law lambda_k = gamma_k^{1/4 - 1/(2p')}.
struct DiagonalWeight {
    Vec gammas;

    explicit DiagonalWeight(Vec g);

    Eigen::Index n() const { return gammas.size(); }
    double k_n() const { return gammas.sum(); }
    long rounded_k() const;
    Vec lambdas(double p) const;
    Density weight_density() const; // diag(gamma), mass k_n
    Density state_density() const;  // normalized, psi_n = k_n phi_n
};

struct GraphSpace {
    Vec lambdas;
    double p_prime = INF;

    explicit GraphSpace(Vec l, double pp = INF);
};

// Adds eps to vanishing graph eigenvalues; the certified perturbation cost
// is (sum eps_k^4)^{1/4}.
std::pair<Vec, double> perturb_lambdas(const Vec& lambdas, double eps);

// n^{1/xi(u,v)} sup { ||(a (x) d^{1/u}) X (b (x) d^{1/v})||_{S_xi} } with
// 1/xi = 1/u + 1/v, over the S_u^m / S_v^m unit balls.
double lambda_norm(const Mat& x, const Density& d, const SubalgebraSpec& N, double u,
                   double v, double n_copies, const SolveOptions& opts = {});

// max of the four Lambda norms, u, v in {4, inf}.
double j_infty2_norm(const Mat& x, const Density& d, const SubalgebraSpec& N,
                     double n_copies, const SolveOptions& opts = {});

// max over u,v in {2r, inf}, 1/r = 1/q - 1/p, of the scaled conditional norms
// n^{1/u + 1/p + 1/v} L^p_{(u,v)} at amplification m.
double j_pq_norm(const Mat& x, const Density& d, double p, double q, double n_copies,
                 Eigen::Index amplification, const SolveOptions& opts = {});

// Image of a 4-slot tuple under the weighted embedding map
//   (x1, x2, x3, x4) -> x1 + x2 d^{1/4} + d^{1/4} x3 + d^{1/4} x4 d^{1/4}.
Mat k_tuple_image(const std::array<Mat, 4>& tuple, const DiagonalWeight& dw);

// Component exponents of L_p^n: (p, s', s', 2) with 1/s' = 1/(2p) + 1/4.
std::array<double, 4> k_component_exponents(double p);

// Quotient norm of the tuple image in the 4-component space modulo the
// kernel of the embedding map: convex minimization of
// the 4-component oplus_2 norm over an explicit kernel parametrization.
// The duality gap is taken against the sum-route dual certificate.
OptimizerReport k_quotient_norm(const std::array<Mat, 4>& tuple, const DiagonalWeight& dw,
                                double p, const SolveOptions& opts = {});

// The same K_{p,2} value computed on the sum-space side: decompositions
// y = y1 + y2 + y3 + y4 with the d^{1/4} factors carried by the embeddings.
OptimizerReport k_sum_norm(const Mat& y, const DiagonalWeight& dw, double p,
                           const SolveOptions& opts = {});

struct GraphTensorReport {
    std::vector<double> ratios;
    double max_deviation = 0.0; // max |ratio - 1|
};

// Compares the 4-component intersection norm of (z, zD, Dz, DzD), D = diag(lambda),
// against j_infty2_norm with the weight gamma = lambda^4; the identity is exact.
GraphTensorReport graph_tensor_check(const Vec& lambdas, Eigen::Index dim,
                                     Eigen::Index amplification, int samples,
                                     uint64_t seed);

struct OhGraphReport {
    double xi_measured = 0.0;
    double xi_bound = 0.0;        // (sum lambda_k^{-4})^{1/4}
    double distortion = 0.0;      // sqrt(1 + xi_measured^2)
    double distortion_bound = 0.0;
    double projection_norm = 0.0; // coordinate projection, <= 1
    bool within_bound = false;
};

// Level-m distortion of u: delta_k -> (lambda_k^{-1} delta_k, delta_k) and of
// its inverse, checked against the certified bound sqrt(1 + xi^2).
OhGraphReport oh_graph_map(const Vec& lambdas, Eigen::Index level, uint64_t seed);

struct DiscretizationReport {
    DiagonalWeight weight;          // floored spectrum as a diagonal weight
    double raw_ratio = 1.0;         // max lambda / floored
    double graph_distortion = 1.0;  // max sqrt((1+l^2)/(1+g^2))
    int flagged_zero = 0;           // eigenvalues whose delta-floor is 0
};

DiscretizationReport discretize_spectrum(const Density& d, double delta);

struct DimensionBudget {
    long m = 0;
    long n = 0;     // ceil(m ln m)
    double k_n = 0; // ceil(n^alpha_p)
    double log10_w = 0;
    double log10_M = 0;
    double log10_paper_form = 0; // beta_p * m^{alpha_p} * log10 m
};

DimensionBudget dimension_budget(long m, double alpha_p, double beta_p, double gamma);

} // namespace nclp
