#pragma once

// Independent-copy constructions on tensor powers of M (+) M, sign
// symmetrization, Rosenthal-type two-sided checks, and the set-partition
// moment combinatorics of the noncommutative Poisson random measure with its
// central-limit verification.

#include "core/matrix.hpp"
#include "core/norms.hpp"

#include <array>
#include <string>
#include <vector>

namespace nclp {

// Partition of {1..m}; blocks and the elements inside each block are kept in
// increasing order (directed product order).
struct SetPartition {
    std::vector<std::vector<int>> blocks;

    int ground_size() const;
    bool is_even() const; // every block has even size
    std::string format() const; // canonical "1|2 3|4" block syntax
};

std::vector<SetPartition> enumerate_partitions(int m); // m <= 8

struct SignPattern {
    std::vector<int> eps; // entries +-1
};

// k symmetrized (or plain) copies of (M_n, d) inside the tensor power of
// M_n (+) M_n with the product state (1/2)(phi (+) phi) per slot.
class CopySystem {
  public:
    CopySystem(Density base_state, int copies, bool symmetrized = true,
               Eigen::Index ambient_cap = 4096);

    Eigen::Index base_dim() const { return d_.dim(); }
    const Density& base_state() const { return d_; }
    int copies() const { return k_; }
    bool symmetrized() const { return sym_; }
    Eigen::Index slot_dim() const { return sym_ ? 2 * d_.dim() : d_.dim(); }
    Eigen::Index ambient_dim() const;
    long sectors() const { return sym_ ? (1L << k_) : 1; }

    // Dense ambient-dimension embedding of slot j (1-based).
    Mat embed_copy(const Mat& x, int j) const;
    Density product_state() const;

    // Block-diagonal form of sum_j eps_j pi_j(x, -x): one dense block per
    // sign sector, all of dimension base^k.
    std::vector<Mat> sector_sum(const Mat& x, const SignPattern* signs) const;
    // Per-sector density block (equal across sectors): (tensor d) / sectors.
    Mat sector_state_block() const;

  private:
    Density d_;
    int k_;
    bool sym_;
};

enum class VectorMode { Plain, OhValued };

// Plain: weighted L_p norm of sum_j eps_j pi_j(x,-x).
// OhValued: OH-valued sup norm of the copy family with the product state.
double sum_copies_norm(const Mat& x, const CopySystem& sys, double p,
                       const SignPattern* signs, VectorMode mode,
                       const SolveOptions& opts = {});

struct SignSymmetryReport {
    double min_ratio = 1.0;
    double max_ratio = 1.0;
    int patterns = 0;
    bool within_band = false; // all ratios in [1/2, 2]
};

// Exhaustive over all 2^k sign patterns (k <= 8); ratios are taken against
// the all-plus value of the L_p norm (p = 1 by default).
SignSymmetryReport sign_symmetry_check(const Mat& x, const CopySystem& sys, double p = 1.0);

struct RosenthalReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool rhs_converged = false;
};

// LHS: OH-valued copy-sum norm (q = 2 path). RHS: three-term K-functional
// inf_{x=a+b+c} k ||a||_p + sqrt(k) ||E0(bb*)^{1/2}||_p-type with weights
// (k, sqrt k, sqrt k), solved by sum_norm.
RosenthalReport rosenthal_bound_check(const Mat& x, const CopySystem& sys, double p,
                                      double q = 2.0, const SolveOptions& opts = {});

struct McReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long samples = 0;
    uint64_t seed = 0;
};

enum class McDistribution { Gaussian, Exponential, TwoPoint };

// Classical (Sigma_pq) Monte Carlo: LHS = (E (sum |f_k|^q)^{p/q})^{1/p},
// RHS = (sum ||f_k||_p^p)^{1/p} + (sum ||f_k||_q^q)^{1/q} from exact moments.
// Bootstrap confidence interval with 1000 resamples.
McReport rosenthal_classical_mc(McDistribution dist, int n, double p, double q,
                                long samples, uint64_t seed);

// Moment formula of the Poisson random measure:
//   sum over partitions of prod_blocks psi(directed product).
Complex poisson_moment(const std::vector<Mat>& xs, const Density& weight);

// Finite-s moment: sum over even partitions with coefficient s!/(s^r (s-r)!);
// the limit drops the coefficient.
Complex clt_moment_finite_s(const std::vector<Mat>& xs, const Density& weight, long s);
Complex clt_moment_limit(const std::vector<Mat>& xs, const Density& weight);

// Direct simulation of phi_{n,s}(u_{n,s}(x_1) ... u_{n,s}(x_m)) by expanding
// the slot tuples of the tensor power; requires s >= mass(weight).
Complex clt_simulated_moment(const std::vector<Mat>& xs, const Density& weight, long s);

// The same moment evaluated on explicit per-sector matrices of the tensor
// algebra (two-point model of L_inf[0,1]); heavier, exact.
Complex clt_matrix_moment(const std::vector<Mat>& xs, const Density& weight, long s);

// Touchard polynomial T_m(x) by the binomial recurrence (independent oracle
// for all-identity Poisson moments).
double touchard_number(int m, double x);

} // namespace nclp
