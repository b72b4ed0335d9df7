#include "core/copies.hpp"
#include "core/spaces.hpp"
#include "core/rng.hpp"

#include <doctest.h>

using namespace nclp;

TEST_CASE("set partition enumeration hits the Bell numbers") {
    const int bell[] = {0, 1, 2, 5, 15, 52, 203};
    for (int m = 1; m <= 6; ++m) CHECK((int)enumerate_partitions(m).size() == bell[m]);
    const auto p3 = enumerate_partitions(3);
    CHECK(p3.front().format() == "1 2 3");
    // blocks are ascending and partition the ground set
    for (const auto& p : p3) {
        int total = 0;
        for (const auto& b : p.blocks) {
            for (size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1] < b[i]);
            total += (int)b.size();
        }
        CHECK(total == 3);
    }
    CHECK_THROWS_AS(enumerate_partitions(9), domain_error);
}

TEST_CASE("embed_copy structure") {
    const Density d = random_state(2, 1);
    const CopySystem sys(d, 2, true);
    const Mat x = random_matrix(2, 2, 2);
    // k=1 symmetrized embeds as diag(x, -x)
    const CopySystem one(d, 1, true);
    CHECK((one.embed_copy(x, 1) - direct_sum(x, Mat(-x))).cwiseAbs().maxCoeff() < 1e-15);
    // distinct slots commute
    const Mat y = random_matrix(2, 2, 3);
    const Mat a = sys.embed_copy(x, 1), b = sys.embed_copy(y, 2);
    CHECK((a * b - b * a).cwiseAbs().maxCoeff() < 1e-13);
    // the product state factorizes over distinct slots
    const Density phi = sys.product_state();
    const Complex lhs = (phi.matrix() * a * b).trace();
    const Complex fa = (phi.matrix() * a).trace(), fb = (phi.matrix() * b).trace();
    // mean-zero symmetrized copies: all three vanish
    CHECK(std::abs(lhs) < 1e-13);
    CHECK(std::abs(fa) < 1e-13);
    CHECK(std::abs(fb) < 1e-13);
    // factorization on non-centered plain copies
    const CopySystem plain(d, 2, false);
    const Mat pa = plain.embed_copy(x, 1), pb = plain.embed_copy(y, 2);
    const Density pphi = plain.product_state();
    CHECK(std::abs((pphi.matrix() * pa * pb).trace() -
                   (pphi.matrix() * pa).trace() * (pphi.matrix() * pb).trace()) < 1e-12);
    CHECK_THROWS_AS(CopySystem(d, 9, true), domain_error); // 4^9 over the cap
}

TEST_CASE("sector representation matches the dense embedding") {
    const Density d = random_positive_state(2, 4);
    const CopySystem sys(d, 2, true);
    const Mat x = random_matrix(2, 2, 5);
    SignPattern sp{{1, -1}};
    // dense sum
    Mat dense = sys.embed_copy(x, 1) - sys.embed_copy(x, 2);
    const double via_dense = state_lp_norm(dense, sys.product_state(), 1.0);
    const double via_sectors = sum_copies_norm(x, sys, 1.0, &sp, VectorMode::Plain);
    CHECK(std::abs(via_dense - via_sectors) < 1e-10);
}

TEST_CASE("sum_copies_norm closed forms") {
    const Density d = random_positive_state(2, 6);
    const Mat x = random_matrix(2, 2, 7);
    // k = 1 all-plus plain is the state norm of diag(x,-x)
    const CopySystem one(d, 1, true);
    const Mat y = direct_sum(x, Mat(-x));
    const Density slot(Mat(0.5 * direct_sum(d.matrix(), d.matrix())), 1.0);
    CHECK(std::abs(sum_copies_norm(x, one, 3.0, nullptr, VectorMode::Plain) -
                   state_lp_norm(y, slot, 3.0)) < 1e-12);
    // x = 0
    const CopySystem sys(d, 3, true);
    CHECK(sum_copies_norm(Mat(Mat::Zero(2, 2)), sys, 2.0, nullptr, VectorMode::Plain) == 0.0);
    // scalar base, p = 2: sqrt(k) |x| by mean-zero orthogonality
    Mat s(1, 1);
    s(0, 0) = Complex(0.7, 0.4);
    const Density sone(Mat(Mat::Identity(1, 1)), 1.0);
    const CopySystem ssys(sone, 4, true);
    CHECK(std::abs(sum_copies_norm(s, ssys, 2.0, nullptr, VectorMode::Plain) -
                   2.0 * std::abs(s(0, 0))) < 1e-12);
}

TEST_CASE("oh-valued copy norm agrees with the dense solver at small k") {
    const Density d = random_positive_state(2, 8);
    const Mat x = random_matrix(2, 2, 9);
    for (int k : {1, 2}) {
        const CopySystem sys(d, k, true);
        const double sector = sum_copies_norm(x, sys, 2.0, nullptr, VectorMode::OhValued, {11});
        std::vector<Mat> family;
        for (int j = 1; j <= k; ++j) family.push_back(sys.embed_copy(x, j));
        const Density phi = sys.product_state();
        const double dense = oh_valued_norm(family, &phi, {12, 24}).value;
        CHECK(std::abs(sector - dense) < 1e-6 * std::max(1.0, dense));
    }
    // scalar closed form: sqrt(k) |x| for the oh mode as well
    Mat s(1, 1);
    s(0, 0) = 1.0;
    const Density sone(Mat(Mat::Identity(1, 1)), 1.0);
    const CopySystem ssys(sone, 3, true);
    CHECK(std::abs(sum_copies_norm(s, ssys, 2.0, nullptr, VectorMode::OhValued, {13}) -
                   std::sqrt(3.0)) < 1e-8);
}

TEST_CASE("sign symmetry ratios stay in the two-sided band") {
    for (int k : {2, 3}) {
        for (int t = 0; t < 5; ++t) {
            const Density d = random_positive_state(2, 20 + t);
            const Mat x = random_matrix(2, 2, 30 + t);
            const CopySystem sys(d, k, true);
            const auto rep = sign_symmetry_check(x, sys, 1.0);
            CHECK(rep.patterns == (1 << k));
            CHECK(rep.within_band);
            CHECK(rep.min_ratio >= 0.5 - 1e-9);
            CHECK(rep.max_ratio <= 2.0 + 1e-9);
        }
    }
    // global sign flip leaves the norm invariant
    const Density d = random_positive_state(2, 40);
    const Mat x = random_matrix(2, 2, 41);
    const CopySystem sys(d, 3, true);
    SignPattern plus{{1, 1, 1}}, minus{{-1, -1, -1}};
    CHECK(std::abs(sum_copies_norm(x, sys, 1.0, &plus, VectorMode::Plain) -
                   sum_copies_norm(x, sys, 1.0, &minus, VectorMode::Plain)) < 1e-12);
}

TEST_CASE("rosenthal bound check small cases") {
    // scalar base, p = 2: both sides sqrt(k)|x|, ratio 1 up to tolerance
    Mat s(1, 1);
    s(0, 0) = 1.0;
    const Density one(Mat(Mat::Identity(1, 1)), 1.0);
    for (int k : {1, 2, 4}) {
        const CopySystem sys(one, k, true);
        const auto rep = rosenthal_bound_check(s, sys, 2.0, 2.0, {50});
        CHECK(std::abs(rep.ratio - 1.0) < 1e-3);
    }
    // x = 0
    const Density d = random_positive_state(2, 51);
    const CopySystem sys(d, 2, true);
    const auto zero = rosenthal_bound_check(Mat(Mat::Zero(2, 2)), sys, 1.0, 2.0, {52});
    CHECK(zero.lhs < 1e-12);
    CHECK(zero.rhs < 1e-12);
    // k = 1 matrix case: both sides comparable to ||x||
    const Mat x = random_matrix(2, 2, 53);
    const CopySystem onec(d, 1, true);
    const auto rep = rosenthal_bound_check(x, onec, 1.0, 2.0, {54});
    CHECK(rep.ratio > 0.05);
    CHECK(rep.ratio < 20.0);
}

TEST_CASE("classical monte carlo identities") {
    // n = 1: LHS = ||f||_p, RHS = ||f||_p + ||f||_q, ratio in [1/2, 1]
    const auto r1 = rosenthal_classical_mc(McDistribution::Gaussian, 1, 2.0, 1.0, 20000, 7);
    CHECK(r1.ratio > 0.45);
    CHECK(r1.ratio < 1.0);
    // p = q: LHS equals each RHS term, so the ratio sits in [1/2, 1]
    const auto r2 = rosenthal_classical_mc(McDistribution::Exponential, 8, 2.0, 2.0, 20000, 8);
    CHECK(r2.ratio > 0.45);
    CHECK(r2.ratio < 1.0);
    CHECK(std::abs(r2.ratio - 0.5) < 0.05); // both RHS terms coincide
    // two-point variables are deterministic in |.|^q
    const auto r3 = rosenthal_classical_mc(McDistribution::TwoPoint, 4, 2.0, 1.0, 10000, 9);
    CHECK(r3.lhs == doctest::Approx(4.0)); // ((sum_k 1)^2)^{1/2} = n
    // determinism given the seed
    const auto r4 = rosenthal_classical_mc(McDistribution::Gaussian, 4, 2.0, 1.0, 10000, 10);
    const auto r5 = rosenthal_classical_mc(McDistribution::Gaussian, 4, 2.0, 1.0, 10000, 10);
    CHECK(r4.ratio == r5.ratio);
    CHECK(r4.ci_lo == r5.ci_lo);
    CHECK_THROWS_AS(rosenthal_classical_mc(McDistribution::Gaussian, 4, 2.0, 1.0, 100, 0),
                    domain_error);
}

TEST_CASE("poisson moments") {
    Vec g(2);
    g << 1.5, 0.5;
    const Density w = DiagonalWeight(g).weight_density();
    const Mat x1 = random_matrix(2, 2, 60), x2 = random_matrix(2, 2, 61);
    // m = 1: single partition
    CHECK(std::abs(poisson_moment({x1}, w) - (w.matrix() * x1).trace()) < 1e-13);
    // m = 2 hand enumeration
    const Complex want = (w.matrix() * x1 * x2).trace() +
                         (w.matrix() * x1).trace() * (w.matrix() * x2).trace();
    CHECK(std::abs(poisson_moment({x1, x2}, w) - want) < 1e-13);
    // all-identity inputs give the Touchard value T_m(k)
    for (int m = 1; m <= 6; ++m) {
        std::vector<Mat> ones(m, identity(2));
        CHECK(poisson_moment(ones, w).real() ==
              doctest::Approx(touchard_number(m, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("touchard oracle basics") {
    CHECK(touchard_number(0, 3.0) == 1.0);
    CHECK(touchard_number(1, 3.0) == 3.0);
    CHECK(touchard_number(2, 3.0) == 12.0);         // x^2 + x
    CHECK(touchard_number(3, 1.0) == 5.0);          // Bell(3)
    CHECK(touchard_number(6, 1.0) == 203.0);        // Bell(6)
}

TEST_CASE("clt moments: odd vanish, m=2 coefficient, commuting m=4") {
    Vec g(2);
    g << 1.2, 0.8;
    const Density w = DiagonalWeight(g).weight_density();
    const Mat x1 = random_matrix(2, 2, 70), x2 = random_matrix(2, 2, 71);
    CHECK(std::abs(clt_moment_limit({x1}, w)) == 0.0);
    CHECK(std::abs(clt_moment_limit({x1, x2, x1}, w)) == 0.0);
    // m = 2: coefficient s!/(s (s-1)!) = 1, value psi(x1 x2) for every s
    for (long s : {2L, 3L, 5L}) {
        CHECK(std::abs(clt_moment_finite_s({x1, x2}, w, s) - (w.matrix() * x1 * x2).trace()) <
              1e-13);
    }
    // m = 4 with equal commuting arguments: psi(x^4) + 3 psi(x^2)^2 in the limit
    Mat xd = Mat::Zero(2, 2);
    xd(0, 0) = 0.9;
    xd(1, 1) = -0.4;
    const Complex p4 = (w.matrix() * xd * xd * xd * xd).trace();
    const Complex p2 = (w.matrix() * xd * xd).trace();
    CHECK(std::abs(clt_moment_limit({xd, xd, xd, xd}, w) - (p4 + 3.0 * p2 * p2)) < 1e-13);
}

TEST_CASE("clt finite-s equals both simulation routes") {
    Vec g(2);
    g << 1.2, 0.8; // mass 2 <= every s below
    const Density w = DiagonalWeight(g).weight_density();
    for (int m = 1; m <= 4; ++m) {
        std::vector<Mat> xs;
        for (int i = 0; i < m; ++i) {
            Mat x = random_matrix(2, 2, 700 + 10 * m + i);
            xs.push_back(x / std::max(1.0, operator_norm(x)));
        }
        for (long s : {2L, 3L, 4L, 5L}) {
            const Complex comb = clt_moment_finite_s(xs, w, s);
            const Complex sim = clt_simulated_moment(xs, w, s);
            const Complex mat = clt_matrix_moment(xs, w, s);
            CHECK(std::abs(comb - sim) < 1e-10);
            CHECK(std::abs(comb - mat) < 1e-10);
            CHECK(std::abs(sim - mat) < 1e-12);
        }
        // finite-s approaches the limit at rate O(1/s)
        const Complex lim = clt_moment_limit(xs, w);
        const double d3 = std::abs(clt_moment_finite_s(xs, w, 3) - lim);
        const double d12 = std::abs(clt_moment_finite_s(xs, w, 12) - lim);
        CHECK(d12 <= d3 / 2.0 + 1e-12);
    }
    CHECK_THROWS_AS(clt_simulated_moment({identity(2)}, w, 1), domain_error); // s < mass
}

TEST_CASE("finite-s deviation fits C/s with a stable constant") {
    // for m = 4 only pair partitions contribute a 1/s correction, so
    // s * |finite_s - limit| is a constant
    Vec g(2);
    g << 1.4, 0.6;
    const Density w = DiagonalWeight(g).weight_density();
    std::vector<Mat> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_matrix(2, 2, 810 + i));
    const Complex lim = clt_moment_limit(xs, w);
    const double c5 = 5.0 * std::abs(clt_moment_finite_s(xs, w, 5) - lim);
    for (long s : {7L, 11L, 23L}) {
        const double cs = (double)s * std::abs(clt_moment_finite_s(xs, w, s) - lim);
        CHECK(cs == doctest::Approx(c5).epsilon(1e-9));
    }
}
