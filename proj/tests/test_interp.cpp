#include "core/interp.hpp"
#include "core/rng.hpp"

#include <doctest.h>

using namespace nclp;

TEST_CASE("strip measure masses and decomposition") {
    for (double theta : {0.1, 0.25, 0.5, 0.62, 0.9}) {
        const StripMeasure mu = strip_measure(theta, 1536);
        CHECK(std::abs(mu.mass0() - (1.0 - theta)) < 1e-8);
        CHECK(std::abs(mu.mass1() - theta) < 1e-8);
        for (double w : mu.w0) CHECK(w >= 0.0);
        for (double w : mu.w1) CHECK(w >= 0.0);
        CHECK(mu.tail_bound < 1e-20);
    }
    CHECK_THROWS_AS(strip_measure(0.0, 128), domain_error);
    CHECK_THROWS_AS(strip_measure(0.5, 32), domain_error);
}

TEST_CASE("analytic reproduction") {
    const StripMeasure mu = strip_measure(0.5, 1536);
    // constants are exact
    CHECK(std::abs(reproduce(ExpFunction{{{Complex(2.5, 1.0), Complex(0, 0)}}}, mu) -
                   Complex(2.5, 1.0)) < 1e-10);
    // e^z at theta = 1/2
    CHECK(std::abs(reproduce(ExpFunction{{{1.0, Complex(1, 0)}}}, mu) - std::exp(0.5)) < 1e-6);
    // e^{iz} at theta = 1/3
    const StripMeasure mu3 = strip_measure(1.0 / 3.0, 1536);
    CHECK(std::abs(reproduce(ExpFunction{{{1.0, Complex(0, 1)}}}, mu3) -
                   std::exp(Complex(0, 1.0 / 3.0))) < 1e-6);
    // linearity
    ExpFunction f{{{Complex(1, 0), Complex(1, 0)}, {Complex(0, 2), Complex(-1, 0)}}};
    const Complex lhs = reproduce(f, mu);
    const Complex rhs = reproduce(ExpFunction{{f.terms[0]}}, mu) +
                        reproduce(ExpFunction{{f.terms[1]}}, mu);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    // z ~ (e^{eps z} - 1)/eps
    const double eps = 1e-6;
    ExpFunction lin{{{Complex(1.0 / eps, 0), Complex(eps, 0)},
                     {Complex(-1.0 / eps, 0), Complex(0, 0)}}};
    CHECK(std::abs(reproduce(lin, mu) - 0.5) < 1e-5);
    // unsupported basis
    CHECK_THROWS_AS(reproduce(ExpFunction{{{1.0, Complex(5, 0)}}}, mu), domain_error);
    CHECK_THROWS_AS(reproduce(ExpFunction{{{1.0, Complex(0, 3.6)}}}, mu), domain_error);
}

TEST_CASE("couple norm closed forms") {
    const Density d = random_positive_state(3, 11);
    const Mat x = random_matrix(3, 3, 12);
    // [S_2, S_2]_theta is S_2 for all theta
    CoupleSpec flat{CoupleEndpoint::weighted_schatten(2, 0, 0),
                    CoupleEndpoint::weighted_schatten(2, 0, 0), 0.3};
    CHECK(std::abs(couple_norm_closed(x, flat, d) - schatten_norm(x, 2.0)) < 1e-12);

    // diagonal d and diagonal x: weighted l_p interpolation
    Vec dd(3), xx(3);
    dd << 0.5, 0.3, 0.2;
    xx << 1.0, 2.0, 0.7;
    const Density ddiag(Mat(dd.cast<Complex>().asDiagonal()), 1.0);
    const Mat xdiag = xx.cast<Complex>().asDiagonal();
    CoupleSpec cs{CoupleEndpoint::weighted_schatten(2, 0.25, 0.25),
                  CoupleEndpoint::weighted_schatten(4, 0.125, 0.125), 0.4};
    const double pt = 1.0 / (0.6 / 2 + 0.4 / 4);
    const double al = 0.6 * 0.25 + 0.4 * 0.125;
    double want = 0;
    for (int i = 0; i < 3; ++i) want += std::pow(std::pow(dd[i], 2 * al) * xx[i], pt);
    want = std::pow(want, 1.0 / pt);
    CHECK(std::abs(couple_norm_closed(xdiag, cs, ddiag) - want) < 1e-12);

    // no closed form for non-commuting x with p != 2 endpoints
    CHECK_THROWS_AS(couple_norm_closed(x, cs, d), domain_error);

    // log-convexity in theta for the diagonal family
    auto val = [&](double th) {
        CoupleSpec c{CoupleEndpoint::lp_state(2), CoupleEndpoint::lp_state(6), th};
        return couple_norm_closed(xdiag, c, ddiag);
    };
    for (double th : {0.3, 0.5, 0.7})
        CHECK(val(th) * val(th) <= val(th - 0.1) * val(th + 0.1) * (1 + 1e-12));
}

TEST_CASE("competitor upper bound soundness and attainment") {
    const StripMeasure mu = strip_measure(0.4, 1536);
    const Density d = random_positive_state(3, 21);
    const Mat x = random_matrix(3, 3, 22);

    // constant competitor: F-norm combination of endpoint norms, below max
    CoupleSpec hil{CoupleEndpoint::col_lp(4), CoupleEndpoint::row_lp(4), 0.4};
    const PowerCompetitor cst = PowerCompetitor::constant(x);
    const double val = competitor_upper_bound(x, hil, d, cst, mu);
    const double n0 = endpoint_norm(hil.e0, x, d), n1 = endpoint_norm(hil.e1, x, d);
    CHECK(std::abs(val - std::sqrt(0.6 * n0 * n0 + 0.4 * n1 * n1)) < 1e-10);
    CHECK(val <= std::max(n0, n1) + 1e-12);
    CHECK(val >= couple_norm_closed(x, hil, d) - 1e-6);

    // scalar case: upper bound equals |x| exactly
    Mat s(1, 1);
    s(0, 0) = Complex(0.8, -0.6);
    const Density sd(Mat(Mat::Identity(1, 1)), 1.0);
    CoupleSpec sc{CoupleEndpoint::lp_state(2), CoupleEndpoint::lp_state(2), 0.4};
    CHECK(std::abs(competitor_upper_bound(s, sc, sd, PowerCompetitor::constant(s), mu) - 1.0) <
          1e-9);

    // power competitor attains the closed form for commuting positive data
    Vec dd(3), xx(3);
    dd << 0.5, 0.3, 0.2;
    xx << 1.3, 0.6, 2.1;
    const Density ddiag(Mat(dd.cast<Complex>().asDiagonal()), 1.0);
    const Mat xdiag = xx.cast<Complex>().asDiagonal();
    CoupleSpec ws{CoupleEndpoint::weighted_schatten(2, 0.25, 0.25),
                  CoupleEndpoint::weighted_schatten(5, 0.1, 0.1), 0.4};
    const PowerCompetitor ext = make_extremal_competitor(xdiag, ws, ddiag);
    const double closed = couple_norm_closed(xdiag, ws, ddiag);
    const double upper = competitor_upper_bound(xdiag, ws, ddiag, ext, mu);
    CHECK(upper >= closed - 1e-6);
    CHECK(std::abs(upper - closed) < 1e-6 * closed);

    // infeasible factorization is rejected
    PowerCompetitor bad = PowerCompetitor::constant(Mat(2.0 * xdiag));
    CHECK_THROWS_AS(competitor_upper_bound(xdiag, ws, ddiag, bad, mu), domain_error);
}

TEST_CASE("random power competitors stay above the closed form") {
    const StripMeasure mu = strip_measure(0.35, 1536);
    std::mt19937_64 gen = seeded_stream(31, "competitor_family");
    std::uniform_real_distribution<double> un(0.3, 1.5);
    for (int t = 0; t < 8; ++t) {
        // build a random commuting family, define x := f(theta), and compare
        Vec dd(3), bb(3), de(3);
        for (int i = 0; i < 3; ++i) {
            dd[i] = un(gen);
            bb[i] = un(gen);
            de[i] = un(gen);
        }
        dd /= dd.sum();
        const Density ddiag(Mat(dd.cast<Complex>().asDiagonal()), 1.0);
        PowerCompetitor f;
        f.alpha = Vec(bb.cwiseProduct(de)).cast<Complex>().asDiagonal();
        f.beta = bb.cast<Complex>().asDiagonal();
        f.gamma = Mat::Identity(3, 3);
        f.delta = de.cast<Complex>().asDiagonal();
        const Mat x = f.at(Complex(0.35, 0.0));
        CoupleSpec couple{CoupleEndpoint::weighted_schatten(2.0 + t % 3, 0.2, 0.1),
                          CoupleEndpoint::weighted_schatten(4.0, 0.05, 0.3), 0.35};
        const double closed = couple_norm_closed(x, couple, ddiag);
        const double upper = competitor_upper_bound(x, couple, ddiag, f, mu);
        CHECK(upper >= closed - 1e-6);
    }
}

TEST_CASE("quadrature cache round trip") {
    setenv("NCLP_CACHE_DIR", "/tmp/nclp_cache_test", 1);
    const StripMeasure a = strip_measure(0.37, 128);
    const StripMeasure b = strip_measure(0.37, 128); // from cache
    REQUIRE(a.t0.size() == b.t0.size());
    for (size_t i = 0; i < a.t0.size(); ++i) {
        CHECK(a.t0[i] == b.t0[i]);
        CHECK(a.w0[i] == b.w0[i]);
    }
    unsetenv("NCLP_CACHE_DIR");
}
