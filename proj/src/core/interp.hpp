#pragma once

// Complex interpolation machinery on the strip {0 < Re z < 1}: harmonic
// measure via the conformal map z -> exp(i pi z), analytic reproduction,
// closed-form weighted-couple interpolation norms, and analytic-competitor
// upper bounds with the boundary F-norm
//   ((1-theta) ||f|_{d0}||^2 + theta ||f|_{d1}||^2)^{1/2}.

#include "core/matrix.hpp"
#include "core/norms.hpp"

#include <utility>
#include <vector>

namespace nclp {

struct StripMeasure {
    double theta = 0.5;
    // Boundary nodes z = i t (side 0) and z = 1 + i t (side 1) with the
    // mu_theta weights; side masses are (1-theta, theta).
    std::vector<double> t0, w0;
    std::vector<double> t1, w1;
    double tail_bound = 0.0; // quadrature-range truncation mass

    double mass0() const;
    double mass1() const;
};

// Pulls the half-plane Poisson kernel back through z -> exp(i pi z); nodes
// come from a tanh-type substitution mapping each boundary line onto (-1,1).
// Caches grids under NCLP_CACHE_DIR when the variable is set.
StripMeasure strip_measure(double theta, int grid_size);

void dump_quadrature_csv(const StripMeasure& mu, const std::string& path);

// f(z) = sum_k c_k exp(a_k z), at most 16 terms, |a_k| <= 4, |Im a_k| <= 3.
struct ExpFunction {
    std::vector<std::pair<Complex, Complex>> terms; // (coefficient, exponent)
    Complex operator()(Complex z) const;
};

// Quadrature evaluation of the reproduction integral f(theta) = int f dmu.
Complex reproduce(const ExpFunction& f, const StripMeasure& mu);

// Endpoint of an interpolation couple: || d^{dl} y d^{dr} ||_{S_p}.
struct CoupleEndpoint {
    double p = 2.0;
    double dl = 0.0;
    double dr = 0.0;

    static CoupleEndpoint weighted_schatten(double p, double dl, double dr) { return {p, dl, dr}; }
    static CoupleEndpoint lp_state(double p) { return {p, 0.5 * inv(p), 0.5 * inv(p)}; }
    // Row/column L_p spaces at the unamplified level, 2 <= p <= inf.
    static CoupleEndpoint row_lp(double p);
    static CoupleEndpoint col_lp(double p);
    static CoupleEndpoint oh() { return {2.0, 0.25, 0.25}; }
};

struct CoupleSpec {
    CoupleEndpoint e0;
    CoupleEndpoint e1;
    double theta = 0.5;
};

double endpoint_norm(const CoupleEndpoint& e, const Mat& y, const Density& d);

// Closed-form interpolation norm. Supported families: Hilbert couples
// (p0 = p1 = 2, any x and d; density powers interpolate affinely) and
// general weighted Schatten couples when x commutes with d. Anything else
// throws "no closed form".
double couple_norm_closed(const Mat& x, const CoupleSpec& couple, const Density& d);

// Analytic competitor f(z) = alpha beta^{1-z} gamma delta^z e^{shift (z-theta)}
// with beta, delta positive definite. Must satisfy f(theta) = x.
struct PowerCompetitor {
    Mat alpha, beta, gamma, delta;
    Complex shift = 0.0;

    static PowerCompetitor constant(const Mat& x);
    Mat at(Complex z) const;
};

// Boundary F-norm of the competitor; a certified upper bound for the
// interpolation norm of x = f(theta) in the couple.
double competitor_upper_bound(const Mat& x, const CoupleSpec& couple, const Density& d,
                              const PowerCompetitor& f, const StripMeasure& mu);

// Extremal power competitor for a strictly positive x commuting with d in a
// weighted Schatten couple; attains couple_norm_closed.
PowerCompetitor make_extremal_competitor(const Mat& x, const CoupleSpec& couple, const Density& d);

} // namespace nclp
