#pragma once

// Accelerated first-order minimization over tuples of matrices (FISTA with
// backtracking and restart-on-increase). Used by the smoothed convex solvers.

#include "core/matrix.hpp"

#include <functional>
#include <vector>

namespace nclp {

using MatVec = std::vector<Mat>;

inline double mv_dot(const MatVec& a, const MatVec& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        acc += a[i].conjugate().cwiseProduct(b[i]).sum().real();
    return acc;
}

inline double mv_norm2(const MatVec& a) { return mv_dot(a, a); }

// f(state, grad_out) returns the objective and fills the gradient when
// grad_out != nullptr. On return, state holds the best point seen.
inline double fista_minimize(MatVec& state,
                             const std::function<double(const MatVec&, MatVec*)>& f,
                             long max_iters, double rel_tol, long* iter_counter) {
    MatVec x = state, y = state, x_prev = state;
    MatVec grad;
    double fx = f(x, nullptr);
    double best = fx;
    MatVec best_state = x;
    double lip = 1.0;
    double t = 1.0;

    for (long it = 0; it < max_iters; ++it) {
        if (iter_counter) ++*iter_counter;
        const double fy = f(y, &grad);
        bool stepped = false;
        for (int bt = 0; bt < 60; ++bt) {
            MatVec cand = y;
            for (size_t i = 0; i < cand.size(); ++i) cand[i] -= grad[i] / lip;
            const double fc = f(cand, nullptr);
            double quad = fy;
            for (size_t i = 0; i < cand.size(); ++i) {
                const Mat diff = cand[i] - y[i];
                quad += diff.conjugate().cwiseProduct(grad[i]).sum().real() +
                        0.5 * lip * diff.squaredNorm();
            }
            if (fc <= quad + 1e-16 * std::max(1.0, std::abs(quad))) {
                x_prev = x;
                x = std::move(cand);
                fx = fc;
                stepped = true;
                break;
            }
            lip *= 2.0;
        }
        if (!stepped) break;
        lip = std::max(lip * 0.9, 1e-12);
        if (fx < best) {
            best = fx;
            best_state = x;
        }
        // adaptive restart keeps the momentum honest
        if (fx > best * (1.0 + 1e-12)) t = 1.0;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * (x[i] - x_prev[i]);
        t = t_next;

        double step2 = 0.0;
        for (size_t i = 0; i < x.size(); ++i) step2 += (x[i] - x_prev[i]).squaredNorm();
        if (std::sqrt(step2) < rel_tol * std::max(1.0, std::sqrt(mv_norm2(x))) && it > 16) break;
    }
    state = best_state;
    return best;
}

} // namespace nclp
