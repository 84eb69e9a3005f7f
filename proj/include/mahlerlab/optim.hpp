#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mahlerlab/error.hpp"

namespace mahler {

struct NelderMeadOptions {
    double diameter_tol = 1e-8;   // max simplex vertex distance from the best point
    double spread_tol = 1e-12;    // relative value spread across the simplex
    int max_evals = 20000;        // per restart
    int max_restarts = 10;
    bool throw_on_failure = true; // otherwise return the best point found
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    int restarts = 0;
    bool converged = false;
};

/* Downhill simplex minimization.  Infinite objective values are legal and
   act as a barrier; the initial simplex is axis-aligned with edge `step`. */
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step,
                                    const NelderMeadOptions& opt = {}) {
    const size_t n = x0.size();
    if (n == 0) throw Error("nelder_mead needs at least one variable");
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    NelderMeadResult res;
    std::vector<std::vector<double>> xs;
    std::vector<double> fs;

    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        return f(x);
    };
    auto rebuild = [&](const std::vector<double>& center, double h) {
        xs.assign(n + 1, center);
        fs.assign(n + 1, 0.0);
        for (size_t i = 0; i < n; ++i) xs[i + 1][i] += h;
        for (size_t i = 0; i <= n; ++i) fs[i] = eval(xs[i]);
    };
    auto order = [&]() {
        std::vector<size_t> idx(n + 1);
        for (size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
        std::vector<std::vector<double>> xs2(n + 1);
        std::vector<double> fs2(n + 1);
        for (size_t i = 0; i <= n; ++i) { xs2[i] = xs[idx[i]]; fs2[i] = fs[idx[i]]; }
        xs.swap(xs2);
        fs.swap(fs2);
    };
    auto diameter = [&]() {
        double d = 0;
        for (size_t i = 1; i <= n; ++i) {
            double s = 0;
            for (size_t k = 0; k < n; ++k) s += (xs[i][k] - xs[0][k]) * (xs[i][k] - xs[0][k]);
            d = std::max(d, std::sqrt(s));
        }
        return d;
    };

    std::vector<double> best = x0;
    double best_f = std::numeric_limits<double>::infinity();
    double h = step;

    for (int attempt = 0; attempt <= opt.max_restarts; ++attempt, ++res.restarts) {
        rebuild(best, h);
        int evals_at_start = res.evaluations;
        while (res.evaluations - evals_at_start < opt.max_evals) {
            order();
            if (fs[0] < best_f) { best_f = fs[0]; best = xs[0]; }
            bool flat = std::isfinite(fs[n]) &&
                        fs[n] - fs[0] <= opt.spread_tol * std::max(1.0, std::abs(fs[0]));
            if (diameter() < opt.diameter_tol && flat) {
                res.x = xs[0];
                res.value = fs[0];
                res.converged = true;
                return res;
            }

            std::vector<double> cen(n, 0.0);
            for (size_t i = 0; i < n; ++i)
                for (size_t k = 0; k < n; ++k) cen[k] += xs[i][k] / static_cast<double>(n);
            auto blend = [&](double t) {
                std::vector<double> x(n);
                for (size_t k = 0; k < n; ++k) x[k] = cen[k] + t * (xs[n][k] - cen[k]);
                return x;
            };

            std::vector<double> xr = blend(-alpha);
            double fr = eval(xr);
            if (fr < fs[0]) {
                std::vector<double> xe = blend(-gamma);
                double fe = eval(xe);
                if (fe < fr) { xs[n] = xe; fs[n] = fe; }
                else { xs[n] = xr; fs[n] = fr; }
            } else if (fr < fs[n - 1]) {
                xs[n] = xr;
                fs[n] = fr;
            } else {
                bool outside = fr < fs[n];
                std::vector<double> xc = blend(outside ? -rho : rho);
                double fc = eval(xc);
                if (fc < std::min(fr, fs[n])) {
                    xs[n] = xc;
                    fs[n] = fc;
                } else {
                    for (size_t i = 1; i <= n; ++i) {
                        for (size_t k = 0; k < n; ++k)
                            xs[i][k] = xs[0][k] + sigma * (xs[i][k] - xs[0][k]);
                        fs[i] = eval(xs[i]);
                    }
                }
            }
        }
        h *= 0.25;  // tighter simplex around the incumbent for the next attempt
    }

    if (opt.throw_on_failure)
        throw ConvergenceFailure("nelder_mead exhausted its restart budget");
    res.x = best;
    res.value = best_f;
    res.converged = false;
    return res;
}

} // namespace mahler
