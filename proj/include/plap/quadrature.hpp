#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "plap/error.hpp"

namespace plap {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    /// Relative floor against the whole-interval estimate; keeps large integrals
    /// from recursing to full depth chasing an absolute tolerance far below ulp.
    double rel_floor = 1e-14;
    int max_depth = 40;
};

/// Adaptive Simpson with Richardson correction on [a, b].
/// Throws QuadratureFailure on non-finite values or when depth runs out.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               const QuadratureOptions& opt = {}) {
    if (a == b) return 0.0;
    struct Rec {
        const std::function<double(double)>& f;
        int max_depth;

        double run(double a, double fa, double b, double fb, double m, double fm, double whole,
                   double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            if (!std::isfinite(flm) || !std::isfinite(frm))
                throw Error(ErrorCode::QuadratureFailure, "integrand is not finite");
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth >= max_depth)
                throw Error(ErrorCode::QuadratureFailure, "maximum subdivision depth reached");
            return run(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
                   run(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
        }
    };
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw Error(ErrorCode::QuadratureFailure, "integrand is not finite");
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(opt.abs_tol, opt.rel_floor * std::abs(whole));
    return Rec{f, opt.max_depth}.run(a, fa, b, fb, m, fm, whole, tol, 0);
}

} // namespace plap
