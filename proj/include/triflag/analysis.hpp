#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "triflag/group.hpp"

namespace triflag {

/// The A-part kernel of the translated long element,
///   f(x,y,z) = ( [(1+z^2)(1+x^2+y^2) - (x+zy)^2] (1+x^2+y^2) )^{-1/2}.
/// The bracket expands to the cancellation-free sum of squares
/// 1 + z^2 + (y - xz)^2, which this uses; equals a_rho(w0 * n(x,y,z)).
inline double f_xyz(double x, double y, double z) {
    const double m = y - x * z;
    const double d = 1.0 + z * z + m * m;
    const double s = 1.0 + x * x + y * y;
    return 1.0 / std::sqrt(d * s);
}

/// log(1 + a^2 + b^2) without overflow for huge arguments.
inline double log_one_plus_sq(double a, double b) {
    const double L = std::max({1.0, std::fabs(a), std::fabs(b)});
    const double il = 1.0 / L;
    return 2.0 * std::log(L) + std::log(il * il + (a * il) * (a * il) + (b * il) * (b * il));
}

/// log f with the minor m = y - xz supplied by the caller (the translated
/// kernel owns an exact expression for it; forming it from the shifted
/// coordinates loses everything to cancellation).
inline double log_f_xyz_from_minor(double x, double y, double z, double m) {
    return -0.5 * (log_one_plus_sq(z, m) + log_one_plus_sq(x, y));
}

/// log f(x,y,z), stable for coordinates up to ~1e150.
inline double log_f_xyz(double x, double y, double z) {
    return log_f_xyz_from_minor(x, y, z, y - x * z);
}

/// Coordinates of (a n(1,1,u) a^{-1}) * n for a = diag(e^s, e^t, e^{-s-t}):
/// n(x + e^{s-t}, y + z e^{s-t} + e^{2s+t}, z + u e^{s+2t}).
inline UnipD family_translate(double u, double s, double t, const UnipD& n) {
    const double p = std::exp(s - t);
    const double q = std::exp(2 * s + t);
    const double r = u * std::exp(s + 2 * t);
    return {n.x + p, n.y + n.z * p + q, n.z + r};
}

namespace quaddetail {

/// Adaptive Simpson with an explicit stack and a shared evaluation budget.
template <class F>
double adaptive_simpson(F&& g, double a0, double b0, double abs_tol, long& budget) {
    if (a0 == b0) return 0.0;
    struct Frame {
        double a, b, fa, fm, fb, whole;
        int depth;
    };
    auto simpson = [](double fa, double fm, double fb, double h) {
        return h / 6.0 * (fa + 4.0 * fm + fb);
    };
    const double fa = g(a0), fm = g(0.5 * (a0 + b0)), fb = g(b0);
    budget -= 3;
    double total = 0.0;
    std::vector<Frame> stack;
    stack.push_back({a0, b0, fa, fm, fb, simpson(fa, fm, fb, b0 - a0), 0});
    const int max_depth = 52;
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        const double m = 0.5 * (f.a + f.b);
        const double flm = g(0.5 * (f.a + m)), frm = g(0.5 * (m + f.b));
        budget -= 2;
        if (budget < 0) throw std::runtime_error("phi: subdivision budget exhausted");
        const double left = simpson(f.fa, flm, f.fm, m - f.a);
        const double right = simpson(f.fm, frm, f.fb, f.b - m);
        const double err = (left + right - f.whole) / 15.0;
        if (std::fabs(err) <= abs_tol * (f.b - f.a) / (b0 - a0) || f.depth >= max_depth) {
            total += left + right + err;
            continue;
        }
        stack.push_back({f.a, m, f.fa, flm, f.fm, left, f.depth + 1});
        stack.push_back({m, f.b, f.fm, frm, f.fb, right, f.depth + 1});
    }
    return total;
}

}  // namespace quaddetail

/// phi(r) = ∫ dx / sqrt((1+x^2)(1+(x+r)^2)), by adaptive Simpson in
/// tan-compactified charts.  The integrand has unit-width features at x = 0
/// and x = -r; each chart x = c + tan(theta) is centered on one of them, so
/// the substituted integrands stay tame for every r.
inline double phi(double r, double abs_tol = 1e-10) {
    if (!(abs_tol > 0)) throw std::invalid_argument("phi: abs_tol must be positive");
    auto integrand = [r](double x) {
        // product written via hypot to avoid overflow at the chart edges
        return 1.0 / (std::hypot(1.0, x) * std::hypot(1.0, x + r));
    };
    const double c1 = std::min(0.0, -r), c2 = std::max(0.0, -r);
    const double mid = 0.5 * (c1 + c2);
    const double half_pi = std::acos(-1.0) / 2;
    long budget = 4'000'000;
    auto chart = [&](double center, double th_lo, double th_hi) {
        auto g = [&](double th) {
            const double c = std::cos(th);
            if (std::fabs(c) < 1e-154) return 0.0;  // integrand decays faster than sec^2 grows
            const double x = center + std::tan(th);
            const double sec2 = 1.0 + std::tan(th) * std::tan(th);
            return integrand(x) * sec2;
        };
        return quaddetail::adaptive_simpson(g, th_lo, th_hi, abs_tol / 4, budget);
    };
    double total = chart(c1, -half_pi, 0.0) + chart(c2, 0.0, half_pi);
    total += chart(c1, 0.0, std::atan(mid - c1));
    total += chart(c2, std::atan(mid - c2), 0.0);
    return total;
}

}  // namespace triflag
