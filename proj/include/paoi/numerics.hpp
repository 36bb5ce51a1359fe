#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace paoi::num {

inline constexpr double kDefaultRelTol = 1e-8;
inline constexpr int kMaxDepth = 50;

// Raised when adaptive subdivision runs out of budget; carries the best
// estimate so callers can still report something useful.
struct QuadratureError : std::runtime_error {
    double estimate;
    double bound;
    QuadratureError(const std::string& msg, double est, double bnd)
        : std::runtime_error(msg), estimate(est), bound(bnd) {}
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    int sign_lo = 0;
    int sign_hi = 0;
};

namespace detail {

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

struct SimpsonState {
    bool converged = true;
    double bound = 0.0;
};

template <class Func>
double adapt(Func& f, double a, double m, double b, double fa, double fm, double fb,
             double whole, double eps, double scale, int depth, SimpsonState& st) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // second test: delta is below rounding noise relative to the whole integral
    if (std::abs(delta) <= 15.0 * eps || scale + delta == scale)
        return left + right + delta / 15.0;
    // give up when the budget or the floating point grid is exhausted
    if (depth <= 0 || !(a < lm && lm < m && m < rm && rm < b)) {
        st.converged = false;
        st.bound += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    const double vl = adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, scale, depth - 1, st);
    const double vr = adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, scale, depth - 1, st);
    return vl + vr;
}

template <class Func>
double segment(Func& f, double a, double b, double eps, double scale, int depth,
               SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adapt(f, a, m, b, fa, fm, fb, whole, eps, scale, depth, st);
}

}  // namespace detail

// Adaptive Simpson over [lo, hi] with mandatory splits at the supplied interior
// breakpoints (support edges, kinks). Tolerance is relative to the coarse
// magnitude of the integral.
template <class Func>
double integrate_finite(Func&& f, double lo, double hi, double rel_tol = kDefaultRelTol,
                        const std::vector<double>& breakpoints = {}, int max_depth = kMaxDepth) {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
    if (!(hi > lo)) return 0.0;

    std::vector<double> pts;
    pts.reserve(breakpoints.size() + 2);
    pts.push_back(lo);
    std::vector<double> bps = breakpoints;
    std::sort(bps.begin(), bps.end());
    for (double x : bps)
        if (x > pts.back() && x < hi) pts.push_back(x);
    pts.push_back(hi);

    double coarse = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1], m = 0.5 * (a + b);
        coarse += std::abs((b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b)));
    }
    const double scale = std::max(coarse, 1e-12);
    const double eps_total = rel_tol * scale;
    const double eps_seg = eps_total / double(pts.size() - 1);

    detail::SimpsonState st;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += detail::segment(f, pts[i], pts[i + 1], eps_seg, scale, max_depth, st);
    if (!std::isfinite(total))
        throw QuadratureError("quadrature failure: non-finite result", total, st.bound);
    if (!st.converged && st.bound > eps_total)
        throw QuadratureError("quadrature failure: subdivision budget exhausted", total, st.bound);
    return total;
}

// Semi-infinite upper limits go through x = lo + t/(1-t); integrands are
// assumed to decay, so the mapped value at t -> 1 is taken as 0.
template <class Func>
double integrate(Func&& f, double lo, double hi, double rel_tol = kDefaultRelTol,
                 const std::vector<double>& breakpoints = {}, int max_depth = kMaxDepth) {
    if (std::isinf(hi)) {
        auto g = [&f, lo](double t) {
            if (t >= 1.0) return 0.0;
            const double u = 1.0 - t;
            const double v = f(lo + t / u) / (u * u);
            return std::isfinite(v) ? v : 0.0;
        };
        std::vector<double> mapped;
        mapped.reserve(breakpoints.size());
        for (double x : breakpoints)
            if (x > lo && std::isfinite(x)) mapped.push_back((x - lo) / (1.0 + (x - lo)));
        return integrate_finite(g, 0.0, 1.0, rel_tol, mapped, max_depth);
    }
    return integrate_finite(std::forward<Func>(f), lo, hi, rel_tol, breakpoints, max_depth);
}

template <class Func>
double bisect(Func&& f, const Bracket& br, double tol = 1e-10) {
    if (!(br.lo < br.hi) || br.sign_lo == br.sign_hi)
        throw std::invalid_argument("bad bracket");
    const double flo = f(br.lo);
    const double fhi = f(br.hi);
    const int slo = detail::sgn(flo);
    const int shi = detail::sgn(fhi);
    if (slo == 0) return br.lo;
    if (shi == 0) return br.hi;
    if (slo == shi) throw std::invalid_argument("bad bracket");
    double lo = br.lo, hi = br.hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi)) break;
        const int sm = detail::sgn(f(mid));
        if (sm == 0) return mid;
        (sm == slo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Scans the given ordered points; exact zeros carry no sign and are bridged,
// so a root sitting on a grid point still yields one enclosing bracket.
template <class Func>
std::vector<Bracket> find_sign_changes(Func&& f, const std::vector<double>& points) {
    std::vector<Bracket> out;
    if (points.size() < 2) return out;
    std::vector<int> s(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) s[i] = detail::sgn(f(points[i]));
    std::size_t prev = 0;
    while (prev < points.size() && s[prev] == 0) ++prev;
    for (std::size_t j = prev + 1; j < points.size(); ++j) {
        if (s[j] == 0) continue;
        if (s[j] != s[prev]) out.push_back({points[prev], points[j], s[prev], s[j]});
        prev = j;
    }
    return out;
}

template <class Func>
std::vector<Bracket> find_sign_changes(Func&& f, double lo, double hi, int grid) {
    if (grid < 2) throw std::invalid_argument("grid must have at least 2 points");
    std::vector<double> pts(static_cast<std::size_t>(grid));
    const double step = (hi - lo) / double(grid - 1);
    for (int i = 0; i < grid; ++i) pts[std::size_t(i)] = lo + step * i;
    pts.back() = hi;
    return find_sign_changes(std::forward<Func>(f), pts);
}

// Golden section minimizer for unimodal sections; tol is absolute on x.
template <class Func>
double golden_min(Func&& f, double lo, double hi, double tol = 1e-10) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace paoi::num
