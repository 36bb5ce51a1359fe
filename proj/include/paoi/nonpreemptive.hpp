#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "paoi/distribution.hpp"
#include "paoi/numerics.hpp"
#include "paoi/threshold.hpp"

// Non-preemptive discipline: the server finishes the packet it holds; a fixed
// threshold theta caps how long the source waits for that computation before
// releasing the next packet.
namespace paoi::nonpreemptive {

struct WopEvaluation {
    double paoi = 0.0;
    double term_min_theta_c = 0.0;  // E[min{theta, C}]
    double term_wait = 0.0;         // 2 E[(C~ - theta - T)^+]
    double constants = 0.0;         // 2 E[T] + E[C]
};

inline double expected_min_theta_c(Threshold theta, const DistributionSpec& C) {
    return C.expected_min(theta.value);
}

inline std::vector<double> wait_breakpoints(double shift, const DistributionSpec& C) {
    const double kink = C.support_lo() - shift;
    if (kink > 0.0 && std::isfinite(kink)) return {kink};
    return {};
}

inline double expected_wait_term(Threshold theta, const DistributionSpec& T,
                                 const DistributionSpec& C, double rel_tol = 1e-9) {
    if (theta.is_wait_for_completion()) return 0.0;
    const double th = theta.value;
    return 2.0 * T.expect([&C, th](double x) { return C.mean_residual_above(th + x); },
                          rel_tol, wait_breakpoints(th, C));
}

inline WopEvaluation paoi_wop(Threshold theta, const DistributionSpec& T,
                              const DistributionSpec& C, double rel_tol = 1e-9) {
    WopEvaluation ev;
    ev.term_min_theta_c = expected_min_theta_c(theta, C);
    ev.term_wait = expected_wait_term(theta, T, C, rel_tol);
    ev.constants = 2.0 * T.mean() + C.mean();
    ev.paoi = ev.term_min_theta_c + ev.term_wait + ev.constants;
    return ev;
}

inline double paoi_wop_randomized(const DistributionSpec& theta_dist, const DistributionSpec& T,
                                  const DistributionSpec& C) {
    if (theta_dist.kind() == Kind::deterministic)
        return paoi_wop(Threshold{theta_dist.value()}, T, C).paoi;
    return theta_dist.expect(
        [&T, &C](double th) { return paoi_wop(Threshold{th}, T, C).paoi; }, 1e-8);
}

// 2 E_T[F_C(T + theta)] - F_C(theta) - 1; zero at interior stationary points
// and proportional to the objective's derivative.
inline double stationarity_residual(double theta, const DistributionSpec& T,
                                    const DistributionSpec& C, double rel_tol = 1e-9) {
    const double avg = T.expect([&C, theta](double x) { return C.cdf(theta + x); }, rel_tol,
                                wait_breakpoints(theta, C));
    return 2.0 * avg - C.cdf(theta) - 1.0;
}

// E_T[f_C(T + theta)] >= f_C(theta) / 2, up to quadrature slack
inline bool second_order_ok(double theta, const DistributionSpec& T, const DistributionSpec& C,
                            double rel_tol = 1e-9) {
    const double lhs = T.expect([&C, theta](double x) { return C.pdf(theta + x); }, rel_tol,
                                wait_breakpoints(theta, C));
    const double rhs = 0.5 * C.pdf(theta);
    return lhs >= rhs - 1e-9 * (1.0 + std::abs(rhs));
}

namespace detail {

// candidate comparison with a deterministic tie rule: smaller threshold wins
// a tie, so 0 beats any finite root beats the sentinel
struct Candidate {
    Threshold theta;
    double paoi;
};

inline Candidate pick_best(const std::vector<Candidate>& cands, double tie_rel = 1e-12) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) best = std::min(best, c.paoi);
    const double tol = tie_rel * std::max(1.0, std::abs(best));
    Candidate win{};
    bool have = false;
    for (const auto& c : cands) {
        if (c.paoi > best + tol) continue;
        if (!have || c.theta.value < win.theta.value) {
            win = c;
            have = true;
        }
    }
    return win;
}

}  // namespace detail

// Exponential computation time: the derivative keeps one sign, so the optimum
// sits at a boundary picked by the transmission Laplace transform at rate mu.
inline OptimizationResult optimal_threshold_exp_C(const DistributionSpec& T, double mu) {
    const double L = T.transforms(mu).laplace;
    const DistributionSpec C = DistributionSpec::exponential(mu);
    OptimizationResult out;
    out.degenerate = std::abs(L - 0.5) <= 1e-12;
    if (L <= 0.5) {
        out.threshold = Threshold{0.0};
    } else {
        out.threshold = Threshold::wait_for_completion();
    }
    out.paoi = paoi_wop(out.threshold, T, C).paoi;
    return out;
}

// curvature of the stationarity map for exponential transmission
inline double pz_second_derivative(double theta, double lambda, const DistributionSpec& C) {
    return lambda * (1.0 - C.cdf(theta)) - C.pdf(theta);
}

// Exponential transmission, arbitrary computation: partition (0, inf) at the
// curvature's sign changes, bisect the stationarity residual on each convex
// piece, then take the best of the interior roots and both boundaries.
inline OptimizationResult optimize_threshold_exp_T(double lambda, const DistributionSpec& C,
                                                   double rel_tol = 1e-9) {
    const DistributionSpec T = DistributionSpec::exponential(lambda);
    auto curvature = [lambda, &C](double th) { return pz_second_derivative(th, lambda, C); };

    std::vector<double> partition{0.0};
    double grid_hi = 0.0;
    if (C.kind() == Kind::deterministic) {
        partition.push_back(C.value());
        grid_hi = C.value();
    } else {
        std::vector<double> grid;
        grid.reserve(4096);
        for (int i = 0; i < 4096; ++i) {
            const double p = 1e-4 + (1.0 - 2e-4) * double(i) / 4095.0;
            grid.push_back(C.quantile(p));
        }
        grid_hi = grid.back();
        for (const auto& br : num::find_sign_changes(curvature, grid))
            partition.push_back(num::bisect(curvature, br, 1e-13));
    }
    std::sort(partition.begin(), partition.end());

    std::vector<detail::Candidate> cands;
    int bisections = 0;
    auto residual_at = [&](double th) { return stationarity_residual(th, T, C, rel_tol); };
    // closed sub-intervals [l, r]; the unbounded tail past the grid cannot
    // hold a root (the residual approaches zero one-sidedly there)
    for (std::size_t i = 0; i < partition.size(); ++i) {
        double l = partition[i];
        double r = (i + 1 < partition.size()) ? partition[i + 1] : grid_hi;
        if (!(r > l)) continue;
        if (curvature(0.5 * (l + r)) <= 0.0) continue;  // residual not increasing here
        // stay strictly inside: the residual can jump at an atom sitting on a
        // piece boundary, and the jump value would mask the interior root
        const double nudge = 1e-9 * (r - l);
        if (l > 0.0) l += nudge;
        r -= nudge;
        const double rl = residual_at(l);
        const double rr = residual_at(r);
        const int sl = (rl > 0.0) - (rl < 0.0);
        const int sr = (rr > 0.0) - (rr < 0.0);
        double root = std::numeric_limits<double>::quiet_NaN();
        if (sl == 0) {
            root = l;
        } else if (sr == 0) {
            root = r;
        } else if (sl != sr) {
            root = num::bisect(residual_at, num::Bracket{l, r, sl, sr}, 1e-12);
            ++bisections;
        }
        if (std::isfinite(root) && second_order_ok(root, T, C, rel_tol))
            cands.push_back({Threshold{root}, paoi_wop(Threshold{root}, T, C, rel_tol).paoi});
    }

    const double p0 = paoi_wop(Threshold{0.0}, T, C, rel_tol).paoi;
    const double pinf = paoi_wop(Threshold::wait_for_completion(), T, C, rel_tol).paoi;
    const bool no_interior = cands.empty();
    cands.push_back({Threshold{0.0}, p0});
    cands.push_back({Threshold::wait_for_completion(), pinf});
    const auto win = detail::pick_best(cands);

    OptimizationResult out;
    out.threshold = win.theta;
    out.paoi = win.paoi;
    out.iterations = bisections;
    if (win.theta.value > 0.0 && !win.theta.is_wait_for_completion())
        out.residual = residual_at(win.theta.value);
    out.degenerate = no_interior && std::abs(p0 - pinf) <= 1e-12 * std::max(1.0, p0);
    return out;
}

// Any transmission/computation pair: quantile grid plus golden-section
// refinement around the best grid point, boundaries always in the running.
inline OptimizationResult optimize_threshold_general(const DistributionSpec& T,
                                                     const DistributionSpec& C,
                                                     double rel_tol = 1e-9) {
    auto objective = [&](double th) { return paoi_wop(Threshold{th}, T, C, rel_tol).paoi; };

    std::vector<double> grid{0.0};
    if (C.kind() == Kind::deterministic) {
        grid.push_back(C.value());
    } else {
        const int n = 129;
        for (int i = 0; i < n; ++i) {
            const double p = 1e-3 + (1.0 - 2e-3) * double(i) / double(n - 1);
            grid.push_back(C.quantile(p));
        }
    }

    std::size_t best = 0;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = objective(grid[i]);
        if (vals[i] < vals[best]) best = i;
    }
    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    double refined = grid[best];
    if (hi > lo) refined = num::golden_min(objective, lo, hi, 1e-9 * std::max(1.0, hi));

    std::vector<detail::Candidate> cands;
    cands.push_back({Threshold{0.0}, vals[0]});
    cands.push_back({Threshold{refined}, objective(refined)});
    cands.push_back({Threshold::wait_for_completion(),
                     paoi_wop(Threshold::wait_for_completion(), T, C, rel_tol).paoi});
    const auto win = detail::pick_best(cands);

    OptimizationResult out;
    out.threshold = win.theta;
    out.paoi = win.paoi;
    if (win.theta.value > 0.0 && !win.theta.is_wait_for_completion())
        out.residual = stationarity_residual(win.theta.value, T, C, rel_tol);
    out.degenerate =
        std::abs(cands.front().paoi - cands.back().paoi) <= 1e-12 * std::max(1.0, win.paoi);
    return out;
}

// Transmission-aware variant for this discipline: the source waits
// max{0, beta - T} after its packet starts computing. Same renewal structure
// as the fixed threshold with the wait conditioned on the previous packet's
// transmission time.
inline double paoi_wop_transmission_aware(double beta, const DistributionSpec& T,
                                          const DistributionSpec& C, double rel_tol = 1e-9) {
    if (std::isinf(beta) && beta > 0.0)
        return paoi_wop(Threshold::wait_for_completion(), T, C, rel_tol).paoi;
    auto g = [beta](double x) { return std::max(0.0, beta - x); };
    const std::vector<double> tkink = (beta > 0.0) ? std::vector<double>{beta} : std::vector<double>{};
    double emin, wait;
    if (C.kind() == Kind::exponential) {
        const double mu = C.rate();
        const double j0 = T.expect([&g, mu](double x) { return std::exp(-mu * g(x)); }, rel_tol, tkink);
        const double L = T.transforms(mu).laplace;
        emin = (1.0 - j0) / mu;
        wait = 2.0 * L * j0 / mu;
    } else {
        emin = T.expect([&](double x) { return C.expected_min(g(x)); }, rel_tol, tkink);
        wait = 2.0 * T.expect(
                         [&](double s) {
                             const double gs = g(s);
                             return T.expect(
                                 [&C, gs](double x) { return C.mean_residual_above(gs + x); },
                                 rel_tol * 0.1, wait_breakpoints(gs, C));
                         },
                         rel_tol, tkink);
    }
    return emin + wait + 2.0 * T.mean() + C.mean();
}

inline OptimizationResult optimize_transmission_aware_wop(const DistributionSpec& T,
                                                          const DistributionSpec& C,
                                                          double rel_tol = 1e-9) {
    auto objective = [&](double b) { return paoi_wop_transmission_aware(b, T, C, rel_tol); };

    std::vector<double> grid{0.0};
    if (T.kind() == Kind::deterministic) {
        grid.push_back(T.value());
        grid.push_back(2.0 * T.value());
    } else {
        const int n = 97;
        for (int i = 0; i < n; ++i) {
            const double p = 1e-3 + (1.0 - 2e-3) * double(i) / double(n - 1);
            grid.push_back(T.quantile(p));
        }
        grid.push_back(2.0 * T.quantile(1.0 - 1e-3));
    }

    std::size_t best = 0;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = objective(grid[i]);
        if (vals[i] < vals[best]) best = i;
    }
    const double lo = grid[best > 0 ? best - 1 : 0];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    double refined = grid[best];
    if (hi > lo) refined = num::golden_min(objective, lo, hi, 1e-9 * std::max(1.0, hi));

    std::vector<detail::Candidate> cands;
    cands.push_back({Threshold{0.0}, vals[0]});
    cands.push_back({Threshold{refined}, objective(refined)});
    cands.push_back({Threshold::wait_for_completion(),
                     paoi_wop(Threshold::wait_for_completion(), T, C, rel_tol).paoi});
    const auto win = detail::pick_best(cands);

    OptimizationResult out;
    out.threshold = win.theta;
    out.paoi = win.paoi;
    out.degenerate =
        std::abs(cands.front().paoi - cands.back().paoi) <= 1e-12 * std::max(1.0, win.paoi);
    return out;
}

}  // namespace paoi::nonpreemptive
