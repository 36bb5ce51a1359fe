#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "paoi/distribution.hpp"
#include "paoi/numerics.hpp"
#include "paoi/threshold.hpp"

// Preemptive discipline: a fresh packet evicts the one being computed unless
// the server finishes within the waiting window. The PAoI is a renewal-reward
// ratio over delivered packets.
namespace paoi::preemptive {

// Wait window as a function of the packet's own transmission time:
// fixed theta, or the transmission-aware window max{0, beta - T}.
struct WaitFunction {
    enum class Kind { fixed, transmission_aware };
    Kind kind = Kind::fixed;
    double param = 0.0;

    static WaitFunction fixed(Threshold theta) { return {Kind::fixed, theta.value}; }
    static WaitFunction transmission_aware(double beta) {
        return {Kind::transmission_aware, beta};
    }

    double g(double x) const {
        if (kind == Kind::fixed) return param;
        return std::max(0.0, param - x);
    }
    bool waits_forever() const { return std::isinf(param) && param > 0.0; }
};

struct WpEvaluation {
    double numerator = 0.0;     // E[T + min{g(T),C} + (T+C) 1_delivered]
    double prob_success = 0.0;  // Pr(delivered)
    double paoi = 0.0;          // numerator / prob_success
};

struct TraceStep {
    double c = 0.0;
    Threshold inner;
    double p_of_c = 0.0;
};

struct DinkelbachTrace {
    std::vector<TraceStep> steps;
    bool converged = false;
};

struct DinkelbachOutcome {
    OptimizationResult result;
    DinkelbachTrace trace;
};

namespace detail {

inline std::vector<double> ta_outer_breakpoints(double beta, const DistributionSpec& C) {
    std::vector<double> bps;
    const double lo = C.support_lo();
    if (lo - beta > 0.0) bps.push_back(lo - beta);
    if (lo > 0.0) bps.push_back(lo);
    return bps;
}

inline std::vector<double> ta_inner_breakpoints(double beta, double y,
                                                const DistributionSpec& C) {
    std::vector<double> bps;
    if (beta > 0.0) bps.push_back(beta);
    const double cross = y + beta - C.support_lo();
    if (cross > 0.0 && cross < beta) bps.push_back(cross);
    return bps;
}

}  // namespace detail

// Pr(C <= g(T) + T') with T' the next packet's transmission time
inline double prob_success(const WaitFunction& w, const DistributionSpec& T,
                           const DistributionSpec& C, double rel_tol = 1e-9) {
    if (w.waits_forever()) return 1.0;
    if (w.kind == WaitFunction::Kind::fixed) {
        const double th = w.param;
        const double kink = C.support_lo() - th;
        return T.expect([&C, th](double y) { return C.cdf(y + th); }, rel_tol,
                        kink > 0.0 ? std::vector<double>{kink} : std::vector<double>{});
    }
    const double beta = w.param;
    return T.expect(
        [&](double y) {
            return T.expect([&C, &w, y](double x) { return C.cdf(y + w.g(x)); },
                            rel_tol * 0.1, detail::ta_inner_breakpoints(beta, y, C));
        },
        rel_tol, detail::ta_outer_breakpoints(beta, C));
}

// E[(T + C) 1_delivered]; the computation-time integral collapses to
// x F_C(a) + E[C 1{C<=a}] with a = s + g(x)
inline double expected_tc_on_success(const WaitFunction& w, const DistributionSpec& T,
                                     const DistributionSpec& C, double rel_tol = 1e-9) {
    if (w.waits_forever()) return T.mean() + C.mean();
    if (w.kind == WaitFunction::Kind::fixed) {
        const double th = w.param;
        const double et = T.mean();
        const double kink = C.support_lo() - th;
        return T.expect(
            [&C, th, et](double s) { return et * C.cdf(s + th) + C.partial_mean(s + th); },
            rel_tol, kink > 0.0 ? std::vector<double>{kink} : std::vector<double>{});
    }
    const double beta = w.param;
    return T.expect(
        [&](double s) {
            return T.expect(
                [&C, &w, s](double x) {
                    const double a = s + w.g(x);
                    return x * C.cdf(a) + C.partial_mean(a);
                },
                rel_tol * 0.1, detail::ta_inner_breakpoints(beta, s, C));
        },
        rel_tol, detail::ta_outer_breakpoints(beta, C));
}

inline double expected_min_g_c(const WaitFunction& w, const DistributionSpec& T,
                               const DistributionSpec& C, double rel_tol = 1e-9) {
    if (w.waits_forever()) return C.mean();
    if (w.kind == WaitFunction::Kind::fixed) return C.expected_min(w.param);
    const double beta = w.param;
    if (beta <= 0.0) return 0.0;
    return T.expect([&](double x) { return C.expected_min(w.g(x)); }, rel_tol, {beta});
}

// Exponential computation time collapses everything to three transmission
// averages J0 = E[e^{-mu g}], J1 = E[T e^{-mu g}], Jg = E[g e^{-mu g}].
struct ClosedForms {
    double e_min = 0.0;  // E[min{g(T), C}]
    double pr = 0.0;     // Pr(delivered)
    double e_t = 0.0;    // E[T 1_delivered]
    double e_c = 0.0;    // E[C 1_delivered]
};

namespace detail {

inline ClosedForms closed_forms_exp_C_at(const WaitFunction& w, const DistributionSpec& T,
                                         double mu, double L, double M,
                                         double rel_tol = 1e-10) {
    if (w.waits_forever()) return {1.0 / mu, 1.0, T.mean(), 1.0 / mu};
    double j0, j1, jg;
    if (w.kind == WaitFunction::Kind::fixed) {
        const double th = w.param;
        j0 = std::exp(-mu * th);
        j1 = T.mean() * j0;
        jg = th * j0;
    } else if (w.param <= 0.0) {
        j0 = 1.0;
        j1 = T.mean();
        jg = 0.0;
    } else {
        const double beta = w.param;
        const std::vector<double> kink{beta};
        j0 = T.expect([&w, mu](double x) { return std::exp(-mu * w.g(x)); }, rel_tol, kink);
        j1 = T.expect([&w, mu](double x) { return x * std::exp(-mu * w.g(x)); }, rel_tol, kink);
        jg = T.expect([&w, mu](double x) { return w.g(x) * std::exp(-mu * w.g(x)); }, rel_tol,
                      kink);
    }
    ClosedForms out;
    out.e_min = (1.0 - j0) / mu;
    out.pr = 1.0 - L * j0;
    out.e_t = T.mean() - L * j1;
    // E[C 1{C <= T' + g}] via the exponential partial mean, factored over the
    // independent T', T
    out.e_c = 1.0 / mu - L * j0 / mu - L * jg - M * j0;
    return out;
}

}  // namespace detail

inline ClosedForms closed_forms_exp_C(const WaitFunction& w, const DistributionSpec& T,
                                      double mu, double rel_tol = 1e-10) {
    const auto tp = T.transforms(mu);
    return detail::closed_forms_exp_C_at(w, T, mu, tp.laplace, tp.weighted_laplace, rel_tol);
}

inline WpEvaluation paoi_wp(const WaitFunction& w, const DistributionSpec& T,
                            const DistributionSpec& C, double rel_tol = 1e-9) {
    WpEvaluation ev;
    if (C.kind() == Kind::exponential) {
        const auto cf = closed_forms_exp_C(w, T, C.rate(), std::min(rel_tol, 1e-10));
        ev.numerator = T.mean() + cf.e_min + cf.e_t + cf.e_c;
        ev.prob_success = cf.pr;
    } else {
        ev.prob_success = prob_success(w, T, C, rel_tol);
        ev.numerator = T.mean() + expected_min_g_c(w, T, C, rel_tol) +
                       expected_tc_on_success(w, T, C, rel_tol);
    }
    if (!(ev.prob_success > 0.0))
        throw std::domain_error("unreachable delivery: success probability is zero");
    ev.paoi = ev.numerator / ev.prob_success;
    return ev;
}

inline double dinkelbach_objective(double c, const WaitFunction& w, const DistributionSpec& T,
                                   const DistributionSpec& C, double rel_tol = 1e-9) {
    // numerator minus c times the success probability; no division, so it
    // stays finite even when delivery is nearly impossible
    if (C.kind() == Kind::exponential) {
        const auto cf = closed_forms_exp_C(w, T, C.rate(), std::min(rel_tol, 1e-10));
        return T.mean() + cf.e_min + cf.e_t + cf.e_c - c * cf.pr;
    }
    return T.mean() + expected_min_g_c(w, T, C, rel_tol) +
           expected_tc_on_success(w, T, C, rel_tol) - c * prob_success(w, T, C, rel_tol);
}

namespace detail {

struct InnerMin {
    double param;
    double objective;
};

// minimize the parameterized objective over the policy parameter: boundaries,
// a quantile grid, then golden-section around the best grid point
template <class Objective>
InnerMin minimize_over_param(Objective&& q, const std::vector<double>& grid) {
    std::size_t best = 0;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = q(grid[i]);
        if (vals[i] < vals[best] - 1e-15) best = i;
    }
    double refined = grid[best];
    double refined_val = vals[best];
    const std::size_t last_finite = grid.size() - 1;
    if (std::isfinite(grid[best])) {
        const double lo = grid[best > 0 ? best - 1 : 0];
        double hi = grid[std::min(best + 1, last_finite)];
        if (!std::isfinite(hi)) hi = grid[best];
        if (hi > lo) {
            const double x = num::golden_min(q, lo, hi, 1e-10 * std::max(1.0, hi));
            const double v = q(x);
            if (v < refined_val) {
                refined = x;
                refined_val = v;
            }
        }
    }
    // deterministic tie rule: smallest parameter within a relative whisker
    const double tol = 1e-12 * std::max(1.0, std::abs(refined_val));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (vals[i] <= refined_val + tol && grid[i] < refined) {
            refined = grid[i];
            refined_val = vals[i];
        }
    }
    return {refined, refined_val};
}

inline std::vector<double> param_grid(const DistributionSpec& D, bool stretch_tail) {
    std::vector<double> grid{0.0};
    if (D.kind() == Kind::deterministic) {
        grid.push_back(0.5 * D.value());
        grid.push_back(D.value());
        grid.push_back(2.0 * D.value());
    } else {
        const int n = 96;
        for (int i = 0; i < n; ++i) {
            const double p = 1e-3 + (1.0 - 2e-3) * double(i) / double(n - 1);
            grid.push_back(D.quantile(p));
        }
        if (stretch_tail) grid.push_back(2.0 * D.quantile(1.0 - 1e-3));
    }
    grid.push_back(std::numeric_limits<double>::infinity());
    return grid;
}

template <class MakeWait>
DinkelbachOutcome dinkelbach(const DistributionSpec& T, const DistributionSpec& C,
                             MakeWait&& make, const std::vector<double>& grid, double delta,
                             int max_iter, double rel_tol) {
    DinkelbachOutcome out;
    double c = 2.0 * T.mean() + 2.0 * C.mean();
    for (int it = 0; it < max_iter; ++it) {
        auto q = [&](double param) {
            return dinkelbach_objective(c, make(param), T, C, rel_tol);
        };
        const auto inner = minimize_over_param(q, grid);
        const double p = inner.objective;
        out.trace.steps.push_back({c, Threshold{inner.param}, p});
        const auto ev = paoi_wp(make(inner.param), T, C, rel_tol);
        if (std::abs(p) <= delta) {
            out.trace.converged = true;
            out.result.threshold = Threshold{inner.param};
            out.result.paoi = ev.paoi;
            out.result.iterations = int(out.trace.steps.size());
            out.result.residual = p;
            out.result.converged = true;
            return out;
        }
        c = ev.paoi;
    }
    out.trace.converged = false;
    out.result.converged = false;
    out.result.iterations = int(out.trace.steps.size());
    if (!out.trace.steps.empty()) {
        const auto& lastStep = out.trace.steps.back();
        out.result.threshold = lastStep.inner;
        out.result.paoi = c;
        out.result.residual = lastStep.p_of_c;
    }
    return out;
}

}  // namespace detail

inline DinkelbachOutcome optimize_fixed_threshold_wp(const DistributionSpec& T,
                                                     const DistributionSpec& C,
                                                     double delta = 1e-9, int max_iter = 100,
                                                     double rel_tol = 1e-9) {
    return detail::dinkelbach(
        T, C, [](double th) { return WaitFunction::fixed(Threshold{th}); },
        detail::param_grid(C, false), delta, max_iter, rel_tol);
}

inline DinkelbachOutcome optimize_transmission_aware_wp(const DistributionSpec& T,
                                                        const DistributionSpec& C,
                                                        double delta = 1e-9, int max_iter = 100,
                                                        double rel_tol = 1e-9) {
    return detail::dinkelbach(
        T, C, [](double b) { return WaitFunction::transmission_aware(b); },
        detail::param_grid(T, true), delta, max_iter, rel_tol);
}

// Exponential computation time: iterate the stationary window slope
// gamma(c) = 1/mu + c - M/L - 2/(mu L); nonpositive slope means the source
// never waits. The fixed point in c is the optimal ratio.
inline OptimizationResult optimal_policy_exp_C(const DistributionSpec& T, double mu,
                                               double delta = 1e-9, int max_iter = 100) {
    const auto tp = T.transforms(mu);
    const double L = tp.laplace;
    const double M = tp.weighted_laplace;
    auto gamma_of = [&](double c) { return 1.0 / mu + c - M / L - 2.0 / (mu * L); };

    OptimizationResult out;
    double c = 2.0 * T.mean() + 2.0 / mu;
    double beta = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        beta = std::max(gamma_of(c), 0.0);
        const auto cf = detail::closed_forms_exp_C_at(WaitFunction::transmission_aware(beta), T,
                                                      mu, L, M);
        const double c_next = (T.mean() + cf.e_min + cf.e_t + cf.e_c) / cf.pr;
        const double step = std::abs(c_next - c);
        c = c_next;
        out.iterations = it;
        if (step <= delta) {
            out.threshold = Threshold{std::max(gamma_of(c), 0.0)};
            out.paoi = c;
            out.residual = step;
            out.converged = true;
            return out;
        }
    }
    out.threshold = Threshold{beta};
    out.paoi = c;
    out.converged = false;
    return out;
}

}  // namespace paoi::preemptive
