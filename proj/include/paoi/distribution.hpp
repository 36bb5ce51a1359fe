#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "paoi/numerics.hpp"

namespace paoi {

// Counter-based splittable generator: (seed, stream) pairs give decorrelated
// streams, so simulation runs can hand out one stream per time source.
struct Rng {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(stream + 0x632BE59BD9B4E019ull)) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        return mix(state);
    }

    // strictly inside (0,1) so log/power transforms stay finite
    double uniform() { return double(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
};

struct TransformPair {
    double laplace = 0.0;           // E[e^{-mu X}]
    double weighted_laplace = 0.0;  // E[X e^{-mu X}]
};

enum class Kind { exponential, pareto, deterministic };

class DistributionSpec {
  public:
    static DistributionSpec exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
        return DistributionSpec(Kind::exponential, rate, 0.0);
    }
    static DistributionSpec pareto(double xm, double alpha) {
        if (!(xm > 0.0)) throw std::invalid_argument("pareto scale must be > 0");
        if (!(alpha > 1.0)) throw std::invalid_argument("pareto shape must be > 1 for a finite mean");
        return DistributionSpec(Kind::pareto, xm, alpha);
    }
    static DistributionSpec deterministic(double value) {
        if (!(value > 0.0)) throw std::invalid_argument("deterministic value must be > 0");
        return DistributionSpec(Kind::deterministic, value, 0.0);
    }

    Kind kind() const { return kind_; }
    double rate() const { return a_; }
    double xm() const { return a_; }
    double alpha() const { return b_; }
    double value() const { return a_; }

    double pdf(double x) const {
        switch (kind_) {
            case Kind::exponential:
                return x > 0.0 ? a_ * std::exp(-a_ * x) : 0.0;
            case Kind::pareto:
                return x >= a_ ? b_ * std::pow(a_, b_) / std::pow(x, b_ + 1.0) : 0.0;
            case Kind::deterministic:
                return 0.0;  // atom; mass lives in the cdf jump
        }
        return 0.0;
    }

    double cdf(double x) const {
        switch (kind_) {
            case Kind::exponential:
                return x > 0.0 ? -std::expm1(-a_ * x) : 0.0;
            case Kind::pareto:
                return x > a_ ? 1.0 - std::pow(a_ / x, b_) : 0.0;
            case Kind::deterministic:
                return x >= a_ ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double mean() const {
        switch (kind_) {
            case Kind::exponential:
                return 1.0 / a_;
            case Kind::pareto:
                return b_ * a_ / (b_ - 1.0);
            case Kind::deterministic:
                return a_;
        }
        return 0.0;
    }

    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0,1)");
        switch (kind_) {
            case Kind::exponential:
                return -std::log1p(-p) / a_;
            case Kind::pareto:
                return a_ * std::pow(1.0 - p, -1.0 / b_);
            case Kind::deterministic:
                return a_;
        }
        return 0.0;
    }

    // inverse-cdf draws; the deterministic kind still consumes one uniform so
    // common-random-number comparisons stay aligned across distribution kinds
    double sample(Rng& rng) const {
        const double u = rng.uniform();
        switch (kind_) {
            case Kind::exponential:
                return -std::log(u) / a_;
            case Kind::pareto:
                return a_ * std::pow(u, -1.0 / b_);
            case Kind::deterministic:
                return a_;
        }
        return 0.0;
    }

    double support_lo() const {
        switch (kind_) {
            case Kind::exponential:
                return 0.0;
            case Kind::pareto:
                return a_;
            case Kind::deterministic:
                return a_;
        }
        return 0.0;
    }

    TransformPair transforms(double mu) const {
        if (!(mu > 0.0)) throw std::invalid_argument("transforms need mu > 0");
        switch (kind_) {
            case Kind::exponential:
                return {a_ / (a_ + mu), a_ / ((a_ + mu) * (a_ + mu))};
            case Kind::deterministic:
                return {std::exp(-mu * a_), a_ * std::exp(-mu * a_)};
            case Kind::pareto: {
                const double L = num::integrate(
                    [this, mu](double x) { return pdf(x) * std::exp(-mu * x); }, a_,
                    std::numeric_limits<double>::infinity(), 1e-10);
                const double M = num::integrate(
                    [this, mu](double x) { return x * pdf(x) * std::exp(-mu * x); }, a_,
                    std::numeric_limits<double>::infinity(), 1e-10);
                return {L, M};
            }
        }
        return {};
    }

    // E[X 1{X <= t}]
    double partial_mean(double t) const {
        if (std::isinf(t) && t > 0.0) return mean();
        switch (kind_) {
            case Kind::exponential: {
                if (t <= 0.0) return 0.0;
                return -std::expm1(-a_ * t) / a_ - t * std::exp(-a_ * t);
            }
            case Kind::pareto: {
                if (t <= a_) return 0.0;
                return mean() * (1.0 - std::pow(a_ / t, b_ - 1.0));
            }
            case Kind::deterministic:
                return t >= a_ ? a_ : 0.0;
        }
        return 0.0;
    }

    // E[(X - a)^+]
    double mean_residual_above(double a) const {
        if (std::isinf(a) && a > 0.0) return 0.0;
        switch (kind_) {
            case Kind::exponential: {
                if (a <= 0.0) return mean() - a;
                return std::exp(-a_ * a) / a_;
            }
            case Kind::pareto: {
                if (a <= a_) return mean() - a;
                return a / (b_ - 1.0) * std::pow(a_ / a, b_);
            }
            case Kind::deterministic:
                return a_ > a ? a_ - a : 0.0;
        }
        return 0.0;
    }

    // E[min{a, X}] = mean - E[(X - a)^+]
    double expected_min(double a) const {
        if (std::isinf(a) && a > 0.0) return mean();
        return mean() - mean_residual_above(a);
    }

    // E[h(X)], exact for the atom, quadrature over the density otherwise
    template <class H>
    double expect(H&& h, double rel_tol = 1e-9, const std::vector<double>& breakpoints = {}) const {
        if (kind_ == Kind::deterministic) return h(a_);
        const double lo = support_lo();
        return num::integrate([this, &h](double x) { return pdf(x) * h(x); }, lo,
                              std::numeric_limits<double>::infinity(), rel_tol, breakpoints);
    }

  private:
    DistributionSpec(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_;
    double b_;
};

}  // namespace paoi
