#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "paoi/distribution.hpp"
#include "paoi/threshold.hpp"

// Packet-level Monte Carlo of the source -> channel -> edge-server loop.
// The source submits only when channel and queue are free, so the sample
// path is a per-packet recursion, not a general event queue.
namespace paoi::sim {

enum class Discipline { preemptive, non_preemptive };

struct SystemConfig {
    Discipline discipline;
    DistributionSpec T;
    DistributionSpec C;
};

struct PolicySpec {
    enum class Kind { fixed_threshold, randomized_threshold, transmission_aware, mean_threshold };
    Kind kind = Kind::fixed_threshold;
    Threshold theta{};
    std::optional<DistributionSpec> theta_dist;
    double beta = 0.0;

    static PolicySpec fixed(Threshold th) {
        if (std::isnan(th.value) || th.value < 0.0)
            throw std::invalid_argument("fixed threshold must be nonnegative");
        PolicySpec p;
        p.kind = Kind::fixed_threshold;
        p.theta = th;
        return p;
    }
    static PolicySpec randomized(DistributionSpec dist) {
        PolicySpec p;
        p.kind = Kind::randomized_threshold;
        p.theta_dist = dist;
        return p;
    }
    static PolicySpec transmission_aware(double beta) {
        if (!(beta >= 0.0))
            throw std::invalid_argument("transmission-aware window must be nonnegative");
        PolicySpec p;
        p.kind = Kind::transmission_aware;
        p.beta = beta;
        return p;
    }
    static PolicySpec mean_threshold() {
        PolicySpec p;
        p.kind = Kind::mean_threshold;
        return p;
    }
};

struct SimResult {
    double avg_paoi = 0.0;
    double paoi_stderr = 0.0;
    double avg_aoi = 0.0;
    double aoi_stderr = 0.0;
    double delivery_ratio = 0.0;
    std::uint64_t packets_generated = 0;
    std::uint64_t packets_delivered = 0;
    double elapsed_model_time = 0.0;
};

struct SweepRow {
    std::size_t config_index = 0;
    std::size_t policy_index = 0;
    double ratio = 0.0;  // E[T]/E[C]
    bool ok = false;
    std::string error;
    SimResult result;
};

namespace detail {

inline double draw_cap(const PolicySpec& pol, double t, Rng& rng, double mean_c) {
    switch (pol.kind) {
        case PolicySpec::Kind::fixed_threshold:
            return pol.theta.value;
        case PolicySpec::Kind::randomized_threshold:
            return pol.theta_dist->sample(rng);
        case PolicySpec::Kind::transmission_aware:
            return std::max(0.0, pol.beta - t);
        case PolicySpec::Kind::mean_threshold:
            return mean_c;
    }
    return 0.0;
}

// Packet 0 seeds the recursion: submitted at -(T0+C0), delivered at time 0,
// so the age process starts anchored. It is excluded from every count.
// The sink sees each delivered real packet as (index, peak, age, delivery).
template <class Sink>
std::uint64_t run_path(const SystemConfig& cfg, const PolicySpec& policy, std::uint64_t n,
                       std::uint64_t seed, std::uint64_t stream_base, Sink&& sink) {
    Rng rng_t(seed, stream_base + 0);
    Rng rng_c(seed, stream_base + 1);
    Rng rng_p(seed, stream_base + 2);
    const double mean_c = cfg.C.mean();

    double t_prev = cfg.T.sample(rng_t);
    double c_prev = cfg.C.sample(rng_c);
    double cap_prev = draw_cap(policy, t_prev, rng_p, mean_c);
    double s_prev = -(t_prev + c_prev);
    double s_last_delivery = s_prev;
    std::uint64_t delivered = 0;

    if (cfg.discipline == Discipline::non_preemptive) {
        double z_prev = t_prev + std::min(cap_prev, c_prev);
        for (std::uint64_t k = 1; k <= n; ++k) {
            const double t = cfg.T.sample(rng_t);
            const double c = cfg.C.sample(rng_c);
            const double cap = draw_cap(policy, t, rng_p, mean_c);
            const double s = s_prev + z_prev;
            const double wait = std::max(0.0, c_prev - cap_prev - t);
            const double age = t + wait + c;
            const double d = s + age;
            ++delivered;
            sink(k, d - s_last_delivery, age, d);
            s_last_delivery = s;
            z_prev = t + wait + std::min(cap, c);
            s_prev = s;
            c_prev = c;
            cap_prev = cap;
        }
        return delivered;
    }

    // preemptive: packet k-1's fate is settled by the next transmission time
    // (a tie counts as delivered); one lookahead draw adjudicates packet n
    for (std::uint64_t k = 1; k <= n + 1; ++k) {
        const double t = cfg.T.sample(rng_t);
        if (k > 1 && c_prev <= cap_prev + t) {
            ++delivered;
            const double d = s_prev + t_prev + c_prev;
            sink(k - 1, d - s_last_delivery, d - s_prev, d);
            s_last_delivery = s_prev;
        }
        if (k > n) break;
        const double c = cfg.C.sample(rng_c);
        const double cap = draw_cap(policy, t, rng_p, mean_c);
        s_prev = s_prev + t_prev + std::min(cap_prev, c_prev);
        t_prev = t;
        c_prev = c;
        cap_prev = cap;
    }
    return delivered;
}

inline double mean_of(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s / double(hi - lo);
}

inline double stderr_of_means(const std::vector<double>& block_means) {
    const std::size_t b = block_means.size();
    double m = 0.0;
    for (double v : block_means) m += v;
    m /= double(b);
    double ss = 0.0;
    for (double v : block_means) ss += (v - m) * (v - m);
    return std::sqrt(ss / double(b - 1) / double(b));
}

inline SimResult simulate_at(const SystemConfig& cfg, const PolicySpec& policy, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t stream_base,
                             std::uint64_t batches) {
    if (batches < 2 || n < batches)
        throw std::invalid_argument("need n_packets >= batches >= 2");
    const std::uint64_t warmup = std::max<std::uint64_t>(1, n / 100);

    std::vector<double> peaks, areas, spans;
    bool anchored = false;
    double d_prev = 0.0, age_prev = 0.0;
    const std::uint64_t delivered = run_path(
        cfg, policy, n, seed, stream_base,
        [&](std::uint64_t k, double peak, double age, double d) {
            if (!anchored) {
                if (k >= warmup) {
                    anchored = true;
                    d_prev = d;
                    age_prev = age;
                }
                return;
            }
            const double dt = d - d_prev;
            peaks.push_back(peak);
            areas.push_back(dt * age_prev + 0.5 * dt * dt);
            spans.push_back(dt);
            d_prev = d;
            age_prev = age;
        });

    if (!anchored || peaks.empty())
        throw std::runtime_error("no renewals in the measurement window");
    if (peaks.size() < batches)
        throw std::runtime_error("too few delivered packets for batch means");

    const std::size_t kcount = peaks.size();
    std::vector<double> paoi_blocks(batches), aoi_blocks(batches);
    for (std::uint64_t i = 0; i < batches; ++i) {
        const std::size_t lo = std::size_t(i * kcount / batches);
        const std::size_t hi = std::size_t((i + 1) * kcount / batches);
        paoi_blocks[i] = mean_of(peaks, lo, hi);
        double a = 0.0, s = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            a += areas[j];
            s += spans[j];
        }
        aoi_blocks[i] = a / s;
    }

    double area_total = 0.0, span_total = 0.0;
    for (std::size_t j = 0; j < kcount; ++j) {
        area_total += areas[j];
        span_total += spans[j];
    }

    SimResult r;
    r.avg_paoi = mean_of(peaks, 0, kcount);
    r.paoi_stderr = stderr_of_means(paoi_blocks);
    r.avg_aoi = area_total / span_total;
    r.aoi_stderr = stderr_of_means(aoi_blocks);
    r.packets_generated = n;
    r.packets_delivered = delivered;
    r.delivery_ratio = double(delivered) / double(n);
    r.elapsed_model_time = span_total;
    return r;
}

}  // namespace detail

inline SimResult simulate(const SystemConfig& cfg, const PolicySpec& policy, std::uint64_t n,
                          std::uint64_t seed, std::uint64_t batches = 100) {
    return detail::simulate_at(cfg, policy, n, seed, 0, batches);
}

// the peak of every delivered packet, in delivery order, no warm-up discard
inline std::vector<double> peak_series(const SystemConfig& cfg, const PolicySpec& policy,
                                       std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need n_packets >= 1");
    std::vector<double> out;
    detail::run_path(cfg, policy, n, seed, 0,
                     [&](std::uint64_t, double peak, double, double) { out.push_back(peak); });
    if (out.empty()) throw std::runtime_error("no renewals in the measurement window");
    return out;
}

// the wait each packet spends behind the previous computation; diagnostic
// for the non-preemptive wait law max{0, C~ - theta - T}
inline std::vector<double> wait_series(const SystemConfig& cfg, const PolicySpec& policy,
                                       std::uint64_t n, std::uint64_t seed) {
    if (cfg.discipline != Discipline::non_preemptive)
        throw std::invalid_argument("wait series is a non-preemptive diagnostic");
    if (n < 1) throw std::invalid_argument("need n_packets >= 1");

    Rng rng_t(seed, 0);
    Rng rng_c(seed, 1);
    Rng rng_p(seed, 2);
    const double mean_c = cfg.C.mean();
    double c_prev = 0.0, cap_prev = 0.0;
    {
        const double t0 = cfg.T.sample(rng_t);
        c_prev = cfg.C.sample(rng_c);
        cap_prev = detail::draw_cap(policy, t0, rng_p, mean_c);
    }
    std::vector<double> out;
    out.reserve(n);
    for (std::uint64_t k = 1; k <= n; ++k) {
        const double t = cfg.T.sample(rng_t);
        const double c = cfg.C.sample(rng_c);
        const double cap = detail::draw_cap(policy, t, rng_p, mean_c);
        out.push_back(std::max(0.0, c_prev - cap_prev - t));
        c_prev = c;
        cap_prev = cap;
    }
    return out;
}

// cartesian product of systems and policies; policy columns under the same
// system share RNG streams (common random numbers), distinct systems do not
inline std::vector<SweepRow> sweep(const std::vector<SystemConfig>& configs,
                                   const std::vector<PolicySpec>& policies, std::uint64_t n,
                                   std::uint64_t seed, std::uint64_t batches = 100) {
    if (configs.empty() || policies.empty())
        throw std::invalid_argument("sweep needs at least one system and one policy");
    std::vector<SweepRow> rows;
    rows.reserve(configs.size() * policies.size());
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        for (std::size_t pi = 0; pi < policies.size(); ++pi) {
            SweepRow row;
            row.config_index = ci;
            row.policy_index = pi;
            row.ratio = configs[ci].T.mean() / configs[ci].C.mean();
            try {
                row.result =
                    detail::simulate_at(configs[ci], policies[pi], n, seed, 3 * ci, batches);
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

// sup |F_a - F_b| over the pooled sample; ties (atoms) handled by draining
// both sides before comparing
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    return d;
}

}  // namespace paoi::sim
