#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "paoi/preemptive.hpp"
#include "paoi/simulation.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using paoi::DistributionSpec;
using paoi::Rng;
using paoi::Threshold;
namespace sim = paoi::sim;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

sim::SystemConfig nonpre(DistributionSpec T, DistributionSpec C) {
    return {sim::Discipline::non_preemptive, T, C};
}
sim::SystemConfig pre(DistributionSpec T, DistributionSpec C) {
    return {sim::Discipline::preemptive, T, C};
}
sim::PolicySpec fixed_p(double th) { return sim::PolicySpec::fixed(Threshold{th}); }

double within_3se(double value, double target, double se) {
    return std::abs(value - target) - 3.0 * se;
}

}  // namespace

TEST_CASE("deterministic sawtooth, single process", "[simulation]") {
    const auto cfg = nonpre(DistributionSpec::deterministic(0.5),
                            DistributionSpec::deterministic(0.5));
    const auto r = sim::simulate(cfg, fixed_p(kInf), 1000, 7, 10);
    CHECK(r.avg_paoi == 2.0);
    CHECK(r.avg_aoi == 1.5);
    CHECK(r.paoi_stderr == 0.0);
    CHECK(r.aoi_stderr == 0.0);
    CHECK(r.delivery_ratio == 1.0);
    CHECK(r.packets_generated == 1000);
    CHECK(r.packets_delivered == 1000);
    CHECK(r.elapsed_model_time == Approx(990.0).margin(1e-9));
}

TEST_CASE("deterministic preemptive tie counts as delivered", "[simulation]") {
    const auto cfg =
        pre(DistributionSpec::deterministic(0.5), DistributionSpec::deterministic(0.5));
    const auto r = sim::simulate(cfg, fixed_p(0.0), 1000, 7, 10);
    CHECK(r.avg_paoi == 1.5);
    CHECK(r.avg_aoi == 1.25);
    CHECK(r.delivery_ratio == 1.0);
    CHECK(r.packets_delivered == 1000);
}

TEST_CASE("deterministic replay is bit identical", "[simulation]") {
    const auto cfg = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto a = sim::simulate(cfg, fixed_p(0.3), 20000, 42);
    const auto b = sim::simulate(cfg, fixed_p(0.3), 20000, 42);
    CHECK(a.avg_paoi == b.avg_paoi);
    CHECK(a.paoi_stderr == b.paoi_stderr);
    CHECK(a.avg_aoi == b.avg_aoi);
    CHECK(a.aoi_stderr == b.aoi_stderr);
    CHECK(a.elapsed_model_time == b.elapsed_model_time);
    CHECK(a.packets_delivered == b.packets_delivered);

    const auto c = sim::simulate(cfg, fixed_p(0.3), 20000, 43);
    CHECK(a.avg_paoi != c.avg_paoi);

    const auto s1 = sim::peak_series(cfg, fixed_p(0.3), 5000, 42);
    const auto s2 = sim::peak_series(cfg, fixed_p(0.3), 5000, 42);
    CHECK(s1 == s2);
}

TEST_CASE("non-preemptive service delivers every packet", "[simulation]") {
    const std::vector<sim::SystemConfig> cfgs{
        nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0)),
        nonpre(DistributionSpec::pareto(0.25, 2.0), DistributionSpec::exponential(4.0)),
        nonpre(DistributionSpec::deterministic(0.5), DistributionSpec::pareto(0.125, 3.0)),
    };
    const std::vector<sim::PolicySpec> pols{fixed_p(0.0), fixed_p(0.4), fixed_p(kInf),
                                            sim::PolicySpec::mean_threshold()};
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const auto r = sim::simulate(cfgs[i], pols[i % pols.size()], 30000, 11 + i);
        CHECK(r.delivery_ratio == 1.0);
        CHECK(r.packets_delivered == r.packets_generated);
    }
}

TEST_CASE("peak series matches the aggregate run", "[simulation]") {
    const auto det = nonpre(DistributionSpec::deterministic(0.5),
                            DistributionSpec::deterministic(0.5));
    const auto ds = sim::peak_series(det, fixed_p(kInf), 200, 3);
    REQUIRE(ds.size() == 200);
    for (double p : ds) CHECK(p == 2.0);

    const auto cfg = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto r = sim::simulate(cfg, fixed_p(0.0), 100000, 5);
    const auto series = sim::peak_series(cfg, fixed_p(0.0), 100000, 5);
    CHECK(series.size() == r.packets_delivered);

    const auto pcfg = pre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto pr = sim::simulate(pcfg, fixed_p(0.0), 100000, 5);
    const auto pseries = sim::peak_series(pcfg, fixed_p(0.0), 100000, 5);
    CHECK(pseries.size() == pr.packets_delivered);
}

TEST_CASE("simulation matches analytics, non-preemptive", "[simulation]") {
    const std::uint64_t n = 1000000;

    // balanced exponential pair: flat in the threshold, value 2.0
    const auto flat = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    for (double th : {0.0, 0.6}) {
        const auto r = sim::simulate(flat, fixed_p(th), n, 101);
        CHECK(within_3se(r.avg_paoi, 2.0, r.paoi_stderr) <= 0.0);
    }

    // mean-threshold baseline resolves to theta = E[C]
    const auto skew = nonpre(DistributionSpec::exponential(4.0 / 3.0),
                             DistributionSpec::exponential(4.0));
    const auto rm = sim::simulate(skew, sim::PolicySpec::mean_threshold(), n, 102);
    CHECK(within_3se(rm.avg_paoi, 1.9540150698535697, rm.paoi_stderr) <= 0.0);
    const auto rf = sim::simulate(skew, fixed_p(0.25), n, 102);
    CHECK(rf.avg_paoi == rm.avg_paoi);

    // randomized threshold drawn per packet from its own stream
    const auto rr = sim::simulate(
        skew, sim::PolicySpec::randomized(DistributionSpec::exponential(1.0)), n, 103);
    CHECK(within_3se(rr.avg_paoi, 1.975, rr.paoi_stderr) <= 0.0);
}

TEST_CASE("waits follow the residual law", "[simulation]") {
    const std::uint64_t n = 200000;
    const auto T = DistributionSpec::exponential(2.0);
    const auto C = DistributionSpec::exponential(4.0 / 3.0);
    const double th = 0.3;
    const auto ws = sim::wait_series(nonpre(T, C), fixed_p(th), n, 55);
    REQUIRE(ws.size() == n);

    std::vector<double> direct(n);
    Rng rt(99, 7), rc(99, 8);
    for (auto& w : direct) w = std::max(0.0, C.sample(rc) - th - T.sample(rt));

    const double d = sim::two_sample_ks(ws, direct);
    const double crit = 1.6276 * std::sqrt(double(n + n) / (double(n) * double(n)));
    CHECK(d < crit);
}

TEST_CASE("simulation matches analytics, preemptive", "[simulation]") {
    const std::uint64_t n = 1000000;

    const auto balanced = pre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto r0 = sim::simulate(balanced, fixed_p(0.0), n, 201);
    CHECK(within_3se(r0.avg_paoi, 1.75, r0.paoi_stderr) <= 0.0);
    CHECK(within_3se(r0.delivery_ratio, 0.5, std::sqrt(0.25 / double(n))) <= 0.0);

    const auto rta = sim::simulate(balanced, sim::PolicySpec::transmission_aware(0.45851106), n, 202);
    CHECK(within_3se(rta.avg_paoi, 1.7085110560, rta.paoi_stderr) <= 0.0);

    const auto rs = sim::simulate(balanced, fixed_p(kInf), n, 203);
    CHECK(within_3se(rs.avg_paoi, 2.0, rs.paoi_stderr) <= 0.0);
    CHECK(rs.delivery_ratio == 1.0);

    // heavy-tailed transmission with an interior window; the simulator is the
    // independent oracle for the delivered-computation closed form
    const auto heavy = pre(DistributionSpec::pareto(0.125, 2.0),
                           DistributionSpec::exponential(4.0 / 3.0));
    const double beta = 0.15655313;
    const auto rh = sim::simulate(heavy, sim::PolicySpec::transmission_aware(beta), n, 204);
    CHECK(within_3se(rh.avg_paoi, 1.3727585334, rh.paoi_stderr) <= 0.0);

    const double pr_analytic =
        paoi::preemptive::closed_forms_exp_C(
            paoi::preemptive::WaitFunction::transmission_aware(beta), heavy.T, 4.0 / 3.0)
            .pr;
    const double se_dr = std::sqrt(pr_analytic * (1.0 - pr_analytic) / double(n));
    CHECK(within_3se(rh.delivery_ratio, pr_analytic, se_dr) <= 0.0);
}

TEST_CASE("age never exceeds its peaks", "[simulation]") {
    // square-integrable legs only: with a pareto alpha = 2 leg the
    // inter-delivery gap has infinite second moment, the time-average age
    // drifts upward without bound, and the ordering genuinely fails even
    // though the peak average stays put
    const std::vector<std::pair<sim::SystemConfig, sim::PolicySpec>> cells{
        {nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0)),
         fixed_p(0.4)},
        {nonpre(DistributionSpec::pareto(0.25, 3.0), DistributionSpec::exponential(2.0)),
         fixed_p(0.0)},
        {nonpre(DistributionSpec::deterministic(0.5), DistributionSpec::pareto(0.125, 3.0)),
         sim::PolicySpec::mean_threshold()},
        {pre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0)),
         sim::PolicySpec::transmission_aware(0.5)},
        {pre(DistributionSpec::pareto(0.125, 3.0), DistributionSpec::exponential(4.0 / 3.0)),
         fixed_p(0.2)},
        {pre(DistributionSpec::exponential(4.0 / 3.0), DistributionSpec::exponential(4.0)),
         fixed_p(kInf)},
    };
    std::uint64_t seed = 301;
    for (const auto& [cfg, pol] : cells) {
        const auto r = sim::simulate(cfg, pol, 200000, seed++);
        CHECK(r.avg_aoi <= r.avg_paoi);
        CHECK(r.avg_aoi > 0.0);
        CHECK(r.paoi_stderr >= 0.0);
        CHECK(r.aoi_stderr >= 0.0);
        CHECK(r.elapsed_model_time > 0.0);
        CHECK(r.delivery_ratio > 0.0);
        CHECK(r.delivery_ratio <= 1.0);
        if (cfg.discipline == sim::Discipline::non_preemptive) CHECK(r.delivery_ratio == 1.0);
    }
}

TEST_CASE("warm-up discard is insensitive at scale", "[simulation]") {
    const std::uint64_t n = 1000000;
    const auto cfg = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto r = sim::simulate(cfg, fixed_p(0.0), n, 401);
    const auto series = sim::peak_series(cfg, fixed_p(0.0), n, 401);
    REQUIRE(series.size() == n);

    const std::size_t w = n / 100;
    const double m1 =
        std::accumulate(series.begin() + w, series.end(), 0.0) / double(n - w);
    CHECK(m1 == Approx(r.avg_paoi).margin(1e-12));

    const double m2 =
        std::accumulate(series.begin() + 2 * w, series.end(), 0.0) / double(n - 2 * w);
    CHECK(std::abs(m2 - r.avg_paoi) < r.paoi_stderr);
}

TEST_CASE("sweep covers the grid and records per-cell errors", "[simulation]") {
    // single cell reproduces simulate exactly
    const auto cfg = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    const auto lone = sim::sweep({cfg}, {fixed_p(0.3)}, 20000, 42);
    REQUIRE(lone.size() == 1);
    CHECK(lone[0].ok);
    const auto direct = sim::simulate(cfg, fixed_p(0.3), 20000, 42);
    CHECK(lone[0].result.avg_paoi == direct.avg_paoi);
    CHECK(lone[0].result.avg_aoi == direct.avg_aoi);
    CHECK(lone[0].ratio == 1.0);

    // ratio grid with the rule-optimal policies in the columns
    const std::vector<sim::SystemConfig> grid{
        nonpre(DistributionSpec::exponential(4.0), DistributionSpec::exponential(4.0 / 3.0)),
        nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0)),
        nonpre(DistributionSpec::exponential(4.0 / 3.0), DistributionSpec::exponential(4.0)),
    };
    const auto rows = sim::sweep(grid, {fixed_p(kInf), fixed_p(0.0)}, 500000, 77);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].ratio == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(rows[2].ratio == Approx(1.0).margin(1e-12));
    CHECK(rows[4].ratio == Approx(3.0).margin(1e-12));
    for (const auto& row : rows) CHECK(row.ok);

    auto close = [](const sim::SweepRow& row, double target) {
        return std::abs(row.result.avg_paoi - target) <= 3.0 * row.result.paoi_stderr;
    };
    CHECK(close(rows[0], 2.0));   // ratio 1:3, wait for completion
    CHECK(close(rows[2], 2.0));   // balanced, flat
    CHECK(close(rows[3], 2.0));   // balanced, flat
    CHECK(close(rows[5], 1.875)); // ratio 3:1, never wait

    // errors are recorded per cell and the sweep continues
    const std::vector<sim::SystemConfig> mixed{
        pre(DistributionSpec::deterministic(0.1), DistributionSpec::deterministic(5.0)),
        pre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0)),
    };
    const auto mixed_rows = sim::sweep(mixed, {fixed_p(0.0)}, 5000, 9);
    REQUIRE(mixed_rows.size() == 2);
    CHECK_FALSE(mixed_rows[0].ok);
    CHECK_THAT(mixed_rows[0].error, ContainsSubstring("no renewals"));
    CHECK(mixed_rows[1].ok);
}

TEST_CASE("disciplines cross over when transmission dominates", "[simulation]") {
    // ratio 4:1: never-wait non-preemptive service beats the best preemptive window
    const std::uint64_t n = 1000000;
    const auto T = DistributionSpec::exponential(1.25);
    const auto C = DistributionSpec::exponential(5.0);
    const auto rn = sim::simulate(nonpre(T, C), fixed_p(0.0), n, 501);
    const auto rp =
        sim::simulate(pre(T, C), sim::PolicySpec::transmission_aware(0.75754348), n, 501);
    CHECK(within_3se(rn.avg_paoi, 1.88, rn.paoi_stderr) <= 0.0);
    CHECK(within_3se(rp.avg_paoi, 1.9175434788, rp.paoi_stderr) <= 0.0);
    CHECK(rn.avg_paoi + 3.0 * (rn.paoi_stderr + rp.paoi_stderr) < rp.avg_paoi);
}

TEST_CASE("simulator input contracts", "[simulation]") {
    const auto cfg = nonpre(DistributionSpec::exponential(2.0), DistributionSpec::exponential(2.0));
    CHECK_THROWS_AS(sim::simulate(cfg, fixed_p(0.0), 50, 1, 200), std::invalid_argument);
    CHECK_THROWS_AS(sim::simulate(cfg, fixed_p(0.0), 50, 1, 1), std::invalid_argument);

    const auto dead = pre(DistributionSpec::deterministic(0.1), DistributionSpec::deterministic(5.0));
    CHECK_THROWS_WITH(sim::simulate(dead, fixed_p(0.0), 1000, 1, 10),
                      ContainsSubstring("no renewals"));

    const auto sparse = pre(DistributionSpec::exponential(1.0), DistributionSpec::deterministic(5.0));
    CHECK_THROWS_WITH(sim::simulate(sparse, fixed_p(0.0), 2000, 5, 100),
                      ContainsSubstring("too few delivered packets"));

    CHECK_THROWS_AS(sim::wait_series(dead, fixed_p(0.0), 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(sim::sweep({}, {fixed_p(0.0)}, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(sim::PolicySpec::fixed(Threshold{-0.5}), std::invalid_argument);
    CHECK_THROWS_AS(sim::PolicySpec::transmission_aware(-1.0), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sim::PolicySpec::transmission_aware(nan), std::invalid_argument);
}
