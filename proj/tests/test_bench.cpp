#include <doctest.h>

#include <random>

#include "chessy/bench.hpp"
#include "chessy/errors.hpp"

using namespace chessy;

namespace {
const ClockSpec kClock{50'000'000, 1'000'000};
}

TEST_CASE("modeled access cost is per_access plus per_byte") {
    LinkModel link;
    CHECK(modeled_access_cost_ms(link, 0) == doctest::Approx(80.0));
    CHECK(modeled_access_cost_ms(link, 1000) == doctest::Approx(80.4));
    CHECK(modeled_access_cost_ms(link, 8192) == doctest::Approx(80.0 + 3.2768));
}

TEST_CASE("three small accesses on the small-network baseline cost about 86%") {
    LinkModel link; // modeled defaults
    const std::vector<AccessCost> accesses{{8, 0.0}, {2, 0.0}, {4, 0.0}};
    const SessionReport report = compute_overhead(accesses, 280'000, link);

    const double expected_cost = 3 * 80.0 + 14 * 0.4 / 1000.0;
    const double expected_pct = 100.0 * expected_cost / 280.0;
    CHECK(report.protocol_cost_ms == doctest::Approx(expected_cost).epsilon(1e-12));
    CHECK(report.overhead_pct == doctest::Approx(expected_pct).epsilon(1e-12));
    CHECK(report.overhead_pct == doctest::Approx(85.716).epsilon(1e-3));

    const SessionReport big = compute_overhead(accesses, 560'000, link);
    CHECK(big.overhead_pct == doctest::Approx(expected_pct / 2).epsilon(1e-12));
    // ratio of the two bars vs the published 47/86 within 10% relative
    const double ratio = big.overhead_pct / report.overhead_pct;
    CHECK(std::abs(ratio - 47.0 / 86.0) / (47.0 / 86.0) < 0.10);
}

TEST_CASE("overhead accounting edge cases") {
    LinkModel link;
    const SessionReport none = compute_overhead({}, 1000, link);
    CHECK(none.overhead_pct == 0.0);
    CHECK(none.protocol_cost_ms == 0.0);

    const std::vector<AccessCost> one{{4, 0.0}};
    CHECK_THROWS_AS(compute_overhead(one, 0, link), DegenerateBaseline);
}

TEST_CASE("measured mode sums wall clock costs") {
    LinkModel link;
    link.mode = LinkMode::measured;
    const std::vector<AccessCost> accesses{{8, 0.5}, {2, 0.25}};
    const SessionReport report = compute_overhead(accesses, 1'000'000, link);
    CHECK(report.protocol_cost_ms == doctest::Approx(0.75));
    CHECK(report.overhead_pct == doctest::Approx(0.075));
}

TEST_CASE("modeled cost is linear in accesses and affine in bytes") {
    std::mt19937_64 rng(3);
    LinkModel link;
    link.per_access_ms = 12.5;
    link.per_byte_us = 1.75;
    std::uniform_int_distribution<std::uint64_t> bytes(0, 65'536);
    for (int round = 0; round < 200; ++round) {
        const int n = std::uniform_int_distribution<int>(1, 50)(rng);
        std::vector<AccessCost> accesses;
        double closed_form = 0;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t b = bytes(rng);
            accesses.push_back({b, 0.0});
            closed_form += link.per_access_ms + link.per_byte_us * static_cast<double>(b) / 1000.0;
        }
        const SessionReport report = compute_overhead(accesses, 123'456, link);
        CHECK(report.protocol_cost_ms == doctest::Approx(closed_form).epsilon(1e-12));
    }
}

TEST_CASE("overhead strictly decreases as compute grows") {
    // latency-free map so baseline is exactly the compute time
    MapEntry reg{kRegfileBase, 0x10000, "regfile", {}};
    LinkModel link;
    double prev = 1e300;
    for (std::uint64_t cycles : {1'000'000ull, 2'000'000ull, 4'000'000ull, 50'000'000ull}) {
        const WorkloadScript script = generate_workload(64, cycles, 5, 1);
        SimKernel kernel = build_kernel({reg}, 1, BusMissPolicy::fatal);
        const BaselineReport baseline = run_baseline(script, kClock, kernel);
        std::vector<AccessCost> costs;
        for (const auto& ev : baseline.trace)
            costs.push_back({ev.size_bytes, 0.0});
        const SessionReport report = compute_overhead(costs, baseline.duration_us, link);
        CHECK(report.overhead_pct < prev);
        // doubling compute halves overhead when the baseline is pure compute
        if (prev < 1e300 && cycles <= 4'000'000)
            CHECK(report.overhead_pct == doctest::Approx(prev / 2).epsilon(1e-9));
        prev = report.overhead_pct;
    }
}

TEST_CASE("temponet profiles use the published cycle budgets") {
    CHECK(temponet_cycles(TempoNetVariant::tns) == 14'000'000);
    CHECK(temponet_cycles(TempoNetVariant::tnb) == 28'000'000);
    CHECK(cycles_to_micros(temponet_cycles(TempoNetVariant::tns), kClock) == 280'000);
    CHECK(cycles_to_micros(temponet_cycles(TempoNetVariant::tnb), kClock) == 560'000);
}

TEST_CASE("modeled sweeps are deterministic and size-insensitive") {
    SweepConfig cfg;
    cfg.sizes = {4, 64, 1024, 8192};
    cfg.compute_cycles = {10'000'000};
    cfg.iterations = 10;
    cfg.clock = kClock;
    cfg.seed = 42;

    const std::vector<SweepRow> rows1 = run_sweep(cfg);
    const std::vector<SweepRow> rows2 = run_sweep(cfg);
    CHECK(sweep_csv(rows1) == sweep_csv(rows2));

    REQUIRE(rows1.size() == 4);
    double lo = 1e300, hi = 0;
    for (const SweepRow& r : rows1) {
        CHECK(r.n_accesses == 20);
        lo = std::min(lo, r.overhead_pct);
        hi = std::max(hi, r.overhead_pct);
    }
    CHECK((hi - lo) / hi * 100.0 < 4.0);
}

TEST_CASE("sweep rows carry exact meta columns") {
    SweepConfig cfg;
    cfg.sizes = {16};
    cfg.compute_cycles = {500'000};
    cfg.iterations = 3;
    cfg.clock = kClock;
    cfg.seed = 1;
    const std::vector<SweepRow> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    const SweepRow& r = rows[0];
    CHECK(r.size_bytes == 16);
    CHECK(r.compute_cycles == 500'000);
    CHECK(r.iterations == 3);
    CHECK(r.n_accesses == 6);
    CHECK(r.total_bytes == 96);
    // baseline: 3 x (10000 us compute + 250 us read + 250 us write)
    CHECK(r.baseline_us == 3 * (10'000 + 500));

    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("size_bytes,compute_cycles,iterations,n_acc,baseline_us,cost_ms,"
                    "overhead_pct\n",
                    0) == 0);
    CHECK(csv.find("16,500000,3,6,31500,") != std::string::npos);

    const std::string plot = plot_data(rows);
    CHECK(plot.rfind("series,x,overhead_pct\n", 0) == 0);
    CHECK(plot.find("size=16B,500000,") != std::string::npos);
}

TEST_CASE("empty sweeps are rejected") {
    SweepConfig cfg;
    cfg.clock = kClock;
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
}

TEST_CASE("temponet rows label the variant") {
    const SweepRow tns = run_temponet(TempoNetVariant::tns, 2, kClock, LinkModel{}, 1);
    CHECK(tns.series == "TNS");
    CHECK(tns.n_accesses == 6);
    CHECK(tns.total_bytes == 28); // (8 + 2 + 4) per iteration
    CHECK(tns.size_bytes == 14);
    CHECK(tns.compute_cycles == kTnsCycles);
}
