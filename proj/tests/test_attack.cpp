#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "scaforge/cpa.hpp"
#include "scaforge/mtd.hpp"
#include "scaforge/parallel.hpp"

using namespace scaforge;

namespace {

LeakageConfig test_config(double sigma) {
    LeakageConfig cfg;
    cfg.alpha = 1.0;
    cfg.baseline = 10.0;
    cfg.sigma = sigma;
    cfg.key = {0x2b, 0x7e, 0x15, 0x16, 0x28, 0xae, 0xd2, 0xa6,
               0xab, 0xf7, 0x15, 0x88, 0x09, 0xcf, 0x4f, 0x3c};
    return cfg;
}

// Two-pass batch Pearson, the independent oracle for the streaming engine.
double two_pass_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0 || syy <= 0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST_CASE("zero-noise CPA: correct key rank 1 with |rho| = 1 at leak position") {
    const LeakageConfig cfg = test_config(0.0);
    const TraceSet ts = simulate_demand_traces(cfg, 50, 40, RngStream(5, 0));
    const CpaResult res = cpa_attack(ts, LeakModel::HammingWeight);

    for (std::size_t b = 0; b < kAttackedBytes; ++b) {
        const std::uint8_t kb = cfg.key[b];
        CHECK(res.bytes[b].rank_of(kb) == 1);
        CHECK(res.bytes[b].correlation[kb] == doctest::Approx(1.0));
        CHECK(res.bytes[b].best_sample[kb] == ts.leak_positions[b]);
    }
    CHECK(res.best_key() == cfg.key);
}

TEST_CASE("streaming equals two-pass batch Pearson") {
    const LeakageConfig cfg = test_config(2.0);
    const TraceSet ts = simulate_demand_traces(cfg, 2000, 24, RngStream(17, 0));

    CpaAccumulator acc(ts.n_samples, LeakModel::HammingWeight);
    acc.update(ts);

    for (std::size_t b : {std::size_t{0}, std::size_t{7}, std::size_t{15}}) {
        for (std::size_t k : {std::size_t{0}, std::size_t{43}, std::size_t{255}}) {
            for (std::size_t s : {std::size_t{1}, ts.n_samples / 2, ts.n_samples - 1}) {
                std::vector<double> xs(ts.n_traces), hs(ts.n_traces);
                for (std::size_t t = 0; t < ts.n_traces; ++t) {
                    xs[t] = ts.at(t, s);
                    hs[t] = hypothesis_value(LeakModel::HammingWeight, ts.plaintexts[t][b],
                                             static_cast<std::uint8_t>(k));
                }
                const double want = two_pass_pearson(hs, xs);
                CHECK(acc.correlation(b, k, s) == doctest::Approx(want).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("accumulator: empty update, merge == concatenated batches") {
    const LeakageConfig cfg = test_config(1.0);
    const TraceSet whole = simulate_demand_traces(cfg, 600, 20, RngStream(23, 0));

    TraceSet first = whole, second = whole;
    first.n_traces = 250;
    first.samples.resize(250 * whole.n_samples);
    first.plaintexts.resize(250);
    second.n_traces = 350;
    second.samples.erase(second.samples.begin(), second.samples.begin() + 250 * whole.n_samples);
    second.plaintexts.erase(second.plaintexts.begin(), second.plaintexts.begin() + 250);

    CpaAccumulator one(whole.n_samples, LeakModel::HammingWeight);
    one.update(whole);

    CpaAccumulator a(whole.n_samples, LeakModel::HammingWeight);
    CpaAccumulator b(whole.n_samples, LeakModel::HammingWeight);
    a.update(first);
    TraceSet empty;
    empty.n_traces = 0;
    empty.n_samples = whole.n_samples;
    a.update(empty); // identity
    b.update(second);
    a.merge(b);

    CHECK(a.n_traces() == one.n_traces());
    for (std::size_t k = 0; k < kNumHypotheses; k += 37)
        for (std::size_t s = 0; s < whole.n_samples; s += 7)
            CHECK(a.correlation(3, k, s) ==
                  doctest::Approx(one.correlation(3, k, s)).epsilon(1e-9));
}

TEST_CASE("pure noise gives no false certainty") {
    LeakageConfig cfg = test_config(1.0);
    cfg.alpha = 0.0; // no leakage at all
    const std::size_t n = 4096;
    const TraceSet ts = simulate_demand_traces(cfg, n, 16, RngStream(29, 0));
    const CpaResult res = cpa_attack(ts, LeakModel::HammingWeight);
    const double bound = 5.0 / std::sqrt(static_cast<double>(n));
    for (const auto& br : res.bytes)
        for (std::size_t k = 0; k < kNumHypotheses; ++k)
            CHECK(br.correlation[k] <= bound);
}

TEST_CASE("degenerate and tiny inputs") {
    TraceSet flat;
    flat.n_traces = 10;
    flat.n_samples = 16;
    flat.samples.assign(160, 3.25f);
    flat.plaintexts.resize(10);
    for (std::size_t i = 0; i < 16; ++i)
        flat.leak_positions[i] = static_cast<std::uint32_t>(i);
    CHECK_THROWS_AS(cpa_attack(flat, LeakModel::HammingWeight), DegenerateTraces);

    // zero-variance convention through the accumulator
    CpaAccumulator acc(16, LeakModel::HammingWeight);
    acc.update(flat);
    for (std::size_t s = 0; s < 16; ++s)
        CHECK(acc.correlation(0, 5, s) == 0.0);

    TraceSet one;
    one.n_traces = 1;
    one.n_samples = 16;
    one.samples.assign(16, 0.f);
    one.plaintexts.resize(1);
    one.leak_positions = flat.leak_positions;
    CHECK_THROWS_AS(cpa_attack(one, LeakModel::HammingWeight), DimensionError);
}

TEST_CASE("affine invariance of ranking") {
    const LeakageConfig cfg = test_config(1.5);
    const TraceSet ts = simulate_demand_traces(cfg, 800, 20, RngStream(31, 0));
    const CpaResult r1 = cpa_attack(ts, LeakModel::HammingWeight);

    // power-of-two scale is exact in both the f32 traces and the double
    // sums: |rho| must come back bit-identical, rankings included
    TraceSet pow2 = ts;
    for (auto& v : pow2.samples)
        v *= 4.0f;
    const CpaResult r2 = cpa_attack(pow2, LeakModel::HammingWeight);
    for (std::size_t b = 0; b < kAttackedBytes; ++b) {
        CHECK(r1.bytes[b].ranking == r2.bytes[b].ranking);
        for (std::size_t k = 0; k < kNumHypotheses; ++k)
            CHECK(r1.bytes[b].correlation[k] ==
                  doctest::Approx(r2.bytes[b].correlation[k]).epsilon(1e-9));
    }

    // a general affine map rounds the f32 samples themselves; the engine
    // must still agree to data precision and keep the same best guess
    TraceSet affine = ts;
    for (auto& v : affine.samples)
        v = 2.5f * v + 7.0f;
    const CpaResult r3 = cpa_attack(affine, LeakModel::HammingWeight);
    for (std::size_t b = 0; b < kAttackedBytes; ++b) {
        CHECK(r1.bytes[b].ranking[0] == r3.bytes[b].ranking[0]);
        for (std::size_t k = 0; k < kNumHypotheses; ++k)
            CHECK(r1.bytes[b].correlation[k] ==
                  doctest::Approx(r3.bytes[b].correlation[k]).epsilon(1e-4));
    }
}

TEST_CASE("parallel accumulation bit-identical to serial") {
    const LeakageConfig cfg = test_config(2.0);
    const TraceSet ts = simulate_demand_traces(cfg, 1000, 24, RngStream(37, 0));

    const std::size_t saved = set_thread_override(1);
    CpaAccumulator serial(ts.n_samples, LeakModel::HammingWeight);
    serial.update(ts);
    const CpaResult rs = serial.result();
    set_thread_override(8);
    CpaAccumulator parallel(ts.n_samples, LeakModel::HammingWeight);
    parallel.update(ts);
    const CpaResult rp = parallel.result();
    set_thread_override(saved);

    for (std::size_t b = 0; b < kAttackedBytes; ++b) {
        CHECK(rs.bytes[b].ranking == rp.bytes[b].ranking);
        for (std::size_t k = 0; k < kNumHypotheses; ++k)
            CHECK(rs.bytes[b].correlation[k] == rp.bytes[b].correlation[k]); // bit-exact
    }
}

TEST_CASE("hamming distance model recovers the key too") {
    LeakageConfig cfg = test_config(0.0);
    cfg.model = LeakModel::HammingDistance;
    const TraceSet ts = simulate_demand_traces(cfg, 100, 40, RngStream(41, 0));
    const CpaResult res = cpa_attack(ts, LeakModel::HammingDistance);
    CHECK(res.best_key() == cfg.key);
}

TEST_CASE("aes-256 variant: round 1 recovers the first 16 key bytes") {
    LeakageConfig cfg = test_config(1.0);
    cfg.aes_variant = AesVariant::Aes256;
    cfg.key.resize(32);
    for (std::size_t i = 16; i < 32; ++i)
        cfg.key[i] = static_cast<std::uint8_t>(0xf0 + i);
    const TraceSet ts = simulate_demand_traces(cfg, 500, 24, RngStream(59, 0));
    const CpaResult res = cpa_attack(ts, LeakModel::HammingWeight);
    const std::vector<std::uint8_t> first16(cfg.key.begin(), cfg.key.begin() + 16);
    CHECK(res.best_key() == first16);
}

TEST_CASE("default checkpoint schedule") {
    const auto cps = default_checkpoints(1000);
    REQUIRE(!cps.empty());
    CHECK(cps.front() == 100);
    CHECK(cps.back() == 1000);
    for (std::size_t i = 1; i < cps.size(); ++i)
        CHECK(cps[i] > cps[i - 1]);

    const auto tiny = default_checkpoints(50);
    CHECK(tiny == std::vector<std::size_t>{50});
}

TEST_CASE("mtd: zero-noise discloses fast, wrong key never") {
    const LeakageConfig cfg = test_config(0.0);
    RngStream rng(43, 0);
    const TraceSource source = [&](std::size_t first, std::size_t count) {
        return simulate_demand_range(cfg, first, count, 24, rng);
    };

    MtdConfig mc;
    mc.true_key = cfg.key;
    mc.checkpoints = default_checkpoints(500, 25, 1.5);
    mc.stability_window = 3;

    const MtdReport rep = compute_mtd(source, mc);
    REQUIRE(rep.disclosed());
    CHECK(*rep.mtd <= 100);
    CHECK(!rep.rank_curve.empty());
    CHECK(rep.rank_curve.back().rank == 1);

    // a random unrelated key is never disclosed
    MtdConfig wrong = mc;
    wrong.true_key = std::vector<std::uint8_t>(16, 0x5a);
    const MtdReport bad = compute_mtd(source, wrong);
    CHECK(!bad.disclosed());
}

TEST_CASE("mtd: disclosure always opens a full stability streak") {
    const LeakageConfig cfg = test_config(6.0);
    RngStream rng(47, 0);
    const TraceSource source = [&](std::size_t first, std::size_t count) {
        return simulate_demand_range(cfg, first, count, 20, rng);
    };
    MtdConfig mc;
    mc.true_key = cfg.key;
    mc.checkpoints = default_checkpoints(4000, 50, 1.3);
    mc.stability_window = 3;
    const MtdReport rep = compute_mtd(source, mc);
    REQUIRE(rep.disclosed());
    std::size_t idx = 0;
    while (rep.rank_curve[idx].checkpoint != *rep.mtd)
        ++idx;
    for (std::size_t j = 0; j < mc.stability_window; ++j)
        CHECK(rep.rank_curve[idx + j].rank == 1);
    // no earlier checkpoint opens a full streak
    for (std::size_t i = 0; i < idx; ++i) {
        bool all_one = true;
        for (std::size_t j = 0; j < mc.stability_window; ++j)
            if (rep.rank_curve[i + j].rank != 1)
                all_one = false;
        CHECK(!all_one);
    }
}

TEST_CASE("monotone security: median MTD non-decreasing in sigma") {
    std::vector<double> medians;
    for (double sigma : {0.5, 2.0, 4.0}) {
        const LeakageConfig cfg = test_config(sigma);
        std::vector<double> mtds;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            RngStream rng(seed, 0);
            const TraceSource source = [&](std::size_t first, std::size_t count) {
                return simulate_demand_range(cfg, first, count, 20, rng);
            };
            MtdConfig mc;
            mc.true_key = cfg.key;
            mc.checkpoints = default_checkpoints(4000, 25, 1.5);
            mc.stop_at_disclosure = true;
            const MtdReport rep = compute_mtd(source, mc);
            REQUIRE(rep.disclosed());
            mtds.push_back(static_cast<double>(*rep.mtd));
        }
        std::sort(mtds.begin(), mtds.end());
        medians.push_back(mtds[mtds.size() / 2]);
    }
    CHECK(medians[0] <= medians[1]);
    CHECK(medians[1] <= medians[2]);
}

TEST_CASE("mtd input validation") {
    const TraceSource dummy = [](std::size_t, std::size_t count) {
        TraceSet ts;
        ts.n_traces = count;
        ts.n_samples = 16;
        ts.samples.assign(count * 16, 0.f);
        ts.plaintexts.resize(count);
        for (std::size_t i = 0; i < 16; ++i)
            ts.leak_positions[i] = static_cast<std::uint32_t>(i);
        return ts;
    };
    MtdConfig mc;
    mc.true_key.assign(16, 0);
    CHECK_THROWS_AS(compute_mtd(dummy, mc), DimensionError); // empty checkpoints
    mc.checkpoints = {100, 100};
    CHECK_THROWS_AS(compute_mtd(dummy, mc), DimensionError); // not increasing
    mc.checkpoints = {10, 20};
    mc.stability_window = 0;
    CHECK_THROWS_AS(compute_mtd(dummy, mc), DimensionError);
}
