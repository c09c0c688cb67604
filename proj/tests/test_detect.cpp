#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scaforge/error.hpp"
#include "scaforge/mlp.hpp"
#include "scaforge/ro_tracker.hpp"
#include "scaforge/sensor.hpp"

using namespace scaforge;
using namespace scaforge::detect;

TEST_CASE("sensor scenarios") {
    SensorParams p;
    p.sigma = 0.0;

    const SensorTrace benign = simulate_sensor(Scenario::Benign, 128, RngStream(1, 0), p);
    for (float v : benign.samples)
        CHECK(v == doctest::Approx(p.baseline));

    // pulse of 10 sigma dominates
    SensorParams noisy = p;
    noisy.sigma = 0.05;
    noisy.pulse_amp = 0.5; // 10 sigma
    const SensorTrace glitch = simulate_sensor(Scenario::ClockGlitch, 128, RngStream(2, 0), noisy);
    float peak = 0;
    for (float v : glitch.samples)
        peak = std::max(peak, v);
    CHECK(peak > noisy.baseline + 5 * noisy.sigma);

    // em probe ramps the envelope up
    const SensorTrace probe = simulate_sensor(Scenario::EmProbe, 128, RngStream(3, 0), p);
    CHECK(probe.samples.front() == doctest::Approx(p.baseline));
    CHECK(probe.samples.back() == doctest::Approx(p.baseline * (1.0 + p.coupling)));

    // voltage glitch sags below baseline somewhere
    const SensorTrace sag = simulate_sensor(Scenario::VoltageGlitch, 128, RngStream(4, 0), p);
    float low = 1e9f;
    for (float v : sag.samples)
        low = std::min(low, v);
    CHECK(low < p.baseline - 0.1);

    CHECK_THROWS_AS(simulate_sensor(Scenario::Benign, 16, RngStream(5, 0), p), DimensionError);
    CHECK_THROWS_AS(scenario_from_string("nonsense"), Error);

    // determinism
    const SensorTrace a = simulate_sensor(Scenario::ClockGlitch, 128, RngStream(6, 0), noisy);
    const SensorTrace b = simulate_sensor(Scenario::ClockGlitch, 128, RngStream(6, 0), noisy);
    CHECK(a.samples == b.samples);
}

TEST_CASE("softmax rows sum to one; zero weights give uniform output") {
    DetectorModel m = make_detector(32, {16}, RngStream(7, 0));
    SensorTrace x;
    x.samples.assign(32, 0.7f);
    const auto p = m.forward(x.samples);
    double sum = 0;
    for (double v : p)
        sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));

    for (auto& layer : m.layers) {
        std::fill(layer.w.begin(), layer.w.end(), 0.0);
        std::fill(layer.b.begin(), layer.b.end(), 0.0);
    }
    const auto uniform = m.forward(x.samples);
    for (double v : uniform)
        CHECK(v == doctest::Approx(0.25));
    const auto cls = classify(m, x);
    CHECK(cls.label == Scenario::Benign); // tie broken towards class 0
    CHECK(cls.confidence == doctest::Approx(0.25));
}

TEST_CASE("gradient check against finite differences") {
    SensorParams p;
    const RngStream data_rng(11, 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DetectorModel m = make_detector(12, {6}, RngStream(100 + seed, 0)); // < 1000 params
        SensorTrace ex = simulate_sensor(Scenario::VoltageGlitch, 32, data_rng.substream(seed), p);
        ex.samples.resize(12);
        ex.label = static_cast<Scenario>(seed % 4);
        CHECK(gradient_check(m, ex) < 1e-4);
    }
}

TEST_CASE("gradient details: zero input and duplicated example") {
    DetectorModel m = make_detector(8, {5}, RngStream(13, 0));
    SensorTrace zero;
    zero.samples.assign(8, 0.f);
    zero.label = Scenario::ClockGlitch;

    const auto g1 = batch_gradient(m, {&zero});
    // first-layer weight gradients all zero for zero input
    for (std::size_t i = 0; i < m.layers[0].w.size(); ++i)
        CHECK(g1[i] == doctest::Approx(0.0));

    const auto g2 = batch_gradient(m, {&zero, &zero});
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i)
        CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-12));
}

TEST_CASE("training: zero epochs returns the initialization") {
    SensorParams p;
    const auto ds = make_sensor_dataset(64, 32, RngStream(17, 0), p);
    TrainHyper hyper;
    hyper.hidden = {8};
    hyper.epochs = 0;
    const auto out = train_detector(ds, hyper, RngStream(19, 0));

    DetectorModel init = make_detector(32, {8}, RngStream(19, 0).substream(0x696e6974));
    REQUIRE(out.model.layers.size() == init.layers.size());
    for (std::size_t l = 0; l < init.layers.size(); ++l) {
        CHECK(out.model.layers[l].w == init.layers[l].w);
        CHECK(out.model.layers[l].b == init.layers[l].b);
    }
    CHECK(out.curve.empty());
}

TEST_CASE("training: single-class dataset flagged degenerate") {
    SensorParams p;
    SensorDataset ds;
    ds.n_samples = 32;
    for (int i = 0; i < 32; ++i)
        ds.traces.push_back(simulate_sensor(Scenario::Benign, 32, RngStream(23, i), p));
    TrainHyper hyper;
    hyper.hidden = {8};
    hyper.epochs = 30;
    const auto out = train_detector(ds, hyper, RngStream(29, 0));
    CHECK(out.model.degenerate_single_class);
    CHECK(evaluate(out.model, ds).accuracy == doctest::Approx(1.0));
}

TEST_CASE("training: loss non-increasing at small lr (5% violations allowed)") {
    SensorParams p;
    const auto ds = make_sensor_dataset(400, 64, RngStream(31, 0), p);
    TrainHyper hyper;
    hyper.hidden = {16};
    hyper.learning_rate = 1e-3;
    hyper.epochs = 40;
    const auto out = train_detector(ds, hyper, RngStream(37, 0));
    std::size_t violations = 0;
    for (std::size_t e = 1; e < out.curve.size(); ++e)
        if (out.curve[e].loss > out.curve[e - 1].loss)
            ++violations;
    CHECK(violations * 20 <= out.curve.size()); // <= 5%
}

TEST_CASE("training reaches high accuracy and classify is confident") {
    SensorParams p;
    const auto train_ds = make_sensor_dataset(1200, 64, RngStream(41, 0), p);
    const auto test_ds = make_sensor_dataset(400, 64, RngStream(43, 0), p);

    TrainHyper hyper;
    hyper.hidden = {32, 16};
    hyper.epochs = 20;
    const auto out = train_detector(train_ds, hyper, RngStream(47, 0));

    const auto rep = evaluate(out.model, test_ds);
    CHECK(rep.accuracy >= 0.99);

    // per-class recall on held-out data
    for (std::size_t r = 0; r < kNumClasses; ++r) {
        std::size_t row_total = 0;
        for (std::size_t c = 0; c < kNumClasses; ++c)
            row_total += rep.confusion[r][c];
        REQUIRE(row_total > 0);
        CHECK(static_cast<double>(rep.confusion[r][r]) / static_cast<double>(row_total) >= 0.97);
    }

    // trained model matches its own labels with confidence > 0.5 on >= 99%
    std::size_t confident = 0;
    for (const auto& t : train_ds.traces) {
        const auto c = classify(out.model, t);
        if (c.label == t.label && c.confidence > 0.5)
            ++confident;
    }
    CHECK(confident * 100 >= train_ds.traces.size() * 99);

    // deterministic pipeline under input scaling
    SensorTrace scaled = train_ds.traces[0];
    for (auto& v : scaled.samples)
        v *= 3.0f;
    const auto c1 = classify(out.model, scaled);
    const auto c2 = classify(out.model, scaled);
    CHECK(c1.label == c2.label);
    CHECK(c1.confidence == c2.confidence);
}

TEST_CASE("classify rejects wrong input length") {
    DetectorModel m = make_detector(16, {8}, RngStream(53, 0));
    SensorTrace bad;
    bad.samples.assign(17, 0.f);
    CHECK_THROWS_AS(classify(m, bad), DimensionError);
}

TEST_CASE("ro tracker: matched series never alarms, wobble stays quiet") {
    RoTrackerConfig cfg;
    cfg.k_ro = 100.0;
    cfg.epoch = 100;
    cfg.tau = 3;
    cfg.divider = 0.8;

    std::vector<double> vdd(4000, 1.2);
    std::vector<double> aes(4000, 1.2 * 0.8);
    CHECK(!voltage_drop_detect(vdd, aes, cfg).has_value());

    // sub-count wobble: count = k_ro * sum(v); an offset worth well under
    // one count per epoch must not fire
    auto wobble = aes;
    for (auto& v : wobble)
        v += 2e-6;
    CHECK(!voltage_drop_detect(vdd, wobble, cfg).has_value());
}

TEST_CASE("ro tracker: 20% step drop alarms within 0.8 ms at 1 MS/s") {
    RoTrackerConfig cfg;
    cfg.k_ro = 100.0;
    cfg.epoch = 100;
    cfg.tau = 3;
    cfg.divider = 0.8;

    const std::size_t s0 = 1234;
    const auto fx = make_drop_fixture(8000, s0, 1.2, 0.2, cfg.divider);
    const auto alarm = voltage_drop_detect(fx.vdd, fx.v_aes, cfg);
    REQUIRE(alarm.has_value());
    CHECK(*alarm >= s0 - cfg.epoch); // cannot alarm long before the drop
    CHECK(*alarm <= s0 + 800);       // 0.8 ms at 1 MS/s

    // latency bound: alarm - onset <= ceil(tau * epoch) + epoch alignment
    CHECK(*alarm - s0 <= (cfg.tau + 1) * cfg.epoch);

    // epoch-aligned onset meets the tau * epoch bound exactly
    const std::size_t aligned = 1200;
    const auto fx2 = make_drop_fixture(8000, aligned, 1.2, 0.2, cfg.divider);
    const auto alarm2 = voltage_drop_detect(fx2.vdd, fx2.v_aes, cfg);
    REQUIRE(alarm2.has_value());
    CHECK(*alarm2 - aligned <= cfg.tau * cfg.epoch);
}

TEST_CASE("ro tracker validation") {
    RoTrackerConfig cfg;
    cfg.k_ro = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.k_ro = 10;
    cfg.tau = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    RoTrackerConfig ok;
    std::vector<double> a(100, 1.0), b(99, 1.0);
    CHECK_THROWS_AS(voltage_drop_detect(a, b, ok), DimensionError);
}
