#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scaforge/store.hpp"

using namespace scaforge;
using namespace scaforge::store;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("scaforge_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

TraceSet sample_traces(bool with_ct) {
    LeakageConfig cfg;
    cfg.alpha = 1.0;
    cfg.baseline = 2.0;
    cfg.sigma = 1.5;
    cfg.key.assign(16, 0xab);
    TraceSet ts = simulate_demand_traces(cfg, 37, 50, RngStream(3, 0));
    if (with_ct) {
        ts.ciphertexts.resize(ts.n_traces);
        for (std::size_t t = 0; t < ts.n_traces; ++t)
            for (int i = 0; i < 16; ++i)
                ts.ciphertexts[t][i] = static_cast<std::uint8_t>(t + i);
    }
    return ts;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

} // namespace

TEST_CASE("trace roundtrip is bit-identical, with and without ciphertexts") {
    TempDir dir;
    for (bool with_ct : {false, true}) {
        const TraceSet ts = sample_traces(with_ct);
        TraceMeta meta;
        meta.leak_positions = ts.leak_positions;
        meta.key.assign(16, 0xab);
        meta.model = LeakModel::HammingWeight;

        const fs::path file = dir.path / (with_ct ? "ct.scat" : "noct.scat");
        write_traces(file, ts, meta);

        TraceMeta back_meta;
        const TraceSet back = read_traces(file, &back_meta);
        CHECK(back.n_traces == ts.n_traces);
        CHECK(back.n_samples == ts.n_samples);
        CHECK(back.samples == ts.samples);
        CHECK(back.plaintexts == ts.plaintexts);
        CHECK(back.ciphertexts == ts.ciphertexts);
        CHECK(back.leak_positions == ts.leak_positions);
        CHECK(back_meta.key == meta.key);
        CHECK(back_meta.model == meta.model);

        // no stray .partial files
        CHECK(!fs::exists(file.string() + ".partial"));
    }
}

TEST_CASE("trace file error paths") {
    TempDir dir;
    const TraceSet ts = sample_traces(false);
    TraceMeta meta;
    meta.leak_positions = ts.leak_positions;
    const fs::path file = dir.path / "t.scat";
    write_traces(file, ts, meta);

    std::string blob = slurp(file);

    // bad magic
    std::string bad = blob;
    bad[0] = 'X';
    bad[1] = 'X';
    spit(file, bad);
    CHECK_THROWS_AS(read_traces(file), BadMagic);

    // version mismatch
    bad = blob;
    bad[4] = 9;
    spit(file, bad);
    CHECK_THROWS_AS(read_traces(file), VersionMismatch);

    // truncated mid-trace
    bad = blob.substr(0, blob.size() - 13);
    spit(file, bad);
    CHECK_THROWS_AS(read_traces(file), TruncatedFile);

    // trailing garbage
    bad = blob + "zz";
    spit(file, bad);
    CHECK_THROWS_AS(read_traces(file), TruncatedFile);
}

TEST_CASE("sensor dataset roundtrip with labels sidecar") {
    TempDir dir;
    detect::SensorParams p;
    const auto ds = detect::make_sensor_dataset(20, 64, RngStream(5, 0), p);
    const fs::path file = dir.path / "sensor.scat";
    write_sensor_dataset(file, ds);
    CHECK(fs::exists(labels_path(file)));

    const auto back = read_sensor_dataset(file);
    REQUIRE(back.traces.size() == ds.traces.size());
    CHECK(back.n_samples == ds.n_samples);
    CHECK(back.sample_rate == ds.sample_rate);
    for (std::size_t i = 0; i < ds.traces.size(); ++i) {
        CHECK(back.traces[i].samples == ds.traces[i].samples);
        CHECK(back.traces[i].label == ds.traces[i].label);
    }
}

TEST_CASE("detector model roundtrip") {
    TempDir dir;
    detect::SensorParams p;
    const auto ds = detect::make_sensor_dataset(64, 32, RngStream(7, 0), p);
    detect::TrainHyper hyper;
    hyper.hidden = {8};
    hyper.epochs = 2;
    const auto out = detect::train_detector(ds, hyper, RngStream(9, 0));

    const fs::path file = dir.path / "model.json";
    write_detector_model(file, out.model);
    const auto back = read_detector_model(file);
    REQUIRE(back.layers.size() == out.model.layers.size());
    for (std::size_t l = 0; l < back.layers.size(); ++l) {
        CHECK(back.layers[l].w == out.model.layers[l].w);
        CHECK(back.layers[l].b == out.model.layers[l].b);
    }
    CHECK(back.feat_mean == out.model.feat_mean);
    CHECK(back.feat_scale == out.model.feat_scale);
    CHECK(back.final_train_loss == out.model.final_train_loss);
}

TEST_CASE("config: defaults file parses, ranges enforced, unknown fields rejected") {
    const ExperimentConfig cfg = load_config(SCAFORGE_DEFAULT_CONFIG);
    CHECK(cfg.leakage.key.size() == 16);
    CHECK(cfg.dsac.attenuation >= 1.0);

    TempDir dir;
    const fs::path file = dir.path / "cfg.json";

    // sigma = -1 names the offending field
    spit(file, R"({"leakage": {"sigma": -1, "key": "00112233445566778899aabbccddeeff"}})");
    try {
        load_config(file);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("sigma") != std::string::npos);
    }

    // unknown field rejected
    spit(file, R"({"leakage": {"key": "00112233445566778899aabbccddeeff"}, "bogus": 1})");
    CHECK_THROWS_AS(load_config(file), ConfigError);

    // parse error carries context
    spit(file, "{ not json");
    CHECK_THROWS_AS(load_config(file), ConfigError);

    // newer config versions are rejected
    spit(file, R"({"version": 2})");
    CHECK_THROWS_AS(load_config(file), VersionMismatch);

    // save/load roundtrip
    save_config(file, cfg);
    const ExperimentConfig again = load_config(file);
    CHECK(again.leakage.sigma == cfg.leakage.sigma);
    CHECK(again.dsac.attenuation == cfg.dsac.attenuation);
    CHECK(again.detector.hidden == cfg.detector.hidden);
}

TEST_CASE("csv formatting: locale-independent, 6 significant digits") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1234567.0) == "1.23457e+06");
    CHECK(format_double(0.333333333) == "0.333333");

    TempDir dir;
    MtdReport rep;
    rep.rank_curve = {{100, 12, 0.123456789}, {150, 1, 0.87654321}};
    const fs::path file = dir.path / "mtd.csv";
    emit_mtd_report(file, rep);
    const std::string csv = slurp(file);
    CHECK(csv == "checkpoint,rank,best_corr\n100,12,0.123457\n150,1,0.876543\n");
}

TEST_CASE("atomic write leaves partial file on failure only") {
    TempDir dir;
    const fs::path ok = dir.path / "ok.txt";
    write_file_atomic(ok, "hello");
    CHECK(slurp(ok) == "hello");
    CHECK(!fs::exists(ok.string() + ".partial"));
}
