#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "scaforge/orchestrate.hpp"
#include "scaforge/parallel.hpp"

using namespace scaforge;
using namespace scaforge::orchestrate;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("scaforge_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

const fs::path kConfig = SCAFORGE_DEFAULT_CONFIG;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SCAFORGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("simulate smoke: trace file written, exit 0") {
    TempDir dir;
    SimulateArgs args;
    args.config = kConfig;
    args.n_traces = 200;
    args.seed = 5;
    args.out_dir = dir.path;
    std::ostringstream log;
    CHECK(run_simulate(args, log) == kExitOk);
    CHECK(fs::exists(dir.path / "traces.scat"));
    CHECK(fs::exists(dir.path / "traces.scat.meta.json"));
    CHECK(fs::exists(dir.path / "config_echo.json"));
    CHECK(log.str().find("200 traces") != std::string::npos);

    const TraceSet ts = store::read_traces(dir.path / "traces.scat");
    CHECK(ts.n_traces == 200);
}

TEST_CASE("simulate: countermeasure pipeline flags") {
    TempDir plain_dir, prot_dir;
    SimulateArgs plain;
    plain.config = kConfig;
    plain.n_traces = 50;
    plain.seed = 7;
    plain.out_dir = plain_dir.path;
    plain.countermeasures = "";
    std::ostringstream log;
    CHECK(run_simulate(plain, log) == kExitOk);

    SimulateArgs prot = plain;
    prot.out_dir = prot_dir.path;
    prot.countermeasures = "dsac,bleed,tvtf";
    CHECK(run_simulate(prot, log) == kExitOk);

    const TraceSet a = store::read_traces(plain_dir.path / "traces.scat");
    const TraceSet b = store::read_traces(prot_dir.path / "traces.scat");
    CHECK(a.plaintexts == b.plaintexts);
    CHECK(a.samples != b.samples);

    SimulateArgs bogus = plain;
    bogus.countermeasures = "dsac,warp";
    CHECK_THROWS_AS(run_simulate(bogus, log), ConfigError);
}

TEST_CASE("attack on zero-noise traces discloses quickly; exit codes") {
    TempDir dir;

    // write a zero-noise config variant
    auto cfg = store::load_config(kConfig);
    cfg.leakage.sigma = 0.0;
    const fs::path cfg_path = dir.path / "cfg.json";
    store::save_config(cfg_path, cfg);

    SimulateArgs sim;
    sim.config = cfg_path;
    sim.n_traces = 400;
    sim.seed = 11;
    sim.out_dir = dir.path;
    std::ostringstream log;
    REQUIRE(run_simulate(sim, log) == kExitOk);

    AttackArgs atk;
    atk.traces = dir.path / "traces.scat";
    atk.mtd = true;
    atk.checkpoints = "25:1.5";
    atk.out_dir = dir.path;
    CHECK(run_attack(atk, log) == kExitOk);
    CHECK(fs::exists(dir.path / "cpa.csv"));
    CHECK(fs::exists(dir.path / "mtd.csv"));
    const std::string mtd_csv = slurp(dir.path / "mtd.csv");
    CHECK(mtd_csv.find("checkpoint,rank,best_corr") == 0);

    // noise-only traces: not disclosed, exit 3
    auto noise_cfg = store::load_config(kConfig);
    noise_cfg.leakage.alpha = 0.0;
    noise_cfg.leakage.sigma = 1.0;
    store::save_config(cfg_path, noise_cfg);
    sim.config = cfg_path;
    sim.seed = 13;
    REQUIRE(run_simulate(sim, log) == kExitOk);
    CHECK(run_attack(atk, log) == kExitNegative);

    // corrupted file: data error
    std::ofstream(dir.path / "traces.scat", std::ios::trunc) << "garbage";
    CHECK_THROWS(run_attack(atk, log));
}

TEST_CASE("detect gen/train/eval flow") {
    TempDir dir;
    std::ostringstream log;

    DetectGenArgs gen;
    gen.config = kConfig;
    gen.n_traces = 400;
    gen.seed = 17;
    gen.out_dir = dir.path;
    CHECK(run_detect_gen(gen, log) == kExitOk);

    DetectTrainArgs train;
    train.config = kConfig;
    train.dataset = dir.path / "sensor.scat";
    train.train_count = 300;
    train.seed = 19;
    train.out_dir = dir.path;
    CHECK(run_detect_train(train, log) == kExitOk);
    CHECK(fs::exists(dir.path / "detector.json"));
    CHECK(fs::exists(dir.path / "training.csv"));

    DetectEvalArgs eval;
    eval.model = dir.path / "detector.json";
    eval.dataset = dir.path / "sensor.scat";
    eval.skip = 300;
    std::ostringstream eval_log;
    CHECK(run_detect_eval(eval, eval_log) == kExitOk);
    CHECK(eval_log.str().find("accuracy:") != std::string::npos);

    // mismatched model/trace lengths -> dimension error (exit 2 at the CLI)
    auto cfg = store::load_config(kConfig);
    cfg.detector.n_samples = 64;
    const fs::path cfg64 = dir.path / "cfg64.json";
    store::save_config(cfg64, cfg);
    DetectGenArgs gen64 = gen;
    gen64.config = cfg64;
    gen64.name = "sensor64.scat";
    REQUIRE(run_detect_gen(gen64, log) == kExitOk);
    DetectEvalArgs bad = eval;
    bad.dataset = dir.path / "sensor64.scat";
    bad.skip = 0;
    CHECK_THROWS_AS(run_detect_eval(bad, log), DimensionError);
}

TEST_CASE("vdd-attack: saturation range reports no attack (exit 3)") {
    TempDir dir;
    std::ostringstream log;
    VddAttackArgs vda;
    vda.config = kConfig;
    vda.range_lo = 1.0;
    vda.range_hi = 1.1;
    vda.step = 0.05;
    vda.budget = 400;
    vda.seed = 3;
    vda.out_dir = dir.path;
    CHECK(run_vdd_attack(vda, log) == kExitNegative);
}

TEST_CASE("vdd-monitor fixture alarms inside the latency budget") {
    std::ostringstream log;
    VddMonitorArgs mon;
    mon.config = kConfig;
    mon.fixture_samples = 4000;
    mon.drop_at = 900;
    mon.drop_frac = 0.2;
    mon.vdd_nominal = 1.2;
    CHECK(run_vdd_monitor(mon, log) == kExitOk);
    CHECK(log.str().find("alarm at sample") != std::string::npos);

    VddMonitorArgs quiet = mon;
    quiet.drop_frac = 0.0;
    std::ostringstream quiet_log;
    CHECK(run_vdd_monitor(quiet, quiet_log) == kExitOk);
    CHECK(quiet_log.str().find("no alarm") != std::string::npos);
}

TEST_CASE("saber keygen/encaps/decaps files plus kat subcommand") {
    TempDir dir;
    std::ostringstream log;

    SaberKeygenArgs kg;
    kg.seed = 23;
    kg.out_dir = dir.path;
    CHECK(run_saber_keygen(kg, log) == kExitOk);

    SaberEncapsArgs enc;
    enc.pk = dir.path / "saber.pk";
    enc.seed = 29;
    enc.out_dir = dir.path / "enc";
    CHECK(run_saber_encaps(enc, log) == kExitOk);

    SaberDecapsArgs dec;
    dec.sk = dir.path / "saber.sk";
    dec.ct = dir.path / "enc" / "saber.ct";
    dec.out_dir = dir.path / "dec";
    CHECK(run_saber_decaps(dec, log) == kExitOk);
    CHECK(slurp(dir.path / "enc" / "saber.ss") == slurp(dir.path / "dec" / "saber.ss"));

    // truncated ciphertext file
    std::ofstream(dec.ct, std::ios::trunc) << "short";
    CHECK_THROWS_AS(run_saber_decaps(dec, log), TruncatedFile);

    SaberKatArgs kat;
    kat.file = SCAFORGE_KAT_FILE;
    CHECK(run_saber_kat(kat, log) == kExitOk);

    SaberBenchArgs bench;
    std::ostringstream bench_log;
    CHECK(run_saber_bench(bench, bench_log) == kExitOk);
    CHECK(bench_log.str().find("interpolations = 3") != std::string::npos);
    CHECK(bench_log.str().find("interpolations = 9") != std::string::npos);
}

TEST_CASE("cli binary: exit codes for usage, help, and subcommands") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("simulate --help") == 0);
    CHECK(run_cli("attack --help") == 0);
    CHECK(run_cli("detect train --help") == 0);
    CHECK(run_cli("saber kat --help") == 0);
    CHECK(run_cli("") == kExitUsage);
    CHECK(run_cli("frobnicate") == kExitUsage);
    CHECK(run_cli("simulate --bogus-flag x") == kExitUsage);
    CHECK(run_cli("vdd-attack --config " + std::string(SCAFORGE_DEFAULT_CONFIG) +
                  " --range 0.8:0.9:0 --out /tmp/scaforge_unused") == kExitUsage);

    TempDir dir;
    CHECK(run_cli("simulate --config " + std::string(SCAFORGE_DEFAULT_CONFIG) +
                  " --traces 50 --seed 3 --out " + dir.path.string()) == 0);

    // vdd below v_fail in the config -> SupplyFailure -> exit 2
    auto cfg = store::load_config(SCAFORGE_DEFAULT_CONFIG);
    cfg.supply.vdd = 0.2;
    const fs::path bad_cfg = dir.path / "bad.json";
    store::save_config(bad_cfg, cfg);
    CHECK(run_cli("simulate --config " + bad_cfg.string() +
                  " --countermeasures dsac --traces 10 --out " + dir.path.string()) ==
          kExitDataError);
}

TEST_CASE("reproducibility: same flags and seed give byte-identical artifacts") {
    TempDir d1, d2;
    std::ostringstream log;

    for (const auto* dir : {&d1, &d2}) {
        SimulateArgs sim;
        sim.config = kConfig;
        sim.n_traces = 120;
        sim.seed = 31;
        sim.countermeasures = "dsac,bleed,tvtf";
        sim.out_dir = dir->path;
        REQUIRE(run_simulate(sim, log) == kExitOk);
    }
    CHECK(slurp(d1.path / "traces.scat") == slurp(d2.path / "traces.scat"));
}
