#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "scaforge/store.hpp"

namespace scaforge::orchestrate {

// Exit codes shared by the CLI and the in-process runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitNegative = 3; // experiment outcome: attack failed / not disclosed

struct SimulateArgs {
    std::filesystem::path config;
    std::size_t n_traces = 1000;
    std::uint64_t seed = 1;
    std::string countermeasures; // comma list out of dsac,bleed,tvtf; "" = unprotected
    std::filesystem::path out_dir;
};
int run_simulate(const SimulateArgs& args, std::ostream& log);

struct AttackArgs {
    std::filesystem::path traces;
    std::string model = "hw";
    bool mtd = false;
    std::string checkpoints; // "start:factor" override, empty = default
    std::size_t stability_window = 3;
    std::filesystem::path out_dir;
};
int run_attack(const AttackArgs& args, std::ostream& log);

struct VddAttackArgs {
    std::filesystem::path config;
    double range_lo = 0.0;
    double range_hi = 0.0;
    double step = 0.0;
    std::size_t budget = 20000;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
};
int run_vdd_attack(const VddAttackArgs& args, std::ostream& log);

struct DetectGenArgs {
    std::filesystem::path config;
    std::size_t n_traces = 4000;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
    std::string name = "sensor.scat";
};
int run_detect_gen(const DetectGenArgs& args, std::ostream& log);

struct DetectTrainArgs {
    std::filesystem::path config;
    std::filesystem::path dataset;
    std::size_t train_count = 0; // 0 = all
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
};
int run_detect_train(const DetectTrainArgs& args, std::ostream& log);

struct DetectEvalArgs {
    std::filesystem::path model;
    std::filesystem::path dataset;
    std::size_t skip = 0; // evaluate traces [skip, end)
};
int run_detect_eval(const DetectEvalArgs& args, std::ostream& log);

struct VddMonitorArgs {
    std::filesystem::path config;
    std::filesystem::path series; // CSV vdd,v_aes; empty = synthetic fixture
    std::size_t fixture_samples = 4000;
    std::size_t drop_at = 1000;
    double drop_frac = 0.2;
    double vdd_nominal = 1.2;
};
int run_vdd_monitor(const VddMonitorArgs& args, std::ostream& log);

struct SaberKeygenArgs {
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
};
int run_saber_keygen(const SaberKeygenArgs& args, std::ostream& log);

struct SaberEncapsArgs {
    std::filesystem::path pk;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
};
int run_saber_encaps(const SaberEncapsArgs& args, std::ostream& log);

struct SaberDecapsArgs {
    std::filesystem::path sk;
    std::filesystem::path ct;
    std::filesystem::path out_dir;
};
int run_saber_decaps(const SaberDecapsArgs& args, std::ostream& log);

struct SaberKatArgs {
    std::filesystem::path file;
};
int run_saber_kat(const SaberKatArgs& args, std::ostream& log);

struct SaberBenchArgs {
    std::uint64_t seed = 1;
};
int run_saber_bench(const SaberBenchArgs& args, std::ostream& log);

} // namespace scaforge::orchestrate
