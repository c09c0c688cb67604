// scaforge: side-channel countermeasure workbench + Saber KEM tooling.
#include <iostream>

#include <CLI11.hpp>

#include "scaforge/orchestrate.hpp"

namespace {

using namespace scaforge;
using namespace scaforge::orchestrate;

int dispatch(const std::function<int()>& body) {
    try {
        return body();
    } catch (const NoAttackFound& e) {
        std::cout << e.what() << "\n";
        return kExitNegative;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scaforge: trace-domain side-channel workbench and Saber KEM"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "simulate (optionally protected) power traces");
    c_sim->add_option("--config", sim.config, "experiment config JSON")->required();
    c_sim->add_option("--traces", sim.n_traces, "number of traces")->check(CLI::PositiveNumber);
    c_sim->add_option("--seed", sim.seed, "rng seed");
    c_sim->add_option("--countermeasures", sim.countermeasures,
                      "comma list out of dsac,bleed,tvtf (empty = unprotected)");
    c_sim->add_option("--out", sim.out_dir, "output directory")->required();

    AttackArgs atk;
    auto* c_atk = app.add_subcommand("attack", "run CPA (and MTD) against a trace file");
    c_atk->add_option("--traces", atk.traces, "trace file")->required();
    c_atk->add_option("--model", atk.model, "leakage model hw|hd");
    c_atk->add_flag("--mtd", atk.mtd, "also compute minimum traces to disclosure");
    c_atk->add_option("--checkpoints", atk.checkpoints, "MTD checkpoint schedule START:FACTOR");
    c_atk->add_option("--stability-window", atk.stability_window,
                      "consecutive rank-1 checkpoints required");
    c_atk->add_option("--out", atk.out_dir, "output directory")->required();

    VddAttackArgs vda;
    std::string range_spec;
    auto* c_vda = app.add_subcommand("vdd-attack", "sweep supply voltage for the weakest MTD");
    c_vda->add_option("--config", vda.config, "experiment config JSON")->required();
    c_vda->add_option("--range", range_spec, "sweep range lo:hi:step")->required();
    c_vda->add_option("--budget", vda.budget, "CPA trace budget per point");
    c_vda->add_option("--seed", vda.seed, "rng seed");
    c_vda->add_option("--out", vda.out_dir, "output directory")->required();

    auto* c_detect = app.add_subcommand("detect", "sensor dataset / classifier workflows");
    c_detect->require_subcommand(1);

    DetectGenArgs dgen;
    auto* c_dgen = c_detect->add_subcommand("gen", "generate a labeled sensor dataset");
    c_dgen->add_option("--config", dgen.config, "experiment config JSON")->required();
    c_dgen->add_option("--traces", dgen.n_traces, "number of traces")->check(CLI::PositiveNumber);
    c_dgen->add_option("--seed", dgen.seed, "rng seed");
    c_dgen->add_option("--name", dgen.name, "dataset file name");
    c_dgen->add_option("--out", dgen.out_dir, "output directory")->required();

    DetectTrainArgs dtrain;
    auto* c_dtrain = c_detect->add_subcommand("train", "train the glitch/probe classifier");
    c_dtrain->add_option("--config", dtrain.config, "experiment config JSON")->required();
    c_dtrain->add_option("--dataset", dtrain.dataset, "sensor dataset file")->required();
    c_dtrain->add_option("--count", dtrain.train_count, "train on the first N traces (0 = all)");
    c_dtrain->add_option("--seed", dtrain.seed, "rng seed");
    c_dtrain->add_option("--out", dtrain.out_dir, "output directory")->required();

    DetectEvalArgs deval;
    auto* c_deval = c_detect->add_subcommand("eval", "evaluate a trained classifier");
    c_deval->add_option("--model", deval.model, "detector model JSON")->required();
    c_deval->add_option("--dataset", deval.dataset, "sensor dataset file")->required();
    c_deval->add_option("--skip", deval.skip, "skip the first N traces (held-out split)");

    VddMonitorArgs vmon;
    auto* c_vmon = app.add_subcommand("vdd-monitor", "replay a voltage series through the "
                                                     "drop detector");
    c_vmon->add_option("--config", vmon.config, "experiment config JSON")->required();
    c_vmon->add_option("--series", vmon.series, "CSV with vdd,v_aes columns");
    c_vmon->add_option("--samples", vmon.fixture_samples, "fixture length in samples");
    c_vmon->add_option("--drop-at", vmon.drop_at, "fixture: drop onset sample");
    c_vmon->add_option("--drop-frac", vmon.drop_frac, "fixture: relative drop size");
    c_vmon->add_option("--vdd", vmon.vdd_nominal, "fixture: nominal supply voltage");

    auto* c_saber = app.add_subcommand("saber", "Saber KEM operations");
    c_saber->require_subcommand(1);

    SaberKeygenArgs skg;
    auto* c_skg = c_saber->add_subcommand("keygen", "generate a key pair");
    c_skg->add_option("--seed", skg.seed, "rng seed");
    c_skg->add_option("--out", skg.out_dir, "output directory")->required();

    SaberEncapsArgs senc;
    auto* c_senc = c_saber->add_subcommand("encaps", "encapsulate against a public key");
    c_senc->add_option("--pk", senc.pk, "public key file")->required();
    c_senc->add_option("--seed", senc.seed, "rng seed");
    c_senc->add_option("--out", senc.out_dir, "output directory")->required();

    SaberDecapsArgs sdec;
    auto* c_sdec = c_saber->add_subcommand("decaps", "decapsulate a ciphertext");
    c_sdec->add_option("--sk", sdec.sk, "secret key file")->required();
    c_sdec->add_option("--ct", sdec.ct, "ciphertext file")->required();
    c_sdec->add_option("--out", sdec.out_dir, "output directory")->required();

    SaberKatArgs skat;
    auto* c_skat = c_saber->add_subcommand("kat", "verify NIST-format known-answer vectors");
    c_skat->add_option("--file", skat.file, "PQCkemKAT .rsp file")->required();

    SaberBenchArgs sbench;
    auto* c_sbench = c_saber->add_subcommand("bench", "lazy vs eager multiplier instrumentation");
    c_sbench->add_option("--seed", sbench.seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help lands here with exit code 0; real usage errors exit 1.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (*c_sim)
        return dispatch([&] { return run_simulate(sim, std::cout); });
    if (*c_atk)
        return dispatch([&] { return run_attack(atk, std::cout); });
    if (*c_vda) {
        // lo:hi:step
        const auto first = range_spec.find(':');
        const auto second = range_spec.find(':', first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            std::cerr << "error: --range expects lo:hi:step\n";
            return kExitUsage;
        }
        try {
            vda.range_lo = std::stod(range_spec.substr(0, first));
            vda.range_hi = std::stod(range_spec.substr(first + 1, second - first - 1));
            vda.step = std::stod(range_spec.substr(second + 1));
        } catch (const std::exception&) {
            std::cerr << "error: --range expects numeric lo:hi:step\n";
            return kExitUsage;
        }
        if (vda.step <= 0) {
            std::cerr << "error: --range step must be > 0\n";
            return kExitUsage;
        }
        return dispatch([&] { return run_vdd_attack(vda, std::cout); });
    }
    if (*c_dgen)
        return dispatch([&] { return run_detect_gen(dgen, std::cout); });
    if (*c_dtrain)
        return dispatch([&] { return run_detect_train(dtrain, std::cout); });
    if (*c_deval)
        return dispatch([&] { return run_detect_eval(deval, std::cout); });
    if (*c_vmon)
        return dispatch([&] { return run_vdd_monitor(vmon, std::cout); });
    if (*c_skg)
        return dispatch([&] { return run_saber_keygen(skg, std::cout); });
    if (*c_senc)
        return dispatch([&] { return run_saber_encaps(senc, std::cout); });
    if (*c_sdec)
        return dispatch([&] { return run_saber_decaps(sdec, std::cout); });
    if (*c_skat)
        return dispatch([&] { return run_saber_kat(skat, std::cout); });
    if (*c_sbench)
        return dispatch([&] { return run_saber_bench(sbench, std::cout); });

    return kExitUsage;
}
