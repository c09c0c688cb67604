#include "scaforge/orchestrate.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "scaforge/saber/drbg.hpp"
#include "scaforge/saber/kat.hpp"
#include "scaforge/saber/toom.hpp"

namespace scaforge::orchestrate {

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const fs::path& dir) {
    if (!dir.empty())
        fs::create_directories(dir);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty())
                parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        parts.push_back(cur);
    return parts;
}

LeakModel model_from_flag(const std::string& s) {
    if (s == "hw")
        return LeakModel::HammingWeight;
    if (s == "hd")
        return LeakModel::HammingDistance;
    throw ConfigError("model", "expected hw|hd");
}

void write_bytes(const fs::path& path, const std::uint8_t* data, std::size_t len) {
    store::write_file_atomic(path, std::string(reinterpret_cast<const char*>(data), len));
}

std::vector<std::uint8_t> read_bytes_exact(const fs::path& path, std::size_t want) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (data.size() != want)
        throw TruncatedFile(path.string() + ": expected " + std::to_string(want) + " bytes, got " +
                            std::to_string(data.size()));
    return data;
}

saber::RandomBytes seeded_random(std::uint64_t seed) {
    // KEM randomness through the DRBG keeps byte-level reproducibility.
    std::uint8_t entropy[48] = {};
    for (int i = 0; i < 8; ++i)
        entropy[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    auto drbg = std::make_shared<saber::NistDrbg>(entropy);
    return [drbg](std::uint8_t* p, std::size_t n) { drbg->generate(p, n); };
}

} // namespace

int run_simulate(const SimulateArgs& args, std::ostream& log) {
    const auto cfg = store::load_config(args.config);
    ensure_out_dir(args.out_dir);

    RngStream rng(args.seed, 0);
    TraceSet traces = simulate_demand_traces(cfg.leakage, args.n_traces, cfg.sim_samples, rng);

    double a_eff = 1.0;
    for (const auto& stage : split_list(args.countermeasures, ',')) {
        if (stage == "dsac") {
            traces = cm::apply_dsac(traces, cfg.dsac, cfg.supply);
            a_eff = cm::effective_attenuation(cfg.dsac, cfg.supply);
        } else if (stage == "bleed") {
            traces = cm::apply_ro_bleed(traces, cfg.bleed, rng);
        } else if (stage == "tvtf") {
            traces = cm::apply_tvtf(traces, cfg.tvtf, rng);
        } else {
            throw ConfigError("countermeasures", "unknown stage: " + stage);
        }
    }

    store::TraceMeta meta;
    meta.leak_positions = traces.leak_positions;
    meta.key = cfg.leakage.key;
    meta.model = cfg.leakage.model;
    store::write_traces(args.out_dir / "traces.scat", traces, meta);
    store::save_config(args.out_dir / "config_echo.json", cfg);

    log << "wrote " << traces.n_traces << " traces x " << traces.n_samples << " samples\n";
    log << "effective attenuation: " << store::format_double(a_eff) << "\n";
    return kExitOk;
}

int run_attack(const AttackArgs& args, std::ostream& log) {
    store::TraceMeta meta;
    const TraceSet traces = store::read_traces(args.traces, &meta);
    ensure_out_dir(args.out_dir);

    const LeakModel model = model_from_flag(args.model);
    const CpaResult result = cpa_attack(traces, model);
    store::emit_cpa_report(args.out_dir / "cpa.csv", result, meta.key);

    if (!args.mtd) {
        log << "CPA over " << traces.n_traces << " traces done\n";
        return kExitOk;
    }

    if (meta.key.size() < kAttackedBytes)
        throw Error("attack --mtd: trace metadata has no true key");

    MtdConfig mtd_cfg;
    mtd_cfg.model = model;
    mtd_cfg.true_key = meta.key;
    mtd_cfg.stability_window = args.stability_window;
    std::size_t start = 100;
    double factor = 1.5;
    if (!args.checkpoints.empty()) {
        std::istringstream ss(args.checkpoints);
        char colon = 0;
        if (!(ss >> start >> colon >> factor) || colon != ':' || factor <= 1.0 || start < 2)
            throw ConfigError("checkpoints", "expected START:FACTOR with factor > 1");
    }
    mtd_cfg.checkpoints = default_checkpoints(traces.n_traces, start, factor);

    const TraceSource source = [&](std::size_t first, std::size_t count) {
        TraceSet batch;
        batch.n_traces = count;
        batch.n_samples = traces.n_samples;
        batch.leak_positions = traces.leak_positions;
        batch.samples.assign(traces.samples.begin() + first * traces.n_samples,
                             traces.samples.begin() + (first + count) * traces.n_samples);
        batch.plaintexts.assign(traces.plaintexts.begin() + first,
                                traces.plaintexts.begin() + first + count);
        return batch;
    };
    const MtdReport report = compute_mtd(source, mtd_cfg);
    store::emit_mtd_report(args.out_dir / "mtd.csv", report);

    if (report.mtd) {
        log << "disclosed: MTD = " << *report.mtd << " traces\n";
        return kExitOk;
    }
    log << "not disclosed within " << traces.n_traces << " traces\n";
    return kExitNegative;
}

int run_vdd_attack(const VddAttackArgs& args, std::ostream& log) {
    const auto cfg = store::load_config(args.config);
    ensure_out_dir(args.out_dir);

    cm::VddAttackConfig vcfg;
    vcfg.leakage = cfg.leakage;
    vcfg.dsac = cfg.dsac;
    vcfg.supply = cfg.supply;
    vcfg.range_lo = args.range_lo;
    vcfg.range_hi = args.range_hi;
    vcfg.step = args.step;
    vcfg.budget = args.budget;
    vcfg.n_samples = cfg.sim_samples;
    vcfg.seed = args.seed;
    vcfg.model = cfg.attack.model;
    vcfg.stability_window = cfg.attack.stability_window;

    try {
        const auto result = cm::find_voltage_drop_attack(vcfg);
        store::emit_vdd_sweep_report(args.out_dir / "vdd_sweep.csv", result.sweep);
        log << "vdd* = " << store::format_double(result.vdd_star)
            << ", MTD = " << result.mtd_star;
        if (result.mtd_nominal)
            log << " (nominal " << *result.mtd_nominal << ")";
        else
            log << " (nominal not disclosed within budget)";
        log << "\n";
        return kExitOk;
    } catch (const NoAttackFound& e) {
        log << e.what() << "\n";
        return kExitNegative;
    }
}

int run_detect_gen(const DetectGenArgs& args, std::ostream& log) {
    const auto cfg = store::load_config(args.config);
    ensure_out_dir(args.out_dir);

    RngStream rng(args.seed, 0);
    const auto ds = detect::make_sensor_dataset(args.n_traces, cfg.detector.n_samples, rng,
                                                cfg.detector.sensor);
    store::write_sensor_dataset(args.out_dir / args.name, ds);
    log << "wrote " << ds.traces.size() << " labeled sensor traces\n";
    return kExitOk;
}

int run_detect_train(const DetectTrainArgs& args, std::ostream& log) {
    const auto cfg = store::load_config(args.config);
    auto ds = store::read_sensor_dataset(args.dataset);
    ensure_out_dir(args.out_dir);

    if (args.train_count > 0 && args.train_count < ds.traces.size())
        ds.traces.resize(args.train_count);

    detect::TrainHyper hyper;
    hyper.hidden = cfg.detector.hidden;
    hyper.learning_rate = cfg.detector.learning_rate;
    hyper.epochs = cfg.detector.epochs;
    hyper.batch_size = cfg.detector.batch_size;

    const auto outcome = detect::train_detector(ds, hyper, RngStream(args.seed, 0));
    store::write_detector_model(args.out_dir / "detector.json", outcome.model);
    store::emit_training_report(args.out_dir / "training.csv", outcome.curve);

    log << "trained on " << ds.traces.size()
        << " traces, final loss = " << store::format_double(outcome.model.final_train_loss)
        << "\n";
    if (outcome.model.degenerate_single_class)
        log << "warning: single-class dataset, model flagged degenerate\n";
    return kExitOk;
}

int run_detect_eval(const DetectEvalArgs& args, std::ostream& log) {
    const auto model = store::read_detector_model(args.model);
    auto ds = store::read_sensor_dataset(args.dataset);
    if (args.skip > 0) {
        if (args.skip >= ds.traces.size())
            throw DimensionError("detect eval: skip exceeds dataset size");
        ds.traces.erase(ds.traces.begin(),
                        ds.traces.begin() + static_cast<std::ptrdiff_t>(args.skip));
    }
    if (!ds.traces.empty() && ds.traces.front().samples.size() != model.input_size())
        throw DimensionError("detect eval: model input size does not match dataset");

    const auto rep = detect::evaluate(model, ds);
    log << "confusion matrix (rows = true, cols = predicted):\n";
    for (std::size_t r = 0; r < detect::kNumClasses; ++r) {
        log << "  " << detect::to_string(static_cast<detect::Scenario>(r)) << ":";
        for (std::size_t c = 0; c < detect::kNumClasses; ++c)
            log << " " << rep.confusion[r][c];
        log << "\n";
    }
    log << "accuracy: " << store::format_double(rep.accuracy) << "\n";
    return kExitOk;
}

int run_vdd_monitor(const VddMonitorArgs& args, std::ostream& log) {
    const auto cfg = store::load_config(args.config);

    std::vector<double> vdd, aes;
    double sample_rate = cfg.detector.sensor.sample_rate;
    if (!args.series.empty()) {
        std::ifstream in(args.series);
        if (!in)
            throw Error("cannot open series file: " + args.series.string());
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw Error("series CSV: malformed line: " + line);
            vdd.push_back(std::stod(line.substr(0, comma)));
            aes.push_back(std::stod(line.substr(comma + 1)));
        }
    } else {
        const auto fx = detect::make_drop_fixture(args.fixture_samples, args.drop_at,
                                                  args.vdd_nominal, args.drop_frac,
                                                  cfg.ro_tracker.divider);
        vdd = fx.vdd;
        aes = fx.v_aes;
    }

    const auto alarm = detect::voltage_drop_detect(vdd, aes, cfg.ro_tracker);
    if (alarm) {
        log << "alarm at sample " << *alarm << " ("
            << store::format_double(static_cast<double>(*alarm) / sample_rate * 1e3) << " ms)\n";
    } else {
        log << "no alarm\n";
    }
    return kExitOk;
}

int run_saber_keygen(const SaberKeygenArgs& args, std::ostream& log) {
    ensure_out_dir(args.out_dir);
    const auto kp = saber::keygen(seeded_random(args.seed));
    write_bytes(args.out_dir / "saber.pk", kp.pk.data(), kp.pk.size());
    write_bytes(args.out_dir / "saber.sk", kp.sk.data(), kp.sk.size());
    log << "wrote saber.pk (" << kp.pk.size() << " B) and saber.sk (" << kp.sk.size() << " B)\n";
    return kExitOk;
}

int run_saber_encaps(const SaberEncapsArgs& args, std::ostream& log) {
    ensure_out_dir(args.out_dir);
    const auto pk_bytes = read_bytes_exact(args.pk, saber::kPublicKeyBytes);
    saber::PublicKey pk;
    std::copy(pk_bytes.begin(), pk_bytes.end(), pk.begin());

    const auto res = saber::encaps(pk, seeded_random(args.seed));
    write_bytes(args.out_dir / "saber.ct", res.ct.data(), res.ct.size());
    write_bytes(args.out_dir / "saber.ss", res.ss.data(), res.ss.size());
    log << "wrote saber.ct (" << res.ct.size() << " B) and saber.ss (" << res.ss.size() << " B)\n";
    return kExitOk;
}

int run_saber_decaps(const SaberDecapsArgs& args, std::ostream& log) {
    ensure_out_dir(args.out_dir);
    const auto sk_bytes = read_bytes_exact(args.sk, saber::kSecretKeyBytes);
    const auto ct_bytes = read_bytes_exact(args.ct, saber::kCiphertextBytes);
    saber::SecretKey sk;
    saber::Ciphertext ct;
    std::copy(sk_bytes.begin(), sk_bytes.end(), sk.begin());
    std::copy(ct_bytes.begin(), ct_bytes.end(), ct.begin());

    const auto ss = saber::decaps(sk, ct);
    write_bytes(args.out_dir / "saber.ss", ss.data(), ss.size());
    log << "wrote saber.ss (" << ss.size() << " B)\n";
    return kExitOk;
}

int run_saber_kat(const SaberKatArgs& args, std::ostream& log) {
    const auto entries = saber::read_kat_file(args.file.string());
    const auto outcome = saber::verify_kat_entries(entries);
    log << "KAT: " << outcome.passed << "/" << outcome.total << " passed\n";
    for (int c : outcome.failed_counts)
        log << "  FAILED count = " << c << "\n";
    return outcome.all_passed() ? kExitOk : kExitNegative;
}

int run_saber_bench(const SaberBenchArgs& args, std::ostream& log) {
    RngStream rng(args.seed, 0);
    saber::PolyMat a;
    saber::PolyVec s;
    for (auto& row : a)
        for (auto& p : row)
            for (auto& c : p.c)
                c = static_cast<std::uint16_t>(rng.next_u64() & saber::kQMask);
    for (auto& p : s)
        for (auto& c : p.c)
            c = static_cast<std::uint16_t>(rng.next_u64() & saber::kQMask);

    saber::MemoryMeter lazy, eager;
    const auto b_lazy = saber::matvec_mul_lazy(a, s, false, lazy);
    const auto b_eager = saber::matvec_mul_eager(a, s, false, eager);
    if (b_lazy != b_eager)
        throw Error("bench: lazy and eager matvec disagree");

    // Schoolbook cost of the same matvec, for scale.
    const std::uint64_t schoolbook_mults =
        static_cast<std::uint64_t>(saber::kL) * saber::kL * saber::kN * saber::kN;

    log << "matvec 3x3, per strategy:\n";
    log << "  lazy : interpolations = " << lazy.interpolations()
        << ", pointwise products = " << lazy.pointwise_products()
        << ", coeff mults = " << lazy.coefficient_mults()
        << ", peak live words = " << lazy.peak_words() << "\n";
    log << "  eager: interpolations = " << eager.interpolations()
        << ", pointwise products = " << eager.pointwise_products()
        << ", coeff mults = " << eager.coefficient_mults()
        << ", peak live words = " << eager.peak_words() << "\n";
    log << "  (peak counts product/accumulator state; operand eval volume: lazy = "
        << lazy.operand_eval_words() << " words, eager = " << eager.operand_eval_words()
        << " words)\n";
    log << "  schoolbook matvec coeff mults = " << schoolbook_mults << "\n";
    return kExitOk;
}

} // namespace scaforge::orchestrate
