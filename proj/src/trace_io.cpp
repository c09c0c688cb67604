#include <cstring>
#include <fstream>

#include "scaforge/store.hpp"

namespace scaforge::store {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'A', 'T'};
constexpr std::uint8_t kDtypeF32 = 0;
constexpr std::uint8_t kFlagCiphertexts = 1u << 0;
constexpr std::uint8_t kFlagLabels = 1u << 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

std::string serialize_traces(const TraceSet& ts, bool labels_flag) {
    std::string out;
    const std::size_t per_trace =
        16 + (ts.has_ciphertexts() ? 16 : 0) + ts.n_samples * sizeof(float);
    out.reserve(20 + ts.n_traces * per_trace);

    out.append(kMagic, 4);
    put_u32(out, kTraceFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(ts.n_traces));
    put_u32(out, static_cast<std::uint32_t>(ts.n_samples));
    out.push_back(static_cast<char>(kDtypeF32));
    std::uint8_t flags = 0;
    if (ts.has_ciphertexts())
        flags |= kFlagCiphertexts;
    if (labels_flag)
        flags |= kFlagLabels;
    out.push_back(static_cast<char>(flags));
    out.push_back('\0');
    out.push_back('\0');

    for (std::size_t t = 0; t < ts.n_traces; ++t) {
        out.append(reinterpret_cast<const char*>(ts.plaintexts[t].data()), 16);
        if (ts.has_ciphertexts())
            out.append(reinterpret_cast<const char*>(ts.ciphertexts[t].data()), 16);
        out.append(reinterpret_cast<const char*>(ts.trace(t)), ts.n_samples * sizeof(float));
    }
    return out;
}

TraceSet parse_traces(const std::string& blob, const std::filesystem::path& path) {
    if (blob.size() < 20)
        throw TruncatedFile("trace file shorter than its header: " + path.string());
    const auto* p = reinterpret_cast<const std::uint8_t*>(blob.data());
    if (std::memcmp(p, kMagic, 4) != 0)
        throw BadMagic("not a trace file (bad magic): " + path.string());
    const std::uint32_t version = get_u32(p + 4);
    if (version != kTraceFormatVersion)
        throw VersionMismatch("unsupported trace format version " + std::to_string(version));

    TraceSet ts;
    ts.n_traces = get_u32(p + 8);
    ts.n_samples = get_u32(p + 12);
    const std::uint8_t dtype = p[16];
    const std::uint8_t flags = p[17];
    if (dtype != kDtypeF32)
        throw VersionMismatch("unsupported trace dtype " + std::to_string(dtype));

    const bool has_ct = flags & kFlagCiphertexts;
    const std::size_t per_trace = 16 + (has_ct ? 16 : 0) + ts.n_samples * sizeof(float);
    const std::size_t want = 20 + ts.n_traces * per_trace;
    if (blob.size() < want)
        throw TruncatedFile("trace file truncated: " + path.string());
    if (blob.size() > want)
        throw TruncatedFile("trace file longer than declared: " + path.string());

    ts.samples.resize(ts.n_traces * ts.n_samples);
    ts.plaintexts.resize(ts.n_traces);
    if (has_ct)
        ts.ciphertexts.resize(ts.n_traces);

    const std::uint8_t* cur = p + 20;
    for (std::size_t t = 0; t < ts.n_traces; ++t) {
        std::memcpy(ts.plaintexts[t].data(), cur, 16);
        cur += 16;
        if (has_ct) {
            std::memcpy(ts.ciphertexts[t].data(), cur, 16);
            cur += 16;
        }
        std::memcpy(ts.trace(t), cur, ts.n_samples * sizeof(float));
        cur += ts.n_samples * sizeof(float);
    }
    return ts;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path.string());
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return blob;
}

} // namespace

std::filesystem::path meta_path(const std::filesystem::path& trace_path) {
    auto p = trace_path;
    p += ".meta.json";
    return p;
}

std::filesystem::path labels_path(const std::filesystem::path& trace_path) {
    auto p = trace_path;
    p += ".labels.csv";
    return p;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto partial = path;
    partial += ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open for writing: " + partial.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error("write failed: " + partial.string());
    }
    std::filesystem::rename(partial, path);
}

void write_traces(const std::filesystem::path& path, const TraceSet& ts, const TraceMeta& meta) {
    ts.validate();
    write_file_atomic(path, serialize_traces(ts, /*labels_flag=*/false));

    std::string json = "{\n  \"leak_positions\": [";
    for (std::size_t i = 0; i < meta.leak_positions.size(); ++i) {
        if (i)
            json += ", ";
        json += std::to_string(meta.leak_positions[i]);
    }
    json += "]";
    if (!meta.key.empty())
        json += ",\n  \"key\": \"" + hex_encode(meta.key) + "\"";
    if (meta.model)
        json += std::string(",\n  \"model\": \"") +
                (*meta.model == LeakModel::HammingWeight ? "hw" : "hd") + "\"";
    if (meta.sample_rate > 0)
        json += ",\n  \"sample_rate\": " + format_double(meta.sample_rate);
    json += "\n}\n";
    write_file_atomic(meta_path(path), json);
}

TraceSet read_traces(const std::filesystem::path& path, TraceMeta* meta) {
    TraceSet ts = parse_traces(read_file(path), path);

    const auto mp = meta_path(path);
    if (std::filesystem::exists(mp)) {
        const TraceMeta m = parse_trace_meta(read_file(mp));
        ts.leak_positions = m.leak_positions;
        if (meta)
            *meta = m;
    } else if (meta) {
        *meta = TraceMeta{};
    }
    ts.validate();
    return ts;
}

void write_sensor_dataset(const std::filesystem::path& path, const detect::SensorDataset& ds) {
    TraceSet ts;
    ts.n_traces = ds.traces.size();
    ts.n_samples = ds.n_samples;
    ts.samples.resize(ts.n_traces * ts.n_samples);
    ts.plaintexts.assign(ts.n_traces, Block16{});
    for (std::size_t i = 0; i < 16; ++i)
        ts.leak_positions[i] = static_cast<std::uint32_t>(i);
    for (std::size_t t = 0; t < ts.n_traces; ++t) {
        if (ds.traces[t].samples.size() != ds.n_samples)
            throw DimensionError("write_sensor_dataset: ragged trace lengths");
        std::memcpy(ts.trace(t), ds.traces[t].samples.data(), ds.n_samples * sizeof(float));
    }
    write_file_atomic(path, serialize_traces(ts, /*labels_flag=*/true));

    std::string meta = "{\n  \"sample_rate\": " + format_double(ds.sample_rate) + "\n}\n";
    write_file_atomic(meta_path(path), meta);

    std::string csv = "index,label\n";
    for (std::size_t t = 0; t < ds.traces.size(); ++t)
        csv += std::to_string(t) + "," + detect::to_string(ds.traces[t].label) + "\n";
    write_file_atomic(labels_path(path), csv);
}

detect::SensorDataset read_sensor_dataset(const std::filesystem::path& path) {
    const TraceSet ts = parse_traces(read_file(path), path);

    detect::SensorDataset ds;
    ds.n_samples = ts.n_samples;

    const auto mp = meta_path(path);
    if (std::filesystem::exists(mp)) {
        const TraceMeta m = parse_trace_meta(read_file(mp));
        if (m.sample_rate > 0)
            ds.sample_rate = m.sample_rate;
    }

    const std::string csv = read_file(labels_path(path));
    std::vector<detect::Scenario> labels;
    std::size_t pos = csv.find('\n'); // skip header
    while (pos != std::string::npos && pos + 1 < csv.size()) {
        const std::size_t end = csv.find('\n', pos + 1);
        const std::string line = csv.substr(pos + 1, end == std::string::npos
                                                         ? std::string::npos
                                                         : end - pos - 1);
        if (!line.empty()) {
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw Error("labels CSV: malformed line: " + line);
            labels.push_back(detect::scenario_from_string(line.substr(comma + 1)));
        }
        pos = end;
    }
    if (labels.size() != ts.n_traces)
        throw DimensionError("labels CSV row count does not match trace count");

    ds.traces.resize(ts.n_traces);
    for (std::size_t t = 0; t < ts.n_traces; ++t) {
        ds.traces[t].samples.assign(ts.trace(t), ts.trace(t) + ts.n_samples);
        ds.traces[t].label = labels[t];
        ds.traces[t].sample_rate = ds.sample_rate;
    }
    return ds;
}

} // namespace scaforge::store
