#include "scaforge/saber/kat.hpp"

#include <fstream>

#include "scaforge/error.hpp"
#include "scaforge/saber/drbg.hpp"

namespace scaforge::saber {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

void parse_hex(const std::string& hex, std::uint8_t* out, std::size_t want,
               const std::string& field) {
    if (hex.size() != 2 * want)
        throw Error("KAT field '" + field + "': expected " + std::to_string(2 * want) +
                    " hex digits, got " + std::to_string(hex.size()));
    for (std::size_t i = 0; i < want; ++i) {
        const int hi = hex_nibble(hex[2 * i]);
        const int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw Error("KAT field '" + field + "': invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<KatEntry> read_kat_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open KAT file: " + path);

    std::vector<KatEntry> entries;
    KatEntry cur;
    bool have_entry = false;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("KAT parse error, missing '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "count") {
            if (have_entry)
                entries.push_back(cur);
            cur = KatEntry{};
            cur.count = std::stoi(val);
            have_entry = true;
        } else if (key == "seed") {
            parse_hex(val, cur.seed.data(), cur.seed.size(), key);
        } else if (key == "pk") {
            parse_hex(val, cur.pk.data(), cur.pk.size(), key);
        } else if (key == "sk") {
            parse_hex(val, cur.sk.data(), cur.sk.size(), key);
        } else if (key == "ct") {
            parse_hex(val, cur.ct.data(), cur.ct.size(), key);
        } else if (key == "ss") {
            parse_hex(val, cur.ss.data(), cur.ss.size(), key);
        } else {
            throw Error("KAT parse error, unknown field: " + key);
        }
    }
    if (have_entry)
        entries.push_back(cur);
    if (entries.empty())
        throw Error("KAT file holds no entries: " + path);
    return entries;
}

KatOutcome verify_kat_entries(const std::vector<KatEntry>& entries) {
    KatOutcome outcome;
    outcome.total = entries.size();
    for (const auto& e : entries) {
        NistDrbg drbg(e.seed.data());
        const RandomBytes random = [&](std::uint8_t* p, std::size_t n) { drbg.generate(p, n); };

        const KeyPair kp = keygen(random);
        const EncapsResult enc = encaps(kp.pk, random);
        const SharedSecret ss_dec = decaps(kp.sk, enc.ct);

        const bool ok = kp.pk == e.pk && kp.sk == e.sk && enc.ct == e.ct && enc.ss == e.ss &&
                        ss_dec == e.ss;
        if (ok)
            ++outcome.passed;
        else
            outcome.failed_counts.push_back(e.count);
    }
    return outcome;
}

} // namespace scaforge::saber
