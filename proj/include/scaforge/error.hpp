#pragma once

#include <stdexcept>
#include <string>

namespace scaforge {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid shapes, incompatible sizes, out-of-range indices.
struct DimensionError : Error {
    using Error::Error;
};

// A config field violated its documented range; names the field.
struct ConfigError : Error {
    ConfigError(const std::string& field, const std::string& what)
        : Error("config field '" + field + "': " + what), field(field) {}
    std::string field;
};

// Supply voltage below v_fail: the simulated AES core cannot operate.
struct SupplyFailure : Error {
    using Error::Error;
};

// Voltage sweep found no operating point that beats the nominal MTD.
struct NoAttackFound : Error {
    using Error::Error;
};

// Every trace sample is constant; correlation is undefined everywhere.
struct DegenerateTraces : Error {
    using Error::Error;
};

// Toom interpolation produced a value whose exact division failed;
// only reachable through an implementation bug, never through inputs.
struct InterpolationOverflow : Error {
    using Error::Error;
};

// Trace/model file problems.
struct BadMagic : Error {
    using Error::Error;
};
struct VersionMismatch : Error {
    using Error::Error;
};
struct TruncatedFile : Error {
    using Error::Error;
};

} // namespace scaforge
