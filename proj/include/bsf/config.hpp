/// @file config.hpp
/// @brief Run configuration: flat key=value sections, full validation with
///        per-line error reporting, canonical serialization, content hash.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsf/coupled.hpp"

namespace bsf {

struct ConfigError {
    int line = 0;  // 0 when not tied to a line
    std::string message;
};

/// Thrown by parse_config_or_throw; carries every validation error.
struct ConfigParseError : std::runtime_error {
    explicit ConfigParseError(std::vector<ConfigError> errs);
    std::vector<ConfigError> errors;
};

struct RunConfig {
    // [grid]
    int nx = 64, ny = 64;
    double Lx = 1.0, Ly = 1.0;
    // [physics] + [potentials] + [variant] (+ [debug] fixture)
    VariantConfig variant;
    // [time]
    double t_end = 0.01;
    // [ic]
    IcParams ic;
    // [output]
    std::string output_dir = "out";
    long snapshot_every = 0;  // 0: only initial and final snapshots

    std::uint64_t source_hash = 0;  // FNV-1a of the exact config text

    Grid make_grid() const { return build_grid(nx, ny, Lx, Ly); }
    State make_initial_state(const Grid& g) const {
        return initial_conditions(ic.kind, g, variant.params, ic);
    }
};

/// Parses and validates; on failure returns every error found (line numbers
/// for syntax/range problems). Unknown sections or keys are hard errors.
/// K and L accept the literal token `inf`.
bool parse_config(const std::string& text, RunConfig& out, std::vector<ConfigError>& errors);

RunConfig parse_config_or_throw(const std::string& text);

/// Canonical echo of a config; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64-bit over the raw bytes.
std::uint64_t config_hash(const std::string& text);

const char* to_string(Variant v);
const char* to_string(IcKind k);
const char* to_string(PotentialKind k);

}  // namespace bsf
