/// @file io.hpp
/// @brief On-disk artifacts: diagnostics CSV time series, BSF1 binary field
///        snapshots, and the run manifest.
///
/// Snapshot format, one file per field per snapshot time:
///   16-byte header: magic "BSF1", u32 LE dim0, u32 LE dim1, u32 LE field tag
///   followed by dim0*dim1 row-major little-endian float64.
/// Wall fields use dims (nx, 1); uy uses (nx, ny+1).

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bsf/coupled.hpp"
#include "bsf/diagnostics.hpp"

namespace bsf {

inline constexpr const char* kRevision = "bsflow 0.1.0";

enum class FieldTag : std::uint32_t {
    Phi = 1,
    Mu = 2,
    P = 3,
    Ux = 4,
    Uy = 5,
    PsiBottom = 6,
    PsiTop = 7,
    ThetaBottom = 8,
    ThetaTop = 9,
};

const char* field_name(FieldTag t);

/// CSV writer: header row naming every DiagnosticsRecord field in declaration
/// order after the leading time column; 17 significant digits.
class TimeseriesWriter {
public:
    explicit TimeseriesWriter(std::ostream& os);
    void write_row(const DiagnosticsRecord& r);

private:
    std::ostream& os_;
};

struct SnapshotData {
    FieldTag tag;
    std::uint32_t dim0 = 0, dim1 = 0;
    std::vector<double> data;
};

void write_snapshot_file(const std::string& path, FieldTag tag, std::uint32_t dim0,
                         std::uint32_t dim1, const std::vector<double>& data);
SnapshotData read_snapshot_file(const std::string& path);

/// One file per field per snapshot time plus a plain-text manifest listing
/// the files, the config hash and the revision string.
class SnapshotWriter {
public:
    SnapshotWriter(std::string dir, std::uint64_t config_hash);

    /// Writes all nine field files for the given step index.
    void write(const Grid& g, long step, const State& s);

    /// Writes the manifest; call once at the end of the run.
    void finalize() const;

private:
    std::string dir_;
    std::uint64_t config_hash_;
    std::vector<std::string> files_;
};

}  // namespace bsf
