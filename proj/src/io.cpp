#include "bsf/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bsf {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const char* field_name(FieldTag t) {
    switch (t) {
        case FieldTag::Phi: return "phi";
        case FieldTag::Mu: return "mu";
        case FieldTag::P: return "p";
        case FieldTag::Ux: return "ux";
        case FieldTag::Uy: return "uy";
        case FieldTag::PsiBottom: return "psi_bottom";
        case FieldTag::PsiTop: return "psi_top";
        case FieldTag::ThetaBottom: return "theta_bottom";
        case FieldTag::ThetaTop: return "theta_top";
    }
    return "?";
}

TimeseriesWriter::TimeseriesWriter(std::ostream& os) : os_(os) {
    os_ << "time";
    for (const char* name : kDiagnosticsFieldNames) os_ << "," << name;
    os_ << "\n";
}

void TimeseriesWriter::write_row(const DiagnosticsRecord& r) {
    os_ << fmt17(r.time);
    const double values[kDiagnosticsFieldCount] = {
        r.E_total,   r.E_kinetic, r.E_bulk_GL,   r.E_surf_GL, r.E_penalty,       r.D_visc,
        r.D_slip,    r.D_bulk_mob, r.D_surf_mob, r.D_robin,   r.M_bulk,          r.M_surf,
        r.M_combined, r.R_div,    r.R_sdiv,      r.R_form,    r.contact_angle_deg,
        r.band_violation};
    for (double v : values) os_ << "," << fmt17(v);
    os_ << "\n";
}

void write_snapshot_file(const std::string& path, FieldTag tag, std::uint32_t dim0,
                         std::uint32_t dim1, const std::vector<double>& data) {
    if (data.size() != static_cast<std::size_t>(dim0) * dim1)
        throw std::invalid_argument("write_snapshot_file: dims do not match data size");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot_file: cannot open " + path);
    os.write("BSF1", 4);
    put_u32(os, dim0);
    put_u32(os, dim1);
    put_u32(os, static_cast<std::uint32_t>(tag));
    // Little-endian host assumed (x86-64 / aarch64 little-endian builds).
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_snapshot_file: write failed for " + path);
}

SnapshotData read_snapshot_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot_file: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "BSF1", 4) != 0)
        throw std::runtime_error("read_snapshot_file: bad magic in " + path);
    SnapshotData out;
    out.dim0 = get_u32(is);
    out.dim1 = get_u32(is);
    out.tag = static_cast<FieldTag>(get_u32(is));
    out.data.resize(static_cast<std::size_t>(out.dim0) * out.dim1);
    is.read(reinterpret_cast<char*>(out.data.data()),
            static_cast<std::streamsize>(out.data.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_snapshot_file: truncated file " + path);
    return out;
}

SnapshotWriter::SnapshotWriter(std::string dir, std::uint64_t config_hash)
    : dir_(std::move(dir)), config_hash_(config_hash) {
    std::filesystem::create_directories(dir_);
}

void SnapshotWriter::write(const Grid& g, long step, const State& s) {
    const auto nx = static_cast<std::uint32_t>(g.nx);
    const auto ny = static_cast<std::uint32_t>(g.ny);
    char prefix[32];
    std::snprintf(prefix, sizeof(prefix), "snap_%06ld_", step);

    auto emit = [&](FieldTag tag, std::uint32_t d0, std::uint32_t d1,
                    const std::vector<double>& data) {
        const std::string name = std::string(prefix) + field_name(tag) + ".bsf";
        write_snapshot_file(dir_ + "/" + name, tag, d0, d1, data);
        files_.push_back(name);
    };
    emit(FieldTag::Phi, nx, ny, s.ch.phi.data);
    emit(FieldTag::Mu, nx, ny, s.ch.mu.data);
    emit(FieldTag::P, nx, ny, s.flow.p.data);
    emit(FieldTag::Ux, nx, ny, s.flow.u.u);
    emit(FieldTag::Uy, nx, ny + 1, s.flow.u.v);
    emit(FieldTag::PsiBottom, nx, 1, s.ch.psi[0].data);
    emit(FieldTag::PsiTop, nx, 1, s.ch.psi[1].data);
    emit(FieldTag::ThetaBottom, nx, 1, s.ch.theta[0].data);
    emit(FieldTag::ThetaTop, nx, 1, s.ch.theta[1].data);
}

void SnapshotWriter::finalize() const {
    std::ofstream os(dir_ + "/manifest.txt");
    if (!os) throw std::runtime_error("SnapshotWriter: cannot write manifest in " + dir_);
    os << "revision " << kRevision << "\n";
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << config_hash_;
    os << "config_hash " << hash.str() << "\n";
    for (const auto& f : files_) os << "file " << f << "\n";
}

}  // namespace bsf
