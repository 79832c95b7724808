#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsf/config.hpp"
#include "bsf/io.hpp"

using namespace bsf;

namespace {

const char* kMinimal = "[grid]\nnx = 16\nny = 16\n";

RunConfig parse_ok(const std::string& text) {
    RunConfig cfg;
    std::vector<ConfigError> errors;
    const bool ok = parse_config(text, cfg, errors);
    for (const auto& e : errors) MESSAGE("line ", e.line, ": ", e.message);
    REQUIRE(ok);
    return cfg;
}

}  // namespace

TEST_CASE("minimal config fills defaults and echo round-trips") {
    const RunConfig cfg = parse_ok(kMinimal);
    CHECK(cfg.nx == 16);
    CHECK(cfg.variant.params.rho1 == 1.0);
    CHECK(cfg.variant.variant == Variant::FullBulkSurface);

    const std::string echo = serialize_config(cfg);
    const RunConfig cfg2 = parse_ok(echo);
    CHECK(serialize_config(cfg2) == echo);
}

TEST_CASE("empty config is the all-defaults config") {
    const RunConfig cfg = parse_ok("");
    CHECK(cfg.nx == 64);
    CHECK(cfg.variant.dt > 0.0);
}

TEST_CASE("K = inf selects the Neumann case") {
    const RunConfig cfg = parse_ok("[physics]\nK = inf\n");
    CHECK(std::isinf(cfg.variant.params.K));
    CHECK(coupling_case(cfg.variant.params).K_case == CouplingKind::Neumann);
}

TEST_CASE("K = 0 with alpha = 0 is rejected with the constraint named") {
    RunConfig cfg;
    std::vector<ConfigError> errors;
    const bool ok = parse_config("[physics]\nK = 0\nalpha = 0\n", cfg, errors);
    CHECK(!ok);
    bool found = false;
    for (const auto& e : errors)
        if (e.message.find("K=0 requires alpha != 0") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("all errors are reported with line numbers, not just the first") {
    RunConfig cfg;
    std::vector<ConfigError> errors;
    const std::string text =
        "[grid]\n"
        "nx = four\n"           // line 2: not a number
        "bogus_key = 1\n"       // line 3: unknown key
        "[nosuch]\n"
        "x = 1\n"               // line 5: unknown section
        "[physics]\n"
        "rho1 = -2\n";          // range violation (line 0 report)
    CHECK(!parse_config(text, cfg, errors));
    CHECK(errors.size() >= 4);
    bool l2 = false, l3 = false, l5 = false;
    for (const auto& e : errors) {
        if (e.line == 2) l2 = true;
        if (e.line == 3) l3 = true;
        if (e.line == 5) l5 = true;
    }
    CHECK(l2);
    CHECK(l3);
    CHECK(l5);
}

TEST_CASE("parse_config_or_throw carries the error list") {
    CHECK_THROWS_AS(parse_config_or_throw("[grid]\nnx = 2\n"), ConfigParseError);
    try {
        parse_config_or_throw("[grid]\nnx = 2\n");
    } catch (const ConfigParseError& e) {
        CHECK(!e.errors.empty());
    }
}

TEST_CASE("config hash changes iff any byte changes") {
    const std::string a = "[grid]\nnx = 16\n";
    const std::string b = "[grid]\nnx = 17\n";
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a + " ") != config_hash(a));
}

TEST_CASE("CSV header matches the diagnostics field count plus time") {
    std::ostringstream os;
    TimeseriesWriter writer(os);
    DiagnosticsRecord r;
    r.time = 0.5;
    writer.write_row(r);
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const auto count_cols = [](const std::string& line) {
        int n = 1;
        for (char c : line)
            if (c == ',') ++n;
        return n;
    };
    CHECK(count_cols(header) == kDiagnosticsFieldCount + 1);
    CHECK(count_cols(row) == kDiagnosticsFieldCount + 1);
    CHECK(header.substr(0, 5) == "time,");
}

TEST_CASE("CSV keeps full precision") {
    std::ostringstream os;
    TimeseriesWriter writer(os);
    DiagnosticsRecord r;
    r.E_total = 1.0 / 3.0;
    writer.write_row(r);
    CHECK(os.str().find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("snapshot files round-trip bitwise") {
    const auto dir = std::filesystem::temp_directory_path() / "bsf_snap_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "f.bsf").string();

    std::vector<double> data = {1.5, -2.25, 3.0e-17, 4.0, 5.0, 0.1};
    write_snapshot_file(path, FieldTag::Phi, 3, 2, data);
    const SnapshotData back = read_snapshot_file(path);
    CHECK(back.tag == FieldTag::Phi);
    CHECK(back.dim0 == 3);
    CHECK(back.dim1 == 2);
    CHECK(back.data == data);  // bitwise

    // 16-byte header.
    CHECK(std::filesystem::file_size(path) == 16 + data.size() * sizeof(double));
    std::filesystem::remove_all(dir);
}

TEST_CASE("snapshot writer emits all fields and a manifest with the config hash") {
    const auto dir = std::filesystem::temp_directory_path() / "bsf_snapwriter_test";
    std::filesystem::remove_all(dir);

    const Grid g = build_grid(8, 8, 1.0, 1.0);
    State s(g);
    s.ch.phi(1, 1) = 0.5;
    SnapshotWriter writer(dir.string(), 0xabcdef1234567890ull);
    writer.write(g, 3, s);
    writer.finalize();

    const SnapshotData phi = read_snapshot_file((dir / "snap_000003_phi.bsf").string());
    CHECK(phi.data[1 * 8 + 1] == 0.5);
    const SnapshotData uy = read_snapshot_file((dir / "snap_000003_uy.bsf").string());
    CHECK(uy.dim1 == 9);

    std::ifstream mf(dir / "manifest.txt");
    std::stringstream buf;
    buf << mf.rdbuf();
    CHECK(buf.str().find("config_hash abcdef1234567890") != std::string::npos);
    CHECK(buf.str().find("snap_000003_phi.bsf") != std::string::npos);
    CHECK(buf.str().find("revision") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("debug fixture key parses") {
    const RunConfig cfg = parse_ok("[debug]\nflux_imbalance = 0.5\n");
    CHECK(cfg.variant.flux_imbalance == 0.5);
}
