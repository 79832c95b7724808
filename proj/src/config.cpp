#include "bsf/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace bsf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct Parser {
    RunConfig cfg;
    std::vector<ConfigError>* errors;

    void error(int line, const std::string& msg) { errors->push_back({line, msg}); }

    bool as_double(int line, const std::string& key, const std::string& v, double& out,
                   bool allow_inf = false) {
        if (allow_inf && (v == "inf" || v == "Inf" || v == "INF")) {
            out = kInf;
            return true;
        }
        try {
            std::size_t pos = 0;
            out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            error(line, key + ": expected a number, got '" + v + "'");
            return false;
        }
    }

    bool as_long(int line, const std::string& key, const std::string& v, long& out) {
        try {
            std::size_t pos = 0;
            out = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            error(line, key + ": expected an integer, got '" + v + "'");
            return false;
        }
    }

    bool as_int(int line, const std::string& key, const std::string& v, int& out) {
        long l;
        if (!as_long(line, key, v, l)) return false;
        out = static_cast<int>(l);
        return true;
    }

    bool potential_kind(int line, const std::string& key, const std::string& v,
                        PotentialKind& out) {
        if (v == "polynomial") {
            out = PotentialKind::PolynomialDoubleWell;
            return true;
        }
        if (v == "flory_huggins") {
            out = PotentialKind::FloryHuggins;
            return true;
        }
        error(line, key + ": expected 'polynomial' or 'flory_huggins', got '" + v + "'");
        return false;
    }

    void handle(int line, const std::string& section, const std::string& key,
                const std::string& value) {
        auto& p = cfg.variant.params;
        if (section == "grid") {
            if (key == "nx") as_int(line, key, value, cfg.nx);
            else if (key == "ny") as_int(line, key, value, cfg.ny);
            else if (key == "Lx") as_double(line, key, value, cfg.Lx);
            else if (key == "Ly") as_double(line, key, value, cfg.Ly);
            else error(line, "unknown key [grid] " + key);
        } else if (section == "physics") {
            if (key == "rho1") as_double(line, key, value, p.rho1);
            else if (key == "rho2") as_double(line, key, value, p.rho2);
            else if (key == "nu1") as_double(line, key, value, p.nu1);
            else if (key == "nu2") as_double(line, key, value, p.nu2);
            else if (key == "m_bulk") as_double(line, key, value, p.mob_bulk);
            else if (key == "m_surf") as_double(line, key, value, p.mob_surf);
            else if (key == "eps") as_double(line, key, value, p.eps);
            else if (key == "delta") as_double(line, key, value, p.delta);
            else if (key == "alpha") as_double(line, key, value, p.alpha);
            else if (key == "beta") as_double(line, key, value, p.beta);
            else if (key == "K") as_double(line, key, value, p.K, true);
            else if (key == "L") as_double(line, key, value, p.L, true);
            else if (key == "gamma_tau") as_double(line, key, value, p.gamma_tau);
            else error(line, "unknown key [physics] " + key);
        } else if (section == "potentials") {
            auto& f = cfg.variant.pot_f;
            auto& gg = cfg.variant.pot_g;
            if (key == "F_kind") potential_kind(line, key, value, f.kind);
            else if (key == "G_kind") potential_kind(line, key, value, gg.kind);
            else if (key == "theta") {
                double v;
                if (as_double(line, key, value, v)) f.theta = gg.theta = v;
            } else if (key == "theta_c") {
                double v;
                if (as_double(line, key, value, v)) f.theta_c = gg.theta_c = v;
            } else if (key == "sigma_reg") {
                double v;
                if (as_double(line, key, value, v)) f.sigma_reg = gg.sigma_reg = v;
            } else if (key == "F_tilt") as_double(line, key, value, f.tilt);
            else if (key == "G_tilt") as_double(line, key, value, gg.tilt);
            else error(line, "unknown key [potentials] " + key);
        } else if (section == "time") {
            if (key == "dt") as_double(line, key, value, cfg.variant.dt);
            else if (key == "t_end") as_double(line, key, value, cfg.t_end);
            else if (key == "diag_every") {
                int v;
                if (as_int(line, key, value, v)) cfg.variant.diag_every = v;
            } else error(line, "unknown key [time] " + key);
        } else if (section == "ic") {
            if (key == "kind") {
                if (value == "droplet_on_wall") cfg.ic.kind = IcKind::DropletOnWall;
                else if (value == "stratified") cfg.ic.kind = IcKind::Stratified;
                else if (value == "random_smooth") cfg.ic.kind = IcKind::RandomSmooth;
                else error(line, "kind: expected droplet_on_wall|stratified|random_smooth");
            } else if (key == "radius") as_double(line, key, value, cfg.ic.radius);
            else if (key == "interface_y") as_double(line, key, value, cfg.ic.interface_y);
            else if (key == "amplitude") as_double(line, key, value, cfg.ic.amplitude);
            else if (key == "mean") as_double(line, key, value, cfg.ic.mean);
            else if (key == "seed") {
                long v;
                if (as_long(line, key, value, v)) cfg.ic.seed = static_cast<unsigned long>(v);
            } else if (key == "modes") as_int(line, key, value, cfg.ic.modes);
            else error(line, "unknown key [ic] " + key);
        } else if (section == "output") {
            if (key == "dir") cfg.output_dir = value;
            else if (key == "snapshot_every") as_long(line, key, value, cfg.snapshot_every);
            else error(line, "unknown key [output] " + key);
        } else if (section == "variant") {
            if (key == "name") {
                if (value == "full_bulk_surface") cfg.variant.variant = Variant::FullBulkSurface;
                else if (value == "neumann_agg") cfg.variant.variant = Variant::NeumannAGG;
                else if (value == "nonconvective_ch") cfg.variant.variant = Variant::NonconvectiveCH;
                else error(line, "name: expected full_bulk_surface|neumann_agg|nonconvective_ch");
            } else error(line, "unknown key [variant] " + key);
        } else if (section == "debug") {
            if (key == "flux_imbalance") as_double(line, key, value, cfg.variant.flux_imbalance);
            else error(line, "unknown key [debug] " + key);
        } else {
            error(line, "unknown section [" + section + "]");
        }
    }
};

void validate(const RunConfig& cfg, std::vector<ConfigError>& errors) {
    auto err = [&](const std::string& m) { errors.push_back({0, m}); };
    const auto& p = cfg.variant.params;
    if (cfg.nx < 8 || cfg.ny < 8) err("grid: nx and ny must be >= 8");
    if (!(cfg.Lx > 0.0) || !(cfg.Ly > 0.0)) err("grid: Lx and Ly must be positive");
    if (!(p.rho1 > 0.0) || !(p.rho2 > 0.0)) err("physics: densities must be positive");
    if (!(p.nu1 > 0.0) || !(p.nu2 > 0.0)) err("physics: viscosities must be positive");
    if (p.mob_bulk < 0.0 || p.mob_surf < 0.0) err("physics: mobilities must be nonnegative");
    if (!(p.eps > 0.0) || !(p.delta > 0.0)) err("physics: eps and delta must be positive");
    if (p.gamma_tau < 0.0) err("physics: gamma_tau must be nonnegative");
    if (p.K < 0.0 || std::isnan(p.K)) err("physics: K must lie in [0, inf]");
    if (p.L < 0.0 || std::isnan(p.L)) err("physics: L must lie in [0, inf]");
    if (p.K == 0.0 && p.alpha == 0.0) err("physics: K=0 requires alpha != 0");
    for (const PotentialSpec* ps : {&cfg.variant.pot_f, &cfg.variant.pot_g}) {
        if (ps->kind == PotentialKind::FloryHuggins) {
            if (!(ps->theta > 0.0) || !(ps->theta < ps->theta_c))
                err("potentials: Flory-Huggins requires 0 < theta < theta_c");
            if (!(ps->sigma_reg > 0.0) || !(ps->sigma_reg < 0.1))
                err("potentials: sigma_reg must lie in (0, 0.1)");
        }
    }
    if (!(cfg.variant.dt > 0.0)) err("time: dt must be positive");
    if (cfg.t_end < 0.0) err("time: t_end must be nonnegative");
    if (cfg.variant.diag_every < 1) err("time: diag_every must be >= 1");
    if (cfg.ic.kind == IcKind::DropletOnWall) {
        if (!(cfg.ic.radius > 0.0) || cfg.ic.radius >= cfg.Ly || 2.0 * cfg.ic.radius >= cfg.Lx)
            err("ic: droplet radius exceeds the domain");
    }
    if (cfg.ic.modes < 1) err("ic: modes must be >= 1");
    if (cfg.snapshot_every < 0) err("output: snapshot_every must be nonnegative");
}

std::string format_double(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ConfigParseError::ConfigParseError(std::vector<ConfigError> errs)
    : std::runtime_error([&errs] {
          std::ostringstream os;
          os << "config error";
          for (const auto& e : errs) {
              os << "\n  ";
              if (e.line > 0) os << "line " << e.line << ": ";
              os << e.message;
          }
          return os.str();
      }()),
      errors(std::move(errs)) {}

bool parse_config(const std::string& text, RunConfig& out, std::vector<ConfigError>& errors) {
    Parser parser;
    parser.errors = &errors;
    parser.cfg.source_hash = config_hash(text);

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                parser.error(line_no, "malformed section header: " + line);
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            parser.error(line_no, "expected key = value, got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            parser.error(line_no, "key '" + key + "' outside of any section");
            continue;
        }
        if (key.empty() || value.empty()) {
            parser.error(line_no, "empty key or value");
            continue;
        }
        parser.handle(line_no, section, key, value);
    }
    validate(parser.cfg, errors);
    if (!errors.empty()) return false;
    out = parser.cfg;
    return true;
}

RunConfig parse_config_or_throw(const std::string& text) {
    RunConfig cfg;
    std::vector<ConfigError> errors;
    if (!parse_config(text, cfg, errors)) throw ConfigParseError(std::move(errors));
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    const auto& p = cfg.variant.params;
    std::ostringstream os;
    os << "[grid]\n";
    os << "nx = " << cfg.nx << "\n";
    os << "ny = " << cfg.ny << "\n";
    os << "Lx = " << format_double(cfg.Lx) << "\n";
    os << "Ly = " << format_double(cfg.Ly) << "\n";
    os << "\n[physics]\n";
    os << "rho1 = " << format_double(p.rho1) << "\n";
    os << "rho2 = " << format_double(p.rho2) << "\n";
    os << "nu1 = " << format_double(p.nu1) << "\n";
    os << "nu2 = " << format_double(p.nu2) << "\n";
    os << "m_bulk = " << format_double(p.mob_bulk) << "\n";
    os << "m_surf = " << format_double(p.mob_surf) << "\n";
    os << "eps = " << format_double(p.eps) << "\n";
    os << "delta = " << format_double(p.delta) << "\n";
    os << "alpha = " << format_double(p.alpha) << "\n";
    os << "beta = " << format_double(p.beta) << "\n";
    os << "K = " << format_double(p.K) << "\n";
    os << "L = " << format_double(p.L) << "\n";
    os << "gamma_tau = " << format_double(p.gamma_tau) << "\n";
    os << "\n[potentials]\n";
    os << "F_kind = " << to_string(cfg.variant.pot_f.kind) << "\n";
    os << "G_kind = " << to_string(cfg.variant.pot_g.kind) << "\n";
    os << "theta = " << format_double(cfg.variant.pot_f.theta) << "\n";
    os << "theta_c = " << format_double(cfg.variant.pot_f.theta_c) << "\n";
    os << "sigma_reg = " << format_double(cfg.variant.pot_f.sigma_reg) << "\n";
    os << "F_tilt = " << format_double(cfg.variant.pot_f.tilt) << "\n";
    os << "G_tilt = " << format_double(cfg.variant.pot_g.tilt) << "\n";
    os << "\n[time]\n";
    os << "dt = " << format_double(cfg.variant.dt) << "\n";
    os << "t_end = " << format_double(cfg.t_end) << "\n";
    os << "diag_every = " << cfg.variant.diag_every << "\n";
    os << "\n[ic]\n";
    os << "kind = " << to_string(cfg.ic.kind) << "\n";
    os << "radius = " << format_double(cfg.ic.radius) << "\n";
    os << "interface_y = " << format_double(cfg.ic.interface_y) << "\n";
    os << "amplitude = " << format_double(cfg.ic.amplitude) << "\n";
    os << "mean = " << format_double(cfg.ic.mean) << "\n";
    os << "seed = " << cfg.ic.seed << "\n";
    os << "modes = " << cfg.ic.modes << "\n";
    os << "\n[output]\n";
    os << "dir = " << cfg.output_dir << "\n";
    os << "snapshot_every = " << cfg.snapshot_every << "\n";
    os << "\n[variant]\n";
    os << "name = " << to_string(cfg.variant.variant) << "\n";
    if (cfg.variant.flux_imbalance != 0.0) {
        os << "\n[debug]\n";
        os << "flux_imbalance = " << format_double(cfg.variant.flux_imbalance) << "\n";
    }
    return os.str();
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::FullBulkSurface: return "full_bulk_surface";
        case Variant::NeumannAGG: return "neumann_agg";
        case Variant::NonconvectiveCH: return "nonconvective_ch";
    }
    return "?";
}

const char* to_string(IcKind k) {
    switch (k) {
        case IcKind::DropletOnWall: return "droplet_on_wall";
        case IcKind::Stratified: return "stratified";
        case IcKind::RandomSmooth: return "random_smooth";
    }
    return "?";
}

const char* to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::PolynomialDoubleWell: return "polynomial";
        case PotentialKind::FloryHuggins: return "flory_huggins";
    }
    return "?";
}

}  // namespace bsf
