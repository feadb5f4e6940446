#include "eigengrowth/config.hpp"

#include "eigengrowth/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "cli";

struct KindName {
    ScenarioKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::eigen, "eigen"},
    {ScenarioKind::classify, "classify"},
    {ScenarioKind::simulate, "simulate"},
    {ScenarioKind::growth, "growth"},
    {ScenarioKind::numeraire, "numeraire"},
    {ScenarioKind::arbitrage, "arbitrage"},
    {ScenarioKind::verify_example, "verify-example"},
    {ScenarioKind::robustness_sweep, "robustness-sweep"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class Int>
Int parse_integer(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    Int v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(kModule, key + " must be a non-negative integer, got \"" + s + "\"");
    }
    return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(kModule, key + " must be true or false, got \"" + s + "\"");
}

Scheme parse_scheme(const std::string& s) {
    const std::string t = trim(s);
    if (t == "euler") return Scheme::euler;
    if (t == "log_euler") return Scheme::log_euler;
    throw ConfigError(kModule, "sim.scheme must be euler or log_euler, got \"" + s + "\"");
}

void apply(ScenarioConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string full = section + "." + key;
    if (section == "scenario" && key == "kind") {
        cfg.kind = parse_scenario_kind(trim(value));
    } else if (section == "model") {
        if (key == "example") {
            cfg.example = trim(value);
        } else if (key == "c") {
            cfg.c_expr = trim(value);
        } else if (key == "alpha") {
            cfg.alpha = parse_number(value, full);
        } else if (key == "beta") {
            cfg.beta = parse_number(value, full);
        } else if (key == "x0") {
            cfg.x0 = parse_number_list(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "sim") {
        SimConfig& s = cfg.sim;
        if (key == "horizon") {
            s.T = parse_number(value, full);
        } else if (key == "dt") {
            s.dt = parse_number(value, full);
        } else if (key == "n_paths") {
            s.n_paths = parse_integer<std::size_t>(value, full);
        } else if (key == "seed") {
            s.seed = parse_integer<std::uint64_t>(value, full);
        } else if (key == "absorb_level") {
            s.absorb_level = parse_integer<int>(value, full);
            cfg.absorb_level_from_file = true;
        } else if (key == "max_refine") {
            s.max_refine = parse_integer<int>(value, full);
        } else if (key == "record_every") {
            s.record_every = parse_integer<std::size_t>(value, full);
        } else if (key == "track_levels") {
            s.track_levels = parse_bool(value, full);
        } else if (key == "threads") {
            s.threads = parse_integer<std::size_t>(value, full);
            cfg.threads_from_file = true;
        } else if (key == "outer_radius") {
            s.outer_radius = parse_number(value, full);
        } else if (key == "scheme") {
            s.scheme = parse_scheme(value);
        } else if (key == "measure") {
            cfg.measure = trim(value);
        } else if (key == "identity") {
            cfg.identity = parse_bool(value, full);
        } else if (key == "tail_times") {
            cfg.tail_times = parse_number_list(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "solver") {
        if (key == "tol") {
            cfg.solver.tol = parse_number(value, full);
        } else if (key == "grid_size") {
            cfg.solver.grid_size = parse_integer<std::size_t>(value, full);
        } else if (key == "epsilons") {
            cfg.solver.epsilons = parse_number_list(value, full);
        } else if (key == "residual_gate") {
            cfg.residual_gate = parse_number(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "growth") {
        if (key == "gamma_lo") {
            cfg.gamma_lo = parse_number(value, full);
        } else if (key == "gamma_hi") {
            cfg.gamma_hi = parse_number(value, full);
        } else if (key == "gamma_step") {
            cfg.gamma_step = parse_number(value, full);
        } else if (key == "tolerance") {
            cfg.growth_tolerance = parse_number(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "numeraire") {
        if (key == "candidates") {
            cfg.candidates = split(value, ',');
        } else if (key == "checkpoints") {
            cfg.checkpoints = parse_integer<std::size_t>(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "arbitrage") {
        if (key == "t") {
            cfg.arbitrage_t = parse_number(value, full);
        } else if (key == "horizons") {
            cfg.arbitrage_horizons = parse_number_list(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "sweep") {
        if (key == "drifts") {
            cfg.drifts = split(value, ';');
        } else if (key == "include_pstar") {
            cfg.include_pstar = parse_bool(value, full);
        } else if (key == "compact_level") {
            cfg.compact_level = parse_integer<int>(value, full);
        } else if (key == "tightness_threshold") {
            cfg.tightness_threshold = parse_number(value, full);
        } else {
            throw ConfigError(kModule, "unknown key " + full);
        }
    } else if (section == "output" && key == "dir") {
        cfg.out_dir = trim(value);
    } else {
        throw ConfigError(kModule, "unknown key " + full);
    }
}

}  // namespace

std::string to_string(ScenarioKind k) {
    for (const KindName& n : kKinds) {
        if (n.kind == k) return n.name;
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& s) {
    std::string known;
    for (const KindName& n : kKinds) {
        if (s == n.name) return n.kind;
        known += known.empty() ? "" : ", ";
        known += n.name;
    }
    throw ConfigError(kModule, "unknown scenario kind \"" + s + "\"; known kinds: " + known);
}

double parse_number(const std::string& s, const std::string& key) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(kModule, key + " must be a number, got \"" + s + "\"");
    }
    return v;
}

std::vector<double> parse_number_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) out.push_back(parse_number(item, key));
    if (out.empty()) throw ConfigError(kModule, key + " must list at least one number");
    return out;
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(kModule, std::string("config syntax: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError(kModule, "key " + section + " must live inside a [section]");
        }
        for (const auto& [key, value] : body) apply(base, section, key, value.data());
    }
    return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(kModule, "cannot open config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::optional<std::size_t> threads_from_env() {
    const char* v = std::getenv("ROBUST_GROWTH_THREADS");
    if (v == nullptr || *v == '\0') return std::nullopt;
    const auto n = parse_integer<std::size_t>(v, "ROBUST_GROWTH_THREADS");
    if (n < 1) throw ConfigError(kModule, "ROBUST_GROWTH_THREADS must be >= 1");
    return n;
}

void ScenarioConfig::validate() const {
    if (kind == ScenarioKind::verify_example && example.empty()) {
        throw ConfigError(kModule, "verify-example needs a registry name (model.example)");
    }
    if (kind != ScenarioKind::arbitrage && example.empty() == c_expr.empty()) {
        throw ConfigError(kModule, "exactly one of model.example and model.c must be set");
    }
    if (!c_expr.empty()) {
        if (!alpha || !beta) throw ConfigError(kModule, "model.c needs model.alpha and model.beta");
        if (!(*alpha < *beta)) throw PreconditionError("model", "interval needs alpha < beta");
        if (!std::isfinite(*alpha)) throw PreconditionError("model", "alpha must be finite");
        if (x0.size() > 1) throw ConfigError(kModule, "model.x0 must be a single number for model.c");
    }
    sim.validate();
    if (measure != "q" && measure != "pstar") {
        throw ConfigError(kModule, "sim.measure must be q or pstar, got \"" + measure + "\"");
    }
    for (double t : tail_times) {
        if (!(t > 0.0)) throw PreconditionError("sde", "tail_times must be > 0");
    }
    if (!(solver.tol > 0.0)) throw PreconditionError("eigen1d", "solver tol must be > 0");
    if (solver.grid_size < 16) throw PreconditionError("eigen1d", "grid_size must be >= 16");
    for (std::size_t i = 0; i < solver.epsilons.size(); ++i) {
        if (!(solver.epsilons[i] > 0.0) || (i > 0 && !(solver.epsilons[i] < solver.epsilons[i - 1]))) {
            throw PreconditionError("eigen1d", "epsilons must be positive and strictly decreasing");
        }
    }
    if (!(residual_gate > 0.0)) throw PreconditionError("closedform", "residual_gate must be > 0");
    if (!(gamma_step > 0.0)) throw PreconditionError("growth", "gamma_step must be > 0");
    if (gamma_lo && gamma_hi && !(*gamma_lo <= *gamma_hi)) {
        throw PreconditionError("growth", "gamma_lo must be <= gamma_hi");
    }
    if (!(growth_tolerance > 0.0)) throw PreconditionError("growth", "tolerance must be > 0");
    if (checkpoints < 2) throw PreconditionError("growth", "checkpoints must be >= 2");
    if (candidates.empty()) throw ConfigError(kModule, "numeraire.candidates must not be empty");
    for (const std::string& c : candidates) {
        if (c != "zero" && c != "half" && c != "eigen") {
            throw ConfigError(kModule, "unknown numeraire candidate \"" + c +
                                           "\"; known candidates: zero, half, eigen");
        }
    }
    if (!(arbitrage_t > 0.0)) throw PreconditionError("growth", "arbitrage t must be > 0");
    if (arbitrage_horizons.empty()) throw PreconditionError("growth", "arbitrage horizons must not be empty");
    for (double T : arbitrage_horizons) {
        if (!(T > arbitrage_t)) throw PreconditionError("growth", "every arbitrage horizon must exceed t");
    }
    if (compact_level < 0) throw PreconditionError("growth", "compact_level must be >= 0");
    if (!(tightness_threshold > 0.0 && tightness_threshold <= 1.0)) {
        throw PreconditionError("growth", "tightness_threshold must lie in (0, 1]");
    }
}

}  // namespace eigengrowth
