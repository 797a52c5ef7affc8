#include "origami/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace origami {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    if (!obj[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& where,
                     const std::string& key, double fallback) {
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

int get_int(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    if (!obj[key].is_number_integer())
        throw ConfigError(where + "." + key + ": expected an integer");
    return obj[key].get<int>();
}

int get_int_or(const json& obj, const std::string& where, const std::string& key,
               int fallback) {
    return obj.contains(key) ? get_int(obj, where, key) : fallback;
}

int parse_sigma(const json& obj, const std::string& where) {
    if (!obj.contains("sigma")) throw ConfigError(where + ": missing 'sigma'");
    const auto& v = obj["sigma"];
    if (!v.is_string())
        throw ConfigError(where + ".sigma: expected \"M\" or \"V\"");
    const std::string s = v.get<std::string>();
    if (s == "M") return 1;
    if (s == "V") return -1;
    throw ConfigError(where + ".sigma: expected \"M\" or \"V\", got \"" + s + "\"");
}

ModuleSpec parse_module(const json& j) {
    require_keys(j, "module", {"N", "steps", "wiring", "s", "mu"});

    ModuleSpec spec;
    if (!j.contains("N")) throw ConfigError("module: missing 'N'");
    if (j["N"].is_string()) {
        if (j["N"].get<std::string>() != "infinite")
            throw ConfigError("module.N: expected an integer or \"infinite\"");
        spec.N = ModuleCount::infinite();
    } else if (j["N"].is_number_integer()) {
        const long n = j["N"].get<long>();
        if (n <= 2) throw ConfigError("module.N: must exceed 2");
        spec.N = ModuleCount::finite(n);
    } else {
        throw ConfigError("module.N: expected an integer or \"infinite\"");
    }

    if (!j.contains("steps") || !j["steps"].is_array() || j["steps"].empty())
        throw ConfigError("module.steps: expected a nonempty array");

    bool explicit_k = false;
    int idx = 0;
    for (const auto& js : j["steps"]) {
        const std::string where = "module.steps[" + std::to_string(idx++) + "]";
        require_keys(js, where, {"l_L", "l_M", "l_R", "sigma", "k", "swap"});
        StepSpec st;
        st.l_L = get_number(js, where, "l_L");
        st.l_M = get_number(js, where, "l_M");
        st.l_R = get_number(js, where, "l_R");
        if (st.l_L <= 0 || st.l_M <= 0 || st.l_R <= 0)
            throw ConfigError(where + ": lengths must be positive");
        st.sigma = parse_sigma(js, where);
        if (js.contains("k")) {
            explicit_k = true;
            st.k = get_int(js, where, "k");
            if (st.k != 0 && st.k != 1)
                throw ConfigError(where + ".k: must be 0 or 1");
        }
        if (js.contains("swap")) {
            explicit_k = true;
            if (!js["swap"].is_boolean())
                throw ConfigError(where + ".swap: expected a boolean");
            st.swap_lr = js["swap"].get<bool>();
        }
        spec.steps.push_back(st);
    }

    if (j.contains("wiring")) {
        if (explicit_k)
            throw ConfigError("module.wiring: exclusive with per-step k/swap");
        if (!j["wiring"].is_string())
            throw ConfigError("module.wiring: expected \"A\" or \"B\"");
        const std::string w = j["wiring"].get<std::string>();
        if (w == "A") {
            // all k = 0, no swaps: nothing to do
        } else if (w == "B") {
            if (spec.steps.size() % 2 != 0)
                throw ConfigError("module.wiring: \"B\" needs an even step count");
            for (size_t i = 0; i < spec.steps.size(); ++i) {
                spec.steps[i].k = (i % 2 == 0) ? 1 : 0;
                spec.steps[i].swap_lr = (i % 2 == 1);
            }
        } else {
            throw ConfigError("module.wiring: expected \"A\" or \"B\"");
        }
    }

    spec.s = get_number_or(j, "module", "s", 1.0);
    spec.mu = get_number_or(j, "module", "mu", 0.0);
    if (spec.s <= 0.0) throw ConfigError("module.s: must be positive");

    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("module: ") + e.what());
    }
    return spec;
}

GridSpec parse_grid(const json& j, const std::string& where) {
    require_keys(j, where,
                 {"theta_lo", "theta_hi", "n_theta", "I_lo", "I_hi", "n_I"});
    GridSpec g;
    g.theta_lo = get_number_or(j, where, "theta_lo", -M_PI);
    g.theta_hi = get_number_or(j, where, "theta_hi", M_PI);
    g.n_theta = get_int(j, where, "n_theta");
    g.I_lo = get_number(j, where, "I_lo");
    g.I_hi = get_number(j, where, "I_hi");
    g.n_I = get_int(j, where, "n_I");
    if (g.n_theta < 1 || g.n_I < 1)
        throw ConfigError(where + ": grid counts must be at least 1");
    return g;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }

    require_keys(j, "(root)",
                 {"module", "freq_profile", "portrait", "orbit", "genfun_check",
                  "attractor", "reconstruct", "validate"});
    if (!j.contains("module")) throw ConfigError("(root): missing 'module'");

    ExperimentConfig cfg;
    cfg.module = parse_module(j["module"]);
    cfg.hash = fnv1a_hex(text);

    if (j.contains("freq_profile")) {
        const auto& b = j["freq_profile"];
        require_keys(b, "freq_profile", {"I_lo", "I_hi", "n_samples", "n_seed"});
        FreqProfileConfig c;
        c.I_lo = get_number(b, "freq_profile", "I_lo");
        c.I_hi = get_number(b, "freq_profile", "I_hi");
        c.n_samples = get_int_or(b, "freq_profile", "n_samples", 1000);
        c.n_seed = get_int_or(b, "freq_profile", "n_seed", 2000);
        if (c.I_lo >= c.I_hi)
            throw ConfigError("freq_profile: need I_lo < I_hi");
        cfg.freq_profile = c;
    }
    if (j.contains("portrait")) {
        const auto& b = j["portrait"];
        require_keys(b, "portrait", {"grid", "steps_per_orbit"});
        if (!b.contains("grid")) throw ConfigError("portrait: missing 'grid'");
        PortraitConfig c;
        c.grid = parse_grid(b["grid"], "portrait.grid");
        c.steps_per_orbit = get_int_or(b, "portrait", "steps_per_orbit", 1000);
        cfg.portrait = c;
    }
    if (j.contains("orbit")) {
        const auto& b = j["orbit"];
        require_keys(b, "orbit", {"theta0", "I0", "max_steps"});
        OrbitConfig c;
        c.theta0 = get_number(b, "orbit", "theta0");
        c.I0 = get_number(b, "orbit", "I0");
        c.max_steps = get_int_or(b, "orbit", "max_steps", 1000);
        cfg.orbit = c;
    }
    if (j.contains("genfun_check")) {
        const auto& b = j["genfun_check"];
        require_keys(b, "genfun_check", {"step", "I_lo", "I_hi", "n_samples"});
        GenFunCheckConfig c;
        c.step = get_int_or(b, "genfun_check", "step", 0);
        c.I_lo = get_number(b, "genfun_check", "I_lo");
        c.I_hi = get_number(b, "genfun_check", "I_hi");
        c.n_samples = get_int_or(b, "genfun_check", "n_samples", 20);
        if (c.step < 0 || c.step >= cfg.module.step_count())
            throw ConfigError("genfun_check.step: out of range");
        cfg.genfun_check = c;
    }
    if (j.contains("attractor")) {
        const auto& b = j["attractor"];
        require_keys(b, "attractor",
                     {"grid", "max_steps", "burn_in", "singular_floor"});
        if (!b.contains("grid")) throw ConfigError("attractor: missing 'grid'");
        AttractorConfig c;
        c.grid = parse_grid(b["grid"], "attractor.grid");
        c.max_steps = get_int_or(b, "attractor", "max_steps", 2000);
        c.burn_in = get_int_or(b, "attractor", "burn_in", 1000);
        c.singular_floor = get_number_or(b, "attractor", "singular_floor", 1e-4);
        cfg.attractor = c;
    }
    if (j.contains("reconstruct")) {
        const auto& b = j["reconstruct"];
        require_keys(b, "reconstruct", {"theta0", "I0", "n_rings"});
        ReconstructConfig c;
        c.theta0 = get_number(b, "reconstruct", "theta0");
        c.I0 = get_number(b, "reconstruct", "I0");
        c.n_rings = get_int_or(b, "reconstruct", "n_rings", 3);
        cfg.reconstruct = c;
    }
    if (j.contains("validate")) {
        const auto& b = j["validate"];
        require_keys(b, "validate", {"n_points"});
        ValidateConfig c;
        c.n_points = get_int_or(b, "validate", "n_points", 1000);
        cfg.validate = c;
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace origami
