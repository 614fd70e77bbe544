#include "psys/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace psys {

namespace {

std::string format_issues(const char* kind, const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << kind << " (" << issues.size() << " problem" << (issues.size() == 1 ? "" : "s") << "):";
    for (const auto& is : issues) {
        os << "\n  ";
        if (is.line > 0) os << "line " << is.line << ": ";
        if (!is.field.empty()) os << is.field << ": ";
        os << is.message;
    }
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct KeyBinding {
    std::function<bool(RunConfig&, const std::string&)> set; ///< false: bad value
};

bool read_double(const std::string& v, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool read_int(const std::string& v, int& out) {
    try {
        size_t pos = 0;
        out = std::stoi(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool read_u64(const std::string& v, std::uint64_t& out) {
    try {
        size_t pos = 0;
        out = std::stoull(v, &pos);
        return pos == v.size();
    } catch (...) {
        return false;
    }
}

bool read_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") { out = true; return true; }
    if (v == "false" || v == "0" || v == "no" || v == "off") { out = false; return true; }
    return false;
}

using Schema = std::map<std::string, std::map<std::string, KeyBinding>>;

const Schema& schema() {
    static const Schema s = [] {
        Schema m;
        const auto dbl = [](double RunConfig::* field) {
            return KeyBinding{[field](RunConfig& c, const std::string& v) {
                return read_double(v, c.*field);
            }};
        };
        const auto intg = [](int RunConfig::* field) {
            return KeyBinding{[field](RunConfig& c, const std::string& v) {
                return read_int(v, c.*field);
            }};
        };
        const auto str = [](std::string RunConfig::* field) {
            return KeyBinding{[field](RunConfig& c, const std::string& v) {
                c.*field = v;
                return true;
            }};
        };
        m["model"]["name"] = str(&RunConfig::model_name);

        m["initial"]["family"] = str(&RunConfig::family);
        m["initial"]["u_base"] = dbl(&RunConfig::u_base);
        m["initial"]["u_amplitude"] = dbl(&RunConfig::u_amplitude);
        m["initial"]["u_mode"] = intg(&RunConfig::u_mode);
        m["initial"]["u_phase"] = dbl(&RunConfig::u_phase);
        m["initial"]["v_base"] = dbl(&RunConfig::v_base);
        m["initial"]["v_amplitude"] = dbl(&RunConfig::v_amplitude);
        m["initial"]["v_mode"] = intg(&RunConfig::v_mode);
        m["initial"]["v_phase"] = dbl(&RunConfig::v_phase);
        m["initial"]["path"] = str(&RunConfig::initial_path);

        m["grid"]["n_x"] = intg(&RunConfig::n_x);
        m["grid"]["t_max"] = dbl(&RunConfig::t_max);
        m["grid"]["cfl"] = dbl(&RunConfig::cfl);
        m["grid"]["filter"] = str(&RunConfig::filter);
        m["grid"]["filter_order"] = intg(&RunConfig::filter_order);
        m["grid"]["filter_cutoff"] = dbl(&RunConfig::filter_cutoff);
        m["grid"]["frame_stride"] = intg(&RunConfig::frame_stride);
        m["grid"]["dump_stride"] = intg(&RunConfig::dump_stride);

        m["run"]["winding_c"] = dbl(&RunConfig::winding_c);
        m["run"]["stop_on_mixed"] = KeyBinding{[](RunConfig& c, const std::string& v) {
            return read_bool(v, c.stop_on_mixed);
        }};
        m["run"]["grad_max"] = dbl(&RunConfig::grad_max);
        m["run"]["tail_max"] = dbl(&RunConfig::tail_max);
        m["run"]["res_max"] = dbl(&RunConfig::res_max);
        m["run"]["seed"] = KeyBinding{[](RunConfig& c, const std::string& v) {
            return read_u64(v, c.seed);
        }};

        m["diagnostics"]["characteristic_seeds"] = intg(&RunConfig::characteristic_seeds);
        m["diagnostics"]["growth_threshold"] = dbl(&RunConfig::growth_threshold);
        m["diagnostics"]["energy_weight"] = str(&RunConfig::energy_weight);
        m["diagnostics"]["hamiltonian_p0"] = dbl(&RunConfig::hamiltonian_p0);
        m["diagnostics"]["hamiltonian_span"] = dbl(&RunConfig::hamiltonian_span);

        m["output"]["directory"] = str(&RunConfig::output_directory);
        return m;
    }();
    return s;
}

std::string suggest(const std::string& section, const std::string& key) {
    std::string best;
    int best_d = 3; // suggest only close matches
    for (const auto& [sec, keys] : schema()) {
        for (const auto& [k, _] : keys) {
            const int d = edit_distance(key, k) + (sec == section ? 0 : 1);
            if (d < best_d) {
                best_d = d;
                best = sec == section ? k : sec + "." + k;
            }
        }
    }
    return best;
}

void validate(const RunConfig& c, std::vector<ConfigIssue>& out) {
    const auto bad = [&out](const std::string& field, const std::string& msg) {
        out.push_back({0, field, msg});
    };
    if (c.model_name != "quadratic" && c.model_name != "cubic")
        bad("model.name", "must be 'quadratic' or 'cubic', got '" + c.model_name + "'");
    if (c.family != "constant" && c.family != "hyperbolic_sine" &&
        c.family != "elliptic_sine" && c.family != "file")
        bad("initial.family",
            "must be one of constant | hyperbolic_sine | elliptic_sine | file, got '" +
                c.family + "'");
    if (c.family == "file" && c.initial_path.empty())
        bad("initial.path", "required when family = file");
    if (c.u_mode < 1 || c.u_mode > 4096) bad("initial.u_mode", "must be in [1, 4096]");
    if (c.v_mode < 1 || c.v_mode > 4096) bad("initial.v_mode", "must be in [1, 4096]");

    if (c.n_x < 8 || c.n_x > 16384) bad("grid.n_x", "must be in [8, 16384]");
    if (!(c.t_max > 0.0) || c.t_max > 1e6) bad("grid.t_max", "must be in (0, 1e6]");
    if (!(c.cfl > 0.0) || c.cfl > 1.0) bad("grid.cfl", "must be in (0, 1]");
    if (c.filter != "auto" && c.filter != "on" && c.filter != "off")
        bad("grid.filter", "must be auto | on | off");
    if (c.filter_order < 2 || c.filter_order > 128)
        bad("grid.filter_order", "must be in [2, 128]");
    if (!(c.filter_cutoff > 0.0) || !(c.filter_cutoff < 1.0))
        bad("grid.filter_cutoff", "must be in (0, 1)");
    if (c.frame_stride < 1) bad("grid.frame_stride", "must be >= 1");
    if (c.dump_stride < 1) bad("grid.dump_stride", "must be >= 1");

    if (!std::isfinite(c.winding_c) || std::abs(c.winding_c) > 1e6)
        bad("run.winding_c", "must be finite with |C| <= 1e6");
    if (!(c.grad_max > 0.0)) bad("run.grad_max", "must be > 0");
    if (!(c.tail_max > 0.0) || c.tail_max > 1.0) bad("run.tail_max", "must be in (0, 1]");
    if (!(c.res_max > 0.0)) bad("run.res_max", "must be > 0");

    if (c.characteristic_seeds < 1 || c.characteristic_seeds > 4096)
        bad("diagnostics.characteristic_seeds", "must be in [1, 4096]");
    if (!(c.growth_threshold > 0.0)) bad("diagnostics.growth_threshold", "must be > 0");
    if (c.energy_weight != "default")
        bad("diagnostics.energy_weight", "only 'default' is available");
    if (!(c.hamiltonian_span > 0.0)) bad("diagnostics.hamiltonian_span", "must be > 0");
    if (!std::isfinite(c.hamiltonian_p0)) bad("diagnostics.hamiltonian_p0", "must be finite");

    if (c.output_directory.empty()) bad("output.directory", "must not be empty");
}

} // namespace

ParseError::ParseError(std::vector<ConfigIssue> iss)
    : Error(format_issues("config parse error", iss)), issues(std::move(iss)) {}

ValidationError::ValidationError(std::vector<ConfigIssue> iss)
    : Error(format_issues("config validation error", iss)), issues(std::move(iss)) {}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::vector<ConfigIssue> parse_issues;
    std::set<std::string> assigned;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                parse_issues.push_back({line_no, "", "unterminated section header"});
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) {
                parse_issues.push_back({line_no, section, "unknown section"});
                section.clear();
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            parse_issues.push_back({line_no, "", "expected 'key = value', got '" + line + "'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            parse_issues.push_back({line_no, key, "key outside of any [section]"});
            continue;
        }
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            std::string msg = "unknown key";
            const std::string hint = suggest(section, key);
            if (!hint.empty()) msg += " (did you mean '" + hint + "'?)";
            parse_issues.push_back({line_no, section + "." + key, msg});
            continue;
        }
        if (!it->second.set(cfg, value))
            parse_issues.push_back(
                {line_no, section + "." + key, "cannot read value '" + value + "'"});
        else
            assigned.insert(section + "." + key);
    }

    if (!parse_issues.empty()) throw ParseError(std::move(parse_issues));

    // Family-specific defaults for keys the file left unset: the struct
    // defaults describe the hyperbolic families; elliptic_sine recenters
    // into the band.
    if (cfg.family == "elliptic_sine") {
        if (!assigned.count("initial.u_base")) cfg.u_base = 0.0;
        if (!assigned.count("initial.u_amplitude")) cfg.u_amplitude = 0.2;
    }

    std::vector<ConfigIssue> validation_issues;
    validate(cfg, validation_issues);
    if (!validation_issues.empty()) throw ValidationError(std::move(validation_issues));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

void emit_kv(std::ostringstream& os, const char* key, const std::string& v) {
    os << key << " = " << v << "\n";
}
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string to_config_text(const RunConfig& c) {
    std::ostringstream os;
    os << "[model]\n";
    emit_kv(os, "name", c.model_name);
    os << "\n[initial]\n";
    emit_kv(os, "family", c.family);
    emit_kv(os, "u_base", num(c.u_base));
    emit_kv(os, "u_amplitude", num(c.u_amplitude));
    emit_kv(os, "u_mode", std::to_string(c.u_mode));
    emit_kv(os, "u_phase", num(c.u_phase));
    emit_kv(os, "v_base", num(c.v_base));
    emit_kv(os, "v_amplitude", num(c.v_amplitude));
    emit_kv(os, "v_mode", std::to_string(c.v_mode));
    emit_kv(os, "v_phase", num(c.v_phase));
    if (!c.initial_path.empty()) emit_kv(os, "path", c.initial_path);
    os << "\n[grid]\n";
    emit_kv(os, "n_x", std::to_string(c.n_x));
    emit_kv(os, "t_max", num(c.t_max));
    emit_kv(os, "cfl", num(c.cfl));
    emit_kv(os, "filter", c.filter);
    emit_kv(os, "filter_order", std::to_string(c.filter_order));
    emit_kv(os, "filter_cutoff", num(c.filter_cutoff));
    emit_kv(os, "frame_stride", std::to_string(c.frame_stride));
    emit_kv(os, "dump_stride", std::to_string(c.dump_stride));
    os << "\n[run]\n";
    emit_kv(os, "winding_c", num(c.winding_c));
    emit_kv(os, "stop_on_mixed", c.stop_on_mixed ? "true" : "false");
    emit_kv(os, "grad_max", num(c.grad_max));
    emit_kv(os, "tail_max", num(c.tail_max));
    emit_kv(os, "res_max", num(c.res_max));
    emit_kv(os, "seed", std::to_string(c.seed));
    os << "\n[diagnostics]\n";
    emit_kv(os, "characteristic_seeds", std::to_string(c.characteristic_seeds));
    emit_kv(os, "growth_threshold", num(c.growth_threshold));
    emit_kv(os, "energy_weight", c.energy_weight);
    emit_kv(os, "hamiltonian_p0", num(c.hamiltonian_p0));
    emit_kv(os, "hamiltonian_span", num(c.hamiltonian_span));
    os << "\n[output]\n";
    emit_kv(os, "directory", c.output_directory);
    return os.str();
}

void to_json(nlohmann::ordered_json& j, const RunConfig& c) {
    j = nlohmann::ordered_json{
        {"model", {{"name", c.model_name}}},
        {"initial",
         {{"family", c.family},
          {"u_base", c.u_base},
          {"u_amplitude", c.u_amplitude},
          {"u_mode", c.u_mode},
          {"u_phase", c.u_phase},
          {"v_base", c.v_base},
          {"v_amplitude", c.v_amplitude},
          {"v_mode", c.v_mode},
          {"v_phase", c.v_phase},
          {"path", c.initial_path}}},
        {"grid",
         {{"n_x", c.n_x},
          {"t_max", c.t_max},
          {"cfl", c.cfl},
          {"filter", c.filter},
          {"filter_order", c.filter_order},
          {"filter_cutoff", c.filter_cutoff},
          {"frame_stride", c.frame_stride},
          {"dump_stride", c.dump_stride}}},
        {"run",
         {{"winding_c", c.winding_c},
          {"stop_on_mixed", c.stop_on_mixed},
          {"grad_max", c.grad_max},
          {"tail_max", c.tail_max},
          {"res_max", c.res_max},
          {"seed", c.seed}}},
        {"diagnostics",
         {{"characteristic_seeds", c.characteristic_seeds},
          {"growth_threshold", c.growth_threshold},
          {"energy_weight", c.energy_weight},
          {"hamiltonian_p0", c.hamiltonian_p0},
          {"hamiltonian_span", c.hamiltonian_span}}},
        {"output", {{"directory", c.output_directory}}}};
}

void from_json(const nlohmann::ordered_json& j, RunConfig& c) {
    c.model_name = j.at("model").at("name").get<std::string>();
    const auto& ini = j.at("initial");
    c.family = ini.at("family").get<std::string>();
    c.u_base = ini.at("u_base").get<double>();
    c.u_amplitude = ini.at("u_amplitude").get<double>();
    c.u_mode = ini.at("u_mode").get<int>();
    c.u_phase = ini.at("u_phase").get<double>();
    c.v_base = ini.at("v_base").get<double>();
    c.v_amplitude = ini.at("v_amplitude").get<double>();
    c.v_mode = ini.at("v_mode").get<int>();
    c.v_phase = ini.at("v_phase").get<double>();
    c.initial_path = ini.at("path").get<std::string>();
    const auto& g = j.at("grid");
    c.n_x = g.at("n_x").get<int>();
    c.t_max = g.at("t_max").get<double>();
    c.cfl = g.at("cfl").get<double>();
    c.filter = g.at("filter").get<std::string>();
    c.filter_order = g.at("filter_order").get<int>();
    c.filter_cutoff = g.at("filter_cutoff").get<double>();
    c.frame_stride = g.at("frame_stride").get<int>();
    c.dump_stride = g.at("dump_stride").get<int>();
    const auto& r = j.at("run");
    c.winding_c = r.at("winding_c").get<double>();
    c.stop_on_mixed = r.at("stop_on_mixed").get<bool>();
    c.grad_max = r.at("grad_max").get<double>();
    c.tail_max = r.at("tail_max").get<double>();
    c.res_max = r.at("res_max").get<double>();
    c.seed = r.at("seed").get<std::uint64_t>();
    const auto& d = j.at("diagnostics");
    c.characteristic_seeds = d.at("characteristic_seeds").get<int>();
    c.growth_threshold = d.at("growth_threshold").get<double>();
    c.energy_weight = d.at("energy_weight").get<std::string>();
    c.hamiltonian_p0 = d.at("hamiltonian_p0").get<double>();
    c.hamiltonian_span = d.at("hamiltonian_span").get<double>();
    c.output_directory = j.at("output").at("directory").get<std::string>();
}

SigmaModel make_model(const std::string& name) {
    if (name == "quadratic") return make_quadratic();
    if (name == "cubic") return make_cubic();
    throw Error("make_model: unknown model '" + name + "'");
}

void build_initial_data(const RunConfig& cfg, std::vector<double>& u0,
                        std::vector<double>& v0) {
    u0.assign(cfg.n_x, 0.0);
    v0.assign(cfg.n_x, 0.0);
    const double two_pi = 2.0 * std::numbers::pi;

    if (cfg.family == "file") {
        std::ifstream in(cfg.initial_path);
        if (!in) throw IoError("cannot open initial-data file: " + cfg.initial_path);
        std::string line;
        int row = 0;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            if (row == 0 && line.find_first_not_of("uv, \t") == std::string::npos) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw IoError("initial-data file: expected 'u,v' on each row");
            if (row >= cfg.n_x) throw IoError("initial-data file has more rows than n_x");
            u0[row] = std::stod(line.substr(0, comma));
            v0[row] = std::stod(line.substr(comma + 1));
            ++row;
        }
        if (row != cfg.n_x)
            throw IoError("initial-data file has " + std::to_string(row) +
                          " rows, expected n_x = " + std::to_string(cfg.n_x));
        return;
    }

    double ub = cfg.u_base, ua = cfg.u_amplitude, vb = cfg.v_base, va = cfg.v_amplitude;
    if (cfg.family == "constant") {
        ua = 0.0;
        va = 0.0;
    }
    for (int i = 0; i < cfg.n_x; ++i) {
        const double x = static_cast<double>(i) / cfg.n_x;
        u0[i] = ub + ua * std::sin(two_pi * cfg.u_mode * x + cfg.u_phase);
        v0[i] = vb + va * std::sin(two_pi * cfg.v_mode * x + cfg.v_phase);
    }
}

SolverConfig make_solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.model = make_model(cfg.model_name);
    sc.n_x = cfg.n_x;
    sc.t_max = cfg.t_max;
    sc.winding_c = cfg.winding_c;
    build_initial_data(cfg, sc.u0, sc.v0);
    sc.filter = cfg.filter == "on"    ? FilterMode::On
                : cfg.filter == "off" ? FilterMode::Off
                                      : FilterMode::Auto;
    sc.step.cfl = cfg.cfl;
    sc.step.filter_order = cfg.filter_order;
    sc.step.filter_cutoff = cfg.filter_cutoff;
    sc.step.grad_max = cfg.grad_max;
    sc.step.tail_max = cfg.tail_max;
    sc.stop_on_mixed = cfg.stop_on_mixed;
    sc.frame_stride = cfg.frame_stride;
    sc.res_max = cfg.res_max;
    return sc;
}

} // namespace psys
