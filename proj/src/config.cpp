#include "nfcrb/config.hpp"

#include "nfcrb/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace nfcrb {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using EntryMap = std::map<std::string, Entry>;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const Entry& e, const std::string& key) {
    double value = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    if (!e.value.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(e.line, key + ": expected a finite number, got '" + e.value + "'");
    }
    return value;
}

int parse_count(const Entry& e, const std::string& key) {
    const double v = parse_number(e, key);
    if (v != std::floor(v) || v < 1.0 || v > 1e7) {
        throw ParseError(e.line, key + ": expected a positive integer, got '" + e.value + "'");
    }
    return static_cast<int>(v);
}

bool parse_bool(const Entry& e, const std::string& key) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") {
        return true;
    }
    if (e.value == "false" || e.value == "0" || e.value == "no") {
        return false;
    }
    throw ParseError(e.line, key + ": expected true or false, got '" + e.value + "'");
}

bool is_scalar_key(const std::string& key) {
    static const char* const keys[] = {
        "carrier_hz",        "lightspeed",         "t_sym_s",     "snapshots",
        "power_w",           "noise_dbm",          "noise_w",     "reduce_phase",
        "tx.count",          "tx.spacing_over_lambda", "tx.spacing_m", "tx.centroid_x",
        "rx.count",          "rx.spacing_over_lambda", "rx.spacing_m", "rx.centroid_x",
    };
    for (const char* k : keys) {
        if (key == k) {
            return true;
        }
    }
    return false;
}

bool is_target_field(std::string_view field) {
    static const char* const fields[] = {"x", "y", "vx", "vy", "rcs_re", "rcs_im", "range",
                                         "angle_deg"};
    for (const char* f : fields) {
        if (field == f) {
            return true;
        }
    }
    return false;
}

// "target.<i>.<field>" -> (i, field); nullopt when the key has another shape.
std::optional<std::pair<int, std::string>> split_target_key(const std::string& key, int line) {
    constexpr std::string_view prefix = "target.";
    if (key.rfind(prefix, 0) != 0) {
        return std::nullopt;
    }
    const std::string rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos) {
        throw ParseError(line, "unknown key '" + key + "'");
    }
    const std::string index_text = rest.substr(0, dot);
    const std::string field = rest.substr(dot + 1);
    int index = 0;
    const auto [ptr, ec] =
        std::from_chars(index_text.data(), index_text.data() + index_text.size(), index);
    if (ec != std::errc() || ptr != index_text.data() + index_text.size() || index < 1) {
        throw ParseError(line, "target index must be a positive integer in '" + key + "'");
    }
    if (!is_target_field(field)) {
        throw ParseError(line, "unknown key '" + key + "'");
    }
    return std::make_pair(index, field);
}

void reject_both(const EntryMap& entries, const std::string& a, const std::string& b) {
    const auto ia = entries.find(a);
    const auto ib = entries.find(b);
    if (ia != entries.end() && ib != entries.end()) {
        throw ParseError(std::max(ia->second.line, ib->second.line),
                         "conflicting keys '" + a + "' and '" + b + "'");
    }
}

ArrayGeometry parse_array(const EntryMap& entries, const std::string& side, double wavelength,
                          const ArrayGeometry& fallback) {
    reject_both(entries, side + ".spacing_over_lambda", side + ".spacing_m");
    int count = fallback.count();
    double spacing = wavelength / 2.0;
    double centroid = fallback.centroid_x();
    if (auto it = entries.find(side + ".count"); it != entries.end()) {
        count = parse_count(it->second, it->first);
    }
    if (auto it = entries.find(side + ".spacing_over_lambda"); it != entries.end()) {
        spacing = parse_number(it->second, it->first) * wavelength;
    }
    if (auto it = entries.find(side + ".spacing_m"); it != entries.end()) {
        spacing = parse_number(it->second, it->first);
    }
    if (auto it = entries.find(side + ".centroid_x"); it != entries.end()) {
        centroid = parse_number(it->second, it->first);
    }
    try {
        return ArrayGeometry::ula(count, spacing, centroid);
    } catch (const InvalidArgument& err) {
        int line = 0;
        for (const auto& [key, e] : entries) {
            if (key.rfind(side + ".", 0) == 0) {
                line = std::max(line, e.line);
            }
        }
        throw ParseError(line, side + " array: " + err.what());
    }
}

Target parse_target(int index, const std::map<std::string, Entry>& fields) {
    const std::string prefix = "target." + std::to_string(index) + ".";
    auto get = [&](const char* name) -> std::optional<double> {
        const auto it = fields.find(name);
        if (it == fields.end()) {
            return std::nullopt;
        }
        return parse_number(it->second, prefix + name);
    };
    int last_line = 0;
    for (const auto& [name, e] : fields) {
        last_line = std::max(last_line, e.line);
    }

    const bool cartesian = fields.count("x") || fields.count("y");
    const bool polar = fields.count("range") || fields.count("angle_deg");
    if (cartesian && polar) {
        throw ParseError(last_line, "conflicting keys: " + prefix + "{x,y} and " + prefix
                                        + "{range,angle_deg}");
    }

    Target t;
    t.vx = get("vx").value_or(kDefaultVx);
    t.vy = get("vy").value_or(kDefaultVy);
    t.rcs_re = get("rcs_re").value_or(kDefaultRcsRe);
    t.rcs_im = get("rcs_im").value_or(kDefaultRcsIm);
    if (cartesian) {
        const auto x = get("x");
        const auto y = get("y");
        if (!x || !y) {
            throw ParseError(last_line, prefix + "x and " + prefix + "y must both be given");
        }
        t.x = *x;
        t.y = *y;
    } else if (polar) {
        const auto range = get("range");
        const auto angle = get("angle_deg");
        if (!range || !angle) {
            throw ParseError(last_line,
                             prefix + "range and " + prefix + "angle_deg must both be given");
        }
        if (!(*range > 0.0)) {
            throw ParseError(fields.at("range").line, prefix + "range must be positive");
        }
        const Target p = Target::from_polar(*range, deg_to_rad(*angle));
        t.x = p.x;
        t.y = p.y;
    } else if (index == 1) {
        const Target p = Target::from_polar(kDefaultRange, deg_to_rad(kDefaultAngleDeg));
        t.x = p.x;
        t.y = p.y;
    } else {
        throw ParseError(last_line, "target " + std::to_string(index) + " has no position");
    }
    return t;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }

SceneConfig default_config() {
    SceneConfig cfg;
    Target t = Target::from_polar(kDefaultRange, deg_to_rad(kDefaultAngleDeg));
    t.vx = kDefaultVx;
    t.vy = kDefaultVy;
    t.rcs_re = kDefaultRcsRe;
    t.rcs_im = kDefaultRcsIm;
    cfg.targets = {t};
    return cfg;
}

SceneConfig parse_config(std::string_view text) {
    EntryMap scalars;
    std::map<int, std::map<std::string, Entry>> targets;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw ParseError(line_no, "expected 'key = value'");
        }

        if (auto tk = split_target_key(key, line_no)) {
            auto& fields = targets[tk->first];
            if (fields.count(tk->second)) {
                throw ParseError(line_no, "duplicate key '" + key + "'");
            }
            fields[tk->second] = {value, line_no};
        } else if (is_scalar_key(key)) {
            if (scalars.count(key)) {
                throw ParseError(line_no, "duplicate key '" + key + "'");
            }
            scalars[key] = {value, line_no};
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }

    reject_both(scalars, "noise_dbm", "noise_w");

    SceneConfig cfg = default_config();
    auto number = [&](const char* key, double& out) {
        if (auto it = scalars.find(key); it != scalars.end()) {
            out = parse_number(it->second, key);
        }
    };
    number("carrier_hz", cfg.carrier_hz);
    number("lightspeed", cfg.lightspeed);
    number("t_sym_s", cfg.t_sym_s);
    number("power_w", cfg.power_w);
    number("noise_w", cfg.noise_var_w);
    if (auto it = scalars.find("noise_dbm"); it != scalars.end()) {
        cfg.noise_var_w = dbm_to_watts(parse_number(it->second, it->first));
    }
    if (auto it = scalars.find("snapshots"); it != scalars.end()) {
        cfg.snapshots = parse_count(it->second, it->first);
    }
    if (auto it = scalars.find("reduce_phase"); it != scalars.end()) {
        cfg.reduce_phase = parse_bool(it->second, it->first);
    }
    if (!(cfg.carrier_hz > 0.0) || !(cfg.lightspeed > 0.0)) {
        const int line = std::max(scalars.count("carrier_hz") ? scalars["carrier_hz"].line : 0,
                                  scalars.count("lightspeed") ? scalars["lightspeed"].line : 0);
        throw ParseError(line, "carrier_hz and lightspeed must be positive");
    }
    const double wavelength = cfg.lightspeed / cfg.carrier_hz;
    cfg.tx = parse_array(scalars, "tx", wavelength, cfg.tx);
    cfg.rx = parse_array(scalars, "rx", wavelength, cfg.rx);

    if (!targets.empty()) {
        cfg.targets.clear();
        int expected = 1;
        for (const auto& [index, fields] : targets) {
            if (index != expected) {
                throw ParseError(fields.begin()->second.line,
                                 "missing target " + std::to_string(expected)
                                     + " (targets must be numbered 1, 2, ...)");
            }
            cfg.targets.push_back(parse_target(index, fields));
            ++expected;
        }
    }

    // Catch remaining range violations here so they carry a line number.
    try {
        make_scene(cfg);
    } catch (const std::exception& err) {
        throw ParseError(0, err.what());
    }
    return cfg;
}

SceneConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(0, "cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::string> config_echo(const SceneConfig& c) {
    std::vector<std::string> out;
    auto add = [&](const std::string& key, const std::string& value) {
        out.push_back(key + " = " + value);
    };
    add("carrier_hz", format_double(c.carrier_hz));
    add("lightspeed", format_double(c.lightspeed));
    add("t_sym_s", format_double(c.t_sym_s));
    add("snapshots", std::to_string(c.snapshots));
    add("power_w", format_double(c.power_w));
    add("noise_w", format_double(c.noise_var_w));
    add("reduce_phase", c.reduce_phase ? "true" : "false");
    for (const auto& [name, geom] : {std::pair{"tx", &c.tx}, std::pair{"rx", &c.rx}}) {
        add(std::string(name) + ".count", std::to_string(geom->count()));
        add(std::string(name) + ".spacing_m", format_double(geom->spacing()));
        add(std::string(name) + ".centroid_x", format_double(geom->centroid_x()));
    }
    for (std::size_t i = 0; i < c.targets.size(); ++i) {
        const Target& t = c.targets[i];
        const std::string p = "target." + std::to_string(i + 1) + ".";
        add(p + "x", format_double(t.x));
        add(p + "y", format_double(t.y));
        add(p + "vx", format_double(t.vx));
        add(p + "vy", format_double(t.vy));
        add(p + "rcs_re", format_double(t.rcs_re));
        add(p + "rcs_im", format_double(t.rcs_im));
    }
    return out;
}

} // namespace nfcrb
