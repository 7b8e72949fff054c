#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rotsym/cli.hpp"
#include "rotsym/radial_expr.hpp"

namespace rotsym::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

double parse_double(std::string_view s, const std::string& what) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(what + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

const std::vector<std::string>& CaseConfig::known_keys() {
    static const std::vector<std::string> keys{
        "x",     "phi", "psi",     "sigma", "alpha", "beta", "eta", "theta",    "rtol", "atol", "max_steps",
        "samples", "out", "depth", "y0",    "f",     "g",    "h",   "profiles", "tau",  "c",    "s0",
    };
    return keys;
}

CaseConfig CaseConfig::parse(std::string_view text, const std::string& source) {
    CaseConfig cfg;
    cfg.source_ = source;
    const auto& keys = known_keys();
    int line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string_view line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError(where + ": empty value for '" + key + "'");
        }
        if (!cfg.values_.emplace(key, value).second) {
            throw ConfigError(where + ": duplicate key '" + key + "'");
        }
    }
    return cfg;
}

CaseConfig CaseConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    CaseConfig cfg = parse(buf.str(), path.string());
    cfg.base_ = path.parent_path();
    return cfg;
}

const std::string& CaseConfig::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError(source_ + ": missing key '" + key + "'");
    }
    return it->second;
}

double CaseConfig::real(const std::string& key) const {
    const RadialExpr e = [&] {
        try {
            return RadialExpr::parse(text(key));
        } catch (const ParseError& p) {
            throw ConfigError(source_ + ": " + key + ": " + p.what());
        }
    }();
    if (!e.is_constant()) {
        throw ConfigError(source_ + ": " + key + " must be a constant");
    }
    try {
        return e.eval(0.0);
    } catch (const Error& err) {
        throw ConfigError(source_ + ": " + key + ": " + err.what());
    }
}

double CaseConfig::real_or(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

long CaseConfig::integer_or(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = text(key);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(source_ + ": " + key + " must be an integer");
    }
    return v;
}

Profile CaseConfig::profile(const std::string& key) const {
    try {
        return Profile::parse(text(key));
    } catch (const ParseError& p) {
        throw ConfigError(source_ + ": " + key + ": " + p.what());
    }
}

IntegratorControls CaseConfig::controls() const {
    IntegratorControls c;
    c.rtol = real_or("rtol", c.rtol);
    c.atol = real_or("atol", c.atol);
    c.max_steps = integer_or("max_steps", c.max_steps);
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(source_ + ": " + e.what());
    }
    return c;
}

RotSymTensor CaseConfig::tensor() const {
    try {
        return RotSymTensor{CollarSpec(collar_width()), profile("phi"), profile("psi"), profile("sigma")};
    } catch (const InvalidArgument& e) {
        throw ConfigError(source_ + ": " + e.what());
    }
}

BoundaryData CaseConfig::boundary() const {
    try {
        return BoundaryData(real("alpha"), real("beta"), real("eta"), real("theta"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(source_ + ": " + e.what());
    }
}

RotSymMetric CaseConfig::metric() const {
    if (has("profiles")) {
        if (has("f") || has("g") || has("h")) {
            throw ConfigError(source_ + ": give either profiles or f, g, h");
        }
        std::filesystem::path p = text("profiles");
        if (p.is_relative()) p = base_ / p;
        return read_profiles_csv(p);
    }
    try {
        return RotSymMetric{CollarSpec(collar_width()), profile("f"), profile("g"), profile("h")};
    } catch (const InvalidArgument& e) {
        throw ConfigError(source_ + ": " + e.what());
    }
}

RotSymMetric read_profiles_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read profiles " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != kProfilesHeader) {
        throw ConfigError(path.string() + ": unexpected header");
    }
    std::vector<double> cols[7];
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(trim(line), ',');
        if (fields.size() != 14) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 14 fields");
        }
        for (int i = 0; i < 7; ++i) {
            cols[i].push_back(parse_double(fields[i], path.string() + ":" + std::to_string(line_no)));
        }
    }
    try {
        return RotSymMetric::from_grids(HermiteGrid(cols[0], cols[1], cols[4]), HermiteGrid(cols[0], cols[2], cols[5]),
                                        HermiteGrid(cols[0], cols[3], cols[6]));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace rotsym::cli
