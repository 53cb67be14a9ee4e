#include "see/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace see {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Strips a trailing comment, ignoring '#' inside quotes.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

struct Reader {
    const std::string& source;
    std::size_t line;
    std::string key;
    std::string raw;

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(source, line, key + ": " + what); }

    double number() const {
        double v = 0;
        const char* first = raw.data();
        const char* last = raw.data() + raw.size();
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) fail("expected a number, got '" + raw + "'");
        return v;
    }

    std::uint64_t integer() const {
        std::uint64_t v = 0;
        const char* last = raw.data() + raw.size();
        const auto res = std::from_chars(raw.data(), last, v);
        if (res.ec != std::errc() || res.ptr != last) fail("expected a non-negative integer, got '" + raw + "'");
        return v;
    }

    std::string string() const {
        if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') fail("expected a quoted string");
        return raw.substr(1, raw.size() - 2);
    }

    bool boolean() const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        fail("expected true or false");
    }

    Vec3 vec3() const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') fail("expected [x, y, z]");
        std::vector<double> parts;
        std::string body = raw.substr(1, raw.size() - 2);
        std::size_t start = 0;
        while (start <= body.size()) {
            const std::size_t comma = body.find(',', start);
            const std::string item = trim(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            Reader sub{source, line, key, item};
            parts.push_back(sub.number());
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (parts.size() != 3) fail("expected exactly 3 components");
        return {parts[0], parts[1], parts[2]};
    }
};

} // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what),
      line_(line) {}

RunConfig parse_config(std::istream& in, const std::string& source_name, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    ExperimentConfig& e = cfg.experiment;

    using Setter = std::function<void(const Reader&)>;
    const std::map<std::string, Setter> setters = {
        {"mesh", [&](const Reader& r) {
             std::string m = r.string();
             if (m.rfind("builtin:", 0) != 0 && std::filesystem::path(m).is_relative()) {
                 m = (base_dir / m).lexically_normal().string();
             }
             e.mesh = m;
         }},
        {"mesh_scale", [&](const Reader& r) { e.mesh_scale = r.number(); }},
        {"density", [&](const Reader& r) { e.density = r.number(); }},
        {"resolution", [&](const Reader& r) { e.resolution = r.number(); }},
        {"k_min", [&](const Reader& r) { e.k_min = r.integer(); }},
        {"view_distance", [&](const Reader& r) { e.view_distance = r.number(); }},
        {"view_offset", [&](const Reader& r) { e.view_offset = r.number(); }},
        {"frame_radius", [&](const Reader& r) { e.frame_radius = r.number(); }},
        {"fov", [&](const Reader& r) { e.sensor.fov = r.number(); }},
        {"width", [&](const Reader& r) { e.sensor.width = static_cast<int>(r.integer()); }},
        {"height", [&](const Reader& r) { e.sensor.height = static_cast<int>(r.integer()); }},
        {"noise_sigma", [&](const Reader& r) { e.sensor.noise_sigma = r.number(); }},
        {"registration_distance", [&](const Reader& r) { e.registration_distance = r.number(); }},
        {"initial_position", [&](const Reader& r) { e.initial_position = r.vec3(); }},
        {"initial_axis", [&](const Reader& r) { e.initial_axis = r.vec3(); }},
        {"scene_margin", [&](const Reader& r) { e.scene_margin = r.number(); }},
        {"model_samples", [&](const Reader& r) { e.model_samples = r.integer(); }},
        {"trials", [&](const Reader& r) { e.trials = r.integer(); }},
        {"seed", [&](const Reader& r) { e.seed = r.integer(); }},
        {"max_views", [&](const Reader& r) { e.max_views = r.integer(); }},
        {"record_timing", [&](const Reader& r) { e.record_timing = r.boolean(); }},
        {"output_dir", [&](const Reader& r) { cfg.output_dir = r.string(); }},
        {"jobs", [&](const Reader& r) { cfg.jobs = r.integer(); }},
    };

    std::set<std::string> seen;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        const std::string line = trim(strip_comment(text));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source_name, line_no, "expected 'key = value'");
        Reader r{source_name, line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
        const auto it = setters.find(r.key);
        if (it == setters.end()) throw ConfigError(source_name, line_no, "unknown key '" + r.key + "'");
        if (!seen.insert(r.key).second) throw ConfigError(source_name, line_no, "duplicate key '" + r.key + "'");
        if (r.raw.empty()) r.fail("missing value");
        it->second(r);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    return parse_config(in, path.string(), path.parent_path());
}

} // namespace see
