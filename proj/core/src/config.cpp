#include "blockboot/config.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace blockboot {

namespace {

void from_stream(std::istream& in, const std::string& origin,
                       std::map<std::string, std::string>& entries) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            entries[key] = node.data();
        } else {
            for (const auto& [sub, leaf] : node) entries[key + "." + sub] = leaf.data();
        }
    }
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    from_stream(in, "<config>", cfg.entries_);
    const auto schema = cfg.get("schema");
    if (!schema) throw ConfigError("config is missing the 'schema' key");
    if (*schema != std::to_string(kConfigSchema)) {
        throw ConfigError("unsupported config schema '" + *schema + "'");
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

bool ConfigFile::has(const std::string& key) const { return entries_.contains(key); }

std::optional<std::string> ConfigFile::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return parse_real(*v);
    } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size() || v->empty()) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + *v + "'");
    }
    return out;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& key,
                                            std::vector<double> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

bool ConfigFile::has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    const auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.starts_with(prefix);
}

double parse_real(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return io::parse_double(text);
    const double num = io::parse_double(std::string_view(text).substr(0, slash));
    const double den = io::parse_double(std::string_view(text).substr(slash + 1));
    if (den == 0.0) throw ConfigError("division by zero in '" + text + "'");
    return num / den;
}

}  // namespace blockboot
