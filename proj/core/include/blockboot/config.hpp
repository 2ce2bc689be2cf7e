#pragma once

// INI-style structured text used by the `generate` and `montecarlo`
// commands. Keys before the first [section] are top level; keys inside a
// section are addressed as "section.key". Every file must carry
// `schema = 1`.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blockboot {

inline constexpr int kConfigSchema = 1;

class ConfigFile {
public:
    static ConfigFile load(const std::filesystem::path& path);
    static ConfigFile parse(const std::string& text);

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<double> get_doubles(const std::string& key,
                                                  std::vector<double> fallback) const;

    /// True when any key starts with "section.".
    [[nodiscard]] bool has_section(const std::string& section) const;

    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept {
        return entries_;
    }

private:
    std::map<std::string, std::string> entries_;
};

/// Parses a real number, also accepting a ratio such as "1/3".
[[nodiscard]] double parse_real(const std::string& text);

}  // namespace blockboot
