#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace subrate {

// Flat sectioned key=value configuration:
//   # comment
//   [section]
//   key = value
// Values are free text; typed getters parse on demand.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    // comma-separated list of numbers
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    // every numeric key of a section except the listed ones (catalog parameter packs)
    std::map<std::string, double> numeric_params(const std::string& section,
                                                 const std::vector<std::string>& skip) const;

    // FNV-1a over the raw text, hex encoded; embedded in summaries for provenance
    const std::string& hash() const { return hash_; }
    const std::string& text() const { return text_; }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string hash_;
    std::string text_;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace subrate
