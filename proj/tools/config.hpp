#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace inclab::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numbers: decimals, "a/b", "2^e". Throws ConfigError.
double parse_number(const std::string& text);

/// Comma-separated numbers; "2^a..2^b" expands to every power of two between
/// the two exponents, in the written order.
std::vector<double> parse_number_list(const std::string& text);

/// One [section] of key = value pairs. Keys read through the getters are
/// remembered so leftovers can be reported.
class Section {
public:
    Section() = default;
    Section(std::string name, std::map<std::string, std::string> values)
        : name_(std::move(name)), values_(std::move(values)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_number(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Missing key: fallback. Present but empty: ConfigError.
    std::vector<double> get_numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;
    std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

    /// Throws ConfigError naming any key that no getter asked for.
    void reject_unused() const;

private:
    const std::string* raw(const std::string& key) const;
    std::string name_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

/// Plain text: "[name]" opens a section, "key = value" sets a value, "#"
/// starts a comment. Keys before the first section go to [global].
class Config {
public:
    static Config parse(std::istream& in);
    static Config load(const std::string& path);

    /// The named section, or an empty one.
    [[nodiscard]] const Section& section(const std::string& name) const;
    [[nodiscard]] std::vector<std::string> section_names() const;

private:
    std::map<std::string, Section> sections_;
};

}  // namespace inclab::cli
