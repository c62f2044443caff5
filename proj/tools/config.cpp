#include "config.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "inclab/text.hpp"

namespace inclab::cli {

double parse_number(const std::string& text) {
    const std::string s(trim(text));
    try {
        if (const auto caret = s.find('^'); caret != std::string::npos)
            return std::pow(parse_double(s.substr(0, caret)), parse_double(s.substr(caret + 1)));
        if (const auto slash = s.find('/'); slash != std::string::npos) {
            const double den = parse_double(s.substr(slash + 1));
            if (den == 0.0) throw std::invalid_argument("zero denominator");
            return parse_double(s.substr(0, slash)) / den;
        }
        return parse_double(s);
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: '" + s + "'");
    }
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (std::string_view item : split(text, ',')) {
        const std::string s(item);
        if (s.empty()) throw ConfigError("empty list entry in '" + text + "'");
        if (const auto dots = s.find(".."); dots != std::string::npos) {
            const std::string a(trim(s.substr(0, dots))), b(trim(s.substr(dots + 2)));
            if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0)
                throw ConfigError("ranges must look like 2^a..2^b, got '" + s + "'");
            const auto ea = static_cast<int>(parse_number(a.substr(2)));
            const auto eb = static_cast<int>(parse_number(b.substr(2)));
            const int step = ea <= eb ? 1 : -1;
            for (int e = ea;; e += step) {
                out.push_back(std::ldexp(1.0, e));
                if (e == eb) break;
            }
            continue;
        }
        out.push_back(parse_number(s));
    }
    return out;
}

const std::string* Section::raw(const std::string& key) const {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::string Section::get_string(const std::string& key, const std::string& fallback) const {
    const std::string* v = raw(key);
    return v ? *v : fallback;
}

double Section::get_number(const std::string& key, double fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    try {
        return parse_number(*v);
    } catch (const ConfigError& e) {
        throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
    }
}

long long Section::get_int(const std::string& key, long long fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    try {
        return static_cast<long long>(parse_int(*v));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
    }
}

bool Section::get_bool(const std::string& key, bool fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ConfigError("[" + name_ + "] " + key + ": expected true or false, got '" + *v + "'");
}

std::vector<double> Section::get_numbers(const std::string& key, const std::vector<double>& fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::vector<double> out;
    try {
        out = parse_number_list(*v);
    } catch (const ConfigError& e) {
        throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
    }
    if (out.empty()) throw ConfigError("[" + name_ + "] " + key + ": empty list");
    return out;
}

std::vector<int> Section::get_ints(const std::string& key, const std::vector<int>& fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::vector<int> out;
    for (std::string_view item : split(*v, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(static_cast<int>(parse_int(item)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
        }
    }
    if (out.empty()) throw ConfigError("[" + name_ + "] " + key + ": empty list");
    return out;
}

std::vector<std::string> Section::get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
    const std::string* v = raw(key);
    if (!v) return fallback;
    std::vector<std::string> out;
    for (std::string_view item : split(*v, ','))
        if (!item.empty()) out.emplace_back(item);
    if (out.empty()) throw ConfigError("[" + name_ + "] " + key + ": empty list");
    return out;
}

void Section::reject_unused() const {
    for (const auto& [key, value] : values_)
        if (!used_.count(key)) throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
}

Config Config::parse(std::istream& in) {
    Config cfg;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::string current = "global";
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            current = std::string(trim(s.substr(1, s.size() - 2)));
            if (current.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            raw[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(trim(s.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto& sec = raw[current];
        if (sec.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        sec[key] = std::string(trim(s.substr(eq + 1)));
    }
    for (auto& [name, values] : raw) cfg.sections_.emplace(name, Section(name, std::move(values)));
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse(in);
}

const Section& Config::section(const std::string& name) const {
    static const Section empty;
    const auto it = sections_.find(name);
    return it == sections_.end() ? empty : it->second;
}

std::vector<std::string> Config::section_names() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : sections_) out.push_back(name);
    return out;
}

}  // namespace inclab::cli
