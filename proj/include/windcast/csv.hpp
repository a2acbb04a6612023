#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "windcast/common.hpp"

namespace windcast {

/// Formats a double with up to `sig` significant digits, deterministically.
inline std::string format_double(double v, int sig = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InvalidInput("csv: column '" + name + "' not found");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace detail

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("csv: cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // blank lines before the header are decoration; after it they are
        // data rows (a single empty cell = one missing value)
        if (first && detail::trim(line).empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (first) {
            table.header = cells;
            first = false;
        } else {
            table.rows.push_back(cells);
        }
    }
    if (first) throw InvalidInput("csv: '" + path + "' is empty");
    return table;
}

/// Parses a cell into (value, missing). Empty cells and NaN spellings count
/// as missing; anything else non-numeric is an error.
inline bool parse_cell(const std::string& cell, double& value) {
    if (cell.empty()) return false;
    std::string lower;
    for (char c : cell) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "nan" || lower == "na") return false;
    std::size_t pos = 0;
    try {
        value = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw InvalidInput("csv: cannot parse numeric cell '" + cell + "'");
    }
    if (pos != cell.size()) throw InvalidInput("csv: trailing junk in cell '" + cell + "'");
    if (std::isnan(value)) return false;
    return true;
}

/// Flat key-value configuration file: `section.key = value`, `#` comments.
struct ConfigFile {
    std::map<std::string, std::string> entries;
    std::string raw_text;

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second;
    }
    double get_double(const std::string& key, double fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw InvalidInput("config: bad numeric value for " + key);
        }
    }
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        try {
            return std::stoull(it->second);
        } catch (const std::exception&) {
            throw InvalidInput("config: bad integer value for " + key);
        }
    }
    std::size_t get_size(const std::string& key, std::size_t fallback) const {
        return static_cast<std::size_t>(get_u64(key, fallback));
    }
};

inline ConfigFile parse_config_text(const std::string& text) {
    ConfigFile cfg;
    cfg.raw_text = text;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config: line " + std::to_string(lineno) + " has no '='");
        std::string key = detail::trim(t.substr(0, eq));
        std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw InvalidInput("config: empty key at line " + std::to_string(lineno));
        cfg.entries[key] = value;
    }
    return cfg;
}

inline ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// FNV-1a 64-bit digest, hex-encoded; used as the config digest in manifests.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace windcast
