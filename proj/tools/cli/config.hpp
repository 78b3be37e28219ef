// Copyright 2026 The wenduality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Key-value configuration files.
//
//   # comment
//   lattice = 4x4p
//   h_fraction = linspace(0, 1, 11)
//
// One `key = value` per line; '#' starts a comment. Lists are comma
// separated; numeric lists also accept linspace(a, b, n).

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wenduality/errors.hpp"
#include "wenduality/lattice.hpp"

namespace wenduality::cli {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == '(') ++depth;
        if (i < s.size() && s[i] == ')') --depth;
        if (i == s.size() || (s[i] == sep && depth == 0)) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

class Config {
public:
    static Config parse(std::string_view text, std::string source = "<config>") {
        Config c;
        c.source_ = std::move(source);
        int line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto body = trim(line);
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError(c.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
            const auto key = trim(std::string_view(body).substr(0, eq));
            const auto value = trim(std::string_view(body).substr(eq + 1));
            if (key.empty()) throw ConfigError(c.source_ + ":" + std::to_string(line_no) + ": empty key");
            if (c.entries_.count(key)) {
                throw ConfigError(c.source_ + ":" + std::to_string(line_no) + ": field '" + key +
                                  "': duplicate (first set on line " + std::to_string(c.entries_[key].line) + ")");
            }
            c.entries_[key] = {value, line_no};
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    /// Sets or overrides a value (command-line flags); reported as line 0.
    void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }

    void require_known(const std::set<std::string>& allowed) const {
        for (const auto& [k, e] : entries_)
            if (!allowed.count(k)) fail(k, "unknown field for this command");
    }

    std::string get_string(const std::string& key) const {
        if (!has(key)) throw ConfigError(source_ + ": missing required field '" + key + "'");
        return entries_.at(key).value;
    }
    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? entries_.at(key).value : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const { return has(key) ? get_double(key) : fallback; }

    int get_int(const std::string& key) const {
        const auto v = get_string(key);
        std::size_t pos = 0;
        long long x = 0;
        try {
            x = std::stoll(v, &pos);
        } catch (const std::exception&) {
            fail(key, "expected an integer, got '" + v + "'");
        }
        if (pos != v.size() || x < INT32_MIN || x > INT32_MAX) fail(key, "expected an integer, got '" + v + "'");
        return static_cast<int>(x);
    }
    int get_int(const std::string& key, int fallback) const { return has(key) ? get_int(key) : fallback; }

    std::vector<std::string> get_list(const std::string& key) const {
        auto items = split(get_string(key), ',');
        for (const auto& s : items)
            if (s.empty()) fail(key, "empty list item");
        return items;
    }

    /// Comma-separated numbers; an item may be linspace(a, b, n).
    std::vector<double> get_doubles(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : get_list(key)) {
            if (item.rfind("linspace(", 0) == 0 && item.back() == ')') {
                const auto args = split(std::string_view(item).substr(9, item.size() - 10), ',');
                if (args.size() != 3) fail(key, "linspace takes (start, stop, count)");
                const double a = to_double(key, args[0]), b = to_double(key, args[1]);
                const double n = to_double(key, args[2]);
                if (n < 1 || n != static_cast<int>(n)) fail(key, "linspace count must be a positive integer");
                for (int i = 0; i < static_cast<int>(n); ++i)
                    out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
            } else {
                out.push_back(to_double(key, item));
            }
        }
        return out;
    }

    LatticeSpec get_lattice(const std::string& key) const { return lattice_token(key, get_string(key)); }

    std::vector<LatticeSpec> get_lattices(const std::string& key) const {
        std::vector<LatticeSpec> out;
        for (const auto& t : get_list(key)) out.push_back(lattice_token(key, t));
        return out;
    }

    /// Sorted `key = value` lines: what the config hash covers.
    std::string canonical() const {
        std::string s;
        for (const auto& [k, e] : entries_) s += k + " = " + e.value + "\n";
        return s;
    }

    std::string hash() const { return "fnv1a64:" + hex64(fnv1a64(canonical())); }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const int line = has(key) ? entries_.at(key).line : 0;
        throw ConfigError(source_ + (line > 0 ? ":" + std::to_string(line) : std::string(" (command line)")) +
                          ": field '" + key + "': " + msg);
    }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    double to_double(const std::string& key, const std::string& v) const {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(v, &pos);
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + v + "'");
        }
        if (pos != v.size()) fail(key, "expected a number, got '" + v + "'");
        return x;
    }

    /// NxM followed by p/periodic or o/open, with an optional ':' separator.
    LatticeSpec lattice_token(const std::string& key, const std::string& t) const {
        LatticeSpec s;
        char sep = 0;
        int consumed = 0;
        if (std::sscanf(t.c_str(), "%d%c%d%n", &s.rows, &sep, &s.cols, &consumed) != 3 || (sep != 'x' && sep != 'X'))
            fail(key, "lattice '" + t + "' is not of the form NxM[p|o]");
        std::string rest = t.substr(static_cast<std::size_t>(consumed));
        if (!rest.empty() && rest.front() == ':') rest.erase(0, 1);
        if (rest == "p" || rest == "periodic" || rest == "P") {
            s.boundary = Boundary::Periodic;
        } else if (rest == "o" || rest == "open" || rest == "O") {
            s.boundary = Boundary::Open;
        } else {
            fail(key, "lattice '" + t + "' needs a boundary suffix p or o");
        }
        try {
            s.validate();
        } catch (const Error& e) {
            fail(key, "lattice '" + t + "': " + e.what());
        }
        return s;
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
};

}  // namespace wenduality::cli
