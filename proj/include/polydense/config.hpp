// Minimal TOML-style config: [sections], key = value with strings, numbers,
// booleans, arrays, and inline tables like  weight = { kind = "power", a = 2.0 }.
// parse -> serialize -> parse is the identity on the parsed structure.
#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

class ConfigValue;
using ConfigArray = std::vector<ConfigValue>;
using ConfigTable = std::map<std::string, ConfigValue>;

class ConfigValue {
  public:
    ConfigValue() : v_(0.0) {}
    ConfigValue(bool b) : v_(b) {}
    ConfigValue(double d) : v_(d) {}
    ConfigValue(std::string s) : v_(std::move(s)) {}
    ConfigValue(ConfigArray a) : v_(std::move(a)) {}
    ConfigValue(ConfigTable t) : v_(std::move(t)) {}

    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_array() const { return std::holds_alternative<ConfigArray>(v_); }
    bool is_table() const { return std::holds_alternative<ConfigTable>(v_); }

    bool as_bool() const { return std::get<bool>(v_); }
    double as_number() const { return std::get<double>(v_); }
    const std::string& as_string() const { return std::get<std::string>(v_); }
    const ConfigArray& as_array() const { return std::get<ConfigArray>(v_); }
    const ConfigTable& as_table() const { return std::get<ConfigTable>(v_); }

    bool operator==(const ConfigValue& o) const { return v_ == o.v_; }

  private:
    std::variant<bool, double, std::string, ConfigArray, ConfigTable> v_;
};

// Whole config: named sections of key -> value; the unnamed top section is "".
using Config = std::map<std::string, ConfigTable>;

namespace detail {

struct ConfigParser {
    const std::string& text;
    size_t pos = 0;
    int line = 1;

    explicit ConfigParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg, const std::string& key = "") {
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + msg +
                          (key.empty() ? "" : " (key '" + key + "')"));
    }

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws_inline() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }

    void skip_ws_and_comments() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos;
            } else if (c == '\n') {
                ++pos;
                ++line;
            } else if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    std::string parse_key() {
        skip_ws_inline();
        std::string k;
        while (!eof() && (std::isalnum((unsigned char)peek()) || peek() == '_' || peek() == '-'))
            k.push_back(text[pos++]);
        if (k.empty()) fail("expected a key");
        return k;
    }

    void expect(char c, const std::string& key = "") {
        skip_ws_inline();
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'", key);
        ++pos;
    }

    ConfigValue parse_value(const std::string& key) {
        skip_ws_inline();
        if (eof()) fail("expected a value", key);
        const char c = peek();
        if (c == '"') {
            ++pos;
            std::string s;
            while (!eof() && peek() != '"') {
                if (peek() == '\n') fail("unterminated string", key);
                s.push_back(text[pos++]);
            }
            if (eof()) fail("unterminated string", key);
            ++pos;
            return ConfigValue(std::move(s));
        }
        if (c == '[') {
            ++pos;
            ConfigArray arr;
            skip_ws_and_comments();
            if (!eof() && peek() == ']') {
                ++pos;
                return ConfigValue(std::move(arr));
            }
            while (true) {
                arr.push_back(parse_value(key));
                skip_ws_and_comments();
                if (!eof() && peek() == ',') {
                    ++pos;
                    skip_ws_and_comments();
                    continue;
                }
                expect(']', key);
                break;
            }
            return ConfigValue(std::move(arr));
        }
        if (c == '{') {
            ++pos;
            ConfigTable tab;
            skip_ws_inline();
            if (!eof() && peek() == '}') {
                ++pos;
                return ConfigValue(std::move(tab));
            }
            while (true) {
                const std::string k = parse_key();
                expect('=', k);
                tab[k] = parse_value(k);
                skip_ws_inline();
                if (!eof() && peek() == ',') {
                    ++pos;
                    continue;
                }
                expect('}', key);
                break;
            }
            return ConfigValue(std::move(tab));
        }
        if (text.compare(pos, 4, "true") == 0) {
            pos += 4;
            return ConfigValue(true);
        }
        if (text.compare(pos, 5, "false") == 0) {
            pos += 5;
            return ConfigValue(false);
        }
        // number
        size_t start = pos;
        while (!eof() && (std::isdigit((unsigned char)peek()) || peek() == '+' || peek() == '-' ||
                          peek() == '.' || peek() == 'e' || peek() == 'E'))
            ++pos;
        if (pos == start) fail("unrecognized value", key);
        try {
            size_t used = 0;
            const double d = std::stod(text.substr(start, pos - start), &used);
            if (used != pos - start) fail("malformed number", key);
            return ConfigValue(d);
        } catch (const std::exception&) {
            fail("malformed number", key);
        }
    }

    Config parse() {
        Config cfg;
        std::string section; // "" = top
        cfg[section];
        while (true) {
            skip_ws_and_comments();
            if (eof()) break;
            if (peek() == '[') {
                ++pos;
                section = parse_key();
                expect(']', section);
                cfg[section];
                continue;
            }
            const std::string key = parse_key();
            expect('=', key);
            cfg[section][key] = parse_value(key);
        }
        return cfg;
    }
};

inline void serialize_value(const ConfigValue& v, std::string& out) {
    char buf[64];
    if (v.is_bool()) {
        out += v.as_bool() ? "true" : "false";
    } else if (v.is_number()) {
        std::snprintf(buf, sizeof buf, "%.17g", v.as_number());
        out += buf;
    } else if (v.is_string()) {
        out += '"';
        out += v.as_string();
        out += '"';
    } else if (v.is_array()) {
        out += '[';
        const auto& a = v.as_array();
        for (size_t i = 0; i < a.size(); ++i) {
            if (i) out += ", ";
            serialize_value(a[i], out);
        }
        out += ']';
    } else {
        out += "{ ";
        const auto& t = v.as_table();
        bool first = true;
        for (const auto& [k, val] : t) {
            if (!first) out += ", ";
            first = false;
            out += k;
            out += " = ";
            serialize_value(val, out);
        }
        out += " }";
    }
}

} // namespace detail

inline Config parse_config(const std::string& text) { return detail::ConfigParser(text).parse(); }

inline std::string serialize_config(const Config& cfg) {
    std::string out;
    auto dump_section = [&out](const ConfigTable& t) {
        for (const auto& [k, v] : t) {
            out += k;
            out += " = ";
            detail::serialize_value(v, out);
            out += '\n';
        }
    };
    auto top = cfg.find("");
    if (top != cfg.end()) dump_section(top->second);
    for (const auto& [name, tab] : cfg) {
        if (name.empty()) continue;
        out += '[';
        out += name;
        out += "]\n";
        dump_section(tab);
    }
    return out;
}

// typed lookup helpers with defaults
inline double cfg_number(const Config& c, const std::string& sec, const std::string& key,
                         double dflt) {
    auto s = c.find(sec);
    if (s == c.end()) return dflt;
    auto it = s->second.find(key);
    if (it == s->second.end()) return dflt;
    if (!it->second.is_number()) throw ConfigError("expected a number for key '" + key + "'");
    return it->second.as_number();
}

inline std::string cfg_string(const Config& c, const std::string& sec, const std::string& key,
                              const std::string& dflt) {
    auto s = c.find(sec);
    if (s == c.end()) return dflt;
    auto it = s->second.find(key);
    if (it == s->second.end()) return dflt;
    if (!it->second.is_string()) throw ConfigError("expected a string for key '" + key + "'");
    return it->second.as_string();
}

inline std::vector<double> cfg_number_list(const Config& c, const std::string& sec,
                                           const std::string& key, std::vector<double> dflt) {
    auto s = c.find(sec);
    if (s == c.end()) return dflt;
    auto it = s->second.find(key);
    if (it == s->second.end()) return dflt;
    if (!it->second.is_array()) throw ConfigError("expected an array for key '" + key + "'");
    std::vector<double> out;
    for (const auto& v : it->second.as_array()) {
        if (!v.is_number()) throw ConfigError("expected numbers in array '" + key + "'");
        out.push_back(v.as_number());
    }
    return out;
}

} // namespace polydense
