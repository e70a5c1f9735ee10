#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rosterflow/error.hpp"
#include "rosterflow/util/csv.hpp"

namespace rosterflow::config {

/// Flat key/value view of a TOML-style file. Supports `[section]` headers
/// (keys become `section.key`), strings, integers, floats, booleans and
/// single-line arrays of scalars. `#` starts a comment outside strings.
class Document {
public:
    using Scalar = std::variant<std::string, double, bool>;
    using Value = std::variant<Scalar, std::vector<Scalar>>;

    static Document parse(std::istream& in, const std::string& origin = "<config>") {
        Document doc;
        std::string section;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string text = csv::trim(strip_comment(line));
            if (text.empty()) {
                continue;
            }
            if (text.front() == '[') {
                if (text.back() != ']') {
                    fail(origin, lineno, "unterminated section header");
                }
                section = csv::trim(text.substr(1, text.size() - 2));
                continue;
            }
            auto eq = text.find('=');
            if (eq == std::string::npos) {
                fail(origin, lineno, "expected key = value");
            }
            std::string key = csv::trim(text.substr(0, eq));
            std::string raw = csv::trim(text.substr(eq + 1));
            if (key.empty() || raw.empty()) {
                fail(origin, lineno, "empty key or value");
            }
            if (!section.empty()) {
                key = section + "." + key;
            }
            doc.values_[key] = parse_value(raw, origin, lineno);
        }
        return doc;
    }

    static Document parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw Error(ErrorKind::IOFailure, "cannot open config " + path);
        }
        return parse(in, path);
    }

    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key) const {
        auto s = scalar(key);
        if (!s) {
            return std::nullopt;
        }
        if (auto* str = std::get_if<std::string>(&*s)) {
            return *str;
        }
        throw Error(ErrorKind::BadConfig, key + " must be a string");
    }

    std::optional<double> get_number(const std::string& key) const {
        auto s = scalar(key);
        if (!s) {
            return std::nullopt;
        }
        if (auto* num = std::get_if<double>(&*s)) {
            return *num;
        }
        throw Error(ErrorKind::BadConfig, key + " must be a number");
    }

    std::optional<bool> get_bool(const std::string& key) const {
        auto s = scalar(key);
        if (!s) {
            return std::nullopt;
        }
        if (auto* b = std::get_if<bool>(&*s)) {
            return *b;
        }
        throw Error(ErrorKind::BadConfig, key + " must be a boolean");
    }

    std::optional<std::vector<std::string>> get_strings(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        auto* arr = std::get_if<std::vector<Scalar>>(&it->second);
        if (!arr) {
            throw Error(ErrorKind::BadConfig, key + " must be an array");
        }
        std::vector<std::string> out;
        for (const auto& item : *arr) {
            auto* str = std::get_if<std::string>(&item);
            if (!str) {
                throw Error(ErrorKind::BadConfig, key + " must hold strings");
            }
            out.push_back(*str);
        }
        return out;
    }

    std::optional<std::vector<double>> get_numbers(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        auto* arr = std::get_if<std::vector<Scalar>>(&it->second);
        if (!arr) {
            throw Error(ErrorKind::BadConfig, key + " must be an array");
        }
        std::vector<double> out;
        for (const auto& item : *arr) {
            auto* num = std::get_if<double>(&item);
            if (!num) {
                throw Error(ErrorKind::BadConfig, key + " must hold numbers");
            }
            out.push_back(*num);
        }
        return out;
    }

    const std::map<std::string, Value>& values() const { return values_; }

private:
    std::optional<Scalar> scalar(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        if (auto* s = std::get_if<Scalar>(&it->second)) {
            return *s;
        }
        throw Error(ErrorKind::BadConfig, key + " must be a scalar");
    }

    [[noreturn]] static void fail(const std::string& origin, std::size_t lineno, const std::string& msg) {
        throw Error(ErrorKind::BadConfig, origin + ":" + std::to_string(lineno) + ": " + msg);
    }

    static std::string strip_comment(const std::string& line) {
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') {
                in_string = !in_string;
            } else if (line[i] == '#' && !in_string) {
                return line.substr(0, i);
            }
        }
        return line;
    }

    static Scalar parse_scalar(const std::string& raw, const std::string& origin, std::size_t lineno) {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            return raw.substr(1, raw.size() - 2);
        }
        if (raw == "true") {
            return true;
        }
        if (raw == "false") {
            return false;
        }
        std::string digits;
        for (char ch : raw) {
            if (ch != '_') {
                digits.push_back(ch);
            }
        }
        if (auto num = csv::parse_double(digits)) {
            return *num;
        }
        fail(origin, lineno, "cannot parse value '" + raw + "'");
    }

    static Value parse_value(const std::string& raw, const std::string& origin, std::size_t lineno) {
        if (raw.front() != '[') {
            return parse_scalar(raw, origin, lineno);
        }
        if (raw.back() != ']') {
            fail(origin, lineno, "unterminated array");
        }
        std::vector<Scalar> items;
        std::string body = raw.substr(1, raw.size() - 2);
        std::string part;
        bool in_string = false;
        auto flush = [&] {
            std::string item = csv::trim(part);
            if (!item.empty()) {
                items.push_back(parse_scalar(item, origin, lineno));
            }
            part.clear();
        };
        for (char ch : body) {
            if (ch == '"') {
                in_string = !in_string;
            }
            if (ch == ',' && !in_string) {
                flush();
            } else {
                part.push_back(ch);
            }
        }
        flush();
        return items;
    }

    std::map<std::string, Value> values_;
};

} // namespace rosterflow::config
