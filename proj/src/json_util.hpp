#pragma once

// Shared helpers for the JSON file formats. All doubles are written after
// rounding to 9 significant digits; readers must accept what writers emit.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "fgwp/errors.hpp"

namespace fgwp::detail {

using json = nlohmann::ordered_json;

inline const json& require_field(const json& j, const char* key, const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(context + key, "missing field");
    return *it;
}

inline double require_double(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_number()) throw ParseError(context + key, "expected a number");
    return v.get<double>();
}

inline std::uint64_t require_uint(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_number_unsigned())
        throw ParseError(context + key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

inline std::int64_t require_int(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_number_integer()) throw ParseError(context + key, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::string require_string(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_string()) throw ParseError(context + key, "expected a string");
    return v.get<std::string>();
}

inline const json& require_array(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_array()) throw ParseError(context + key, "expected an array");
    return v;
}

inline const json& require_object(const json& j, const char* key, const std::string& context) {
    const json& v = require_field(j, key, context);
    if (!v.is_object()) throw ParseError(context + key, "expected an object");
    return v;
}

/// Parse with line/column diagnostics instead of nlohmann's byte offsets.
inline json parse_document(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(what, "line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": " + e.what());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open file");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace fgwp::detail
