#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mule {

using Json = nlohmann::ordered_json;

/// Shortest "%.12g" rendering; -0 is printed as 0.
std::string format_number(double v);

/// Pretty-printed (2-space indent) JSON with insertion-ordered keys and
/// numbers limited to 12 significant digits. Equal documents give equal
/// bytes.
std::string dump_canonical(const Json& doc);

/// Parses JSON text, rethrowing parser failures as ParseError.
Json parse_json(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Typed accessors that raise ParseError with the offending key.
double get_number(const Json& obj, std::string_view key);
long long get_integer(const Json& obj, std::string_view key);
std::string get_string(const Json& obj, std::string_view key);
const Json& get_array(const Json& obj, std::string_view key);
const Json& get_object(const Json& obj, std::string_view key);

}  // namespace mule
