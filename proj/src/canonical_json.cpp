#include "mulepatrol/canonical_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mulepatrol/error.hpp"

namespace mule {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void emit_string(std::string& out, const std::string& s) {
  // nlohmann's dump handles escaping of a lone string value.
  out += Json(s).dump();
}

void emit(std::string& out, const Json& v, int depth) {
  const auto indent = [&out](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        emit_string(out, key);
        out += ": ";
        emit(out, item, depth + 1);
      }
      out += "\n";
      indent(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        emit(out, item, depth + 1);
      }
      out += "\n";
      indent(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      if (!std::isfinite(v.get<double>())) throw InternalError("non-finite number in output document");
      out += format_number(v.get<double>());
      return;
    case Json::value_t::string:
      emit_string(out, v.get<std::string>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string dump_canonical(const Json& doc) {
  std::string out;
  emit(out, doc, 0);
  out += "\n";
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

namespace {

const Json& member(const Json& obj, std::string_view key) {
  if (!obj.is_object()) throw ParseError("expected an object while reading '" + std::string(key) + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key '" + std::string(key) + "'");
  return *it;
}

}  // namespace

double get_number(const Json& obj, std::string_view key) {
  const Json& v = member(obj, key);
  if (!v.is_number()) throw ParseError("key '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

long long get_integer(const Json& obj, std::string_view key) {
  const Json& v = member(obj, key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<long long>(d);
  }
  throw ParseError("key '" + std::string(key) + "' must be an integer");
}

std::string get_string(const Json& obj, std::string_view key) {
  const Json& v = member(obj, key);
  if (!v.is_string()) throw ParseError("key '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

const Json& get_array(const Json& obj, std::string_view key) {
  const Json& v = member(obj, key);
  if (!v.is_array()) throw ParseError("key '" + std::string(key) + "' must be an array");
  return v;
}

const Json& get_object(const Json& obj, std::string_view key) {
  const Json& v = member(obj, key);
  if (!v.is_object()) throw ParseError("key '" + std::string(key) + "' must be an object");
  return v;
}

}  // namespace mule
