#pragma once

// Ordered JSON values with a fixed 17-significant-digit number format, and
// flat CSV export of per-point records.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ddvv {

class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;  // insertion order is output order

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<long long>(i)) {}
  Json(long long i) : v_(i) {}
  Json(std::uint64_t i) : v_(static_cast<long long>(i)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}
  Json(Object o) : v_(std::move(o)) {}

  static Json array() { return Json(Array{}); }
  static Json object() { return Json(Object{}); }
  template <class Seq>
  static Json numbers(const Seq& s) {
    Array a;
    for (const auto& x : s) a.emplace_back(static_cast<double>(x));
    return Json(std::move(a));
  }

  bool is_object() const { return std::holds_alternative<Object>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }

  /// Object member access; inserts at the end when absent.
  Json& operator[](const std::string& key) {
    if (std::holds_alternative<std::nullptr_t>(v_)) v_ = Object{};
    auto& o = std::get<Object>(v_);
    for (auto& kv : o)
      if (kv.first == key) return kv.second;
    o.emplace_back(key, Json());
    return o.back().second;
  }
  void push_back(Json j) {
    if (std::holds_alternative<std::nullptr_t>(v_)) v_ = Array{};
    std::get<Array>(v_).push_back(std::move(j));
  }
  const Object& items() const { return std::get<Object>(v_); }
  const Array& elements() const { return std::get<Array>(v_); }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    return out;
  }

  static std::string number(double d) {
    if (!std::isfinite(d)) return "null";
    if (d == 0.0) d = 0.0;  // no negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }

  /// Scalar as a CSV cell.
  std::string cell() const {
    if (auto* d = std::get_if<double>(&v_)) return number(*d);
    if (auto* i = std::get_if<long long>(&v_)) return std::to_string(*i);
    if (auto* b = std::get_if<bool>(&v_)) return *b ? "true" : "false";
    if (auto* s = std::get_if<std::string>(&v_)) return *s;
    return "";
  }

 private:
  std::variant<std::nullptr_t, bool, long long, double, std::string, Array, Object> v_;

  static void quote(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += static_cast<char>(c);
          }
      }
    }
    out += '"';
  }

  static bool flat(const Array& a) {
    for (const auto& x : a)
      if (x.is_array() || x.is_object()) return false;
    return true;
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    if (std::holds_alternative<std::nullptr_t>(v_)) out += "null";
    else if (auto* b = std::get_if<bool>(&v_)) out += *b ? "true" : "false";
    else if (auto* i = std::get_if<long long>(&v_)) out += std::to_string(*i);
    else if (auto* d = std::get_if<double>(&v_)) out += number(*d);
    else if (auto* s = std::get_if<std::string>(&v_)) quote(out, *s);
    else if (auto* a = std::get_if<Array>(&v_)) {
      if (a->empty()) { out += "[]"; return; }
      if (flat(*a)) {  // short numeric rows stay on one line
        out += '[';
        for (std::size_t k = 0; k < a->size(); ++k) {
          if (k) out += ", ";
          (*a)[k].write(out, indent, depth + 1);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < a->size(); ++k) {
        out += pad;
        (*a)[k].write(out, indent, depth + 1);
        out += k + 1 < a->size() ? ",\n" : "\n";
      }
      out += close + "]";
    } else {
      const auto& o = std::get<Object>(v_);
      if (o.empty()) { out += "{}"; return; }
      out += "{\n";
      for (std::size_t k = 0; k < o.size(); ++k) {
        out += pad;
        quote(out, o[k].first);
        out += ": ";
        o[k].second.write(out, indent, depth + 1);
        out += k + 1 < o.size() ? ",\n" : "\n";
      }
      out += close + "}";
    }
  }

  friend void flatten_into(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out);
};

/// Nested keys joined with '.', array entries suffixed _1, _2, ...
inline void flatten_into(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten_into(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    const auto& a = j.elements();
    for (std::size_t k = 0; k < a.size(); ++k) flatten_into(a[k], prefix + "_" + std::to_string(k + 1), out);
  } else {
    out.emplace_back(prefix, j.cell());
  }
}

/// One header row and one row per record. Columns follow the first record;
/// cells missing from later records are left empty.
inline std::string records_csv(const std::vector<Json>& records) {
  if (records.empty()) return "";
  std::vector<std::vector<std::pair<std::string, std::string>>> rows;
  for (const auto& r : records) {
    rows.emplace_back();
    flatten_into(r, "", rows.back());
  }
  std::vector<std::string> cols;
  for (const auto& [k, v] : rows.front()) cols.push_back(k);
  std::ostringstream os;
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << "\n";
  for (const auto& row : rows) {
    std::map<std::string, std::string> m(row.begin(), row.end());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto it = m.find(cols[c]);
      os << (c ? "," : "") << (it == m.end() ? "" : it->second);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ddvv
