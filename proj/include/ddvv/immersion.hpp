#pragma once

// Parametric immersions x: box in R^3 -> S^5, R^5 or H^5, either built in
// (generic evaluators threading reals or jets) or parsed from a text file.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ddvv/errors.hpp"
#include "ddvv/expression.hpp"
#include "ddvv/jet.hpp"
#include "ddvv/sampling.hpp"

namespace ddvv {

enum class AmbientKind { sphere, euclidean, hyperbolic };

struct AmbientModel {
  AmbientKind kind = AmbientKind::sphere;
  int ambient_dim = 5;
  double c = 1.0;

  static AmbientModel sphere() { return {AmbientKind::sphere, 5, 1.0}; }
  static AmbientModel euclidean() { return {AmbientKind::euclidean, 5, 0.0}; }
  static AmbientModel hyperbolic() { return {AmbientKind::hyperbolic, 5, -1.0}; }

  /// Coordinates of the model space: R^6 for S^5, R^5, R^6_1 for H^5.
  int coordinate_count() const { return kind == AmbientKind::euclidean ? ambient_dim : ambient_dim + 1; }

  std::string name() const {
    switch (kind) {
      case AmbientKind::sphere: return "sphere";
      case AmbientKind::euclidean: return "euclidean";
      case AmbientKind::hyperbolic: return "hyperbolic";
    }
    return "?";
  }
};

/// Inner product of the model space (Lorentzian, time first, for H^5).
template <class T>
T ambient_dot(const AmbientModel& m, const std::vector<T>& a, const std::vector<T>& b) {
  T s = a[0] * b[0];
  if (m.kind == AmbientKind::hyperbolic) s = -s;
  for (std::size_t k = 1; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// Map evaluable over reals and over jets.
class ChartMap {
public:
  virtual ~ChartMap() = default;
  virtual std::vector<double> operator()(const std::array<double, 3>& u) const = 0;
  virtual std::vector<Jet> operator()(const std::array<Jet, 3>& u) const = 0;
};

namespace detail {

template <class F>
class GenericChartMap final : public ChartMap {
public:
  explicit GenericChartMap(F f) : f_(std::move(f)) {}
  std::vector<double> operator()(const std::array<double, 3>& u) const override { return f_(u); }
  std::vector<Jet> operator()(const std::array<Jet, 3>& u) const override { return f_(u); }

private:
  F f_;
};

}  // namespace detail

/// Wraps a generic callable `f(const std::array<T,3>&) -> std::vector<T>`.
template <class F>
std::shared_ptr<const ChartMap> make_chart_map(F f) {
  return std::make_shared<detail::GenericChartMap<F>>(std::move(f));
}

struct ImmersionSpec {
  std::string name;
  AmbientModel ambient;
  Box domain{};
  std::shared_ptr<const ChartMap> map;
  std::vector<Expr> components;  // empty for built-in evaluators
};

/// Position x(p).
inline std::vector<double> eval_immersion(const ImmersionSpec& spec, const ChartPoint& p) {
  return (*spec.map)(p);
}

/// Order-`order` jets of every ambient coordinate of x at p.
inline std::vector<Jet> eval_immersion_jet(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  std::array<Jet, 3> u;
  for (int a = 0; a < 3; ++a) u[a] = Jet::variable(a, p[a], order);
  std::vector<Jet> x = (*spec.map)(u);
  if (static_cast<int>(x.size()) != spec.ambient.coordinate_count())
    throw ShapeError("immersion '" + spec.name + "' returned " + std::to_string(x.size()) + " components");
  // A constant component comes back at maximal order.
  for (auto& c : x)
    if (c.order() > order) c = c.truncated(order);
  return x;
}

/// Max violation of the ambient constraint over the sample.
inline double validate_ambient(const ImmersionSpec& spec, const std::vector<ChartPoint>& sample) {
  if (spec.ambient.kind == AmbientKind::euclidean) return 0.0;
  double worst = 0.0;
  for (const auto& p : sample) {
    const auto x = eval_immersion(spec, p);
    const double q = ambient_dot(spec.ambient, x, x);
    const double r = spec.ambient.kind == AmbientKind::sphere ? std::abs(q - 1.0) : std::abs(q + 1.0);
    worst = std::max(worst, r);
  }
  return worst;
}

/// Built-in immersion from a generic evaluator.
template <class F>
ImmersionSpec make_immersion(std::string name, AmbientModel ambient, Box domain, F f) {
  ImmersionSpec s;
  s.name = std::move(name);
  s.ambient = ambient;
  s.domain = domain;
  s.map = make_chart_map(std::move(f));
  return s;
}

/// Immersion whose coordinates are expression trees.
inline ImmersionSpec make_expression_immersion(std::string name, AmbientModel ambient, Box domain,
                                               std::vector<Expr> components) {
  if (static_cast<int>(components.size()) != ambient.coordinate_count())
    throw SchemaError("ambient " + ambient.name() + " needs " + std::to_string(ambient.coordinate_count()) +
                      " components, got " + std::to_string(components.size()));
  auto exprs = components;
  ImmersionSpec s = make_immersion(std::move(name), ambient, domain, [exprs](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    std::vector<T> x;
    x.reserve(exprs.size());
    for (const auto& e : exprs) x.push_back(evaluate(e, u));
    return x;
  });
  s.components = std::move(components);
  return s;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void parse_fail(int line, int col, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

inline double constant_expression(std::string_view text, int line, int col) {
  Expr e = parse_expression(text, line, col);
  if (uses_variables(e)) parse_fail(line, col + 1, "domain bounds must be constant");
  return evaluate(e, std::array<double, 3>{0.0, 0.0, 0.0});
}

// "u1 in [a,b]; u2 in [c,d]; u3 in [e,f]"; `col0` is the column of text[0].
inline Box parse_domain(std::string_view text, int line, int col0) {
  Box box{};
  std::array<bool, 3> seen{};
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = text.substr(start, end - start);
    std::size_t i = 0;
    auto col = [&] { return col0 + static_cast<int>(start + i) + 1; };
    auto skip = [&] {
      while (i < part.size() && std::isspace(static_cast<unsigned char>(part[i]))) ++i;
    };
    skip();
    if (i + 1 >= part.size() || part[i] != 'u' || part[i + 1] < '1' || part[i + 1] > '3')
      parse_fail(line, col(), "expected u1, u2 or u3 in domain");
    const int axis = part[i + 1] - '1';
    i += 2;
    skip();
    if (part.substr(i, 2) != "in") parse_fail(line, col(), "expected 'in'");
    i += 2;
    skip();
    if (i >= part.size() || part[i] != '[') parse_fail(line, col(), "expected '['");
    ++i;
    const std::size_t comma = part.find(',', i);
    const std::size_t close = part.find(']', i);
    if (comma == std::string_view::npos || close == std::string_view::npos || close < comma)
      parse_fail(line, col(), "expected '[lo, hi]'");
    const double lo = constant_expression(part.substr(i, comma - i), line, col0 + static_cast<int>(start + i));
    const double hi =
        constant_expression(part.substr(comma + 1, close - comma - 1), line, col0 + static_cast<int>(start + comma + 1));
    i = close + 1;
    skip();
    if (i != part.size()) parse_fail(line, col(), "unexpected text after interval");
    if (seen[axis]) throw SchemaError("line " + std::to_string(line) + ": u" + std::to_string(axis + 1) + " given twice");
    if (!(lo < hi)) throw SchemaError("line " + std::to_string(line) + ": empty interval for u" + std::to_string(axis + 1));
    seen[axis] = true;
    box[axis] = {lo, hi};
    start = end + 1;
  }
  for (int a = 0; a < 3; ++a)
    if (!seen[a]) throw SchemaError("line " + std::to_string(line) + ": domain misses u" + std::to_string(a + 1));
  return box;
}

}  // namespace detail

/// Parses the line-oriented immersion format:
///
///   ambient: sphere | euclidean | hyperbolic
///   name: <identifier>
///   domain: u1 in [a,b]; u2 in [c,d]; u3 in [e,f]
///   x1 = <expression>
///   ...
///
/// Lines starting with '#' are comments.
inline ImmersionSpec parse_immersion(std::string_view text) {
  std::optional<AmbientModel> ambient;
  std::optional<std::string> name;
  std::optional<Box> domain;
  std::map<int, Expr> comps;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++line_no;
    pos = eol + 1;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const int indent = static_cast<int>(line.data() - raw.data());

    auto header = [&](std::string_view key) -> std::optional<std::string_view> {
      if (line.substr(0, key.size()) != key) return std::nullopt;
      std::string_view rest = line.substr(key.size());
      std::string_view t = detail::trim(rest);
      if (t.empty() || t.front() != ':') return std::nullopt;
      return t.substr(1);
    };
    auto duplicate = [&](std::string_view key) {
      throw SchemaError("line " + std::to_string(line_no) + ": duplicate '" + std::string(key) + "'");
    };

    if (auto v = header("ambient")) {
      if (ambient) duplicate("ambient");
      const std::string_view k = detail::trim(*v);
      if (k == "sphere") ambient = AmbientModel::sphere();
      else if (k == "euclidean") ambient = AmbientModel::euclidean();
      else if (k == "hyperbolic") ambient = AmbientModel::hyperbolic();
      else
        detail::parse_fail(line_no, indent + static_cast<int>(k.data() - line.data()) + 1,
                           "unknown ambient '" + std::string(k) + "'");
    } else if (auto v = header("name")) {
      if (name) duplicate("name");
      const std::string_view k = detail::trim(*v);
      const bool ok = !k.empty() && (std::isalpha(static_cast<unsigned char>(k[0])) || k[0] == '_') &&
                      std::all_of(k.begin(), k.end(), [](char ch) {
                        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
                      });
      if (!ok)
        detail::parse_fail(line_no, indent + static_cast<int>(k.data() - line.data()) + 1, "invalid name");
      name = std::string(k);
    } else if (auto v = header("domain")) {
      if (domain) duplicate("domain");
      domain = detail::parse_domain(*v, line_no, indent + static_cast<int>(v->data() - line.data()));
    } else if (line.front() == 'x') {
      std::size_t i = 1;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t eq = line.find('=', i);
      if (i == 1 || eq == std::string_view::npos || !detail::trim(line.substr(i, eq - i)).empty())
        detail::parse_fail(line_no, indent + static_cast<int>(i) + 1, "expected 'xK = <expression>'");
      const int k = std::stoi(std::string(line.substr(1, i - 1)));
      if (comps.count(k)) duplicate("x" + std::to_string(k));
      comps[k] = parse_expression(line.substr(eq + 1), line_no, indent + static_cast<int>(eq + 1));
    } else {
      detail::parse_fail(line_no, indent + 1, "unrecognized line");
    }
  }
  if (!ambient) throw SchemaError("missing 'ambient'");
  if (!name) throw SchemaError("missing 'name'");
  if (!domain) throw SchemaError("missing 'domain'");
  const int want = ambient->coordinate_count();
  std::vector<Expr> components;
  for (int k = 1; k <= want; ++k) {
    auto it = comps.find(k);
    if (it == comps.end())
      throw SchemaError("ambient " + ambient->name() + " needs x1..x" + std::to_string(want) + "; x" +
                        std::to_string(k) + " missing");
    components.push_back(it->second);
  }
  if (static_cast<int>(comps.size()) != want)
    throw SchemaError("ambient " + ambient->name() + " needs exactly " + std::to_string(want) + " components, got " +
                      std::to_string(comps.size()));
  return make_expression_immersion(*name, *ambient, *domain, std::move(components));
}

inline ImmersionSpec load_immersion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_immersion(ss.str());
}

/// File form of an expression-backed spec.
inline std::string immersion_text(const ImmersionSpec& spec) {
  if (spec.components.empty()) throw SchemaError("'" + spec.name + "' is built in and has no file form");
  std::ostringstream os;
  os.precision(17);
  os << "ambient: " << spec.ambient.name() << "\n";
  os << "name: " << spec.name << "\n";
  os << "domain:";
  for (int a = 0; a < 3; ++a)
    os << (a ? "; " : " ") << "u" << a + 1 << " in [" << spec.domain[a].lo << ", " << spec.domain[a].hi << "]";
  os << "\n";
  for (std::size_t k = 0; k < spec.components.size(); ++k)
    os << "x" << k + 1 << " = " << to_string(spec.components[k]) << "\n";
  return os.str();
}

}  // namespace ddvv
