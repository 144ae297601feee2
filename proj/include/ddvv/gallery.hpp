#pragma once

// Built-in examples with known ground truth, negative controls, and
// generators of Moebius transforms.

#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ddvv/immersion.hpp"
#include "ddvv/moebius.hpp"
#include "ddvv/sampling.hpp"

namespace ddvv {

/// Expected properties of a gallery entry; absent optionals are unknown.
struct Expected {
  bool umbilic = false;   // every point is refused
  bool ideal = false;     // DDVV equality everywhere
  bool minimal = false;   // H = 0 in the ambient space form
  bool L_zero = false;    // integrable canonical distribution
  bool C_zero = false;
  bool UV_zero = false;
  bool G_zero = false;
  bool domega_zero = false;
  bool hopf = false;      // satisfies dω = 0 and G = 0
  std::optional<double> rho, mu, L, Fhat, theta3;
  std::optional<double> min_slack;  // strict inequality at the basepoint
  std::string classification;       // expected Theorem B verdict, if any
  std::string provenance;
};

struct GalleryEntry {
  ImmersionSpec spec;
  Expected expected;
  std::string description;
};

inline std::vector<ChartPoint> sample_plan(const GalleryEntry& g, int count, std::uint64_t seed) {
  return sample_box(g.spec.domain, count, seed);
}

inline ChartPoint basepoint(const GalleryEntry& g) { return box_center(g.spec.domain); }

namespace detail {

constexpr double kPi = 3.14159265358979323846;

template <class T>
struct Cx {
  T re, im;
};

template <class T>
Cx<T> cx_mul(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

}  // namespace detail

/// R = Rz(phi) Ry(psi) Rz(chi); x = (R e_1, R e_2) / sqrt(2).
inline GalleryEntry so3_example() {
  const double pi = detail::kPi;
  GalleryEntry g;
  g.spec = make_immersion("so3", AmbientModel::sphere(), Box{{{0.0, 2 * pi}, {0.3, pi - 0.3}, {0.0, 2 * pi}}},
                          [](const auto& u) {
                            using T = typename std::decay_t<decltype(u)>::value_type;
                            const T cf = cos(u[0]), sf = sin(u[0]), cp = cos(u[1]), sp = sin(u[1]);
                            const T cc = cos(u[2]), sc = sin(u[2]);
                            const double k = 1.0 / std::sqrt(2.0);
                            return std::vector<T>{k * (cf * cp * cc - sf * sc), k * (sf * cp * cc + cf * sc),
                                                  k * (-(sp * cc)),           k * (-(cf * cp * sc) - sf * cc),
                                                  k * (cf * cc - sf * cp * sc), k * (sp * sc)};
                          });
  Expected& e = g.expected;
  e.ideal = e.minimal = e.C_zero = e.UV_zero = e.G_zero = e.domega_zero = e.hopf = true;
  e.rho = std::sqrt(6.0);
  e.mu = 1.0 / std::sqrt(6.0);
  e.L = 1.0 / std::sqrt(6.0);
  e.theta3 = 1.0 / std::sqrt(6.0);
  e.Fhat = 1.0 / 12.0;
  e.classification = "sphere_minimal";
  e.provenance =
      "rho = sqrt 6, C = 0, L = mu = 1/sqrt 6 and theta_12 = omega_3/sqrt 6 are stated for the homogeneous "
      "example; Fhat = L^2/2 = 1/12; U = V = 0 and d omega = 0 follow from C = 0 and constant rho";
  g.description = "homogeneous SO(3) orbit (u, v) / sqrt 2 in S^5; Euler chart with psi away from 0 and pi";
  return g;
}

using ComplexPoly = std::vector<std::complex<double>>;  // coefficients of 1, z, z^2, ...

/// Circle bundle over the curve gamma = (p1, p2, p3) through the Hopf map:
/// (s, t, theta) -> e^{i theta} gamma(s + i t) / |gamma(s + i t)| in C^3 = R^6.
inline GalleryEntry hopf_lift_curve(const std::array<ComplexPoly, 3>& poly, std::string name = "hopf-lift",
                                    Box domain = Box{{{-1.0, 1.0}, {-1.0, 1.0}, {0.0, 2 * detail::kPi}}}) {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const std::complex<double> z(domain[0].lo + (domain[0].hi - domain[0].lo) * i / 20.0,
                                   domain[1].lo + (domain[1].hi - domain[1].lo) * j / 20.0);
      double n2 = 0.0;
      for (const auto& p : poly) {
        std::complex<double> v = 0.0;
        for (std::size_t k = p.size(); k-- > 0;) v = v * z + p[k];
        n2 += std::norm(v);
      }
      if (!(n2 > 1e-12)) throw DegenerateCurve("curve vanishes at z = " + std::to_string(z.real()) + " + " +
                                               std::to_string(z.imag()) + "i");
    }
  GalleryEntry g;
  g.spec = make_immersion(std::move(name), AmbientModel::sphere(), domain, [poly](const auto& u) {
    using T = typename std::decay_t<decltype(u)>::value_type;
    const detail::Cx<T> z{u[0], u[1]};
    std::array<detail::Cx<T>, 3> w;
    T n2 = T{} + 0.0;
    for (int a = 0; a < 3; ++a) {
      detail::Cx<T> v{T{} + 0.0, T{} + 0.0};
      for (std::size_t k = poly[a].size(); k-- > 0;) {
        v = detail::cx_mul(v, z);
        v.re = v.re + poly[a][k].real();
        v.im = v.im + poly[a][k].imag();
      }
      w[a] = v;
      n2 = n2 + v.re * v.re + v.im * v.im;
    }
    const T inv = 1.0 / sqrt(n2);
    const T c = cos(u[2]), s = sin(u[2]);
    std::vector<T> x(6);
    for (int a = 0; a < 3; ++a) {
      x[2 * a] = (c * w[a].re - s * w[a].im) * inv;
      x[2 * a + 1] = (s * w[a].re + c * w[a].im) * inv;
    }
    return x;
  });
  Expected& e = g.expected;
  e.ideal = e.minimal = e.G_zero = e.domega_zero = e.hopf = true;
  e.mu = 1.0 / std::sqrt(6.0);
  e.classification = "sphere_minimal";
  e.provenance = "Hopf lifts of complex curves are minimal Wintgen ideal in S^5 with d omega = 0 and G = 0";
  g.description = "Hopf lift of a holomorphic curve in CP^2";
  return g;
}

inline GalleryEntry veronese_hopf_example() {
  GalleryEntry g = hopf_lift_curve({ComplexPoly{1.0}, ComplexPoly{0.0, std::sqrt(2.0)}, ComplexPoly{0.0, 0.0, 1.0}},
                                   "veronese-hopf");
  g.description = "Hopf lift of the Veronese curve (1, sqrt 2 z, z^2)";
  return g;
}

inline GalleryEntry cubic_hopf_example() {
  GalleryEntry g = hopf_lift_curve({ComplexPoly{1.0}, ComplexPoly{0.0, 1.0}, ComplexPoly{0.0, 0.0, 0.0, 1.0}},
                                   "cubic-hopf", Box{{{0.3, 1.0}, {0.2, 0.8}, {0.0, 2 * detail::kPi}}});
  g.description = "Hopf lift of the cubic (1, z, z^3), away from its inflection at z = 0";
  return g;
}

/// Cone t * sigma(a, b) in R^5 over the Veronese surface sigma: S^2 -> S^4.
inline GalleryEntry cone_over_veronese() {
  GalleryEntry g;
  g.spec = make_immersion("cone", AmbientModel::euclidean(), Box{{{0.4, 1.2}, {0.2, 1.4}, {0.5, 2.0}}},
                          [](const auto& u) {
                            using T = typename std::decay_t<decltype(u)>::value_type;
                            const T sa = sin(u[0]);
                            const T X = sa * cos(u[1]), Y = sa * sin(u[1]), Z = cos(u[0]);
                            const double r3 = std::sqrt(3.0);
                            const T k = r3 * u[2];
                            return std::vector<T>{k * (X * Y), k * (X * Z), k * (Y * Z), k * (0.5 * (X * X - Y * Y)),
                                                  k * ((X * X + Y * Y - 2.0 * (Z * Z)) / (2.0 * r3))};
                          });
  Expected& e = g.expected;
  e.ideal = e.minimal = e.L_zero = true;
  e.mu = 1.0 / std::sqrt(6.0);
  e.provenance = "cones over minimal Wintgen ideal surfaces are Wintgen ideal with integrable distribution";
  g.description = "cone over the Veronese surface in S^4; spherical chart off the poles, t in [0.5, 2]";
  return g;
}

/// Totally umbilic 3-sphere of radius 0.6 in S^5.
inline GalleryEntry umbilic_control() {
  GalleryEntry g;
  g.spec = make_immersion("umbilic-control", AmbientModel::sphere(),
                          Box{{{0.3, 1.2}, {0.0, 2 * detail::kPi}, {0.0, 2 * detail::kPi}}}, [](const auto& u) {
                            using T = typename std::decay_t<decltype(u)>::value_type;
                            const double r = 0.6;
                            const T ca = r * cos(u[0]), sa = r * sin(u[0]);
                            return std::vector<T>{ca * cos(u[1]), ca * sin(u[1]), sa * cos(u[2]), sa * sin(u[2]),
                                                  T{} + std::sqrt(1.0 - r * r), T{} + 0.0};
                          });
  g.expected.umbilic = true;
  g.expected.provenance = "II is proportional to the metric";
  g.description = "small round 3-sphere in S^5 (negative control: refused everywhere)";
  return g;
}

/// Flat torus (cos u_k, sin u_k) / sqrt 3 with an asymmetric polynomial bump, renormalized.
inline GalleryEntry generic_control() {
  GalleryEntry g;
  g.spec = make_immersion("generic-control", AmbientModel::sphere(), Box{{{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}},
                          [](const auto& u) {
                            using T = typename std::decay_t<decltype(u)>::value_type;
                            const double k = 1.0 / std::sqrt(3.0);
                            std::vector<T> v{k * cos(u[0]) + 0.3 * (u[0] * u[1]),
                                             k * sin(u[0]) + 0.15 * (u[2] * u[2]),
                                             k * cos(u[1]) - 0.09 * u[0],
                                             k * sin(u[1]) + 0.06 * (u[1] * u[2]),
                                             k * cos(u[2]) + 0.21 * (u[0] * u[0]),
                                             k * sin(u[2]) - 0.12 * u[1]};
                            T n2 = v[0] * v[0];
                            for (int i = 1; i < 6; ++i) n2 = n2 + v[i] * v[i];
                            const T inv = 1.0 / sqrt(n2);
                            for (auto& c : v) c = c * inv;
                            return v;
                          });
  g.expected.min_slack = 0.01;
  g.expected.provenance = "perturbed flat torus; the unperturbed torus has DDVV slack 1";
  g.description = "generic non-ideal immersion in S^5 (negative control)";
  return g;
}

/// Fixed Moebius image of the SO(3) example: a rapidity-0.5 boost after a rotation.
inline LorentzMatrix so3_boost() {
  CounterRng rng(20260);
  Eigen::Matrix<double, 6, 1> n;
  for (int i = 0; i < 6; ++i) n[i] = rng.normal();
  n.normalize();
  LorentzMatrix R = random_lorentz(77, 0.0);
  return lorentz_boost(n, 0.5) * R;
}

inline GalleryEntry so3_boosted() {
  GalleryEntry base = so3_example();
  GalleryEntry g;
  g.spec = conformal_transform(base.spec, so3_boost());
  g.spec.name = "so3-boosted";
  g.expected = base.expected;
  g.expected.rho.reset();
  g.expected.C_zero = g.expected.UV_zero = g.expected.domega_zero = true;
  g.expected.minimal = false;
  g.expected.provenance = "Moebius image of so3: every Moebius invariant of so3 carries over";
  g.description = "SO(3) example after a fixed Lorentz transform of rapidity 0.5";
  return g;
}

inline std::vector<GalleryEntry> control_examples() { return {umbilic_control(), generic_control()}; }

inline std::vector<GalleryEntry> gallery() {
  return {so3_example(), veronese_hopf_example(), cubic_hopf_example(), cone_over_veronese(),
          so3_boosted(), umbilic_control(),       generic_control()};
}

inline GalleryEntry gallery_entry(const std::string& name) {
  for (auto& g : gallery())
    if (g.spec.name == name) return g;
  throw NameError("no gallery entry named '" + name + "'");
}

namespace detail {

inline std::string poly_text(const ComplexPoly& p, bool imag_part) {
  // z^k = re_k + i im_k with z = u1 + i u2, expanded textually.
  std::vector<std::string> re{"1"}, im{"0"};
  for (std::size_t k = 1; k < p.size(); ++k) {
    re.push_back("(" + re.back() + ")*u1 - (" + im.back() + ")*u2");
    im.push_back("(" + re[k - 1] + ")*u2 + (" + im.back() + ")*u1");
  }
  std::ostringstream os;
  os.precision(17);
  bool any = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = imag_part ? p[k].imag() : p[k].real();
    const double b = imag_part ? p[k].real() : -p[k].imag();
    for (auto [coef, part] : {std::pair{a, &re}, std::pair{b, &im}}) {
      if (coef == 0.0) continue;
      os << (any ? " + " : "") << "(" << coef << ")*(" << (*part)[k] << ")";
      any = true;
    }
  }
  return any ? os.str() : "0";
}

}  // namespace detail

/// Immersion-file text of an expression-backed form of a Hopf lift.
inline std::string hopf_lift_text(const std::array<ComplexPoly, 3>& poly, const std::string& name, const Box& box) {
  std::ostringstream os;
  os.precision(17);
  os << "ambient: sphere\nname: " << name << "\n";
  os << "domain: u1 in [" << box[0].lo << ", " << box[0].hi << "]; u2 in [" << box[1].lo << ", " << box[1].hi
     << "]; u3 in [" << box[2].lo << ", " << box[2].hi << "]\n";
  std::array<std::string, 3> re, im;
  std::string n2;
  for (int a = 0; a < 3; ++a) {
    re[a] = detail::poly_text(poly[a], false);
    im[a] = detail::poly_text(poly[a], true);
    n2 += (a ? " + " : "") + std::string("(") + re[a] + ")^2 + (" + im[a] + ")^2";
  }
  for (int a = 0; a < 3; ++a) {
    os << "x" << 2 * a + 1 << " = (cos(u3)*(" << re[a] << ") - sin(u3)*(" << im[a] << ")) / sqrt(" << n2 << ")\n";
    os << "x" << 2 * a + 2 << " = (sin(u3)*(" << re[a] << ") + cos(u3)*(" << im[a] << ")) / sqrt(" << n2 << ")\n";
  }
  return os.str();
}

inline std::string so3_text() {
  return "# R = Rz(u1) Ry(u2) Rz(u3), x = (R e1, R e2) / sqrt(2)\n"
         "ambient: sphere\n"
         "name: so3\n"
         "domain: u1 in [0, 2*pi]; u2 in [0.3, pi - 0.3]; u3 in [0, 2*pi]\n"
         "x1 = (cos(u1)*cos(u2)*cos(u3) - sin(u1)*sin(u3)) / sqrt(2)\n"
         "x2 = (sin(u1)*cos(u2)*cos(u3) + cos(u1)*sin(u3)) / sqrt(2)\n"
         "x3 = -(sin(u2)*cos(u3)) / sqrt(2)\n"
         "x4 = (-(cos(u1)*cos(u2)*sin(u3)) - sin(u1)*cos(u3)) / sqrt(2)\n"
         "x5 = (cos(u1)*cos(u3) - sin(u1)*cos(u2)*sin(u3)) / sqrt(2)\n"
         "x6 = (sin(u2)*sin(u3)) / sqrt(2)\n";
}

/// File form of a gallery entry, where one exists (the cone and the
/// controls are built in only).
inline std::optional<std::string> gallery_expression_text(const std::string& name) {
  if (name == "so3") return so3_text();
  if (name == "veronese-hopf")
    return hopf_lift_text({ComplexPoly{1.0}, ComplexPoly{0.0, std::sqrt(2.0)}, ComplexPoly{0.0, 0.0, 1.0}}, name,
                          gallery_entry(name).spec.domain);
  if (name == "cubic-hopf")
    return hopf_lift_text({ComplexPoly{1.0}, ComplexPoly{0.0, 1.0}, ComplexPoly{0.0, 0.0, 0.0, 1.0}}, name,
                          gallery_entry(name).spec.domain);
  return std::nullopt;
}

}  // namespace ddvv
