#pragma once

// Classical invariants of x at a chart point: induced metric, orthonormal
// frames, second fundamental form, the DDVV report, and the adapted frame
// in which the shape operators of an ideal point take their normal form.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ddvv/errors.hpp"
#include "ddvv/immersion.hpp"
#include "ddvv/tensor.hpp"

namespace ddvv {

using AmbientVec = std::vector<Jet>;

namespace detail {

inline AmbientVec axpy(const Jet& s, const AmbientVec& v, AmbientVec acc) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] + s * v[k];
  return acc;
}

inline AmbientVec scaled(const Jet& s, const AmbientVec& v) {
  AmbientVec r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = s * v[k];
  return r;
}

inline double value_dot(const AmbientModel& m, const AmbientVec& a, const AmbientVec& b) {
  double s = a[0].value() * b[0].value();
  if (m.kind == AmbientKind::hyperbolic) s = -s;
  for (std::size_t k = 1; k < a.size(); ++k) s += a[k].value() * b[k].value();
  return s;
}

}  // namespace detail

/// Jets of the classical data; x has the input order K, first derivatives
/// and frames K-1, second fundamental form K-2.
struct ClassicalJets {
  AmbientModel ambient;
  int order = 0;
  std::vector<Jet> x;
  std::array<AmbientVec, 3> dx;
  std::array<std::array<AmbientVec, 3>, 3> ddx;
  Mat3<Jet> metric;  // induced metric in chart coordinates
  Mat3<Jet> F;       // e_i = sum_a F[i][a] d_a x
  std::array<AmbientVec, 3> e;
  std::array<AmbientVec, 2> n;
  std::array<Mat3<Jet>, 2> h;
  Vec<Jet, 2> H;
};

inline ClassicalJets classical_jets(const ImmersionSpec& spec, const ChartPoint& p, int order) {
  if (order < 2) throw InsufficientOrder("classical data needs jets of order >= 2");
  const AmbientModel& am = spec.ambient;
  ClassicalJets cj;
  cj.ambient = am;
  cj.order = order;
  cj.x = eval_immersion_jet(spec, p, order);
  const std::size_t D = cj.x.size();
  for (int a = 0; a < 3; ++a) {
    cj.dx[a].resize(D);
    for (std::size_t k = 0; k < D; ++k) cj.dx[a][k] = cj.x[k].derivative(a);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      cj.ddx[a][b].resize(D);
      for (std::size_t k = 0; k < D; ++k) cj.ddx[a][b][k] = cj.dx[a][k].derivative(b);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) cj.metric[a][b] = cj.metric[b][a] = ambient_dot(am, cj.dx[a], cj.dx[b]);

  const Mat3<double> I0 = value(cj.metric);
  const double tr = (I0[0][0] + I0[1][1] + I0[2][2]) / 3.0;
  if (!(det3(I0) > 1e-12 * tr * tr * tr))
    throw NotImmersed("degenerate induced metric at (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ", " +
                      std::to_string(p[2]) + ")");

  // Gram-Schmidt on d_1 x, d_2 x, d_3 x, carried out on chart coefficients.
  const int fo = order - 1;
  auto inner = [&](const Vec3<Jet>& u, const Vec3<Jet>& v) {
    Jet s = Jet::constant(0.0, fo);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) s = s + u[a] * cj.metric[a][b] * v[b];
    return s;
  };
  std::array<Vec3<Jet>, 3> f;
  for (int i = 0; i < 3; ++i) {
    Vec3<Jet> v;
    for (int a = 0; a < 3; ++a) v[a] = Jet::constant(a == i ? 1.0 : 0.0, fo);
    for (int j = 0; j < i; ++j) v = v - inner(v, f[j]) * f[j];
    f[i] = (1.0 / sqrt(inner(v, v))) * v;
  }
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a) cj.F[i][a] = f[i][a];
    cj.e[i] = AmbientVec(D, Jet::constant(0.0, fo));
    for (int a = 0; a < 3; ++a) cj.e[i] = detail::axpy(f[i][a], cj.dx[a], cj.e[i]);
  }

  // Normals: Gram-Schmidt on the coordinate axes with the largest residual
  // after removing the tangent and (for S^5, H^5) position directions.
  const double xsign = am.kind == AmbientKind::hyperbolic ? 1.0 : -1.0;
  auto project = [&](AmbientVec v, int normals_done) {
    for (int i = 0; i < 3; ++i) v = detail::axpy(-ambient_dot(am, v, cj.e[i]), cj.e[i], v);
    for (int r = 0; r < normals_done; ++r) v = detail::axpy(-ambient_dot(am, v, cj.n[r]), cj.n[r], v);
    if (am.kind != AmbientKind::euclidean) v = detail::axpy(xsign * ambient_dot(am, v, cj.x), cj.x, v);
    return v;
  };
  std::vector<bool> used(D, false);
  for (int r = 0; r < 2; ++r) {
    int best = -1;
    double best_norm = -1.0;
    AmbientVec best_v;
    for (std::size_t k = 0; k < D; ++k) {
      if (used[k]) continue;
      AmbientVec axis(D, Jet::constant(0.0, fo));
      axis[k] = Jet::constant(1.0, fo);
      AmbientVec v = project(axis, r);
      const double nv = detail::value_dot(am, v, v);
      if (nv > best_norm) {
        best_norm = nv;
        best = static_cast<int>(k);
        best_v = std::move(v);
      }
    }
    used[best] = true;
    cj.n[r] = detail::scaled(1.0 / sqrt(ambient_dot(am, best_v, best_v)), best_v);
  }
  // Orientation: det[x, e_1, e_2, e_3, n_1, n_2] > 0 (without x in R^5).
  {
    Eigen::MatrixXd M(D, D);
    int rowi = 0;
    auto put = [&](const AmbientVec& v) {
      for (std::size_t k = 0; k < D; ++k) M(rowi, k) = v[k].value();
      ++rowi;
    };
    if (am.kind != AmbientKind::euclidean) {
      for (std::size_t k = 0; k < D; ++k) M(rowi, k) = cj.x[k].value();
      ++rowi;
    }
    for (const auto& v : cj.e) put(v);
    for (const auto& v : cj.n) put(v);
    if (M.determinant() < 0.0) cj.n[1] = detail::scaled(Jet::constant(-1.0, fo), cj.n[1]);
  }

  for (int r = 0; r < 2; ++r) {
    Mat3<Jet> q;
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) q[a][b] = q[b][a] = ambient_dot(am, cj.ddx[a][b], cj.n[r]);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        Jet s = Jet::constant(0.0, order - 2);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s = s + cj.F[i][a] * cj.F[j][b] * q[a][b];
        cj.h[r][i][j] = cj.h[r][j][i] = s;
      }
    cj.H[r] = (cj.h[r][0][0] + cj.h[r][1][1] + cj.h[r][2][2]) / 3.0;
  }
  return cj;
}

struct ClassicalData {
  AmbientModel ambient;
  Eigen::Matrix3d induced_metric;
  Eigen::Matrix3d tangent_frame;  // row i: chart components of e_i
  std::array<Eigen::VectorXd, 3> tangent_vectors;
  std::array<Eigen::VectorXd, 2> normal_frame;
  std::array<Eigen::Matrix3d, 2> h;
  Eigen::Vector2d H;
  double c = 0.0;
};

inline Eigen::Matrix3d to_eigen(const Mat3<double>& m) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m[i][j];
  return r;
}

inline Eigen::VectorXd to_eigen(const AmbientVec& v) {
  Eigen::VectorXd r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k].value();
  return r;
}

inline ClassicalData classical_values(const ClassicalJets& cj) {
  ClassicalData d;
  d.ambient = cj.ambient;
  d.c = cj.ambient.c;
  d.induced_metric = to_eigen(value(cj.metric));
  d.tangent_frame = to_eigen(value(cj.F));
  for (int i = 0; i < 3; ++i) d.tangent_vectors[i] = to_eigen(cj.e[i]);
  for (int r = 0; r < 2; ++r) {
    d.normal_frame[r] = to_eigen(cj.n[r]);
    d.h[r] = to_eigen(value(cj.h[r]));
    d.H[r] = cj.H[r].value();
  }
  return d;
}

inline ClassicalData fundamental_forms(const ImmersionSpec& spec, const ChartPoint& p) {
  return classical_values(classical_jets(spec, p, 2));
}

struct DDVVReport {
  double s = 0.0;
  double H_norm2 = 0.0;
  double s_N = 0.0;
  double slack = 0.0;
  bool ideal = false;
  double umbilic_measure = 0.0;
  double II_norm2 = 0.0;
};

/// Normalized scalar and normal scalar curvature from the shape data of an
/// M^3 in Q^5(c). Ideality is judged relative to max(1, |II|^2).
inline DDVVReport ddvv_from_shape(const std::array<Eigen::Matrix3d, 2>& h, const Eigen::Vector2d& H, double c,
                                  double tol) {
  DDVVReport rep;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double k = c;
      for (int r = 0; r < 2; ++r) k += h[r](i, i) * h[r](j, j) - h[r](i, j) * h[r](i, j);
      sum += k;
    }
  rep.s = sum / 3.0;
  rep.H_norm2 = H.squaredNorm();
  const Eigen::Matrix3d comm = h[0] * h[1] - h[1] * h[0];
  double rn = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) rn += comm(i, j) * comm(i, j);
  rep.s_N = std::sqrt(rn) / 3.0;
  rep.slack = c + rep.H_norm2 - rep.s_N - rep.s;
  double um = 0.0;
  for (int r = 0; r < 2; ++r) {
    um += (h[r] - H[r] * Eigen::Matrix3d::Identity()).squaredNorm();
    rep.II_norm2 += h[r].squaredNorm();
  }
  rep.umbilic_measure = std::sqrt(um);
  rep.ideal = std::abs(rep.slack) <= tol * std::max(1.0, rep.II_norm2);
  return rep;
}

inline DDVVReport ddvv_report(const ImmersionSpec& spec, const ChartPoint& p, double tol = 1e-7) {
  const ClassicalData d = fundamental_forms(spec, p);
  return ddvv_from_shape(d.h, d.H, d.c, tol);
}

/// (sum |B_r|^2)^2 - 2 sum_{r<s} |[B_r, B_s]|^2 for trace-free symmetric B_r.
inline double ddvv_matrix_gap(const std::vector<Eigen::MatrixXd>& B) {
  if (B.empty()) return 0.0;
  const Eigen::Index m = B[0].rows();
  for (const auto& b : B) {
    if (b.rows() != m || b.cols() != m) throw ShapeError("matrices must all be m x m");
    const double scale = std::max(1.0, b.norm());
    if ((b - b.transpose()).norm() > 1e-12 * scale) throw ShapeError("matrix is not symmetric");
    if (std::abs(b.trace()) > 1e-12 * scale) throw ShapeError("matrix is not trace-free");
  }
  double sq = 0.0;
  for (const auto& b : B) sq += b.squaredNorm();
  double comm = 0.0;
  for (std::size_t r = 0; r < B.size(); ++r)
    for (std::size_t s = r + 1; s < B.size(); ++s) comm += (B[r] * B[s] - B[s] * B[r]).squaredNorm();
  return sq * sq - 2.0 * comm;
}

struct AdaptedFrame {
  Eigen::Matrix3d tangent_rotation;  // row i: new e_i in the old tangent frame
  Eigen::Matrix2d normal_rotation;   // row r: new n_r in the old normal frame
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  double mu0 = 0.0;
  double pattern_residual = 0.0;  // max off-pattern entry
};

/// Shape operators of the adapted frame in the normal form, for comparison.
inline std::array<Eigen::Matrix3d, 2> normal_form(double lambda1, double lambda2, double mu0) {
  std::array<Eigen::Matrix3d, 2> A;
  A[0] = lambda1 * Eigen::Matrix3d::Identity();
  A[0](0, 1) = A[0](1, 0) = mu0;
  A[1] = lambda2 * Eigen::Matrix3d::Identity();
  A[1](0, 0) += mu0;
  A[1](1, 1) -= mu0;
  return A;
}

inline AdaptedFrame adapted_frame(const ClassicalData& d, double tol = 1e-7) {
  const DDVVReport rep = ddvv_from_shape(d.h, d.H, d.c, tol);
  if (rep.umbilic_measure <= tol * std::max(1.0, std::sqrt(rep.II_norm2)))
    throw UmbilicPoint("shape operators are proportional to the identity");
  std::array<Eigen::Matrix3d, 2> B;
  for (int r = 0; r < 2; ++r) B[r] = d.h[r] - d.H[r] * Eigen::Matrix3d::Identity();
  Eigen::Matrix<double, 6, 3> stack;
  stack << B[0], B[1];
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(stack, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv[2] > 1e-6 * sv[0]) throw NotIdealPoint("trace-free shape operators have no common kernel");
  if (!rep.ideal) throw NotIdealPoint("DDVV slack " + std::to_string(rep.slack) + " outside tolerance");
  Eigen::Vector3d e3 = svd.matrixV().col(2);
  int m = 0;
  e3.cwiseAbs().minCoeff(&m);
  Eigen::Vector3d f1 = Eigen::Vector3d::Unit(m) - e3[m] * e3;
  f1.normalize();
  Eigen::Vector3d f2 = e3.cross(f1);
  auto z = [&](int r) { return std::complex<double>(f1.dot(B[r] * f1), f1.dot(B[r] * f2)); };
  const std::complex<double> I(0.0, 1.0);
  if (std::abs(z(0) + I * z(1)) < std::abs(z(0) - I * z(1))) f2 = -f2;
  const std::complex<double> z2 = z(1);
  const double a = std::abs(z2);
  const double c = z2.real() / a, s = z2.imag() / a;

  AdaptedFrame out;
  out.tangent_rotation.row(0) = f1.transpose();
  out.tangent_rotation.row(1) = f2.transpose();
  out.tangent_rotation.row(2) = e3.transpose();
  out.normal_rotation << c, s, -s, c;
  out.mu0 = a;
  out.lambda1 = c * d.H[0] + s * d.H[1];
  out.lambda2 = -s * d.H[0] + c * d.H[1];
  out.lambda3 = 0.0;
  const auto want = normal_form(out.lambda1, out.lambda2, out.mu0);
  const Eigen::Matrix3d& R = out.tangent_rotation;
  for (int r = 0; r < 2; ++r) {
    const Eigen::Matrix3d hr = out.normal_rotation(r, 0) * d.h[0] + out.normal_rotation(r, 1) * d.h[1];
    out.pattern_residual = std::max(out.pattern_residual, (R * hr * R.transpose() - want[r]).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace ddvv
