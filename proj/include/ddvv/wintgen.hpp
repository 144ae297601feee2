#pragma once

// Canonical frame of a Wintgen ideal M^3, the invariants U, V, L, G, lambda,
// Fhat, Ghat, the 1-form omega and its exterior derivative, the hat frame,
// and the theorem-level checks built on them.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ddvv/classical.hpp"
#include "ddvv/moebius.hpp"

namespace ddvv {

enum class Gauge { raw, v0 };

inline std::string gauge_name(Gauge g) { return g == Gauge::raw ? "raw" : "v0"; }

struct CanonicalFrame3 {
  Mat3<Jet> R;  // frame rows relative to the Gram-Schmidt Moebius frame
  Mat2<Jet> S;  // normal rotation relative to the Gram-Schmidt spheres
  FrameJets frame;
  CovariantJets cov;
  double mu = 0.0;
  Gauge gauge = Gauge::raw;
  bool v0_applied = false;  // false when C = 0 leaves the V0 angle undetermined
};

namespace detail {

inline Jet cjet(double v) { return Jet::constant(v, kMaxJetOrder); }

// Rotation (3.2): E~_1 = cos t E_1 - sin t E_2, E~_2 = sin t E_1 + cos t E_2,
// xi~ rotated by 2t.
inline void apply_gauge(Mat3<Jet>& R, Mat2<Jet>& S, const Jet& c, const Jet& s) {
  const Jet c2 = c * c - s * s, s2 = 2.0 * (c * s);
  Mat3<Jet> T{{{c, -s, cjet(0)}, {s, c, cjet(0)}, {cjet(0), cjet(0), cjet(1)}}};
  R = matmul(T, R);
  const Mat2<Jet> S0 = S;
  for (int j = 0; j < 2; ++j) {
    S[0][j] = c2 * S0[0][j] + s2 * S0[1][j];
    S[1][j] = -(s2 * S0[0][j]) + c2 * S0[1][j];
  }
}

inline double L_value(const CanonicalFrame3& cf) {
  return -cf.cov.B_cov[0][0][0][2].value() / cf.frame.B[0][0][1].value();
}

inline void rebuild(const MoebiusJets& m, CanonicalFrame3& cf) {
  cf.frame = make_frame(m, cf.R, cf.S);
  cf.cov = covariant_derivatives(cf.frame);
}

}  // namespace detail

/// Frame in which B^1 = mu (E_1 E_2^t + E_2 E_1^t), B^2 = mu (E_1 E_1^t - E_2 E_2^t),
/// with E_3 oriented so that L > 0. `extra_gauge`, when given, is a further
/// rotation angle (a jet) applied through (3.2) after gauge fixing.
inline CanonicalFrame3 canonical_frame3(const MoebiusJets& m, Gauge gauge = Gauge::raw,
                                        const std::optional<Jet>& extra_gauge = std::nullopt, double tol = 1e-7) {
  using detail::cjet;
  {
    const ClassicalData cd = classical_values(m.cl);
    const DDVVReport rep = ddvv_from_shape(cd.h, cd.H, cd.c, tol);
    if (!rep.ideal) throw NotIdealPoint("DDVV slack " + std::to_string(rep.slack));
  }
  // S = -(adj B^1 + adj B^2) = 2 mu^2 E_3 E_3^t at an ideal point.
  const Mat3<Jet> a1 = adjugate3(m.B[0]), a2 = adjugate3(m.B[1]);
  Mat3<Jet> P;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P[i][j] = -(a1[i][j] + a2[i][j]);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (P[i][i].value() > P[k][k].value()) k = i;
  if (!(P[k][k].value() > 1e-12)) throw NotIdealPoint("no distinguished kernel direction");
  Vec3<Jet> e3{{P[0][k], P[1][k], P[2][k]}};
  e3 = (1.0 / sqrt(euclid_dot(e3, e3))) * e3;
  int q = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(e3[i].value()) < std::abs(e3[q].value())) q = i;
  Vec3<Jet> f1;
  for (int i = 0; i < 3; ++i) f1[i] = (i == q ? 1.0 : 0.0) - e3[q] * e3[i];
  f1 = (1.0 / sqrt(euclid_dot(f1, f1))) * f1;
  Vec3<Jet> f2 = cross(e3, f1);

  auto bilinear = [&](int r, const Vec3<Jet>& x, const Vec3<Jet>& y) {
    Jet s = Jet::constant(0.0, kMaxJetOrder);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += x[i] * m.B[r][i][j] * y[j];
    return s;
  };
  using C = std::complex<double>;
  auto zval = [&](int r) { return C(bilinear(r, f1, f1).value(), bilinear(r, f1, f2).value()); };
  const C I(0.0, 1.0);
  if (std::abs(zval(0) + I * zval(1)) < std::abs(zval(0) - I * zval(1))) f2 = -f2;
  const Jet a = bilinear(1, f1, f1), b = bilinear(1, f1, f2);
  const Jet nz = sqrt(a * a + b * b);
  const Jet c = a / nz, s = b / nz;

  CanonicalFrame3 cf;
  cf.gauge = gauge;
  for (int i = 0; i < 3; ++i) {
    cf.R[0][i] = f1[i];
    cf.R[1][i] = f2[i];
    cf.R[2][i] = e3[i];
  }
  cf.S = Mat2<Jet>{{{c, s}, {-s, c}}};
  detail::rebuild(m, cf);
  if (detail::L_value(cf) < 0.0) {
    for (int i = 0; i < 3; ++i) cf.R[2][i] = -cf.R[2][i];
    detail::rebuild(m, cf);
  }
  if (gauge == Gauge::v0) {
    // C^1 ~> e^{-it} C^1 as a complex number; make it real and non-positive (U >= 0).
    const Jet& c11 = cf.frame.C[0][0];
    const Jet& c12 = cf.frame.C[0][1];
    const double w = std::hypot(c11.value(), c12.value());
    if (w > 1e-9) {
      const Jet nw = sqrt(c11 * c11 + c12 * c12);
      detail::apply_gauge(cf.R, cf.S, -(c11 / nw), -(c12 / nw));
      cf.v0_applied = true;
      detail::rebuild(m, cf);
    }
  }
  if (extra_gauge) {
    detail::apply_gauge(cf.R, cf.S, cos(*extra_gauge), sin(*extra_gauge));
    detail::rebuild(m, cf);
  }
  cf.mu = cf.frame.B[0][0][1].value();
  return cf;
}

/// Max off-pattern entry of B in the canonical frame.
inline double pattern_residual(const CanonicalFrame3& cf) {
  const double mu = 1.0 / std::sqrt(6.0);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double w1 = (i + j == 1) ? mu : 0.0;
      const double w2 = (i == j && i < 2) ? (i == 0 ? mu : -mu) : 0.0;
      worst = std::max({worst, std::abs(cf.frame.B[0][i][j].value() - w1), std::abs(cf.frame.B[1][i][j].value() - w2)});
    }
  return worst;
}

/// Invariants as jets of the chart variables.
struct WintgenJets {
  Jet mu, U, V, L, G;
  bool has_lambda = false;
  Jet lambda, Fhat;
  Vec3<Jet> coeffs;       // omega = c_1 omega_1 + c_2 omega_2 + c_3 omega_3, c = (-V, U, lambda)
  Vec3<Jet> omega_chart;  // omega in du^a
  Mat3<Jet> domega;       // d omega(E_i, E_j)
  Vec3<Jet> Omega12;      // Omega_12(E_k)
};

/// U, V, L, G always; lambda = G/L and what depends on it only when |L| > ltol.
inline WintgenJets wintgen_jets(const CanonicalFrame3& cf, double ltol = 1e-6) {
  const FrameJets& f = cf.frame;
  const CovariantJets& cv = cf.cov;
  WintgenJets w;
  w.mu = f.B[0][0][1];
  w.U = -(f.C[0][0] / w.mu);
  w.V = f.C[0][1] / w.mu;
  w.L = -(cv.B_cov[0][0][0][2] / w.mu);
  w.G = (cv.C_cov[0][0][0] - cv.C_cov[0][1][1]) / (2.0 * w.mu);
  for (int k = 0; k < 3; ++k) {
    w.Omega12[k] = f.omega[k][0][1];
    if (k == 0) w.Omega12[k] += w.U;
    if (k == 1) w.Omega12[k] += w.V;
  }
  if (std::abs(w.L.value()) <= ltol) return w;
  w.has_lambda = true;
  w.lambda = w.G / w.L;
  if (f.has_A) w.Fhat = f.A[0][0] + 0.5 * (w.U * w.U + w.V * w.V - w.lambda * w.lambda) - cv.C_cov[0][1][0] / w.mu;
  w.coeffs = Vec3<Jet>{{-w.V, w.U, w.lambda}};
  for (int a = 0; a < 3; ++a) w.omega_chart[a] = w.coeffs[0] * f.W[0][a] + w.coeffs[1] * f.W[1][a] + w.coeffs[2] * f.W[2][a];
  if (w.lambda.order() >= 1) w.domega = exterior_on_frame(f.E, f.W, w.coeffs);
  return w;
}

struct WintgenInvariants {
  double mu = 0.0, U = 0.0, V = 0.0, L = 0.0, G = 0.0;
  double lambda = 0.0, Fhat = 0.0, Ghat = 0.0;
  Vec3<double> omega_coeffs{}, domega{}, theta12_coeffs{}, Omega12_coeffs{};
  Vec3<double> omega_chart{};
  Mat3<double> domega_chart{};  // (d omega)_ab
  Gauge gauge = Gauge::raw;
};

struct HatFrameData {
  std::array<LVec<Jet>, 3> eta;
  LVec<Jet> Yhat;
  Mat3<Jet> hat_coframe;  // hat_coframe[i][j] = hat omega_i(E_j) = <E_j(Yhat), eta_i>
  Vec3<Jet> Omega12, Omega13, Omega23;
};

/// eta_1 = Y_1 + V Y, eta_2 = Y_2 - U Y, eta_3 = Y_3 - lambda Y and
/// Yhat = N - (U^2 + V^2 + lambda^2)/2 Y - V Y_1 + U Y_2 + lambda Y_3.
inline HatFrameData hat_frame(const MoebiusJets& m, const CanonicalFrame3& cf, const Jet& lambda) {
  const FrameJets& f = cf.frame;
  const Jet mu = f.B[0][0][1];
  const Jet U = -(f.C[0][0] / mu), V = f.C[0][1] / mu;
  HatFrameData h;
  h.eta[0] = f.Yi[0] + V * m.Y;
  h.eta[1] = f.Yi[1] - U * m.Y;
  h.eta[2] = f.Yi[2] - lambda * m.Y;
  h.Yhat = m.N - (0.5 * (U * U + V * V + lambda * lambda)) * m.Y - V * f.Yi[0] + U * f.Yi[1] + lambda * f.Yi[2];
  for (int j = 0; j < 3; ++j) {
    const Vec3<Jet> Ej = row(f.E, j);
    const LVec<Jet> dY = along(Ej, h.Yhat);
    for (int i = 0; i < 3; ++i) h.hat_coframe[i][j] = lorentz_dot(dY, h.eta[i]);
    const LVec<Jet> d1 = along(Ej, h.eta[0]), d2 = along(Ej, h.eta[1]);
    h.Omega12[j] = lorentz_dot(d1, h.eta[1]);
    h.Omega13[j] = lorentz_dot(d1, h.eta[2]);
    h.Omega23[j] = lorentz_dot(d2, h.eta[2]);
  }
  return h;
}

inline double hat_Fhat(const HatFrameData& h) { return h.hat_coframe[0][0].value(); }
inline double hat_Ghat(const HatFrameData& h) {
  return 0.5 * (h.hat_coframe[0][1].value() - h.hat_coframe[1][0].value());
}

inline WintgenInvariants invariant_values(const MoebiusJets& m, const CanonicalFrame3& cf, const WintgenJets& w) {
  WintgenInvariants v;
  v.gauge = cf.gauge;
  v.mu = w.mu.value();
  v.U = w.U.value();
  v.V = w.V.value();
  v.L = w.L.value();
  v.G = w.G.value();
  v.theta12_coeffs = value(cf.frame.theta);
  v.Omega12_coeffs = value(w.Omega12);
  if (w.has_lambda) {
    v.lambda = w.lambda.value();
    v.Fhat = w.Fhat.value();
    v.omega_coeffs = value(w.coeffs);
    v.omega_chart = value(w.omega_chart);
    v.domega = {{w.domega[0][1].value(), w.domega[0][2].value(), w.domega[1][2].value()}};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) v.domega_chart[a][b] = w.omega_chart[b].derivative(a).value() - w.omega_chart[a].derivative(b).value();
    v.Ghat = hat_Ghat(hat_frame(m, cf, w.lambda));
  }
  return v;
}

/// Full invariant set at p; refuses Theorem A points (|L| <= ltol).
inline WintgenInvariants invariants_uvlg(const ImmersionSpec& spec, const ChartPoint& p, Gauge gauge = Gauge::raw,
                                         double ltol = 1e-6, int order = 6, double tol = 1e-7) {
  const MoebiusJets m = moebius_jets(spec, p, order);
  const CanonicalFrame3 cf = canonical_frame3(m, gauge, std::nullopt, tol);
  const WintgenJets w = wintgen_jets(cf, ltol);
  if (!w.has_lambda) throw IntegrableDistribution("L = " + std::to_string(w.L.value()) + " within ltol");
  return invariant_values(m, cf, w);
}

enum class FhatSign { positive, zero, negative, mixed };
enum class Classification { sphere_minimal, euclidean_minimal, hyperbolic_minimal, not_moebius_minimal, inconclusive };

inline std::string to_string(FhatSign s) {
  switch (s) {
    case FhatSign::positive: return "positive";
    case FhatSign::zero: return "zero";
    case FhatSign::negative: return "negative";
    case FhatSign::mixed: return "mixed";
  }
  return "?";
}

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::sphere_minimal: return "sphere_minimal";
    case Classification::euclidean_minimal: return "euclidean_minimal";
    case Classification::hyperbolic_minimal: return "hyperbolic_minimal";
    case Classification::not_moebius_minimal: return "not_moebius_minimal";
    case Classification::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TheoremBVerdict {
  double max_domega = 0.0;
  bool closed = false;
  FhatSign Fhat_sign = FhatSign::mixed;
  Classification classification = Classification::inconclusive;
  double min_Fhat = 0.0, max_Fhat = 0.0;
};

inline double max_abs3(const Vec3<double>& v) { return max_abs(v); }

inline TheoremBVerdict theorem_b_from(const std::vector<WintgenInvariants>& inv, double tol) {
  TheoremBVerdict v;
  if (inv.empty()) return v;
  int pos = 0, neg = 0, zero = 0;
  v.min_Fhat = v.max_Fhat = inv[0].Fhat;
  for (const auto& w : inv) {
    v.max_domega = std::max(v.max_domega, max_abs3(w.domega));
    v.min_Fhat = std::min(v.min_Fhat, w.Fhat);
    v.max_Fhat = std::max(v.max_Fhat, w.Fhat);
    if (std::abs(w.Fhat) < tol) ++zero;
    else if (w.Fhat > 0) ++pos;
    else ++neg;
  }
  const int n = static_cast<int>(inv.size());
  v.Fhat_sign = pos == n ? FhatSign::positive : neg == n ? FhatSign::negative : zero == n ? FhatSign::zero : FhatSign::mixed;
  v.closed = v.max_domega < tol;
  if (!v.closed) v.classification = Classification::not_moebius_minimal;
  else
    switch (v.Fhat_sign) {
      case FhatSign::positive: v.classification = Classification::sphere_minimal; break;
      case FhatSign::zero: v.classification = Classification::euclidean_minimal; break;
      case FhatSign::negative: v.classification = Classification::hyperbolic_minimal; break;
      case FhatSign::mixed: v.classification = Classification::inconclusive; break;
    }
  return v;
}

inline TheoremBVerdict classify_theorem_b(const ImmersionSpec& spec, const std::vector<ChartPoint>& sample,
                                          double tol = 1e-6, double ltol = 1e-6, int order = 6) {
  std::vector<WintgenInvariants> inv;
  for (const auto& p : sample) inv.push_back(invariants_uvlg(spec, p, Gauge::raw, ltol, order));
  return theorem_b_from(inv, tol);
}

struct HopfVerdict {
  bool satisfied = false;
  double max_G = 0.0;
  double max_domega = 0.0;
};

inline HopfVerdict hopf_from(const std::vector<WintgenInvariants>& inv, double tol) {
  HopfVerdict h;
  for (const auto& w : inv) {
    h.max_G = std::max(h.max_G, std::abs(w.G));
    h.max_domega = std::max(h.max_domega, max_abs3(w.domega));
  }
  h.satisfied = !inv.empty() && h.max_G < tol && h.max_domega < tol;
  return h;
}

inline HopfVerdict hopf_criterion(const ImmersionSpec& spec, const std::vector<ChartPoint>& sample, double tol = 1e-6,
                                  double ltol = 1e-6, int order = 6) {
  std::vector<WintgenInvariants> inv;
  for (const auto& p : sample) inv.push_back(invariants_uvlg(spec, p, Gauge::raw, ltol, order));
  return hopf_from(inv, tol);
}

/// max_k |E_k(xi_1 - i xi_2) - [i mu (omega_1 + i omega_2)(E_k)(eta_1 + i eta_2) + i theta_12(E_k)(xi_1 - i xi_2)]|.
inline double holomorphic_residual(const MoebiusJets& m, const CanonicalFrame3& cf) {
  using C = std::complex<double>;
  const FrameJets& f = cf.frame;
  const HatFrameData h = hat_frame(m, cf, Jet::constant(0.0, kMaxJetOrder));
  const C I(0.0, 1.0);
  const double mu = f.B[0][0][1].value();
  const LVec<double> x1 = value(f.xi[0]), x2 = value(f.xi[1]);
  const LVec<double> e1 = value(h.eta[0]), e2 = value(h.eta[1]);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3<Jet> Ek = row(f.E, k);
    const LVec<double> d1 = value(along(Ek, f.xi[0])), d2 = value(along(Ek, f.xi[1]));
    const C w = C(k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0);
    const double th = f.theta[k].value();
    for (int a = 0; a < 7; ++a) {
      const C lhs = C(d1[a], -d2[a]);
      const C rhs = I * mu * w * C(e1[a], e2[a]) + I * th * C(x1[a], -x2[a]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

inline double holomorphic_residual(const ImmersionSpec& spec, const ChartPoint& p, int order = 6) {
  const MoebiusJets m = moebius_jets(spec, p, order);
  return holomorphic_residual(m, canonical_frame3(m));
}

/// Linear gauge angle t with dt(p) = Omega_12(p), so that the rotated frame
/// has Omega_12 = 0 at p.
inline Jet flattening_gauge(const CanonicalFrame3& cf, const WintgenJets& w) {
  Jet t = Jet::constant(0.0, kMaxJetOrder);
  for (int a = 0; a < 3; ++a) {
    double oa = 0.0;
    for (int k = 0; k < 3; ++k) oa += w.Omega12[k].value() * cf.frame.W[k][a].value();
    t += oa * Jet::variable(a, 0.0, kMaxJetOrder);
  }
  return t;
}

/// Structure matrix of (Y, Yhat, eta_1, eta_2, eta_3, xi_1, xi_2):
/// M[k][a][b] = <E_k(row_a), dual_b>, with Y and Yhat dual to each other.
inline std::array<std::array<std::array<double, 7>, 7>, 3> structure_matrix(const MoebiusJets& m,
                                                                            const CanonicalFrame3& cf,
                                                                            const Jet& lambda) {
  const HatFrameData h = hat_frame(m, cf, lambda);
  const std::array<LVec<Jet>, 7> rows{m.Y, h.Yhat, h.eta[0], h.eta[1], h.eta[2], cf.frame.xi[0], cf.frame.xi[1]};
  std::array<LVec<double>, 7> dual;
  for (int b = 0; b < 7; ++b) dual[b] = value(rows[b]);
  std::swap(dual[0], dual[1]);
  std::array<std::array<std::array<double, 7>, 7>, 3> M{};
  for (int k = 0; k < 3; ++k) {
    const Vec3<Jet> Ek = row(cf.frame.E, k);
    for (int a = 0; a < 7; ++a) {
      const LVec<double> d = value(along(Ek, rows[a]));
      for (int b = 0; b < 7; ++b) M[k][a][b] = lorentz_dot(d, dual[b]);
    }
  }
  return M;
}

/// The homogeneous example's structure matrix evaluated on E_k, with s = 1/sqrt 6
/// standing for both mu and L, and Fhat = 1/12.
inline std::array<std::array<std::array<double, 7>, 7>, 3> so3_structure_matrix() {
  const double s = 1.0 / std::sqrt(6.0), f = 1.0 / 12.0;
  std::array<std::array<std::array<double, 7>, 7>, 3> M{};
  for (int k = 0; k < 3; ++k) {
    const double w1 = k == 0, w2 = k == 1, w3 = k == 2;
    M[k] = {{{0, 0, w1, w2, w3, 0, 0},
             {0, 0, f * w1, f * w2, f * w3, 0, 0},
             {-f * w1, -w1, 0, 0, s * w2, s * w2, s * w1},
             {-f * w2, -w2, 0, 0, -s * w1, s * w1, -s * w2},
             {-f * w3, -w3, -s * w2, s * w1, 0, 0, 0},
             {0, 0, -s * w2, -s * w1, 0, 0, s * w3},
             {0, 0, -s * w1, s * w2, 0, -s * w3, 0}}};
  }
  return M;
}

/// Pointwise identity residuals of the Wintgen structure.
struct IdentityResiduals {
  double E3L_minus_G = 0.0;       // |E_3(L) - G|
  double Fhat_two_route = 0.0;    // |Fhat - hat omega_3(E_3)|
  double Ghat = 0.0;              // |Ghat| with lambda = G/L
  double Ghat_response = 0.0;     // |Ghat(G/L + delta) + delta L|
  double dF_plus_2Fomega = 0.0;   // max_k |E_k(Fhat) + 2 Fhat omega(E_k)|
  double omega_dlog_nu = 0.0;     // max_k |c_k - E_k(nu)/nu|, nu = rho/sqrt 6
  double domega3_minus_2L = 0.0;  // |d omega_3(E_1, E_2) - 2L|
  double dtheta_minus_2mu2 = 0.0; // |d theta_12(E_1, E_2) - 2 mu^2|
  double holomorphic = 0.0;
  double hat_pattern = 0.0;       // max |hat omega_{1,2}(E_j) - Fhat delta|
};

inline IdentityResiduals identity_residuals(const MoebiusJets& m, const CanonicalFrame3& cf, double delta = 0.1,
                                            double ltol = 1e-6) {
  const WintgenJets w = wintgen_jets(cf, ltol);
  if (!w.has_lambda) throw IntegrableDistribution("L = " + std::to_string(w.L.value()) + " within ltol");
  const FrameJets& f = cf.frame;
  IdentityResiduals r;
  r.E3L_minus_G = std::abs(along(row(f.E, 2), w.L).value() - w.G.value());
  const HatFrameData h = hat_frame(m, cf, w.lambda);
  const double F = w.Fhat.value();
  r.Fhat_two_route = std::abs(F - h.hat_coframe[2][2].value());
  r.Ghat = std::abs(hat_Ghat(h));
  r.hat_pattern = std::max({std::abs(h.hat_coframe[0][0].value() - F), std::abs(h.hat_coframe[1][1].value() - F),
                            std::abs(h.hat_coframe[0][1].value()), std::abs(h.hat_coframe[1][0].value())});
  const HatFrameData hd = hat_frame(m, cf, w.lambda + delta);
  r.Ghat_response = std::abs(hat_Ghat(hd) + delta * w.L.value());
  for (int k = 0; k < 3; ++k) {
    const Vec3<Jet> Ek = row(f.E, k);
    if (w.Fhat.order() >= 1)
      r.dF_plus_2Fomega = std::max(r.dF_plus_2Fomega, std::abs(along(Ek, w.Fhat).value() + 2.0 * F * w.coeffs[k].value()));
    r.omega_dlog_nu = std::max(r.omega_dlog_nu, std::abs(w.coeffs[k].value() - along(Ek, m.rho).value() / m.rho.value()));
  }
  const Vec3<Jet> e3{{Jet::constant(0.0, kMaxJetOrder), Jet::constant(0.0, kMaxJetOrder), Jet::constant(1.0, kMaxJetOrder)}};
  r.domega3_minus_2L = std::abs(exterior_on_frame(f.E, f.W, e3)[0][1].value() - 2.0 * w.L.value());
  const double mu = f.B[0][0][1].value();
  r.dtheta_minus_2mu2 = std::abs(exterior_on_frame(f.E, f.W, f.theta)[0][1].value() - 2.0 * mu * mu);
  r.holomorphic = holomorphic_residual(m, cf);
  return r;
}

}  // namespace ddvv
