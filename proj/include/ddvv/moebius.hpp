#pragma once

// Light-cone model: canonical lift Y, Moebius metric g, the moving frame
// {Y, N, Y_i, xi_r} of R^7_1 and the tensors A, B, C in a chosen frame.
//
// Jet depths for input order K: Y, g, B and the Gram-Schmidt frame have
// order K-2; Christoffel symbols, C, connection coefficients K-3; N K-4;
// A K-5; covariant derivatives one less than the tensor.

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "ddvv/classical.hpp"
#include "ddvv/sampling.hpp"
#include "ddvv/tensor.hpp"

namespace ddvv {

namespace detail {

inline LVec<Jet> lift_of(const AmbientModel& am, const std::vector<Jet>& x, const Jet& rho) {
  LVec<Jet> Y;
  switch (am.kind) {
    case AmbientKind::sphere:
      Y[0] = rho;
      for (int k = 0; k < 6; ++k) Y[k + 1] = rho * x[k];
      break;
    case AmbientKind::euclidean: {
      Jet x2 = x[0] * x[0];
      for (int k = 1; k < 5; ++k) x2 += x[k] * x[k];
      Y[0] = rho * (1.0 + x2) * 0.5;
      Y[1] = rho * (1.0 - x2) * 0.5;
      for (int k = 0; k < 5; ++k) Y[k + 2] = rho * x[k];
      break;
    }
    case AmbientKind::hyperbolic:
      for (int k = 0; k < 6; ++k) Y[k] = rho * x[k];
      Y[6] = rho;
      break;
  }
  return Y;
}

// Mean curvature sphere with mean curvature Hr along the unit normal n.
inline LVec<Jet> sphere_of(const AmbientModel& am, const std::vector<Jet>& x, const AmbientVec& n, const Jet& Hr) {
  LVec<Jet> xi;
  switch (am.kind) {
    case AmbientKind::sphere:
      xi[0] = Hr;
      for (int k = 0; k < 6; ++k) xi[k + 1] = n[k] + Hr * x[k];
      break;
    case AmbientKind::euclidean: {
      Jet x2 = x[0] * x[0], xn = x[0] * n[0];
      for (int k = 1; k < 5; ++k) {
        x2 += x[k] * x[k];
        xn += x[k] * n[k];
      }
      xi[0] = Hr * (1.0 + x2) * 0.5 + xn;
      xi[1] = Hr * (1.0 - x2) * 0.5 - xn;
      for (int k = 0; k < 5; ++k) xi[k + 2] = Hr * x[k] + n[k];
      break;
    }
    case AmbientKind::hyperbolic:
      for (int k = 0; k < 6; ++k) xi[k] = n[k] + Hr * x[k];
      xi[6] = Hr;
      break;
  }
  return xi;
}

}  // namespace detail

struct CanonicalLift {
  Jet rho;
  LVec<Jet> Y;
};

inline Jet rho_squared(const ClassicalJets& cj) {
  Jet s = Jet::constant(0.0, cj.order - 2);
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Jet t = i == j ? cj.h[r][i][j] - cj.H[r] : cj.h[r][i][j];
        s += t * t;
      }
  return 1.5 * s;
}

inline CanonicalLift canonical_lift(const ClassicalJets& cj) {
  const Jet rho2 = rho_squared(cj);
  double II = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) II += square(cj.h[r][i][j].value());
  if (!(rho2.value() > 1e-10 * II)) throw UmbilicPoint("rho^2 = " + std::to_string(rho2.value()));
  CanonicalLift L;
  L.rho = sqrt(rho2);
  L.Y = detail::lift_of(cj.ambient, cj.x, L.rho);
  return L;
}

inline CanonicalLift canonical_lift(const ImmersionSpec& spec, const ChartPoint& p, int order = 3) {
  return canonical_lift(classical_jets(spec, p, std::max(order, 2) + 2));
}

/// Frame-independent light-cone data plus the Gram-Schmidt frame.
struct MoebiusJets {
  ClassicalJets cl;
  int order = 0;
  Jet rho;
  LVec<Jet> Y;
  std::array<LVec<Jet>, 3> dY;
  Mat3<Jet> g, ginv;
  std::array<Mat3<Jet>, 3> Gamma;  // Gamma[c][a][b] = Gamma^c_ab
  LVec<Jet> N;
  Mat3<Jet> E;  // E[i][a]: chart components of E_i = e_i / rho
  std::array<LVec<Jet>, 2> xi;
  std::array<Mat3<Jet>, 2> B;
  std::array<Vec3<Jet>, 2> C;  // from the classical coefficient formula
};

inline MoebiusJets moebius_jets(const ImmersionSpec& spec, const ChartPoint& p, int order = 6) {
  if (order < 4) throw InsufficientOrder("Moebius data needs jets of order >= 4");
  MoebiusJets m;
  m.order = order;
  m.cl = classical_jets(spec, p, order);
  const ClassicalJets& cj = m.cl;
  const CanonicalLift lift = canonical_lift(cj);
  m.rho = lift.rho;
  m.Y = lift.Y;
  for (int a = 0; a < 3; ++a) m.dY[a] = derivative(m.Y, a);

  const Jet rho2 = m.rho * m.rho;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m.g[a][b] = rho2 * cj.metric[a][b];
  m.ginv = inverse3(m.g);
  std::array<Mat3<Jet>, 3> dg;  // dg[c][a][b] = d_c g_ab
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dg[c][a][b] = m.g[a][b].derivative(c);
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) {
        Jet s = Jet::constant(0.0, order - 3);
        for (int d = 0; d < 3; ++d) s += m.ginv[c][d] * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b]);
        m.Gamma[c][a][b] = m.Gamma[c][b][a] = 0.5 * s;
      }

  // Laplace-Beltrami of Y in chart coordinates.
  LVec<Jet> lap;
  for (auto& v : lap.c) v = Jet::constant(0.0, order - 4);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      LVec<Jet> hess = derivative(m.dY[a], b);
      for (int c = 0; c < 3; ++c) hess -= m.Gamma[c][a][b] * m.dY[c];
      lap += m.ginv[a][b] * hess;
    }
  m.N = (-1.0 / 3.0) * lap - (lorentz_dot(lap, lap) / 18.0) * m.Y;

  const Jet inv_rho = 1.0 / m.rho;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) m.E[i][a] = cj.F[i][a] * inv_rho;
  for (int r = 0; r < 2; ++r) {
    m.xi[r] = detail::sphere_of(cj.ambient, cj.x, cj.n[r], cj.H[r]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.B[r][i][j] = (i == j ? cj.h[r][i][j] - cj.H[r] : cj.h[r][i][j]) * inv_rho;
  }

  // C^r_i = -rho^-2 [H^r_{,i} + sum_j (h^r_ij - H^r delta_ij) e_j(log rho)].
  const AmbientModel& am = cj.ambient;
  std::array<Jet, 3> dlog;
  std::array<std::array<AmbientVec, 3>, 2> dn;  // dn[s][a] = d_a n_s
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 3; ++a) {
      dn[s][a].resize(cj.n[s].size());
      for (std::size_t k = 0; k < cj.n[s].size(); ++k) dn[s][a][k] = cj.n[s][k].derivative(a);
    }
  auto e_along = [&](int i, const Jet& f) {
    return cj.F[i][0] * f.derivative(0) + cj.F[i][1] * f.derivative(1) + cj.F[i][2] * f.derivative(2);
  };
  for (int j = 0; j < 3; ++j) dlog[j] = e_along(j, m.rho) * inv_rho;
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i) {
      Jet Hcov = e_along(i, cj.H[r]);
      for (int s = 0; s < 2; ++s) {
        Jet conn = Jet::constant(0.0, order - 2);
        for (int a = 0; a < 3; ++a) conn += cj.F[i][a] * ambient_dot(am, dn[s][a], cj.n[r]);
        Hcov += cj.H[s] * conn;
      }
      Jet t = Hcov;
      for (int j = 0; j < 3; ++j) t += (i == j ? cj.h[r][i][j] - cj.H[r] : cj.h[r][i][j]) * dlog[j];
      m.C[r][i] = -(t / rho2);
    }
  return m;
}

/// Frame-dependent quantities for E~_i = sum_j R_ij E_j, xi~_r = sum_s S_rs xi_s.
struct FrameJets {
  Mat3<Jet> E;                       // E[i][a]
  Mat3<Jet> W;                       // coframe omega_i(d_a) = W[i][a]
  std::array<LVec<Jet>, 3> Yi;       // E_i(Y)
  std::array<LVec<Jet>, 2> xi;
  std::array<Mat3<Jet>, 2> B;
  std::array<Vec3<Jet>, 2> C;        // tensorial transform of the classical formula
  std::array<Vec3<Jet>, 2> C_dN;     // <E_i(N), xi_r>
  Mat3<Jet> A;                       // <E_i(N), Y_j>; empty when has_A is false
  bool has_A = false;
  std::array<Mat3<Jet>, 3> omega;    // omega[k][i][j] = omega_ij(E_k)
  Vec3<Jet> theta;                   // theta_12(E_k)
};

inline FrameJets make_frame(const MoebiusJets& m, const Mat3<Jet>& R, const Mat2<Jet>& S) {
  FrameJets f;
  f.E = matmul(R, m.E);
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a) {
      Jet s = m.g[a][0] * f.E[i][0];
      for (int b = 1; b < 3; ++b) s += m.g[a][b] * f.E[i][b];
      f.W[i][a] = s;
    }
  for (int i = 0; i < 3; ++i) {
    f.Yi[i] = f.E[i][0] * m.dY[0];
    for (int a = 1; a < 3; ++a) f.Yi[i] += f.E[i][a] * m.dY[a];
  }
  for (int r = 0; r < 2; ++r) {
    f.xi[r] = S[r][0] * m.xi[0] + S[r][1] * m.xi[1];
    Mat3<Jet> Bs;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Bs[i][j] = S[r][0] * m.B[0][i][j] + S[r][1] * m.B[1][i][j];
    f.B[r] = congruence(R, Bs);
    for (int i = 0; i < 3; ++i) {
      Jet s = Jet();
      bool first = true;
      for (int j = 0; j < 3; ++j) {
        const Jet t = R[i][j] * (S[r][0] * m.C[0][j] + S[r][1] * m.C[1][j]);
        s = first ? t : s + t;
        first = false;
      }
      f.C[r][i] = s;
    }
  }
  if (m.N[0].order() >= 1) {
    f.has_A = true;
    std::array<LVec<Jet>, 3> dN;
    for (int i = 0; i < 3; ++i) dN[i] = along(row(f.E, i), m.N);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) f.A[i][j] = lorentz_dot(dN[i], f.Yi[j]);
      for (int r = 0; r < 2; ++r) f.C_dN[r][i] = lorentz_dot(dN[i], f.xi[r]);
    }
  }
  // omega_ij(E_k) = g(nabla_{E_k} E_i, E_j).
  for (int k = 0; k < 3; ++k) {
    const Vec3<Jet> Ek = row(f.E, k);
    for (int i = 0; i < 3; ++i) {
      Vec3<Jet> nab;
      for (int a = 0; a < 3; ++a) {
        Jet s = along(Ek, f.E[i][a]);
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) s += m.Gamma[a][c][d] * f.E[k][c] * f.E[i][d];
        nab[a] = s;
      }
      for (int j = 0; j < 3; ++j) f.omega[k][i][j] = f.W[j][0] * nab[0] + f.W[j][1] * nab[1] + f.W[j][2] * nab[2];
    }
    f.theta[k] = lorentz_dot(along(Ek, f.xi[0]), f.xi[1]);
  }
  return f;
}

inline FrameJets make_frame(const MoebiusJets& m) {
  Mat2<Jet> S{{{Jet::constant(1.0, kMaxJetOrder), Jet::constant(0.0, kMaxJetOrder)},
               {Jet::constant(0.0, kMaxJetOrder), Jet::constant(1.0, kMaxJetOrder)}}};
  return make_frame(m, identity3<Jet>(), S);
}

struct CovariantJets {
  std::array<std::array<Mat3<Jet>, 3>, 2> B_cov;  // B_cov[r][i][j][k] = B^r_{ij,k}
  std::array<Mat3<Jet>, 2> C_cov;                 // C_cov[r][i][j] = C^r_{i,j}
  std::array<Mat3<Jet>, 3> A_cov;                 // A_cov[i][j][k] = A_{ij,k}
  bool has_A = false;
};

inline CovariantJets covariant_derivatives(const FrameJets& f) {
  CovariantJets cv;
  auto theta_sr = [&](int s, int r, int k) {  // theta_12 = theta, theta_21 = -theta
    return s == r ? Jet::constant(0.0, f.theta[k].order()) : (s == 0 ? f.theta[k] : -f.theta[k]);
  };
  for (int k = 0; k < 3; ++k) {
    const Vec3<Jet> Ek = row(f.E, k);
    const Mat3<Jet>& w = f.omega[k];
    for (int r = 0; r < 2; ++r) {
      const int o = 1 - r;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Jet s = along(Ek, f.B[r][i][j]);
          for (int l = 0; l < 3; ++l) s += f.B[r][i][l] * w[l][j] + f.B[r][l][j] * w[l][i];
          s += f.B[o][i][j] * theta_sr(o, r, k);
          cv.B_cov[r][i][j][k] = s;
        }
      for (int i = 0; i < 3; ++i) {
        Jet s = along(Ek, f.C[r][i]);
        for (int l = 0; l < 3; ++l) s += f.C[r][l] * w[l][i];
        s += f.C[o][i] * theta_sr(o, r, k);
        cv.C_cov[r][i][k] = s;
      }
    }
    if (f.has_A && f.A[0][0].order() >= 1) {
      cv.has_A = true;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Jet s = along(Ek, f.A[i][j]);
          for (int l = 0; l < 3; ++l) s += f.A[i][l] * w[l][j] + f.A[l][j] * w[l][i];
          cv.A_cov[i][j][k] = s;
        }
    }
  }
  return cv;
}

/// Chart components (d alpha)_{ab} = d_a alpha_b - d_b alpha_a of the 1-form
/// alpha = sum_i c_i omega_i, evaluated on the frame pair (E_i, E_j).
inline Mat3<Jet> exterior_on_frame(const Mat3<Jet>& E, const Mat3<Jet>& W, const Vec3<Jet>& c) {
  Vec3<Jet> alpha;
  for (int a = 0; a < 3; ++a) alpha[a] = c[0] * W[0][a] + c[1] * W[1][a] + c[2] * W[2][a];
  Mat3<Jet> d;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) d[a][b] = alpha[b].derivative(a) - alpha[a].derivative(b);
  Mat3<Jet> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Jet s = Jet();
      bool first = true;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const Jet t = d[a][b] * E[i][a] * E[j][b];
          s = first ? t : s + t;
          first = false;
        }
      out[i][j] = s;
    }
  return out;
}

/// Riemann tensor R_abcd = g_ae R^e_bcd in chart coordinates (values),
/// R^e_bcd = d_c Gamma^e_db - d_d Gamma^e_cb + Gamma^e_cf Gamma^f_db - Gamma^e_df Gamma^f_cb.
inline std::array<std::array<Mat3<double>, 3>, 3> riemann_chart(const MoebiusJets& m) {
  double G[3][3][3], dG[3][3][3][3];
  for (int e = 0; e < 3; ++e)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        G[e][a][b] = m.Gamma[e][a][b].value();
        for (int c = 0; c < 3; ++c) dG[c][e][a][b] = m.Gamma[e][a][b].derivative(c).value();
      }
  double Rup[3][3][3][3];
  for (int e = 0; e < 3; ++e)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double s = dG[c][e][d][b] - dG[d][e][c][b];
          for (int f = 0; f < 3; ++f) s += G[e][c][f] * G[f][d][b] - G[e][d][f] * G[f][c][b];
          Rup[e][b][c][d] = s;
        }
  std::array<std::array<Mat3<double>, 3>, 3> R{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double s = 0.0;
          for (int e = 0; e < 3; ++e) s += m.g[a][e].value() * Rup[e][b][c][d];
          R[a][b][c][d] = s;
        }
  return R;
}

struct IntegrabilityResiduals {
  double codazzi_A = 0.0;
  double ricci_C = 0.0;
  double codazzi_B = 0.0;
  double gauss = 0.0;
  double ricci_normal = 0.0;
  double trace = 0.0;
  double max() const { return std::max({codazzi_A, ricci_C, codazzi_B, gauss, ricci_normal, trace}); }
};

inline IntegrabilityResiduals integrability_residuals(const MoebiusJets& m, const FrameJets& f,
                                                      const CovariantJets& cv) {
  if (!cv.has_A) throw InsufficientOrder("integrability residuals need jets of order 6");
  IntegrabilityResiduals res;
  auto v = [](const Jet& j) { return j.value(); };
  double Bv[2][3][3], Cv[2][3], Av[3][3];
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i) {
      Cv[r][i] = v(f.C[r][i]);
      for (int j = 0; j < 3; ++j) Bv[r][i][j] = v(f.B[r][i][j]);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Av[i][j] = v(f.A[i][j]);
  auto dl = [](int i, int j) { return i == j ? 1.0 : 0.0; };

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double rhs = 0.0;
        for (int r = 0; r < 2; ++r) rhs += Bv[r][i][k] * Cv[r][j] - Bv[r][i][j] * Cv[r][k];
        res.codazzi_A = std::max(res.codazzi_A, std::abs(v(cv.A_cov[i][j][k]) - v(cv.A_cov[i][k][j]) - rhs));
        for (int r = 0; r < 2; ++r) {
          const double lhs = v(cv.B_cov[r][i][j][k]) - v(cv.B_cov[r][i][k][j]);
          res.codazzi_B = std::max(res.codazzi_B, std::abs(lhs - (dl(i, j) * Cv[r][k] - dl(i, k) * Cv[r][j])));
        }
      }
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double rhs = 0.0;
        for (int k = 0; k < 3; ++k) rhs += Bv[r][i][k] * Av[k][j] - Bv[r][j][k] * Av[k][i];
        res.ricci_C = std::max(res.ricci_C, std::abs(v(cv.C_cov[r][i][j]) - v(cv.C_cov[r][j][i]) - rhs));
      }

  const auto Rc = riemann_chart(m);
  const Mat3<double> E = value(f.E);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double R = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) R += Rc[a][b][c][d] * E[i][a] * E[j][b] * E[k][c] * E[l][d];
          double rhs = dl(i, k) * Av[j][l] + dl(j, l) * Av[i][k] - dl(i, l) * Av[j][k] - dl(j, k) * Av[i][l];
          for (int r = 0; r < 2; ++r) rhs += Bv[r][i][k] * Bv[r][j][l] - Bv[r][i][l] * Bv[r][j][k];
          res.gauss = std::max(res.gauss, std::abs(R - rhs));
        }

  // R^perp_{12ij} = -d theta_12(E_i, E_j).
  const Mat3<Jet> dth = exterior_on_frame(f.E, f.W, f.theta);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double rhs = 0.0;
      for (int k = 0; k < 3; ++k) rhs += Bv[0][i][k] * Bv[1][k][j] - Bv[1][i][k] * Bv[0][k][j];
      res.ricci_normal = std::max(res.ricci_normal, std::abs(-v(dth[i][j]) - rhs));
    }

  double sq = 0.0;
  for (int r = 0; r < 2; ++r) {
    res.trace = std::max(res.trace, std::abs(Bv[r][0][0] + Bv[r][1][1] + Bv[r][2][2]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sq += Bv[r][i][j] * Bv[r][i][j];
  }
  res.trace = std::max(res.trace, std::abs(sq - 2.0 / 3.0));
  return res;
}

inline IntegrabilityResiduals integrability_residuals(const ImmersionSpec& spec, const ChartPoint& p, int order = 6) {
  const MoebiusJets m = moebius_jets(spec, p, order);
  const FrameJets f = make_frame(m);
  return integrability_residuals(m, f, covariant_derivatives(f));
}

/// Max component of E_j(Y_i) + A_ij Y + delta_ij N - sum_k omega_ik(E_j) Y_k - sum_r B^r_ij xi_r.
inline double structure_residual(const MoebiusJets& m, const FrameJets& f) {
  if (!f.has_A) throw InsufficientOrder("structure residual needs A");
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const LVec<double> d = value(along(row(f.E, j), f.Yi[i]));
      LVec<double> r = d + f.A[i][j].value() * value(m.Y);
      if (i == j) r += value(m.N);
      for (int k = 0; k < 3; ++k) r -= f.omega[j][i][k].value() * value(f.Yi[k]);
      for (int s = 0; s < 2; ++s) r -= f.B[s][i][j].value() * value(f.xi[s]);
      worst = std::max(worst, max_abs(r));
    }
  return worst;
}

/// Max deviation of the frame {Y, N, Y_i, xi_r} from its Gram matrix.
inline double frame_relation_residual(const MoebiusJets& m, const FrameJets& f) {
  std::array<LVec<double>, 7> F;
  F[0] = value(m.Y);
  F[1] = value(m.N);
  for (int i = 0; i < 3; ++i) F[2 + i] = value(f.Yi[i]);
  for (int r = 0; r < 2; ++r) F[5 + r] = value(f.xi[r]);
  double worst = 0.0;
  for (int a = 0; a < 7; ++a)
    for (int b = a; b < 7; ++b) {
      double want = 0.0;
      if ((a == 0 && b == 1) || (a >= 2 && a == b)) want = 1.0;
      worst = std::max(worst, std::abs(lorentz_dot(F[a], F[b]) - want));
    }
  return worst;
}

/// max |C(coefficient formula) - <E_i(N), xi_r>|.
inline double c_cross_residual(const FrameJets& f) {
  double worst = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(f.C[r][i].value() - f.C_dN[r][i].value()));
  return worst;
}

/// Point values of the Moebius data in the Gram-Schmidt frame.
struct MoebiusData {
  double rho = 0.0;
  LVec<double> Y, N;
  std::array<LVec<double>, 3> Yi;
  std::array<LVec<double>, 2> xi;
  Mat3<double> g, E, omega_i;  // omega_i: coframe rows in du^a
  std::array<Mat3<double>, 3> omega_ij;  // omega_ij[k][i][j] = omega_ij(E_k)
  Vec3<double> theta12;
  Mat3<double> A{};
  bool has_A = false;
  std::array<Mat3<double>, 2> B;
  std::array<Vec3<double>, 2> C;
};

inline MoebiusData moebius_values(const MoebiusJets& m, const FrameJets& f) {
  MoebiusData d;
  d.rho = m.rho.value();
  d.Y = value(m.Y);
  d.N = value(m.N);
  for (int i = 0; i < 3; ++i) d.Yi[i] = value(f.Yi[i]);
  d.g = value(m.g);
  d.E = value(f.E);
  d.omega_i = value(f.W);
  for (int k = 0; k < 3; ++k) d.omega_ij[k] = value(f.omega[k]);
  d.theta12 = value(f.theta);
  d.has_A = f.has_A;
  if (f.has_A) d.A = value(f.A);
  for (int r = 0; r < 2; ++r) {
    d.xi[r] = value(f.xi[r]);
    d.B[r] = value(f.B[r]);
    d.C[r] = value(f.C[r]);
  }
  return d;
}

inline MoebiusData moebius_data(const ImmersionSpec& spec, const ChartPoint& p, int order = 6) {
  const MoebiusJets m = moebius_jets(spec, p, order);
  return moebius_values(m, make_frame(m));
}

using LorentzMatrix = Eigen::Matrix<double, 7, 7>;

inline LorentzMatrix lorentz_form() {
  LorentzMatrix eta = LorentzMatrix::Identity();
  eta(0, 0) = -1.0;
  return eta;
}

/// Boost of rapidity `phi` along the unit spatial direction n.
inline LorentzMatrix lorentz_boost(const Eigen::Matrix<double, 6, 1>& n, double phi) {
  LorentzMatrix T = LorentzMatrix::Identity();
  T(0, 0) = std::cosh(phi);
  T.block<1, 6>(0, 1) = std::sinh(phi) * n.transpose();
  T.block<6, 1>(1, 0) = std::sinh(phi) * n;
  T.block<6, 6>(1, 1) += (std::cosh(phi) - 1.0) * n * n.transpose();
  return T;
}

/// Seeded orthochronous Lorentz matrix: boost (rapidity in [0, max_rapidity])
/// times a rotation in SO(6).
inline LorentzMatrix random_lorentz(std::uint64_t seed, double max_rapidity = 0.5) {
  CounterRng rng(seed);
  Eigen::Matrix<double, 6, 6> G;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix<double, 6, 6>> qr(G);
  Eigen::Matrix<double, 6, 6> Q = qr.householderQ();
  if (Q.determinant() < 0.0) Q.col(0) = -Q.col(0);
  Eigen::Matrix<double, 6, 1> n;
  for (int i = 0; i < 6; ++i) n[i] = rng.normal();
  n.normalize();
  const double phi = max_rapidity * rng.uniform();
  LorentzMatrix Rot = LorentzMatrix::Identity();
  Rot.block<6, 6>(1, 1) = Q;
  return lorentz_boost(n, phi) * Rot;
}

/// The Moebius image of x under T, as an immersion into S^5: x~ is the
/// spatial part of T l(x) divided by its time component, l the unit-rho lift.
inline ImmersionSpec conformal_transform(const ImmersionSpec& spec, const LorentzMatrix& T) {
  const LorentzMatrix eta = lorentz_form();
  const double defect = (T.transpose() * eta * T - eta).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw NotLorentz("|T^t eta T - eta| = " + std::to_string(defect));
  if (T(0, 0) <= 0.0) throw NotLorentz("T reverses time orientation");
  const auto base = spec.map;
  const AmbientModel am = spec.ambient;
  const std::string name = spec.name;
  return make_immersion(spec.name + "-moebius", AmbientModel::sphere(), spec.domain, [=](const auto& u) {
    using S = typename std::decay_t<decltype(u)>::value_type;
    const std::vector<S> x = (*base)(u);
    std::array<S, 7> l;
    switch (am.kind) {
      case AmbientKind::sphere:
        l[0] = S{} + 1.0;
        for (int k = 0; k < 6; ++k) l[k + 1] = x[k];
        break;
      case AmbientKind::euclidean: {
        S x2 = x[0] * x[0];
        for (int k = 1; k < 5; ++k) x2 = x2 + x[k] * x[k];
        l[0] = 0.5 * (1.0 + x2);
        l[1] = 0.5 * (1.0 - x2);
        for (int k = 0; k < 5; ++k) l[k + 2] = x[k];
        break;
      }
      case AmbientKind::hyperbolic:
        for (int k = 0; k < 6; ++k) l[k] = x[k];
        l[6] = S{} + 1.0;
        break;
    }
    std::array<S, 7> t;
    for (int i = 0; i < 7; ++i) {
      S s = T(i, 0) * l[0];
      for (int j = 1; j < 7; ++j) s = s + T(i, j) * l[j];
      t[i] = s;
    }
    if (!(value_of(t[0]) > 1e-10)) throw ChartBlowUp("'" + name + "' is mapped through infinity");
    std::vector<S> out(6);
    for (int k = 0; k < 6; ++k) out[k] = t[k + 1] / t[0];
    return out;
  });
}

}  // namespace ddvv
