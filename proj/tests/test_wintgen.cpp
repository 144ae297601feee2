#include <gtest/gtest.h>

#include <cmath>

#include "ddvv/gallery.hpp"
#include "ddvv/wintgen.hpp"
#include "support.hpp"

using namespace ddvv;

namespace {

const double kS = 1.0 / std::sqrt(6.0);

std::vector<GalleryEntry> with_L() {
  return {so3_example(), veronese_hopf_example(), cubic_hopf_example(), so3_boosted()};
}

// t = t0 + linear + quadratic in (u - p), random coefficients.
Jet random_gauge(CounterRng& rng) {
  Jet t = Jet::constant(rng.uniform(-3.0, 3.0), kMaxJetOrder);
  std::array<Jet, 3> v;
  for (int a = 0; a < 3; ++a) v[a] = Jet::variable(a, 0.0, kMaxJetOrder);
  for (int a = 0; a < 3; ++a) {
    t += rng.uniform(-1.0, 1.0) * v[a];
    for (int b = a; b < 3; ++b) t += rng.uniform(-0.5, 0.5) * (v[a] * v[b]);
  }
  return t;
}

double max_diff(const Vec3<double>& a, const Vec3<double>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(CanonicalFrame, PatternAndOrientation) {
  for (const auto& g : {so3_example(), veronese_hopf_example(), cubic_hopf_example(), cone_over_veronese(), so3_boosted()})
    for (const auto& p : sample_plan(g, 6, 1)) {
      const MoebiusJets m = moebius_jets(g.spec, p);
      for (Gauge ga : {Gauge::raw, Gauge::v0}) {
        const CanonicalFrame3 cf = canonical_frame3(m, ga);
        EXPECT_LT(pattern_residual(cf), 1e-12) << g.spec.name;
        EXPECT_NEAR(cf.mu, kS, 1e-12);
        const Mat3<double> R = value(cf.R);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += R[i][k] * R[j][k];
            EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-13);
          }
        EXPECT_GE(wintgen_jets(cf).L.value(), -1e-12);
      }
    }
}

TEST(CanonicalFrame, RefusesNonIdealPoints) {
  const GalleryEntry g = generic_control();
  EXPECT_THROW(canonical_frame3(moebius_jets(g.spec, basepoint(g))), NotIdealPoint);
  EXPECT_THROW(invariants_uvlg(g.spec, basepoint(g)), NotIdealPoint);
}

TEST(SO3, GroundTruth) {
  const GalleryEntry g = so3_example();
  for (const auto& p : sample_plan(g, 20, 2)) {
    const WintgenInvariants w = invariants_uvlg(g.spec, p);
    EXPECT_NEAR(w.mu, kS, 1e-12);
    EXPECT_NEAR(w.L, kS, 1e-10);
    EXPECT_NEAR(w.U, 0.0, 1e-10);
    EXPECT_NEAR(w.V, 0.0, 1e-10);
    EXPECT_NEAR(w.G, 0.0, 1e-10);
    EXPECT_NEAR(w.Fhat, 1.0 / 12.0, 1e-10);
    EXPECT_NEAR(2.0 * w.Fhat, w.L * w.L, 1e-10);
    EXPECT_LT(max_abs(w.domega), 1e-10);
  }
}

TEST(SO3, StructureMatrixInFlatGauge) {
  const GalleryEntry g = so3_example();
  const auto want = so3_structure_matrix();
  for (const auto& p : sample_plan(g, 5, 3)) {
    const MoebiusJets m = moebius_jets(g.spec, p);
    const CanonicalFrame3 cf0 = canonical_frame3(m);
    const CanonicalFrame3 cf = canonical_frame3(m, Gauge::raw, flattening_gauge(cf0, wintgen_jets(cf0)));
    const WintgenJets w = wintgen_jets(cf);
    EXPECT_LT(max_abs(value(w.Omega12)), 1e-12);
    EXPECT_NEAR(cf.frame.theta[2].value(), kS, 1e-10);
    EXPECT_NEAR(cf.frame.theta[0].value(), 0.0, 1e-10);
    EXPECT_NEAR(cf.frame.theta[1].value(), 0.0, 1e-10);
    const auto M = structure_matrix(m, cf, w.lambda);
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) EXPECT_NEAR(M[k][a][b], want[k][a][b], 1e-9) << k << " " << a << " " << b;
  }
}

TEST(Gauge, V0FixesCToTheRealAxis) {
  const GalleryEntry g = cubic_hopf_example();
  for (const auto& p : sample_plan(g, 8, 4)) {
    const MoebiusJets m = moebius_jets(g.spec, p);
    const CanonicalFrame3 raw = canonical_frame3(m, Gauge::raw), v0 = canonical_frame3(m, Gauge::v0);
    ASSERT_TRUE(v0.v0_applied);
    const WintgenJets a = wintgen_jets(raw), b = wintgen_jets(v0);
    EXPECT_NEAR(b.V.value(), 0.0, 1e-12);
    EXPECT_GT(b.U.value(), 0.0);
    EXPECT_NEAR(std::hypot(a.U.value(), a.V.value()), b.U.value(), 1e-12);
    EXPECT_LT(pattern_residual(v0), 1e-12);
    const WintgenInvariants va = invariant_values(m, raw, a), vb = invariant_values(m, v0, b);
    EXPECT_NEAR(va.L, vb.L, 1e-12);
    EXPECT_NEAR(va.G, vb.G, 1e-12);
    EXPECT_NEAR(va.Fhat, vb.Fhat, 1e-11);
    EXPECT_LT(max_diff(va.omega_chart, vb.omega_chart), 1e-11);
  }
  const GalleryEntry so3 = so3_example();
  EXPECT_FALSE(canonical_frame3(moebius_jets(so3.spec, basepoint(so3)), Gauge::v0).v0_applied);
}

TEST(Gauge, InvariantsIgnoreNonConstantRotations) {
  CounterRng rng(8);
  for (const auto& g : with_L())
    for (const auto& p : sample_plan(g, 3, 5)) {
      const MoebiusJets m = moebius_jets(g.spec, p);
      const CanonicalFrame3 cf = canonical_frame3(m);
      const WintgenInvariants base = invariant_values(m, cf, wintgen_jets(cf));
      for (int trial = 0; trial < 4; ++trial) {
        const CanonicalFrame3 rot = canonical_frame3(m, Gauge::raw, random_gauge(rng));
        EXPECT_LT(pattern_residual(rot), 1e-12);
        const WintgenInvariants w = invariant_values(m, rot, wintgen_jets(rot));
        EXPECT_NEAR(w.L, base.L, 1e-10) << g.spec.name;
        EXPECT_NEAR(w.G, base.G, 1e-10) << g.spec.name;
        EXPECT_NEAR(w.Fhat, base.Fhat, 1e-10) << g.spec.name;
        EXPECT_NEAR(std::hypot(w.U, w.V), std::hypot(base.U, base.V), 1e-10);
        EXPECT_LT(max_diff(w.omega_chart, base.omega_chart), 1e-10) << g.spec.name;
      }
    }
}

TEST(Gauge, FlatteningGaugeKillsOmega12AtThePoint) {
  const GalleryEntry g = cubic_hopf_example();
  for (const auto& p : sample_plan(g, 4, 6)) {
    const MoebiusJets m = moebius_jets(g.spec, p);
    const CanonicalFrame3 cf = canonical_frame3(m);
    const CanonicalFrame3 flat = canonical_frame3(m, Gauge::raw, flattening_gauge(cf, wintgen_jets(cf)));
    EXPECT_LT(max_abs(value(wintgen_jets(flat).Omega12)), 1e-11);
  }
}

TEST(Invariants, ChartTwoFormMatchesFrameComponents) {
  for (const auto& g : with_L())
    for (const auto& p : sample_plan(g, 3, 7)) {
      const MoebiusJets m = moebius_jets(g.spec, p);
      const CanonicalFrame3 cf = canonical_frame3(m);
      const WintgenInvariants w = invariant_values(m, cf, wintgen_jets(cf));
      const Mat3<double> E = value(cf.frame.E);
      const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
      for (int q = 0; q < 3; ++q) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s += E[pairs[q][0]][a] * E[pairs[q][1]][b] * w.domega_chart[a][b];
        EXPECT_NEAR(s, w.domega[q], 1e-11);
      }
    }
}

TEST(Invariants, HatFrameIsALorentzFrame) {
  for (const auto& g : with_L())
    for (const auto& p : sample_plan(g, 3, 8)) {
      const MoebiusJets m = moebius_jets(g.spec, p);
      const CanonicalFrame3 cf = canonical_frame3(m);
      const WintgenJets w = wintgen_jets(cf);
      const HatFrameData h = hat_frame(m, cf, w.lambda);
      const LVec<double> Y = value(m.Y), Yh = value(h.Yhat);
      EXPECT_NEAR(lorentz_dot(Yh, Yh), 0.0, 1e-11);
      EXPECT_NEAR(lorentz_dot(Y, Yh), 1.0, 1e-11);
      for (int i = 0; i < 3; ++i) {
        const LVec<double> ei = value(h.eta[i]);
        EXPECT_NEAR(lorentz_dot(ei, Y), 0.0, 1e-11);
        EXPECT_NEAR(lorentz_dot(ei, Yh), 0.0, 1e-11);
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(lorentz_dot(ei, value(h.eta[j])), i == j ? 1.0 : 0.0, 1e-11);
      }
    }
}

TEST(Identities, HoldAtSampledPoints) {
  for (const auto& g : with_L())
    for (const auto& p : sample_plan(g, 6, 9)) {
      const MoebiusJets m = moebius_jets(g.spec, p);
      const CanonicalFrame3 cf = canonical_frame3(m, Gauge::v0);
      const IdentityResiduals r = identity_residuals(m, cf, 0.25);
      EXPECT_LT(r.E3L_minus_G, 1e-9) << g.spec.name;
      EXPECT_LT(r.Fhat_two_route, 1e-9) << g.spec.name;
      EXPECT_LT(r.Ghat, 1e-9) << g.spec.name;
      EXPECT_LT(r.Ghat_response, 1e-9) << g.spec.name;
      EXPECT_LT(r.hat_pattern, 1e-9) << g.spec.name;
      EXPECT_LT(r.dF_plus_2Fomega, 1e-8) << g.spec.name;
      EXPECT_LT(r.domega3_minus_2L, 1e-9) << g.spec.name;
      EXPECT_LT(r.dtheta_minus_2mu2, 1e-9) << g.spec.name;
      EXPECT_LT(r.holomorphic, 1e-9) << g.spec.name;
      if (g.expected.minimal) EXPECT_LT(r.omega_dlog_nu, 1e-9) << g.spec.name;
    }
}

TEST(Identities, GhatRespondsLinearlyToLambda) {
  const GalleryEntry g = cubic_hopf_example();
  const MoebiusJets m = moebius_jets(g.spec, basepoint(g));
  const CanonicalFrame3 cf = canonical_frame3(m);
  const WintgenJets w = wintgen_jets(cf);
  for (double delta : {-0.3, 0.05, 0.7}) {
    const HatFrameData h = hat_frame(m, cf, w.lambda + delta);
    EXPECT_NEAR(hat_Ghat(h), -delta * w.L.value(), 1e-11);
  }
}

TEST(Identities, IntegrableDistributionRefusal) {
  const GalleryEntry g = cone_over_veronese();
  for (const auto& p : sample_plan(g, 5, 10)) {
    const MoebiusJets m = moebius_jets(g.spec, p);
    const WintgenJets w = wintgen_jets(canonical_frame3(m));
    EXPECT_NEAR(w.L.value(), 0.0, 1e-10);
    EXPECT_FALSE(w.has_lambda);
    EXPECT_THROW(invariants_uvlg(g.spec, p), IntegrableDistribution);
    EXPECT_THROW(identity_residuals(m, canonical_frame3(m)), IntegrableDistribution);
  }
}

TEST(TheoremB, Classification) {
  for (const auto& g : {so3_example(), veronese_hopf_example(), cubic_hopf_example(), so3_boosted()}) {
    const TheoremBVerdict v = classify_theorem_b(g.spec, sample_plan(g, 10, 11));
    EXPECT_TRUE(v.closed) << g.spec.name;
    EXPECT_EQ(v.Fhat_sign, FhatSign::positive);
    EXPECT_EQ(v.classification, Classification::sphere_minimal) << g.spec.name;
  }
  const GalleryEntry so3 = so3_example();
  const ImmersionSpec moved = conformal_transform(so3.spec, random_lorentz(4242, 0.5));
  EXPECT_EQ(classify_theorem_b(moved, sample_plan(so3, 10, 12)).classification, Classification::sphere_minimal);
  const GalleryEntry cone = cone_over_veronese();
  EXPECT_THROW(classify_theorem_b(cone.spec, sample_plan(cone, 5, 1)), IntegrableDistribution);
}

TEST(TheoremB, VerdictLogic) {
  auto inv = [](double F, double dw) {
    WintgenInvariants w;
    w.Fhat = F;
    w.domega = {{dw, 0.0, 0.0}};
    return w;
  };
  EXPECT_EQ(theorem_b_from({inv(0.1, 0), inv(0.2, 0)}, 1e-6).classification, Classification::sphere_minimal);
  EXPECT_EQ(theorem_b_from({inv(0.0, 0), inv(1e-8, 0)}, 1e-6).classification, Classification::euclidean_minimal);
  EXPECT_EQ(theorem_b_from({inv(-0.1, 0), inv(-0.2, 0)}, 1e-6).classification, Classification::hyperbolic_minimal);
  EXPECT_EQ(theorem_b_from({inv(-0.1, 0), inv(0.2, 0)}, 1e-6).classification, Classification::inconclusive);
  EXPECT_EQ(theorem_b_from({inv(0.1, 1e-3), inv(0.2, 0)}, 1e-6).classification, Classification::not_moebius_minimal);
  EXPECT_EQ(theorem_b_from({inv(-0.1, 1e-3), inv(0.2, 0)}, 1e-6).Fhat_sign, FhatSign::mixed);
}

TEST(Hopf, CriterionOnHopfLifts) {
  for (const auto& g : {veronese_hopf_example(), cubic_hopf_example(), so3_example()}) {
    const HopfVerdict h = hopf_criterion(g.spec, sample_plan(g, 10, 13));
    EXPECT_TRUE(h.satisfied) << g.spec.name;
    EXPECT_LT(h.max_G, 1e-9);
    EXPECT_LT(h.max_domega, 1e-9);
  }
  WintgenInvariants w;
  w.G = 0.1;
  EXPECT_FALSE(hopf_from({w}, 1e-6).satisfied);
  EXPECT_FALSE(hopf_from({}, 1e-6).satisfied);
}

TEST(Invariants, AgreeAcrossModels) {
  const Box upper{{{0.0, 6.0}, {0.4, 2.7}, {0.3, 2.8}}};
  const ImmersionSpec s = so3_example().spec;
  for (const auto& spec : {ddvv::testing::sphere_to_hyperbolic(s, upper), ddvv::testing::sphere_to_euclidean(s, upper)})
    for (const auto& p : sample_box(upper, 5, 14)) {
      const WintgenInvariants w = invariants_uvlg(spec, p);
      EXPECT_NEAR(w.L, kS, 1e-9) << spec.name;
      EXPECT_NEAR(w.Fhat, 1.0 / 12.0, 1e-9) << spec.name;
      EXPECT_NEAR(w.G, 0.0, 1e-9);
      EXPECT_LT(max_abs(w.domega), 1e-9);
    }
}
