#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ddvv/gallery.hpp"
#include "ddvv/wintgen.hpp"

using namespace ddvv;

TEST(Gallery, NamesAndLookup) {
  std::set<std::string> names;
  for (const auto& g : gallery()) {
    EXPECT_TRUE(names.insert(g.spec.name).second) << g.spec.name;
    EXPECT_FALSE(g.description.empty());
    EXPECT_FALSE(g.expected.provenance.empty());
  }
  for (const char* n : {"so3", "veronese-hopf", "cone", "umbilic-control", "generic-control"}) EXPECT_EQ(names.count(n), 1u);
  EXPECT_EQ(gallery_entry("cone").spec.name, "cone");
  EXPECT_THROW(gallery_entry("torus"), NameError);
  EXPECT_EQ(control_examples().size(), 2u);
}

TEST(Gallery, AmbientConstraints) {
  for (const auto& g : gallery()) EXPECT_LT(validate_ambient(g.spec, sample_plan(g, 50, 1)), 1e-12) << g.spec.name;
}

TEST(Gallery, SamplePlanIsSeededAndInsideTheDomain) {
  for (const auto& g : gallery()) {
    const auto a = sample_plan(g, 30, 5), b = sample_plan(g, 30, 5), c = sample_plan(g, 30, 6);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (const auto& p : a) EXPECT_TRUE(box_contains(g.spec.domain, p));
  }
}

TEST(Gallery, ExpectationsHold) {
  for (const auto& g : gallery()) {
    const Expected& e = g.expected;
    for (const auto& p : sample_plan(g, 6, 2)) {
      if (e.umbilic) {
        EXPECT_THROW(moebius_jets(g.spec, p), UmbilicPoint);
        continue;
      }
      const DDVVReport rep = ddvv_report(g.spec, p);
      EXPECT_EQ(rep.ideal, e.ideal) << g.spec.name;
      if (e.minimal) EXPECT_LT(rep.H_norm2, 1e-20) << g.spec.name;
      if (!e.ideal) continue;
      const MoebiusJets m = moebius_jets(g.spec, p);
      if (e.rho) EXPECT_NEAR(m.rho.value(), *e.rho, 1e-10);
      if (e.C_zero)
        for (int r = 0; r < 2; ++r)
          for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.C[r][i].value(), 0.0, 1e-10) << g.spec.name;
      const WintgenJets w = wintgen_jets(canonical_frame3(m));
      if (e.mu) EXPECT_NEAR(w.mu.value(), *e.mu, 1e-12);
      if (e.L_zero) EXPECT_NEAR(w.L.value(), 0.0, 1e-10);
      if (e.L) EXPECT_NEAR(w.L.value(), *e.L, 1e-10);
      if (e.UV_zero) EXPECT_NEAR(std::hypot(w.U.value(), w.V.value()), 0.0, 1e-10);
      if (e.G_zero) EXPECT_NEAR(w.G.value(), 0.0, 1e-10) << g.spec.name;
      if (e.Fhat) EXPECT_NEAR(w.Fhat.value(), *e.Fhat, 1e-10);
      if (e.domega_zero && w.has_lambda)
        EXPECT_LT(std::max({std::abs(w.domega[0][1].value()), std::abs(w.domega[0][2].value()),
                            std::abs(w.domega[1][2].value())}),
                  1e-9);
    }
  }
  const GalleryEntry gc = generic_control();
  EXPECT_GT(ddvv_report(gc.spec, basepoint(gc)).slack, *gc.expected.min_slack);
}

TEST(Gallery, CubicHopfHasNonzeroC) {
  const GalleryEntry g = cubic_hopf_example();
  const MoebiusJets m = moebius_jets(g.spec, basepoint(g));
  double c2 = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i) c2 += std::pow(m.C[r][i].value(), 2);
  EXPECT_GT(c2, 0.1);
}

TEST(HopfLift, DegenerateAndTotallyGeodesicCurves) {
  using P = ComplexPoly;
  EXPECT_THROW(hopf_lift_curve({P{0.0, 1.0}, P{0.0, 2.0}, P{0.0}}), DegenerateCurve);
  const GalleryEntry line = hopf_lift_curve({P{1.0}, P{0.0, 1.0}, P{0.0}}, "line");
  EXPECT_THROW(moebius_jets(line.spec, {0.2, 0.3, 1.0}), UmbilicPoint);
}

TEST(HopfLift, ConformalCurvesGiveTheSameInvariants) {
  // A unitary change of C^3 moves the lift by an isometry of S^5.
  using P = ComplexPoly;
  const std::complex<double> i(0.0, 1.0);
  const double c = std::cos(0.4), s = std::sin(0.4);
  const GalleryEntry a = veronese_hopf_example();
  const GalleryEntry b = hopf_lift_curve(
      {P{c, -s * std::sqrt(2.0) * i}, P{s, c * std::sqrt(2.0) * i}, P{0.0, 0.0, i}}, "rotated");
  for (const auto& p : sample_plan(a, 5, 3)) {
    const WintgenInvariants wa = invariants_uvlg(a.spec, p), wb = invariants_uvlg(b.spec, p);
    EXPECT_NEAR(wa.L, wb.L, 1e-10);
    EXPECT_NEAR(wa.Fhat, wb.Fhat, 1e-10);
  }
}

TEST(Gallery, FileFormsExistForExpressionEntries) {
  for (const char* n : {"so3", "veronese-hopf", "cubic-hopf"}) {
    const auto t = gallery_expression_text(n);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(parse_immersion(*t).name, n);
  }
  EXPECT_FALSE(gallery_expression_text("cone").has_value());
  EXPECT_FALSE(gallery_expression_text("umbilic-control").has_value());
}
