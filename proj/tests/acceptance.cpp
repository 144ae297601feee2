// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ddvv/expression.hpp"
#include "ddvv/gallery.hpp"
#include "ddvv/wintgen.hpp"
#include "support.hpp"

using namespace ddvv;

namespace {

const double kS = 1.0 / std::sqrt(6.0);

// Tracks the worst value seen against a bound and names the first offender.
struct Gate {
  std::vector<std::string> failures;
  std::ostringstream notes;

  void le(double v, double bound, const std::string& what) {
    if (!(v <= bound)) {
      std::ostringstream s;
      s << what << " = " << v << " (bound " << bound << ")";
      failures.push_back(s.str());
    }
  }
  void near(double v, double want, double tol, const std::string& what) { le(std::abs(v - want), tol, what); }
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string at(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i) + "]"; }

double mat_diff(const Mat3<double>& a, const Mat3<double>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

double vec_diff(const Vec3<double>& a, const Vec3<double>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// A random rotation angle of the E_1, E_2 plane: constant, linear and quadratic parts.
Jet random_gauge(CounterRng& rng) {
  Jet t = Jet::constant(rng.uniform(-M_PI, M_PI), kMaxJetOrder);
  std::array<Jet, 3> v;
  for (int a = 0; a < 3; ++a) v[a] = Jet::variable(a, 0.0, kMaxJetOrder);
  for (int a = 0; a < 3; ++a) {
    t += rng.uniform(-1.0, 1.0) * v[a];
    for (int b = a; b < 3; ++b) t += rng.uniform(-0.5, 0.5) * (v[a] * v[b]);
  }
  return t;
}

std::vector<GalleryEntry> with_L() {
  std::vector<GalleryEntry> out;
  for (auto& g : gallery())
    if (g.expected.ideal && !g.expected.L_zero) out.push_back(g);
  return out;
}

void ddvv_inequality(Gate& g) {
  double worst = INFINITY;
  for (const auto& e : gallery()) {
    const auto s = sample_plan(e, 20, 101);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = ddvv_report(e.spec, s[i]).slack;
      worst = std::min(worst, v);
      g.le(-v, 1e-10, "slack at " + at(e.spec.name, i));
    }
  }
  CounterRng rng(2024);
  double worst_gap = INFINITY;
  for (int t = 0; t < 10000; ++t) {
    const int m = 3;
    const double gap = ddvv_matrix_gap({ddvv::testing::random_tracefree(rng, m), ddvv::testing::random_tracefree(rng, m)});
    worst_gap = std::min(worst_gap, gap);
    g.le(-gap, 1e-10, "matrix gap, pair " + std::to_string(t));
  }
  double eq = 0.0;
  for (const char* n : {"so3", "veronese-hopf", "cone"}) {
    const GalleryEntry e = gallery_entry(n);
    const auto s = sample_plan(e, 100, 102);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = std::abs(ddvv_report(e.spec, s[i]).slack);
      eq = std::max(eq, v);
      g.le(v, 1e-8, "|slack| at " + at(n, i));
    }
  }
  const GalleryEntry gc = generic_control();
  const double strict = ddvv_report(gc.spec, basepoint(gc)).slack;
  g.check(strict > 0.01, "generic-control basepoint slack " + std::to_string(strict));
  g.notes << "min slack " << worst << ", min gap " << worst_gap << ", max equality |slack| " << eq
          << ", generic slack " << strict;
}

void moebius_constants(Gate& g) {
  double dmu = 0.0, db = 0.0, n = 0;
  for (const auto& e : gallery()) {
    if (!e.expected.ideal) continue;
    const auto s = sample_plan(e, 20, 201);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const MoebiusJets m = moebius_jets(e.spec, s[i]);
      const CanonicalFrame3 cf = canonical_frame3(m);
      double b2 = 0.0;
      for (int r = 0; r < 2; ++r)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) b2 += std::pow(m.B[r][a][b].value(), 2);
      const double mu = wintgen_jets(cf).mu.value();
      dmu = std::max(dmu, std::abs(mu - kS));
      db = std::max(db, std::abs(b2 - 2.0 / 3.0));
      g.near(mu, kS, 1e-8, "mu at " + at(e.spec.name, i));
      g.near(b2, 2.0 / 3.0, 1e-8, "sum B^2 at " + at(e.spec.name, i));
      ++n;
    }
  }
  const GalleryEntry so3 = so3_example();
  double drho = 0.0;
  for (const auto& p : sample_plan(so3, 20, 202)) {
    const double rho = moebius_jets(so3.spec, p).rho.value();
    drho = std::max(drho, std::abs(rho - std::sqrt(6.0)));
    g.near(rho, std::sqrt(6.0), 1e-10, "so3 rho");
  }
  g.notes << n << " ideal points; max |mu - 1/sqrt6| " << dmu << ", max |sum B^2 - 2/3| " << db
          << ", max |rho - sqrt6| " << drho;
}

void so3_ground_truth(Gate& g) {
  const GalleryEntry e = so3_example();
  const auto want = so3_structure_matrix();
  double worst_M = 0.0;
  const auto s = sample_plan(e, 20, 301);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string tag = at("so3", i);
    const MoebiusJets m = moebius_jets(e.spec, s[i]);
    for (int r = 0; r < 2; ++r)
      for (int a = 0; a < 3; ++a) g.le(std::abs(m.C[r][a].value()), 1e-8, "C at " + tag);
    const CanonicalFrame3 cf0 = canonical_frame3(m);
    const WintgenJets w0 = wintgen_jets(cf0);
    const WintgenInvariants v = invariant_values(m, cf0, w0);
    g.near(v.U, 0.0, 1e-8, "U at " + tag);
    g.near(v.V, 0.0, 1e-8, "V at " + tag);
    g.near(v.G, 0.0, 1e-8, "G at " + tag);
    g.near(v.L, kS, 1e-8, "L at " + tag);
    g.near(v.Fhat, 1.0 / 12.0, 1e-8, "Fhat at " + tag);
    g.near(2.0 * v.Fhat, v.L * v.L, 1e-8, "2 Fhat - L^2 at " + tag);
    g.le(max_abs(v.domega), 1e-8, "d omega at " + tag);
    // theta_12 and the structure matrix are read in the gauge with Omega_12(p) = 0.
    const CanonicalFrame3 cf = canonical_frame3(m, Gauge::raw, flattening_gauge(cf0, w0));
    const WintgenJets w = wintgen_jets(cf);
    g.near(cf.frame.theta[2].value(), kS, 1e-8, "theta_12(E_3) at " + tag);
    const auto M = structure_matrix(m, cf, w.lambda);
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          const double d = std::abs(M[k][a][b] - want[k][a][b]);
          worst_M = std::max(worst_M, d);
          g.le(d, 1e-7, "structure entry " + std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) + " at " + tag);
        }
  }
  g.notes << "20 points; max structure-matrix deviation " << worst_M;
}

void theorem_b(Gate& g) {
  const double tol = 1e-6;
  const GalleryEntry so3 = so3_example(), vh = veronese_hopf_example(), cone = cone_over_veronese();
  const ImmersionSpec boosted = conformal_transform(so3.spec, random_lorentz(4242, 0.5));
  struct Case {
    std::string name;
    ImmersionSpec spec;
    std::vector<ChartPoint> sample;
  };
  for (const Case& c : {Case{"so3", so3.spec, sample_plan(so3, 20, 401)},
                        Case{"veronese-hopf", vh.spec, sample_plan(vh, 20, 402)},
                        Case{"boosted so3", boosted, sample_plan(so3, 20, 403)}}) {
    const TheoremBVerdict v = classify_theorem_b(c.spec, c.sample, tol, tol);
    g.check(v.classification == Classification::sphere_minimal, c.name + " classified " + to_string(v.classification));
    g.notes << c.name << ": " << to_string(v.classification) << " (max dw " << v.max_domega << ", Fhat in [" << v.min_Fhat
            << ", " << v.max_Fhat << "]); ";
  }
  bool refused = false;
  try {
    classify_theorem_b(cone.spec, sample_plan(cone, 20, 404), tol, tol);
  } catch (const IntegrableDistribution&) {
    refused = true;
  }
  g.check(refused, "cone did not raise IntegrableDistribution");
  g.notes << "cone: " << (refused ? "IntegrableDistribution" : "no refusal");
}

void hopf(Gate& g) {
  for (const char* n : {"veronese-hopf", "cubic-hopf"}) {
    const GalleryEntry e = gallery_entry(n);
    const HopfVerdict h = hopf_criterion(e.spec, sample_plan(e, 20, 501), 1e-6);
    g.check(h.satisfied, e.spec.name + " not satisfied");
    g.le(h.max_G, 1e-6, e.spec.name + " max |G|");
    g.le(h.max_domega, 1e-6, e.spec.name + " max |d omega|");
    g.notes << e.spec.name << ": max|G| " << h.max_G << ", max|dw| " << h.max_domega << "; ";
  }
}

void integrability(Gate& g) {
  double worst = 0.0, worst_c = 0.0;
  for (const auto& e : gallery()) {
    const auto s = sample_plan(e, 20, 601);
    if (e.expected.umbilic) {
      bool refused = false;
      try {
        moebius_jets(e.spec, s[0]);
      } catch (const UmbilicPoint&) {
        refused = true;
      }
      g.check(refused, e.spec.name + " was not refused");
      continue;
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      const MoebiusJets m = moebius_jets(e.spec, s[i]);
      const FrameJets f = make_frame(m);
      const double r = integrability_residuals(m, f, covariant_derivatives(f)).max();
      const double c = c_cross_residual(f);
      worst = std::max(worst, r);
      worst_c = std::max(worst_c, c);
      g.le(r, 1e-7, "integrability at " + at(e.spec.name, i));
      g.le(c, 1e-7, "C cross at " + at(e.spec.name, i));
    }
  }
  g.notes << "max residual " << worst << ", max C cross " << worst_c << " (umbilic control refused)";
}

void invariance(Gate& g) {
  double wl = 0.0, wg = 0.0;
  for (const auto& e : gallery()) {
    if (e.expected.umbilic) continue;
    const bool has_L = e.expected.ideal && !e.expected.L_zero;
    const auto s = sample_plan(e, 5, 701);
    for (std::uint64_t t = 1; t <= 5; ++t) {
      const ImmersionSpec moved = conformal_transform(e.spec, random_lorentz(700 + t, 0.5));
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string tag = at(e.spec.name, i) + " boost " + std::to_string(t);
        const MoebiusJets a = moebius_jets(e.spec, s[i]), b = moebius_jets(moved, s[i]);
        const double dg = mat_diff(value(a.g), value(b.g));
        wl = std::max(wl, dg);
        g.le(dg, 1e-7, "metric at " + tag);
        g.check(ddvv_report(e.spec, s[i]).ideal == ddvv_report(moved, s[i]).ideal, "ideal flag at " + tag);
        if (!has_L) continue;
        const CanonicalFrame3 ca = canonical_frame3(a), cb = canonical_frame3(b);
        const WintgenInvariants va = invariant_values(a, ca, wintgen_jets(ca)),
                                vb = invariant_values(b, cb, wintgen_jets(cb));
        for (auto [x, y, n] : {std::tuple{va.L, vb.L, "L"}, {va.G, vb.G, "G"}, {va.Fhat, vb.Fhat, "Fhat"}}) {
          wl = std::max(wl, std::abs(x - y));
          g.near(x, y, 1e-7, std::string(n) + " at " + tag);
        }
        const double dw = mat_diff(va.domega_chart, vb.domega_chart);
        wl = std::max(wl, dw);
        g.le(dw, 1e-7, "d omega at " + tag);
      }
    }
    if (!has_L) continue;
    CounterRng rng(7000);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const MoebiusJets m = moebius_jets(e.spec, s[i]);
      const CanonicalFrame3 cf = canonical_frame3(m);
      const WintgenInvariants base = invariant_values(m, cf, wintgen_jets(cf));
      for (int t = 0; t < 10; ++t) {
        const std::string tag = at(e.spec.name, i) + " gauge " + std::to_string(t);
        const CanonicalFrame3 rot = canonical_frame3(m, Gauge::raw, random_gauge(rng));
        const WintgenInvariants w = invariant_values(m, rot, wintgen_jets(rot));
        const double d = std::max({std::abs(w.L - base.L), std::abs(w.G - base.G), std::abs(w.Fhat - base.Fhat),
                                   vec_diff(w.omega_chart, base.omega_chart)});
        wg = std::max(wg, d);
        g.le(d, 1e-8, "gauge invariants at " + tag);
      }
    }
  }
  g.notes << "max Lorentz deviation " << wl << ", max gauge deviation " << wg;
}

void identities(Gate& g) {
  IdentityResiduals worst;
  auto up = [](double& w, double v) { w = std::max(w, v); };
  for (const auto& e : with_L()) {
    const auto s = sample_plan(e, 20, 801);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string tag = at(e.spec.name, i);
      const MoebiusJets m = moebius_jets(e.spec, s[i]);
      const IdentityResiduals r = identity_residuals(m, canonical_frame3(m), 0.1);
      g.le(r.E3L_minus_G, 1e-8, "E_3(L) - G at " + tag);
      g.le(r.Fhat_two_route, 1e-8, "Fhat two routes at " + tag);
      g.le(r.Ghat, 1e-8, "Ghat at " + tag);
      g.le(r.Ghat_response, 1e-8, "Ghat response at " + tag);
      g.le(r.domega3_minus_2L, 1e-8, "d omega_3(E_1,E_2) - 2L at " + tag);
      g.le(r.dtheta_minus_2mu2, 1e-8, "d theta_12(E_1,E_2) - 2 mu^2 at " + tag);
      g.le(r.holomorphic, 1e-7, "holomorphic residual at " + tag);
      if (e.expected.minimal) {
        g.le(r.dF_plus_2Fomega, 1e-8, "dFhat + 2 Fhat omega at " + tag);
        g.le(r.omega_dlog_nu, 1e-8, "omega - d log nu at " + tag);
        up(worst.dF_plus_2Fomega, r.dF_plus_2Fomega);
        up(worst.omega_dlog_nu, r.omega_dlog_nu);
      }
      up(worst.E3L_minus_G, r.E3L_minus_G);
      up(worst.Fhat_two_route, r.Fhat_two_route);
      up(worst.Ghat, r.Ghat);
      up(worst.Ghat_response, r.Ghat_response);
      up(worst.domega3_minus_2L, r.domega3_minus_2L);
      up(worst.dtheta_minus_2mu2, r.dtheta_minus_2mu2);
      up(worst.holomorphic, r.holomorphic);
    }
  }
  g.notes << "max: E3L-G " << worst.E3L_minus_G << ", Fhat " << worst.Fhat_two_route << ", Ghat " << worst.Ghat
          << ", response " << worst.Ghat_response << ", dF+2Fw " << worst.dF_plus_2Fomega << ", w-dlog nu "
          << worst.omega_dlog_nu << ", dw3-2L " << worst.domega3_minus_2L << ", dtheta-2mu^2 " << worst.dtheta_minus_2mu2
          << ", holomorphic " << worst.holomorphic;
}

void numerics(Gate& g) {
  CounterRng rng(9001);
  std::vector<MultiIndex> alphas;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c)
        if (a + b + c > 0) alphas.push_back({a, b, c});
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = parse_expression(ddvv::testing::random_expression(rng, 3));
    const std::array<double, 3> p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::array<Jet, 3> u;
    for (int a = 0; a < 3; ++a) u[a] = Jet::variable(a, p[a], 3);
    const Jet j = evaluate(e, u);
    auto f = [&](std::array<double, 3> q) { return evaluate(e, q); };
    for (const auto& al : alphas) {
      const double fd = ddvv::testing::fd_partial(f, p, al, 1e-2);
      const double rel = std::abs(j.partial(al) - fd) / std::max(1.0, std::abs(fd));
      worst = std::max(worst, rel);
      g.le(rel, 1e-6, "jet vs difference, expression " + std::to_string(i));
    }
  }
  double rt = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Expr e = parse_expression(ddvv::testing::random_expression(rng, 4));
    const Expr again = parse_expression(to_string(e));
    const std::array<double, 3> q = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double a = evaluate(e, q), b = evaluate(again, q);
    const double d = std::abs(a - b) / std::max(1.0, std::abs(a));
    rt = std::max(rt, d);
    g.le(d, 1e-12, "expression round-trip " + std::to_string(i));
  }
  for (const char* n : {"so3", "veronese-hopf", "cubic-hopf"}) {
    const ImmersionSpec a = gallery_entry(n).spec, b = parse_immersion(*gallery_expression_text(n));
    const ImmersionSpec c = parse_immersion(immersion_text(b));
    for (const auto& p : sample_box(a.domain, 10, 902)) {
      const auto xa = eval_immersion(a, p), xb = eval_immersion(b, p), xc = eval_immersion(c, p);
      for (std::size_t k = 0; k < xa.size(); ++k) {
        const double d = std::max(std::abs(xa[k] - xb[k]), std::abs(xb[k] - xc[k]));
        rt = std::max(rt, d);
        g.le(d, 1e-12, std::string("immersion round-trip ") + n);
      }
    }
  }
  const std::string cmd = std::string(DDVV_CLI_PATH) + " invariants --example cubic-hopf --points 12 --seed 5 2>/dev/null";
  const auto r1 = ddvv::testing::run_capture(cmd), r2 = ddvv::testing::run_capture(cmd);
  g.check(r1.status == 0 && !r1.out.empty(), "CLI run failed with status " + std::to_string(r1.status));
  g.check(r1.out == r2.out, "CLI output differs between runs");
  g.notes << "max jet relative error " << worst << ", max round-trip error " << rt << ", CLI output "
          << (r1.out == r2.out ? "identical" : "different") << " (" << r1.out.size() << " bytes)";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Gate&)>>> criteria = {
      {"DDVV inequality", ddvv_inequality},
      {"Moebius constants", moebius_constants},
      {"SO(3) ground truth", so3_ground_truth},
      {"Theorem B classification", theorem_b},
      {"Hopf criterion", hopf},
      {"integrability residuals", integrability},
      {"invariance suite", invariance},
      {"identity suite", identities},
      {"numerics", numerics},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Gate g;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(g);
    } catch (const std::exception& e) {
      g.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = g.failures.empty();
    failed += !ok;
    std::printf("%s %zu %s (%.1f s): %s\n", ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                g.notes.str().c_str());
    for (std::size_t i = 0; i < std::min<std::size_t>(g.failures.size(), 5); ++i)
      std::printf("    %s\n", g.failures[i].c_str());
    if (g.failures.size() > 5) std::printf("    ... %zu more\n", g.failures.size() - 5);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
