// ddvv: batch verification of Wintgen ideal 3-folds over sampled chart points.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ddvv/classical.hpp"
#include "ddvv/gallery.hpp"
#include "ddvv/moebius.hpp"
#include "ddvv/report.hpp"
#include "ddvv/wintgen.hpp"

namespace {

using namespace ddvv;

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string spec_path, example;
  int points = 10;
  std::uint64_t seed = 1;
  int order = 6;
  double tol = 1e-7, ltol = 1e-6;
  std::string json_path, csv_path;
  std::string gauge = "raw";
  bool assert_expected = false;
  bool timing = false;
};

struct Source {
  ImmersionSpec spec;
  std::string origin;
  std::optional<GalleryEntry> entry;  // gallery record matching the spec name
};

Source load_source(const Options& o) {
  Source s;
  if (!o.example.empty()) {
    GalleryEntry g = gallery_entry(o.example);
    s.spec = g.spec;
    s.origin = "example:" + o.example;
    s.entry = std::move(g);
  } else {
    s.spec = load_immersion(o.spec_path);
    s.origin = o.spec_path;
    for (auto& g : gallery())
      if (g.spec.name == s.spec.name) s.entry = g;
  }
  return s;
}

Json vec3(const Vec3<double>& v) { return Json::numbers(v.c); }
Json point(const ChartPoint& p) { return Json::numbers(p); }
Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

Json expected_json(const Expected& e) {
  Json j;
  j["umbilic"] = e.umbilic;
  j["ideal"] = e.ideal;
  j["minimal"] = e.minimal;
  j["L_zero"] = e.L_zero;
  j["C_zero"] = e.C_zero;
  j["UV_zero"] = e.UV_zero;
  j["G_zero"] = e.G_zero;
  j["domega_zero"] = e.domega_zero;
  j["hopf"] = e.hopf;
  j["rho"] = opt(e.rho);
  j["mu"] = opt(e.mu);
  j["L"] = opt(e.L);
  j["Fhat"] = opt(e.Fhat);
  j["theta3"] = opt(e.theta3);
  j["min_slack"] = opt(e.min_slack);
  j["classification"] = e.classification.empty() ? Json() : Json(e.classification);
  j["provenance"] = e.provenance;
  return j;
}

std::string ambient_name(const AmbientModel& a) { return a.name(); }

Json domain_json(const Box& b) {
  Json::Array a;
  for (const auto& iv : b) a.push_back(Json::numbers(std::array<double, 2>{iv.lo, iv.hi}));
  return Json(a);
}

int emit(const Json& doc, const std::vector<Json>& records, const Options& o) {
  const std::string text = doc.dump() + "\n";
  if (o.json_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(o.json_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << o.json_path << "\n";
      return 2;
    }
    f << text;
  }
  if (!o.csv_path.empty()) {
    std::ofstream f(o.csv_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << o.csv_path << "\n";
      return 2;
    }
    f << records_csv(records);
  }
  return 0;
}

int gallery_list(const Options& o) {
  Json doc;
  doc["schema"] = 1;
  doc["tool"]["name"] = "ddvv";
  doc["tool"]["version"] = kVersion;
  doc["command"] = "gallery list";
  std::vector<Json> rows;
  Json::Array entries;
  for (const auto& g : gallery()) {
    Json e;
    e["name"] = g.spec.name;
    e["ambient"] = ambient_name(g.spec.ambient);
    e["domain"] = domain_json(g.spec.domain);
    e["description"] = g.description;
    e["file_form"] = gallery_expression_text(g.spec.name).has_value();
    e["expected"] = expected_json(g.expected);
    entries.push_back(e);
    Json row;
    row["name"] = g.spec.name;
    row["ambient"] = ambient_name(g.spec.ambient);
    row["description"] = g.description;
    rows.push_back(row);
  }
  doc["entries"] = Json(entries);
  return emit(doc, rows, o);
}

// Per-command evaluation. Each returns one record per point and fills the
// aggregate; expectation failures are appended to `fails`.
struct Run {
  const Options& o;
  const Source& src;
  Gauge gauge;
  std::vector<ChartPoint> sample;
  std::vector<Json> records;
  Json aggregate = Json::object();
  std::vector<std::string> fails;
  int checked = 0;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok) fails.push_back(what);
  }
  const Expected* exp() const { return src.entry ? &src.entry->expected : nullptr; }
};

Json base_record(std::size_t i, const ChartPoint& p) {
  Json r;
  r["index"] = static_cast<long long>(i);
  r["u"] = point(p);
  return r;
}

void run_ddvv(Run& run) {
  double min_slack = INFINITY, max_abs_slack = 0.0;
  int ideal_count = 0;
  for (std::size_t i = 0; i < run.sample.size(); ++i) {
    const ChartPoint& p = run.sample[i];
    const ClassicalData cd = fundamental_forms(run.src.spec, p);
    const DDVVReport rep = ddvv_from_shape(cd.h, cd.H, cd.c, run.o.tol);
    std::optional<AdaptedFrame> af;
    try {
      af = adapted_frame(cd, run.o.tol);
    } catch (const NotIdealPoint&) {
    }
    Json r = base_record(i, p);
    r["s"] = rep.s;
    r["H_norm2"] = rep.H_norm2;
    r["s_N"] = rep.s_N;
    r["slack"] = rep.slack;
    r["ideal"] = rep.ideal;
    r["umbilic_measure"] = rep.umbilic_measure;
    r["II_norm2"] = rep.II_norm2;
    r["lambda1"] = af ? Json(af->lambda1) : Json();
    r["lambda2"] = af ? Json(af->lambda2) : Json();
    r["lambda3"] = af ? Json(af->lambda3) : Json();
    r["mu0"] = af ? Json(af->mu0) : Json();
    r["pattern_residual"] = af ? Json(af->pattern_residual) : Json();
    run.records.push_back(r);
    min_slack = std::min(min_slack, rep.slack);
    max_abs_slack = std::max(max_abs_slack, std::abs(rep.slack));
    ideal_count += rep.ideal;
    if (const Expected* e = run.exp()) {
      run.expect(rep.ideal == e->ideal, "point " + std::to_string(i) + ": ideal flag");
      if (e->min_slack) run.expect(rep.slack > *e->min_slack, "point " + std::to_string(i) + ": slack above min_slack");
    }
  }
  run.aggregate["min_slack"] = min_slack;
  run.aggregate["max_abs_slack"] = max_abs_slack;
  run.aggregate["ideal_count"] = ideal_count;
  run.aggregate["all_ideal"] = ideal_count == static_cast<int>(run.sample.size());
}

struct PointInvariants {
  WintgenInvariants w;
  double sum_B2 = 0.0, rho = 0.0;
  bool v0_applied = false;
};

PointInvariants point_invariants(const Run& run, const ChartPoint& p) {
  const MoebiusJets m = moebius_jets(run.src.spec, p, run.o.order);
  const CanonicalFrame3 cf = canonical_frame3(m, run.gauge, std::nullopt, run.o.tol);
  const WintgenJets wj = wintgen_jets(cf, run.o.ltol);
  if (!wj.has_lambda) throw IntegrableDistribution("L = " + std::to_string(wj.L.value()) + " within ltol");
  PointInvariants pi;
  pi.w = invariant_values(m, cf, wj);
  pi.rho = m.rho.value();
  pi.v0_applied = cf.v0_applied;
  for (int r = 0; r < 2; ++r)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) pi.sum_B2 += std::pow(m.B[r][i][j].value(), 2);
  return pi;
}

void run_invariants(Run& run) {
  std::vector<WintgenInvariants> all;
  const double et = std::max(run.o.ltol, 1e-6);
  for (std::size_t i = 0; i < run.sample.size(); ++i) {
    const PointInvariants pi = point_invariants(run, run.sample[i]);
    const WintgenInvariants& w = pi.w;
    Json r = base_record(i, run.sample[i]);
    r["rho"] = pi.rho;
    r["mu"] = w.mu;
    r["sum_B2"] = pi.sum_B2;
    r["U"] = w.U;
    r["V"] = w.V;
    r["L"] = w.L;
    r["G"] = w.G;
    r["lambda"] = w.lambda;
    r["Fhat"] = w.Fhat;
    r["Ghat"] = w.Ghat;
    r["omega"] = vec3(w.omega_coeffs);
    r["domega"] = vec3(w.domega);
    r["theta12"] = vec3(w.theta12_coeffs);
    r["v0_applied"] = pi.v0_applied;
    run.records.push_back(r);
    all.push_back(w);
    if (const Expected* e = run.exp()) {
      const std::string at = "point " + std::to_string(i) + ": ";
      if (e->rho) run.expect(std::abs(pi.rho - *e->rho) < et, at + "rho");
      if (e->mu) run.expect(std::abs(w.mu - *e->mu) < et, at + "mu");
      if (e->L) run.expect(std::abs(w.L - *e->L) < et, at + "L");
      if (e->Fhat) run.expect(std::abs(w.Fhat - *e->Fhat) < et, at + "Fhat");
      if (e->UV_zero) run.expect(std::abs(w.U) < et && std::abs(w.V) < et, at + "U = V = 0");
      if (e->G_zero) run.expect(std::abs(w.G) < et, at + "G = 0");
      if (e->domega_zero) run.expect(max_abs(w.domega) < et, at + "d omega = 0");
    }
  }
  double mG = 0.0, mdw = 0.0;
  for (const auto& w : all) {
    mG = std::max(mG, std::abs(w.G));
    mdw = std::max(mdw, max_abs(w.domega));
  }
  run.aggregate["max_abs_G"] = mG;
  run.aggregate["max_abs_domega"] = mdw;
}

std::vector<WintgenInvariants> sweep(Run& run, bool with_G) {
  std::vector<WintgenInvariants> all;
  for (std::size_t i = 0; i < run.sample.size(); ++i) {
    const WintgenInvariants w = point_invariants(run, run.sample[i]).w;
    Json r = base_record(i, run.sample[i]);
    if (with_G) r["G"] = w.G;
    else r["Fhat"] = w.Fhat;
    r["domega"] = vec3(w.domega);
    r["max_abs_domega"] = max_abs(w.domega);
    run.records.push_back(r);
    all.push_back(w);
  }
  return all;
}

void run_theorem_b(Run& run) {
  const TheoremBVerdict v = theorem_b_from(sweep(run, false), run.o.tol);
  run.aggregate["max_domega"] = v.max_domega;
  run.aggregate["closed"] = v.closed;
  run.aggregate["Fhat_sign"] = to_string(v.Fhat_sign);
  run.aggregate["min_Fhat"] = v.min_Fhat;
  run.aggregate["max_Fhat"] = v.max_Fhat;
  run.aggregate["classification"] = to_string(v.classification);
  if (const Expected* e = run.exp(); e && !e->classification.empty())
    run.expect(to_string(v.classification) == e->classification, "classification");
}

void run_hopf(Run& run) {
  const HopfVerdict h = hopf_from(sweep(run, true), run.o.tol);
  run.aggregate["satisfied"] = h.satisfied;
  run.aggregate["max_G"] = h.max_G;
  run.aggregate["max_domega"] = h.max_domega;
  if (const Expected* e = run.exp()) run.expect(h.satisfied == e->hopf, "hopf criterion");
}

void run_residuals(Run& run) {
  IntegrabilityResiduals worst;
  double ws = 0.0, wf = 0.0, wc = 0.0;
  for (std::size_t i = 0; i < run.sample.size(); ++i) {
    const MoebiusJets m = moebius_jets(run.src.spec, run.sample[i], run.o.order);
    const FrameJets f = make_frame(m);
    const IntegrabilityResiduals r = integrability_residuals(m, f, covariant_derivatives(f));
    const double s = structure_residual(m, f), fr = frame_relation_residual(m, f), c = c_cross_residual(f);
    Json j = base_record(i, run.sample[i]);
    j["codazzi_A"] = r.codazzi_A;
    j["ricci_C"] = r.ricci_C;
    j["codazzi_B"] = r.codazzi_B;
    j["gauss"] = r.gauss;
    j["ricci_normal"] = r.ricci_normal;
    j["trace"] = r.trace;
    j["structure"] = s;
    j["frame_relation"] = fr;
    j["C_cross"] = c;
    run.records.push_back(j);
    worst.codazzi_A = std::max(worst.codazzi_A, r.codazzi_A);
    worst.ricci_C = std::max(worst.ricci_C, r.ricci_C);
    worst.codazzi_B = std::max(worst.codazzi_B, r.codazzi_B);
    worst.gauss = std::max(worst.gauss, r.gauss);
    worst.ricci_normal = std::max(worst.ricci_normal, r.ricci_normal);
    worst.trace = std::max(worst.trace, r.trace);
    ws = std::max(ws, s);
    wf = std::max(wf, fr);
    wc = std::max(wc, c);
    if (run.exp())
      run.expect(std::max({r.max(), s, fr, c}) < run.o.tol, "point " + std::to_string(i) + ": residuals below tol");
  }
  run.aggregate["codazzi_A"] = worst.codazzi_A;
  run.aggregate["ricci_C"] = worst.ricci_C;
  run.aggregate["codazzi_B"] = worst.codazzi_B;
  run.aggregate["gauss"] = worst.gauss;
  run.aggregate["ricci_normal"] = worst.ricci_normal;
  run.aggregate["trace"] = worst.trace;
  run.aggregate["structure"] = ws;
  run.aggregate["frame_relation"] = wf;
  run.aggregate["C_cross"] = wc;
  run.aggregate["max"] = std::max({worst.max(), ws, wf, wc});
}

int run_pipeline(const std::string& command, const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  Source src;
  try {
    if (o.example.empty() == o.spec_path.empty()) throw SchemaError("exactly one of --spec and --example is required");
    src = load_source(o);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (o.assert_expected && !src.entry) {
    std::cerr << "--assert-expected: '" << src.spec.name << "' has no gallery record\n";
    return 2;
  }
  Run run{o, src, o.gauge == "v0" ? Gauge::v0 : Gauge::raw, sample_box(src.spec.domain, o.points, o.seed)};

  Json doc;
  doc["schema"] = 1;
  doc["tool"]["name"] = "ddvv";
  doc["tool"]["version"] = kVersion;
  doc["command"] = command;
  doc["spec"]["name"] = src.spec.name;
  doc["spec"]["source"] = src.origin;
  doc["spec"]["ambient"] = ambient_name(src.spec.ambient);
  doc["spec"]["domain"] = domain_json(src.spec.domain);
  doc["sampling"]["points"] = o.points;
  doc["sampling"]["seed"] = static_cast<long long>(o.seed);
  doc["sampling"]["generator"] = "splitmix64 counter, uniform in the domain box";
  doc["settings"]["order"] = o.order;
  doc["settings"]["gauge"] = o.gauge;
  doc["tolerances"]["tol"] = o.tol;
  doc["tolerances"]["ltol"] = o.ltol;
  Json::Array pts;
  for (const auto& p : run.sample) pts.push_back(point(p));
  doc["sample"] = Json(pts);

  int code = 0;
  Json refusal;
  try {
    if (command == "ddvv") run_ddvv(run);
    else if (command == "invariants") run_invariants(run);
    else if (command == "theorem-b") run_theorem_b(run);
    else if (command == "hopf-check") run_hopf(run);
    else run_residuals(run);
  } catch (const GeometricRefusal& e) {
    refusal["kind"] = e.kind();
    refusal["message"] = e.what();
    refusal["index"] = static_cast<long long>(run.records.size());
    code = 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  doc["records"] = Json(Json::Array(run.records.begin(), run.records.end()));
  doc["aggregate"] = code == 3 ? Json() : run.aggregate;
  doc["refusal"] = refusal;
  if (o.assert_expected) {
    doc["expectations"]["entry"] = src.entry->spec.name;
    doc["expectations"]["checked"] = run.checked;
    Json::Array f;
    for (const auto& s : run.fails) f.push_back(Json(s));
    doc["expectations"]["failures"] = Json(f);
    if (code == 0 && !run.fails.empty()) code = 1;
  }
  if (o.timing) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    doc["timing"]["wall_ms"] = ms;
  }
  if (code == 3) std::cerr << "refused: " << refusal["message"].cell() << "\n";
  const int io = emit(doc, run.records, o);
  return io ? io : code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moebius invariants and DDVV checks for 3-folds in 5-dimensional space forms", "ddvv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto* gallery_cmd = app.add_subcommand("gallery", "built-in examples");
  gallery_cmd->require_subcommand(1);
  auto* list_cmd = gallery_cmd->add_subcommand("list", "names and expected records");
  list_cmd->add_option("--json", o.json_path, "write the report here instead of stdout");
  list_cmd->add_option("--csv", o.csv_path, "also write one row per entry");

  const std::vector<std::pair<std::string, std::string>> pipelines = {
      {"ddvv", "DDVV slack and adapted normal form per point"},
      {"invariants", "Moebius scalars and U, V, L, G, Fhat, omega per point"},
      {"theorem-b", "closedness of omega and the space-form verdict"},
      {"hopf-check", "G = 0 and d omega = 0"},
      {"residuals", "integrability and structure-equation residuals"}};
  std::vector<CLI::App*> cmds;
  for (const auto& [name, help] : pipelines) {
    auto* c = app.add_subcommand(name, help);
    auto* spec = c->add_option("--spec", o.spec_path, "immersion file")->check(CLI::ExistingFile);
    auto* ex = c->add_option("--example", o.example, "gallery entry name");
    spec->excludes(ex);
    c->add_option("--points", o.points, "number of sample points")->check(CLI::Range(1, 1000000));
    c->add_option("--seed", o.seed, "sampling seed");
    c->add_option("--order", o.order, "jet order")->check(CLI::Range(4, kMaxJetOrder));
    c->add_option("--tol", o.tol, "ideality and verdict tolerance")->check(CLI::PositiveNumber);
    c->add_option("--ltol", o.ltol, "threshold below which L counts as zero")->check(CLI::PositiveNumber);
    c->add_option("--json", o.json_path, "write the report here instead of stdout");
    c->add_option("--csv", o.csv_path, "also write one CSV row per point");
    c->add_option("--gauge", o.gauge, "frame gauge")->check(CLI::IsMember({"raw", "v0"}));
    c->add_flag("--assert-expected", o.assert_expected, "exit 1 when gallery expectations fail");
    c->add_flag("--timing", o.timing, "include wall-clock time in the report");
    cmds.push_back(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*list_cmd) return gallery_list(o);
  for (std::size_t k = 0; k < cmds.size(); ++k)
    if (*cmds[k]) return run_pipeline(pipelines[k].first, o);
  return 2;
}
