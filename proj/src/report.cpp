#include "hopfkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hopfkit/system_io.hpp"

namespace hopfkit {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json mat_json(const Mat2& m) { return json::array({{m.a11, m.a12}, {m.a21, m.a22}}); }

json table_json(const Table2& t) {
  json out = json::array();
  for (const auto& [idx, v] : t)
    if (v != 0.0) out.push_back({{"i", idx.first}, {"j", idx.second}, {"value", v}});
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw InputError("cannot write " + p.string());
  return os;
}

}  // namespace

json to_json(const JacobianSummary& js) {
  return {{"tau", js.tau},
          {"delta", js.delta},
          {"lambda", js.lambda ? json(*js.lambda) : json(nullptr)},
          {"hopf_ok", js.hopf_ok}};
}

json to_json(const CycleRecord& c) {
  return {{"radius", number(c.radius)},
          {"section_radius", number(c.section_radius)},
          {"period", number(c.period)},
          {"frequency", number(c.frequency)},
          {"stability", to_string(c.stability)},
          {"return_derivative", number(c.return_derivative)},
          {"a", c.a},
          {"tau", c.tau},
          {"displacement_inside", number(c.displacement_inside)},
          {"displacement_outside", number(c.displacement_outside)}};
}

json to_json(const HopfFit& f) {
  return {{"c3", f.c3},          {"c5", f.c5},   {"residual", f.residual},
          {"se3", number(f.se3)}, {"se5", number(f.se5)}, {"condition", number(f.condition)},
          {"count", f.count}};
}

json to_json(const CoefficientScaling& s) {
  return {{"index", s.index},
          {"coefficient", "p" + std::to_string(2 * s.index + 1)},
          {"amplitude_constant", s.amplitude_constant},
          {"exponent", s.exponent},
          {"fit_quality", s.fit_quality},
          {"negligible", s.negligible},
          {"significant_count", s.significant_count},
          {"note", s.note}};
}

json to_json(const CyclePrediction& p) {
  return {{"radius", p.radius},
          {"stability", to_string(p.stability)},
          {"frequency", p.frequency},
          {"source", to_string(p.source)}};
}

json to_json(const SufficientCondition& s) {
  return {{"delta", s.delta},
          {"verdict", to_string(s.verdict)},
          {"u_roots", s.u_roots},
          {"predicted_radii", s.predicted_radii}};
}

json to_json(const Classification& c) {
  json per_tau = json::array();
  for (const TauEvidence& ev : c.per_tau) {
    json samples = json::array();
    for (const auto& s : ev.samples) samples.push_back({s.r, s.p});
    per_tau.push_back({{"tau", ev.tau},
                       {"a", ev.a},
                       {"fit", to_json(ev.fit)},
                       {"c3_significant", ev.c3_significant},
                       {"c5_significant", ev.c5_significant},
                       {"roots", ev.roots},
                       {"double_root", ev.double_root},
                       {"samples", samples}});
  }
  json evidence = json::array();
  for (const auto& s : c.evidence) evidence.push_back(to_json(s));
  json out = {{"provenance", kFromOde},
              {"kind", to_string(c.kind)},
              {"criticality", c.criticality ? json(to_string(*c.criticality)) : json(nullptr)},
              {"omega_sign", c.omega_sign},
              {"leading_index", c.leading_index},
              {"gamma", c.gamma},
              {"radius_constant", c.radius_constant},
              {"radius_exponent", c.radius_exponent},
              {"fitted_root_exponent", c.fitted_root_exponent},
              {"root_fit_quality", c.root_fit_quality},
              {"emerging_root_count", c.emerging_root_count},
              {"smallest_root", number(c.smallest_root)},
              {"evidence", evidence},
              {"per_tau", per_tau}};
  if (c.sufficient) {
    out["sufficient_condition"] = to_json(*c.sufficient);
    out["sufficient_condition"]["Q3"] = c.sufficient_q3;
    out["sufficient_condition"]["Q5"] = c.sufficient_q5;
  }
  return out;
}

json to_json(const SweepReport& r) {
  json per_tau = json::array();
  for (std::size_t i = 0; i < r.tau_values.size(); ++i) {
    json cycles = json::array();
    for (const auto& c : r.cycles[i]) cycles.push_back(to_json(c));
    per_tau.push_back({{"tau", r.tau_values[i]},
                       {"a", r.a_values[i]},
                       {"smallest_cycle_radius", number(r.smallest_cycle_radii[i])},
                       {"cycles", cycles}});
  }
  json persistent = json::array();
  for (const auto& c : r.persistent_cycles) persistent.push_back(to_json(c));
  return {{"provenance", kFromOde},
          {"tau_values", r.tau_values},
          {"fitted_radius_exponent", r.fitted_radius_exponent},
          {"fitted_radius_constant", r.fitted_radius_constant},
          {"radius_fit_r_squared", r.radius_fit_r_squared},
          {"emerging_branch_count", r.emerging_branch_count},
          {"fitted_frequency_exponent_bound", r.fitted_frequency_exponent_bound},
          {"max_frequency_deviation", r.max_frequency_deviation},
          {"persistent_cycles", persistent},
          {"inconclusive", r.inconclusive},
          {"note", r.note},
          {"per_tau", per_tau}};
}

std::vector<std::string> pipeline_warnings(const DiscriminantSeries& ds, const HopfFit& fit,
                                           bool c3_significant) {
  std::vector<std::string> out;
  if (!c3_significant || fit.c3 == 0.0) {
    out.push_back("empirical c3 below resolution; pipeline p3 not cross-checked");
    return out;
  }
  if (ds.p3 == 0.0) {
    out.push_back("pipeline p3 vanishes while empirical c3 = " + fmt(fit.c3));
    return out;
  }
  if ((ds.p3 > 0.0) != (fit.c3 > 0.0))
    out.push_back("pipeline p3 and empirical c3 have opposite signs");
  const double ratio = ds.p3 / fit.c3;
  if (std::abs(ratio - 0.5) <= 0.025)
    out.push_back("pipeline/empirical ratio 0.5");
  else if (std::abs(ratio - 1.0) > 0.05)
    out.push_back("pipeline/empirical ratio " + fmt(ratio));
  return out;
}

json analyze_report(const ParamField& vf, double a, const AnalyzeOptions& opt) {
  const JacobianSummary js = jacobian_summary(vf, a);
  json out;
  out["jacobian"] = to_json(js);
  out["jacobian"]["provenance"] = kFromInput;
  out["jacobian"]["a"] = a;
  if (!js.hopf_ok)
    throw NotHopfRegion("linearization at a = " + fmt(a) + " has real eigenvalues");

  const CanonicalSystem cs = canonicalize(vf, a);
  const OscillatorForm form = oscillator_form(cs);
  const DiscriminantSeries ds = discriminant_series(form.h_table);
  out["pipeline"] = {{"provenance", kFromPipeline},
                     {"linmap", mat_json(cs.linmap)},
                     {"time_scale", cs.time_scale},
                     {"tau", cs.tau},
                     {"lambda", cs.lambda},
                     {"gamma", mat_json(form.gamma)},
                     {"mu", mat_json(form.mu)},
                     {"R", table_json(form.r_table)},
                     {"H", table_json(form.h_table)},
                     {"p3", ds.p3},
                     {"p5", ds.p5},
                     {"q2", ds.q2},
                     {"q4", ds.q4},
                     {"valid_degree", ds.valid_degree}};

  const TauEvidence ev = discriminant_evidence(vf, a, opt.discriminant);
  json samples = json::array();
  for (const auto& s : ev.samples) samples.push_back({s.r, s.p});
  out["empirical"] = {{"provenance", kFromOde},
                      {"fit", to_json(ev.fit)},
                      {"c3_significant", ev.c3_significant},
                      {"c5_significant", ev.c5_significant},
                      {"samples", samples}};

  json pred = json::array(), asym = json::array();
  PredictOptions series_opt;
  series_opt.tol_double = opt.discriminant.tol_double;
  series_opt.source = CyclePrediction::Source::Series;
  series_opt.q2 = ds.q2;
  series_opt.q4 = ds.q4;
  for (const auto& p : predict_cycles(ds.p3, ds.p5, cs.tau, series_opt)) {
    pred.push_back(to_json(p));
    const AsymptoticCycle ac = asymptotic_cycle(p, form, ds);
    asym.push_back({{"amplitude", ac.amplitude},
                    {"frequency", ac.frequency},
                    {"period", ac.period()},
                    {"profile_matrix", mat_json(ac.amplitude * ac.mu)}});
  }
  out["predictions_pipeline"] = {{"provenance", kFromPipeline},
                                 {"cycles", pred},
                                 {"asymptotic_cycles", asym}};

  json pred_e = json::array();
  PredictOptions emp_opt;
  emp_opt.tol_double = opt.discriminant.tol_double;
  for (const auto& p : predict_cycles(ev.c3_significant ? ev.fit.c3 : 0.0,
                                      ev.c5_significant ? ev.fit.c5 : 0.0, cs.tau, emp_opt))
    pred_e.push_back(to_json(p));
  out["predictions_empirical"] = {{"provenance", kFromOde}, {"cycles", pred_e}};

  json cycles = json::array();
  std::vector<std::string> warnings = pipeline_warnings(ds, ev.fit, ev.c3_significant);
  try {
    for (const auto& c : find_cycles(vf, a, opt.r_min, opt.r_max, opt.verify)) {
      json cj = to_json(c);
      const double A2 = c.radius * c.radius;
      const double w = 1.0 + ds.q2 * A2 + ds.q4 * A2 * A2;
      cj["pipeline_frequency"] = w;
      cycles.push_back(cj);
      if (std::abs(w - c.frequency) > 1e-6)
        warnings.push_back("cycle at radius " + fmt(c.radius) + ": pipeline frequency " +
                           fmt(w) + ", measured " + fmt(c.frequency));
    }
  } catch (const NumericError& e) {
    warnings.push_back(std::string("cycle search: ") + e.what());
  }
  out["cycles"] = {{"provenance", kFromOde}, {"detected", cycles}};
  out["warnings"] = warnings;
  return out;
}

json envelope(const std::string& command, const json& input, const json& payload) {
  json out = payload;
  out["schema"] = kReportSchema;
  out["command"] = command;
  out["input"] = input;
  out["input"]["provenance"] = kFromInput;
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_sweep_plot_data(const std::filesystem::path& dir, const SweepReport& r) {
  std::filesystem::create_directories(dir);
  auto lin = open_out(dir / "tau_radius.dat");
  auto lg = open_out(dir / "log_tau_log_radius.dat");
  lin << "# tau radius (all detected cycles)\n";
  lg << "# ln|tau| ln(radius) (emerging family)\n";
  lg << "# fitted exponent " << fmt(r.fitted_radius_exponent) << "\n";
  for (std::size_t i = 0; i < r.tau_values.size(); ++i) {
    for (const auto& c : r.cycles[i]) lin << fmt(r.tau_values[i]) << ' ' << fmt(c.radius) << '\n';
    if (std::isfinite(r.smallest_cycle_radii[i]))
      lg << fmt(std::log(std::abs(r.tau_values[i]))) << ' '
         << fmt(std::log(r.smallest_cycle_radii[i])) << '\n';
  }
}

void write_classify_plot_data(const std::filesystem::path& dir, const Classification& c) {
  std::filesystem::create_directories(dir);
  auto co = open_out(dir / "coefficients.dat");
  co << "# tau c3 c5\n";
  for (const auto& ev : c.per_tau)
    co << fmt(ev.tau) << ' ' << fmt(ev.fit.c3) << ' ' << fmt(ev.fit.c5) << '\n';
  auto ds = open_out(dir / "discriminant.dat");
  ds << "# r p (one block per tau, separated by blank lines)\n";
  for (const auto& ev : c.per_tau) {
    ds << "# tau " << fmt(ev.tau) << '\n';
    for (const auto& s : ev.samples) ds << fmt(s.r) << ' ' << fmt(s.p) << '\n';
    ds << "\n\n";
  }
}

void write_analyze_plot_data(const std::filesystem::path& dir, const json& report) {
  std::filesystem::create_directories(dir);
  auto ds = open_out(dir / "discriminant.dat");
  ds << "# r p  (measured discriminant at a = " << fmt(report.at("jacobian").at("a").get<double>())
     << ")\n";
  for (const auto& s : report.at("empirical").at("samples"))
    ds << fmt(s[0].get<double>()) << ' ' << fmt(s[1].get<double>()) << '\n';
}

}  // namespace hopfkit
