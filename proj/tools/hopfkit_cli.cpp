// hopfkit: Hopf bifurcation analysis of polynomial planar vector fields.
//
//   hopfkit analyze  --atlas multi2 --a 0.1 --out report.json
//   hopfkit classify --atlas persist1 --tau-window 1e-6:1e-3:8
//   hopfkit verify   --system sys.json --a 0.04 --format csv
//   hopfkit sweep    --atlas multi2 --tau 2e-6:2e-3:8 --csv out.csv
//   hopfkit atlas-list
//
// Exit status: 0 success, 2 input error, 3 numeric failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopfkit/atlas.hpp"
#include "hopfkit/classify.hpp"
#include "hopfkit/report.hpp"
#include "hopfkit/system_io.hpp"
#include "hopfkit/verify.hpp"

using namespace hopfkit;
using nlohmann::json;

namespace {

struct Common {
  std::string system_file;
  std::string atlas_name;
  double beta = 1.0;
  std::string window;
  std::string out;
  std::string format = "json";
  std::string plot_dir;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("cannot read " + what + " from '" + s + "'");
  }
}

// "v" or "min:max:count" (geometric; both ends of one sign).
std::vector<double> parse_values(const std::string& s, const std::string& what) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {to_double(parts[0], what)};
  if (parts.size() != 3) throw InputError(what + " must be a value or min:max:count");
  const double lo = to_double(parts[0], what), hi = to_double(parts[1], what);
  const double cnt = to_double(parts[2], what);
  const int n = static_cast<int>(cnt);
  if (n < 2 || n != cnt) throw InputError(what + ": count must be an integer >= 2");
  if (lo == 0.0 || hi == 0.0 || (lo > 0.0) != (hi > 0.0))
    throw InputError(what + ": geometric range needs nonzero ends of one sign");
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

ParamField load_field(const Common& c, json& input) {
  Window w;
  if (!c.window.empty()) {
    const auto parts = split(c.window, ':');
    if (parts.size() != 2) throw InputError("--window must be lo:hi");
    w = {to_double(parts[0], "--window"), to_double(parts[1], "--window")};
    if (!(w.lo < w.hi)) throw InputError("--window needs lo < hi");
  }
  if (c.system_file.empty() == c.atlas_name.empty())
    throw InputError("give exactly one of --system or --atlas");
  ParamField vf = c.system_file.empty() ? atlas_system(c.atlas_name, c.beta).with_window(w)
                                        : load_system(c.system_file, w);
  if (!c.atlas_name.empty()) {
    input["atlas"] = c.atlas_name;
    if (c.atlas_name == "infinity") input["beta"] = c.beta;
  } else {
    input["system_file"] = c.system_file;
  }
  input["window"] = {vf.window().lo, vf.window().hi};
  input["system"] = field_to_json(vf);
  return vf;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out);
  if (!os) throw InputError("cannot write " + c.out);
  os << text;
}

void require_format(const Common& c, bool csv_ok) {
  if (c.format != "json" && c.format != "csv") throw InputError("--format must be json or csv");
  if (c.format == "csv" && !csv_ok) throw InputError("this command only writes json");
}

// One parameter value from --a or --tau.
std::vector<double> parameters(const ParamField& vf, const std::string& a_opt,
                               const std::string& tau_opt, json& input) {
  if (a_opt.empty() == tau_opt.empty()) throw InputError("give exactly one of --a or --tau");
  std::vector<double> as;
  if (!a_opt.empty()) {
    as = parse_values(a_opt, "--a");
  } else {
    for (double t : parse_values(tau_opt, "--tau")) as.push_back(a_of_tau(vf, t));
    input["tau"] = parse_values(tau_opt, "--tau");
  }
  input["a"] = as;
  return as;
}

void add_common(CLI::App* sub, Common& c, bool with_format) {
  sub->add_option("--system", c.system_file, "System description (JSON)");
  sub->add_option("--atlas", c.atlas_name, "Built-in system name (see atlas-list)");
  sub->add_option("--beta", c.beta, "Exponent of the 'infinity' atlas system");
  sub->add_option("--window", c.window, "Parameter window lo:hi");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  sub->add_option("--plot-data", c.plot_dir, "Directory for two-column plot data");
  if (with_format)
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

std::string cycles_csv(const std::vector<CycleRecord>& cycles) {
  SweepReport r;
  for (const auto& c : cycles) {
    r.tau_values.push_back(c.tau);
    r.cycles.push_back({c});
  }
  return sweep_csv(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf bifurcation analysis of polynomial planar vector fields"};
  app.require_subcommand(1);

  Common common;
  std::string a_opt, tau_opt, tau_window = "1e-6:1e-3:8", side = "both", csv_file;
  double r_min = 1e-4, r_max = 1.5, disk = 10.0, tol = 1e-10;
  bool reverse = false;

  auto* analyze = app.add_subcommand("analyze", "Pipeline and measured coefficients at one parameter");
  add_common(analyze, common, true);
  analyze->add_option("--a", a_opt, "Parameter value");
  analyze->add_option("--tau", tau_opt, "Trace value (converted to a)");

  auto* classify_cmd = app.add_subcommand("classify", "Classify the bifurcation over a tau window");
  add_common(classify_cmd, common, true);
  classify_cmd->add_option("--tau-window", tau_window, "min:max:count of |tau| (geometric)");
  classify_cmd->add_option("--side", side, "Which tau signs to sample")
      ->check(CLI::IsMember({"both", "positive", "negative"}));

  auto* verify = app.add_subcommand("verify", "Detect limit cycles by return maps");
  add_common(verify, common, true);
  verify->add_option("--a", a_opt, "Parameter value or min:max:count");
  verify->add_option("--tau", tau_opt, "Trace value or min:max:count");
  verify->add_flag("--reverse", reverse, "Integrate backwards in time");

  auto* sweep = app.add_subcommand("sweep", "Radius and frequency scaling over tau values");
  add_common(sweep, common, true);
  sweep->add_option("--tau", tau_opt, "min:max:count (geometric, one sign)")->required();
  sweep->add_option("--csv", csv_file, "Also write the sweep CSV here");

  for (auto* sub : {analyze, verify, sweep}) {
    sub->add_option("--r-min", r_min, "Smallest section radius probed");
    sub->add_option("--r-max", r_max, "Largest section radius probed");
    sub->add_option("--disk", disk, "Working disk radius");
    sub->add_option("--tol", tol, "Integrator tolerance");
  }

  auto* atlas_list = app.add_subcommand("atlas-list", "List built-in systems");
  atlas_list->add_option("--format", common.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  atlas_list->add_option("--out", common.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    VerifyOptions vopt;
    vopt.tol = tol;
    vopt.disk_radius = disk;
    vopt.reverse_time = reverse;
    json input;

    if (*atlas_list) {
      if (common.format == "json") {
        json list = json::array();
        for (const auto& e : atlas()) list.push_back({{"name", e.name}, {"citation", e.citation}});
        emit(common, dump(envelope("atlas-list", json::object(), {{"atlas", list}})));
      } else {
        std::ostringstream os;
        for (const auto& e : atlas()) os << e.name << "\n    " << e.citation << "\n";
        emit(common, os.str());
      }
      return 0;
    }

    const ParamField vf = load_field(common, input);

    if (*analyze) {
      require_format(common, false);
      const auto as = parameters(vf, a_opt, tau_opt, input);
      if (as.size() != 1) throw InputError("analyze takes a single parameter value");
      AnalyzeOptions aopt;
      aopt.r_min = r_min;
      aopt.r_max = r_max;
      aopt.verify = vopt;
      aopt.discriminant.disk_radius = disk;
      const json rep = analyze_report(vf, as[0], aopt);
      if (!common.plot_dir.empty()) write_analyze_plot_data(common.plot_dir, rep);
      emit(common, dump(envelope("analyze", input, rep)));
    } else if (*classify_cmd) {
      require_format(common, true);
      const auto range = parse_values(tau_window, "--tau-window");
      if (range.size() < 2 || range.front() <= 0.0)
        throw InputError("--tau-window must be positive min:max:count");
      std::vector<double> taus;
      for (double t : range) {
        if (side != "positive") taus.push_back(-t);
        if (side != "negative") taus.push_back(t);
      }
      input["tau_window"] = tau_window;
      input["side"] = side;
      const Classification c = classify(vf, taus);
      if (!common.plot_dir.empty()) write_classify_plot_data(common.plot_dir, c);
      if (common.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "tau,a,c3,c5,se3,se5,roots\n";
        for (const auto& ev : c.per_tau) {
          os << ev.tau << ',' << ev.a << ',' << ev.fit.c3 << ',' << ev.fit.c5 << ',' << ev.fit.se3
             << ',' << ev.fit.se5 << ',';
          for (std::size_t i = 0; i < ev.roots.size(); ++i) os << (i ? ";" : "") << ev.roots[i];
          os << '\n';
        }
        emit(common, os.str());
      } else {
        emit(common, dump(envelope("classify", input, {{"classification", to_json(c)}})));
      }
    } else if (*verify) {
      require_format(common, true);
      const auto as = parameters(vf, a_opt, tau_opt, input);
      input["r_range"] = {r_min, r_max};
      input["reverse_time"] = reverse;
      std::vector<CycleRecord> all;
      json per_a = json::array();
      for (double a : as) {
        const auto cycles = find_cycles(vf, a, r_min, r_max, vopt);
        json cj = json::array();
        for (const auto& c : cycles) cj.push_back(to_json(c));
        per_a.push_back({{"a", a}, {"tau", jacobian_summary(vf, a).tau}, {"cycles", cj}});
        all.insert(all.end(), cycles.begin(), cycles.end());
      }
      if (common.format == "csv")
        emit(common, cycles_csv(all));
      else
        emit(common, dump(envelope("verify", input, {{"provenance", kFromOde}, {"results", per_a}})));
    } else if (*sweep) {
      require_format(common, true);
      const auto taus = parse_values(tau_opt, "--tau");
      input["tau"] = taus;
      input["r_range"] = {r_min, r_max};
      SweepOptions sopt;
      sopt.r_min = r_min;
      sopt.r_max = r_max;
      sopt.verify = vopt;
      const SweepReport rep = scaling_sweep(vf, taus, sopt);
      if (!common.plot_dir.empty()) write_sweep_plot_data(common.plot_dir, rep);
      if (!csv_file.empty()) {
        std::ofstream os(csv_file);
        if (!os) throw InputError("cannot write " + csv_file);
        os << sweep_csv(rep);
      }
      if (common.format == "csv")
        emit(common, sweep_csv(rep));
      else
        emit(common, dump(envelope("sweep", input, {{"sweep", to_json(rep)}})));
    }
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: InputError: " << e.what() << "\n";
    return 2;
  }
}
