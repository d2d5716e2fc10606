#ifndef PLASTICITY_TOOLS_CLI_HPP
#define PLASTICITY_TOOLS_CLI_HPP

// Command-line front end. run() never calls exit(); it returns the process
// status so that tests can drive it in-process.
//
//   0 success, 1 verification failure, 2 usage error, 3 numerical failure

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plasticity/plasticity.hpp"

namespace plasticity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Locale-independent shortest-or-fixed-precision formatting.
inline std::string format_general(double value, int precision) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, precision);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // no "-0.000000"
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
  std::string out(buf.data(), res.ptr);
  if (out.find_first_not_of("-0.") == std::string::npos && out.front() == '-') out.erase(0, 1);
  return out;
}

inline double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value)) {
    throw UsageError("cannot parse " + what + " '" + text + "'");
  }
  return value;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

/// A state selected on the command line.
struct StateSpec {
  std::string text;
  StateVector psi;
  std::vector<SpinMagnitude> spins;
  bool four_qubit = false;
};

/// "cg:<j>" (or "bell" for cg:1/2) and "four:1" / "four:2".
inline StateSpec parse_state(const std::string& text) {
  if (text == "bell") {
    return {text, bell_singlet(), {SpinMagnitude::half(), SpinMagnitude::half()}, false};
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("state must be cg:<j>, bell, four:1 or four:2, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "cg") {
    const SpinMagnitude spin = SpinMagnitude::parse(arg);
    return {text, clebsch_gordan_singlet(spin), {spin, spin}, false};
  }
  if (kind == "four") {
    if (arg != "1" && arg != "2") throw UsageError("four-qubit selector must be 1 or 2, got '" + arg + "'");
    const SpinMagnitude h = SpinMagnitude::half();
    return {text, four_qubit_singlet(arg == "1" ? 1 : 2), {h, h, h, h}, true};
  }
  throw UsageError("unknown state kind '" + kind + "'");
}

/// "spin", "sign", "ks", "ks-inverted" or a comma list in ascending m.
inline LabelVector parse_labels(const std::string& text, SpinMagnitude spin) {
  if (text == "spin") return LabelVector::spin_values(spin);
  if (text == "sign") return LabelVector::sign_values(spin);
  if (text == "ks" || text == "ks-inverted") {
    if (spin.two_j() != 2) throw UsageError("ks labels need spin 1");
    return text == "ks" ? LabelVector{1.0, 0.0, 1.0} : LabelVector{0.0, 1.0, 0.0};
  }
  std::vector<double> values;
  for (const auto& item : split(text, ',')) values.push_back(parse_double(item, "label"));
  if (values.size() != spin.dim()) {
    throw UsageError("expected " + std::to_string(spin.dim()) + " labels for spin " + spin.to_string() + ", got " +
                     std::to_string(values.size()));
  }
  return LabelVector(std::move(values));
}

/// "theta,phi;theta,phi;..." with an optional degree conversion.
inline std::vector<Direction> parse_directions(const std::string& text, bool degrees) {
  const double scale = degrees ? std::numbers::pi / 180.0 : 1.0;
  std::vector<Direction> out;
  for (const auto& item : split(text, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 2) throw UsageError("direction must be 'theta,phi', got '" + item + "'");
    out.emplace_back(scale * parse_double(parts[0], "theta"), scale * parse_double(parts[1], "phi"));
  }
  return out;
}

inline std::string two_m_label(int two_m) {
  if (two_m == 0) return "0";
  const std::string sign = two_m > 0 ? "+" : "-";
  const int a = std::abs(two_m);
  return a % 2 == 0 ? sign + std::to_string(a / 2) : sign + std::to_string(a) + "/2";
}

inline nlohmann::json direction_json(const Direction& d) { return {{"theta", d.theta()}, {"phi", d.phi()}}; }

/// Writes to the --out path, or to `fallback` when no path is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  void write(const std::string& text) {
    if (path_.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot open '" + path_ + "' for writing");
    file << text;
    file.flush();
    if (!file) throw UsageError("write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::ostream& fallback_;
};

struct Options {
  std::uint64_t seed = 42;
  std::string format;
  std::string out;
  bool degrees = false;

  int figure = 1;
  std::size_t samples = 181;

  std::string state = "cg:1/2";
  std::string labels_a = "spin";
  std::string labels_b = "spin";
  std::string dirs;

  std::size_t trials = 100;
  std::string filter;
  std::string errata_path;
  std::string inject_fault;

  std::size_t grid = 60;
  std::string method = "refine";
  double budget = 1e6;
  bool full_angles = false;
  double step = 1e-3;
};

inline std::string render_curve(const FigureTable& t, const std::string& format, int figure) {
  if (format == "json") {
    nlohmann::json j;
    j["figure"] = figure;
    j["theta"] = t.theta;
    for (std::size_t s = 0; s < t.series.size(); ++s) {
      j["series"].push_back({{"name", "series_" + t.series[s]}, {"description", t.descriptions[s]}, {"values", t.values[s]}});
    }
    return j.dump(2) + "\n";
  }
  std::string out = "theta";
  for (const auto& s : t.series) out += ",series_" + s;
  out += "\n";
  for (std::size_t r = 0; r < t.theta.size(); ++r) {
    out += format_general(t.theta[r], 17);
    for (const auto& column : t.values) out += "," + format_general(column[r], 12);
    out += "\n";
  }
  return out;
}

inline int cmd_curve(const Options& o, std::ostream& out) {
  if (o.samples < 2) throw UsageError("--samples must be at least 2");
  const auto [lo, hi] = figure_theta_range(o.figure);
  const auto grid = uniform_grid(lo, hi, o.samples);
  Sink(o.out, out).write(render_curve(figure_curves(o.figure, grid), o.format.empty() ? "csv" : o.format, o.figure));
  return kExitOk;
}

inline int cmd_singlet(const Options& o, std::ostream& out) {
  const StateSpec spec = parse_state(o.state);
  const auto& amps = spec.psi.amplitudes();
  auto basis_label = [&](std::size_t index) {
    std::vector<std::string> parts(spec.spins.size());
    std::size_t rest = index;
    for (std::size_t k = spec.spins.size(); k-- > 0;) {
      const std::size_t d = spec.spins[k].dim();
      parts[k] = two_m_label(spec.spins[k].two_j() - 2 * static_cast<int>(rest % d));
      rest /= d;
    }
    return parts;
  };
  std::string text;
  if (o.format == "json") {
    nlohmann::json j;
    j["state"] = spec.text;
    j["dims"] = spec.psi.dims();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (std::abs(amps[i]) < 1e-15) continue;
      j["amplitudes"].push_back({{"index", i}, {"m", basis_label(i)}, {"re", amps[i].real()}, {"im", amps[i].imag()}});
    }
    j["norm"] = spec.psi.norm();
    text = j.dump(2) + "\n";
  } else {
    text = "index";
    for (std::size_t k = 0; k < spec.spins.size(); ++k) text += ",m" + std::to_string(k + 1);
    text += ",re,im\n";
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (std::abs(amps[i]) < 1e-15) continue;
      text += std::to_string(i);
      for (const auto& m : basis_label(i)) text += "," + m;
      text += "," + format_general(amps[i].real(), 17) + "," + format_general(amps[i].imag(), 17) + "\n";
    }
  }
  Sink(o.out, out).write(text);
  return kExitOk;
}

inline nlohmann::json case_json(const CaseResult& c) {
  return {{"name", c.name},           {"kind", c.kind},     {"status", c.status},
          {"trials", c.trials},       {"max_delta", c.max_delta}, {"tolerance", c.tolerance},
          {"worst_point", c.worst_point}, {"detail", c.detail}};
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  if (o.trials < 1) throw UsageError("--trials must be at least 1");
  VerifyOptions vo;
  vo.trials = o.trials;
  vo.seed = o.seed;
  vo.filter = o.filter;
  if (!o.inject_fault.empty()) {
    const auto target = form_from_name(o.inject_fault);
    if (!target) throw UsageError("--inject-fault: unknown form '" + o.inject_fault + "'");
    vo.evaluator = [id = *target](FormId f, std::span<const double> args) {
      return evaluate(f, args) + (f == id ? 1e-6 : 0.0);
    };
  }
  const VerifyReport report = run_verification(vo);

  std::string text;
  if (o.format == "csv") {
    text = "name,kind,status,trials,max_delta,tolerance,worst_point\n";
    for (const auto& c : report.cases) {
      text += c.name + "," + c.kind + "," + c.status + "," + std::to_string(c.trials) + "," +
              format_general(c.max_delta, 12) + "," + format_general(c.tolerance, 12) + ",\"" + c.worst_point + "\"\n";
    }
  } else {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    j["passed"] = report.passed();
    j["cases"] = nlohmann::json::array();
    for (const auto& c : report.cases) j["cases"].push_back(case_json(c));
    j["errata"] = nlohmann::json::array();
    for (const auto& e : report.errata) {
      j["errata"].push_back({{"id", e.id}, {"parameters", e.parameters}, {"printed", e.printed},
                             {"engine", e.engine}, {"delta", e.delta}, {"note", e.note}});
    }
    text = j.dump(2) + "\n";
  }
  Sink(o.out, out).write(text);

  if (!o.errata_path.empty()) {
    std::ostringstream tsv;
    write_errata(tsv, report.errata);
    Sink(o.errata_path, out).write(tsv.str());
  }
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

inline int cmd_chsh_scan(const Options& o, std::ostream& out, std::ostream& err) {
  const StateSpec spec = parse_state(o.state);
  if (!(o.budget >= 1.0 && o.budget <= 1e12)) throw UsageError("--budget must be in [1, 1e12]");
  ScanOptions so;
  so.grid_points = o.grid;
  so.budget = static_cast<std::size_t>(o.budget);
  so.full_angles = o.full_angles;
  if (o.method == "grid") {
    so.method = ScanMethod::grid;
  } else if (o.method == "refine") {
    so.method = ScanMethod::refine;
  } else {
    throw UsageError("--method must be grid or refine");
  }
  if (o.grid < 1) throw UsageError("--grid must be at least 1");

  const DensityMatrix rho = density(spec.psi);
  ScanResult r;
  nlohmann::json j;
  j["state"] = spec.text;
  if (spec.four_qubit) {
    r = optimize_chsh_pairwise(rho, so);
    j["correlation"] = "parity, particles 3 and 4 along z";
  } else {
    const SpinMagnitude spin = spec.spins.front();
    const LabelVector la = parse_labels(o.labels_a, spin);
    const LabelVector lb = parse_labels(o.labels_b, spin);
    r = optimize_chsh(rho, spin, la, lb, so);
    j["labels_a"] = la.values();
    j["labels_b"] = lb.values();
  }
  j["best_value"] = r.best_value;
  j["alice"] = {direction_json(r.alice[0]), direction_json(r.alice[1])};
  j["bob"] = {direction_json(r.bob[0]), direction_json(r.bob[1])};
  j["evaluations"] = r.evaluations;
  j["grid_points"] = r.grid_points;
  j["refine_sweeps"] = r.refine_sweeps;
  j["method"] = r.method;
  std::string text;
  if (o.format == "csv") {
    text = "best_value,a_theta,a_phi,a2_theta,a2_phi,b_theta,b_phi,b2_theta,b2_phi,evaluations,method\n";
    text += format_general(r.best_value, 17);
    for (const auto& d : {r.alice[0], r.alice[1], r.bob[0], r.bob[1]})
      text += "," + format_general(d.theta(), 17) + "," + format_general(d.phi(), 17);
    text += "," + std::to_string(r.evaluations) + "," + r.method + "\n";
  } else {
    text = j.dump(2) + "\n";
  }
  Sink(o.out, out).write(text);
  // wall time varies between runs, so it stays out of the deterministic output
  err << "chsh-scan: " << r.evaluations << " evaluations in " << format_fixed(r.runtime_seconds, 3) << " s\n";
  return kExitOk;
}

inline int cmd_enhance(const Options& o, std::ostream& out) {
  const EnhancementReport r = enhancement_domain(o.step);
  std::string text;
  if (o.format == "csv") {
    text = "lo,hi,sign\n";
    for (const auto& s : r.intervals)
      text += format_general(s.lo, 17) + "," + format_general(s.hi, 17) + "," + std::to_string(s.sign) + "\n";
  } else {
    nlohmann::json j;
    j["grid_step"] = r.grid_step;
    j["samples"] = r.samples;
    j["boundary"] = r.boundary;
    j["below"] = {r.below_lo, r.below_hi};
    j["claimed"] = {r.claimed_lo, r.claimed_hi};
    j["claim_agrees"] = r.claim_agrees;
    j["intervals"] = nlohmann::json::array();
    for (const auto& s : r.intervals) j["intervals"].push_back({{"lo", s.lo}, {"hi", s.hi}, {"sign", s.sign}});
    j["summary"] = r.summary;
    text = j.dump(2) + "\n";
  }
  Sink(o.out, out).write(text);
  return kExitOk;
}

inline int cmd_probe(const Options& o, std::ostream& out) {
  const StateSpec spec = parse_state(o.state);
  std::vector<Direction> dirs;
  if (o.dirs.empty()) {
    dirs.assign(spec.spins.size(), Direction(0.0, 0.0));
  } else {
    dirs = parse_directions(o.dirs, o.degrees);
  }
  if (dirs.size() != spec.spins.size()) {
    throw UsageError("--dirs needs " + std::to_string(spec.spins.size()) + " directions, got " +
                     std::to_string(dirs.size()));
  }
  const DensityMatrix rho = density(spec.psi);
  const JointProbabilityTable table = joint_probabilities(rho, dirs, spec.spins);

  std::ostringstream text;
  for (std::size_t k = 0; k < spec.spins.size(); ++k) text << "m" << (k + 1) << "\t";
  text << "probability\n";
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (int two_m : table.outcomes[r]) text << two_m_label(two_m) << "\t";
    text << format_fixed(table.probability(r), 6) << "\n";
  }
  if (spec.four_qubit) {
    const ParityCorrelation pc = parity_correlation(rho, dirs);
    text << "P_even\t" << format_fixed(pc.p_even, 6) << "\n";
    text << "P_odd\t" << format_fixed(pc.p_odd, 6) << "\n";
    text << "E\t" << format_fixed(pc.correlation, 6) << "\n";
  } else {
    const SpinMagnitude spin = spec.spins.front();
    const double e = correlation(rho, spin, dirs[0], parse_labels(o.labels_a, spin), dirs[1], parse_labels(o.labels_b, spin));
    text << "E\t" << format_fixed(e, 6) << "\n";
  }
  Sink(o.out, out).write(text.str());
  return kExitOk;
}

/// Parses and executes one command line. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-singlet correlations, closed-form verification and CHSH scans", "plasticity"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, const std::string& default_format) {
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--format", o.format, "output format (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
  };

  auto* curve = app.add_subcommand("curve", "sample figure curves on a uniform theta grid");
  common(curve, "csv");
  curve->add_option("--figure", o.figure, "figure number")->check(CLI::IsMember({1, 2}))->capture_default_str();
  curve->add_option("--samples", o.samples, "grid points, at least 2")->capture_default_str();

  auto* singlet = app.add_subcommand("singlet", "print singlet amplitudes");
  common(singlet, "csv");
  singlet->add_option("--state", o.state, "cg:<j>, bell, four:1 or four:2")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "closed forms against the trace engine");
  common(verify, "json");
  verify->add_option("--trials", o.trials, "random points per closed form")->capture_default_str();
  verify->add_option("--filter", o.filter, "comma-separated case names");
  verify->add_option("--errata", o.errata_path, "write confirmed errata as TSV");
  verify->add_option("--inject-fault", o.inject_fault)->group("");

  auto* scan = app.add_subcommand("chsh-scan", "maximize the CHSH combination");
  common(scan, "json");
  scan->preparse_callback([&](std::size_t) { o.labels_a = o.labels_b = "sign"; });
  scan->add_option("--state", o.state, "cg:<j>, bell, four:1 or four:2")->capture_default_str();
  scan->add_option("--labels-a", o.labels_a, "spin, sign, ks, ks-inverted or a comma list")->capture_default_str();
  scan->add_option("--labels-b", o.labels_b, "as --labels-a")->capture_default_str();
  scan->add_option("--grid", o.grid, "grid points per angle")->capture_default_str();
  scan->add_option("--method", o.method, "grid or refine")->capture_default_str();
  scan->add_option("--budget", o.budget, "correlator evaluations")->capture_default_str();
  scan->add_flag("--full-angles", o.full_angles, "refine theta and phi of all four directions");

  auto* enhance = app.add_subcommand("enhance", "sign table of the enhanced combination against -cos");
  common(enhance, "json");
  enhance->add_option("--step", o.step, "grid step in radians")->capture_default_str();

  auto* probe = app.add_subcommand("probe", "joint outcome probabilities");
  common(probe, "table");
  probe->add_option("--state", o.state, "cg:<j>, bell, four:1 or four:2")->capture_default_str();
  probe->add_option("--dirs", o.dirs, "theta,phi per particle, separated by ';' (default all z)");
  probe->add_option("--labels-a", o.labels_a, "labels of particle 1")->capture_default_str();
  probe->add_option("--labels-b", o.labels_b, "labels of particle 2")->capture_default_str();
  probe->add_flag("--degrees", o.degrees, "angles in degrees");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (curve->parsed()) return cmd_curve(o, out);
    if (singlet->parsed()) return cmd_singlet(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (scan->parsed()) return cmd_chsh_scan(o, out, err);
    if (enhance->parsed()) return cmd_enhance(o, out);
    if (probe->parsed()) return cmd_probe(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace plasticity::cli

#endif  // PLASTICITY_TOOLS_CLI_HPP
