#ifndef PLASTICITY_CLOSEDFORMS_HPP
#define PLASTICITY_CLOSEDFORMS_HPP

// Printed closed-form correlation coefficients, each transcribed once and
// without algebraic simplification. They serve as oracles for the trace
// engine and as fast evaluators for figure data.
//
// Naming: E<d><n><k> is the k-th singlet of n particles with d outcomes each
// (E321: two spin-1 particles, E421: two spin-3/2, E241 / E242: the two
// four-qubit singlets). A "_theta" suffix means all azimuths are zero, a
// "_phi" suffix means all polar angles are pi/2.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plasticity/errors.hpp"

namespace plasticity {

enum class FormId {
  E321_general,
  E321_spin,
  E321_KS_101,
  E321_KS_010,
  E321_KS_101_phi,
  E321_KS_010_phi,
  E321_KS_101_theta,
  E321_KS_010_theta,
  E321_enhanced,
  E421_spin,
  E421_plastic_mmpp,
  E421_plastic_mppm,
  E421_plastic_pmpm,
  E_general_j,
  E241_general,
  E241_phi,
  E241_theta,
  E242_general,
  E242_theta,
  E242_phi,
  E_classical_linear,
};

struct FormInfo {
  FormId id;
  std::string_view name;
  std::vector<std::string_view> params;
  std::string_view summary;
};

inline const std::vector<FormInfo>& form_catalog() {
  static const std::vector<FormInfo> catalog = {
      {FormId::E321_general, "E321_general",
       {"theta1", "theta2", "phi1", "phi2", "lambda_minus", "lambda_zero", "lambda_plus"},
       "spin-1 singlet, arbitrary labels (same on both sides)"},
      {FormId::E321_spin, "E321_spin", {"theta1", "theta2", "phi1", "phi2"}, "spin-1 singlet, labels (-1, 0, +1)"},
      {FormId::E321_KS_101, "E321_KS_101", {"theta1", "theta2", "phi1", "phi2"}, "spin-1 singlet, labels (1, 0, 1)"},
      {FormId::E321_KS_010, "E321_KS_010", {"theta1", "theta2", "phi1", "phi2"}, "spin-1 singlet, labels (0, 1, 0)"},
      {FormId::E321_KS_101_phi, "E321_KS_101_phi", {"phi1", "phi2"}, "labels (1, 0, 1), theta1 = theta2 = pi/2"},
      {FormId::E321_KS_010_phi, "E321_KS_010_phi", {"phi1", "phi2"}, "labels (0, 1, 0), theta1 = theta2 = pi/2"},
      {FormId::E321_KS_101_theta, "E321_KS_101_theta", {"theta1", "theta2"}, "labels (1, 0, 1), phi1 = phi2 = 0"},
      {FormId::E321_KS_010_theta, "E321_KS_010_theta", {"theta1", "theta2"}, "labels (0, 1, 0), phi1 = phi2 = 0"},
      {FormId::E321_enhanced, "E321_enhanced", {"theta1", "theta2"},
       "weighted sum of the spin and (1, 0, 1) correlations, phi = 0"},
      {FormId::E421_spin, "E421_spin", {"theta1", "theta2", "phi1", "phi2"},
       "spin-3/2 singlet, labels (-3/2, -1/2, 1/2, 3/2)"},
      {FormId::E421_plastic_mmpp, "E421_plastic_mmpp", {"theta"},
       "spin-3/2 singlet, labels (-1, -1, +1, +1), directions (theta, 0) and (0, 0)"},
      {FormId::E421_plastic_mppm, "E421_plastic_mppm", {"theta"},
       "spin-3/2 singlet, labels (-1, +1, +1, -1), directions (theta, 0) and (0, 0)"},
      {FormId::E421_plastic_pmpm, "E421_plastic_pmpm", {"theta"},
       "spin-3/2 singlet, labels (+1, -1, +1, -1), directions (theta, 0) and (0, 0)"},
      {FormId::E_general_j, "E_general_j", {"j", "theta1", "theta2", "phi1", "phi2"},
       "spin-j singlet, labels m = -j..j"},
      {FormId::E241_general, "E241_general",
       {"theta1", "theta2", "theta3", "theta4", "phi1", "phi2", "phi3", "phi4"},
       "four-qubit singlet 1, parity correlation"},
      {FormId::E241_phi, "E241_phi", {"phi1", "phi2", "phi3", "phi4"}, "four-qubit singlet 1, all theta = pi/2"},
      {FormId::E241_theta, "E241_theta", {"theta1", "theta2", "theta3", "theta4"}, "four-qubit singlet 1, all phi = 0"},
      {FormId::E242_general, "E242_general",
       {"theta1", "theta2", "theta3", "theta4", "phi1", "phi2", "phi3", "phi4"},
       "four-qubit singlet 2 (two Bell pairs), parity correlation"},
      {FormId::E242_theta, "E242_theta", {"theta1", "theta2", "theta3", "theta4"}, "four-qubit singlet 2, all phi = 0"},
      {FormId::E242_phi, "E242_phi", {"phi1", "phi2", "phi3", "phi4"}, "four-qubit singlet 2, all theta = pi/2"},
      {FormId::E_classical_linear, "E_classical_linear", {"theta"},
       "classical linear correlation of two dichotomic local models"},
  };
  return catalog;
}

inline const FormInfo& form_info(FormId id) {
  for (const auto& info : form_catalog())
    if (info.id == id) return info;
  throw UsageError("form_info: unknown id");
}

inline std::optional<FormId> form_from_name(std::string_view name) {
  for (const auto& info : form_catalog())
    if (info.name == name) return info.id;
  return std::nullopt;
}

namespace forms {

using std::cos;
using std::sin;

inline double E321_general(double t1, double t2, double p1, double p2, double lm, double l0, double lp) {
  const double dp = p1 - p2;
  const double a = (-2.0 * l0 + lm + lp) * (-2.0 * l0 + lm + lp);
  const double d = (lm - lp) * (lm - lp);
  return (1.0 / 192.0) *
         (24.0 * l0 * l0 + 40.0 * l0 * (lm + lp) + 22.0 * (lm + lp) * (lm + lp) - 32.0 * d * cos(t1) * cos(t2) +
          2.0 * a * cos(2.0 * t2) * ((3.0 + cos(2.0 * dp)) * cos(2.0 * t1) + 2.0 * sin(dp) * sin(dp)) +
          2.0 * a * (cos(2.0 * dp) + 2.0 * cos(2.0 * t1) * sin(dp) * sin(dp)) -
          32.0 * d * cos(dp) * sin(t1) * sin(t2) + 8.0 * a * cos(dp) * sin(2.0 * t1) * sin(2.0 * t2));
}

inline double E321_spin(double t1, double t2, double p1, double p2) {
  return -(2.0 / 3.0) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2));
}

inline double E321_KS_101(double t1, double t2, double p1, double p2) {
  const double dp = p1 - p2;
  return (1.0 / 24.0) * (11.0 + cos(2.0 * dp) + 4.0 * cos(dp) * sin(2.0 * t1) * sin(2.0 * t2) +
                         2.0 * (cos(2.0 * t1) + cos(2.0 * t2)) * sin(dp) * sin(dp) +
                         cos(2.0 * t1) * cos(2.0 * t2) * (cos(2.0 * dp) + 3.0));
}

inline double E321_KS_010(double t1, double t2, double p1, double p2) {
  const double inner = cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2);
  return (1.0 / 3.0) * inner * inner;
}

inline double E321_KS_101_phi(double p1, double p2) { return (1.0 / 6.0) * (cos(2.0 * (p1 - p2)) + 3.0); }

inline double E321_KS_010_phi(double p1, double p2) {
  const double c = cos(p1 - p2);
  return (1.0 / 3.0) * c * c;
}

inline double E321_KS_101_theta(double t1, double t2) { return (1.0 / 6.0) * (cos(2.0 * (t1 - t2)) + 3.0); }

inline double E321_KS_010_theta(double t1, double t2) {
  const double c = cos(t1 - t2);
  return (1.0 / 3.0) * c * c;
}

/// The printed right-hand side 1/2 [-cos(t1 - t2) + cos 2(t1 - t2)].
inline double E321_enhanced(double t1, double t2) { return 0.5 * (-cos(t1 - t2) + cos(2.0 * (t1 - t2))); }

inline double E421_spin(double t1, double t2, double p1, double p2) {
  return -(5.0 / 4.0) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2));
}

inline double E421_plastic_mmpp(double t) { return (1.0 / 8.0) * (-7.0 * cos(t) - cos(3.0 * t)); }
inline double E421_plastic_mppm(double t) { return (1.0 / 4.0) * (3.0 * cos(2.0 * t) + 1.0); }
inline double E421_plastic_pmpm(double t) { return (1.0 / 2.0) * (-cos(t) - cos(3.0 * t)); }

inline double E_general_j(double j, double t1, double t2, double p1, double p2) {
  return -(j * (1.0 + j) / 3.0) * (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2));
}

inline double E241_general(double t1, double t2, double t3, double t4, double p1, double p2, double p3, double p4) {
  return (1.0 / 3.0) *
         (cos(t3) * sin(t1) * (-cos(t4) * cos(p1 - p2) * sin(t2) + 2.0 * cos(t2) * cos(p1 - p4) * sin(t4)) +
          sin(t1) * sin(t3) *
              (2.0 * cos(t2) * cos(t4) * cos(p1 - p3) +
               (2.0 * cos(p1 + p2 - p3 - p4) + cos(p1 - p2) * cos(p3 - p4)) * sin(t2) * sin(t4)) +
          cos(t1) * (2.0 * sin(t2) * (cos(t4) * cos(p2 - p3) * sin(t3) + cos(t3) * cos(p2 - p4) * sin(t4)) +
                     cos(t2) * (3.0 * cos(t3) * cos(t4) - cos(p3 - p4) * sin(t3) * sin(t4))));
}

inline double E241_phi(double p1, double p2, double p3, double p4) {
  return (1.0 / 3.0) * (2.0 * cos(p1 + p2 - p3 - p4) + cos(p1 - p2) * cos(p3 - p4));
}

inline double E241_theta(double t1, double t2, double t3, double t4) {
  return (1.0 / 3.0) * (2.0 * cos(t1 + t2 - t3 - t4) + cos(t1 - t2) * cos(t3 - t4));
}

inline double E242_general(double t1, double t2, double t3, double t4, double p1, double p2, double p3, double p4) {
  return (cos(t1) * cos(t2) + cos(p1 - p2) * sin(t1) * sin(t2)) *
         (cos(t3) * cos(t4) + cos(p3 - p4) * sin(t3) * sin(t4));
}

inline double E242_theta(double t1, double t2, double t3, double t4) { return cos(t1 - t2) * cos(t3 - t4); }

inline double E242_phi(double p1, double p2, double p3, double p4) { return cos(p1 - p2) * cos(p3 - p4); }

inline double E_classical_linear(double t) { return 2.0 * t / std::numbers::pi - 1.0; }

}  // namespace forms

/// Evaluates a closed form; `args` follows the order of form_info(id).params.
inline double evaluate(FormId id, std::span<const double> args) {
  const FormInfo& info = form_info(id);
  if (args.size() != info.params.size()) {
    throw UsageError("evaluate(" + std::string(info.name) + "): expected " + std::to_string(info.params.size()) +
                     " arguments, got " + std::to_string(args.size()));
  }
  const auto& a = args;
  switch (id) {
    case FormId::E321_general: return forms::E321_general(a[0], a[1], a[2], a[3], a[4], a[5], a[6]);
    case FormId::E321_spin: return forms::E321_spin(a[0], a[1], a[2], a[3]);
    case FormId::E321_KS_101: return forms::E321_KS_101(a[0], a[1], a[2], a[3]);
    case FormId::E321_KS_010: return forms::E321_KS_010(a[0], a[1], a[2], a[3]);
    case FormId::E321_KS_101_phi: return forms::E321_KS_101_phi(a[0], a[1]);
    case FormId::E321_KS_010_phi: return forms::E321_KS_010_phi(a[0], a[1]);
    case FormId::E321_KS_101_theta: return forms::E321_KS_101_theta(a[0], a[1]);
    case FormId::E321_KS_010_theta: return forms::E321_KS_010_theta(a[0], a[1]);
    case FormId::E321_enhanced: return forms::E321_enhanced(a[0], a[1]);
    case FormId::E421_spin: return forms::E421_spin(a[0], a[1], a[2], a[3]);
    case FormId::E421_plastic_mmpp: return forms::E421_plastic_mmpp(a[0]);
    case FormId::E421_plastic_mppm: return forms::E421_plastic_mppm(a[0]);
    case FormId::E421_plastic_pmpm: return forms::E421_plastic_pmpm(a[0]);
    case FormId::E_general_j: return forms::E_general_j(a[0], a[1], a[2], a[3], a[4]);
    case FormId::E241_general: return forms::E241_general(a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]);
    case FormId::E241_phi: return forms::E241_phi(a[0], a[1], a[2], a[3]);
    case FormId::E241_theta: return forms::E241_theta(a[0], a[1], a[2], a[3]);
    case FormId::E242_general: return forms::E242_general(a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]);
    case FormId::E242_theta: return forms::E242_theta(a[0], a[1], a[2], a[3]);
    case FormId::E242_phi: return forms::E242_phi(a[0], a[1], a[2], a[3]);
    case FormId::E_classical_linear: return forms::E_classical_linear(a[0]);
  }
  throw UsageError("evaluate: unhandled id");
}

inline double evaluate(FormId id, std::initializer_list<double> args) {
  return evaluate(id, std::span<const double>(args.begin(), args.size()));
}

/// 1/2 [-cos(t1 - t2) + cos 2(t1 - t2)], as printed.
inline double enhanced_combination(double theta1, double theta2) { return forms::E321_enhanced(theta1, theta2); }

/// The same combination assembled from its ingredients:
/// 1/2 { E321_spin + 3 [2 E321_KS_101 - 1] } at phi = 0. This equals
/// 1/2 [-(2/3) cos(t1 - t2) + cos 2(t1 - t2)], which differs from the printed
/// right-hand side by -(1/6) cos(t1 - t2); see data/errata.tsv.
inline double enhanced_combination_from_parts(double theta1, double theta2) {
  return 0.5 * (forms::E321_spin(theta1, theta2, 0.0, 0.0) + 3.0 * (2.0 * forms::E321_KS_101(theta1, theta2, 0.0, 0.0) - 1.0));
}

/// Sampled figure data: one theta column and one column per labeled series.
struct FigureTable {
  std::vector<std::string> series;  // "a", "b", ...
  std::vector<std::string> descriptions;
  std::vector<double> theta;
  std::vector<std::vector<double>> values;  // values[series][row]
};

/// Range of the theta axis for a figure.
inline std::pair<double, double> figure_theta_range(int figure) {
  if (figure != 1 && figure != 2) throw UsageError("figure must be 1 or 2, got " + std::to_string(figure));
  return {0.0, std::numbers::pi};
}

inline FigureTable figure_curves(int figure, std::span<const double> theta_grid) {
  const auto [lo, hi] = figure_theta_range(figure);
  for (double t : theta_grid) {
    if (!(t >= lo && t <= hi)) throw UsageError("figure_curves: theta outside [0, pi]");
  }
  using Curve = double (*)(double);
  struct Series {
    const char* name;
    const char* description;
    Curve fn;
  };
  static constexpr double quarter = std::numbers::pi / 4.0;
  static const std::array<Series, 5> fig1 = {{
      {"a", "E421 labels (-1,-1,+1,+1)", [](double t) { return forms::E421_plastic_mmpp(t); }},
      {"b", "E421 labels (-1,+1,+1,-1)", [](double t) { return forms::E421_plastic_mppm(t); }},
      {"c", "E421 labels (+1,-1,+1,-1)", [](double t) { return forms::E421_plastic_pmpm(t); }},
      {"d", "4/5 E421 spin labels", [](double t) { return (4.0 / 5.0) * forms::E421_spin(t, 0.0, 0.0, 0.0); }},
      {"e", "classical linear", [](double t) { return forms::E_classical_linear(t); }},
  }};
  static const std::array<Series, 5> fig2 = {{
      {"a", "E241(theta, pi/4, -theta, theta)", [](double t) { return forms::E241_theta(t, quarter, -t, t); }},
      {"b", "E241(theta, theta, -theta, theta)", [](double t) { return forms::E241_theta(t, t, -t, t); }},
      {"c", "E241(theta, -theta, -theta, theta)", [](double t) { return forms::E241_theta(t, -t, -t, t); }},
      {"d", "E241(theta, -theta, -theta, 0)", [](double t) { return forms::E241_theta(t, -t, -t, 0.0); }},
      {"e", "E241(-theta, -theta, pi/4, theta)", [](double t) { return forms::E241_theta(-t, -t, quarter, t); }},
  }};
  const auto& chosen = figure == 1 ? fig1 : fig2;

  FigureTable table;
  table.theta.assign(theta_grid.begin(), theta_grid.end());
  for (const auto& s : chosen) {
    table.series.emplace_back(s.name);
    table.descriptions.emplace_back(s.description);
    std::vector<double> column;
    column.reserve(theta_grid.size());
    for (double t : theta_grid) column.push_back(s.fn(t));
    table.values.push_back(std::move(column));
  }
  return table;
}

/// n uniformly spaced points covering [lo, hi] inclusive (n >= 2).
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw UsageError("uniform_grid: need at least 2 samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace plasticity

#endif  // PLASTICITY_CLOSEDFORMS_HPP
