#ifndef PLASTICITY_INEQUALITIES_HPP
#define PLASTICITY_INEQUALITIES_HPP

// CHSH evaluation and search, local deterministic models, the enhanced
// correlation domain scan, and Fourier partial sums of the sign step.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "plasticity/closedforms.hpp"
#include "plasticity/correlate.hpp"
#include "plasticity/errors.hpp"
#include "plasticity/spin.hpp"
#include "plasticity/states.hpp"

namespace plasticity {

/// Two settings per side and the outcome labels of each side.
struct ChshSetting {
  std::array<Direction, 2> alice;  // a, a'
  std::array<Direction, 2> bob;    // b, b'
  LabelVector alice_labels;
  LabelVector bob_labels;
};

enum class Engine { trace, closed_form, both };

using PairCorrelator = std::function<double(const Direction&, const Direction&)>;

/// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
template <typename Correlator>
double chsh_combination(Correlator&& e, const std::array<Direction, 2>& alice, const std::array<Direction, 2>& bob) {
  return e(alice[0], bob[0]) + e(alice[0], bob[1]) + e(alice[1], bob[0]) - e(alice[1], bob[1]);
}

namespace detail {

// lambda_k = slope * m_k + offset, if the labels are affine in m.
inline std::optional<std::pair<double, double>> affine_in_m(SpinMagnitude spin, const LabelVector& labels) {
  if (labels.size() != spin.dim()) return std::nullopt;
  const double m0 = spin.m_of_label_index(0);
  const double slope = (labels[labels.size() - 1] - labels[0]) / (2.0 * spin.j());
  const double offset = labels[0] - slope * m0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (std::abs(slope * spin.m_of_label_index(k) + offset - labels[k]) > 1e-12) return std::nullopt;
  }
  return std::pair{slope, offset};
}

}  // namespace detail

/// Closed-form correlation of the spin-j singlet, when one is available:
/// labels affine in m on both sides (scaled general-j law; single-particle
/// marginals of the singlet vanish), or spin 1 with equal labels on both sides.
inline std::optional<double> closed_form_pair_correlation(SpinMagnitude spin, const Direction& a,
                                                          const LabelVector& la, const Direction& b,
                                                          const LabelVector& lb) {
  const auto fa = detail::affine_in_m(spin, la);
  const auto fb = detail::affine_in_m(spin, lb);
  if (fa && fb) {
    const double spin_part = forms::E_general_j(spin.j(), a.theta(), b.theta(), a.phi(), b.phi());
    return fa->first * fb->first * spin_part + fa->second * fb->second;
  }
  if (spin.two_j() == 2 && la == lb) {
    return forms::E321_general(a.theta(), b.theta(), a.phi(), b.phi(), la[0], la[1], la[2]);
  }
  return std::nullopt;
}

/// CHSH value on a two-particle state of equal spins. The closed-form engine
/// only covers the spin-j singlet.
inline double chsh_value(const DensityMatrix& state, SpinMagnitude spin, const ChshSetting& setting,
                         Engine engine = Engine::trace, const Tolerances& tol = kDefaultTolerances) {
  if (state.particle_count() != 2) throw UsageError("chsh_value: needs a two-particle state");
  auto trace_engine = [&](const Direction& a, const Direction& b) {
    return correlation(state, spin, a, setting.alice_labels, b, setting.bob_labels);
  };
  auto closed_engine = [&](const Direction& a, const Direction& b) {
    const auto value = closed_form_pair_correlation(spin, a, setting.alice_labels, b, setting.bob_labels);
    if (!value) throw UsageError("chsh_value: no closed form for these labels");
    return *value;
  };
  if (engine != Engine::trace) {
    const DensityMatrix singlet = density(clebsch_gordan_singlet(spin));
    if (state.dims != singlet.dims || max_abs_diff(state.rho, singlet.rho) > 1e-10) {
      throw UsageError("chsh_value: the closed-form engine needs the spin-" + spin.to_string() + " singlet");
    }
  }
  switch (engine) {
    case Engine::trace: return chsh_combination(trace_engine, setting.alice, setting.bob);
    case Engine::closed_form: return chsh_combination(closed_engine, setting.alice, setting.bob);
    case Engine::both: {
      const double s_trace = chsh_combination(trace_engine, setting.alice, setting.bob);
      const double s_closed = chsh_combination(closed_engine, setting.alice, setting.bob);
      if (!(std::abs(s_trace - s_closed) <= tol.engine_agreement)) {
        throw NumericalError("chsh_value: engines disagree (" + std::to_string(s_trace) + " vs " +
                             std::to_string(s_closed) + ")");
      }
      return s_trace;
    }
  }
  throw UsageError("chsh_value: unknown engine");
}

struct GoldenResult {
  double x;
  double value;
  std::size_t evaluations;
};

/// Golden-section search for a maximum of f on [lo, hi].
template <typename Fn>
GoldenResult golden_section_maximize(Fn&& f, double lo, double hi, double tol, std::size_t max_evaluations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  std::size_t evals = 2;
  while (hi - lo > tol && evals < max_evaluations) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? GoldenResult{c, fc, evals} : GoldenResult{d, fd, evals};
}

enum class ScanMethod { grid, refine };

struct ScanOptions {
  ScanMethod method = ScanMethod::refine;
  std::size_t grid_points = 60;     // per angle, over the full x-z great circle
  std::size_t budget = 1'000'000;   // correlator evaluations
  bool full_angles = false;         // refine theta and phi of all four directions
  double step_tolerance = 1e-6;     // radians
  unsigned threads = 0;             // 0: hardware concurrency
};

struct ScanResult {
  double best_value = 0.0;
  std::array<Direction, 2> alice;
  std::array<Direction, 2> bob;
  std::size_t evaluations = 0;
  std::size_t grid_points = 0;
  std::size_t refine_sweeps = 0;
  double runtime_seconds = 0.0;
  std::string method;
};

/// Maximizes the CHSH combination of a pair correlator.
///
/// The grid stage tabulates E(alpha_i, alpha_k) for in-plane angles
/// alpha_i = 2 pi i / N (N^2 correlator calls) and then maximizes over all
/// N^4 setting combinations exactly, using that S separates into a b-part and
/// a b'-part once (a, a') is fixed. The refine stage runs coordinate-wise
/// golden-section sweeps from the best grid point until no coordinate moves
/// by more than step_tolerance.
template <typename Correlator>
ScanResult optimize_chsh(Correlator&& e, const ScanOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (options.budget < 1) throw UsageError("optimize_chsh: budget must be at least 1");

  std::size_t n = std::max<std::size_t>(options.grid_points, 1);
  while (n > 1 && n * n + 4 > options.budget) --n;
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);

  std::vector<double> table(n * n);
  {
    unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers)
          for (std::size_t k = 0; k < n; ++k)
            table[i * n + k] = e(Direction::in_meridian(alpha[i]), Direction::in_meridian(alpha[k]));
      });
    }
  }
  std::size_t evaluations = n * n;

  std::array<std::size_t, 4> best_idx{0, 0, 0, 0};
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t a2 = 0; a2 < n; ++a2) {
      std::size_t b_best = 0;
      std::size_t b2_best = 0;
      double u_best = -std::numeric_limits<double>::infinity();
      double v_best = -std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < n; ++b) {
        const double u = table[a * n + b] + table[a2 * n + b];
        const double v = table[a * n + b] - table[a2 * n + b];
        if (u > u_best) {
          u_best = u;
          b_best = b;
        }
        if (v > v_best) {
          v_best = v;
          b2_best = b;
        }
      }
      if (u_best + v_best > best) {
        best = u_best + v_best;
        best_idx = {a, a2, b_best, b2_best};
      }
    }
  }

  // coordinates: meridian mode uses one in-plane angle per direction,
  // full mode uses (theta, phi) per direction
  const std::size_t per_dir = options.full_angles ? 2 : 1;
  std::vector<double> x;
  for (std::size_t idx : best_idx) {
    x.push_back(alpha[idx]);
    if (options.full_angles) x.push_back(0.0);
  }
  auto dir_at = [&](const std::vector<double>& coords, std::size_t which) {
    return options.full_angles ? Direction(coords[2 * which], coords[2 * which + 1])
                               : Direction::in_meridian(coords[which]);
  };
  auto chsh_at = [&](const std::vector<double>& coords) {
    return chsh_combination(e, {dir_at(coords, 0), dir_at(coords, 1)}, {dir_at(coords, 2), dir_at(coords, 3)});
  };

  ScanResult result;
  result.grid_points = n;
  result.method = options.method == ScanMethod::grid ? "grid" : (options.full_angles ? "grid+refine(8 angles)" : "grid+refine");

  if (options.method == ScanMethod::refine) {
    double current = best;
    double half_width = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t sweep = 0; sweep < 10'000; ++sweep) {
      double largest_move = 0.0;
      for (std::size_t c = 0; c < 4 * per_dir; ++c) {
        if (evaluations + 8 > options.budget) break;
        const std::size_t remaining = (options.budget - evaluations) / 4;
        auto along = [&](double value) {
          std::vector<double> trial = x;
          trial[c] = value;
          return chsh_at(trial);
        };
        const GoldenResult g = golden_section_maximize(along, x[c] - half_width, x[c] + half_width, 1e-10,
                                                       std::min<std::size_t>(remaining, 200));
        evaluations += 4 * g.evaluations;
        if (g.value > current) {
          largest_move = std::max(largest_move, std::abs(g.x - x[c]));
          x[c] = g.x;
          current = g.value;
        }
      }
      ++result.refine_sweeps;
      if (largest_move < options.step_tolerance || evaluations + 8 > options.budget) break;
      half_width = std::max(4.0 * largest_move, 10.0 * options.step_tolerance);
    }
  }

  result.alice = {dir_at(x, 0), dir_at(x, 1)};
  result.bob = {dir_at(x, 2), dir_at(x, 3)};
  // re-evaluate so that best_value is exactly the value of the reported setting
  result.best_value = chsh_combination(e, result.alice, result.bob);
  result.evaluations = evaluations + 4;
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Two-particle CHSH search on a state, with per-side labels.
inline ScanResult optimize_chsh(const DensityMatrix& state, SpinMagnitude spin, const LabelVector& alice_labels,
                                const LabelVector& bob_labels, const ScanOptions& options = {}) {
  if (state.particle_count() != 2) throw UsageError("optimize_chsh: needs a two-particle state");
  if (alice_labels.size() != spin.dim() || bob_labels.size() != spin.dim()) {
    throw UsageError("optimize_chsh: label count does not match spin " + spin.to_string());
  }
  return optimize_chsh(
      [&](const Direction& a, const Direction& b) { return correlation(state, spin, a, alice_labels, b, bob_labels); },
      options);
}

/// Pairwise CHSH on a four-qubit state: particles 1 and 2 are varied, 3 and 4
/// stay along z, and the parity correlation plays the role of E.
inline ScanResult optimize_chsh_pairwise(const DensityMatrix& four_qubit_state, const ScanOptions& options = {}) {
  if (four_qubit_state.particle_count() != 4) throw UsageError("optimize_chsh_pairwise: needs four qubits");
  const Direction z(0.0, 0.0);
  return optimize_chsh(
      [&](const Direction& a, const Direction& b) { return parity_correlation(four_qubit_state, {a, b, z, z}).correlation; },
      options);
}

/// Deterministic local model: predetermined +-1 outcomes for each setting.
struct LocalDeterministicModel {
  std::array<int, 2> alice{1, 1};
  std::array<int, 2> bob{1, 1};
};

inline int chsh_value(const LocalDeterministicModel& m) {
  for (int v : {m.alice[0], m.alice[1], m.bob[0], m.bob[1]})
    if (v != 1 && v != -1) throw UsageError("LocalDeterministicModel: outcomes must be +1 or -1");
  return m.alice[0] * m.bob[0] + m.alice[0] * m.bob[1] + m.alice[1] * m.bob[0] - m.alice[1] * m.bob[1];
}

/// Correlation of the local model A = sgn cos(l), B = -sgn cos(l - theta) with
/// the hidden angle l uniform on the circle, integrated exactly over the
/// arcs between sign changes.
inline double classical_sign_model_correlation(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto wrap = [&](double v) {
    v = std::fmod(v, two_pi);
    return v < 0.0 ? v + two_pi : v;
  };
  auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  std::vector<double> cuts = {0.0, wrap(std::numbers::pi / 2), wrap(-std::numbers::pi / 2),
                              wrap(theta + std::numbers::pi / 2), wrap(theta - std::numbers::pi / 2), two_pi};
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    acc += width * sgn(std::cos(mid)) * -sgn(std::cos(mid - theta));
  }
  return acc / two_pi;
}

struct SignInterval {
  double lo;
  double hi;
  int sign;  // -1, 0, +1
};

struct EnhancementReport {
  double grid_step = 0.0;
  std::size_t samples = 0;
  std::vector<SignInterval> intervals;  // sign of enhanced - (-cos delta)
  double boundary = 0.0;                // measured switch from above to below
  double below_lo = 0.0;                // region where enhanced < -cos delta
  double below_hi = 0.0;
  double claimed_lo = 0.0;              // claimed region 0 < delta < pi/3
  double claimed_hi = std::numbers::pi / 3.0;
  bool claim_agrees = false;
  std::string summary;
};

/// Scans delta = theta1 - theta2 over [0, pi] and measures where the enhanced
/// combination lies strictly below -cos(delta).
inline EnhancementReport enhancement_domain(double grid_step = 1e-3) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw UsageError("enhancement_domain: grid step must be in (0, 0.5]");
  constexpr double zero_band = 1e-12;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(std::numbers::pi / grid_step));
  EnhancementReport report;
  report.grid_step = std::numbers::pi / static_cast<double>(steps);
  report.samples = steps + 1;

  std::vector<double> delta(steps + 1);
  std::vector<double> diff(steps + 1);
  std::vector<int> sign(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    delta[i] = i == steps ? std::numbers::pi : report.grid_step * static_cast<double>(i);
    diff[i] = enhanced_combination(delta[i], 0.0) - (-std::cos(delta[i]));
    sign[i] = std::abs(diff[i]) <= zero_band ? 0 : (diff[i] > 0.0 ? 1 : -1);
  }
  for (std::size_t i = 0; i <= steps;) {
    std::size_t j = i;
    while (j + 1 <= steps && sign[j + 1] == sign[i]) ++j;
    report.intervals.push_back({delta[i], delta[j], sign[i]});
    i = j + 1;
  }

  bool found_below = false;
  for (std::size_t i = 0; i <= steps; ++i) {
    if (sign[i] < 0) {
      if (!found_below) report.below_lo = delta[i];
      report.below_hi = delta[i];
      found_below = true;
    }
  }
  for (std::size_t i = 0; i < steps; ++i) {
    if (diff[i] > zero_band && diff[i + 1] <= zero_band) {
      // linear interpolation of the root between the bracketing samples
      const double t = diff[i] / (diff[i] - diff[i + 1]);
      report.boundary = delta[i] + t * (delta[i + 1] - delta[i]);
      break;
    }
  }
  const double step = report.grid_step;
  report.claim_agrees = found_below && std::abs(report.below_lo - report.claimed_lo) <= step &&
                        std::abs(report.below_hi - report.claimed_hi) <= step;
  char buffer[256];
  std::snprintf(buffer, sizeof buffer,
                "enhanced < -cos(delta) measured on [%.6f, %.6f] (boundary %.6f); claimed 0 < delta < pi/3: %s",
                report.below_lo, report.below_hi, report.boundary, report.claim_agrees ? "agrees" : "erratum");
  report.summary = buffer;
  return report;
}

namespace detail {

template <typename Term>
double partial_sum(std::size_t terms, Term&& term) {
  if (terms <= 1000) {
    double acc = 0.0;
    for (std::size_t n = 0; n < terms; ++n) acc += term(n);
    return acc;
  }
  double acc = 0.0;
  double carry = 0.0;  // Kahan compensation
  for (std::size_t n = 0; n < terms; ++n) {
    const double y = term(n) - carry;
    const double t = acc + y;
    carry = (t - acc) - y;
    acc = t;
  }
  return acc;
}

inline void check_fourier_args(double theta, std::size_t terms) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw UsageError("sign_fourier_partial: theta must lie in [0, pi]");
  if (terms < 1) throw UsageError("sign_fourier_partial: need at least one term");
}

}  // namespace detail

/// Partial sum of the Fourier series of sgn(theta - pi/2) on [0, pi]:
/// (4/pi) sum_{n<terms} sin[(2n+1)(theta - pi/2)] / (2n+1)
///   = -(4/pi) sum (-1)^n cos[(2n+1) theta] / (2n+1).
/// Evaluated in the shifted variable so that theta = pi/2 gives exactly 0.
inline double sign_fourier_partial(double theta, std::size_t terms) {
  detail::check_fourier_args(theta, terms);
  const double x = theta - std::numbers::pi / 2.0;
  const double sum = detail::partial_sum(terms, [x](std::size_t n) {
    const double k = 2.0 * static_cast<double>(n) + 1.0;
    return std::sin(k * x) / k;
  });
  return (4.0 / std::numbers::pi) * sum;
}

/// The series exactly as printed next to the step function:
/// (4/pi) sum (-1)^n cos[(2n+1)(theta + pi/2)] / (2n+1). On (0, pi) it
/// converges to -1 everywhere rather than to the step; see data/errata.tsv.
inline double sign_fourier_partial_printed(double theta, std::size_t terms) {
  detail::check_fourier_args(theta, terms);
  const double sum = detail::partial_sum(terms, [theta](std::size_t n) {
    const double k = 2.0 * static_cast<double>(n) + 1.0;
    return (n % 2 == 0 ? 1.0 : -1.0) * std::cos(k * (theta + std::numbers::pi / 2.0)) / k;
  });
  return (4.0 / std::numbers::pi) * sum;
}

/// Target of the series: -1 below pi/2, 0 at pi/2, +1 above.
inline double step_sign(double theta) {
  const double x = theta - std::numbers::pi / 2.0;
  return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

}  // namespace plasticity

#endif  // PLASTICITY_INEQUALITIES_HPP
