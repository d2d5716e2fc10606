#ifndef PLASTICITY_CORRELATE_HPP
#define PLASTICITY_CORRELATE_HPP

// Born-rule engine: joint outcome probabilities Tr[rho (F_m1 (x) ... (x) F_mn)]
// and correlation coefficients Tr[rho (R_1 (x) ... (x) R_n)].

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "plasticity/config.hpp"
#include "plasticity/errors.hpp"
#include "plasticity/linalg.hpp"
#include "plasticity/spin.hpp"
#include "plasticity/states.hpp"

namespace plasticity {

struct CorrelationQuery {
  DensityMatrix state;
  std::vector<SpinObservable> observables;  // one per particle
};

/// Outcome tuples (2m_1, ..., 2m_n) with their probabilities.
struct JointProbabilityTable {
  std::vector<SpinMagnitude> spins;
  std::vector<std::vector<int>> outcomes;  // twice m, per particle
  std::vector<double> raw;                 // unclamped Tr[rho F]

  std::size_t size() const noexcept { return raw.size(); }

  /// Probability clamped to [0, 1].
  double probability(std::size_t row) const { return std::clamp(raw.at(row), 0.0, 1.0); }

  /// Probability of the tuple given as twice-m values.
  double probability_of(const std::vector<int>& two_m) const {
    for (std::size_t r = 0; r < outcomes.size(); ++r)
      if (outcomes[r] == two_m) return probability(r);
    throw UsageError("JointProbabilityTable: unknown outcome tuple");
  }

  double total() const {
    double acc = 0.0;
    for (double p : raw) acc += p;
    return acc;
  }
};

namespace detail {

inline void require_dims(const DensityMatrix& state, const std::vector<SpinMagnitude>& spins, const char* who) {
  if (state.dims.size() != spins.size()) {
    throw UsageError(std::string(who) + ": state has " + std::to_string(state.dims.size()) + " particles, got " +
                     std::to_string(spins.size()) + " measurements");
  }
  for (std::size_t k = 0; k < spins.size(); ++k) {
    if (state.dims[k] != spins[k].dim()) {
      throw UsageError(std::string(who) + ": particle " + std::to_string(k + 1) + " has dimension " +
                       std::to_string(state.dims[k]) + " but spin " + spins[k].to_string() + " needs " +
                       std::to_string(spins[k].dim()));
    }
  }
}

// Tr[rho (x)_k A_k] with the imaginary residue checked.
inline double real_expectation(const DensityMatrix& state, const std::vector<ComplexMatrix>& factors,
                               const Tolerances& tol, const char* who) {
  const Complex value = trace_of_product(state.rho, kron_all(factors));
  if (!(std::abs(value.imag()) <= tol.imaginary_residue)) {
    throw NumericalError(std::string(who) + ": imaginary residue " + std::to_string(value.imag()) +
                         " exceeds tolerance");
  }
  return value.real();
}

}  // namespace detail

inline JointProbabilityTable joint_probabilities(const DensityMatrix& state, const std::vector<Direction>& dirs,
                                                 const std::vector<SpinMagnitude>& spins,
                                                 const Tolerances& tol = kDefaultTolerances) {
  if (dirs.size() != spins.size()) throw UsageError("joint_probabilities: one direction per particle required");
  detail::require_dims(state, spins, "joint_probabilities");

  std::vector<std::vector<ComplexMatrix>> projectors;
  projectors.reserve(spins.size());
  for (std::size_t k = 0; k < spins.size(); ++k) projectors.push_back(eigenprojectors(spins[k], dirs[k], tol));

  JointProbabilityTable table;
  table.spins = spins;
  // Row r enumerates tuples with particle 1 slowest, each particle from +j down to -j,
  // which is also the order of the tensor basis.
  std::size_t rows = 1;
  for (const auto& s : spins) rows *= s.dim();
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<ComplexMatrix> factors(spins.size());
    std::vector<int> two_m(spins.size());
    std::size_t rest = r;
    for (std::size_t k = spins.size(); k-- > 0;) {
      const std::size_t basis = rest % spins[k].dim();
      rest /= spins[k].dim();
      factors[k] = projectors[k][spins[k].dim() - 1 - basis];
      two_m[k] = spins[k].two_j() - 2 * static_cast<int>(basis);
    }
    table.outcomes.push_back(std::move(two_m));
    table.raw.push_back(detail::real_expectation(state, factors, tol, "joint_probabilities"));
  }

  for (double p : table.raw) {
    if (p < -tol.probability_slack || p > 1.0 + tol.probability_slack) {
      throw NumericalError("joint_probabilities: probability " + std::to_string(p) + " out of range");
    }
  }
  if (!(std::abs(table.total() - 1.0) <= tol.probability_slack)) {
    throw NumericalError("joint_probabilities: probabilities sum to " + std::to_string(table.total()));
  }
  return table;
}

/// E = Tr[rho (R_1 (x) ... (x) R_n)].
inline double correlation(const CorrelationQuery& query, const Tolerances& tol = kDefaultTolerances) {
  std::vector<SpinMagnitude> spins;
  std::vector<ComplexMatrix> factors;
  for (const auto& obs : query.observables) {
    spins.push_back(obs.spin());
    factors.push_back(obs.matrix());
  }
  detail::require_dims(query.state, spins, "correlation");
  return detail::real_expectation(query.state, factors, tol, "correlation");
}

/// Two-particle convenience: same spin on both sides, labels per side.
inline double correlation(const DensityMatrix& state, SpinMagnitude spin, const Direction& a, const LabelVector& la,
                          const Direction& b, const LabelVector& lb) {
  return correlation(CorrelationQuery{state, {SpinObservable(spin, a, la), SpinObservable(spin, b, lb)}});
}

struct ParityCorrelation {
  double correlation = 0.0;  // P_even - P_odd
  double p_even = 0.0;
  double p_odd = 0.0;
};

/// Four spin-1/2 particles: probabilities of an even / odd number of "-" outcomes.
inline ParityCorrelation parity_correlation(const DensityMatrix& state, const std::vector<Direction>& dirs,
                                            const Tolerances& tol = kDefaultTolerances) {
  if (state.particle_count() != 4 || dirs.size() != 4) {
    throw UsageError("parity_correlation: needs a four-particle state and four directions");
  }
  const std::vector<SpinMagnitude> spins(4, SpinMagnitude::half());
  const JointProbabilityTable table = joint_probabilities(state, dirs, spins, tol);
  ParityCorrelation out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto minus = std::count(table.outcomes[r].begin(), table.outcomes[r].end(), -1);
    (minus % 2 == 0 ? out.p_even : out.p_odd) += table.raw[r];
  }
  out.correlation = out.p_even - out.p_odd;
  out.p_even = std::clamp(out.p_even, 0.0, 1.0);
  out.p_odd = std::clamp(out.p_odd, 0.0, 1.0);
  return out;
}

/// Spin-label correlation of the spin-j singlet: Tr[rho (S_j(a) (x) S_j(b))].
inline double correlation_general_j(SpinMagnitude spin, const Direction& a, const Direction& b) {
  const DensityMatrix rho = density(clebsch_gordan_singlet(spin));
  const LabelVector labels = LabelVector::spin_values(spin);
  return correlation(rho, spin, a, labels, b, labels);
}

/// Samples directions (identical on both sides) and checks that P(m1, m2)
/// vanishes whenever m2 != -m1.
inline UniquenessReport check_uniqueness(const StateVector& psi, SpinMagnitude spin, std::size_t samples,
                                         std::uint64_t seed = 42, double threshold = 1e-10) {
  if (psi.dims() != std::vector<std::size_t>{spin.dim(), spin.dim()}) {
    throw UsageError("check_uniqueness: state is not a pair of spin-" + spin.to_string() + " particles");
  }
  const DensityMatrix rho = density(psi);
  DirectionSampler sampler(seed);
  UniquenessReport report;
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Direction dir = sampler.next();
    const auto table = joint_probabilities(rho, {dir, dir}, {spin, spin});
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (table.outcomes[r][1] == -table.outcomes[r][0]) continue;
      const double p = table.raw[r];
      if (p > report.max_violation) {
        report.max_violation = p;
        report.worst_direction = dir;
      }
    }
  }
  report.passed = report.max_violation <= threshold;
  return report;
}

}  // namespace plasticity

#endif  // PLASTICITY_CORRELATE_HPP
