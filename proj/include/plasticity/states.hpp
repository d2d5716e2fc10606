#ifndef PLASTICITY_STATES_HPP
#define PLASTICITY_STATES_HPP

// Singlet states: two-particle spin-j singlets built from Clebsch-Gordan
// coefficients and the two four-qubit singlets, plus density matrices and the
// uniqueness check. Particle 1 is the slowest-varying tensor index.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "plasticity/config.hpp"
#include "plasticity/errors.hpp"
#include "plasticity/linalg.hpp"
#include "plasticity/spin.hpp"

namespace plasticity {

/// Normalized multipartite pure state.
class StateVector {
 public:
  StateVector(std::vector<std::size_t> dims, std::vector<Complex> amplitudes)
      : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (dims_.empty()) throw UsageError("StateVector: no particles");
    std::size_t total = 1;
    for (auto d : dims_) {
      if (d == 0) throw UsageError("StateVector: zero-dimensional factor");
      total *= d;
    }
    if (total != amplitudes_.size()) {
      throw UsageError("StateVector: " + std::to_string(amplitudes_.size()) + " amplitudes for dimension " +
                       std::to_string(total));
    }
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::size_t particle_count() const noexcept { return dims_.size(); }

  double norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes_) acc += std::norm(a);
    return std::sqrt(acc);
  }

  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw UsageError("StateVector: cannot normalize the zero vector");
    std::vector<Complex> out = amplitudes_;
    for (auto& a : out) a /= n;
    return StateVector(dims_, std::move(out));
  }

  /// Multiplies by a global phase so that the first nonzero amplitude is real positive.
  StateVector with_canonical_phase() const {
    std::vector<Complex> out = amplitudes_;
    for (const auto& a : amplitudes_) {
      if (std::abs(a) > 1e-14) {
        const Complex phase = std::conj(a) / std::abs(a);
        for (auto& b : out) b *= phase;
        break;
      }
    }
    return StateVector(dims_, std::move(out));
  }

  /// Tensor product |this> (x) |other>.
  StateVector tensor(const StateVector& other) const {
    std::vector<std::size_t> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    std::vector<Complex> out;
    out.reserve(dimension() * other.dimension());
    for (const auto& a : amplitudes_)
      for (const auto& b : other.amplitudes_) out.push_back(a * b);
    return StateVector(std::move(dims), std::move(out));
  }

  Complex inner(const StateVector& other) const {
    if (other.amplitudes_.size() != amplitudes_.size()) throw UsageError("inner: dimension mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return acc;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<Complex> amplitudes_;
};

/// rho = |psi><psi| together with the per-particle dimensions.
struct DensityMatrix {
  std::vector<std::size_t> dims;
  ComplexMatrix rho;

  std::size_t dimension() const noexcept { return rho.dim(); }
  std::size_t particle_count() const noexcept { return dims.size(); }
  double purity() const { return trace_of_product(rho, rho).real(); }
};

/// sum_m (-1)^(j-m) / sqrt(2j+1) |m> (x) |-m>, canonical global phase.
inline StateVector clebsch_gordan_singlet(SpinMagnitude spin) {
  const std::size_t d = spin.dim();
  std::vector<Complex> amps(d * d);
  const double weight = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    // basis index i is m = j - i, so j - m = i; -m sits at index d - 1 - i
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    amps[i * d + (d - 1 - i)] = sign * weight;
  }
  return StateVector({d, d}, std::move(amps)).with_canonical_phase();
}

/// (|+-> - |-+>)/sqrt(2).
inline StateVector bell_singlet() { return clebsch_gordan_singlet(SpinMagnitude::half()); }

/// Computational-basis product state; each entry of `indices` is a basis index of that factor.
inline StateVector product_basis_state(const std::vector<std::size_t>& dims,
                                       const std::vector<std::size_t>& indices) {
  if (dims.size() != indices.size()) throw UsageError("product_basis_state: size mismatch");
  std::size_t total = 1;
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (indices[k] >= dims[k]) throw UsageError("product_basis_state: index out of range");
    flat = flat * dims[k] + indices[k];
    total *= dims[k];
  }
  std::vector<Complex> amps(total);
  amps[flat] = 1.0;
  return StateVector(dims, std::move(amps));
}

namespace detail {

// qubit ket from a string of '+' / '-' (basis index 0 is '+')
inline std::size_t qubit_index(const char* pattern) {
  std::size_t flat = 0;
  for (const char* c = pattern; *c != '\0'; ++c) flat = flat * 2 + (*c == '-' ? 1 : 0);
  return flat;
}

}  // namespace detail

/// The two four-qubit singlets. which = 1 is the genuinely four-partite one,
/// which = 2 the product of two Bell singlets.
inline StateVector four_qubit_singlet(int which) {
  std::vector<Complex> amps(16);
  if (which == 1) {
    const double a = 1.0 / std::sqrt(3.0);
    amps[detail::qubit_index("++--")] += a;
    amps[detail::qubit_index("--++")] += a;
    for (const char* ket : {"+-+-", "+--+", "-++-", "-+-+"}) amps[detail::qubit_index(ket)] += -0.5 * a;
  } else if (which == 2) {
    amps[detail::qubit_index("+-+-")] = 0.5;
    amps[detail::qubit_index("+--+")] = -0.5;
    amps[detail::qubit_index("-++-")] = -0.5;
    amps[detail::qubit_index("-+-+")] = 0.5;
  } else {
    throw UsageError("four_qubit_singlet: selector must be 1 or 2, got " + std::to_string(which));
  }
  return StateVector({2, 2, 2, 2}, std::move(amps)).with_canonical_phase();
}

inline DensityMatrix density(const StateVector& psi, const Tolerances& tol = kDefaultTolerances) {
  const double n = psi.norm();
  if (!(std::abs(n - 1.0) <= tol.normalization)) {
    throw UsageError("density: state is not normalized (norm " + std::to_string(n) + ")");
  }
  return {psi.dims(), ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes())};
}

/// <psi| J_tot^2 |psi> for a two-particle state of equal spins.
inline double total_spin_squared(const StateVector& psi, SpinMagnitude spin) {
  if (psi.dims() != std::vector<std::size_t>{spin.dim(), spin.dim()}) {
    throw UsageError("total_spin_squared: state is not a pair of spin-" + spin.to_string() + " particles");
  }
  const auto comps = spin_component_matrices(spin);
  const auto id = ComplexMatrix::identity(spin.dim());
  double acc = 0.0;
  for (const ComplexMatrix* c : {&comps.jx, &comps.jy, &comps.jz}) {
    const ComplexMatrix total = kron(*c, id) + kron(id, *c);
    const auto v = matvec(total, psi.amplitudes());
    for (const auto& x : v) acc += std::norm(x);  // <psi|J_a^2|psi> = ||J_a psi||^2
  }
  return acc;
}

/// Deterministic, seeded points on the unit sphere: a Halton (2, 3) sequence
/// with a Cranley-Patterson shift drawn from the seed, mapped area-uniformly.
class DirectionSampler {
 public:
  explicit DirectionSampler(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    shift_[0] = unit(rng());
    shift_[1] = unit(rng());
  }

  Direction next() {
    ++index_;
    double u = radical_inverse(index_, 2) + shift_[0];
    double v = radical_inverse(index_, 3) + shift_[1];
    u -= std::floor(u);
    v -= std::floor(v);
    return Direction(std::acos(1.0 - 2.0 * u), 2.0 * std::numbers::pi * v);
  }

 private:
  static double unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

  static double radical_inverse(std::uint64_t n, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double out = 0.0;
    while (n > 0) {
      out += f * static_cast<double>(n % base);
      n /= base;
      f *= inv;
    }
    return out;
  }

  std::array<double, 2> shift_{};
  std::uint64_t index_ = 0;
};

struct UniquenessReport {
  bool passed = false;
  double max_violation = 0.0;  // largest P(m1, m2) with m2 != -m1
  Direction worst_direction;
  std::size_t samples = 0;
};

}  // namespace plasticity

#endif  // PLASTICITY_STATES_HPP
