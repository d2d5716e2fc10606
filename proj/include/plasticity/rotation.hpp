#ifndef PLASTICITY_ROTATION_HPP
#define PLASTICITY_ROTATION_HPP

// Second construction path for eigenprojectors: rotate the Jz eigenbasis with
// U = exp(-i phi Jz) exp(-i theta Jy). Independent of the eigh-of-S(theta, phi)
// path in spin.hpp and used to cross-check it.

#include <vector>

#include "plasticity/linalg.hpp"
#include "plasticity/spin.hpp"

namespace plasticity {

inline ComplexMatrix rotation_operator(SpinMagnitude spin, const Direction& dir) {
  const auto comps = spin_component_matrices(spin);
  return matmul(unitary_exponential(comps.jz, dir.phi()), unitary_exponential(comps.jy, dir.theta()));
}

/// U |m><m| U^dagger for m = -j..j (ascending m).
inline std::vector<ComplexMatrix> rotated_projectors(SpinMagnitude spin, const Direction& dir) {
  const ComplexMatrix u = rotation_operator(spin, dir);
  const ComplexMatrix u_dag = u.adjoint();
  std::vector<ComplexMatrix> out;
  out.reserve(spin.dim());
  for (std::size_t k = 0; k < spin.dim(); ++k) {
    // ascending-m position k is basis index d-1-k
    const std::size_t basis = spin.dim() - 1 - k;
    ComplexMatrix ket(spin.dim());
    ket(basis, basis) = 1.0;
    out.push_back(matmul(matmul(u, ket), u_dag));
  }
  return out;
}

/// sum_m lambda_m U|m><m|U^dagger.
inline ComplexMatrix rotated_observable(SpinMagnitude spin, const Direction& dir, const LabelVector& labels) {
  if (labels.size() != spin.dim()) throw UsageError("rotated_observable: label count mismatch");
  const auto projectors = rotated_projectors(spin, dir);
  ComplexMatrix out(spin.dim());
  for (std::size_t k = 0; k < projectors.size(); ++k) out += projectors[k] * labels[k];
  return out;
}

}  // namespace plasticity

#endif  // PLASTICITY_ROTATION_HPP
