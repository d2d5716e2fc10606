#ifndef PLASTICITY_CONFIG_HPP
#define PLASTICITY_CONFIG_HPP

namespace plasticity {

/// Every numerical tolerance used by the library, in one place.
struct Tolerances {
  double hermitian = 1e-12;        // max |A - A^dagger| entrywise
  double eigen_residual = 1e-10;   // relative to ||A||_F
  double degeneracy = 1e-8;        // eigenvalues closer than this share an eigenspace
  double eigenvalue_match = 1e-8;  // eigenvalue -> m assignment
  double normalization = 1e-10;    // accepted |<psi|psi> - 1|
  double imaginary_residue = 1e-10;
  double probability_slack = 1e-10;
  double oracle_agreement = 1e-9;  // trace engine vs closed form
  double engine_agreement = 1e-8;  // chsh_value with both engines
  int max_jacobi_sweeps = 500;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace plasticity

#endif  // PLASTICITY_CONFIG_HPP
