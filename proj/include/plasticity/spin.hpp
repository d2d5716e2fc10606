#ifndef PLASTICITY_SPIN_HPP
#define PLASTICITY_SPIN_HPP

// Spin-j operators along arbitrary directions, their eigenprojectors, and
// observables with arbitrary real outcome labels.
//
// Basis convention: index i of a (2j+1)-dimensional factor is |m = j - i>, so
// |+j> = (1, 0, ..., 0). Label vectors are ordered by ascending m (lambda_{-j}
// first) and projector lists follow the same ascending-m order.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "plasticity/config.hpp"
#include "plasticity/errors.hpp"
#include "plasticity/linalg.hpp"

namespace plasticity {

inline constexpr int kMaxTwoJ = 25;

/// Spin quantum number j, stored as the integer 2j.
class SpinMagnitude {
 public:
  explicit SpinMagnitude(int two_j) : two_j_(two_j) {
    if (two_j < 1 || two_j > kMaxTwoJ) {
      throw UsageError("SpinMagnitude: 2j must lie in [1, " + std::to_string(kMaxTwoJ) + "], got " +
                       std::to_string(two_j));
    }
  }

  static SpinMagnitude half() { return SpinMagnitude(1); }

  /// Parses "1/2", "3/2", "1", "2", ...
  static SpinMagnitude parse(const std::string& text) {
    try {
      std::size_t used = 0;
      const auto slash = text.find('/');
      if (slash == std::string::npos) {
        const int j = std::stoi(text, &used);
        if (used != text.size()) throw UsageError("trailing characters");
        return SpinMagnitude(2 * j);
      }
      const int num = std::stoi(text.substr(0, slash), &used);
      if (used != slash || text.substr(slash + 1) != "2") throw UsageError("denominator must be 2");
      return SpinMagnitude(num);
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse spin value '" + text + "'");
    }
  }

  constexpr int two_j() const noexcept { return two_j_; }
  constexpr double j() const noexcept { return 0.5 * two_j_; }
  constexpr std::size_t dim() const noexcept { return static_cast<std::size_t>(two_j_) + 1; }

  /// m for basis index i (descending-m basis).
  constexpr double m_of_basis_index(std::size_t i) const noexcept {
    return j() - static_cast<double>(i);
  }
  /// m for position k of an ascending-m list.
  constexpr double m_of_label_index(std::size_t k) const noexcept {
    return -j() + static_cast<double>(k);
  }

  std::string to_string() const {
    return two_j_ % 2 == 0 ? std::to_string(two_j_ / 2) : std::to_string(two_j_) + "/2";
  }

  friend constexpr bool operator==(SpinMagnitude, SpinMagnitude) = default;

 private:
  int two_j_;
};

/// Unit vector given by polar angle theta in [0, pi] and azimuth phi in [0, 2 pi).
/// Out-of-range input is normalized to the same physical direction.
class Direction {
 public:
  Direction() = default;

  Direction(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw UsageError("Direction: non-finite angle");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    double p = phi;
    if (t > std::numbers::pi) {
      t = two_pi - t;
      p += std::numbers::pi;
    }
    p = std::fmod(p, two_pi);
    if (p < 0.0) p += two_pi;
    if (p >= two_pi) p = 0.0;
    theta_ = t;
    phi_ = p;
  }

  /// Direction in the x-z plane at in-plane angle alpha from +z towards +x.
  static Direction in_meridian(double alpha) { return Direction(alpha, 0.0); }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  std::array<double, 3> unit_vector() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Outcome labels lambda_{-j}, ..., lambda_{+j} (ascending m).
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<double> labels) : labels_(std::move(labels)) {
    for (double x : labels_)
      if (!std::isfinite(x)) throw UsageError("LabelVector: non-finite label");
  }
  LabelVector(std::initializer_list<double> labels) : LabelVector(std::vector<double>(labels)) {}

  /// lambda_m = m: the plain spin observable.
  static LabelVector spin_values(SpinMagnitude j) {
    std::vector<double> out(j.dim());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = j.m_of_label_index(k);
    return LabelVector(std::move(out));
  }

  /// -1 for m < 0, +1 for m > 0 (and 0 for m = 0): dichotomic sign labels.
  static LabelVector sign_values(SpinMagnitude j) {
    std::vector<double> out(j.dim());
    for (std::size_t k = 0; k < out.size(); ++k) {
      const double m = j.m_of_label_index(k);
      out[k] = m > 0 ? 1.0 : (m < 0 ? -1.0 : 0.0);
    }
    return LabelVector(std::move(out));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  double operator[](std::size_t k) const { return labels_.at(k); }
  const std::vector<double>& values() const noexcept { return labels_; }

  double max_abs() const {
    double out = 0.0;
    for (double x : labels_) out = std::max(out, std::abs(x));
    return out;
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<double> labels_;
};

struct SpinComponents {
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;
};

/// Jx, Jy, Jz in units of hbar, built from the ladder operators.
inline SpinComponents spin_component_matrices(SpinMagnitude spin) {
  const std::size_t d = spin.dim();
  const double j = spin.j();
  ComplexMatrix raise(d);  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
  ComplexMatrix jz(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double m = spin.m_of_basis_index(i);
    jz(i, i) = m;
    if (i > 0) raise(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  ComplexMatrix jx = (raise + lower) * 0.5;
  ComplexMatrix jy = (raise - lower) * Complex(0.0, -0.5);
  return {std::move(jx), std::move(jy), std::move(jz)};
}

/// S_j(theta, phi) = n . J.
inline ComplexMatrix spin_operator(SpinMagnitude spin, const Direction& dir) {
  const auto [jx, jy, jz] = spin_component_matrices(spin);
  const auto n = dir.unit_vector();
  return jx * n[0] + jy * n[1] + jz * n[2];
}

/// F_m(theta, phi) for m = -j..j, in ascending-m order.
inline std::vector<ComplexMatrix> eigenprojectors(SpinMagnitude spin, const Direction& dir,
                                                  const Tolerances& tol = kDefaultTolerances) {
  const EigenSystem es = eigh(spin_operator(spin, dir), tol);
  std::vector<ComplexMatrix> out;
  out.reserve(spin.dim());
  for (std::size_t k = 0; k < spin.dim(); ++k) {
    const double m = spin.m_of_label_index(k);
    if (!(std::abs(es.eigenvalues[k] - m) <= tol.eigenvalue_match)) {
      throw NumericalError("eigenprojectors: no eigenvalue within tolerance of m = " + std::to_string(m) +
                           " (closest " + std::to_string(es.eigenvalues[k]) + ")");
    }
    out.push_back(es.projector(k));
  }
  return out;
}

/// A labeled one-particle measurement R = sum_m lambda_m F_m.
class SpinObservable {
 public:
  SpinObservable(SpinMagnitude spin, Direction dir, LabelVector labels,
                 const Tolerances& tol = kDefaultTolerances)
      : spin_(spin), dir_(dir), labels_(std::move(labels)) {
    if (labels_.size() != spin.dim()) {
      throw UsageError("SpinObservable: spin " + spin.to_string() + " needs " + std::to_string(spin.dim()) +
                       " labels, got " + std::to_string(labels_.size()));
    }
    projectors_ = eigenprojectors(spin, dir, tol);
    matrix_ = ComplexMatrix(spin.dim());
    for (std::size_t k = 0; k < projectors_.size(); ++k) matrix_ += projectors_[k] * labels_[k];
  }

  SpinMagnitude spin() const noexcept { return spin_; }
  const Direction& direction() const noexcept { return dir_; }
  const LabelVector& labels() const noexcept { return labels_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  std::size_t dim() const noexcept { return spin_.dim(); }

 private:
  SpinMagnitude spin_;
  Direction dir_;
  LabelVector labels_;
  ComplexMatrix matrix_;
  std::vector<ComplexMatrix> projectors_;
};

inline SpinObservable labeled_observable(SpinMagnitude spin, const Direction& dir, LabelVector labels) {
  return SpinObservable(spin, dir, std::move(labels));
}

/// Spin-1 observable with labels (1, 0, 1), or (0, 1, 0) when inverted.
inline SpinObservable ks_observable(const Direction& dir, bool inverted) {
  return SpinObservable(SpinMagnitude(2), dir, inverted ? LabelVector{0.0, 1.0, 0.0} : LabelVector{1.0, 0.0, 1.0});
}

}  // namespace plasticity

#endif  // PLASTICITY_SPIN_HPP
