#ifndef PLASTICITY_LINALG_HPP
#define PLASTICITY_LINALG_HPP

// Dense complex linear algebra for the small operators used throughout the
// library (dimensions up to 16 for eigenproblems, up to 4096 for products).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plasticity/config.hpp"
#include "plasticity/errors.hpp"

namespace plasticity {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDimension = 4096;

/// Square dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw UsageError("ComplexMatrix: dimension must be at least 1");
    if (dim > kMaxDimension) {
      throw UsageError("ComplexMatrix: dimension " + std::to_string(dim) + " exceeds " +
                       std::to_string(kMaxDimension));
    }
  }

  /// Builds from nested rows; all rows must have the same length as the row count.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != dim_) throw UsageError("ComplexMatrix: rows must form a square");
      std::size_t k = 0;
      for (const auto& value : row) (*this)(i, k++) = value;
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  /// Outer product |u><v|.
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
    if (u.size() != v.size()) throw UsageError("outer: vector lengths differ");
    ComplexMatrix m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t k = 0; k < v.size(); ++k) m(i, k) = u[i] * std::conj(v[k]);
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = 0; k < dim_; ++k) out(k, i) = std::conj((*this)(i, k));
    return out;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other) {
    require_same_dim(other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& other) {
    require_same_dim(other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex scale) {
    for (auto& value : data_) value *= scale;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= Complex(s); }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_dim(const ComplexMatrix& other, const char* op) const {
    if (other.dim_ != dim_) {
      throw UsageError(std::string(op) + ": dimension mismatch (" + std::to_string(dim_) +
                       " vs " + std::to_string(other.dim_) + ")");
    }
  }

  std::size_t dim_;
  std::vector<Complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) {
    throw UsageError("matmul: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()) + ")");
  }
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex{}) continue;
      for (std::size_t k = 0; k < n; ++k) out(i, k) += ail * b(l, k);
    }
  }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

inline std::vector<Complex> matvec(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.dim() != v.size()) throw UsageError("apply: dimension mismatch");
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Complex acc{};
    for (std::size_t k = 0; k < a.dim(); ++k) acc += a(i, k) * v[k];
    out[i] = acc;
  }
  return out;
}

/// Kronecker product; index (i*b.dim + k, j*b.dim + l) holds a(i,j)*b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  if (na > kMaxDimension / nb) {
    throw UsageError("kron: result dimension " + std::to_string(na) + "x" + std::to_string(nb) +
                     " exceeds " + std::to_string(kMaxDimension));
  }
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

/// Left-to-right Kronecker product of a non-empty list.
inline ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw UsageError("kron_all: empty factor list");
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

inline Complex trace(const ComplexMatrix& a) {
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a(i, i);
  return acc;
}

/// Tr[a*b] without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw UsageError("trace_of_product: dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) acc += a(i, k) * b(k, i);
  return acc;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (const auto& v : a.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw UsageError("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

inline double hermiticity_defect(const ComplexMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = i; k < a.dim(); ++k)
      worst = std::max(worst, std::abs(a(i, k) - std::conj(a(k, i))));
  return worst;
}

inline bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTolerances.hermitian) {
  return hermiticity_defect(a) <= tol;
}

/// Eigenvalues in ascending order; eigenvectors[k] pairs with eigenvalues[k].
struct EigenSystem {
  std::vector<double> eigenvalues;
  std::vector<std::vector<Complex>> eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }

  ComplexMatrix projector(std::size_t k) const {
    return ComplexMatrix::outer(eigenvectors.at(k), eigenvectors.at(k));
  }

  /// Projectors onto eigenspaces, grouping eigenvalues closer than `tol`.
  std::vector<std::pair<double, ComplexMatrix>> eigenspace_projectors(
      double tol = kDefaultTolerances.degeneracy) const {
    std::vector<std::pair<double, ComplexMatrix>> out;
    std::size_t k = 0;
    while (k < size()) {
      std::size_t end = k + 1;
      while (end < size() && eigenvalues[end] - eigenvalues[end - 1] <= tol) ++end;
      ComplexMatrix p = projector(k);
      double mean = eigenvalues[k];
      for (std::size_t i = k + 1; i < end; ++i) {
        p += projector(i);
        mean += eigenvalues[i];
      }
      out.emplace_back(mean / static_cast<double>(end - k), std::move(p));
      k = end;
    }
    return out;
  }
};

namespace detail {

// Fixes the phase of v so that its largest-modulus component is real and
// positive. Components within a relative 1e-12 of the maximum count as ties
// and the lowest index wins.
inline void canonicalize_phase(std::vector<Complex>& v) {
  double largest = 0.0;
  for (const auto& c : v) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return;
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= largest * (1.0 - 1e-12)) {
      pivot = i;
      break;
    }
  }
  const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
  for (auto& c : v) c *= phase;
  v[pivot] = Complex(v[pivot].real(), 0.0);
}

}  // namespace detail

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each 2x2 pivot block [[a, b], [b*, d]] is first made real by a diagonal
/// phase and then annihilated by a real Givens rotation. Sweeps continue until
/// every off-diagonal entry is below machine precision relative to ||A||_F.
inline EigenSystem eigh(const ComplexMatrix& input, const Tolerances& tol = kDefaultTolerances) {
  const double defect = hermiticity_defect(input);
  if (!(defect <= tol.hermitian)) {
    throw UsageError("eigh: input is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  for (const auto& c : input.data()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw UsageError("eigh: non-finite matrix entry");
    }
  }

  const std::size_t n = input.dim();
  ComplexMatrix a = input;
  // Symmetrize so that rounding noise in the input cannot stall convergence.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = Complex(a(i, i).real(), 0.0);
    for (std::size_t k = i + 1; k < n; ++k) {
      const Complex avg = 0.5 * (a(i, k) + std::conj(a(k, i)));
      a(i, k) = avg;
      a(k, i) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = frobenius_norm(a);
  const double negligible = std::numeric_limits<double>::epsilon() * 1e-2 * scale;

  bool converged = n == 1 || scale == 0.0;
  for (int sweep = 0; sweep < tol.max_jacobi_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double mag = std::abs(b);
        if (mag <= negligible) {
          a(p, q) = Complex{};
          a(q, p) = Complex{};
          continue;
        }
        rotated = true;
        const Complex phase = b / mag;  // e^{i alpha}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]]
        const Complex g_pp = c;
        const Complex g_pq = s;
        const Complex g_qp = -s * std::conj(phase);
        const Complex g_qq = c * std::conj(phase);

        for (std::size_t r = 0; r < n; ++r) {  // A <- A G
          const Complex arp = a(r, p);
          const Complex arq = a(r, q);
          a(r, p) = arp * g_pp + arq * g_qp;
          a(r, q) = arp * g_pq + arq * g_qq;
        }
        for (std::size_t r = 0; r < n; ++r) {  // A <- G^dagger A
          const Complex apr = a(p, r);
          const Complex aqr = a(q, r);
          a(p, r) = std::conj(g_pp) * apr + std::conj(g_qp) * aqr;
          a(q, r) = std::conj(g_pq) * apr + std::conj(g_qq) * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {  // V <- V G
          const Complex vrp = v(r, p);
          const Complex vrq = v(r, q);
          v(r, p) = vrp * g_pp + vrq * g_qp;
          v(r, q) = vrp * g_pq + vrq * g_qq;
        }
        a(p, q) = Complex{};
        a(q, p) = Complex{};
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged) {
    throw NumericalError("eigh: Jacobi iteration exceeded " + std::to_string(tol.max_jacobi_sweeps) +
                         " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenSystem out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(a(k, k).real());
    std::vector<Complex> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = v(r, k);
    detail::canonicalize_phase(column);
    out.eigenvectors.push_back(std::move(column));
  }
  return out;
}

/// f(A) for Hermitian A through its eigendecomposition.
template <typename Fn>
ComplexMatrix hermitian_function(const ComplexMatrix& a, Fn&& fn) {
  const EigenSystem es = eigh(a);
  ComplexMatrix out(a.dim());
  for (std::size_t k = 0; k < es.size(); ++k) out += es.projector(k) * Complex(fn(es.eigenvalues[k]));
  return out;
}

/// exp(-i t H) for Hermitian H.
inline ComplexMatrix unitary_exponential(const ComplexMatrix& hermitian, double t) {
  return hermitian_function(hermitian, [t](double lambda) { return std::exp(Complex(0.0, -t * lambda)); });
}

}  // namespace plasticity

#endif  // PLASTICITY_LINALG_HPP
