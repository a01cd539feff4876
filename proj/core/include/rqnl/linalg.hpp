#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rqnl {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Largest operator dimension handled by the dense routines (four modes).
inline constexpr std::size_t kMaxDimension = 16;

/// 1-based index of a two-level mode. Mode 1 is the most significant bit of a
/// computational-basis index, so |abc> sits at 4a + 2b + c.
struct Mode {
  int index;
  constexpr explicit Mode(int i) : index(i) {}
  friend constexpr bool operator==(Mode, Mode) = default;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  /// max |A_ij - conj(A_ji)|.
  double hermiticity_residual() const;
  double frobenius_norm() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pure state of n two-level modes, normalized to within 1e-12.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes);

  /// Rescales the amplitudes to unit norm; rejects the zero vector.
  static StateVector normalized(std::vector<Complex> amplitudes);
  static StateVector basis(int n_modes, std::size_t index);

  int n_modes() const { return n_modes_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const;
  /// <psi| op |psi>
  Complex expectation(const ComplexMatrix& op) const;
  ComplexMatrix projector() const;

 private:
  int n_modes_;
  std::vector<Complex> amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator on n modes.
///
/// Construction validates every invariant: Hermiticity residual <= 1e-12,
/// |trace - 1| <= 1e-12 and smallest eigenvalue >= -1e-10. Values are
/// immutable once built.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);
  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(int n_modes);

  int n_modes() const { return n_modes_; }
  std::size_t dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  double purity() const;
  /// Tr[rho op]
  Complex expectation(const ComplexMatrix& op) const;

 private:
  int n_modes_;
  ComplexMatrix matrix_;
};

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors);

/// Places a single-mode operator on `mode` of an n-mode register (identity elsewhere).
ComplexMatrix embed(const ComplexMatrix& single_mode_op, Mode mode, int n_modes);

/// Traces out `subsystem`; the remaining modes keep their relative order.
DensityOperator partial_trace(const DensityOperator& rho, Mode subsystem);

/// Transposes the indices of `subsystem` only. The result need not be PSD.
ComplexMatrix partial_transpose(const DensityOperator& rho, Mode subsystem);

struct Eigensystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix (dim <= 16).
/// Stops when the off-diagonal Frobenius mass drops below 1e-14 relative to
/// max(1, ||m||_F). Throws std::invalid_argument on non-Hermitian input
/// (residual > 1e-10) or oversized input.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace rqnl
