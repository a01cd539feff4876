#include "rqnl/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rqnl {

namespace {

constexpr double kStateNormTol = 1e-12;
constexpr double kDensityHermTol = 1e-12;
constexpr double kDensityTraceTol = 1e-12;
constexpr double kDensityPsdTol = 1e-10;
constexpr double kEigenHermTol = 1e-10;
constexpr double kJacobiOffTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

int modes_for_dimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return std::countr_zero(dim);
}

void check_mode(Mode mode, int n_modes) {
  if (mode.index < 1 || mode.index > n_modes) {
    throw std::out_of_range("mode " + std::to_string(mode.index) + " outside 1.." +
                            std::to_string(n_modes));
  }
}

// Bit position (from the least significant end) of a 1-based mode.
int bit_of(Mode mode, int n_modes) { return n_modes - mode.index; }

// Inserts `bit` at position `pos` of `reduced`, shifting higher bits up.
std::size_t insert_bit(std::size_t reduced, int pos, std::size_t bit) {
  const std::size_t low = reduced & ((std::size_t{1} << pos) - 1);
  const std::size_t high = reduced >> pos;
  return (high << (pos + 1)) | (bit << pos) | low;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("entry count does not match matrix shape");
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("matrix entries must be finite");
    }
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::hermiticity_residual() const {
  if (!is_square()) throw std::invalid_argument("hermiticity of a non-square matrix");
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw std::invalid_argument("shape mismatch in *");
  ComplexMatrix out(lhs.rows_, rhs.cols_);
  for (std::size_t r = 0; r < lhs.rows_; ++r) {
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const Complex a = lhs(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("shape mismatch in max_abs_diff");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes)
    : n_modes_(modes_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  for (const auto& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("state amplitudes must be finite");
    }
  }
  if (n_modes_ < 1) throw std::invalid_argument("a state needs at least one mode");
  if (std::abs(norm() - 1.0) > kStateNormTol) {
    throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm()) + ")");
  }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(s);
  for (auto& z : amplitudes) z *= inv;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(int n_modes, std::size_t index) {
  const std::size_t dim = std::size_t{1} << n_modes;
  if (index >= dim) throw std::out_of_range("basis index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& z : amplitudes_) s += std::norm(z);
  return std::sqrt(s);
}

Complex StateVector::expectation(const ComplexMatrix& op) const {
  if (op.rows() != dimension() || op.cols() != dimension()) {
    throw std::invalid_argument("operator dimension does not match state");
  }
  Complex acc = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    Complex row = 0.0;
    for (std::size_t c = 0; c < dimension(); ++c) row += op(r, c) * amplitudes_[c];
    acc += std::conj(amplitudes_[r]) * row;
  }
  return acc;
}

ComplexMatrix StateVector::projector() const {
  ComplexMatrix m(dimension(), dimension());
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t c = 0; c < dimension(); ++c) m(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
  return m;
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(ComplexMatrix matrix)
    : n_modes_(0), matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) throw std::invalid_argument("density operator must be square");
  n_modes_ = modes_for_dimension(matrix_.rows());
  if (n_modes_ < 1) throw std::invalid_argument("density operator needs at least one mode");
  if (matrix_.rows() > kMaxDimension) throw std::invalid_argument("density operator too large");
  if (const double h = matrix_.hermiticity_residual(); h > kDensityHermTol) {
    throw std::invalid_argument("density operator not Hermitian (residual " + std::to_string(h) + ")");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kDensityTraceTol) {
    throw std::invalid_argument("density operator trace is " + std::to_string(tr.real()));
  }
  const auto eig = hermitian_eigenvalues(matrix_);
  if (eig.front() < -kDensityPsdTol) {
    throw std::invalid_argument("density operator has eigenvalue " + std::to_string(eig.front()));
  }
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(int n_modes) {
  const std::size_t dim = std::size_t{1} << n_modes;
  return DensityOperator(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

Complex DensityOperator::expectation(const ComplexMatrix& op) const {
  if (op.rows() != dimension() || op.cols() != dimension()) {
    throw std::invalid_argument("operator dimension does not match density operator");
  }
  Complex acc = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r)
    for (std::size_t c = 0; c < dimension(); ++c) acc += matrix_(r, c) * op(c, r);
  return acc;
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw std::invalid_argument("empty tensor product");
  auto it = factors.begin();
  ComplexMatrix out = *it++;
  for (; it != factors.end(); ++it) out = tensor(out, *it);
  return out;
}

ComplexMatrix embed(const ComplexMatrix& single_mode_op, Mode mode, int n_modes) {
  if (single_mode_op.rows() != 2 || single_mode_op.cols() != 2) {
    throw std::invalid_argument("embed expects a 2x2 operator");
  }
  check_mode(mode, n_modes);
  ComplexMatrix out = mode.index == 1 ? single_mode_op : pauli::identity();
  for (int m = 2; m <= n_modes; ++m) {
    out = tensor(out, m == mode.index ? single_mode_op : pauli::identity());
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Mode subsystem) {
  const int n = rho.n_modes();
  check_mode(subsystem, n);
  if (n == 1) throw std::invalid_argument("cannot trace out the only mode");
  const int pos = bit_of(subsystem, n);
  const std::size_t reduced_dim = rho.dimension() / 2;
  const auto& m = rho.matrix();
  ComplexMatrix out(reduced_dim, reduced_dim);
  for (std::size_t i = 0; i < reduced_dim; ++i)
    for (std::size_t j = 0; j < reduced_dim; ++j)
      out(i, j) = m(insert_bit(i, pos, 0), insert_bit(j, pos, 0)) +
                  m(insert_bit(i, pos, 1), insert_bit(j, pos, 1));
  return DensityOperator(std::move(out));
}

ComplexMatrix partial_transpose(const DensityOperator& rho, Mode subsystem) {
  const int n = rho.n_modes();
  check_mode(subsystem, n);
  const std::size_t mask = std::size_t{1} << bit_of(subsystem, n);
  const auto& m = rho.matrix();
  ComplexMatrix out(rho.dimension(), rho.dimension());
  for (std::size_t i = 0; i < rho.dimension(); ++i)
    for (std::size_t j = 0; j < rho.dimension(); ++j) {
      // Exchange the subsystem bit between row and column.
      const std::size_t ti = (i & ~mask) | (j & mask);
      const std::size_t tj = (j & ~mask) | (i & mask);
      out(ti, tj) = m(i, j);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Eigensolver

Eigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eigensolver needs a square matrix");
  if (m.rows() > kMaxDimension) {
    throw std::invalid_argument("eigensolver dimension " + std::to_string(m.rows()) + " exceeds 16");
  }
  if (const double h = m.hermiticity_residual(); h > kEigenHermTol) {
    throw std::invalid_argument("eigensolver input not Hermitian (residual " + std::to_string(h) + ")");
  }

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };
  const double threshold = kJacobiOffTol * std::max(1.0, m.frobenius_norm());

  for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm() >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        // Phase-rotate so the (p, q) entry is real, then apply a real Givens
        // rotation. Combined unitary U has U_pp = c, U_pq = s,
        // U_qp = -s conj(e), U_qq = c conj(e).
        const Complex e = a(p, q) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ec = std::conj(e);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A U
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * ec * akq;
          a(k, q) = s * akp + c * ec * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- U^H A
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V U
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * ec * vkq;
          v(k, q) = s * vkp + c * ec * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  Eigensystem out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  return hermitian_eigensystem(m).values;
}

double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double lambda : hermitian_eigenvalues(m)) s += std::abs(lambda);
  return s;
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

}  // namespace rqnl
