#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qcrb/errors.hpp"

namespace qcrb {

using cplx = std::complex<double>;

// Numerical tolerances, centralized so every consumer agrees on them.
struct Tolerances {
  double hermiticity = 1e-12;     // max |A - A†| accepted at construction
  double reconstruction = 1e-10;  // eigendecomposition residual ‖VΛV† − A‖
  double psd_floor = 1e-12;       // singularity floor for inverse spectral maps
};
inline constexpr Tolerances kTol{};

// Kronecker products refuse to grow past this total dimension.
inline constexpr std::size_t kTensorDimCap = 4096;

// Dense row-major complex matrix. Dimensions here are tiny (Hilbert spaces up
// to the tensor cap), so the representation favours clarity over blocking.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  const std::vector<cplx>& data() const { return a_; }
  std::vector<cplx>& data() { return a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> apply(const ComplexMatrix& a, const std::vector<cplx>& v);
ComplexMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v);  // |u⟩⟨v|

// Square complex matrix certified Hermitian: construction symmetrizes
// (A + A†)/2 and rejects inputs whose asymmetry exceeds the tolerance.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : m_(dim, dim) {}

  static HermitianMatrix from(const ComplexMatrix& m, double tol = kTol.hermiticity);
  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(n); }

  std::size_t dim() const { return m_.rows(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& matrix() const { return m_; }

  // Sets entry (i,j) and its mirror (j,i) so hermiticity is preserved.
  void set(std::size_t i, std::size_t j, cplx v);

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.frobenius_norm(); }
  double max_abs() const { return m_.max_abs(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  ComplexMatrix m_;
};

// tr(a·b) for Hermitian a, b (real by symmetry; the imaginary part is roundoff).
double real_inner(const HermitianMatrix& a, const HermitianMatrix& b);

struct EigHermitian {
  std::vector<double> values;   // ascending
  ComplexMatrix vectors;        // k-th column = eigenvector for values[k]
};

// Cyclic Jacobi eigensolver for Hermitian matrices. Deterministic sweep order,
// no external dependencies; throws numerical_failure if the off-diagonal mass
// has not converged after the sweep cap.
EigHermitian eig_hermitian(const HermitianMatrix& a);

enum class PsdMap { sqrt, inv, inv_sqrt };

// Spectral function of a positive semidefinite matrix. Eigenvalues within the
// floor of zero are clamped for sqrt; inv and inv_sqrt demand all eigenvalues
// above the floor and name the offending eigenvalue otherwise.
HermitianMatrix psd_function(const HermitianMatrix& a, PsdMap f, double floor = kTol.psd_floor);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                     std::size_t cap = kTensorDimCap);
HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b,
                       std::size_t cap = kTensorDimCap);

// Dense real symmetric matrix for parameter-space objects (information
// matrices, targets, covariances). Row-major, symmetrized at construction.
class RealSymMatrix {
 public:
  RealSymMatrix() = default;
  explicit RealSymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

  static RealSymMatrix from(std::size_t dim, const std::vector<double>& rowmajor);
  static RealSymMatrix identity(std::size_t n);
  static RealSymMatrix zero(std::size_t n) { return RealSymMatrix(n); }

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  void set_sym(std::size_t i, std::size_t j, double v) {
    a_[i * dim_ + j] = v;
    a_[j * dim_ + i] = v;
  }

  double trace() const;
  double frobenius_norm() const;
  std::vector<double> apply(const std::vector<double>& v) const;

  RealSymMatrix& operator+=(const RealSymMatrix& o);
  RealSymMatrix& operator-=(const RealSymMatrix& o);
  RealSymMatrix& operator*=(double s);
  friend RealSymMatrix operator+(RealSymMatrix a, const RealSymMatrix& b) { return a += b; }
  friend RealSymMatrix operator-(RealSymMatrix a, const RealSymMatrix& b) { return a -= b; }
  friend RealSymMatrix operator*(RealSymMatrix a, double s) { return a *= s; }
  friend RealSymMatrix operator*(double s, RealSymMatrix a) { return a *= s; }

  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> a_;
};

struct EigSym {
  std::vector<double> values;                 // ascending
  std::vector<std::vector<double>> vectors;   // vectors[k] pairs with values[k]
};

EigSym eig_sym(const RealSymMatrix& a);
RealSymMatrix psd_function(const RealSymMatrix& a, PsdMap f, double floor = kTol.psd_floor);

RealSymMatrix sandwich(const RealSymMatrix& s, const RealSymMatrix& a);  // s·a·s
double trace_product(const RealSymMatrix& a, const RealSymMatrix& b);    // tr(a·b)
double min_eigenvalue(const RealSymMatrix& a);
RealSymMatrix outer(const std::vector<double>& v);  // v vᵀ

}  // namespace qcrb
