#include "qcrb/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcrb {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx ComplexMatrix::trace() const {
  if (rows_ != cols_) raise(errc::shape, "trace: matrix is not square");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double s = 0.0;
  for (const cplx& v : a_) s = std::max(s, std::abs(v));
  return s;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) raise(errc::shape, "matrix add: shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) raise(errc::shape, "matrix sub: shape mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : a_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) raise(errc::shape, "matrix multiply: inner dimension mismatch");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

std::vector<cplx> apply(const ComplexMatrix& a, const std::vector<cplx>& v) {
  if (a.cols() != v.size()) raise(errc::shape, "apply: dimension mismatch");
  std::vector<cplx> r(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

ComplexMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  ComplexMatrix r(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
  return r;
}

HermitianMatrix HermitianMatrix::from(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) raise(errc::shape, "HermitianMatrix: matrix is not square");
  const std::size_t n = m.rows();
  double worst = 0.0;
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
      h.m_(i, j) = (i == j) ? cplx(v.real(), 0.0) : v;
      h.m_(j, i) = std::conj(h.m_(i, j));
    }
  if (worst > tol)
    raise(errc::domain, "HermitianMatrix: asymmetry " + std::to_string(worst) +
                            " exceeds tolerance " + std::to_string(tol));
  return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) h.m_(i, i) = 1.0;
  return h;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, cplx v) {
  if (i == j) v = cplx(v.real(), 0.0);
  m_(i, j) = v;
  m_(j, i) = std::conj(v);
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= cplx(s, 0.0);
  return *this;
}

double real_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) raise(errc::shape, "real_inner: dimension mismatch");
  // tr(ab) = Σ_ij a_ij b_ji = Σ_ij a_ij conj(b_ij); real for Hermitian pairs.
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx& x = a(i, j);
      const cplx& y = b(i, j);
      s += x.real() * y.real() + x.imag() * y.imag();
    }
  return s;
}

namespace {

// One cyclic Jacobi pass zeroing A_pq via the unitary plane rotation
//   J_pp = c, J_pq = s·u, J_qp = −s·conj(u), J_qq = c,  u = A_pq/|A_pq|,
// where t = s/c solves t² + 2τt − 1 = 0 with τ = (A_qq − A_pp)/(2|A_pq|).
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const cplx u = apq / g;
  const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
  const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp - s * std::conj(u) * akq;
    a(k, q) = s * u * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk - s * u * aqk;
    a(q, k) = s * std::conj(u) * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = cplx(a(p, p).real(), 0.0);
  a(q, q) = cplx(a(q, q).real(), 0.0);

  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = c * vkp - s * std::conj(u) * vkq;
    v(k, q) = s * u * vkp + c * vkq;
  }
}

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t p = 0; p + 1 < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.rows(); ++q) s += std::norm(a(p, q));
  return std::sqrt(2.0 * s);
}

}  // namespace

EigHermitian eig_hermitian(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());
  const double stop = 1e-14 * scale;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(a(p, q)) > stop / (4.0 * n)) jacobi_rotate(a, v, p, q);
  }
  if (sweep == kMaxSweeps && offdiag_norm(a) > stop)
    raise(errc::numerical_failure,
          "eig_hermitian: Jacobi sweeps did not converge (off-diagonal norm " +
              std::to_string(offdiag_norm(a)) + ")");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  EigHermitian out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

HermitianMatrix psd_function(const HermitianMatrix& a, PsdMap f, double floor) {
  const EigHermitian e = eig_hermitian(a);
  const std::size_t n = a.dim();
  std::vector<double> mapped(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = e.values[k];
    if (lam < -floor)
      raise(errc::domain, "psd_function: eigenvalue " + std::to_string(lam) +
                              " is negative beyond the floor");
    if (f == PsdMap::sqrt) {
      mapped[k] = std::sqrt(std::max(lam, 0.0));
    } else {
      if (lam <= floor)
        raise(errc::singular_matrix, "psd_function: eigenvalue " + std::to_string(lam) +
                                         " at or below the singularity floor " +
                                         std::to_string(floor));
      mapped[k] = (f == PsdMap::inv) ? 1.0 / lam : 1.0 / std::sqrt(lam);
    }
  }
  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += e.vectors(i, k) * mapped[k] * std::conj(e.vectors(j, k));
      r(i, j) = s;
    }
  return HermitianMatrix::from(r, 1e-9);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > cap || cols > cap)
    raise(errc::capacity, "tensor: result dimension " + std::to_string(std::max(rows, cols)) +
                              " exceeds cap " + std::to_string(cap));
  ComplexMatrix r(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b, std::size_t cap) {
  return HermitianMatrix::from(tensor(a.matrix(), b.matrix(), cap), 1e-9);
}

RealSymMatrix RealSymMatrix::from(std::size_t dim, const std::vector<double>& rowmajor) {
  if (rowmajor.size() != dim * dim) raise(errc::shape, "RealSymMatrix: wrong element count");
  RealSymMatrix r(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      r.a_[i * dim + j] = 0.5 * (rowmajor[i * dim + j] + rowmajor[j * dim + i]);
  return r;
}

RealSymMatrix RealSymMatrix::identity(std::size_t n) {
  RealSymMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) r.a_[i * n + i] = 1.0;
  return r;
}

double RealSymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += a_[i * dim_ + i];
  return t;
}

double RealSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

std::vector<double> RealSymMatrix::apply(const std::vector<double>& v) const {
  if (v.size() != dim_) raise(errc::shape, "RealSymMatrix::apply: dimension mismatch");
  std::vector<double> r(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += a_[i * dim_ + j] * v[j];
    r[i] = s;
  }
  return r;
}

RealSymMatrix& RealSymMatrix::operator+=(const RealSymMatrix& o) {
  if (dim_ != o.dim_) raise(errc::shape, "RealSymMatrix add: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

RealSymMatrix& RealSymMatrix::operator-=(const RealSymMatrix& o) {
  if (dim_ != o.dim_) raise(errc::shape, "RealSymMatrix sub: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

RealSymMatrix& RealSymMatrix::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

EigSym eig_sym(const RealSymMatrix& a) {
  // The complex Jacobi path stays exactly real for real input (the phase
  // factor u is ±1 computed by complex division), so we reuse it.
  const std::size_t n = a.dim();
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) h.set(i, j, a(i, j));
  EigHermitian e = eig_hermitian(h);
  EigSym out;
  out.values = std::move(e.values);
  out.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = e.vectors(i, k).real();
  return out;
}

RealSymMatrix psd_function(const RealSymMatrix& a, PsdMap f, double floor) {
  const EigSym e = eig_sym(a);
  const std::size_t n = a.dim();
  std::vector<double> mapped(n);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = e.values[k];
    if (lam < -floor)
      raise(errc::domain, "psd_function: eigenvalue " + std::to_string(lam) +
                              " is negative beyond the floor");
    if (f == PsdMap::sqrt) {
      mapped[k] = std::sqrt(std::max(lam, 0.0));
    } else {
      if (lam <= floor)
        raise(errc::singular_matrix, "psd_function: eigenvalue " + std::to_string(lam) +
                                         " at or below the singularity floor " +
                                         std::to_string(floor));
      mapped[k] = (f == PsdMap::inv) ? 1.0 / lam : 1.0 / std::sqrt(lam);
    }
  }
  RealSymMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors[k][i] * mapped[k] * e.vectors[k][j];
      r.set_sym(i, j, s);
    }
  return r;
}

RealSymMatrix sandwich(const RealSymMatrix& s, const RealSymMatrix& a) {
  if (s.dim() != a.dim()) raise(errc::shape, "sandwich: dimension mismatch");
  const std::size_t n = s.dim();
  // t = a·s, r = s·t; r is symmetric because s and a are.
  std::vector<double> t(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a(i, k) * s(k, j);
      t[i * n + j] = acc;
    }
  RealSymMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += s(i, k) * t[k * n + j];
      r.set_sym(i, j, acc);
    }
  return r;
}

double trace_product(const RealSymMatrix& a, const RealSymMatrix& b) {
  if (a.dim() != b.dim()) raise(errc::shape, "trace_product: dimension mismatch");
  double s = 0.0;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * b(i, j);
  return s;
}

double min_eigenvalue(const RealSymMatrix& a) { return eig_sym(a).values.front(); }

RealSymMatrix outer(const std::vector<double>& v) {
  RealSymMatrix r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) r.set_sym(i, j, v[i] * v[j]);
  return r;
}

}  // namespace qcrb
