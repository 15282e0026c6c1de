#include "qil/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qil {

namespace {

std::string overlap_message(double separation, double threshold) {
  std::ostringstream os;
  os << "sylvester_solve: spectra overlap (separation " << separation << " <= threshold " << threshold
     << ")";
  return os.str();
}

}  // namespace

SpectraOverlapError::SpectraOverlapError(double separation, double threshold)
    : std::runtime_error(overlap_message(separation, threshold)),
      separation_(separation),
      threshold_(threshold) {}

OperatorMatrix::OperatorMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("OperatorMatrix: matrix is not square");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("OperatorMatrix: non-finite entry");
  }
}

OperatorMatrix OperatorMatrix::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return OperatorMatrix(DenseMatrix::Identity(d, d));
}

OperatorMatrix OperatorMatrix::zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return OperatorMatrix(DenseMatrix::Zero(d, d));
}

OperatorMatrix OperatorMatrix::diagonal(const std::vector<Complex>& diag) {
  const auto d = static_cast<Eigen::Index>(diag.size());
  DenseMatrix m = DenseMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return OperatorMatrix(std::move(m));
}

OperatorMatrix OperatorMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  DenseMatrix m(d, d);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw std::invalid_argument("OperatorMatrix::from_rows: ragged or non-square rows");
    }
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return OperatorMatrix(std::move(m));
}

Vector OperatorMatrix::apply(const Vector& x) const {
  if (x.size() != entries_.cols()) {
    throw std::invalid_argument("OperatorMatrix::apply: dimension mismatch");
  }
  return entries_ * x;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator*: dimension mismatch");
  return OperatorMatrix(a.entries_ * b.entries_);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator+: dimension mismatch");
  return OperatorMatrix(a.entries_ + b.entries_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator-: dimension mismatch");
  return OperatorMatrix(a.entries_ - b.entries_);
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return OperatorMatrix(s * a.entries_); }

OperatorMatrix adjoint(const OperatorMatrix& a) { return OperatorMatrix(a.dense().adjoint()); }

OperatorMatrix matpow(const OperatorMatrix& a, int k) {
  if (k < 0) throw std::invalid_argument("matpow: negative exponent");
  DenseMatrix result = DenseMatrix::Identity(a.dense().rows(), a.dense().cols());
  DenseMatrix base = a.dense();
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return OperatorMatrix(std::move(result));
}

std::vector<double> singular_values(const DenseMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double op_norm(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseMatrix> svd(a);
  return svd.singularValues()(0);
}

double op_norm(const OperatorMatrix& a) { return op_norm(a.dense()); }

std::size_t numerical_rank(const DenseMatrix& a, double rank_tol) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  const double cut = rank_tol * s.front();
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return v > cut; }));
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  const Eigen::Index da = a.dense().rows();
  const Eigen::Index db = b.dense().rows();
  DenseMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.dense()(i, j) * b.dense();
    }
  }
  return OperatorMatrix(std::move(out));
}

std::vector<Complex> spectrum(const OperatorMatrix& a) {
  if (a.empty()) return {};
  Eigen::ComplexEigenSolver<DenseMatrix> solver(a.dense(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("spectrum: eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

RangeSplit range_basis(const DenseMatrix& a, double rank_tol) {
  if (rank_tol < 0.0) throw std::invalid_argument("range_basis: negative rank tolerance");
  const Eigen::Index d = a.rows();
  RangeSplit split;
  if (d == 0) {
    split.basis = DenseMatrix(0, 0);
    split.complement = DenseMatrix(0, 0);
    return split;
  }
  Eigen::JacobiSVD<DenseMatrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s(0) > 0.0) {
    const double cut = rank_tol * s(0);
    while (rank < s.size() && s(rank) > cut) ++rank;
  }
  const DenseMatrix& u = svd.matrixU();
  split.rank = static_cast<std::size_t>(rank);
  split.basis = u.leftCols(rank);
  split.complement = u.rightCols(d - rank);
  return split;
}

double sylvester_separation_threshold(const OperatorMatrix& a, const OperatorMatrix& b) {
  return 1e-8 * (op_norm(a) + op_norm(b));
}

DenseMatrix sylvester_solve(const OperatorMatrix& a, const OperatorMatrix& b, const DenseMatrix& c,
                            double separation_threshold) {
  const Eigen::Index ra = a.dense().rows();
  const Eigen::Index rb = b.dense().rows();
  if (c.rows() != ra || c.cols() != rb) {
    throw std::invalid_argument("sylvester_solve: C must be dim(A) x dim(B)");
  }
  if (ra == 0 || rb == 0) return DenseMatrix::Zero(ra, rb);

  Eigen::ComplexSchur<DenseMatrix> schur_a(a.dense());
  Eigen::ComplexSchur<DenseMatrix> schur_b(b.dense());
  if (schur_a.info() != Eigen::Success || schur_b.info() != Eigen::Success) {
    throw NumericalFailure("sylvester_solve: Schur decomposition did not converge");
  }
  const DenseMatrix& ta = schur_a.matrixT();
  const DenseMatrix& qa = schur_a.matrixU();
  const DenseMatrix& tb = schur_b.matrixT();
  const DenseMatrix& qb = schur_b.matrixU();

  double separation = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < rb; ++j) {
      separation = std::min(separation, std::abs(ta(i, i) - tb(j, j)));
    }
  }
  const double threshold =
      separation_threshold < 0.0 ? sylvester_separation_threshold(a, b) : separation_threshold;
  if (separation <= threshold) throw SpectraOverlapError(separation, threshold);

  // Ta Y - Y Tb = F with both T upper triangular; sweep the columns of Y.
  const DenseMatrix f = qa.adjoint() * c * qb;
  DenseMatrix y = DenseMatrix::Zero(ra, rb);
  for (Eigen::Index j = 0; j < rb; ++j) {
    Vector rhs = f.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += tb(i, j) * y.col(i);
    DenseMatrix shifted = ta;
    shifted.diagonal().array() -= tb(j, j);
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return qa * y * qb.adjoint();
}

bool spectra_match(std::vector<Complex> lhs, std::vector<Complex> rhs, double threshold) {
  if (lhs.size() != rhs.size()) return false;
  while (!lhs.empty()) {
    std::size_t bi = 0;
    std::size_t bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      for (std::size_t j = 0; j < rhs.size(); ++j) {
        const double dist = std::abs(lhs[i] - rhs[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > threshold) return false;
    lhs.erase(lhs.begin() + static_cast<std::ptrdiff_t>(bi));
    rhs.erase(rhs.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return true;
}

}  // namespace qil
