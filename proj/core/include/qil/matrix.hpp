#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qil {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised when an iterative dense kernel (eigenvalues, Schur form) does not converge.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by sylvester_solve when the two spectra are closer than the
/// separation threshold, i.e. the solution is not unique (or not stable).
class SpectraOverlapError : public std::runtime_error {
 public:
  SpectraOverlapError(double separation, double threshold);
  double separation() const noexcept { return separation_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double separation_;
  double threshold_;
};

/// Dense square complex matrix standing for a bounded operator on C^dim.
///
/// Values are immutable: every operation returns a fresh matrix. Construction
/// rejects non-square or non-finite input. A 0x0 matrix is allowed and is
/// used for the empty blocks of degenerate decompositions.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(DenseMatrix entries);

  static OperatorMatrix identity(std::size_t dim);
  static OperatorMatrix zero(std::size_t dim);
  static OperatorMatrix diagonal(const std::vector<Complex>& diag);
  /// Row-major nested list, e.g. {{0, 1}, {0, 0}}.
  static OperatorMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  bool empty() const noexcept { return entries_.size() == 0; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const DenseMatrix& dense() const noexcept { return entries_; }

  Vector apply(const Vector& x) const;

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

 private:
  DenseMatrix entries_;
};

OperatorMatrix adjoint(const OperatorMatrix& a);

/// a^k by repeated squaring; a^0 = I.
OperatorMatrix matpow(const OperatorMatrix& a, int k);

/// Largest singular value. Zero for the empty matrix.
double op_norm(const OperatorMatrix& a);
double op_norm(const DenseMatrix& a);

/// Singular values in descending order.
std::vector<double> singular_values(const DenseMatrix& a);

/// Number of singular values above rank_tol * sigma_max.
std::size_t numerical_rank(const DenseMatrix& a, double rank_tol);

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// All dim eigenvalues with algebraic multiplicity. Throws NumericalFailure.
std::vector<Complex> spectrum(const OperatorMatrix& a);

/// Orthonormal bases for the column space of `a` and for its orthogonal
/// complement N(a*). Both come from one full SVD, so [basis complement] is
/// unitary by construction.
struct RangeSplit {
  DenseMatrix basis;       // dim x rank
  DenseMatrix complement;  // dim x (dim - rank)
  std::size_t rank = 0;
};

RangeSplit range_basis(const DenseMatrix& a, double rank_tol = 1e-10);

/// Default separation threshold for sylvester_solve: 1e-8 * (|A| + |B|).
double sylvester_separation_threshold(const OperatorMatrix& a, const OperatorMatrix& b);

/// Solves A X - X B = C (C is rows(A) x rows(B)) by Bartels-Stewart on the
/// complex Schur forms of A and B. Throws SpectraOverlapError when
/// min |lambda_A - lambda_B| is below `separation_threshold` (negative means
/// the default threshold).
DenseMatrix sylvester_solve(const OperatorMatrix& a, const OperatorMatrix& b, const DenseMatrix& c,
                            double separation_threshold = -1.0);

/// Greedy nearest-pair multiset matching; true when every element of `lhs`
/// pairs with a distinct element of `rhs` within `threshold`.
bool spectra_match(std::vector<Complex> lhs, std::vector<Complex> rhs, double threshold);

}  // namespace qil
