#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qil/matrix.hpp"
#include "qil/tolerance.hpp"

namespace qil {

/// T1 is not invertible, so the similarity split does not apply.
class SingularBlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// T = [[T1, T2], [0, T3]] on cl(R(T^n)) (+) N(T*^n).
///
/// U and V come from one SVD of T^n, so [U V] is unitary by construction.
/// r = 0 or r = d are legal and give empty blocks.
struct BlockDecomposition {
  int n = 0;
  OperatorMatrix t;      // the decomposed operator
  DenseMatrix u;         // d x r, orthonormal basis of cl(R(T^n))
  DenseMatrix v;         // d x (d - r), orthonormal basis of N(T*^n)
  OperatorMatrix t1;     // U* T U
  DenseMatrix t2;        // U* T V
  OperatorMatrix t3;     // V* T V
  double lower_residual = 0.0;  // |V* T U|

  std::size_t dim() const noexcept { return t.dim(); }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(u.cols()); }
  /// [U V]
  DenseMatrix basis() const;
  /// [U V]* T [U V]
  DenseMatrix block_form() const;
};

BlockDecomposition block_decompose(const OperatorMatrix& t, int n, const ToleranceProfile& tol = {});

struct BlockFormCheck {
  bool t1_m_isometric = false;
  bool t3_nilpotent_n = false;
  double t1_normalized = 0.0;  // |beta_m(T1)| / scale, 0 when r = 0
  double t3_normalized = 0.0;  // |T3^n| / max(1, |T3|^n), 0 when r = d
  bool holds() const noexcept { return t1_m_isometric && t3_nilpotent_n; }
};

/// Checks the two block conditions: T1 is an m-isometry and T3^n = 0.
///
/// `window`, when given, is a d x w matrix whose columns span the vectors the
/// T1 condition is restricted to (used for truncations of infinite
/// operators, where only an interior window is meaningful).
BlockFormCheck verify_block_form(const BlockDecomposition& d, int m, const ToleranceProfile& tol = {},
                                 const std::optional<DenseMatrix>& window = std::nullopt);

struct SimilaritySplit {
  BlockDecomposition decomposition;
  DenseMatrix coupling;     // A with T1 A - A T3 = T2
  DenseMatrix x;            // [[I, A], [0, I]] in the decomposition basis
  DenseMatrix x_inverse;    // [[I, -A], [0, I]]
  DenseMatrix block_diag;   // diag(T1, T3)
  double residual = 0.0;    // |X (Q* T Q) X^{-1} - diag(T1, T3)|
  double condition = 1.0;   // cond_2(X)
};

/// Removes the T2 coupling by a Sylvester solve. Throws SingularBlockError
/// when T1 is singular, and propagates SpectraOverlapError.
SimilaritySplit similarity_split(const OperatorMatrix& t, int n, const ToleranceProfile& tol = {});

struct SpectralReport {
  std::vector<Complex> sigma_t;
  std::vector<Complex> sigma_t1;
  bool union_check = false;         // sigma(T) = sigma(T1) + {0}^(d-r)
  double t1_min_singular = 0.0;     // 0 when r = 0
  bool t1_unimodular_check = false; // all |lambda(T1)| near 1 (vacuous when r = 0)
};

SpectralReport spectral_report(const OperatorMatrix& t, int n, const ToleranceProfile& tol = {});

}  // namespace qil
