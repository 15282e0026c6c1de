#include "qil/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qil/defect.hpp"

namespace qil {

DenseMatrix BlockDecomposition::basis() const {
  const auto d = static_cast<Eigen::Index>(dim());
  DenseMatrix q(d, d);
  q << u, v;
  return q;
}

DenseMatrix BlockDecomposition::block_form() const {
  const DenseMatrix q = basis();
  return q.adjoint() * t.dense() * q;
}

BlockDecomposition block_decompose(const OperatorMatrix& t, int n, const ToleranceProfile& tol) {
  if (n < 0) throw std::invalid_argument("block_decompose: negative n");
  const RangeSplit split = range_basis(matpow(t, n).dense(), tol.rank_tol);
  BlockDecomposition d;
  d.n = n;
  d.t = t;
  d.u = split.basis;
  d.v = split.complement;
  const DenseMatrix tu = t.dense() * d.u;
  const DenseMatrix tv = t.dense() * d.v;
  d.t1 = OperatorMatrix(d.u.adjoint() * tu);
  d.t2 = d.u.adjoint() * tv;
  d.t3 = OperatorMatrix(d.v.adjoint() * tv);
  d.lower_residual = op_norm(DenseMatrix(d.v.adjoint() * tu));
  return d;
}

BlockFormCheck verify_block_form(const BlockDecomposition& d, int m, const ToleranceProfile& tol,
                                 const std::optional<DenseMatrix>& window) {
  if (m < 1) throw std::invalid_argument("verify_block_form: m must be at least 1");
  BlockFormCheck check;

  if (d.rank() == 0) {
    check.t1_m_isometric = true;
  } else {
    const DenseMatrix b = beta(d.t1, m).dense();
    double residual = 0.0;
    if (window) {
      if (window->rows() != static_cast<Eigen::Index>(d.dim())) {
        throw std::invalid_argument("verify_block_form: window has wrong row count");
      }
      const RangeSplit w = range_basis(d.u.adjoint() * (*window), tol.rank_tol);
      residual = w.rank == 0 ? 0.0 : op_norm(DenseMatrix(w.basis.adjoint() * b * w.basis));
    } else {
      residual = op_norm(b);
    }
    const double scale = tol.scale(d.t1, m, 0);
    check.t1_normalized = tol.normalize(residual, scale);
    check.t1_m_isometric = tol.accept(residual, scale);
  }

  if (d.rank() == d.dim()) {
    check.t3_nilpotent_n = true;
  } else {
    const double power_norm = op_norm(matpow(d.t3, d.n));
    const double scale = std::max(1.0, std::pow(op_norm(d.t3), d.n));
    check.t3_normalized = tol.normalize(power_norm, scale);
    check.t3_nilpotent_n = tol.accept(power_norm, scale);
  }
  return check;
}

SimilaritySplit similarity_split(const OperatorMatrix& t, int n, const ToleranceProfile& tol) {
  SimilaritySplit s;
  s.decomposition = block_decompose(t, n, tol);
  const BlockDecomposition& d = s.decomposition;
  const auto r = static_cast<Eigen::Index>(d.rank());
  const auto dd = static_cast<Eigen::Index>(d.dim());

  if (r > 0) {
    const auto sv = singular_values(d.t1.dense());
    const double cut = tol.rank_tol * std::max(1.0, op_norm(t));
    if (sv.back() <= cut) {
      throw SingularBlockError("similarity_split: T1 block is singular (min singular value " +
                               std::to_string(sv.back()) + ")");
    }
  }

  s.coupling = sylvester_solve(d.t1, d.t3, d.t2);
  s.x = DenseMatrix::Identity(dd, dd);
  s.x_inverse = DenseMatrix::Identity(dd, dd);
  s.x.topRightCorner(r, dd - r) = s.coupling;
  s.x_inverse.topRightCorner(r, dd - r) = -s.coupling;

  s.block_diag = DenseMatrix::Zero(dd, dd);
  s.block_diag.topLeftCorner(r, r) = d.t1.dense();
  s.block_diag.bottomRightCorner(dd - r, dd - r) = d.t3.dense();

  const DenseMatrix rotated = d.block_form();
  s.residual = op_norm(DenseMatrix(s.x * rotated * s.x_inverse - s.block_diag));
  const auto sv = singular_values(s.x);
  s.condition = sv.front() / sv.back();
  return s;
}

SpectralReport spectral_report(const OperatorMatrix& t, int n, const ToleranceProfile& tol) {
  const BlockDecomposition d = block_decompose(t, n, tol);
  SpectralReport rep;
  rep.sigma_t = spectrum(t);
  rep.sigma_t1 = spectrum(d.t1);
  const double threshold = tol.eig_tol * (1.0 + op_norm(t));

  // A zero eigenvalue of multiplicity k moves by about (eps |T|)^(1/k), so the
  // zero cluster gets that radius instead of the fixed threshold.
  const auto dim = static_cast<double>(d.dim());
  const double unit = 16.0 * dim * std::numeric_limits<double>::epsilon() * std::max(1.0, op_norm(t));
  const double loose = std::pow(unit, 1.0 / std::max(1.0, dim));
  std::vector<Complex> nonzero_t1;
  for (const Complex& l : rep.sigma_t1) {
    if (std::abs(l) > std::max(threshold, loose)) nonzero_t1.push_back(l);
  }
  const std::size_t cluster = d.dim() - nonzero_t1.size();
  const double zero_radius =
      cluster == 0 ? threshold : std::max(threshold, std::pow(unit, 1.0 / static_cast<double>(cluster)));
  std::vector<Complex> nonzero_t;
  for (const Complex& l : rep.sigma_t) {
    if (std::abs(l) > zero_radius) nonzero_t.push_back(l);
  }
  rep.union_check = nonzero_t.size() == nonzero_t1.size() && spectra_match(nonzero_t, nonzero_t1, threshold);

  if (d.rank() == 0) {
    rep.t1_min_singular = 0.0;
    rep.t1_unimodular_check = true;
  } else {
    rep.t1_min_singular = singular_values(d.t1.dense()).back();
    rep.t1_unimodular_check =
        std::all_of(rep.sigma_t1.begin(), rep.sigma_t1.end(),
                    [threshold](Complex l) { return std::abs(std::abs(l) - 1.0) <= threshold; });
  }
  return rep;
}

}  // namespace qil
