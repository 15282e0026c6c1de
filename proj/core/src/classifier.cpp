#include "qil/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qil {

namespace {

constexpr double kMaxPrincipalAngle = 1e-7;

}  // namespace

DefectReport check_nqmi(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol) {
  if (m < 1) throw std::invalid_argument("check_nqmi: m must be at least 1");
  return beta_qn(t, m, n, tol);
}

bool is_nqmi(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol) {
  return check_nqmi(t, m, n, tol).accepted;
}

bool is_strict(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol) {
  if (m < 1) throw std::invalid_argument("is_strict: m must be at least 1");
  if (!beta_qn(t, m, n, tol).accepted) return false;
  return tol.clearly_rejects(beta_qn(t, m - 1, n, tol).normalized);
}

bool QuasiProfile::accepted(int m, int n, const ToleranceProfile& tol) const {
  return residual_table.at(static_cast<std::size_t>(m - 1)).at(static_cast<std::size_t>(n)) <=
         tol.eps_rel;
}

QuasiProfile minimal_profile(const OperatorMatrix& t, int m_max, int n_max,
                             const ToleranceProfile& tol) {
  if (m_max < 1 || n_max < 0) throw std::invalid_argument("minimal_profile: bad bounds");
  QuasiProfile p;
  p.m_max = m_max;
  p.n_max = n_max;
  p.residual_table.assign(static_cast<std::size_t>(m_max),
                          std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));
  // Row m = 0 is only needed for strictness at m = 1.
  std::vector<double> row0(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    row0[static_cast<std::size_t>(n)] = beta_qn(t, 0, n, tol).normalized;
    for (int m = 1; m <= m_max; ++m) {
      p.residual_table[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n)] =
          beta_qn(t, m, n, tol).normalized;
    }
  }

  p.staircase.assign(static_cast<std::size_t>(n_max) + 1, std::nullopt);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 1; m <= m_max; ++m) {
      if (!p.accepted(m, n, tol)) continue;
      if (!p.staircase[static_cast<std::size_t>(n)]) p.staircase[static_cast<std::size_t>(n)] = m;
      if (m < m_max && !p.accepted(m + 1, n, tol)) p.monotonicity_violations.emplace_back(m, n);
      if (n < n_max && !p.accepted(m, n + 1, tol)) p.monotonicity_violations.emplace_back(m, n);
    }
    if (const auto mn = p.staircase[static_cast<std::size_t>(n)]) {
      const double below = *mn == 1 ? row0[static_cast<std::size_t>(n)]
                                    : p.residual_table[static_cast<std::size_t>(*mn - 2)]
                                                      [static_cast<std::size_t>(n)];
      if (tol.clearly_rejects(below)) p.strict_pairs.emplace_back(*mn, n);
    }
  }
  return p;
}

double kernel_principal_angle(const OperatorMatrix& t, const ToleranceProfile& tol) {
  const RangeSplit r1 = range_basis(t.dense(), tol.rank_tol);
  const RangeSplit r2 = range_basis((t * t).dense(), tol.rank_tol);
  if (r1.rank != r2.rank) return std::numeric_limits<double>::infinity();
  if (r1.complement.cols() == 0) return 0.0;
  // sin of the largest angle = |(I - V2 V2*) V1|.
  const DenseMatrix& v1 = r1.complement;
  const DenseMatrix& v2 = r2.complement;
  const DenseMatrix residual = v1 - v2 * (v2.adjoint() * v1);
  return std::asin(std::min(1.0, op_norm(residual)));
}

bool kernel_condition(const OperatorMatrix& t, const ToleranceProfile& tol) {
  return kernel_principal_angle(t, tol) < kMaxPrincipalAngle;
}

bool power_bounded(const OperatorMatrix& t, const ToleranceProfile& tol) {
  if (t.empty()) return true;
  const std::vector<Complex> ev = spectrum(t);
  const double radius_tol = tol.eig_tol * (1.0 + op_norm(t));
  double radius = 0.0;
  for (const auto& l : ev) radius = std::max(radius, std::abs(l));
  if (radius < 1.0 - radius_tol) return true;
  if (radius > 1.0 + radius_tol) return false;

  // Cluster the peripheral eigenvalues and compare multiplicities.
  std::vector<bool> used(ev.size(), false);
  const auto d = static_cast<Eigen::Index>(t.dim());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i] || std::abs(ev[i]) < 1.0 - radius_tol) continue;
    Complex centre = 0.0;
    std::size_t algebraic = 0;
    for (std::size_t j = i; j < ev.size(); ++j) {
      if (!used[j] && std::abs(ev[j] - ev[i]) <= radius_tol) {
        used[j] = true;
        centre += ev[j];
        ++algebraic;
      }
    }
    centre /= static_cast<double>(algebraic);
    DenseMatrix shifted = t.dense() - centre * DenseMatrix::Identity(d, d);
    // Scale the rank cut by |T| so the shift's own size does not matter.
    const auto sv = singular_values(shifted);
    const double cut = tol.rank_tol * std::max(1.0, op_norm(t));
    const auto rank = static_cast<std::size_t>(
        std::count_if(sv.begin(), sv.end(), [cut](double v) { return v > cut; }));
    const std::size_t geometric = t.dim() - rank;
    if (geometric != algebraic) return false;
  }
  return true;
}

IndependenceResult beta_independence(const OperatorMatrix& t, int m, int n,
                                     const ToleranceProfile& tol) {
  if (m < 1) throw std::invalid_argument("beta_independence: m must be at least 1");
  const auto d = static_cast<Eigen::Index>(t.dim());
  DenseMatrix stack = DenseMatrix::Zero(d * d, m);
  for (int k = 0; k < m; ++k) {
    const DefectReport r = beta_qn(t, k, n, tol);
    // Defects that are zero at tolerance contribute a zero column; the rest
    // are normalized so the rank decision is scale free.
    if (r.accepted || r.residual == 0.0) continue;
    const DenseMatrix& b = r.defect.dense();
    const double fro = b.norm();
    stack.col(k) = Eigen::Map<const Vector>(b.data(), d * d) / fro;
  }
  IndependenceResult out;
  out.singular_values = singular_values(stack);
  const double top = out.singular_values.empty() ? 0.0 : out.singular_values.front();
  if (top > 0.0) {
    const double cut = tol.hysteresis * tol.eps_rel * top;
    out.rank = static_cast<std::size_t>(std::count_if(out.singular_values.begin(),
                                                      out.singular_values.end(),
                                                      [cut](double v) { return v > cut; }));
  }
  out.independent = out.rank == static_cast<std::size_t>(m);
  return out;
}

}  // namespace qil
