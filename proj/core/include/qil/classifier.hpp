#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qil/defect.hpp"
#include "qil/matrix.hpp"
#include "qil/tolerance.hpp"

namespace qil {

/// Membership test for the n-quasi-m-isometries; report.accepted is the verdict.
DefectReport check_nqmi(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol = {});
bool is_nqmi(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol = {});

/// Accepted at (m, n) and clearly rejected (outside the hysteresis band) at
/// (m-1, n). For m = 1 the (0, n) defect is T*^n T^n, so strictness at m = 1
/// means T^n != 0.
bool is_strict(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol = {});

/// The (m, n) lattice of a matrix for 1 <= m <= m_max, 0 <= n <= n_max.
struct QuasiProfile {
  int m_max = 0;
  int n_max = 0;
  /// staircase[n] = minimal accepted m, or nullopt when none up to m_max.
  std::vector<std::optional<int>> staircase;
  std::vector<std::pair<int, int>> strict_pairs;  // (m, n)
  /// residual_table[m - 1][n] = normalized residual of beta_{m,n}(T).
  std::vector<std::vector<double>> residual_table;
  /// Accepted pairs that violate monotonicity in m or n (should stay empty).
  std::vector<std::pair<int, int>> monotonicity_violations;

  bool accepted(int m, int n, const ToleranceProfile& tol) const;
};

QuasiProfile minimal_profile(const OperatorMatrix& t, int m_max, int n_max,
                             const ToleranceProfile& tol = {});

/// N(T*) == N(T*^2), compared by dimension and then by the largest
/// principal angle between the two null spaces.
bool kernel_condition(const OperatorMatrix& t, const ToleranceProfile& tol = {});

/// Largest principal angle between the null spaces of T* and T*^2 (radians);
/// +infinity when their dimensions differ.
double kernel_principal_angle(const OperatorMatrix& t, const ToleranceProfile& tol = {});

/// Finite-dimensional power-boundedness: spectral radius below one, or at
/// most one with every peripheral eigenvalue semisimple.
bool power_bounded(const OperatorMatrix& t, const ToleranceProfile& tol = {});

struct IndependenceResult {
  bool independent = false;
  std::size_t rank = 0;
  std::vector<double> singular_values;
};

/// Rank of {beta_{k,n}(T) : k = 0..m-1} after vectorization.
IndependenceResult beta_independence(const OperatorMatrix& t, int m, int n,
                                     const ToleranceProfile& tol = {});

}  // namespace qil
