#pragma once

#include "qil/matrix.hpp"

namespace qil {

/// Turns raw residual norms into accept/reject decisions.
///
/// scale(T, m, n) is the size of the summands of the defect operator,
/// max(1, sum_k C(m,k) |T^{n+k}|^2). A defect is accepted as zero when
/// residual <= eps_rel * scale.
struct ToleranceProfile {
  double eps_rel = 1e-9;
  /// Relative singular-value cut used for every rank decision.
  double rank_tol = 1e-10;
  /// A pair counts as rejected for strictness only above hysteresis * eps_rel.
  double hysteresis = 10.0;
  /// Eigenvalue matching threshold is eig_tol * (1 + |T|).
  double eig_tol = 1e-6;

  double scale(const OperatorMatrix& t, int m, int n) const;
  double normalize(double residual, double scale_value) const { return residual / scale_value; }
  bool accept(double residual, double scale_value) const {
    return residual <= eps_rel * scale_value;
  }
  /// Clear rejection: outside the hysteresis band.
  bool clearly_rejects(double normalized) const { return normalized > hysteresis * eps_rel; }
};

}  // namespace qil
