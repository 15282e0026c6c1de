#pragma once

// Seeded sweeps shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "qil/classifier.hpp"
#include "qil/decomposition.hpp"
#include "qil/random_instances.hpp"

namespace sweep {

struct BlockFormAgreement {
  int total = 0;
  int decided = 0;
  int agreed = 0;
  int in_band = 0;
  double band_fraction() const { return total == 0 ? 0.0 : static_cast<double>(in_band) / total; }
};

inline bool in_band(double normalized, const qil::ToleranceProfile& tol) {
  return normalized > tol.eps_rel && normalized <= tol.hysteresis * tol.eps_rel;
}

/// is_nqmi(T, m, n) against the two block conditions on a mix of accepted
/// instances, instances one step below their lattice point, perturbed
/// instances and generic matrices.
inline BlockFormAgreement block_form_agreement(int count, std::uint64_t seed,
                                               const qil::ToleranceProfile& tol = {}) {
  qil::InstanceGenerator gen(seed);
  BlockFormAgreement out;
  for (int i = 0; i < count; ++i) {
    qil::OperatorMatrix t;
    int m = 1;
    int n = 0;
    switch (i % 4) {
      case 0: {
        const qil::QuasiInstance q = gen.quasi_instance_upto(6, 3);
        t = q.t;
        m = q.m;
        n = q.n;
        break;
      }
      case 1: {
        const qil::QuasiInstance q = gen.quasi_instance_upto(6, 3);
        t = q.t;
        m = q.m > 1 ? q.m - 1 : q.m;
        n = q.m > 1 ? q.n : q.n - 1;
        if (n < 0) n = 0;
        break;
      }
      case 2: {
        const qil::QuasiInstance q = gen.quasi_instance_upto(6, 3);
        t = q.t + qil::OperatorMatrix(gen.gaussian(q.t.dim(), q.t.dim(), 1e-3));
        m = q.m;
        n = q.n;
        break;
      }
      default: {
        t = gen.generic(static_cast<std::size_t>(gen.uniform_int(1, 6)));
        m = gen.uniform_int(1, 4);
        n = gen.uniform_int(0, 3);
        break;
      }
    }
    ++out.total;
    const qil::DefectReport direct = qil::check_nqmi(t, m, n, tol);
    const qil::BlockFormCheck block = qil::verify_block_form(qil::block_decompose(t, n, tol), m, tol);
    if (in_band(direct.normalized, tol) || in_band(block.t1_normalized, tol) ||
        in_band(block.t3_normalized, tol)) {
      ++out.in_band;
      continue;
    }
    ++out.decided;
    if (direct.accepted == block.holds()) ++out.agreed;
  }
  return out;
}

struct SplitRoundTrip {
  int total = 0;
  int within_bound = 0;
  double worst_ratio = 0.0;  // residual / (1e-8 (1 + |T|) cond(X))
};

/// T = W X^{-1} diag(U, N) X W* with X = [[I, A], [0, I]]; rebuilding T from
/// the split must agree up to 1e-8 (1 + |T|) cond(X).
inline SplitRoundTrip similarity_round_trip(int count, std::uint64_t seed, const qil::ToleranceProfile& tol = {}) {
  qil::InstanceGenerator gen(seed);
  SplitRoundTrip out;
  for (int i = 0; i < count; ++i) {
    const auto r = static_cast<Eigen::Index>(gen.uniform_int(1, 4));
    const auto s = static_cast<Eigen::Index>(gen.uniform_int(1, 3));
    const Eigen::Index d = r + s;
    qil::DenseMatrix inner = qil::DenseMatrix::Zero(d, d);
    inner.topLeftCorner(r, r) = gen.random_unitary(static_cast<std::size_t>(r)).dense();
    for (Eigen::Index j = 0; j + 1 < s; ++j) inner(r + j, r + j + 1) = 1.0;
    qil::DenseMatrix x = qil::DenseMatrix::Identity(d, d);
    x.topRightCorner(r, s) = gen.gaussian(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    qil::DenseMatrix x_inv = qil::DenseMatrix::Identity(d, d);
    x_inv.topRightCorner(r, s) = -x.topRightCorner(r, s);
    const qil::OperatorMatrix w = gen.random_unitary(static_cast<std::size_t>(d));
    const qil::OperatorMatrix t = w * qil::OperatorMatrix(x_inv * inner * x) * qil::adjoint(w);

    const qil::SimilaritySplit split = qil::similarity_split(t, static_cast<int>(s), tol);
    const qil::DenseMatrix q = split.decomposition.basis();
    const qil::DenseMatrix rebuilt = q * split.x_inverse * split.block_diag * split.x * q.adjoint();
    const double residual = qil::op_norm(qil::DenseMatrix(rebuilt - t.dense()));
    const double bound = 1e-8 * (1.0 + qil::op_norm(t)) * split.condition;
    ++out.total;
    if (residual <= bound) ++out.within_bound;
    out.worst_ratio = std::max(out.worst_ratio, residual / bound);
  }
  return out;
}

}  // namespace sweep
