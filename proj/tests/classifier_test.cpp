#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "bridge.hpp"
#include "qil/classifier.hpp"
#include "qil/constructions.hpp"
#include "qil/random_instances.hpp"

using namespace qil;

namespace {

const OperatorMatrix kJordan = OperatorMatrix::from_rows({{1, 1}, {0, 1}});
const OperatorMatrix kNilpotent = OperatorMatrix::from_rows({{0, 1}, {0, 0}});
const OperatorMatrix kPairS = OperatorMatrix::from_rows({{2, 1}, {-1, 0}});

using Staircase = std::vector<std::optional<int>>;

OperatorMatrix direct_sum(const OperatorMatrix& a, const OperatorMatrix& b) {
  const auto p = static_cast<Eigen::Index>(a.dim());
  const auto q = static_cast<Eigen::Index>(b.dim());
  DenseMatrix out = DenseMatrix::Zero(p + q, p + q);
  out.topLeftCorner(p, p) = a.dense();
  out.bottomRightCorner(q, q) = b.dense();
  return OperatorMatrix(out);
}

OperatorMatrix conjugate(const OperatorMatrix& t, const OperatorMatrix& w) { return w * t * adjoint(w); }

}  // namespace

TEST(CheckNqmi, ReferenceExamples) {
  EXPECT_TRUE(is_nqmi(kJordan, 3, 1));
  EXPECT_FALSE(is_nqmi(kJordan, 2, 1));
  EXPECT_TRUE(is_nqmi(kPairS, 3, 2));
  const DefectReport r = check_nqmi(kJordan, 3, 1);
  EXPECT_TRUE(r.accepted);
  EXPECT_LE(r.normalized, 1e-12);
}

TEST(CheckNqmi, ResidualMatchesOracleNorm) {
  InstanceGenerator gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const OperatorMatrix t = gen.generic(3);
    const DefectReport r = check_nqmi(t, 2, 1);
    EXPECT_NEAR(r.residual, oracle::op_norm(oracle::beta_qn(to_oracle(t), 2, 1)), 1e-9 * (1.0 + r.residual));
  }
}

TEST(MinimalProfile, NilpotentStaircase) {
  const QuasiProfile p = minimal_profile(kNilpotent, 5, 3);
  EXPECT_EQ(p.staircase, (Staircase{std::nullopt, std::nullopt, 1, 1}));
  ASSERT_EQ(p.residual_table.size(), 5u);
  ASSERT_EQ(p.residual_table[0].size(), 4u);
  // beta_{m,1}(J) = (-1)^m diag(0, 1): residual exactly 1 for every m.
  for (int m = 1; m <= 5; ++m) EXPECT_NEAR(p.residual_table[static_cast<std::size_t>(m - 1)][1], 1.0, 1e-15);
  EXPECT_TRUE(p.monotonicity_violations.empty());
}

TEST(MinimalProfile, UnitaryIsOneEverywhere) {
  InstanceGenerator gen(43);
  const QuasiProfile p = minimal_profile(gen.random_unitary(4), 4, 3);
  EXPECT_EQ(p.staircase, (Staircase{1, 1, 1, 1}));
}

TEST(MinimalProfile, JordanBlockIsThreeEverywhere) {
  const QuasiProfile p = minimal_profile(kJordan, 5, 2);
  EXPECT_EQ(p.staircase, (Staircase{3, 3, 3}));
  for (int n = 0; n <= 2; ++n) {
    EXPECT_NE(std::find(p.strict_pairs.begin(), p.strict_pairs.end(), std::make_pair(3, n)), p.strict_pairs.end());
  }
}

TEST(MinimalProfile, CatalogStaircases) {
  for (const auto& id : catalog_ids()) {
    const CatalogEntry e = catalog_example(id);
    if (!e.expected_staircase) continue;
    const QuasiProfile p = minimal_profile(e.matrices.front(), kCatalogMMax, kCatalogNMax);
    EXPECT_EQ(p.staircase, *e.expected_staircase) << id;
  }
}

TEST(IsStrict, Examples) {
  EXPECT_TRUE(is_strict(kJordan, 3, 1));
  EXPECT_FALSE(is_strict(kJordan, 4, 1));
  InstanceGenerator gen(47);
  const OperatorMatrix u = gen.random_unitary(3);
  EXPECT_FALSE(is_strict(u, 2, 0));
  EXPECT_TRUE(is_strict(u, 1, 0));
  // m = 1 strictness means T^n != 0.
  EXPECT_FALSE(is_strict(kNilpotent, 1, 2));
}

TEST(IsStrict, SqrtRatioShiftOnInterior) {
  // Interior reading: Delta_{1,1}(T, e_1) != 0 and Delta_{2,1} vanishes on the window.
  const ShiftSpec spec = shift_sqrt_ratio_spec(2.0, 12);
  const OperatorMatrix t = truncated_weighted_shift(spec);
  for (const std::size_t j : spec.interior_window()) {
    Vector e = Vector::Zero(12);
    e(static_cast<Eigen::Index>(j)) = 1.0;
    EXPECT_NEAR(delta(t, 2, 1, e), 0.0, 1e-10) << j;
  }
  Vector e1 = Vector::Zero(12);
  e1(0) = 1.0;
  EXPECT_GT(std::abs(delta(t, 1, 1, e1)), 1.0);
}

TEST(KernelCondition, Examples) {
  EXPECT_FALSE(kernel_condition(kNilpotent));
  EXPECT_TRUE(kernel_condition(kJordan));
  EXPECT_TRUE(kernel_condition(OperatorMatrix::diagonal({0.0, 2.0, Complex(0, 1)})));
  InstanceGenerator gen(53);
  const OperatorMatrix normal = conjugate(OperatorMatrix::diagonal({0.0, 0.0, 0.5, 3.0}), gen.random_unitary(4));
  EXPECT_TRUE(kernel_condition(normal));
  EXPECT_LT(kernel_principal_angle(normal), 1e-7);
  EXPECT_EQ(kernel_principal_angle(kNilpotent), std::numeric_limits<double>::infinity());
}

TEST(PowerBounded, Examples) {
  InstanceGenerator gen(59);
  EXPECT_TRUE(power_bounded(gen.random_unitary(3)));
  EXPECT_FALSE(power_bounded(kJordan));
  EXPECT_TRUE(power_bounded(OperatorMatrix::diagonal({0.5, 1.0})));
  EXPECT_TRUE(power_bounded(kNilpotent));
  EXPECT_FALSE(power_bounded(OperatorMatrix::diagonal({1.01, 0.2})));
}

TEST(BetaIndependence, Examples) {
  const IndependenceResult j = beta_independence(kJordan, 3, 1);
  EXPECT_TRUE(j.independent);
  EXPECT_EQ(j.rank, 3u);
  InstanceGenerator gen(61);
  const IndependenceResult u = beta_independence(gen.random_unitary(3), 2, 1);
  EXPECT_FALSE(u.independent);
  EXPECT_EQ(u.rank, 1u);
  const IndependenceResult n = beta_independence(kNilpotent, 2, 1);
  EXPECT_FALSE(n.independent);
  EXPECT_EQ(n.rank, 1u);
}

TEST(ClassifierProperty, GeneratedInstancesSitAtTheirLatticePoint) {
  InstanceGenerator gen(67);
  for (int trial = 0; trial < 100; ++trial) {
    const QuasiInstance q = gen.quasi_instance_upto(6, 3);
    EXPECT_TRUE(is_nqmi(q.t, q.m, q.n)) << trial;
    EXPECT_TRUE(is_strict(q.t, q.m, q.n)) << trial;
    if (q.n > 0) EXPECT_FALSE(is_nqmi(q.t, q.m, q.n - 1)) << trial;
  }
}

TEST(ClassifierProperty, MonotonicityInBothIndices) {
  InstanceGenerator gen(71);
  for (int trial = 0; trial < 100; ++trial) {
    const QuasiInstance q = gen.quasi_instance_upto(6, 3);
    ASSERT_TRUE(is_nqmi(q.t, q.m, q.n));
    EXPECT_TRUE(is_nqmi(q.t, q.m + 1, q.n)) << trial;
    EXPECT_TRUE(is_nqmi(q.t, q.m, q.n + 1)) << trial;
    const QuasiProfile p = minimal_profile(q.t, 5, 3);
    EXPECT_TRUE(p.monotonicity_violations.empty()) << trial;
    for (std::size_t n = 1; n < p.staircase.size(); ++n) {
      if (p.staircase[n - 1]) {
        ASSERT_TRUE(p.staircase[n].has_value());
        EXPECT_LE(*p.staircase[n], *p.staircase[n - 1]);
      }
    }
  }
}

TEST(ClassifierProperty, KernelConditionLowersQuasiOrder) {
  // Normal-plus-isometric: Jordan-type isometric part (+) a normal part with
  // eigenvalues in {0} and the unit circle, then rotated.
  InstanceGenerator gen(73);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = gen.uniform_int(0, 1) == 0 ? 1 : 3;
    const Complex lambda = gen.unimodular();
    const OperatorMatrix a = m == 1 ? OperatorMatrix::diagonal({lambda})
                                    : OperatorMatrix::from_rows({{lambda, 0.7}, {0, lambda}});
    const OperatorMatrix normal = OperatorMatrix::diagonal({0.0, gen.unimodular(), 0.0});
    const OperatorMatrix t = conjugate(direct_sum(a, normal), gen.random_unitary(a.dim() + 3));
    ASSERT_TRUE(kernel_condition(t));
    const int n = gen.uniform_int(2, 3);
    ASSERT_TRUE(is_nqmi(t, m, n));
    EXPECT_TRUE(is_nqmi(t, m, 1)) << trial;
  }
  EXPECT_FALSE(kernel_condition(kNilpotent));
  EXPECT_FALSE(is_nqmi(kNilpotent, 1, 1));
}

TEST(ClassifierProperty, PowerBoundedLowersToQuasiIsometry) {
  InstanceGenerator gen(79);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nil = static_cast<std::size_t>(gen.uniform_int(1, 3));
    const OperatorMatrix u = gen.random_unitary(static_cast<std::size_t>(gen.uniform_int(1, 3)));
    const OperatorMatrix t = conjugate(direct_sum(u, nilpotent_jordan(nil, static_cast<int>(nil))),
                                       gen.random_unitary(u.dim() + nil));
    ASSERT_TRUE(power_bounded(t));
    const int n = static_cast<int>(nil);
    const int m = gen.uniform_int(1, 4);
    ASSERT_TRUE(is_nqmi(t, m, n));
    EXPECT_TRUE(is_nqmi(t, 1, n)) << trial;
  }
}

TEST(ClassifierProperty, StrictnessCertifiesIndependence) {
  const std::vector<std::pair<OperatorMatrix, std::pair<int, int>>> strict = {
      {kJordan, {3, 1}}, {kJordan, {3, 0}}, {kPairS, {3, 2}}};
  for (const auto& [t, mn] : strict) {
    ASSERT_TRUE(is_strict(t, mn.first, mn.second));
    EXPECT_TRUE(beta_independence(t, mn.first, mn.second).independent);
  }
  InstanceGenerator gen(83);
  for (int trial = 0; trial < 30; ++trial) {
    const QuasiInstance q = gen.quasi_instance_upto(6, 3);
    if (!is_strict(q.t, q.m, q.n)) continue;
    EXPECT_TRUE(beta_independence(q.t, q.m, q.n).independent) << trial;
  }
}
