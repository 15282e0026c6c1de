#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bridge.hpp"
#include "qil/classifier.hpp"
#include "qil/constructions.hpp"
#include "qil/random_instances.hpp"
#include "qil/theorems.hpp"

using namespace qil;

namespace {

const OperatorMatrix kJordan = OperatorMatrix::from_rows({{1, 1}, {0, 1}});
const OperatorMatrix kCube = OperatorMatrix::from_rows({{-1, -1}, {3, 2}});

Vector basis_vector(std::size_t dim, std::size_t i) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

std::size_t count_status(const std::vector<TheoremVerdict>& vs, VerdictStatus s) {
  return static_cast<std::size_t>(
      std::count_if(vs.begin(), vs.end(), [s](const TheoremVerdict& v) { return v.status == s; }));
}

}  // namespace

TEST(Helpers, CommutationAndNilpotency) {
  InstanceGenerator gen(201);
  const OperatorMatrix u = gen.random_unitary(2);
  EXPECT_TRUE(doubly_commuting(kron(u, OperatorMatrix::identity(2)), kron(OperatorMatrix::identity(2), kJordan)));
  EXPECT_TRUE(commuting(kJordan, kJordan * kJordan));
  EXPECT_FALSE(doubly_commuting(kJordan, kJordan));  // normal part fails: T T* != T* T
  EXPECT_FALSE(commuting(OperatorMatrix::diagonal({-5.0, -1.0}), OperatorMatrix::from_rows({{0, 1}, {0, 0}})));
  EXPECT_EQ(nilpotency_order(nilpotent_jordan(4, 3)), std::optional<int>(3));
  EXPECT_EQ(nilpotency_order(kJordan), std::nullopt);
  EXPECT_EQ(nilpotency_order(OperatorMatrix(DenseMatrix::Zero(2, 2))), std::optional<int>(1));
  EXPECT_EQ(matrix_digest(kJordan), matrix_digest(OperatorMatrix::from_rows({{1, 1}, {0, 1}})));
  EXPECT_NE(matrix_digest(kJordan), matrix_digest(kCube));
  EXPECT_EQ(matrix_digest(kJordan).size(), 12u);
}

TEST(PowerClosure, Examples) {
  const TheoremVerdict v = verify_power_closure(kJordan, 3, 1, 2);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_LE(v.worst_residual, v.threshold);
  InstanceGenerator gen(203);
  const OperatorMatrix u = gen.random_unitary(3);
  for (int k = 1; k <= 4; ++k) EXPECT_TRUE(verify_power_closure(u, 2, 1, k).passed());
  // T^3 = -I is a quasi-3-isometry while T is not: the converse fails.
  EXPECT_TRUE(verify_power_closure(matpow(kCube, 3), 3, 1, 1).passed());
  const TheoremVerdict converse = verify_power_closure(kCube, 3, 1, 3);
  EXPECT_TRUE(converse.vacuous());
  EXPECT_NE(converse.notes.find("hypothesis fails"), std::string::npos);
  EXPECT_THROW(verify_power_closure(kJordan, 3, 1, 0), std::invalid_argument);
}

TEST(GcdMin, Examples) {
  const TheoremVerdict v = verify_gcd_min(kJordan, 2, 3, 3, 3, 1);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_TRUE(verify_gcd_min(kJordan, 2, 2, 3, 4, 1).passed());
  const TheoremVerdict strict = verify_gcd_min(kJordan, 2, 3, 3, 3, 1, {}, true);
  EXPECT_TRUE(strict.passed()) << strict.notes;
  EXPECT_EQ(strict.theorem_id, "gcd_min_strict");
}

TEST(Product, Examples) {
  InstanceGenerator gen(207);
  const OperatorMatrix u = gen.random_unitary(2);
  const OperatorMatrix i2 = OperatorMatrix::identity(2);
  const TheoremVerdict k = verify_product(kron(kJordan, i2), kron(i2, u), 3, 1, 0, 0);
  EXPECT_TRUE(k.passed()) << k.notes;
  EXPECT_TRUE(verify_product(u, u, 1, 1, 0, 0).passed());

  const CatalogEntry pair = catalog_example("product_pair");
  const TheoremVerdict nc = verify_product(pair.matrices[0], pair.matrices[1], 3, 3, 1, 2);
  EXPECT_TRUE(nc.vacuous());
  EXPECT_NE(nc.notes.find("direct check"), std::string::npos);
  EXPECT_FALSE(is_nqmi(pair.matrices[0] * pair.matrices[1], 5, 2));
}

TEST(NilpotentSum, Examples) {
  const Complex phase = std::polar(1.0, 0.7);
  const OperatorMatrix t = Complex(phase) * OperatorMatrix::identity(2);
  const OperatorMatrix q = nilpotent_jordan(2, 2);
  const TheoremVerdict v = verify_nilpotent_sum(t, q, 1, 0, 2);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_TRUE(is_nqmi(t + q, 3, 2));
  EXPECT_TRUE(is_strict(t + q, 3, 0));
  EXPECT_NE(v.notes.find("2max(n,p)"), std::string::npos);

  const OperatorMatrix zero(DenseMatrix::Zero(2, 2));
  EXPECT_TRUE(verify_nilpotent_sum(kJordan, zero, 3, 1, 1).passed());

  const CatalogEntry e = catalog_example("noncommuting_sum");
  const TheoremVerdict nc = verify_nilpotent_sum(e.matrices[0], e.matrices[1], 3, 1, 2);
  EXPECT_TRUE(nc.vacuous());
  EXPECT_NE(nc.notes.find("direct check"), std::string::npos);
}

TEST(Tensor, Examples) {
  InstanceGenerator gen(211);
  const OperatorMatrix u = gen.random_unitary(2);
  const TheoremVerdict strict = verify_tensor(kJordan, u, 3, 1, 0, 0, {}, true);
  EXPECT_TRUE(strict.passed()) << strict.notes;
  EXPECT_EQ(strict.theorem_id, "tensor_strict");
  EXPECT_TRUE(is_strict(kron(kJordan, u), 3, 0));
  EXPECT_TRUE(verify_tensor(u, gen.random_unitary(3), 1, 1, 0, 0).passed());

  const OperatorMatrix s = truncated_weighted_shift(shift_sqrt_ratio_spec(2.0, 4, 0));
  const TheoremVerdict v = verify_tensor(kJordan, s, 3, 2, 1, 1);
  // The truncated shift is not a quasi-2-isometry as a matrix, so the
  // hypothesis is checked rather than assumed.
  EXPECT_EQ(v.vacuous(), !is_nqmi(s, 2, 1));
}

TEST(StrictScaling, JordanRatioIsFour) {
  const Vector e2 = basis_vector(2, 1);
  EXPECT_DOUBLE_EQ(delta(kJordan, 2, 1, e2), 2.0);
  EXPECT_DOUBLE_EQ(delta(matpow(kJordan, 2), 2, 1, e2), 8.0);
  const TheoremVerdict v = verify_strict_scaling(kJordan, 3, 1, 2, e2);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_LE(v.worst_residual, kScalingTolerance);
  EXPECT_TRUE(verify_strict_scaling(kJordan, 3, 1, 1, e2).passed());
}

TEST(StrictScaling, ShiftRatioIsThree) {
  // Infinite-shift reading on a long truncation: Delta_{1,1}(T^3, e1) = 3 Delta_{1,1}(T, e1).
  const OperatorMatrix t = truncated_weighted_shift(shift_sqrt_ratio_spec(2.0, 16));
  const Vector e1 = basis_vector(16, 0);
  const double base = delta(t, 1, 1, e1);
  EXPECT_NEAR(delta(matpow(t, 3), 1, 1, e1) / base, 3.0, 1e-10);
}

TEST(StrictScaling, NonStrictInputIsVacuous) {
  InstanceGenerator gen(213);
  const TheoremVerdict v = verify_strict_scaling(gen.random_unitary(2), 3, 0, 2, gen.random_vector(2));
  EXPECT_TRUE(v.vacuous());
}

TEST(StrictProduct, UnitaryPair) {
  InstanceGenerator gen(217);
  const OperatorMatrix u = gen.random_unitary(2);
  const OperatorMatrix i2 = OperatorMatrix::identity(2);
  const TheoremVerdict v = verify_strict_product_criterion(kron(u, i2), kron(i2, gen.random_unitary(2)), 1, 1, 1);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_GT(v.worst_residual, v.threshold);
}

TEST(StrictProduct, KronStrictPair) {
  const OperatorMatrix i2 = OperatorMatrix::identity(2);
  const OperatorMatrix t = kron(kJordan, i2);
  const OperatorMatrix s = kron(i2, kJordan);
  const TheoremVerdict v = verify_strict_product_criterion(t, s, 3, 3, 1);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_EQ(v.worst_residual > v.threshold, is_strict(t * s, 5, 1));
}

TEST(StrictProduct, VanishingWMeansNotStrict) {
  // T = X (+) 1, S = 0 (+) 1 with X a strict 3-isometry: S^n kills the range
  // where beta_2(T) lives, so W = 0 and TS = 0 (+) 1 is not strict at m = 3.
  const OperatorMatrix t = OperatorMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  const OperatorMatrix s = OperatorMatrix::diagonal({0.0, 0.0, 1.0});
  EXPECT_TRUE(doubly_commuting(t, s));
  EXPECT_TRUE(is_strict(s, 1, 1));
  const TheoremVerdict v = verify_strict_product_criterion(t, s, 3, 1, 1);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_LE(v.worst_residual, v.threshold);
  EXPECT_FALSE(is_strict(t * s, 3, 1));
}

TEST(Expansion, ProductDiagonal) {
  const OperatorMatrix t = OperatorMatrix::diagonal({2.0, Complex(0, 0.5), 1.0});
  const OperatorMatrix s = OperatorMatrix::diagonal({0.3, 1.5, Complex(1, 1)});
  const TheoremVerdict v = verify_expansion_identities(t, s, 3, ExpansionMode::Product);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_EQ(v.theorem_id, "expansion_product");
  // Closed form on the diagonal: beta_3(TS) = (|ts|^2 - 1)^3.
  const OperatorMatrix b = beta(t * s, 3);
  for (int i = 0; i < 3; ++i) {
    const double ts2 = std::norm(t.dense()(i, i) * s.dense()(i, i));
    EXPECT_NEAR(b.dense()(i, i).real(), std::pow(ts2 - 1.0, 3), 1e-12);
  }
}

TEST(Expansion, SumIdentityPlusJordan) {
  const TheoremVerdict v =
      verify_expansion_identities(OperatorMatrix::identity(2), nilpotent_jordan(2, 2), 2, ExpansionMode::Sum);
  EXPECT_TRUE(v.passed()) << v.notes;
  EXPECT_EQ(v.theorem_id, "expansion_sum");
}

TEST(Expansion, ZeroDegreeIsIdentity) {
  InstanceGenerator gen(219);
  const OperatorMatrix u = gen.random_unitary(2);
  const TheoremVerdict v = verify_expansion_identities(u, u, 0, ExpansionMode::Product);
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.worst_residual, 0.0);
}

TEST(Expansion, NoncommutingPairIsVacuous) {
  const CatalogEntry e = catalog_example("noncommuting_sum");
  EXPECT_TRUE(verify_expansion_identities(e.matrices[0], e.matrices[1], 2, ExpansionMode::Sum).vacuous());
}

TEST(NormLimit, ZeroDirectionGivesZeroDifference) {
  const TheoremVerdict v =
      verify_norm_limit_continuity(kJordan, 3, 1, 8, OperatorMatrix(DenseMatrix::Zero(2, 2)));
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.worst_residual, 0.0);
}

TEST(NormLimit, LipschitzBoundOnExamples) {
  EXPECT_TRUE(verify_norm_limit_continuity(kJordan, 3, 1, 8).passed());
  InstanceGenerator gen(223);
  const OperatorMatrix u = gen.random_unitary(3);
  // m = n = 1, M = 2: L = 2 (1 * 2^1 + 2 * 2^3).
  EXPECT_NEAR(norm_limit_lipschitz(u, 1, 1), 36.0, 1e-9);
  const OperatorMatrix e(gen.gaussian(3, 3));
  const OperatorMatrix step = Complex(1e-4 / op_norm(e)) * e;
  const double diff = op_norm(beta_qn(u + step, 1, 1).defect - beta_qn(u, 1, 1).defect);
  EXPECT_LE(diff, norm_limit_lipschitz(u, 1, 1) * 1e-4);
  EXPECT_TRUE(verify_norm_limit_continuity(u, 1, 1, 8, std::uint64_t{5}).passed());
}

TEST(Composites, PowerProductAndTensorPowers) {
  InstanceGenerator gen(227);
  const OperatorMatrix u = gen.random_unitary(2);
  const OperatorMatrix i2 = OperatorMatrix::identity(2);
  const TheoremVerdict pp = verify_power_product(kron(kJordan, i2), kron(i2, kJordan), 3, 3, 0, 0, 2, 3);
  EXPECT_TRUE(pp.passed()) << pp.notes;
  const TheoremVerdict tp = verify_tensor_powers(kJordan, u, 3, 1, 1, 0, 3, 2);
  EXPECT_TRUE(tp.passed()) << tp.notes;
}

TEST(Composites, BlockBidiagonal) {
  for (int d = 2; d <= 3; ++d) {
    const std::vector<OperatorMatrix> blocks(static_cast<std::size_t>(d), kJordan);
    const std::vector<Complex> alphas(static_cast<std::size_t>(d - 1), Complex(1.5));
    const TheoremVerdict v =
        verify_block_bidiagonal(blocks, alphas, std::vector<int>(blocks.size(), 3), std::vector<int>(blocks.size(), 1));
    EXPECT_TRUE(v.passed()) << d << " " << v.notes;
  }
  // Distinct blocks break the commutation the proof needs.
  const TheoremVerdict v = verify_block_bidiagonal({kJordan, OperatorMatrix::identity(2)}, {1.0}, {3, 1}, {1, 0});
  EXPECT_TRUE(v.vacuous());
}

TEST(Randomized, EveryTheoremHasNoFailures) {
  for (const auto& id : theorem_ids()) {
    const auto vs = run_randomized(id, 100, 42);
    ASSERT_EQ(vs.size(), 100u) << id;
    EXPECT_EQ(count_status(vs, VerdictStatus::Fail), 0u) << id;
    EXPECT_GT(count_status(vs, VerdictStatus::Pass), 50u) << id;
    for (const auto& v : vs) {
      if (v.failed()) ADD_FAILURE() << v.theorem_id << " " << v.instance_digest << " " << v.notes;
    }
  }
}

TEST(Randomized, DeterministicPerSeed) {
  const auto a = run_randomized("product", 10, 7);
  const auto b = run_randomized("product", 10, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].instance_digest, b[i].instance_digest);
    EXPECT_EQ(a[i].worst_residual, b[i].worst_residual);
  }
  EXPECT_THROW(run_randomized("no_such_theorem", 1), std::invalid_argument);
}

TEST(Randomized, VacuousVerdictsCarryAReason) {
  const auto vs = run_randomized("block_bidiagonal", 40, 42);
  EXPECT_GT(count_status(vs, VerdictStatus::Vacuous), 0u);
  for (const auto& v : vs) {
    if (v.vacuous()) EXPECT_NE(v.notes.find("hypothesis fails"), std::string::npos);
  }
}

TEST(Catalog, FlaggedEntryIsNeverAFailure) {
  for (const auto& id : theorem_ids()) {
    TheoremVerdict v;
    try {
      v = verify_catalog(id, "noncommuting_sum", 2);
    } catch (const std::invalid_argument&) {
      continue;
    }
    EXPECT_FALSE(v.failed()) << id << " " << v.notes;
    EXPECT_NE(v.notes.find("catalog entry flagged"), std::string::npos) << id;
  }
}

TEST(Catalog, JordanPowerClosureAndPairRequirement) {
  EXPECT_TRUE(verify_catalog("power_closure", "jordan_unit", 2).passed());
  EXPECT_THROW(verify_catalog("product", "jordan_unit", 2), std::invalid_argument);
  EXPECT_THROW(verify_catalog("no_such_theorem", "jordan_unit", 2), std::invalid_argument);
  EXPECT_THROW(verify_catalog("power_closure", "no_such_entry", 2), UnknownExampleError);
}
