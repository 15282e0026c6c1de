#include "qil/constructions.hpp"

#include <cmath>

namespace qil {

std::vector<std::size_t> ShiftSpec::interior_window() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j + interior_margin < dim; ++j) idx.push_back(j);
  return idx;
}

DenseMatrix ShiftSpec::window_matrix() const {
  const auto idx = interior_window();
  DenseMatrix w = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    w(static_cast<Eigen::Index>(idx[c]), static_cast<Eigen::Index>(c)) = 1.0;
  }
  return w;
}

OperatorMatrix truncated_weighted_shift(const ShiftSpec& spec) {
  if (spec.dim < 2) throw std::invalid_argument("truncated_weighted_shift: need N >= 2");
  if (spec.weights.size() + 1 < spec.dim) {
    throw std::invalid_argument("truncated_weighted_shift: need N - 1 weights");
  }
  const auto n = static_cast<Eigen::Index>(spec.dim);
  DenseMatrix t = DenseMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double w = spec.weights[static_cast<std::size_t>(k)];
    if (!(w > 0.0)) throw std::invalid_argument("truncated_weighted_shift: weights must be positive");
    t(k + 1, k) = w;
  }
  return OperatorMatrix(std::move(t));
}

ShiftSpec shift_2q2i_spec(std::size_t dim, std::size_t margin) {
  ShiftSpec s;
  s.dim = dim;
  s.interior_margin = margin;
  s.weights.assign(dim > 0 ? dim - 1 : 0, 1.0);
  if (!s.weights.empty()) s.weights[0] = 2.0;
  if (s.weights.size() > 1) s.weights[1] = 3.0;
  return s;
}

ShiftSpec shift_sqrt_ratio_spec(double a, std::size_t dim, std::size_t margin) {
  ShiftSpec s;
  s.dim = dim;
  s.interior_margin = margin;
  for (std::size_t p = 1; p < dim; ++p) {
    s.weights.push_back(p == 1 ? a : std::sqrt(static_cast<double>(p + 1) / static_cast<double>(p)));
  }
  return s;
}

OperatorMatrix nilpotent_jordan(std::size_t dim, int order) {
  if (order < 1) throw std::invalid_argument("nilpotent_jordan: order must be positive");
  if (static_cast<std::size_t>(order) > dim) {
    throw std::invalid_argument("nilpotent_jordan: order exceeds dimension");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  DenseMatrix q = DenseMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    // Superdiagonal ones, broken at every block boundary.
    if ((i + 1) % order != 0) q(i, i + 1) = 1.0;
  }
  return OperatorMatrix(std::move(q));
}

IsometryPlusNilpotent isometry_plus_nilpotent(std::size_t dim, int p, Complex phase) {
  if (std::abs(std::abs(phase) - 1.0) > 1e-12) {
    throw std::invalid_argument("isometry_plus_nilpotent: phase must be unimodular");
  }
  IsometryPlusNilpotent out;
  out.nilpotent_part = nilpotent_jordan(dim, p);
  out.t = phase * OperatorMatrix::identity(dim) + out.nilpotent_part;
  out.expected = {2 * p - 1, 0};
  return out;
}

OperatorMatrix block_corollary_s(const std::vector<OperatorMatrix>& blocks,
                                 const std::vector<Complex>& alphas) {
  if (blocks.empty()) throw std::invalid_argument("block_corollary_s: no blocks");
  if (alphas.size() + 1 != blocks.size()) {
    throw std::invalid_argument("block_corollary_s: need one alpha per superdiagonal block");
  }
  const auto b = static_cast<Eigen::Index>(blocks.front().dim());
  for (const auto& blk : blocks) {
    if (static_cast<Eigen::Index>(blk.dim()) != b) {
      throw std::invalid_argument("block_corollary_s: dimension mismatch");
    }
  }
  const auto count = static_cast<Eigen::Index>(blocks.size());
  DenseMatrix s = DenseMatrix::Zero(b * count, b * count);
  for (Eigen::Index j = 0; j < count; ++j) {
    s.block(j * b, j * b, b, b) = blocks[static_cast<std::size_t>(j)].dense();
    if (j + 1 < count) {
      s.block(j * b, (j + 1) * b, b, b) =
          alphas[static_cast<std::size_t>(j)] * DenseMatrix::Identity(b, b);
    }
  }
  return OperatorMatrix(std::move(s));
}

namespace {

using Staircase = std::vector<std::optional<int>>;

const OperatorMatrix& jordan_unit() {
  static const OperatorMatrix t = OperatorMatrix::from_rows({{1, 1}, {0, 1}});
  return t;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  return {"nilpotent2",       "cube_minus_identity", "product_pair", "noncommuting_sum",
          "jordan_unit",      "shift_2q2i",          "shift_sqrt_ratio"};
}

CatalogEntry catalog_example(std::string_view id, const ExampleOptions& options) {
  CatalogEntry e;
  e.id = std::string(id);
  if (id == "nilpotent2") {
    e.claim = "2-quasi-isometry but not a quasi-isometry; N(T*) != N(T*^2)";
    e.names = {"T"};
    e.matrices = {OperatorMatrix::from_rows({{0, 1}, {0, 0}})};
    e.expected_staircase = Staircase{std::nullopt, std::nullopt, 1, 1};
  } else if (id == "cube_minus_identity") {
    e.claim = "T^3 is a quasi-3-isometry but T is not a quasi-3-isometry";
    e.names = {"T"};
    e.matrices = {OperatorMatrix::from_rows({{-1, -1}, {3, 2}})};
    e.expected_staircase = Staircase(4, std::nullopt);
  } else if (id == "product_pair") {
    e.claim =
        "T is a quasi-3-isometry, S is a 2-quasi-3-isometry, TS != ST, and neither TS nor ST is "
        "a 2-quasi-5-isometry";
    e.names = {"T", "S"};
    e.matrices = {jordan_unit(), OperatorMatrix::from_rows({{2, 1}, {-1, 0}})};
    e.expected_staircase = Staircase{3, 3, 3, 3};
  } else if (id == "noncommuting_sum") {
    e.claim = "T is a quasi-3-isometry and Q^2 = 0; T + Q is not a 5-quasi-5-isometry";
    e.names = {"T", "Q"};
    e.matrices = {OperatorMatrix::diagonal({-5.0, -1.0}), OperatorMatrix::from_rows({{0, 1}, {0, 0}})};
    e.verify_on_load = true;
    e.discrepancy =
        "direct computation gives beta_{3,1}(T) = diag(25*24^3, 0) != 0, so T is not a "
        "quasi-3-isometry; the stated claim does not hold";
    e.expected_staircase = Staircase(4, std::nullopt);
  } else if (id == "jordan_unit") {
    e.claim = "quasi-3-isometry but not quasi-2-isometry (quasi strict-3-isometry)";
    e.names = {"T"};
    e.matrices = {jordan_unit()};
    e.expected_staircase = Staircase{3, 3, 3, 3};
  } else if (id == "shift_2q2i") {
    e.claim = "weighted shift (2, 3, 1, 1, ...) is a 2-quasi-2-isometry but not quasi-2-isometric";
    e.names = {"T"};
    e.shift = shift_2q2i_spec(options.dim);
    e.matrices = {truncated_weighted_shift(*e.shift)};
  } else if (id == "shift_sqrt_ratio") {
    e.claim = "weighted shift (a, sqrt((p+1)/p)) with a != sqrt(2) is a quasi strict-2-isometry";
    e.names = {"T"};
    e.shift = shift_sqrt_ratio_spec(options.a, options.dim);
    e.matrices = {truncated_weighted_shift(*e.shift)};
  } else {
    throw UnknownExampleError("unknown catalog id: " + std::string(id));
  }
  return e;
}

}  // namespace qil
