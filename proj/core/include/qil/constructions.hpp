#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qil/matrix.hpp"

namespace qil {

class UnknownExampleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Weighted shift T e_k = w_k e_{k+1}, truncated to N dimensions with e_N -> 0.
struct ShiftSpec {
  std::vector<double> weights;  // at least N - 1 positive entries, w_1 first
  std::size_t dim = 2;
  std::size_t interior_margin = 0;

  /// 0-based indices of e_1 .. e_{N - margin}.
  std::vector<std::size_t> interior_window() const;
  /// The interior basis vectors as columns of a dim x |window| matrix.
  DenseMatrix window_matrix() const;
};

OperatorMatrix truncated_weighted_shift(const ShiftSpec& spec);

/// Weights (2, 3, 1, 1, ...): a 2-quasi-2-isometry that is not quasi-2-isometric.
ShiftSpec shift_2q2i_spec(std::size_t dim, std::size_t margin = 4);

/// Weights (a, sqrt(3/2), sqrt(4/3), ...): w_1 = a and w_p = sqrt((p+1)/p)
/// for p >= 2. A quasi-2-isometry, strict when a != sqrt(2).
ShiftSpec shift_sqrt_ratio_spec(double a, std::size_t dim, std::size_t margin = 4);

/// Direct sum of Jordan blocks of size `order` (plus one smaller remainder
/// block), so Q^order = 0 and Q^(order-1) != 0.
OperatorMatrix nilpotent_jordan(std::size_t dim, int order);

struct ExpectedOrder {
  int m = 0;
  int n = 0;
};

struct IsometryPlusNilpotent {
  OperatorMatrix t;
  OperatorMatrix nilpotent_part;
  ExpectedOrder expected;  // strict (2p - 1)-isometry at n = 0
};

/// phase * I + nilpotent_jordan(dim, p); |phase| must be 1.
IsometryPlusNilpotent isometry_plus_nilpotent(std::size_t dim, int p, Complex phase);

/// Block upper bidiagonal operator with `blocks` on the diagonal and
/// alpha_j * I on the superdiagonal.
OperatorMatrix block_corollary_s(const std::vector<OperatorMatrix>& blocks,
                                 const std::vector<Complex>& alphas);

// ---------------------------------------------------------------------------
// Catalog of worked examples

struct ExampleOptions {
  std::size_t dim = 8;  // truncation size for shift entries
  double a = 1.0;       // first weight of the sqrt-ratio shift
};

struct CatalogEntry {
  std::string id;
  std::string claim;
  std::vector<std::string> names;
  std::vector<OperatorMatrix> matrices;
  /// When true the stated claim is re-checked and disagreement is surfaced.
  bool verify_on_load = false;
  /// Non-empty when direct computation contradicts the stated claim.
  std::string discrepancy;
  /// Staircase of the first matrix for m_max = 5, n_max = 3 (index = n);
  /// absent for truncated shifts, whose lattice is dominated by truncation.
  std::optional<std::vector<std::optional<int>>> expected_staircase;
  /// Present for truncated shifts: where membership claims are meaningful.
  std::optional<ShiftSpec> shift;

  bool flagged() const noexcept { return !discrepancy.empty(); }
};

constexpr int kCatalogMMax = 5;
constexpr int kCatalogNMax = 3;

std::vector<std::string> catalog_ids();
CatalogEntry catalog_example(std::string_view id, const ExampleOptions& options = {});

}  // namespace qil
