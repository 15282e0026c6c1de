#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qil/matrix.hpp"
#include "qil/tolerance.hpp"

namespace qil {

/// Exact integer arithmetic would overflow 64 bits.
class ExactArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A finite-difference order question that the sequence is too short to answer.
class UndecidableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Exact combinatorics

/// C(n, k) in exact arithmetic; 0 when k < 0 or k > n.
std::int64_t binomial(int n, int k);

/// m! / (p_1! ... p_k!) for p summing to m.
std::int64_t multinomial(std::span<const int> parts);

/// Calls `visit` with every composition (p_1, ..., p_parts) of `total` into
/// `parts` nonnegative integers, in lexicographic order.
void for_each_composition(int total, int parts,
                          const std::function<void(std::span<const int>)>& visit);

/// Dense integer polynomial, coefficient i multiplies z^i.
using IntPolynomial = std::vector<std::int64_t>;

IntPolynomial poly_add(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial poly_mul(const IntPolynomial& a, const IntPolynomial& b);
/// Drops trailing zero coefficients.
IntPolynomial poly_trim(IntPolynomial p);

// ---------------------------------------------------------------------------
// Defect operators

/// beta_m(T) = sum_{k=0..m} (-1)^{m-k} C(m,k) T*^k T^k. beta_0(T) = I.
OperatorMatrix beta(const OperatorMatrix& t, int m);

/// T*^n beta_m(T) T^n with its residual norm and the tolerance verdict.
struct DefectReport {
  int m = 0;
  int n = 0;
  OperatorMatrix defect;
  double residual = 0.0;    // |beta_{m,n}(T)|_op
  double scale = 1.0;       // ToleranceProfile::scale(T, m, n)
  double normalized = 0.0;  // residual / scale
  bool accepted = false;    // normalized <= eps_rel
};

/// m = 0 is allowed and gives T*^n T^n (used for strictness at m = 1).
DefectReport beta_qn(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol = {});

/// Delta_{m,n}(T, x) = sum_k (-1)^{m-k} C(m,k) |T^{k+n} x|^2, evaluated on the
/// orbit of x (no matrix powers are formed).
double delta(const OperatorMatrix& t, int m, int n, const Vector& x);

/// a_k = |T^{n+k} x|^2 for k = 0..K.
struct NormSequence {
  OperatorMatrix base;
  Vector vector;
  int offset = 0;
  std::vector<double> values;
};

NormSequence norm_sequence(const OperatorMatrix& t, const Vector& x, int n, int count);

/// Smallest h such that every (h+1)-th forward difference vanishes relative
/// to max|seq|, i.e. the strict order of seq as an arithmetic progression.
/// nullopt means no order up to what the length can certify.
/// Throws UndecidableError for sequences shorter than 2.
std::optional<int> finite_diff_strict_order(std::span<const double> seq, double tol = 1e-8);

/// Forward difference of the given order.
std::vector<double> forward_difference(std::span<const double> seq, int order);

/// Left side of the power identity: sum_j (-1)^{m-j} C(m,j) z^{k(j+n)}.
IntPolynomial power_identity_lhs(int k, int m, int n);

/// Right side, summed over all compositions p of m into k parts:
/// multinomial(m; p) * sum_j (-1)^{m-j} C(m,j) z^{j + kn + sum_i (i-1) p_i}.
IntPolynomial power_identity_rhs(int k, int m, int n);

/// Compares both sides exactly. Throws ExactArithmeticOverflow when a
/// coefficient leaves the int64 range.
bool multinomial_identity_check(int k, int m, int n);

/// sum over compositions of multinomial(m;p) * Delta_{m,n}(T, T^{shift(p)+(k-1)n} x);
/// equals Delta_{m,n}(T^k, x).
double delta_power_expansion(const OperatorMatrix& t, int m, int n, int k, const Vector& x);

}  // namespace qil
