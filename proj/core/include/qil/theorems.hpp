#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qil/matrix.hpp"
#include "qil/tolerance.hpp"

namespace qil {

enum class VerdictStatus { Pass, Fail, Vacuous };

std::string_view to_string(VerdictStatus status);

/// Outcome of checking one theorem on one instance.
///
/// Vacuous means the hypotheses did not hold, so the instance says nothing
/// about the theorem; it is never counted as a failure.
struct TheoremVerdict {
  std::string theorem_id;
  std::string instance_digest;
  std::string claim;
  VerdictStatus status = VerdictStatus::Vacuous;
  /// Largest normalized residual among the conclusion checks.
  double worst_residual = 0.0;
  /// The bound worst_residual was compared against.
  double threshold = 0.0;
  std::string notes;

  bool passed() const noexcept { return status == VerdictStatus::Pass; }
  bool failed() const noexcept { return status == VerdictStatus::Fail; }
  bool vacuous() const noexcept { return status == VerdictStatus::Vacuous; }
};

/// Short hex digest of the matrix entries (FNV-1a over the raw doubles).
std::string matrix_digest(const OperatorMatrix& t);

/// |TS - ST| and |TS* - S*T| within eps_rel * max(1, |T||S|).
bool doubly_commuting(const OperatorMatrix& t, const OperatorMatrix& s, const ToleranceProfile& tol = {});
bool commuting(const OperatorMatrix& t, const OperatorMatrix& s, const ToleranceProfile& tol = {});

/// Smallest p with Q^p = 0 at tolerance, or nullopt when Q is not nilpotent.
std::optional<int> nilpotency_order(const OperatorMatrix& q, const ToleranceProfile& tol = {});

/// T n-quasi-m  =>  T^k n-quasi-m.
TheoremVerdict verify_power_closure(const OperatorMatrix& t, int m, int n, int k,
                                    const ToleranceProfile& tol = {});

/// T^r n-quasi-m and T^s n-quasi-l  =>  T^gcd(r,s) n-quasi-min(m,l).
/// With `strict`, hypotheses and conclusion are the strict versions.
TheoremVerdict verify_gcd_min(const OperatorMatrix& t, int r, int s, int m, int l, int n,
                              const ToleranceProfile& tol = {}, bool strict = false);

/// Doubly commuting T (n1-quasi-m) and S (n2-quasi-l)  =>  TS is
/// max(n1,n2)-quasi-(m+l-1).
TheoremVerdict verify_product(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1,
                              int n2, const ToleranceProfile& tol = {});

/// T n-quasi-m commuting with Q nilpotent of order p  =>  T+Q is
/// (n+p)-quasi-(m+2p-2). The order 2 max(n,p) is evaluated and noted only.
TheoremVerdict verify_nilpotent_sum(const OperatorMatrix& t, const OperatorMatrix& q, int m, int n, int p,
                                    const ToleranceProfile& tol = {});

/// T n1-quasi-m, S n2-quasi-l  =>  T (x) S is max(n1,n2)-quasi-(m+l-1).
/// With `strict`, both inputs must be strict at n = max(n1, n2) and the
/// conclusion is strictness of T (x) S there.
TheoremVerdict verify_tensor(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1, int n2,
                             const ToleranceProfile& tol = {}, bool strict = false);

/// T strict n-quasi-m  =>  Delta_{m-1,n}(T^k, x) = k^(m-1) Delta_{m-1,n}(T, x)
/// and T^k is again strict.
TheoremVerdict verify_strict_scaling(const OperatorMatrix& t, int m, int n, int k, const Vector& x,
                                     const ToleranceProfile& tol = {});

/// Relative bound on the scaling identity.
constexpr double kScalingTolerance = 1e-8;

/// Doubly commuting strict T (n, m) and S (n, l): TS is strict at
/// (m+l-1, n) exactly when
/// W = T*^(n+l-1) beta_{m-1}(T) T^(n+l-1) S*^n beta_{l-1}(S) S^n is nonzero.
TheoremVerdict verify_strict_product_criterion(const OperatorMatrix& t, const OperatorMatrix& s, int m,
                                               int l, int n, const ToleranceProfile& tol = {});

enum class ExpansionMode { Product, Sum };

/// Product: beta_q(TS) = sum_k C(q,k) T*^k beta_{q-k}(T) T^k beta_k(S)
/// for doubly commuting T, S.
/// Sum: beta_q(T+Q) = sum_{k,j} C(q,k) C(q-k,j) (T*+Q*)^k Q*^j beta_{q-k-j}(T) T^j Q^k
/// for commuting T, Q.
TheoremVerdict verify_expansion_identities(const OperatorMatrix& t, const OperatorMatrix& x, int q,
                                           ExpansionMode mode, const ToleranceProfile& tol = {});

/// Lipschitz constant for beta_{m,n} on the ball of radius |T| + 1:
/// 2 sum_j C(m,j) (n+j) M^(2(n+j)-1) with M = |T| + 1.
double norm_limit_lipschitz(const OperatorMatrix& t, int m, int n);

/// Perturbs T by 2^-k E for k = 1..num_steps and checks
/// |beta_{m,n}(T_k) - beta_{m,n}(T)| <= L |T_k - T|.
TheoremVerdict verify_norm_limit_continuity(const OperatorMatrix& t, int m, int n, int num_steps,
                                            const OperatorMatrix& direction, const ToleranceProfile& tol = {});
/// Same with a seeded random unit-norm direction.
TheoremVerdict verify_norm_limit_continuity(const OperatorMatrix& t, int m, int n, int num_steps,
                                            std::uint64_t seed = 42, const ToleranceProfile& tol = {});

// ---------------------------------------------------------------------------
// Composite scenarios

/// T^p S^q for doubly commuting T, S: power closure chained with the product theorem.
TheoremVerdict verify_power_product(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1,
                                    int n2, int p, int q, const ToleranceProfile& tol = {});

/// T^p (x) S^q is max(n1,n2)-quasi-(m+l-1).
TheoremVerdict verify_tensor_powers(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1,
                                    int n2, int p, int q, const ToleranceProfile& tol = {});

/// Block bidiagonal S with diagonal blocks T_j (n_j-quasi-m_j) and alpha_j I
/// above the diagonal is (n+d)-quasi-(m+2d-2) with n, m the maxima.
/// S = diag(T_j) + Q with Q nilpotent of order d; the sum theorem needs the
/// two parts to commute, which holds only when consecutive blocks joined by
/// a nonzero alpha_j coincide. Otherwise the verdict is vacuous and the
/// direct membership result is recorded in the notes.
TheoremVerdict verify_block_bidiagonal(const std::vector<OperatorMatrix>& blocks,
                                       const std::vector<Complex>& alphas, const std::vector<int>& ms,
                                       const std::vector<int>& ns, const ToleranceProfile& tol = {});

// ---------------------------------------------------------------------------
// Batch drivers

/// Identifiers accepted by run_randomized, in report order.
std::vector<std::string> theorem_ids();

/// `count` seeded instances (dims <= 6, m <= 4, n <= 3, p <= 3) of one theorem.
/// Throws std::invalid_argument for an unknown id.
std::vector<TheoremVerdict> run_randomized(std::string_view theorem_id, int count, std::uint64_t seed = 42,
                                           const ToleranceProfile& tol = {});

std::vector<TheoremVerdict> run_all(int count, std::uint64_t seed = 42, const ToleranceProfile& tol = {});

/// One theorem on the matrices of a catalog entry with their stated orders.
/// `k` is the power (power_closure, strict_scaling, gcd_min r = k, s = k + 1)
/// or the expansion degree. Throws std::invalid_argument when the theorem
/// needs two operators and the entry has one.
TheoremVerdict verify_catalog(std::string_view theorem_id, std::string_view catalog_id, int k,
                              std::uint64_t seed = 42, const ToleranceProfile& tol = {});

}  // namespace qil
