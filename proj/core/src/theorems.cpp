#include "qil/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "qil/classifier.hpp"
#include "qil/constructions.hpp"
#include "qil/defect.hpp"
#include "qil/random_instances.hpp"

namespace qil {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string orders(int m, int n) { return "(m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")"; }

std::string membership_note(const std::string& name, const DefectReport& r) {
  return name + " at " + orders(r.m, r.n) + ": normalized " + sci(r.normalized) +
         (r.accepted ? " (accepted)" : " (rejected)");
}

void append(std::string& notes, const std::string& line) {
  if (!notes.empty()) notes += "; ";
  notes += line;
}

TheoremVerdict make_verdict(std::string id, std::string digest, std::string claim, const ToleranceProfile& tol) {
  TheoremVerdict v;
  v.theorem_id = std::move(id);
  v.instance_digest = std::move(digest);
  v.claim = std::move(claim);
  v.threshold = tol.eps_rel;
  return v;
}

/// Fills status and residual from a membership conclusion.
void conclude(TheoremVerdict& v, const DefectReport& r) {
  v.worst_residual = std::max(v.worst_residual, r.normalized);
  v.status = r.accepted && v.status != VerdictStatus::Fail ? VerdictStatus::Pass : VerdictStatus::Fail;
}

TheoremVerdict vacuous(TheoremVerdict v, const std::string& why) {
  v.status = VerdictStatus::Vacuous;
  append(v.notes, "hypothesis fails: " + why);
  return v;
}

std::string pair_digest(const OperatorMatrix& t, const OperatorMatrix& s) {
  return "T=" + matrix_digest(t) + " S=" + matrix_digest(s);
}

double commutator_scale(const OperatorMatrix& t, const OperatorMatrix& s) {
  return std::max(1.0, op_norm(t) * op_norm(s));
}

/// Strictness with the two normalized residuals kept for notes.
struct StrictCheck {
  DefectReport at;
  DefectReport below;
  bool strict = false;
};

StrictCheck strict_check(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol) {
  StrictCheck c{beta_qn(t, m, n, tol), beta_qn(t, m - 1, n, tol), false};
  c.strict = c.at.accepted && tol.clearly_rejects(c.below.normalized);
  return c;
}

std::string strict_note(const std::string& name, const StrictCheck& c) {
  return name + " strict at " + orders(c.at.m, c.at.n) + ": " + (c.strict ? "yes" : "no") + " (normalized " +
         sci(c.at.normalized) + " at m, " + sci(c.below.normalized) + " at m-1)";
}

}  // namespace

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Pass:
      return "pass";
    case VerdictStatus::Fail:
      return "fail";
    case VerdictStatus::Vacuous:
      return "vacuous";
  }
  return "unknown";
}

std::string matrix_digest(const OperatorMatrix& t) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t d = t.dim();
  mix(&d, sizeof d);
  const DenseMatrix& a = t.dense();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double parts[2] = {a(i, j).real(), a(i, j).imag()};
      mix(parts, sizeof parts);
    }
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf).substr(0, 12);
}

bool commuting(const OperatorMatrix& t, const OperatorMatrix& s, const ToleranceProfile& tol) {
  if (t.dim() != s.dim()) return false;
  return op_norm(t * s - s * t) <= tol.eps_rel * commutator_scale(t, s);
}

bool doubly_commuting(const OperatorMatrix& t, const OperatorMatrix& s, const ToleranceProfile& tol) {
  if (!commuting(t, s, tol)) return false;
  const OperatorMatrix sa = adjoint(s);
  return op_norm(t * sa - sa * t) <= tol.eps_rel * commutator_scale(t, s);
}

std::optional<int> nilpotency_order(const OperatorMatrix& q, const ToleranceProfile& tol) {
  const double nrm = op_norm(q);
  OperatorMatrix power = q;
  for (int p = 1; p <= static_cast<int>(q.dim()); ++p) {
    if (op_norm(power) <= tol.eps_rel * std::max(1.0, std::pow(nrm, p))) return p;
    power = power * q;
  }
  return std::nullopt;
}

TheoremVerdict verify_power_closure(const OperatorMatrix& t, int m, int n, int k, const ToleranceProfile& tol) {
  if (k < 1) throw std::invalid_argument("verify_power_closure: k must be positive");
  TheoremVerdict v = make_verdict("power_closure", "T=" + matrix_digest(t) + " k=" + std::to_string(k),
                                  "T^" + std::to_string(k) + " is n-quasi-m-isometric at " + orders(m, n), tol);
  const DefectReport pre = check_nqmi(t, m, n, tol);
  const DefectReport conc = check_nqmi(matpow(t, k), m, n, tol);
  append(v.notes, membership_note("T^k", conc));
  if (!pre.accepted) {
    v.worst_residual = conc.normalized;
    return vacuous(std::move(v), membership_note("T", pre));
  }
  conclude(v, conc);
  return v;
}

TheoremVerdict verify_gcd_min(const OperatorMatrix& t, int r, int s, int m, int l, int n,
                              const ToleranceProfile& tol, bool strict) {
  if (r < 1 || s < 1) throw std::invalid_argument("verify_gcd_min: r and s must be positive");
  const int q = std::gcd(r, s);
  const int p = std::min(m, l);
  TheoremVerdict v = make_verdict(
      strict ? "gcd_min_strict" : "gcd_min",
      "T=" + matrix_digest(t) + " r=" + std::to_string(r) + " s=" + std::to_string(s),
      "T^" + std::to_string(q) + " is n-quasi-" + std::string(strict ? "strict-" : "") + "p-isometric at " +
          orders(p, n),
      tol);
  const OperatorMatrix tr = matpow(t, r);
  const OperatorMatrix ts = matpow(t, s);
  const OperatorMatrix tq = matpow(t, q);
  if (strict) {
    const StrictCheck a = strict_check(tr, m, n, tol);
    const StrictCheck b = strict_check(ts, l, n, tol);
    const StrictCheck c = strict_check(tq, p, n, tol);
    append(v.notes, strict_note("T^q", c));
    if (!a.strict) return vacuous(std::move(v), strict_note("T^r", a));
    if (!b.strict) return vacuous(std::move(v), strict_note("T^s", b));
    v.worst_residual = c.at.normalized;
    v.status = c.strict ? VerdictStatus::Pass : VerdictStatus::Fail;
    return v;
  }
  const DefectReport a = check_nqmi(tr, m, n, tol);
  const DefectReport b = check_nqmi(ts, l, n, tol);
  const DefectReport c = check_nqmi(tq, p, n, tol);
  append(v.notes, membership_note("T^q", c));
  if (!a.accepted) return vacuous(std::move(v), membership_note("T^r", a));
  if (!b.accepted) return vacuous(std::move(v), membership_note("T^s", b));
  conclude(v, c);
  return v;
}

TheoremVerdict verify_product(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1, int n2,
                              const ToleranceProfile& tol) {
  const int mc = m + l - 1;
  const int nc = std::max(n1, n2);
  TheoremVerdict v = make_verdict("product", pair_digest(t, s), "TS is n-quasi-m-isometric at " + orders(mc, nc), tol);
  if (t.dim() != s.dim()) throw std::invalid_argument("verify_product: dimension mismatch");
  const DefectReport ts = check_nqmi(t * s, mc, nc, tol);
  if (!doubly_commuting(t, s, tol)) {
    v.worst_residual = ts.normalized;
    append(v.notes, "direct check: " + membership_note("TS", ts) + ", " +
                        membership_note("ST", check_nqmi(s * t, mc, nc, tol)));
    return vacuous(std::move(v), "T and S are not doubly commuting");
  }
  const DefectReport pt = check_nqmi(t, m, n1, tol);
  const DefectReport ps = check_nqmi(s, l, n2, tol);
  if (!pt.accepted) return vacuous(std::move(v), membership_note("T", pt));
  if (!ps.accepted) return vacuous(std::move(v), membership_note("S", ps));
  append(v.notes, membership_note("TS", ts));
  conclude(v, ts);
  return v;
}

TheoremVerdict verify_nilpotent_sum(const OperatorMatrix& t, const OperatorMatrix& q, int m, int n, int p,
                                    const ToleranceProfile& tol) {
  if (t.dim() != q.dim()) throw std::invalid_argument("verify_nilpotent_sum: dimension mismatch");
  const int mc = m + 2 * p - 2;
  const int nc = n + p;
  TheoremVerdict v = make_verdict("nilpotent_sum", "T=" + matrix_digest(t) + " Q=" + matrix_digest(q),
                                  "T+Q is n-quasi-m-isometric at " + orders(mc, nc), tol);
  const OperatorMatrix sum = t + q;
  if (p < 1) {
    return vacuous(std::move(v), "Q is not nilpotent");
  }
  const DefectReport conc = check_nqmi(sum, mc, nc, tol);
  if (!commuting(t, q, tol)) {
    v.worst_residual = conc.normalized;
    append(v.notes, "direct check: " + membership_note("T+Q", conc));
    if (nc != mc) append(v.notes, "direct check: " + membership_note("T+Q", check_nqmi(sum, mc, mc, tol)));
    return vacuous(std::move(v), "T and Q do not commute");
  }
  const auto order = nilpotency_order(q, tol);
  if (!order || *order != p) {
    return vacuous(std::move(v), "Q is not nilpotent of order " + std::to_string(p));
  }
  const DefectReport pre = check_nqmi(t, m, n, tol);
  if (!pre.accepted) return vacuous(std::move(v), membership_note("T", pre));
  append(v.notes, membership_note("T+Q", conc));
  const DefectReport variant = check_nqmi(sum, mc, 2 * std::max(n, p), tol);
  append(v.notes, "order 2max(n,p): " + membership_note("T+Q", variant));
  conclude(v, conc);
  return v;
}

TheoremVerdict verify_tensor(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1, int n2,
                             const ToleranceProfile& tol, bool strict) {
  const int mc = m + l - 1;
  const int nc = std::max(n1, n2);
  TheoremVerdict v = make_verdict(strict ? "tensor_strict" : "tensor", pair_digest(t, s),
                                  "T (x) S is n-quasi-" + std::string(strict ? "strict-" : "") +
                                      "m-isometric at " + orders(mc, nc),
                                  tol);
  const OperatorMatrix k = kron(t, s);
  if (strict) {
    const StrictCheck a = strict_check(t, m, nc, tol);
    const StrictCheck b = strict_check(s, l, nc, tol);
    const StrictCheck c = strict_check(k, mc, nc, tol);
    append(v.notes, strict_note("T (x) S", c));
    if (!a.strict) return vacuous(std::move(v), strict_note("T", a));
    if (!b.strict) return vacuous(std::move(v), strict_note("S", b));
    v.worst_residual = c.at.normalized;
    v.status = c.strict ? VerdictStatus::Pass : VerdictStatus::Fail;
    return v;
  }
  const DefectReport pt = check_nqmi(t, m, n1, tol);
  const DefectReport ps = check_nqmi(s, l, n2, tol);
  const DefectReport conc = check_nqmi(k, mc, nc, tol);
  append(v.notes, membership_note("T (x) S", conc));
  if (!pt.accepted) return vacuous(std::move(v), membership_note("T", pt));
  if (!ps.accepted) return vacuous(std::move(v), membership_note("S", ps));
  conclude(v, conc);
  return v;
}

TheoremVerdict verify_strict_scaling(const OperatorMatrix& t, int m, int n, int k, const Vector& x,
                                     const ToleranceProfile& tol) {
  if (m < 1 || k < 1) throw std::invalid_argument("verify_strict_scaling: m and k must be positive");
  TheoremVerdict v = make_verdict("strict_scaling", "T=" + matrix_digest(t) + " k=" + std::to_string(k),
                                  "Delta_{m-1,n}(T^k,x) = k^(m-1) Delta_{m-1,n}(T,x) and T^k strict at " +
                                      orders(m, n),
                                  tol);
  v.threshold = kScalingTolerance;
  const StrictCheck pre = strict_check(t, m, n, tol);
  if (!pre.strict) return vacuous(std::move(v), strict_note("T", pre));
  const OperatorMatrix tk = matpow(t, k);
  const double base = delta(t, m - 1, n, x);
  const double powered = delta(tk, m - 1, n, x);
  const double factor = std::pow(static_cast<double>(k), m - 1);
  v.worst_residual = std::abs(powered - factor * base) / (1.0 + factor * std::abs(base));
  append(v.notes, "Delta(T,x) = " + sci(base) + ", Delta(T^k,x) = " + sci(powered) + ", factor " + sci(factor));
  const StrictCheck conc = strict_check(tk, m, n, tol);
  append(v.notes, strict_note("T^k", conc));
  v.status = v.worst_residual <= kScalingTolerance && conc.strict ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

TheoremVerdict verify_strict_product_criterion(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l,
                                               int n, const ToleranceProfile& tol) {
  if (m < 1 || l < 1) throw std::invalid_argument("verify_strict_product_criterion: m, l must be positive");
  TheoremVerdict v = make_verdict("strict_product", pair_digest(t, s),
                                  "W != 0 iff TS is n-quasi-strict at " + orders(m + l - 1, n), tol);
  if (!doubly_commuting(t, s, tol)) return vacuous(std::move(v), "T and S are not doubly commuting");
  const StrictCheck pt = strict_check(t, m, n, tol);
  const StrictCheck ps = strict_check(s, l, n, tol);
  if (!pt.strict) return vacuous(std::move(v), strict_note("T", pt));
  if (!ps.strict) return vacuous(std::move(v), strict_note("S", ps));

  const OperatorMatrix tp = matpow(t, n + l - 1);
  const OperatorMatrix sp = matpow(s, n);
  const OperatorMatrix w = adjoint(tp) * beta(t, m - 1) * tp * (adjoint(sp) * beta(s, l - 1) * sp);
  const OperatorMatrix ts = t * s;
  const double c = static_cast<double>(binomial(m + l - 2, l - 1));
  const double w_normalized = c * op_norm(w) / tol.scale(ts, m + l - 2, n);
  const bool nonzero = tol.clearly_rejects(w_normalized);
  const StrictCheck conc = strict_check(ts, m + l - 1, n, tol);
  append(v.notes, "C*|W| normalized " + sci(w_normalized) + (nonzero ? " (nonzero)" : " (zero)"));
  append(v.notes, strict_note("TS", conc));
  v.worst_residual = w_normalized;
  v.threshold = tol.hysteresis * tol.eps_rel;
  v.status = nonzero == conc.strict ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

TheoremVerdict verify_expansion_identities(const OperatorMatrix& t, const OperatorMatrix& x, int q,
                                           ExpansionMode mode, const ToleranceProfile& tol) {
  if (q < 0) throw std::invalid_argument("verify_expansion_identities: negative q");
  if (t.dim() != x.dim()) throw std::invalid_argument("verify_expansion_identities: dimension mismatch");
  const bool product = mode == ExpansionMode::Product;
  TheoremVerdict v = make_verdict(product ? "expansion_product" : "expansion_sum",
                                  pair_digest(t, x) + " q=" + std::to_string(q),
                                  product ? "beta_q(TS) equals its binomial expansion"
                                          : "beta_q(T+Q) equals its double-sum expansion",
                                  tol);
  const auto d = static_cast<Eigen::Index>(t.dim());
  DenseMatrix rhs = DenseMatrix::Zero(d, d);
  DenseMatrix lhs;
  double scale = 0.0;
  if (product) {
    if (!doubly_commuting(t, x, tol)) return vacuous(std::move(v), "T and S are not doubly commuting");
    const OperatorMatrix ts = t * x;
    lhs = beta(ts, q).dense();
    scale += tol.scale(ts, q, 0);
    for (int k = 0; k <= q; ++k) {
      const OperatorMatrix tk = matpow(t, k);
      const double c = static_cast<double>(binomial(q, k));
      rhs += c * (adjoint(tk) * beta(t, q - k) * tk * beta(x, k)).dense();
      scale += c * tol.scale(t, q - k, k) * tol.scale(x, k, 0);
    }
  } else {
    if (!commuting(t, x, tol)) return vacuous(std::move(v), "T and Q do not commute");
    const OperatorMatrix sum = t + x;
    lhs = beta(sum, q).dense();
    scale += tol.scale(sum, q, 0);
    const OperatorMatrix sum_adj = adjoint(sum);
    const OperatorMatrix x_adj = adjoint(x);
    const double nt = op_norm(t);
    const double nx = op_norm(x);
    for (int k = 0; k <= q; ++k) {
      for (int j = 0; j <= q - k; ++j) {
        const double c = static_cast<double>(binomial(q, k) * binomial(q - k, j));
        const OperatorMatrix term =
            matpow(sum_adj, k) * matpow(x_adj, j) * beta(t, q - k - j) * matpow(t, j) * matpow(x, k);
        rhs += c * term.dense();
        scale += c * std::pow(nt + nx, k) * std::pow(nx, j + k) * std::pow(nt, j) * tol.scale(t, q - k - j, 0);
      }
    }
  }
  scale = std::max(1.0, scale);
  const double residual = op_norm(DenseMatrix(lhs - rhs));
  v.worst_residual = tol.normalize(residual, scale);
  append(v.notes, "|lhs - rhs| = " + sci(residual) + ", scale " + sci(scale));
  v.status = tol.accept(residual, scale) ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

double norm_limit_lipschitz(const OperatorMatrix& t, int m, int n) {
  const double big_m = op_norm(t) + 1.0;
  double sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    const int p = n + j;
    if (p == 0) continue;
    sum += static_cast<double>(binomial(m, j)) * p * std::pow(big_m, 2 * p - 1);
  }
  return 2.0 * sum;
}

TheoremVerdict verify_norm_limit_continuity(const OperatorMatrix& t, int m, int n, int num_steps,
                                            const OperatorMatrix& direction, const ToleranceProfile& tol) {
  if (num_steps < 1) throw std::invalid_argument("verify_norm_limit_continuity: need at least one step");
  if (direction.dim() != t.dim()) throw std::invalid_argument("verify_norm_limit_continuity: dimension mismatch");
  TheoremVerdict v = make_verdict("norm_limit", "T=" + matrix_digest(t) + " E=" + matrix_digest(direction),
                                  "|beta_{m,n}(T_k) - beta_{m,n}(T)| <= L |T_k - T| at " + orders(m, n), tol);
  v.threshold = 1.0;
  const DefectReport pre = check_nqmi(t, m, n, tol);
  if (!pre.accepted) return vacuous(std::move(v), membership_note("T", pre));
  const double en = op_norm(direction);
  const OperatorMatrix e = en > 0.0 ? Complex(1.0 / en) * direction : direction;
  const double lip = norm_limit_lipschitz(t, m, n);
  const DenseMatrix base = pre.defect.dense();
  double worst = 0.0;
  for (int k = 1; k <= num_steps; ++k) {
    const OperatorMatrix tk = t + Complex(std::ldexp(1.0, -k)) * e;
    const double diff = op_norm(DenseMatrix(beta_qn(tk, m, n, tol).defect.dense() - base));
    const double step = op_norm(tk - t);
    const double bound = lip * step;
    const double ratio = bound > 0.0 ? diff / bound : (diff > 0.0 ? INFINITY : 0.0);
    worst = std::max(worst, ratio);
  }
  v.worst_residual = worst;
  append(v.notes, "L = " + sci(lip) + ", worst |diff| / (L |T_k - T|) = " + sci(worst));
  v.status = worst <= 1.0 ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

TheoremVerdict verify_norm_limit_continuity(const OperatorMatrix& t, int m, int n, int num_steps,
                                            std::uint64_t seed, const ToleranceProfile& tol) {
  InstanceGenerator gen(seed);
  return verify_norm_limit_continuity(t, m, n, num_steps, OperatorMatrix(gen.gaussian(t.dim(), t.dim())), tol);
}

TheoremVerdict verify_power_product(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1,
                                    int n2, int p, int q, const ToleranceProfile& tol) {
  if (p < 1 || q < 1) throw std::invalid_argument("verify_power_product: powers must be positive");
  const int mc = m + l - 1;
  const int nc = std::max(n1, n2);
  TheoremVerdict v = make_verdict("power_product",
                                  pair_digest(t, s) + " p=" + std::to_string(p) + " q=" + std::to_string(q),
                                  "T^p S^q is n-quasi-m-isometric at " + orders(mc, nc), tol);
  if (!doubly_commuting(t, s, tol)) return vacuous(std::move(v), "T and S are not doubly commuting");
  const DefectReport pt = check_nqmi(t, m, n1, tol);
  const DefectReport ps = check_nqmi(s, l, n2, tol);
  if (!pt.accepted) return vacuous(std::move(v), membership_note("T", pt));
  if (!ps.accepted) return vacuous(std::move(v), membership_note("S", ps));
  const OperatorMatrix tp = matpow(t, p);
  const OperatorMatrix sq = matpow(s, q);
  const DefectReport a = check_nqmi(tp, m, n1, tol);
  const DefectReport b = check_nqmi(sq, l, n2, tol);
  const DefectReport c = check_nqmi(tp * sq, mc, nc, tol);
  append(v.notes, membership_note("T^p", a));
  append(v.notes, membership_note("S^q", b));
  append(v.notes, membership_note("T^p S^q", c));
  conclude(v, a);
  conclude(v, b);
  conclude(v, c);
  return v;
}

TheoremVerdict verify_tensor_powers(const OperatorMatrix& t, const OperatorMatrix& s, int m, int l, int n1,
                                    int n2, int p, int q, const ToleranceProfile& tol) {
  if (p < 1 || q < 1) throw std::invalid_argument("verify_tensor_powers: powers must be positive");
  const int mc = m + l - 1;
  const int nc = std::max(n1, n2);
  TheoremVerdict v = make_verdict("tensor_powers",
                                  pair_digest(t, s) + " p=" + std::to_string(p) + " q=" + std::to_string(q),
                                  "T^p (x) S^q is n-quasi-m-isometric at " + orders(mc, nc), tol);
  const DefectReport pt = check_nqmi(t, m, n1, tol);
  const DefectReport ps = check_nqmi(s, l, n2, tol);
  if (!pt.accepted) return vacuous(std::move(v), membership_note("T", pt));
  if (!ps.accepted) return vacuous(std::move(v), membership_note("S", ps));
  const DefectReport c = check_nqmi(kron(matpow(t, p), matpow(s, q)), mc, nc, tol);
  append(v.notes, membership_note("T^p (x) S^q", c));
  conclude(v, c);
  return v;
}

TheoremVerdict verify_block_bidiagonal(const std::vector<OperatorMatrix>& blocks, const std::vector<Complex>& alphas,
                                       const std::vector<int>& ms, const std::vector<int>& ns,
                                       const ToleranceProfile& tol) {
  if (ms.size() != blocks.size() || ns.size() != blocks.size()) {
    throw std::invalid_argument("verify_block_bidiagonal: one (m, n) per block");
  }
  const OperatorMatrix s = block_corollary_s(blocks, alphas);
  const int d = static_cast<int>(blocks.size());
  const int m = *std::max_element(ms.begin(), ms.end());
  const int n = *std::max_element(ns.begin(), ns.end());
  const int mc = m + 2 * d - 2;
  const int nc = n + d;
  TheoremVerdict v = make_verdict("block_bidiagonal", "S=" + matrix_digest(s) + " d=" + std::to_string(d),
                                  "S is n-quasi-m-isometric at " + orders(mc, nc), tol);
  const DefectReport c = check_nqmi(s, mc, nc, tol);
  append(v.notes, membership_note("S", c));
  std::vector<Complex> no_alphas(alphas.size(), Complex(0.0));
  const OperatorMatrix diag = block_corollary_s(blocks, no_alphas);
  if (!commuting(diag, s - diag, tol)) {
    v.worst_residual = c.normalized;
    return vacuous(std::move(v), "diag(T_j) does not commute with the alpha_j I part");
  }
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const DefectReport r = check_nqmi(blocks[j], ms[j], ns[j], tol);
    if (!r.accepted) return vacuous(std::move(v), membership_note("T_" + std::to_string(j + 1), r));
  }
  conclude(v, c);
  return v;
}

// ---------------------------------------------------------------------------
// Batch drivers

namespace {

int bump(InstanceGenerator& gen, int value, int limit) {
  return value >= limit ? value : gen.uniform_int(value, limit);
}

/// Strict 3-isometry lambda I + c J_2 in a random basis.
OperatorMatrix strict_jordan_pair_block(InstanceGenerator& gen) {
  return gen.quasi_instance(2, 0, 2).t;  // may still come out diagonal; callers retry
}

std::vector<TheoremVerdict> randomized(std::string_view id, int count, std::uint64_t seed,
                                       const ToleranceProfile& tol) {
  InstanceGenerator gen(seed);
  std::vector<TheoremVerdict> out;
  out.reserve(static_cast<std::size_t>(count));
  constexpr std::size_t kMaxDim = 6;
  constexpr int kMaxM = 4;
  constexpr int kMaxN = 3;
  constexpr int kMaxP = 3;
  for (int i = 0; i < count; ++i) {
    TheoremVerdict v;
    if (id == "power_closure") {
      const QuasiInstance qi = gen.quasi_instance_upto(kMaxDim, kMaxN);
      v = verify_power_closure(qi.t, bump(gen, qi.m, kMaxM), bump(gen, qi.n, kMaxN), gen.uniform_int(1, 4), tol);
    } else if (id == "gcd_min") {
      const QuasiInstance qi = gen.quasi_instance_upto(kMaxDim, kMaxN);
      const int r = gen.uniform_int(1, 4);
      const int s = gen.uniform_int(1, 4);
      if (i % 2 == 0) {
        v = verify_gcd_min(qi.t, r, s, qi.m, qi.m, qi.n, tol, true);
      } else {
        v = verify_gcd_min(qi.t, r, s, bump(gen, qi.m, kMaxM), bump(gen, qi.m, kMaxM), bump(gen, qi.n, kMaxN),
                           tol);
      }
    } else if (id == "product") {
      const CommutingPair cp = gen.doubly_commuting_pair(kMaxDim);
      v = verify_product(cp.t, cp.s, bump(gen, cp.m, kMaxM), bump(gen, cp.l, kMaxM), cp.n1, cp.n2, tol);
    } else if (id == "nilpotent_sum") {
      const NilpotentPair np = gen.commuting_nilpotent_pair(kMaxDim, kMaxP);
      v = verify_nilpotent_sum(np.t, np.q, np.m, np.n, np.p, tol);
    } else if (id == "tensor") {
      const int d1 = gen.uniform_int(1, 3);
      const int d2 = gen.uniform_int(1, static_cast<int>(kMaxDim) / d1);
      const QuasiInstance a = gen.quasi_instance_upto(static_cast<std::size_t>(d1), kMaxN);
      const QuasiInstance b = gen.quasi_instance_upto(static_cast<std::size_t>(d2), kMaxN);
      v = verify_tensor(a.t, b.t, a.m, b.m, a.n, b.n, tol, i % 2 == 0);
    } else if (id == "strict_scaling") {
      const QuasiInstance qi = gen.quasi_instance_upto(kMaxDim, kMaxN);
      v = verify_strict_scaling(qi.t, qi.m, qi.n, gen.uniform_int(1, 3), gen.random_vector(qi.t.dim()), tol);
    } else if (id == "strict_product") {
      if (i % 4 == 3) {
        // Vanishing criterion: T = X (+) lambda, S = 0 (+) mu with X strict 3-isometric.
        OperatorMatrix x = strict_jordan_pair_block(gen);
        while (!is_strict(x, 3, 0, tol)) x = strict_jordan_pair_block(gen);
        DenseMatrix t = DenseMatrix::Zero(3, 3);
        DenseMatrix s = DenseMatrix::Zero(3, 3);
        t.topLeftCorner(2, 2) = x.dense();
        t(2, 2) = gen.unimodular();
        s(2, 2) = gen.unimodular();
        const DenseMatrix w = gen.random_unitary(3).dense();
        v = verify_strict_product_criterion(OperatorMatrix(w * t * w.adjoint()), OperatorMatrix(w * s * w.adjoint()),
                                            3, 1, 1, tol);
      } else {
        const CommutingPair cp = gen.doubly_commuting_pair(kMaxDim);
        v = verify_strict_product_criterion(cp.t, cp.s, cp.m, cp.l, std::max(cp.n1, cp.n2), tol);
      }
    } else if (id == "expansion") {
      const int q = gen.uniform_int(0, 4);
      if (i % 2 == 0) {
        const CommutingPair cp = gen.doubly_commuting_pair(kMaxDim);
        v = verify_expansion_identities(cp.t, cp.s, q, ExpansionMode::Product, tol);
      } else {
        const NilpotentPair np = gen.commuting_nilpotent_pair(kMaxDim, kMaxP);
        v = verify_expansion_identities(np.t, np.q, q, ExpansionMode::Sum, tol);
      }
    } else if (id == "norm_limit") {
      const QuasiInstance qi = gen.quasi_instance_upto(kMaxDim, kMaxN);
      const OperatorMatrix e(gen.gaussian(qi.t.dim(), qi.t.dim()));
      v = verify_norm_limit_continuity(qi.t, qi.m, qi.n, 8, e, tol);
    } else if (id == "power_product") {
      const CommutingPair cp = gen.doubly_commuting_pair(kMaxDim);
      v = verify_power_product(cp.t, cp.s, cp.m, cp.l, cp.n1, cp.n2, gen.uniform_int(1, 3), gen.uniform_int(1, 3),
                               tol);
    } else if (id == "tensor_powers") {
      const int d1 = gen.uniform_int(1, 3);
      const int d2 = gen.uniform_int(1, static_cast<int>(kMaxDim) / d1);
      const QuasiInstance a = gen.quasi_instance_upto(static_cast<std::size_t>(d1), kMaxN);
      const QuasiInstance b = gen.quasi_instance_upto(static_cast<std::size_t>(d2), kMaxN);
      v = verify_tensor_powers(a.t, b.t, a.m, b.m, a.n, b.n, gen.uniform_int(1, 3), gen.uniform_int(1, 3), tol);
    } else if (id == "block_bidiagonal") {
      const int d = gen.uniform_int(2, 3);
      const std::size_t b = d == 2 ? static_cast<std::size_t>(gen.uniform_int(1, 3)) : 2;
      std::vector<OperatorMatrix> blocks;
      std::vector<Complex> alphas;
      std::vector<int> ms;
      std::vector<int> ns;
      // Every fourth instance uses distinct blocks, where the commutation
      // hypothesis fails and the verdict is vacuous.
      const bool distinct = i % 4 == 3;
      QuasiInstance qi;
      for (int j = 0; j < d; ++j) {
        if (j == 0 || distinct) {
          const auto nil = static_cast<std::size_t>(gen.uniform_int(0, static_cast<int>(b) - 1));
          qi = gen.quasi_instance(b - nil, nil);
        }
        blocks.push_back(qi.t);
        ms.push_back(qi.m);
        ns.push_back(qi.n);
        if (j + 1 < d) alphas.push_back(gen.uniform_real(0.3, 1.0) * gen.unimodular());
      }
      v = verify_block_bidiagonal(blocks, alphas, ms, ns, tol);
    } else {
      throw std::invalid_argument("unknown theorem id: " + std::string(id));
    }
    v.instance_digest = "seed=" + std::to_string(seed) + "#" + std::to_string(i) + " " + v.instance_digest;
    out.push_back(std::move(v));
  }
  return out;
}

struct StatedOrder {
  int m;
  int n;
};

std::vector<StatedOrder> stated_orders(std::string_view id) {
  if (id == "nilpotent2") return {{1, 2}};
  if (id == "cube_minus_identity") return {{3, 1}};
  if (id == "product_pair") return {{3, 1}, {3, 2}};
  if (id == "noncommuting_sum") return {{3, 1}, {1, 0}};
  if (id == "jordan_unit") return {{3, 1}};
  if (id == "shift_2q2i") return {{2, 2}};
  if (id == "shift_sqrt_ratio") return {{2, 1}};
  throw UnknownExampleError("unknown catalog id: " + std::string(id));
}

}  // namespace

std::vector<std::string> theorem_ids() {
  return {"power_closure", "gcd_min",    "product",       "nilpotent_sum", "tensor",
          "strict_scaling", "strict_product", "expansion", "norm_limit",    "power_product",
          "tensor_powers", "block_bidiagonal"};
}

std::vector<TheoremVerdict> run_randomized(std::string_view theorem_id, int count, std::uint64_t seed,
                                           const ToleranceProfile& tol) {
  if (count < 0) throw std::invalid_argument("run_randomized: negative count");
  const auto ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), theorem_id) == ids.end()) {
    throw std::invalid_argument("unknown theorem id: " + std::string(theorem_id));
  }
  return randomized(theorem_id, count, seed, tol);
}

std::vector<TheoremVerdict> run_all(int count, std::uint64_t seed, const ToleranceProfile& tol) {
  std::vector<TheoremVerdict> out;
  for (const auto& id : theorem_ids()) {
    auto batch = run_randomized(id, count, seed, tol);
    out.insert(out.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
  }
  return out;
}

TheoremVerdict verify_catalog(std::string_view theorem_id, std::string_view catalog_id, int k, std::uint64_t seed,
                              const ToleranceProfile& tol) {
  const auto ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), theorem_id) == ids.end()) {
    throw std::invalid_argument("unknown theorem id: " + std::string(theorem_id));
  }
  if (k < 0) throw std::invalid_argument("verify_catalog: negative k");
  const CatalogEntry entry = catalog_example(catalog_id);
  const auto stated = stated_orders(catalog_id);
  const OperatorMatrix& t = entry.matrices[0];
  const auto [m, n] = stated[0];
  const bool pair = entry.matrices.size() > 1;
  auto need_pair = [&]() {
    if (!pair) {
      throw std::invalid_argument("theorem " + std::string(theorem_id) + " needs two operators; catalog entry " +
                                  std::string(catalog_id) + " has one");
    }
  };
  const int kk = std::max(k, 1);
  TheoremVerdict v;
  if (theorem_id == "power_closure") {
    v = verify_power_closure(t, m, n, kk, tol);
  } else if (theorem_id == "gcd_min") {
    v = verify_gcd_min(t, kk, kk + 1, m, m, n, tol);
  } else if (theorem_id == "strict_scaling") {
    InstanceGenerator gen(seed);
    v = verify_strict_scaling(t, m, n, kk, gen.random_vector(t.dim()), tol);
  } else if (theorem_id == "norm_limit") {
    v = verify_norm_limit_continuity(t, m, n, 8, seed, tol);
  } else if (theorem_id == "tensor") {
    const OperatorMatrix& s = pair ? entry.matrices[1] : t;
    const StatedOrder so = pair ? stated[1] : stated[0];
    v = verify_tensor(t, s, m, so.m, n, so.n, tol);
  } else if (theorem_id == "tensor_powers") {
    const OperatorMatrix& s = pair ? entry.matrices[1] : t;
    const StatedOrder so = pair ? stated[1] : stated[0];
    v = verify_tensor_powers(t, s, m, so.m, n, so.n, kk, kk + 1, tol);
  } else if (theorem_id == "block_bidiagonal") {
    std::vector<OperatorMatrix> blocks = entry.matrices;
    if (!pair) blocks.push_back(t);
    std::vector<int> ms;
    std::vector<int> ns;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const StatedOrder so = pair ? stated[j] : stated[0];
      ms.push_back(so.m);
      ns.push_back(so.n);
    }
    v = verify_block_bidiagonal(blocks, std::vector<Complex>(blocks.size() - 1, Complex(1.0)), ms, ns, tol);
  } else {
    need_pair();
    const OperatorMatrix& s = entry.matrices[1];
    const StatedOrder so = stated[1];
    if (theorem_id == "product") {
      v = verify_product(t, s, m, so.m, n, so.n, tol);
    } else if (theorem_id == "power_product") {
      v = verify_power_product(t, s, m, so.m, n, so.n, kk, kk + 1, tol);
    } else if (theorem_id == "nilpotent_sum") {
      v = verify_nilpotent_sum(t, s, m, n, nilpotency_order(s, tol).value_or(0), tol);
    } else if (theorem_id == "strict_product") {
      v = verify_strict_product_criterion(t, s, m, so.m, std::max(n, so.n), tol);
    } else {
      const ExpansionMode mode = nilpotency_order(s, tol) ? ExpansionMode::Sum : ExpansionMode::Product;
      v = verify_expansion_identities(t, s, k, mode, tol);
    }
  }
  v.instance_digest = std::string(catalog_id) + " " + v.instance_digest;
  if (entry.flagged()) append(v.notes, "catalog entry flagged: " + entry.discrepancy);
  return v;
}

}  // namespace qil
