#include "qil/defect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qil {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ExactArithmeticOverflow("integer coefficient overflow: exact arithmetic required");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ExactArithmeticOverflow("integer coefficient overflow: exact arithmetic required");
  }
  return out;
}

double sign_of(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

void require_nonneg(int m, int n, const char* where) {
  if (m < 0 || n < 0) throw std::invalid_argument(std::string(where) + ": negative order");
}

}  // namespace

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n - k + i) is divisible by i; split i between the factors first.
    const std::int64_t g = std::gcd(c, static_cast<std::int64_t>(i));
    c = checked_mul(c / g, (n - k + i) / (i / g));
  }
  return c;
}

std::int64_t multinomial(std::span<const int> parts) {
  std::int64_t result = 1;
  int running = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    running += p;
    result = checked_mul(result, binomial(running, p));
  }
  return result;
}

void for_each_composition(int total, int parts,
                          const std::function<void(std::span<const int>)>& visit) {
  if (total < 0 || parts < 1) throw std::invalid_argument("for_each_composition: bad arguments");
  std::vector<int> p(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == parts - 1) {
      p[static_cast<std::size_t>(idx)] = remaining;
      visit(p);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      p[static_cast<std::size_t>(idx)] = v;
      rec(idx + 1, remaining - v);
    }
  };
  rec(0, total);
}

IntPolynomial poly_trim(IntPolynomial p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

IntPolynomial poly_add(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(out[i], a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = checked_add(out[i], b[i]);
  return poly_trim(std::move(out));
}

IntPolynomial poly_mul(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.empty() || b.empty()) return {};
  IntPolynomial out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    }
  }
  return poly_trim(std::move(out));
}

OperatorMatrix beta(const OperatorMatrix& t, int m) {
  require_nonneg(m, 0, "beta");
  const auto d = static_cast<Eigen::Index>(t.dim());
  DenseMatrix acc = DenseMatrix::Zero(d, d);
  DenseMatrix power = DenseMatrix::Identity(d, d);
  for (int k = 0; k <= m; ++k) {
    const double c = sign_of(m - k) * static_cast<double>(binomial(m, k));
    acc.noalias() += c * (power.adjoint() * power);
    if (k < m) power = t.dense() * power;
  }
  return OperatorMatrix(0.5 * (acc + acc.adjoint()));
}

DefectReport beta_qn(const OperatorMatrix& t, int m, int n, const ToleranceProfile& tol) {
  require_nonneg(m, n, "beta_qn");
  const auto d = static_cast<Eigen::Index>(t.dim());
  // beta_{m,n}(T) = sum_k (-1)^{m-k} C(m,k) (T^{n+k})* T^{n+k}; the summand
  // norms double as the tolerance scale.
  DenseMatrix acc = DenseMatrix::Zero(d, d);
  DenseMatrix power = matpow(t, n).dense();
  double scale_sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double c = static_cast<double>(binomial(m, k));
    acc.noalias() += sign_of(m - k) * c * (power.adjoint() * power);
    const double nrm = op_norm(power);
    scale_sum += c * nrm * nrm;
    if (k < m) power = t.dense() * power;
  }
  DefectReport report;
  report.m = m;
  report.n = n;
  report.defect = OperatorMatrix(0.5 * (acc + acc.adjoint()));
  report.residual = op_norm(report.defect);
  report.scale = std::max(1.0, scale_sum);
  report.normalized = tol.normalize(report.residual, report.scale);
  report.accepted = tol.accept(report.residual, report.scale);
  return report;
}

double delta(const OperatorMatrix& t, int m, int n, const Vector& x) {
  require_nonneg(m, n, "delta");
  if (static_cast<std::size_t>(x.size()) != t.dim()) {
    throw std::invalid_argument("delta: vector dimension mismatch");
  }
  Vector y = x;
  for (int i = 0; i < n; ++i) y = t.dense() * y;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    sum += sign_of(m - k) * static_cast<double>(binomial(m, k)) * y.squaredNorm();
    if (k < m) y = t.dense() * y;
  }
  return sum;
}

NormSequence norm_sequence(const OperatorMatrix& t, const Vector& x, int n, int count) {
  if (count < 1) throw std::invalid_argument("norm_sequence: K must be positive");
  if (n < 0) throw std::invalid_argument("norm_sequence: negative offset");
  if (static_cast<std::size_t>(x.size()) != t.dim()) {
    throw std::invalid_argument("norm_sequence: vector dimension mismatch");
  }
  NormSequence seq{t, x, n, {}};
  Vector y = x;
  for (int i = 0; i < n; ++i) y = t.dense() * y;
  seq.values.reserve(static_cast<std::size_t>(count) + 1);
  for (int k = 0; k <= count; ++k) {
    seq.values.push_back(y.squaredNorm());
    if (k < count) y = t.dense() * y;
  }
  return seq;
}

std::vector<double> forward_difference(std::span<const double> seq, int order) {
  std::vector<double> cur(seq.begin(), seq.end());
  for (int o = 0; o < order && !cur.empty(); ++o) {
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i + 1] - cur[i];
    cur.pop_back();
  }
  return cur;
}

std::optional<int> finite_diff_strict_order(std::span<const double> seq, double tol) {
  if (seq.size() < 2) {
    throw UndecidableError("finite_diff_strict_order: need at least two terms");
  }
  double max_abs = 0.0;
  for (double v : seq) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0;
  const double cut = tol * max_abs;
  // Certifying order h needs at least one (h+1)-th difference.
  const int max_order = static_cast<int>(seq.size()) - 2;
  for (int h = 0; h <= max_order; ++h) {
    const auto diff = forward_difference(seq, h + 1);
    const bool vanishes =
        std::all_of(diff.begin(), diff.end(), [cut](double v) { return std::abs(v) <= cut; });
    if (vanishes) return h;
  }
  return std::nullopt;
}

IntPolynomial power_identity_lhs(int k, int m, int n) {
  if (k < 1) throw std::invalid_argument("power identity: k must be positive");
  require_nonneg(m, n, "power identity");
  IntPolynomial p(static_cast<std::size_t>(k) * static_cast<std::size_t>(m + n) + 1, 0);
  for (int j = 0; j <= m; ++j) {
    const std::int64_t c = (m - j) % 2 == 0 ? binomial(m, j) : -binomial(m, j);
    const auto e = static_cast<std::size_t>(k) * static_cast<std::size_t>(j + n);
    p[e] = checked_add(p[e], c);
  }
  return poly_trim(std::move(p));
}

IntPolynomial power_identity_rhs(int k, int m, int n) {
  if (k < 1) throw std::invalid_argument("power identity: k must be positive");
  require_nonneg(m, n, "power identity");
  IntPolynomial p;
  for_each_composition(m, k, [&](std::span<const int> parts) {
    const std::int64_t mult = multinomial(parts);
    int shift = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) shift += static_cast<int>(i) * parts[i];
    IntPolynomial term(static_cast<std::size_t>(m + k * n + shift) + 1, 0);
    for (int j = 0; j <= m; ++j) {
      const std::int64_t c = (m - j) % 2 == 0 ? binomial(m, j) : -binomial(m, j);
      const auto e = static_cast<std::size_t>(j + k * n + shift);
      term[e] = checked_add(term[e], checked_mul(mult, c));
    }
    p = poly_add(p, term);
  });
  return poly_trim(std::move(p));
}

bool multinomial_identity_check(int k, int m, int n) {
  return power_identity_lhs(k, m, n) == power_identity_rhs(k, m, n);
}

double delta_power_expansion(const OperatorMatrix& t, int m, int n, int k, const Vector& x) {
  if (k < 1) throw std::invalid_argument("delta_power_expansion: k must be positive");
  double sum = 0.0;
  for_each_composition(m, k, [&](std::span<const int> parts) {
    int shift = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) shift += static_cast<int>(i) * parts[i];
    Vector y = x;
    for (int i = 0; i < shift + (k - 1) * n; ++i) y = t.dense() * y;
    sum += static_cast<double>(multinomial(parts)) * delta(t, m, n, y);
  });
  return sum;
}

}  // namespace qil
