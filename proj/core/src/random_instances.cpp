#include "qil/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qil/constructions.hpp"

namespace qil {

namespace {

DenseMatrix direct_sum(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out = DenseMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

DenseMatrix rotate(const DenseMatrix& t, const DenseMatrix& w) { return w * t * w.adjoint(); }

}  // namespace

int InstanceGenerator::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

double InstanceGenerator::uniform_real(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Complex InstanceGenerator::unimodular() {
  return std::polar(1.0, uniform_real(0.0, 2.0 * std::numbers::pi));
}

Complex InstanceGenerator::gaussian_complex() {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng_);
  const double im = g(rng_);
  return {re, im};
}

DenseMatrix InstanceGenerator::gaussian(std::size_t rows, std::size_t cols, double scale) {
  DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = scale * gaussian_complex();
  }
  return m;
}

Vector InstanceGenerator::random_vector(std::size_t dim) {
  return gaussian(dim, 1).col(0);
}

OperatorMatrix InstanceGenerator::random_unitary(std::size_t dim) {
  const DenseMatrix g = gaussian(dim, dim);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ();
  // Fix the column phases against diag(R) so the distribution is Haar.
  const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return OperatorMatrix(std::move(q));
}

OperatorMatrix InstanceGenerator::generic(std::size_t dim) {
  return OperatorMatrix(gaussian(dim, dim, 1.0 / std::sqrt(2.0 * static_cast<double>(dim))));
}

QuasiInstance InstanceGenerator::quasi_instance(std::size_t isometric_dim, std::size_t nilpotent_dim,
                                                int max_jordan, bool rotate_basis) {
  if (isometric_dim == 0) throw std::invalid_argument("quasi_instance: isometric part is empty");
  QuasiInstance inst;
  inst.isometric_dim = isometric_dim;
  inst.nilpotent_dim = nilpotent_dim;

  const auto a = static_cast<Eigen::Index>(isometric_dim);
  DenseMatrix iso = DenseMatrix::Zero(a, a);
  Eigen::Index pos = 0;
  inst.m = 1;
  while (pos < a) {
    const bool jordan = max_jordan >= 2 && pos + 1 < a && uniform_int(0, 2) > 0;
    const Complex lambda = unimodular();
    iso(pos, pos) = lambda;
    if (jordan) {
      iso(pos + 1, pos + 1) = lambda;
      iso(pos, pos + 1) = uniform_real(0.4, 1.0) * unimodular();
      inst.m = 3;
      pos += 2;
    } else {
      pos += 1;
    }
  }

  const auto s = static_cast<Eigen::Index>(nilpotent_dim);
  DenseMatrix nil = DenseMatrix::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i + 1; j < s; ++j) {
      nil(i, j) = j == i + 1 ? uniform_real(0.5, 1.0) * unimodular() : 0.5 * gaussian_complex();
    }
  }
  inst.n = static_cast<int>(nilpotent_dim);

  DenseMatrix t = direct_sum(iso, nil);
  t.topRightCorner(a, s) = gaussian(isometric_dim, nilpotent_dim, 0.7);
  if (rotate_basis) t = rotate(t, random_unitary(isometric_dim + nilpotent_dim).dense());
  inst.t = OperatorMatrix(std::move(t));
  return inst;
}

QuasiInstance InstanceGenerator::quasi_instance_upto(std::size_t max_dim, int max_n, int max_jordan) {
  const int s = uniform_int(0, std::min(max_n, static_cast<int>(max_dim) - 1));
  const int a = uniform_int(1, static_cast<int>(max_dim) - s);
  return quasi_instance(static_cast<std::size_t>(a), static_cast<std::size_t>(s), max_jordan);
}

namespace {

QuasiInstance instance_of_dim(InstanceGenerator& gen, std::size_t dim, int max_n) {
  const int s = gen.uniform_int(0, std::min(max_n, static_cast<int>(dim) - 1));
  return gen.quasi_instance(dim - static_cast<std::size_t>(s), static_cast<std::size_t>(s));
}

}  // namespace

CommutingPair InstanceGenerator::doubly_commuting_pair(std::size_t max_dim) {
  CommutingPair pair;
  const bool use_kron = max_dim >= 4 && uniform_int(0, 1) == 0;
  if (use_kron) {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (std::size_t d1 = 1; d1 <= max_dim; ++d1) {
      for (std::size_t d2 = 1; d1 * d2 <= max_dim; ++d2) {
        if (d1 * d2 >= 2) shapes.emplace_back(d1, d2);
      }
    }
    const auto [d1, d2] = shapes[static_cast<std::size_t>(uniform_int(0, static_cast<int>(shapes.size()) - 1))];
    const QuasiInstance x = instance_of_dim(*this, d1, 3);
    const QuasiInstance y = instance_of_dim(*this, d2, 3);
    const DenseMatrix w = random_unitary(d1 * d2).dense();
    pair.t = OperatorMatrix(rotate(kron(x.t, OperatorMatrix::identity(d2)).dense(), w));
    pair.s = OperatorMatrix(rotate(kron(OperatorMatrix::identity(d1), y.t).dense(), w));
    pair.m = x.m;
    pair.n1 = x.n;
    pair.l = y.m;
    pair.n2 = y.n;
    pair.kind = "kron";
  } else {
    const int dx = uniform_int(1, static_cast<int>(max_dim) - 1);
    const int dy = uniform_int(1, static_cast<int>(max_dim) - dx);
    const QuasiInstance x = instance_of_dim(*this, static_cast<std::size_t>(dx), 3);
    const QuasiInstance y = instance_of_dim(*this, static_cast<std::size_t>(dy), 3);
    const Complex lambda = unimodular();
    const Complex mu = unimodular();
    const DenseMatrix w = random_unitary(static_cast<std::size_t>(dx + dy)).dense();
    pair.t = OperatorMatrix(rotate(direct_sum(x.t.dense(), lambda * DenseMatrix::Identity(dy, dy)), w));
    pair.s = OperatorMatrix(rotate(direct_sum(mu * DenseMatrix::Identity(dx, dx), y.t.dense()), w));
    pair.m = x.m;
    pair.n1 = x.n;
    pair.l = y.m;
    pair.n2 = y.n;
    pair.kind = "block";
  }
  return pair;
}

NilpotentPair InstanceGenerator::commuting_nilpotent_pair(std::size_t max_dim, int max_p) {
  NilpotentPair pair;
  const int p = uniform_int(1, std::min(max_p, static_cast<int>(max_dim)));
  pair.p = p;
  const auto pu = static_cast<std::size_t>(p);
  const bool use_kron = uniform_int(0, 1) == 0 && max_dim / pu >= 1;
  if (use_kron) {
    const auto dx = static_cast<std::size_t>(uniform_int(1, static_cast<int>(max_dim / pu)));
    const QuasiInstance x = instance_of_dim(*this, dx, 3);
    const DenseMatrix w = random_unitary(dx * pu).dense();
    pair.t = OperatorMatrix(rotate(kron(x.t, OperatorMatrix::identity(pu)).dense(), w));
    pair.q = OperatorMatrix(rotate(kron(OperatorMatrix::identity(dx), nilpotent_jordan(pu, p)).dense(), w));
    pair.m = x.m;
    pair.n = x.n;
    pair.kind = "kron";
  } else if (max_dim > pu) {
    const int dx = uniform_int(1, static_cast<int>(max_dim - pu));
    const QuasiInstance x = instance_of_dim(*this, static_cast<std::size_t>(dx), 3);
    const DenseMatrix j = nilpotent_jordan(pu, p).dense();
    // lambda I + c J is a strict (2p-1)-isometry when c != 0; keep m <= 4.
    const double c = 2 * p - 1 <= 4 ? uniform_real(0.3, 0.8) : 0.0;
    const Complex lambda = unimodular();
    const auto pi = static_cast<Eigen::Index>(p);
    const DenseMatrix second = lambda * DenseMatrix::Identity(pi, pi) + c * j;
    const DenseMatrix w = random_unitary(static_cast<std::size_t>(dx) + pu).dense();
    pair.t = OperatorMatrix(rotate(direct_sum(x.t.dense(), second), w));
    pair.q = OperatorMatrix(rotate(direct_sum(DenseMatrix::Zero(dx, dx), j), w));
    pair.m = std::max(x.m, c != 0.0 ? 2 * p - 1 : 1);
    pair.n = x.n;
    pair.kind = "block";
  } else {
    // p == max_dim: T must be a scalar unimodular multiple of the identity.
    const Complex lambda = unimodular();
    pair.t = lambda * OperatorMatrix::identity(pu);
    pair.q = nilpotent_jordan(pu, p);
    pair.m = 1;
    pair.n = 0;
    pair.kind = "scalar";
  }
  return pair;
}

}  // namespace qil
