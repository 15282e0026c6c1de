#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "qil/matrix.hpp"

namespace qil {

/// A generated n-quasi-m-isometry with its known lattice position.
///
/// T = W [[A, B], [0, N]] W* with W unitary, A a direct sum of blocks
/// lambda I + c J (|lambda| = 1, block size 1 or 2, so A is a strict
/// 1- or 3-isometry), N strictly upper triangular with a nonzero
/// superdiagonal (nilpotent of order exactly dim N) and B arbitrary.
struct QuasiInstance {
  OperatorMatrix t;
  int m = 1;  // strict order
  int n = 0;  // minimal quasi order
  std::size_t isometric_dim = 0;
  std::size_t nilpotent_dim = 0;
};

/// A doubly commuting pair with the lattice positions of both factors.
struct CommutingPair {
  OperatorMatrix t;
  OperatorMatrix s;
  int m = 1;
  int l = 1;
  int n1 = 0;
  int n2 = 0;
  std::string kind;
};

/// T commuting with a nilpotent Q of order p.
struct NilpotentPair {
  OperatorMatrix t;
  OperatorMatrix q;
  int m = 1;
  int n = 0;
  int p = 1;
  std::string kind;
};

/// Seeded source of random operators; identical seeds give identical streams.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  int uniform_int(int lo, int hi);
  double uniform_real(double lo, double hi);
  Complex unimodular();
  Complex gaussian_complex();
  DenseMatrix gaussian(std::size_t rows, std::size_t cols, double scale = 1.0);
  Vector random_vector(std::size_t dim);
  OperatorMatrix random_unitary(std::size_t dim);
  /// Dense Gaussian matrix scaled to operator norm around one.
  OperatorMatrix generic(std::size_t dim);

  /// isometric_dim >= 1; nilpotent_dim may be 0. max_jordan in {1, 2}.
  QuasiInstance quasi_instance(std::size_t isometric_dim, std::size_t nilpotent_dim,
                               int max_jordan = 2, bool rotate = true);
  /// Random split with total dimension <= max_dim and nilpotent part <= max_n.
  QuasiInstance quasi_instance_upto(std::size_t max_dim, int max_n, int max_jordan = 2);

  /// Either (X (x) I, I (x) Y) or a block-diagonal pair, rotated by a common unitary.
  CommutingPair doubly_commuting_pair(std::size_t max_dim);
  /// Either (X (x) I, I (x) J_p) or (X (+) (lambda I + cJ), 0 (+) J_p).
  NilpotentPair commuting_nilpotent_pair(std::size_t max_dim, int max_p);

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qil
