#pragma once

// Joint outcome statistics P(a,b|i,j) of local +/-1 measurements on a
// two-qubit state, and the correlators derived from them.

#include <cstddef>
#include <span>
#include <vector>

#include "qcorr/qlinalg.hpp"
#include "qcorr/tolerances.hpp"

namespace qcorr {

// Alice's and Bob's ordered measurement settings {A_i}, {B_j}.
class SettingPair {
 public:
  SettingPair(std::vector<BlochObservable> alice, std::vector<BlochObservable> bob);

  // Both parties measure the same observables.
  static SettingPair symmetric(std::vector<BlochObservable> settings);

  std::size_t n() const { return alice_.size(); }
  const std::vector<BlochObservable>& alice() const { return alice_; }
  const std::vector<BlochObservable>& bob() const { return bob_; }

 private:
  std::vector<BlochObservable> alice_;
  std::vector<BlochObservable> bob_;
};

// Dense table P(a,b|i,j) for a,b in {0,1} and i,j in [0, n).
//
// Storage order is row-major over (i, j, a, b):
//   index = ((i * n + j) * 2 + a) * 2 + b
// which is also the nesting order of the JSON form used by the CLI.
class JointDistribution {
 public:
  // Validates entries in [0,1], per-block normalization and no-signalling.
  JointDistribution(std::size_t n, std::vector<double> table,
                    const Tolerances& tol = kDefaultTolerances);

  std::size_t n() const { return n_; }
  double operator()(int a, int b, std::size_t i, std::size_t j) const;
  std::span<const double> table() const { return table_; }

  static std::size_t index(std::size_t n, int a, int b, std::size_t i, std::size_t j) {
    return ((i * n + j) * 2 + static_cast<std::size_t>(a)) * 2 + static_cast<std::size_t>(b);
  }

 private:
  std::size_t n_;
  std::vector<double> table_;
};

// P(a,b|i,j) = Tr[(Pi^{A_i}_a (x) Pi^{B_j}_b) rho]. Traces with an imaginary
// part above Tolerances::imaginary_trace raise InvariantError.
JointDistribution joint_distribution(const DensityMatrix& state, const SettingPair& settings,
                                     const Tolerances& tol = kDefaultTolerances);

// <A_i B_j> = sum_{a,b} (-1)^{a+b} P(a,b|i,j).
double expectation(const JointDistribution& dist, std::size_t i, std::size_t j);

// Pd = P(0,1|i,i) + P(1,0|i,i).
double anti_corr_prob(const JointDistribution& dist, std::size_t i);
// Ps = P(0,0|i,i) + P(1,1|i,i).
double same_prob(const JointDistribution& dist, std::size_t i);

// <A_i>, read from block (i, 0).
double alice_marginal(const JointDistribution& dist, std::size_t i);
// <B_j>, read from block (0, j).
double bob_marginal(const JointDistribution& dist, std::size_t j);

// Largest violation of no-signalling across all settings.
double max_signalling(const JointDistribution& dist);

// rho = (1/4)(I + a.sigma (x) I + I (x) b.sigma + sum_kl T_kl sigma_k (x) sigma_l)
struct BlochDecomposition {
  Bloch alice;               // a_k = Tr[rho sigma_k (x) I]
  Bloch bob;                 // b_l = Tr[rho I (x) sigma_l]
  Eigen::Matrix3d correlation;  // T_kl = Tr[rho sigma_k (x) sigma_l]
};

BlochDecomposition bloch_decomposition(const DensityMatrix& state);

}  // namespace qcorr
