#pragma once

// Werner states rho_W = p |singlet><singlet| + (1 - p) I/4, their preparation
// as a one-sided Pauli twirl of |psi+> = (|00> + |11>)/sqrt2, and the mixing
// parameter above which each functional is violated.

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "qcorr/bounds.hpp"
#include "qcorr/qlinalg.hpp"
#include "qcorr/witnesses.hpp"

namespace qcorr {

class WernerParams {
 public:
  // Throws std::invalid_argument unless 0 <= p <= 1.
  explicit WernerParams(double p);
  double p() const { return p_; }

 private:
  double p_;
};

DensityMatrix werner_state(const WernerParams& params);
DensityMatrix werner_state(double p);

// Weights of the four conjugations (I (x) s) rho_psi+ (I (x) s):
//   alpha  s = sigma_y  (maps |psi+> to the singlet up to a phase)
//   beta   s = sigma_x
//   gamma  s = I
//   delta  s = sigma_z
// The dominant Werner weight belongs on sigma_y. Attaching it to sigma_x
// instead mixes towards the triplet (|01> + |10>)/sqrt2, not the singlet.
struct MixtureWeights {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  bool normalized = false;

  double total() const { return alpha + beta + gamma + delta; }
  // Throws InvariantError on negative weights or a zero total.
  MixtureWeights normalize() const;
};

// alpha = (1 + 3p)/4, beta = gamma = delta = (1 - p)/4.
MixtureWeights weights_for_p(double p);

// sum_k w_k (I (x) s_k) rho_psi+ (I (x) s_k). Throws InvariantError unless
// weights.normalized is set and the weights sum to one.
DensityMatrix twirl_mixture_state(const MixtureWeights& weights);

// Pauli-indexed form used by twirl_mixture_state: weights for I, sx, sy, sz.
DensityMatrix pauli_twirl(const std::array<double, 4>& weights_i_x_y_z);

// Integer repetition counts used to realize six values of p with 20 runs:
// alpha runs of the singlet-producing term and beta runs of each other term.
struct IntegerWeightRow {
  double p;
  int alpha;
  int beta;

  int total() const { return alpha + 3 * beta; }
  MixtureWeights weights() const;
};

std::span<const IntegerWeightRow> integer_weight_table();
// Row for p when p matches a table entry to 1e-12.
std::optional<IntegerWeightRow> integer_row_for(double p);

// Functional of a built-in kind on werner_state(p) with canonical settings,
// computed through the full joint-distribution pipeline.
double witness_value_of_p(WitnessKind kind, std::size_t n, double p);
double witness_value_of_p(const WitnessSetup& setup, double p);

struct ThresholdResult {
  // Smallest violating p, or empty when the functional never exceeds the
  // bound on [0, 1].
  std::optional<double> p;
  double bound = 0.0;
  int iterations = 0;
};

// Bisection on p for F(p) = bound. Throws std::runtime_error if the
// functional is not affine and non-decreasing on [0, 1].
ThresholdResult violation_threshold(WitnessKind kind, std::size_t n, double tol = 1e-9);
ThresholdResult violation_threshold(const WitnessSetup& setup, double tol = 1e-9);

// Thresholds quoted from the literature and not computed here.
inline constexpr double kInfiniteSettingSteeringThreshold = 0.5;
inline constexpr double kBell465SettingThreshold = 0.7056;

}  // namespace qcorr
