#pragma once

// Simulated over-complete two-qubit state tomography: every pair of local
// Pauli axes (9 setting pairs) with both outcomes on each side, i.e. 36 joint
// projectors, followed by linear inversion and projection onto the physical
// states.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qcorr/qlinalg.hpp"

namespace qcorr {

enum class SamplingMode {
  Multinomial,  // fixed number of shots per setting pair
  Poisson,      // independent Poisson counts with mean shots * P
  Analytic,     // no sampling: frequencies are the Born probabilities
};

struct TomographySpec {
  static constexpr std::size_t kAxes = 3;
  static constexpr std::size_t kSettingPairs = kAxes * kAxes;
  static constexpr std::size_t kJointProjectors = kSettingPairs * 4;

  std::uint64_t shots_per_setting = 10000;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::Multinomial;
};

// Setting pair s = 3 * alice_axis + bob_axis with axes ordered x, y, z;
// outcome k = 2 * a + b.
constexpr std::size_t setting_index(std::size_t alice_axis, std::size_t bob_axis) {
  return TomographySpec::kAxes * alice_axis + bob_axis;
}

struct CountRecord {
  using Block = std::array<std::uint64_t, 4>;
  std::array<Block, TomographySpec::kSettingPairs> counts{};
  // Present in analytic mode; takes precedence over counts.
  std::optional<std::array<std::array<double, 4>, TomographySpec::kSettingPairs>> exact;

  // Relative frequency of outcome k in setting pair s, normalized per pair.
  // Throws std::domain_error when a pair has no counts.
  double frequency(std::size_t s, std::size_t k) const;
  std::uint64_t total(std::size_t s) const;
};

// Throws std::invalid_argument for zero shots outside analytic mode.
CountRecord simulate_counts(const DensityMatrix& state, const TomographySpec& spec);

struct Reconstruction {
  // E(mu, nu) = <sigma_mu (x) sigma_nu> with index 0 = identity, 1..3 = x,y,z.
  Eigen::Matrix4d pauli_expectations;
  ComplexMatrix rho_linear;
  DensityMatrix rho_physical;
};

// Linear inversion rho = (1/4) sum E(mu,nu) sigma_mu (x) sigma_nu. Single-qubit
// terms are averaged over the three setting pairs that contain them.
Reconstruction reconstruct(const CountRecord& counts);

// Single-party estimates of <sigma_k (x) I> (side 0) or <I (x) sigma_k> (side 1)
// from each of the three setting pairs that measure axis k on that side.
std::array<double, 3> redundant_marginal_estimates(const CountRecord& counts, int side,
                                                   std::size_t axis);

struct ReconstructionResult {
  Reconstruction last;
  std::vector<double> fidelities;  // one per repetition, in repetition order
  double fidelity_to_target = 0.0;  // mean
  double fidelity_std = 0.0;        // sample standard deviation
};

// Runs simulate_counts + reconstruct `repetitions` times; repetition r uses
// seed derive_seed(spec.seed, r). Throws std::invalid_argument for fewer than
// two repetitions.
ReconstructionResult fidelity_experiment(const DensityMatrix& state, const PureState& target,
                                         const TomographySpec& spec, std::size_t repetitions);

// q |psi><psi| + (1 - q) I/4 with <psi|rho|psi> = fidelity, fidelity in [1/4, 1].
DensityMatrix depolarized_with_fidelity(const PureState& target, double fidelity);

// CSV with header `setting_i,setting_j,a,b,count`; setting_i and setting_j are
// Alice's and Bob's axis indices (0 = x, 1 = y, 2 = z).
void write_counts_csv(std::ostream& out, const CountRecord& counts);
// Throws std::runtime_error on malformed input or missing setting pairs.
CountRecord read_counts_csv(std::istream& in);

}  // namespace qcorr
