#pragma once

// Classical (local) bounds of the witness functionals and their quantum
// maxima.
//
// The classical set depends on the scenario:
//   Bell           deterministic local strategies (exhaustive enumeration)
//   Steering       Bob holds a pure local state r; Alice picks the sign of
//                  each announced outcome freely, so F = sum_i |r . b_i|
//   Entanglement   pure product states a (x) b; mixtures cannot do better
//                  because the functional is linear in the state.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/qlinalg.hpp"
#include "qcorr/witnesses.hpp"

namespace qcorr {

enum class BoundMethod { Enumeration, GridRefine, Analytic, Seesaw };

std::string_view to_string(BoundMethod method);

struct DeterministicStrategy {
  std::vector<int> alice_outputs;
  std::vector<int> bob_outputs;
};

// Deterministic table P(a,b|i,j) = [a = alice(i)] [b = bob(j)].
JointDistribution deterministic_distribution(const DeterministicStrategy& strategy);

struct BoundReport {
  double bound = 0.0;
  BoundMethod method = BoundMethod::Enumeration;

  // Closed-form value when the settings admit one (orthonormal axes).
  std::optional<double> analytic;
  // Constant printed for this functional in the literature, when it differs
  // from or is checked against the computed value.
  std::optional<double> published;
  std::string note;

  // Argmax: a strategy (enumeration) or Bloch vectors (grid / see-saw).
  std::optional<DeterministicStrategy> strategy;
  std::vector<Bloch> alice;
  std::vector<Bloch> bob;

  // Strategies enumerated, grid points scanned, or see-saw starts.
  std::size_t evaluations = 0;
  // Number of strategies attaining the bound (enumeration only).
  std::size_t optimal_count = 0;
  // See-saw only: the converged value of every start, and whether every
  // start met the improvement tolerance before the iteration cap.
  std::vector<double> start_values;
  bool converged = true;

  // The value to compare functionals against: analytic when available.
  double effective_bound() const { return analytic.value_or(bound); }
};

// Exhaustive maximum of the functional over all 2^n x 2^n deterministic
// strategies. Ties resolve to the lexicographically smallest strategy
// (Alice's outputs first). Throws std::invalid_argument for n > 10.
BoundReport bound_bell_deterministic(const ConditionTensor& tensor);

struct GridOptions {
  // Fibonacci-lattice points on each sphere scanned before refinement.
  std::size_t points = 20000;
  // Nelder-Mead restarts from the refined optimum.
  int restarts = 3;
};

// Fibonacci lattice of `count` unit vectors.
std::vector<Bloch> fibonacci_sphere(std::size_t count);

// max_r sum_i |r . b_i| over unit vectors r. Throws std::invalid_argument on
// empty settings.
BoundReport bound_steering_bloch(std::span<const BlochObservable> bob_settings,
                                 const GridOptions& grid = {});

// max over pure product states of sum_i Pd(A_i, B_i)
//   = max_a (n + |sum_i (a . A_i) B_i|) / 2,
// Bob's optimal state being anti-aligned with that sum.
BoundReport bound_entanglement_product(const SettingPair& settings, const GridOptions& grid = {});

struct SeesawOptions {
  int starts = 20;
  int max_iterations = 200;
  double tolerance = 1e-10;
};

// Alternating maximization over Alice's and Bob's Bloch vectors from
// random starts; returns the best start. Deterministic given the seed.
BoundReport quantum_maximum_seesaw(const ConditionTensor& tensor, const DensityMatrix& state,
                                   std::uint64_t seed, const SeesawOptions& options = {});
BoundReport quantum_maximum_seesaw(WitnessKind kind, const DensityMatrix& state, std::size_t n,
                                   std::uint64_t seed, const SeesawOptions& options = {});

// Everything needed to evaluate one built-in functional.
struct WitnessSetup {
  ConditionTensor tensor;
  SettingPair settings;
  BoundReport bound_report;
  double bound;
  double algebraic_max;
};

// Built-in tensor, canonical settings and the computed classical bound.
WitnessSetup canonical_setup(WitnessKind kind, std::size_t n, const GridOptions& grid = {});

// Classical bound of a built-in kind for arbitrary settings.
BoundReport classical_bound(WitnessKind kind, const SettingPair& settings,
                            const GridOptions& grid = {});

}  // namespace qcorr
