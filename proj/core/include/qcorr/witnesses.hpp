#pragma once

// Local-uncertainty functionals F = sum_{i,j,a,b} V(a,b|i,j) P(a,b|i,j) for a
// condition tensor V, with the classical bound they are compared against and
// the normalized-probability / binary-entropy degree of nonlocality.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/qlinalg.hpp"

namespace qcorr {

enum class WitnessKind { Entanglement, Steering, BellCHSH, Bell3322, Custom };

std::string_view to_string(WitnessKind kind);
// Accepts the canonical names plus "chsh", "bell-chsh", "3322", "i3322".
std::optional<WitnessKind> parse_witness_kind(std::string_view name);

// How the weighted sum is turned into the reported functional value.
//   Linear        F = sum V.P
//   AbsoluteTotal F = |sum V.P|
//   AbsolutePerRow F = sum_i |sum_{j,a,b} V.P|   (one term per Alice setting)
enum class ValueRule { Linear, AbsoluteTotal, AbsolutePerRow };

ValueRule value_rule(WitnessKind kind);

class ConditionTensor {
 public:
  // Entries are indexed like JointDistribution::index.
  ConditionTensor(WitnessKind kind, std::size_t n, std::vector<double> v, double cbits);

  static ConditionTensor custom(std::size_t n, std::vector<double> v);

  WitnessKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  // Classical communication (bits) Bob spends announcing his setting and
  // outcome to Alice in the verification game.
  double cbits() const { return cbits_; }
  double operator()(int a, int b, std::size_t i, std::size_t j) const;
  const std::vector<double>& entries() const { return v_; }

  std::size_t nonzero_count(double tol = 0.0) const;

 private:
  WitnessKind kind_;
  std::size_t n_;
  std::vector<double> v_;
  double cbits_;
};

// V(a,b|i,j) = 1 if i == j and a != b, else 0. Throws std::invalid_argument
// unless n is 2 or 3.
ConditionTensor condition_entanglement(std::size_t n);
// V(a,b|i,j) = (-1)^{a+b} delta_ij. Throws std::invalid_argument unless n is 2 or 3.
ConditionTensor condition_steering(std::size_t n);
// V(a,b|i,j) = (-1)^{a+b+ij}, n = 2.
ConditionTensor condition_chsh();
// Three-setting inequality
//   A0(B0+B1+B2) + A1(B0+B1-B2) + A2(B0-B1) + <A0> + <A1> - <B0> - <B1> <= 4.
// Single-party terms are folded into V inside one partner block (j = 0 for
// Alice, i = 0 for Bob) and spread over the partner's outcomes. Every entry is
// then an integer, so deterministic strategies score exactly.
ConditionTensor condition_bell3322();

// Built-in tensor for (kind, n); n is ignored for BellCHSH and Bell3322 but
// must match their fixed size if given as nonzero.
ConditionTensor condition_for(WitnessKind kind, std::size_t n);

// Raw weighted sum before the kind's absolute-value rule.
double weighted_sum(const ConditionTensor& tensor, const JointDistribution& dist);
// Functional value with the kind's rule applied. Throws ShapeError when the
// setting counts differ.
double functional_value(const ConditionTensor& tensor, const JointDistribution& dist);

// Maximum of the functional over arbitrary (even signalling) tables:
// each (i,j) block independently puts all weight on its best outcome pair.
double algebraic_max(const ConditionTensor& tensor);

struct WitnessResult {
  WitnessKind kind = WitnessKind::Custom;
  std::size_t n = 0;
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
  double normalized = 0.0;
  double entropy = 0.0;
  double algebraic_max = 0.0;
};

WitnessResult evaluate(const ConditionTensor& tensor, const JointDistribution& dist, double bound,
                       double algebraic_max);

double binary_entropy(double p);

struct EntropyDegree {
  double normalized;
  double entropy;
};

// P = |value| / algebraic_max and H(P) in bits. Throws std::invalid_argument
// when algebraic_max <= 0 or |value| exceeds it by more than 1e-9.
EntropyDegree entropy_degree(double value, double algebraic_max);

// The functional expanded in Bloch form. With s_a = (-1)^a,
//   P(a,b|i,j) = (1 + s_a <A_i> + s_b <B_j> + s_a s_b <A_i B_j>) / 4
// so row i of the sum (all terms with Alice setting i) equals
//   row_constant(i) + alice(i) <A_i> + sum_j row_bob(i,j) <B_j>
//     + sum_j corr(i,j) <A_i B_j>.
struct LinearForm {
  std::size_t n = 0;
  Eigen::VectorXd row_constant;
  Eigen::VectorXd alice;
  Eigen::MatrixXd row_bob;
  Eigen::MatrixXd corr;
};

LinearForm linear_form(const ConditionTensor& tensor);

// Per-row sums for a state given by its Bloch decomposition and settings
// given as Bloch vectors. Summing the rows gives weighted_sum().
Eigen::VectorXd row_values(const LinearForm& form, const BlochDecomposition& state,
                           const std::vector<Bloch>& alice, const std::vector<Bloch>& bob);

// Applies the value rule to per-row sums.
double apply_rule(ValueRule rule, const Eigen::VectorXd& rows);

// Alice's settings maximizing sum_i weight(i) * row(i) for fixed Bob
// settings. Rows with zero effective field keep `current`.
std::vector<Bloch> best_response_alice(const LinearForm& form, const BlochDecomposition& state,
                                       const std::vector<Bloch>& bob,
                                       const Eigen::VectorXd& row_weights,
                                       const std::vector<Bloch>& current);
// Bob's settings maximizing sum_i weight(i) * row(i) for fixed Alice settings.
std::vector<Bloch> best_response_bob(const LinearForm& form, const BlochDecomposition& state,
                                     const std::vector<Bloch>& alice,
                                     const Eigen::VectorXd& row_weights,
                                     const std::vector<Bloch>& current);

// Measurement settings used for each built-in functional:
//   Entanglement / Steering: both parties measure {sx, sz} (n=2) or
//     {sx, sy, sz} (n=3).
//   BellCHSH: A = {sz, sx}, B = {(sz+sx)/sqrt2, (sz-sx)/sqrt2}.
//   Bell3322: B = {sz, sin(pi/3)sx + cos(pi/3)sz, sin(2pi/3)sx + cos(2pi/3)sz},
//     A = Alice's best response on the singlet.
SettingPair canonical_settings(WitnessKind kind, std::size_t n);

}  // namespace qcorr
