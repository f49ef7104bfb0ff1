#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcorr/errors.hpp"
#include "qcorr/werner.hpp"
#include "qcorr/witnesses.hpp"
#include "test_support.hpp"

using namespace qcorr;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kSqrt3 = std::sqrt(3.0);

JointDistribution werner_dist(double p, WitnessKind kind, std::size_t n) {
  return joint_distribution(werner_state(p), canonical_settings(kind, n));
}

// The three-setting functional written out correlator by correlator:
//   A0(I + B0 + B1 + B2) + A1(I + B0 + B1 - B2) + A2(B0 - B1) - B0 - B1
double bell3322_by_terms(const JointDistribution& d) {
  auto e = [&](std::size_t i, std::size_t j) { return expectation(d, i, j); };
  return alice_marginal(d, 0) + e(0, 0) + e(0, 1) + e(0, 2) + alice_marginal(d, 1) + e(1, 0) +
         e(1, 1) - e(1, 2) + e(2, 0) - e(2, 1) - bob_marginal(d, 0) - bob_marginal(d, 1);
}

}  // namespace

TEST(ConditionEntanglement, SixAntiCorrelationEntries) {
  const ConditionTensor v = condition_entanglement(3);
  EXPECT_EQ(v.nonzero_count(), 6U);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          EXPECT_EQ(v(a, b, i, j), (i == j && a != b) ? 1.0 : 0.0);
        }
      }
    }
  }
  EXPECT_THROW(condition_entanglement(4), std::invalid_argument);
  EXPECT_THROW(condition_entanglement(1), std::invalid_argument);
}

TEST(ConditionEntanglement, SingletAndMixedValues) {
  const ConditionTensor v = condition_entanglement(3);
  const auto singlet = werner_dist(1.0, WitnessKind::Entanglement, 3);
  // Oracle: sum of Pd by hand.
  double by_hand = 0.0;
  for (std::size_t i = 0; i < 3; ++i) by_hand += singlet(0, 1, i, i) + singlet(1, 0, i, i);
  EXPECT_NEAR(by_hand, 3.0, 1e-12);
  EXPECT_NEAR(functional_value(v, singlet), by_hand, 1e-12);

  for (std::size_t n : {2U, 3U}) {
    EXPECT_NEAR(functional_value(condition_entanglement(n), werner_dist(0.0, WitnessKind::Entanglement, n)),
                0.5 * static_cast<double>(n), 1e-12);
  }
}

TEST(ConditionSteering, EntriesAndValues) {
  const ConditionTensor v2 = condition_steering(2);
  EXPECT_EQ(v2.nonzero_count(), 8U);
  for (double x : v2.entries()) EXPECT_TRUE(x == 0.0 || std::abs(x) == 1.0);

  const ConditionTensor v3 = condition_steering(3);
  EXPECT_NEAR(functional_value(v3, werner_dist(1.0, WitnessKind::Steering, 3)), 3.0, 1e-12);
  EXPECT_NEAR(functional_value(v3, werner_dist(0.0, WitnessKind::Steering, 3)), 0.0, 1e-12);
  EXPECT_THROW(condition_steering(5), std::invalid_argument);
}

TEST(ConditionChsh, EntriesAndTsirelsonValue) {
  const ConditionTensor v = condition_chsh();
  EXPECT_EQ(v(0, 0, 1, 1), -1.0);
  EXPECT_EQ(v(1, 1, 0, 1), 1.0);
  EXPECT_EQ(v.n(), 2U);

  const auto d = werner_dist(1.0, WitnessKind::BellCHSH, 2);
  // Oracle: four expectation calls.
  const double four = std::abs(expectation(d, 0, 0) + expectation(d, 0, 1) + expectation(d, 1, 0) -
                               expectation(d, 1, 1));
  EXPECT_NEAR(four, 2.0 * kSqrt2, 1e-12);
  EXPECT_NEAR(functional_value(v, d), four, 1e-12);
}

TEST(ConditionBell3322, MaximallyMixedGivesZero) {
  const auto d = werner_dist(0.0, WitnessKind::Bell3322, 3);
  EXPECT_NEAR(bell3322_by_terms(d), 0.0, 1e-12);
  EXPECT_NEAR(functional_value(condition_bell3322(), d), 0.0, 1e-12);
}

TEST(ConditionBell3322, WernerValues) {
  const ConditionTensor v = condition_bell3322();
  const auto singlet = werner_dist(1.0, WitnessKind::Bell3322, 3);
  const double oracle = bell3322_by_terms(singlet);
  EXPECT_GT(oracle, 4.0);
  EXPECT_NEAR(functional_value(v, singlet), oracle, 1e-12);
  EXPECT_NEAR(functional_value(v, werner_dist(0.8, WitnessKind::Bell3322, 3)), 4.0, 1e-6);
}

TEST(ConditionBell3322, MatchesTermExpansionOnRandomStates) {
  std::mt19937_64 rng(3322);
  const ConditionTensor v = condition_bell3322();
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = joint_distribution(fixtures::random_density(rng), fixtures::random_settings(rng, 3));
    EXPECT_NEAR(functional_value(v, d), bell3322_by_terms(d), 1e-12);
  }
}

TEST(ConditionTensor, CommunicationCost) {
  EXPECT_NEAR(condition_entanglement(2).cbits(), 2.0, 1e-12);
  EXPECT_NEAR(condition_entanglement(3).cbits(), 2.58, 0.01);
  EXPECT_NEAR(condition_steering(2).cbits(), 1.0, 1e-12);
  EXPECT_NEAR(condition_steering(3).cbits(), 1.58, 0.01);
  EXPECT_EQ(condition_chsh().cbits(), 0.0);
  EXPECT_EQ(condition_bell3322().cbits(), 0.0);
}

TEST(ConditionTensor, RejectsBadShapes) {
  EXPECT_THROW(ConditionTensor::custom(2, std::vector<double>(3, 0.0)), ShapeError);
  EXPECT_THROW(ConditionTensor::custom(1, {0.0, std::nan(""), 0.0, 0.0}), InvariantError);
}

TEST(Evaluate, WernerExamples) {
  {
    const ConditionTensor v = condition_entanglement(3);
    for (double p : {0.0, 0.25, 0.5, 1.0}) {
      const auto r = evaluate(v, werner_dist(p, WitnessKind::Entanglement, 3), 2.0, algebraic_max(v));
      EXPECT_NEAR(r.value, 1.5 * (1.0 + p), 1e-12);
    }
    const auto at = evaluate(v, werner_dist(1.0 / 3.0, WitnessKind::Entanglement, 3), 2.0, 3.0);
    EXPECT_NEAR(at.value, 2.0, 1e-12);
    EXPECT_FALSE(at.violated);
  }
  {
    const ConditionTensor v = condition_steering(3);
    const auto at = evaluate(v, werner_dist(1.0 / kSqrt3, WitnessKind::Steering, 3), kSqrt3, 3.0);
    EXPECT_NEAR(at.value, kSqrt3, 1e-12);
    EXPECT_FALSE(at.violated);
    const auto above = evaluate(v, werner_dist(0.6, WitnessKind::Steering, 3), kSqrt3, 3.0);
    EXPECT_NEAR(above.value, 1.8, 1e-12);
    EXPECT_TRUE(above.violated);
  }
  {
    const ConditionTensor v = condition_chsh();
    const auto at = evaluate(v, werner_dist(1.0 / kSqrt2, WitnessKind::BellCHSH, 2), 2.0, algebraic_max(v));
    EXPECT_NEAR(at.value, 2.0, 1e-12);
    EXPECT_NEAR(at.algebraic_max, 4.0, 1e-12);
    EXPECT_NEAR(at.normalized, 0.5, 1e-12);
    EXPECT_NEAR(at.entropy, 1.0, 1e-12);
  }
}

TEST(Evaluate, ResultInvariants) {
  std::mt19937_64 rng(5);
  for (WitnessKind kind : {WitnessKind::Entanglement, WitnessKind::Steering, WitnessKind::BellCHSH,
                           WitnessKind::Bell3322}) {
    const std::size_t n = kind == WitnessKind::Bell3322 ? 3 : 2;
    const ConditionTensor v = condition_for(kind, n);
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = joint_distribution(fixtures::random_density(rng), fixtures::random_settings(rng, n));
      const auto r = evaluate(v, d, 1.0, algebraic_max(v));
      EXPECT_EQ(r.violated, r.value > r.bound + 1e-9);
      EXPECT_NEAR(r.normalized, std::abs(r.value) / r.algebraic_max, 1e-15);
      EXPECT_NEAR(r.entropy, binary_entropy(r.normalized), 1e-15);
      EXPECT_EQ(r.kind, kind);
      EXPECT_EQ(r.n, n);
    }
  }
}

TEST(Evaluate, ShapeMismatch) {
  const auto d = werner_dist(0.5, WitnessKind::Steering, 2);
  EXPECT_THROW(evaluate(condition_steering(3), d, 1.0, 3.0), ShapeError);
}

TEST(AlgebraicMax, BuiltIns) {
  EXPECT_EQ(algebraic_max(condition_entanglement(3)), 3.0);
  EXPECT_EQ(algebraic_max(condition_steering(3)), 3.0);
  EXPECT_EQ(algebraic_max(condition_steering(2)), 2.0);
  EXPECT_EQ(algebraic_max(condition_chsh()), 4.0);
}

TEST(EntropyDegree, Examples) {
  const auto chsh = entropy_degree(2.0, 4.0);
  EXPECT_NEAR(chsh.normalized, 0.5, 1e-15);
  EXPECT_NEAR(chsh.entropy, 1.0, 1e-15);

  const auto ent = entropy_degree(2.0, 3.0);
  EXPECT_NEAR(ent.normalized, 2.0 / 3.0, 1e-15);
  // H(2/3) = log2(3) - 2/3
  EXPECT_NEAR(ent.entropy, std::log2(3.0) - 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(ent.entropy, 0.9183, 5e-4);

  const auto steer = entropy_degree(kSqrt3, 3.0);
  EXPECT_NEAR(steer.normalized, 0.5774, 5e-5);
  EXPECT_NEAR(steer.entropy, 0.9828, 5e-4);
}

TEST(EntropyDegree, Edges) {
  EXPECT_EQ(entropy_degree(0.0, 3.0).entropy, 0.0);
  EXPECT_EQ(entropy_degree(3.0, 3.0).entropy, 0.0);
  EXPECT_THROW(entropy_degree(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(entropy_degree(1.0, -2.0), std::invalid_argument);
  EXPECT_THROW(entropy_degree(5.0, 4.0), std::invalid_argument);
}

TEST(WitnessProperty, EntanglementEqualsSumOfAntiCorrelation) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    const auto d = joint_distribution(fixtures::random_density(rng), fixtures::random_settings(rng, n));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += anti_corr_prob(d, i);
    EXPECT_NEAR(functional_value(condition_entanglement(n), d), sum, 1e-12);
  }
}

TEST(WitnessProperty, SteeringFromAntiCorrelation) {
  // Werner correlators on shared axes are all -p: uniformly signed.
  for (std::size_t n : {2U, 3U}) {
    for (int k = 0; k <= 20; ++k) {
      const auto d = werner_dist(0.05 * k, WitnessKind::Steering, n);
      double pd = 0.0;
      for (std::size_t i = 0; i < n; ++i) pd += anti_corr_prob(d, i);
      EXPECT_NEAR(functional_value(condition_steering(n), d), std::abs(2.0 * pd - static_cast<double>(n)), 1e-12);
    }
  }
}

TEST(WitnessProperty, ChshTensorEqualsFourCorrelators) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = joint_distribution(fixtures::random_density(rng), fixtures::random_settings(rng, 2));
    const double four = std::abs(expectation(d, 0, 0) + expectation(d, 0, 1) + expectation(d, 1, 0) -
                                 expectation(d, 1, 1));
    EXPECT_NEAR(functional_value(condition_chsh(), d), four, 1e-12);
  }
}

TEST(WitnessProperty, NestingOnWernerGrid) {
  const auto chsh = condition_chsh();
  const auto steer = condition_steering(2);
  const auto ent = condition_entanglement(2);
  for (int k = 0; k <= 20; ++k) {
    const double p = 0.05 * k;
    const bool bell = functional_value(chsh, werner_dist(p, WitnessKind::BellCHSH, 2)) > 2.0 + 1e-9;
    const bool steering = functional_value(steer, werner_dist(p, WitnessKind::Steering, 2)) > kSqrt2 + 1e-9;
    const bool entangled = functional_value(ent, werner_dist(p, WitnessKind::Entanglement, 2)) > 1.5 + 1e-9;
    if (bell) EXPECT_TRUE(steering) << p;
    if (steering) EXPECT_TRUE(entangled) << p;
  }
}

TEST(WitnessProperty, AffineInWernerParameter) {
  for (WitnessKind kind : {WitnessKind::Entanglement, WitnessKind::Steering, WitnessKind::BellCHSH,
                           WitnessKind::Bell3322}) {
    const std::size_t n = kind == WitnessKind::Bell3322 ? 3 : (kind == WitnessKind::BellCHSH ? 2 : 3);
    const ConditionTensor v = condition_for(kind, n);
    const double f0 = functional_value(v, werner_dist(0.1, kind, n));
    const double f1 = functional_value(v, werner_dist(0.4, kind, n));
    const double f2 = functional_value(v, werner_dist(0.9, kind, n));
    // Collinearity of (0.1, f0), (0.4, f1), (0.9, f2).
    EXPECT_NEAR((f1 - f0) / 0.3, (f2 - f1) / 0.5, 1e-9) << to_string(kind);
  }
}

TEST(LinearForm, RowValuesMatchJointDistribution) {
  std::mt19937_64 rng(303);
  for (WitnessKind kind : {WitnessKind::Entanglement, WitnessKind::Steering, WitnessKind::BellCHSH,
                           WitnessKind::Bell3322}) {
    const std::size_t n = kind == WitnessKind::Bell3322 ? 3 : 2;
    const ConditionTensor v = condition_for(kind, n);
    const LinearForm form = linear_form(v);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = fixtures::random_density(rng);
      const SettingPair s = fixtures::random_settings(rng, n);
      std::vector<Bloch> a, b;
      for (const auto& o : s.alice()) a.push_back(o.bloch());
      for (const auto& o : s.bob()) b.push_back(o.bloch());
      const Eigen::VectorXd rows = row_values(form, bloch_decomposition(rho), a, b);
      const auto d = joint_distribution(rho, s);
      EXPECT_NEAR(rows.sum(), weighted_sum(v, d), 1e-12);
      EXPECT_NEAR(apply_rule(value_rule(kind), rows), functional_value(v, d), 1e-12);
    }
  }
}

TEST(CanonicalSettings, Bell3322AliceAlignsWithBobCombinations) {
  const SettingPair s = canonical_settings(WitnessKind::Bell3322, 3);
  ASSERT_EQ(s.n(), 3U);
  // On the singlet <A_i B_j> = -a_i . b_j, so Alice points against each row
  // combination of Bob's vectors.
  const auto& b = s.bob();
  const std::array<Bloch, 3> rows = {
      Bloch(b[0].bloch() + b[1].bloch() + b[2].bloch()),
      Bloch(b[0].bloch() + b[1].bloch() - b[2].bloch()),
      Bloch(b[0].bloch() - b[1].bloch()),
  };
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR((s.alice()[i].bloch() + rows[i].normalized()).norm(), 0.0, 1e-12);
  }
  EXPECT_THROW(canonical_settings(WitnessKind::Custom, 2), std::invalid_argument);
}

TEST(WitnessKind, ParseRoundTrip) {
  for (WitnessKind kind : {WitnessKind::Entanglement, WitnessKind::Steering, WitnessKind::BellCHSH,
                           WitnessKind::Bell3322}) {
    EXPECT_EQ(parse_witness_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_witness_kind("3322"), WitnessKind::Bell3322);
  EXPECT_FALSE(parse_witness_kind("bogus").has_value());
}
