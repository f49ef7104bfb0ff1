#include "qcorr/werner.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr std::array<IntegerWeightRow, 6> kIntegerRows = {{
    {0.0, 5, 5},
    {0.2, 8, 4},
    {0.4, 11, 3},
    {0.6, 14, 2},
    {0.8, 17, 1},
    {1.0, 20, 0},
}};

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": p must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

WernerParams::WernerParams(double p) : p_(p) { require_probability(p, "WernerParams"); }

DensityMatrix werner_state(const WernerParams& params) {
  const double p = params.p();
  const ComplexMatrix singlet = PureState::singlet().projector();
  ComplexMatrix m = p * singlet + (1.0 - p) * identity(4) / 4.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix werner_state(double p) { return werner_state(WernerParams(p)); }

MixtureWeights MixtureWeights::normalize() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0 || delta < 0.0) {
    throw InvariantError("MixtureWeights: weights must be non-negative");
  }
  const double sum = total();
  if (!(sum > 0.0)) throw InvariantError("MixtureWeights: weights sum to zero");
  return {alpha / sum, beta / sum, gamma / sum, delta / sum, true};
}

MixtureWeights weights_for_p(double p) {
  require_probability(p, "weights_for_p");
  const double rest = (1.0 - p) / 4.0;
  return {(1.0 + 3.0 * p) / 4.0, rest, rest, rest, true};
}

DensityMatrix pauli_twirl(const std::array<double, 4>& weights_i_x_y_z) {
  const ComplexMatrix base = PureState::psi_plus().projector();
  const std::array<ComplexMatrix, 4> local = {identity(2), pauli(Axis::X), pauli(Axis::Y),
                                              pauli(Axis::Z)};
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    const ComplexMatrix u = tensor(identity(2), local[k]);
    m += weights_i_x_y_z[k] * (u * base * u.adjoint());
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix twirl_mixture_state(const MixtureWeights& weights) {
  if (!weights.normalized || std::abs(weights.total() - 1.0) > 1e-12) {
    throw InvariantError("twirl_mixture_state: weights must be normalized");
  }
  if (weights.alpha < 0.0 || weights.beta < 0.0 || weights.gamma < 0.0 || weights.delta < 0.0) {
    throw InvariantError("twirl_mixture_state: weights must be non-negative");
  }
  return pauli_twirl({weights.gamma, weights.beta, weights.alpha, weights.delta});
}

MixtureWeights IntegerWeightRow::weights() const {
  return MixtureWeights{static_cast<double>(alpha), static_cast<double>(beta),
                        static_cast<double>(beta), static_cast<double>(beta), false}
      .normalize();
}

std::span<const IntegerWeightRow> integer_weight_table() { return kIntegerRows; }

std::optional<IntegerWeightRow> integer_row_for(double p) {
  for (const IntegerWeightRow& row : kIntegerRows) {
    if (std::abs(row.p - p) <= 1e-12) return row;
  }
  return std::nullopt;
}

double witness_value_of_p(const WitnessSetup& setup, double p) {
  return functional_value(setup.tensor, joint_distribution(werner_state(p), setup.settings));
}

double witness_value_of_p(WitnessKind kind, std::size_t n, double p) {
  require_probability(p, "witness_value_of_p");
  return witness_value_of_p(canonical_setup(kind, n), p);
}

ThresholdResult violation_threshold(const WitnessSetup& setup, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("violation_threshold: tol must be positive");
  auto f = [&](double p) { return witness_value_of_p(setup, p); };

  const double f0 = f(0.0);
  const double f1 = f(1.0);
  const double fmid = f(0.5);
  if (std::abs(fmid - 0.5 * (f0 + f1)) > 1e-9 || f1 < f0 - 1e-12) {
    throw std::runtime_error("violation_threshold: functional is not affine and non-decreasing in p");
  }

  ThresholdResult result;
  result.bound = setup.bound;
  if (f0 > setup.bound) {
    result.p = 0.0;
    return result;
  }
  if (!(f1 > setup.bound)) return result;

  double lo = 0.0;  // not violated
  double hi = 1.0;  // violated
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > setup.bound) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++result.iterations;
  }
  result.p = 0.5 * (lo + hi);
  return result;
}

ThresholdResult violation_threshold(WitnessKind kind, std::size_t n, double tol) {
  return violation_threshold(canonical_setup(kind, n), tol);
}

}  // namespace qcorr
