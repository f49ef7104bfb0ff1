#include "qcorr/witnesses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double sign_of(int bit) { return bit == 0 ? 1.0 : -1.0; }

void require_two_or_three(std::size_t n, const char* what) {
  if (n != 2 && n != 3) {
    throw std::invalid_argument(std::string(what) + ": only n = 2 or 3 is supported, got " +
                                std::to_string(n));
  }
}

constexpr std::array<std::array<double, 3>, 3> k3322Correlators = {{
    {1.0, 1.0, 1.0},
    {1.0, 1.0, -1.0},
    {1.0, -1.0, 0.0},
}};
constexpr std::array<double, 3> k3322Alice = {1.0, 1.0, 0.0};
constexpr std::array<double, 3> k3322Bob = {-1.0, -1.0, 0.0};

Bloch normalized_or(const Bloch& field, const Bloch& fallback) {
  const double norm = field.norm();
  if (norm < 1e-14) return fallback;
  return field / norm;
}

}  // namespace

std::string_view to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::Entanglement:
      return "entanglement";
    case WitnessKind::Steering:
      return "steering";
    case WitnessKind::BellCHSH:
      return "chsh";
    case WitnessKind::Bell3322:
      return "bell3322";
    case WitnessKind::Custom:
      break;
  }
  return "custom";
}

std::optional<WitnessKind> parse_witness_kind(std::string_view name) {
  if (name == "entanglement") return WitnessKind::Entanglement;
  if (name == "steering") return WitnessKind::Steering;
  if (name == "chsh" || name == "bell-chsh" || name == "bellchsh") return WitnessKind::BellCHSH;
  if (name == "bell3322" || name == "3322" || name == "i3322") return WitnessKind::Bell3322;
  if (name == "custom") return WitnessKind::Custom;
  return std::nullopt;
}

ValueRule value_rule(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::Steering:
      return ValueRule::AbsolutePerRow;
    case WitnessKind::BellCHSH:
      return ValueRule::AbsoluteTotal;
    default:
      return ValueRule::Linear;
  }
}

// ---------------------------------------------------------------------------
// ConditionTensor

ConditionTensor::ConditionTensor(WitnessKind kind, std::size_t n, std::vector<double> v,
                                 double cbits)
    : kind_(kind), n_(n), v_(std::move(v)), cbits_(cbits) {
  if (n_ == 0) throw ShapeError("ConditionTensor: n must be positive");
  if (v_.size() != 4 * n_ * n_) {
    throw ShapeError("ConditionTensor: expected " + std::to_string(4 * n_ * n_) + " entries");
  }
  for (double x : v_) {
    if (!std::isfinite(x)) throw InvariantError("ConditionTensor: non-finite entry");
  }
  if (!(cbits_ >= 0.0)) throw InvariantError("ConditionTensor: cbits must be non-negative");
}

ConditionTensor ConditionTensor::custom(std::size_t n, std::vector<double> v) {
  return ConditionTensor(WitnessKind::Custom, n, std::move(v), 0.0);
}

double ConditionTensor::operator()(int a, int b, std::size_t i, std::size_t j) const {
  return v_[JointDistribution::index(n_, a, b, i, j)];
}

std::size_t ConditionTensor::nonzero_count(double tol) const {
  return static_cast<std::size_t>(
      std::count_if(v_.begin(), v_.end(), [tol](double x) { return std::abs(x) > tol; }));
}

ConditionTensor condition_entanglement(std::size_t n) {
  require_two_or_three(n, "condition_entanglement");
  std::vector<double> v(4 * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[JointDistribution::index(n, 0, 1, i, i)] = 1.0;
    v[JointDistribution::index(n, 1, 0, i, i)] = 1.0;
  }
  // Bob announces one of 2n (setting, outcome) pairs.
  return ConditionTensor(WitnessKind::Entanglement, n, std::move(v),
                         std::log2(2.0 * static_cast<double>(n)));
}

ConditionTensor condition_steering(std::size_t n) {
  require_two_or_three(n, "condition_steering");
  std::vector<double> v(4 * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) v[JointDistribution::index(n, a, b, i, i)] = sign_of(a) * sign_of(b);
    }
  }
  // Bob announces one of n settings.
  return ConditionTensor(WitnessKind::Steering, n, std::move(v), std::log2(static_cast<double>(n)));
}

ConditionTensor condition_chsh() {
  constexpr std::size_t n = 2;
  std::vector<double> v(4 * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int parity = (a + b + static_cast<int>(i * j)) % 2;
          v[JointDistribution::index(n, a, b, i, j)] = sign_of(parity);
        }
      }
    }
  }
  return ConditionTensor(WitnessKind::BellCHSH, n, std::move(v), 0.0);
}

ConditionTensor condition_bell3322() {
  constexpr std::size_t n = 3;
  std::vector<double> v(4 * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          v[JointDistribution::index(n, a, b, i, j)] =
              k3322Correlators[i][j] * sign_of(a) * sign_of(b) +
              (j == 0 ? k3322Alice[i] * sign_of(a) : 0.0) +
              (i == 0 ? k3322Bob[j] * sign_of(b) : 0.0);
        }
      }
    }
  }
  return ConditionTensor(WitnessKind::Bell3322, n, std::move(v), 0.0);
}

ConditionTensor condition_for(WitnessKind kind, std::size_t n) {
  switch (kind) {
    case WitnessKind::Entanglement:
      return condition_entanglement(n);
    case WitnessKind::Steering:
      return condition_steering(n);
    case WitnessKind::BellCHSH:
      if (n != 0 && n != 2) throw std::invalid_argument("condition_for: CHSH has n = 2");
      return condition_chsh();
    case WitnessKind::Bell3322:
      if (n != 0 && n != 3) throw std::invalid_argument("condition_for: 3322 has n = 3");
      return condition_bell3322();
    case WitnessKind::Custom:
      break;
  }
  throw std::invalid_argument("condition_for: custom tensors have no built-in form");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Eigen::VectorXd row_sums(const ConditionTensor& tensor, const JointDistribution& dist) {
  if (tensor.n() != dist.n()) {
    throw ShapeError("functional: tensor has n=" + std::to_string(tensor.n()) +
                     " but distribution has n=" + std::to_string(dist.n()));
  }
  const std::size_t n = tensor.n();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) rows(static_cast<Eigen::Index>(i)) += tensor(a, b, i, j) * dist(a, b, i, j);
      }
    }
  }
  return rows;
}

}  // namespace

double apply_rule(ValueRule rule, const Eigen::VectorXd& rows) {
  switch (rule) {
    case ValueRule::AbsoluteTotal:
      return std::abs(rows.sum());
    case ValueRule::AbsolutePerRow:
      return rows.cwiseAbs().sum();
    case ValueRule::Linear:
      break;
  }
  return rows.sum();
}

double weighted_sum(const ConditionTensor& tensor, const JointDistribution& dist) {
  return row_sums(tensor, dist).sum();
}

double functional_value(const ConditionTensor& tensor, const JointDistribution& dist) {
  return apply_rule(value_rule(tensor.kind()), row_sums(tensor, dist));
}

double algebraic_max(const ConditionTensor& tensor) {
  const std::size_t n = tensor.n();
  Eigen::VectorXd row_hi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd row_lo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double hi = tensor(0, 0, i, j);
      double lo = hi;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          hi = std::max(hi, tensor(a, b, i, j));
          lo = std::min(lo, tensor(a, b, i, j));
        }
      }
      row_hi(static_cast<Eigen::Index>(i)) += hi;
      row_lo(static_cast<Eigen::Index>(i)) += lo;
    }
  }
  switch (value_rule(tensor.kind())) {
    case ValueRule::AbsoluteTotal:
      return std::max(row_hi.sum(), -row_lo.sum());
    case ValueRule::AbsolutePerRow:
      return row_hi.cwiseMax(-row_lo).sum();
    case ValueRule::Linear:
      break;
  }
  return row_hi.sum();
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

EntropyDegree entropy_degree(double value, double algebraic_max) {
  if (!(algebraic_max > 0.0)) {
    throw std::invalid_argument("entropy_degree: algebraic maximum must be positive");
  }
  const double magnitude = std::abs(value);
  if (magnitude > algebraic_max + 1e-9) {
    throw std::invalid_argument("entropy_degree: |value| exceeds the algebraic maximum");
  }
  const double normalized = std::min(magnitude / algebraic_max, 1.0);
  return {normalized, binary_entropy(normalized)};
}

WitnessResult evaluate(const ConditionTensor& tensor, const JointDistribution& dist, double bound,
                       double algebraic_max) {
  WitnessResult r;
  r.kind = tensor.kind();
  r.n = tensor.n();
  r.value = functional_value(tensor, dist);
  r.bound = bound;
  r.violated = r.value > bound + kDefaultTolerances.violation_margin;
  r.algebraic_max = algebraic_max;
  const EntropyDegree degree = entropy_degree(r.value, algebraic_max);
  r.normalized = degree.normalized;
  r.entropy = degree.entropy;
  return r;
}

// ---------------------------------------------------------------------------
// Bloch form

LinearForm linear_form(const ConditionTensor& tensor) {
  const auto n = static_cast<Eigen::Index>(tensor.n());
  LinearForm form;
  form.n = tensor.n();
  form.row_constant = Eigen::VectorXd::Zero(n);
  form.alice = Eigen::VectorXd::Zero(n);
  form.row_bob = Eigen::MatrixXd::Zero(n, n);
  form.corr = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double v = 0.25 * tensor(a, b, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
          form.row_constant(i) += v;
          form.alice(i) += v * sign_of(a);
          form.row_bob(i, j) += v * sign_of(b);
          form.corr(i, j) += v * sign_of(a) * sign_of(b);
        }
      }
    }
  }
  return form;
}

Eigen::VectorXd row_values(const LinearForm& form, const BlochDecomposition& state,
                           const std::vector<Bloch>& alice, const std::vector<Bloch>& bob) {
  const auto n = static_cast<Eigen::Index>(form.n);
  if (alice.size() != form.n || bob.size() != form.n) throw ShapeError("row_values: setting count");
  Eigen::VectorXd rows = form.row_constant;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Bloch& ai = alice[static_cast<std::size_t>(i)];
    rows(i) += form.alice(i) * ai.dot(state.alice);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Bloch& bj = bob[static_cast<std::size_t>(j)];
      rows(i) += form.row_bob(i, j) * state.bob.dot(bj);
      rows(i) += form.corr(i, j) * ai.dot(state.correlation * bj);
    }
  }
  return rows;
}

std::vector<Bloch> best_response_alice(const LinearForm& form, const BlochDecomposition& state,
                                       const std::vector<Bloch>& bob,
                                       const Eigen::VectorXd& row_weights,
                                       const std::vector<Bloch>& current) {
  const auto n = static_cast<Eigen::Index>(form.n);
  std::vector<Bloch> out(current);
  for (Eigen::Index i = 0; i < n; ++i) {
    Bloch field = form.alice(i) * state.alice;
    for (Eigen::Index j = 0; j < n; ++j) {
      field += form.corr(i, j) * (state.correlation * bob[static_cast<std::size_t>(j)]);
    }
    field *= row_weights(i);
    out[static_cast<std::size_t>(i)] = normalized_or(field, current[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<Bloch> best_response_bob(const LinearForm& form, const BlochDecomposition& state,
                                     const std::vector<Bloch>& alice,
                                     const Eigen::VectorXd& row_weights,
                                     const std::vector<Bloch>& current) {
  const auto n = static_cast<Eigen::Index>(form.n);
  std::vector<Bloch> out(current);
  for (Eigen::Index j = 0; j < n; ++j) {
    Bloch field = Bloch::Zero();
    for (Eigen::Index i = 0; i < n; ++i) {
      field += row_weights(i) * form.row_bob(i, j) * state.bob;
      field += row_weights(i) * form.corr(i, j) *
               (state.correlation.transpose() * alice[static_cast<std::size_t>(i)]);
    }
    out[static_cast<std::size_t>(j)] = normalized_or(field, current[static_cast<std::size_t>(j)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical settings

SettingPair canonical_settings(WitnessKind kind, std::size_t n) {
  const auto sx = BlochObservable::along(Axis::X);
  const auto sy = BlochObservable::along(Axis::Y);
  const auto sz = BlochObservable::along(Axis::Z);
  switch (kind) {
    case WitnessKind::Entanglement:
    case WitnessKind::Steering:
      require_two_or_three(n, "canonical_settings");
      if (n == 2) return SettingPair::symmetric({sx, sz});
      return SettingPair::symmetric({sx, sy, sz});
    case WitnessKind::BellCHSH: {
      const double h = 1.0 / std::numbers::sqrt2;
      return SettingPair({sz, sx}, {BlochObservable(Bloch(h, 0.0, h)), BlochObservable(Bloch(-h, 0.0, h))});
    }
    case WitnessKind::Bell3322: {
      const double third = std::numbers::pi / 3.0;
      const std::vector<Bloch> bob = {
          Bloch::UnitZ(),
          Bloch(std::sin(third), 0.0, std::cos(third)),
          Bloch(std::sin(2.0 * third), 0.0, std::cos(2.0 * third)),
      };
      const LinearForm form = linear_form(condition_bell3322());
      const BlochDecomposition singlet =
          bloch_decomposition(DensityMatrix::from_pure(PureState::singlet()));
      const std::vector<Bloch> alice = best_response_alice(
          form, singlet, bob, Eigen::VectorXd::Ones(3), std::vector<Bloch>(3, Bloch::UnitZ()));
      std::vector<BlochObservable> a_obs, b_obs;
      for (const Bloch& v : alice) a_obs.emplace_back(v);
      for (const Bloch& v : bob) b_obs.emplace_back(v);
      return SettingPair(std::move(a_obs), std::move(b_obs));
    }
    case WitnessKind::Custom:
      break;
  }
  throw std::invalid_argument("canonical_settings: custom functionals have no canonical settings");
}

}  // namespace qcorr
