#include "qcorr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nelder_mead.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

namespace {

constexpr double kTieTolerance = 1e-12;

Bloch from_angles(const Eigen::VectorXd& angles) {
  const double theta = angles(0);
  const double phi = angles(1);
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Eigen::VectorXd to_angles(const Bloch& v) {
  Eigen::VectorXd angles(2);
  angles(0) = std::acos(std::clamp(v.z(), -1.0, 1.0));
  angles(1) = std::atan2(v.y(), v.x());
  return angles;
}

struct SphereOptimum {
  Bloch argmax;
  double value;
  double grid_value;
};

// Scan a Fibonacci grid (first maximal point wins), then polish with
// Nelder-Mead over spherical angles, restarting from each optimum.
template <class F>
SphereOptimum maximize_on_sphere(F&& objective, const GridOptions& grid) {
  const std::vector<Bloch> points = fibonacci_sphere(grid.points);
  Bloch best = points.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (const Bloch& p : points) {
    const double v = objective(p);
    if (v > best_value) {
      best_value = v;
      best = p;
    }
  }
  const double grid_value = best_value;

  auto negated = [&](const Eigen::VectorXd& angles) { return -objective(from_angles(angles)); };
  Eigen::VectorXd start = to_angles(best);
  double step = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(grid.points));
  for (int round = 0; round <= grid.restarts; ++round) {
    detail::SimplexOptions opts;
    opts.initial_step = step;
    const detail::SimplexResult r = detail::nelder_mead_minimize(negated, start, opts);
    if (-r.f > best_value) {
      best_value = -r.f;
      best = from_angles(r.x);
      start = r.x;
    }
    step *= 0.1;
  }
  return {best, best_value, grid_value};
}

bool orthonormal(std::span<const BlochObservable> settings) {
  for (std::size_t i = 0; i < settings.size(); ++i) {
    for (std::size_t j = i + 1; j < settings.size(); ++j) {
      if (std::abs(settings[i].bloch().dot(settings[j].bloch())) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::Enumeration:
      return "enumeration";
    case BoundMethod::GridRefine:
      return "grid_refine";
    case BoundMethod::Analytic:
      return "analytic";
    case BoundMethod::Seesaw:
      break;
  }
  return "seesaw";
}

JointDistribution deterministic_distribution(const DeterministicStrategy& strategy) {
  const std::size_t n = strategy.alice_outputs.size();
  if (strategy.bob_outputs.size() != n) throw ShapeError("deterministic_distribution: length mismatch");
  std::vector<double> table(4 * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      table[JointDistribution::index(n, strategy.alice_outputs[i], strategy.bob_outputs[j], i, j)] = 1.0;
    }
  }
  return JointDistribution(n, std::move(table));
}

BoundReport bound_bell_deterministic(const ConditionTensor& tensor) {
  const std::size_t n = tensor.n();
  if (n > 10) throw std::invalid_argument("bound_bell_deterministic: n > 10 is not enumerable");
  const ValueRule rule = value_rule(tensor.kind());
  const std::size_t count = std::size_t{1} << n;

  auto bits = [n](std::size_t mask) {
    std::vector<int> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<int>((mask >> (n - 1 - k)) & 1U);
    return out;
  };

  BoundReport report;
  report.method = BoundMethod::Enumeration;
  report.bound = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd rows(static_cast<Eigen::Index>(n));
  for (std::size_t am = 0; am < count; ++am) {
    const std::vector<int> x = bits(am);
    for (std::size_t bm = 0; bm < count; ++bm) {
      const std::vector<int> y = bits(bm);
      rows.setZero();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows(static_cast<Eigen::Index>(i)) += tensor(x[i], y[j], i, j);
      }
      const double value = apply_rule(rule, rows);
      ++report.evaluations;
      if (value > report.bound + kTieTolerance) {
        report.bound = value;
        report.strategy = DeterministicStrategy{x, y};
        report.optimal_count = 1;
      } else if (std::abs(value - report.bound) <= kTieTolerance) {
        ++report.optimal_count;
      }
    }
  }
  return report;
}

std::vector<Bloch> fibonacci_sphere(std::size_t count) {
  if (count == 0) throw std::invalid_argument("fibonacci_sphere: count must be positive");
  std::vector<Bloch> points;
  points.reserve(count);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
    const double radius = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(k);
    points.emplace_back(radius * std::cos(phi), radius * std::sin(phi), z);
  }
  return points;
}

BoundReport bound_steering_bloch(std::span<const BlochObservable> bob_settings,
                                 const GridOptions& grid) {
  if (bob_settings.empty()) throw std::invalid_argument("bound_steering_bloch: no settings");
  auto objective = [&](const Bloch& r) {
    double total = 0.0;
    for (const BlochObservable& b : bob_settings) total += std::abs(r.dot(b.bloch()));
    return total;
  };
  const SphereOptimum opt = maximize_on_sphere(objective, grid);

  BoundReport report;
  report.method = BoundMethod::GridRefine;
  report.bound = opt.value;
  report.bob = {opt.argmax};
  report.evaluations = grid.points;
  if (orthonormal(bob_settings)) {
    report.analytic = std::sqrt(static_cast<double>(bob_settings.size()));
  }
  // Alice's optimal announcement for setting i is the sign of r . b_i.
  for (const BlochObservable& b : bob_settings) {
    report.alice.push_back(opt.argmax.dot(b.bloch()) >= 0.0 ? b.bloch() : Bloch(-b.bloch()));
  }
  return report;
}

BoundReport bound_entanglement_product(const SettingPair& settings, const GridOptions& grid) {
  const std::size_t n = settings.n();
  auto bob_field = [&](const Bloch& a) {
    Bloch v = Bloch::Zero();
    for (std::size_t i = 0; i < n; ++i) v += a.dot(settings.alice()[i].bloch()) * settings.bob()[i].bloch();
    return v;
  };
  auto objective = [&](const Bloch& a) {
    return 0.5 * (static_cast<double>(n) + bob_field(a).norm());
  };
  const SphereOptimum opt = maximize_on_sphere(objective, grid);

  BoundReport report;
  report.method = BoundMethod::GridRefine;
  report.bound = opt.value;
  report.evaluations = grid.points;
  report.alice = {opt.argmax};
  const Bloch field = bob_field(opt.argmax);
  report.bob = {field.norm() > 0.0 ? Bloch(-field.normalized()) : Bloch(Bloch::UnitZ())};

  bool identical = true;
  for (std::size_t i = 0; i < n; ++i) {
    identical = identical && (settings.alice()[i].bloch() - settings.bob()[i].bloch()).norm() < 1e-12;
  }
  if (identical && orthonormal(settings.alice())) {
    report.analytic = 0.5 * (static_cast<double>(n) + 1.0);
  }
  return report;
}

BoundReport quantum_maximum_seesaw(const ConditionTensor& tensor, const DensityMatrix& state,
                                   std::uint64_t seed, const SeesawOptions& options) {
  if (options.starts < 1) throw std::invalid_argument("quantum_maximum_seesaw: starts must be >= 1");
  const std::size_t n = tensor.n();
  const ValueRule rule = value_rule(tensor.kind());
  const LinearForm form = linear_form(tensor);
  const BlochDecomposition bloch = bloch_decomposition(state);

  auto weights_for = [rule](const Eigen::VectorXd& rows) {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(rows.size());
    if (rule == ValueRule::AbsoluteTotal && rows.sum() < 0.0) w = -w;
    if (rule == ValueRule::AbsolutePerRow) {
      for (Eigen::Index i = 0; i < rows.size(); ++i) w(i) = rows(i) < 0.0 ? -1.0 : 1.0;
    }
    return w;
  };

  BoundReport report;
  report.method = BoundMethod::Seesaw;
  report.bound = -std::numeric_limits<double>::infinity();
  for (int start = 0; start < options.starts; ++start) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(start)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&] {
      Bloch v;
      do {
        v = Bloch(gauss(rng), gauss(rng), gauss(rng));
      } while (v.norm() < 1e-8);
      return Bloch(v.normalized());
    };
    std::vector<Bloch> alice(n), bob(n);
    for (auto& v : alice) v = random_unit();
    for (auto& v : bob) v = random_unit();

    double value = apply_rule(rule, row_values(form, bloch, alice, bob));
    bool converged = false;
    for (int it = 0; it < options.max_iterations; ++it) {
      alice = best_response_alice(form, bloch, bob, weights_for(row_values(form, bloch, alice, bob)), alice);
      bob = best_response_bob(form, bloch, alice, weights_for(row_values(form, bloch, alice, bob)), bob);
      const double next = apply_rule(rule, row_values(form, bloch, alice, bob));
      const double gain = next - value;
      value = std::max(value, next);
      if (gain < options.tolerance) {
        converged = true;
        break;
      }
    }
    report.start_values.push_back(value);
    report.converged = report.converged && converged;
    ++report.evaluations;
    if (value > report.bound + kTieTolerance) {
      report.bound = value;
      report.alice = alice;
      report.bob = bob;
    }
  }
  return report;
}

BoundReport quantum_maximum_seesaw(WitnessKind kind, const DensityMatrix& state, std::size_t n,
                                   std::uint64_t seed, const SeesawOptions& options) {
  return quantum_maximum_seesaw(condition_for(kind, n), state, seed, options);
}

BoundReport classical_bound(WitnessKind kind, const SettingPair& settings, const GridOptions& grid) {
  switch (kind) {
    case WitnessKind::Entanglement: {
      BoundReport r = bound_entanglement_product(settings, grid);
      if (settings.n() == 2) {
        r.published = 1.0;
        r.note = "published constant C_1^2 = 1 is below the product-state maximum 3/2, which also "
                 "matches the p > 1/2 entanglement threshold";
      } else if (settings.n() == 3) {
        r.published = 2.0;
      }
      return r;
    }
    case WitnessKind::Steering: {
      BoundReport r = bound_steering_bloch(settings.bob(), grid);
      r.published = std::sqrt(static_cast<double>(settings.n()));
      return r;
    }
    case WitnessKind::BellCHSH: {
      BoundReport r = bound_bell_deterministic(condition_chsh());
      r.published = 2.0;
      return r;
    }
    case WitnessKind::Bell3322: {
      BoundReport r = bound_bell_deterministic(condition_bell3322());
      r.published = 4.0;
      return r;
    }
    case WitnessKind::Custom:
      break;
  }
  throw std::invalid_argument("classical_bound: custom functionals have no built-in bound");
}

WitnessSetup canonical_setup(WitnessKind kind, std::size_t n, const GridOptions& grid) {
  ConditionTensor tensor = condition_for(kind, n);
  SettingPair settings = canonical_settings(kind, tensor.n());
  BoundReport report = classical_bound(kind, settings, grid);
  const double bound = report.effective_bound();
  const double amax = algebraic_max(tensor);
  return WitnessSetup{std::move(tensor), std::move(settings), std::move(report), bound, amax};
}

}  // namespace qcorr
