#include "qcorr/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "qcorr/correlations.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

namespace {

constexpr std::array<Axis, 3> kAxes = {Axis::X, Axis::Y, Axis::Z};

constexpr double sign_of(std::size_t bit) { return bit == 0 ? 1.0 : -1.0; }

std::array<std::array<double, 4>, TomographySpec::kSettingPairs> born_probabilities(
    const DensityMatrix& state) {
  std::vector<BlochObservable> axes;
  for (Axis axis : kAxes) axes.push_back(BlochObservable::along(axis));
  const JointDistribution dist = joint_distribution(state, SettingPair::symmetric(axes));

  std::array<std::array<double, 4>, TomographySpec::kSettingPairs> probs{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) probs[setting_index(i, j)][static_cast<std::size_t>(2 * a + b)] = dist(a, b, i, j);
      }
    }
  }
  return probs;
}

// Runs fn(r) for r in [0, count) on a small worker pool. Each index is
// processed exactly once; callers write into per-index slots.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < count; r = next++) {
        if (failed.load()) return;
        try {
          fn(r);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double CountRecord::frequency(std::size_t s, std::size_t k) const {
  if (exact) return (*exact)[s][k];
  const std::uint64_t sum = total(s);
  if (sum == 0) {
    throw std::domain_error("CountRecord: setting pair " + std::to_string(s) + " has no counts");
  }
  return static_cast<double>(counts[s][k]) / static_cast<double>(sum);
}

std::uint64_t CountRecord::total(std::size_t s) const {
  const Block& block = counts[s];
  return block[0] + block[1] + block[2] + block[3];
}

CountRecord simulate_counts(const DensityMatrix& state, const TomographySpec& spec) {
  if (state.dim() != 4) throw std::invalid_argument("simulate_counts: state must be 4x4");
  if (spec.mode != SamplingMode::Analytic && spec.shots_per_setting == 0) {
    throw std::invalid_argument("simulate_counts: shots_per_setting must be positive");
  }
  const auto probs = born_probabilities(state);
  CountRecord record;
  const auto shots = static_cast<double>(spec.shots_per_setting);

  switch (spec.mode) {
    case SamplingMode::Analytic:
      record.exact = probs;
      for (std::size_t s = 0; s < probs.size(); ++s) {
        for (std::size_t k = 0; k < 4; ++k) {
          record.counts[s][k] = static_cast<std::uint64_t>(std::llround(probs[s][k] * shots));
        }
      }
      break;
    case SamplingMode::Multinomial: {
      std::mt19937_64 rng(spec.seed);
      for (std::size_t s = 0; s < probs.size(); ++s) {
        // Sequential binomial draws of the multinomial.
        std::uint64_t remaining = spec.shots_per_setting;
        double mass = 1.0;
        for (std::size_t k = 0; k < 3; ++k) {
          const double q = mass > 0.0 ? std::clamp(probs[s][k] / mass, 0.0, 1.0) : 0.0;
          std::binomial_distribution<std::uint64_t> draw(remaining, q);
          const std::uint64_t c = remaining > 0 ? draw(rng) : 0;
          record.counts[s][k] = c;
          remaining -= c;
          mass -= probs[s][k];
        }
        record.counts[s][3] = remaining;
      }
      break;
    }
    case SamplingMode::Poisson: {
      std::mt19937_64 rng(spec.seed);
      for (std::size_t s = 0; s < probs.size(); ++s) {
        for (std::size_t k = 0; k < 4; ++k) {
          const double mean = std::max(probs[s][k], 0.0) * shots;
          if (mean <= 0.0) {
            record.counts[s][k] = 0;
            continue;
          }
          std::poisson_distribution<std::uint64_t> draw(mean);
          record.counts[s][k] = draw(rng);
        }
      }
      break;
    }
  }
  return record;
}

Reconstruction reconstruct(const CountRecord& counts) {
  for (std::size_t s = 0; s < TomographySpec::kSettingPairs; ++s) {
    if (!counts.exact && counts.total(s) == 0) {
      throw std::invalid_argument("reconstruct: setting pair " + std::to_string(s) + " is missing");
    }
  }

  Eigen::Matrix4d e = Eigen::Matrix4d::Zero();
  e(0, 0) = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t s = setting_index(i, j);
      double corr = 0.0, alice = 0.0, bob = 0.0;
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          const double f = counts.frequency(s, 2 * a + b);
          corr += sign_of(a) * sign_of(b) * f;
          alice += sign_of(a) * f;
          bob += sign_of(b) * f;
        }
      }
      const auto ii = static_cast<Eigen::Index>(i + 1);
      const auto jj = static_cast<Eigen::Index>(j + 1);
      e(ii, jj) = corr;
      e(ii, 0) += alice / 3.0;
      e(0, jj) += bob / 3.0;
    }
  }

  const std::array<ComplexMatrix, 4> basis = {identity(2), pauli(Axis::X), pauli(Axis::Y),
                                              pauli(Axis::Z)};
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      rho += e(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) * tensor(basis[mu], basis[nu]);
    }
  }
  rho /= 4.0;
  return Reconstruction{e, rho, nearest_density_matrix(rho)};
}

std::array<double, 3> redundant_marginal_estimates(const CountRecord& counts, int side,
                                                   std::size_t axis) {
  if (side != 0 && side != 1) throw std::invalid_argument("redundant_marginal_estimates: side");
  if (axis >= 3) throw std::out_of_range("redundant_marginal_estimates: axis");
  std::array<double, 3> out{};
  for (std::size_t other = 0; other < 3; ++other) {
    const std::size_t s = side == 0 ? setting_index(axis, other) : setting_index(other, axis);
    double m = 0.0;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) m += sign_of(side == 0 ? a : b) * counts.frequency(s, 2 * a + b);
    }
    out[other] = m;
  }
  return out;
}

ReconstructionResult fidelity_experiment(const DensityMatrix& state, const PureState& target,
                                         const TomographySpec& spec, std::size_t repetitions) {
  if (repetitions < 2) throw std::invalid_argument("fidelity_experiment: need at least 2 repetitions");
  std::vector<std::optional<Reconstruction>> runs(repetitions);
  parallel_for(repetitions, [&](std::size_t r) {
    TomographySpec local = spec;
    local.seed = derive_seed(spec.seed, r);
    runs[r] = reconstruct(simulate_counts(state, local));
  });

  ReconstructionResult result{*runs.back(), {}, 0.0, 0.0};
  result.fidelities.reserve(repetitions);
  for (const auto& run : runs) result.fidelities.push_back(fidelity(run->rho_physical, target));

  double mean = 0.0;
  for (double f : result.fidelities) mean += f;
  mean /= static_cast<double>(repetitions);
  double var = 0.0;
  for (double f : result.fidelities) var += (f - mean) * (f - mean);
  var /= static_cast<double>(repetitions - 1);
  result.fidelity_to_target = mean;
  result.fidelity_std = std::sqrt(var);
  return result;
}

DensityMatrix depolarized_with_fidelity(const PureState& target, double fidelity) {
  const double dim = target.dim();
  if (!(fidelity >= 1.0 / dim && fidelity <= 1.0)) {
    throw std::invalid_argument("depolarized_with_fidelity: fidelity must lie in [1/d, 1]");
  }
  // F = q + (1 - q)/d
  const double q = (dim * fidelity - 1.0) / (dim - 1.0);
  return DensityMatrix(q * target.projector() + (1.0 - q) * identity(target.dim()) / dim);
}

void write_counts_csv(std::ostream& out, const CountRecord& counts) {
  out << "setting_i,setting_j,a,b,count\n";
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          out << i << ',' << j << ',' << a << ',' << b << ','
              << counts.counts[setting_index(i, j)][2 * a + b] << '\n';
        }
      }
    }
  }
}

CountRecord read_counts_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_counts_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "setting_i,setting_j,a,b,count") {
    throw std::runtime_error("read_counts_csv: unexpected header '" + line + "'");
  }
  CountRecord record;
  std::array<bool, TomographySpec::kJointProjectors> seen{};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::array<unsigned long long, 5> v{};
    char comma = 0;
    fields >> v[0];
    for (std::size_t k = 1; k < 5 && fields; ++k) fields >> comma >> v[k];
    if (!fields || comma != ',' || v[0] > 2 || v[1] > 2 || v[2] > 1 || v[3] > 1) {
      throw std::runtime_error("read_counts_csv: malformed line " + std::to_string(line_no));
    }
    const std::size_t s = setting_index(v[0], v[1]);
    const std::size_t k = 2 * v[2] + v[3];
    if (seen[4 * s + k]) throw std::runtime_error("read_counts_csv: duplicate entry on line " + std::to_string(line_no));
    seen[4 * s + k] = true;
    record.counts[s][k] = v[4];
  }
  for (bool present : seen) {
    if (!present) throw std::runtime_error("read_counts_csv: not all 36 projector counts present");
  }
  return record;
}

}  // namespace qcorr
