#include "qcorr/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

void check_index(const JointDistribution& dist, std::size_t i, const char* what) {
  if (i >= dist.n()) {
    throw std::out_of_range(std::string(what) + ": setting index " + std::to_string(i) +
                            " out of range for n=" + std::to_string(dist.n()));
  }
}

}  // namespace

SettingPair::SettingPair(std::vector<BlochObservable> alice, std::vector<BlochObservable> bob)
    : alice_(std::move(alice)), bob_(std::move(bob)) {
  if (alice_.empty()) throw ShapeError("SettingPair: at least one setting is required");
  if (alice_.size() != bob_.size()) {
    throw ShapeError("SettingPair: Alice has " + std::to_string(alice_.size()) +
                     " settings, Bob has " + std::to_string(bob_.size()));
  }
}

SettingPair SettingPair::symmetric(std::vector<BlochObservable> settings) {
  auto copy = settings;
  return SettingPair(std::move(settings), std::move(copy));
}

JointDistribution::JointDistribution(std::size_t n, std::vector<double> table,
                                     const Tolerances& tol)
    : n_(n), table_(std::move(table)) {
  if (n_ == 0) throw ShapeError("JointDistribution: n must be positive");
  if (table_.size() != 4 * n_ * n_) {
    throw ShapeError("JointDistribution: expected " + std::to_string(4 * n_ * n_) +
                     " entries, got " + std::to_string(table_.size()));
  }
  for (double p : table_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvariantError("JointDistribution: entry " + std::to_string(p) + " outside [0,1]");
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double total = 0.0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) total += (*this)(a, b, i, j);
      }
      if (std::abs(total - 1.0) > tol.normalization) {
        throw InvariantError("JointDistribution: block (" + std::to_string(i) + "," +
                             std::to_string(j) + ") sums to " + std::to_string(total));
      }
    }
  }
  if (max_signalling(*this) > tol.normalization) {
    throw InvariantError("JointDistribution: marginals depend on the partner's setting");
  }
}

double JointDistribution::operator()(int a, int b, std::size_t i, std::size_t j) const {
  return table_[index(n_, a, b, i, j)];
}

JointDistribution joint_distribution(const DensityMatrix& state, const SettingPair& settings,
                                     const Tolerances& tol) {
  if (state.dim() != 4) throw ShapeError("joint_distribution: state must be 4x4");
  const std::size_t n = settings.n();

  std::vector<std::array<ComplexMatrix, 2>> alice(n), bob(n);
  for (std::size_t k = 0; k < n; ++k) {
    alice[k] = {projector(settings.alice()[k], 0), projector(settings.alice()[k], 1)};
    bob[k] = {projector(settings.bob()[k], 0), projector(settings.bob()[k], 1)};
  }

  std::vector<double> table(4 * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const Complex tr = (tensor(alice[i][a], bob[j][b]) * state.matrix()).trace();
          if (std::abs(tr.imag()) > tol.imaginary_trace) {
            throw InvariantError("joint_distribution: trace has imaginary part " +
                                 std::to_string(tr.imag()));
          }
          double p = tr.real();
          // Rounding noise on a PSD state stays within the PSD tolerance.
          if (p < 0.0 && p >= -tol.psd) p = 0.0;
          table[JointDistribution::index(n, a, b, i, j)] = std::min(p, 1.0);
        }
      }
    }
  }
  return JointDistribution(n, std::move(table), tol);
}

double expectation(const JointDistribution& dist, std::size_t i, std::size_t j) {
  check_index(dist, i, "expectation");
  check_index(dist, j, "expectation");
  return dist(0, 0, i, j) - dist(0, 1, i, j) - dist(1, 0, i, j) + dist(1, 1, i, j);
}

double anti_corr_prob(const JointDistribution& dist, std::size_t i) {
  check_index(dist, i, "anti_corr_prob");
  return dist(0, 1, i, i) + dist(1, 0, i, i);
}

double same_prob(const JointDistribution& dist, std::size_t i) {
  check_index(dist, i, "same_prob");
  return dist(0, 0, i, i) + dist(1, 1, i, i);
}

double alice_marginal(const JointDistribution& dist, std::size_t i) {
  check_index(dist, i, "alice_marginal");
  return dist(0, 0, i, 0) + dist(0, 1, i, 0) - dist(1, 0, i, 0) - dist(1, 1, i, 0);
}

double bob_marginal(const JointDistribution& dist, std::size_t j) {
  check_index(dist, j, "bob_marginal");
  return dist(0, 0, 0, j) + dist(1, 0, 0, j) - dist(0, 1, 0, j) - dist(1, 1, 0, j);
}

double max_signalling(const JointDistribution& dist) {
  const std::size_t n = dist.n();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      for (int a = 0; a < 2; ++a) {
        const double ref = dist(a, 0, i, 0) + dist(a, 1, i, 0);
        const double cur = dist(a, 0, i, j) + dist(a, 1, i, j);
        worst = std::max(worst, std::abs(ref - cur));
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 1; i < n; ++i) {
      for (int b = 0; b < 2; ++b) {
        const double ref = dist(0, b, 0, j) + dist(1, b, 0, j);
        const double cur = dist(0, b, i, j) + dist(1, b, i, j);
        worst = std::max(worst, std::abs(ref - cur));
      }
    }
  }
  return worst;
}

BlochDecomposition bloch_decomposition(const DensityMatrix& state) {
  if (state.dim() != 4) throw ShapeError("bloch_decomposition: state must be 4x4");
  const std::array<ComplexMatrix, 3> sigma = {pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)};
  const ComplexMatrix id = identity(2);
  BlochDecomposition out;
  for (int k = 0; k < 3; ++k) {
    out.alice(k) = (tensor(sigma[k], id) * state.matrix()).trace().real();
    out.bob(k) = (tensor(id, sigma[k]) * state.matrix()).trace().real();
    for (int l = 0; l < 3; ++l) {
      out.correlation(k, l) = (tensor(sigma[k], sigma[l]) * state.matrix()).trace().real();
    }
  }
  return out;
}

}  // namespace qcorr
