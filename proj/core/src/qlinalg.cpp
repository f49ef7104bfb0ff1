#include "qcorr/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_qubit_dim(Eigen::Index dim, const char* what) {
  if (dim != 2 && dim != 4) {
    throw ShapeError(std::string(what) + ": dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

}  // namespace

ComplexMatrix pauli(Axis axis) {
  const Complex i{0.0, 1.0};
  ComplexMatrix m(2, 2);
  switch (axis) {
    case Axis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case Axis::Y:
      m << 0.0, -i, i, 0.0;
      break;
    case Axis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw ShapeError("tensor: both operands must be 2x2");
  }
  ComplexMatrix out(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.block(2 * r, 2 * c, 2, 2) = a(r, c) * b;
    }
  }
  return out;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_eigen: matrix must be square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigen: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  // Eigenvalues at rounding level are zeroed so that null directions do not
  // pick up sqrt(eps)-sized noise.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Eigen::VectorXd roots = eig.values;
  for (Eigen::Index k = 0; k < roots.size(); ++k) {
    roots(k) = roots(k) <= floor ? 0.0 : std::sqrt(roots(k));
  }
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)) {
  require_qubit_dim(amplitudes_.size(), "PureState");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > tol.unit_norm) {
    throw InvariantError("PureState: amplitudes have norm " + std::to_string(norm));
  }
}

PureState PureState::singlet() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = kInvSqrt2;
  v(2) = -kInvSqrt2;
  return PureState(v);
}

PureState PureState::psi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = kInvSqrt2;
  return PureState(v);
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw std::out_of_range("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(v);
}

ComplexMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ShapeError("DensityMatrix: matrix must be square");
  require_qubit_dim(m_.rows(), "DensityMatrix");

  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity) {
    throw InvariantError("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol.trace) {
    throw InvariantError("DensityMatrix: trace is " + std::to_string(tr.real()));
  }
  const double smallest = hermitian_eigen(m_).values.minCoeff();
  if (smallest < -tol.psd) {
    throw InvariantError("DensityMatrix: negative eigenvalue " + std::to_string(smallest));
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const { return hermitian_eigen(m_).values; }

// ---------------------------------------------------------------------------
// BlochObservable

BlochObservable::BlochObservable(const Bloch& n, const Tolerances& tol) : n_(n) {
  if (!n_.allFinite()) throw InvariantError("BlochObservable: non-finite Bloch vector");
  const double norm = n_.norm();
  if (std::abs(norm - 1.0) > tol.unit_norm) {
    throw InvariantError("BlochObservable: Bloch vector has norm " + std::to_string(norm));
  }
  const Eigen::VectorXd spectrum = hermitian_eigen(observable_matrix(*this)).values;
  if (std::abs(spectrum(0) + 1.0) > tol.observable_spectrum ||
      std::abs(spectrum(1) - 1.0) > tol.observable_spectrum) {
    throw InvariantError("BlochObservable: spectrum is not {-1, +1}");
  }
}

BlochObservable BlochObservable::along(Axis axis) {
  switch (axis) {
    case Axis::X:
      return BlochObservable(Bloch::UnitX());
    case Axis::Y:
      return BlochObservable(Bloch::UnitY());
    case Axis::Z:
      break;
  }
  return BlochObservable(Bloch::UnitZ());
}

BlochObservable BlochObservable::from_angles(double theta, double phi) {
  return BlochObservable(
      Bloch(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
}

ComplexMatrix observable_matrix(const BlochObservable& obs) {
  const Bloch& n = obs.bloch();
  return n.x() * pauli(Axis::X) + n.y() * pauli(Axis::Y) + n.z() * pauli(Axis::Z);
}

ComplexMatrix projector(const BlochObservable& obs, int outcome) {
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("projector: outcome must be 0 or 1");
  }
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return 0.5 * (identity(2) + sign * observable_matrix(obs));
}

// ---------------------------------------------------------------------------
// Fidelity and physical projection

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ShapeError("fidelity: dimension mismatch");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) is the trace norm of sqrt(rho) sqrt(sigma).
  const ComplexMatrix product = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(product);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw ShapeError("fidelity: dimension mismatch");
  const Complex overlap = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(overlap.real(), 0.0, 1.0);
}

DensityMatrix nearest_density_matrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("nearest_density_matrix: matrix must be square");
  require_qubit_dim(m.rows(), "nearest_density_matrix");
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  const HermitianEigen eig = hermitian_eigen(herm);

  // eig.values is ascending. Drop the smallest eigenvalue while it would go
  // negative after spreading the remaining trace excess uniformly.
  const Eigen::Index dim = eig.values.size();
  Eigen::VectorXd lambda = eig.values;
  Eigen::Index first_kept = 0;
  double shift = 0.0;
  while (first_kept < dim) {
    const double kept_trace = lambda.tail(dim - first_kept).sum();
    shift = (kept_trace - 1.0) / static_cast<double>(dim - first_kept);
    if (lambda(first_kept) - shift >= 0.0) break;
    ++first_kept;
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    lambda(k) = k < first_kept ? 0.0 : std::max(lambda(k) - shift, 0.0);
  }
  lambda /= lambda.sum();

  ComplexMatrix out = eig.vectors * lambda.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix(out);
}

}  // namespace qcorr
