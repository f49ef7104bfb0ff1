#pragma once

// Dense complex linear algebra for one- and two-qubit operators.
//
// Basis order for two qubits is |00>, |01>, |10>, |11> (Alice is the left
// tensor factor). Measurement outcome 0 is the +1 eigenvalue of an
// observable, outcome 1 the -1 eigenvalue.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

#include "qcorr/tolerances.hpp"

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Bloch = Eigen::Vector3d;

enum class Axis { X, Y, Z };

ComplexMatrix pauli(Axis axis);
ComplexMatrix identity(int dim);

// Largest entrywise |a - b|. Throws ShapeError on mismatched shapes.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double tol = kDefaultTolerances.matrix_equality);

// Kronecker product of two 2x2 operators.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns
};

// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
HermitianEigen hermitian_eigen(const ComplexMatrix& m);

// Square root of a Hermitian PSD matrix; eigenvalues below zero are clamped.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

// Unit-norm state vector of length 2 or 4.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, const Tolerances& tol = kDefaultTolerances);

  // (|01> - |10>)/sqrt2
  static PureState singlet();
  // (|00> + |11>)/sqrt2
  static PureState psi_plus();
  static PureState basis(int dim, int index);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  ComplexMatrix projector() const;

 private:
  ComplexVector amplitudes_;
};

// Hermitian, unit-trace, positive semidefinite 2x2 or 4x4 matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = kDefaultTolerances);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);

  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double purity() const;
  Eigen::VectorXd eigenvalues() const;

 private:
  ComplexMatrix m_;
};

// A +/-1 valued qubit observable n.sigma with |n| = 1.
class BlochObservable {
 public:
  explicit BlochObservable(const Bloch& n, const Tolerances& tol = kDefaultTolerances);

  static BlochObservable along(Axis axis);
  // Unit vector at polar angle theta from +z and azimuth phi from +x.
  static BlochObservable from_angles(double theta, double phi);

  const Bloch& bloch() const { return n_; }

 private:
  Bloch n_;
};

ComplexMatrix observable_matrix(const BlochObservable& obs);

// (I + (-1)^outcome n.sigma)/2. Throws std::invalid_argument unless
// outcome is 0 or 1.
ComplexMatrix projector(const BlochObservable& obs, int outcome);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
// <psi| rho |psi>, the same quantity when one argument is pure.
double fidelity(const DensityMatrix& rho, const PureState& psi);

// Frobenius-closest unit-trace PSD matrix to a Hermitian input. The input is
// symmetrized first. The spectrum is projected onto the probability simplex:
// negative eigenvalues are zeroed in ascending order and the accumulated
// deficit is removed uniformly from the eigenvalues that remain.
DensityMatrix nearest_density_matrix(const ComplexMatrix& m);

}  // namespace qcorr
