#pragma once

namespace qcorr {

// Numerical tolerances shared by every module. Defaults are tuned for the
// 2x2 / 4x4 matrices handled here; callers may pass a modified copy where an
// operation accepts one.
struct Tolerances {
  // Entrywise comparison of matrices.
  double matrix_equality = 1e-10;
  // max |M - M^dagger|.
  double hermiticity = 1e-10;
  // |Tr(M) - 1|.
  double trace = 1e-10;
  // Smallest admissible eigenvalue is -psd.
  double psd = 1e-10;
  // | ||n|| - 1 | for Bloch vectors and pure-state amplitudes.
  double unit_norm = 1e-10;
  // Eigenvalue check of n.sigma against {+1, -1}.
  double observable_spectrum = 1e-9;
  // Largest imaginary part of a Born-rule trace that is silently dropped.
  double imaginary_trace = 1e-10;
  // Probability tables: per-block normalization and no-signalling.
  double normalization = 1e-9;
  // A functional counts as violated only if value > bound + margin.
  double violation_margin = 1e-9;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace qcorr
