#pragma once

// Hermitian matrices, commutators, operator order and joint spectral
// decomposition of commuting tuples.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jtrace/errors.hpp"

namespace jtrace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Tolerances shared across modules. All of them are relative: callers
// multiply by a scale of the form 1 + (product of Frobenius norms).
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kAbelianTol = 1e-10;
inline constexpr double kSpectrumSlack = 1e-9;
inline constexpr double kReconstructionTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kClusterGap = 1e-8;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
  /// Maps v into the interval when it is within the endpoint slack,
  /// throws DomainError when it is farther outside.
  [[nodiscard]] double clip(double v) const;
};

/// Product of intervals I_1 x ... x I_n.
using Cube = std::vector<Interval>;

Cube uniform_cube(std::size_t n, Interval side);

/// Dense complex matrix equal to its adjoint. The constructor replaces the
/// argument by (X + X*)/2 and rejects non-finite entries.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix diagonal(std::span<const double> entries);
  static HermitianMatrix diagonal(const RVector& entries);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] double norm() const { return m_.norm(); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
struct Eigensystem {
  RVector values;
  CMatrix vectors;
};

Eigensystem eigensystem(const HermitianMatrix& x);
RVector eigenvalues(const HermitianMatrix& x);
double min_eigenvalue(const HermitianMatrix& x);

/// a* x a. Shared by every verifier so that equal instances produce equal
/// bits regardless of the entry point.
CMatrix sandwich(const CMatrix& a, const CMatrix& x);

CMatrix commutator(const CMatrix& x, const CMatrix& y);
CMatrix commutator(const HermitianMatrix& x, const HermitianMatrix& y);

struct AbelianCheck {
  bool abelian = true;
  /// Largest ||[x_i, x_j]||_F / (1 + ||x_i||_F ||x_j||_F) over all pairs.
  double worst_relative = 0.0;
  /// Largest ||[x_i, x_j]||_F over all pairs.
  double worst_absolute = 0.0;
};

AbelianCheck is_abelian(std::span<const HermitianMatrix> members, double tol = kAbelianTol);

/// n pairwise commuting Hermitian matrices of equal dimension together with
/// the cube that contains their spectra.
class AbelianTuple {
 public:
  /// Throws DimensionMismatch on unequal shapes, PreconditionError when the
  /// members do not commute and DomainError when a spectrum leaves the cube.
  AbelianTuple(std::vector<HermitianMatrix> members, Cube cube, double tol = kAbelianTol);

  /// Uses the convex hull of each member's spectrum as the cube.
  static AbelianTuple with_spectral_cube(std::vector<HermitianMatrix> members,
                                         double tol = kAbelianTol);

  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] const std::vector<HermitianMatrix>& members() const { return members_; }
  [[nodiscard]] const HermitianMatrix& operator[](std::size_t i) const { return members_[i]; }
  [[nodiscard]] const Cube& cube() const { return cube_; }

 private:
  std::vector<HermitianMatrix> members_;
  Cube cube_;
  Eigen::Index dim_ = 0;
};

/// Shared eigenbasis U and eigenvalue table Lambda: row j of the table is the
/// joint eigenvalue carried by column j of U. Multiplicities are kept as
/// repeated rows.
struct JointSpectralDecomposition {
  CMatrix basis;
  RMatrix table;
  /// Number of randomized attempts used (0 when the Jacobi fallback ran).
  int attempts = 0;
  bool used_jacobi = false;
};

JointSpectralDecomposition joint_diagonalize(const AbelianTuple& t);
JointSpectralDecomposition joint_diagonalize(std::span<const HermitianMatrix> members);

/// Cyclic Jacobi joint diagonalization. Used as the fallback path of
/// joint_diagonalize; exposed for testing.
JointSpectralDecomposition jacobi_joint_diagonalize(std::span<const HermitianMatrix> members,
                                                    int max_sweeps = 200);

/// Largest ||x_i - U diag(Lambda_i) U*||_F / (1 + ||x_i||_F).
double reconstruction_residual(std::span<const HermitianMatrix> members,
                               const JointSpectralDecomposition& d);

/// Largest ||[x_i, y_j] - [x_j, y_i]||_F / (1 + ||x_i|| ||y_j|| + ||x_j|| ||y_i||).
double compatibility_residual(const AbelianTuple& x, const AbelianTuple& y);

/// True iff every point of the segment between x and y is an abelian tuple.
bool compatible(const AbelianTuple& x, const AbelianTuple& y, double tol = kAbelianTol);

/// Operator order x <= y: the smallest eigenvalue of y - x is at least
/// -tol * (1 + max(||x||_F, ||y||_F)).
bool psd_leq(const HermitianMatrix& x, const HermitianMatrix& y, double tol = kAbelianTol);

/// Elementwise combination s*x + (1-s)*y of two tuples of equal shape.
std::vector<HermitianMatrix> blend(std::span<const HermitianMatrix> x,
                                   std::span<const HermitianMatrix> y, double s);

}  // namespace jtrace
