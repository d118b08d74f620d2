#pragma once

// Positive functionals phi(x) = trace(rho x), their centralizers, and the
// finite-dimensional measures and conditional expectations built from them.

#include <cstdint>
#include <span>
#include <vector>

#include "jtrace/calculus.hpp"
#include "jtrace/instances.hpp"
#include "jtrace/spectral.hpp"

namespace jtrace {

/// Relative commutator tolerance for centralizer hypotheses.
inline constexpr double kCentralizerTol = 1e-9;

/// phi(x) = trace(rho x) with rho >= 0. rho = 1 is the trace itself.
class TraceFunctional {
 public:
  /// Throws PreconditionError when rho has an eigenvalue below
  /// -1e-12 * (1 + ||rho||_F).
  explicit TraceFunctional(HermitianMatrix density);

  static TraceFunctional trace(Eigen::Index dim);

  [[nodiscard]] const HermitianMatrix& density() const { return density_; }
  [[nodiscard]] Eigen::Index dim() const { return density_.dim(); }
  /// trace(rho); equals 1 for states.
  [[nodiscard]] double total() const { return density_.trace(); }
  /// rho is exactly the identity matrix.
  [[nodiscard]] bool is_identity() const { return identity_; }
  /// rho is a scalar multiple of the identity (a trace on the full matrix algebra).
  [[nodiscard]] bool is_tracial(double tol = kAbelianTol) const;

  /// Real part of trace(rho x); throws PreconditionError when the imaginary
  /// part exceeds 1e-10 * (1 + ||rho|| ||x||).
  [[nodiscard]] double operator()(const CMatrix& x) const;
  [[nodiscard]] double operator()(const HermitianMatrix& x) const { return (*this)(x.matrix()); }
  [[nodiscard]] Complex evaluate_complex(const CMatrix& x) const;

  [[nodiscard]] TraceFunctional scaled(double c) const;

 private:
  HermitianMatrix density_;
  bool identity_ = false;
};

/// ||[rho, y]||_F <= tol * (1 + ||rho||_F ||y||_F).
bool in_centralizer(const TraceFunctional& phi, const HermitianMatrix& y, double tol = kAbelianTol);
bool in_centralizer(const TraceFunctional& phi, std::span<const HermitianMatrix> ys,
                    double tol = kAbelianTol);

/// rho = g(y) / trace(g(y)) for a positive function g on the tuple's cube.
TraceFunctional centralizing_state(const AbelianTuple& y, const ScalarFunction& g);
/// g(l) = exp(sum_i c_i l_i / (1 + width_i)) with Gaussian c_i.
TraceFunctional centralizing_state(Rng& rng, const AbelianTuple& y);
TraceFunctional centralizing_state(std::uint64_t seed, const AbelianTuple& y);

/// Finitely supported measure on R^n.
struct AtomicMeasure {
  struct Atom {
    std::vector<double> point;
    double mass = 0.0;
  };
  std::vector<Atom> atoms;

  [[nodiscard]] double total_mass() const;
  /// Integral of the i-th coordinate.
  [[nodiscard]] double moment(std::size_t i) const;
  [[nodiscard]] double integrate(const ScalarFunction& g) const;
};

/// mu(S) = sum_k (E_k(S) a_k xi | a_k xi) with E_k the spectral measure of
/// x_k. Throws PreconditionError unless ||xi|| = 1 within 1e-12.
AtomicMeasure spectral_mixture_measure(std::span<const HermitianMatrix> xs,
                                       const UnitalColumn& column, const CVector& xi);

/// Conditional expectation onto the algebra generated by a commuting tuple
/// y in the centralizer of phi. Atoms are the distinct joint eigenvalues of
/// y (rows closer than 1e-8 * (1 + |l|) componentwise are merged); atoms of
/// phi-measure <= 1e-12 are dropped.
class ConditionalExpectation {
 public:
  /// Throws PreconditionError when some y_i is not in the centralizer of phi
  /// (relative tolerance `centralizer_tol`) or when every atom is null.
  ConditionalExpectation(const TraceFunctional& phi, const AbelianTuple& y,
                         double centralizer_tol = kCentralizerTol);

  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  /// Joint eigenvalue of each atom.
  [[nodiscard]] const std::vector<std::vector<double>>& points() const { return points_; }
  /// mu_phi(j) = phi(P_j).
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  /// Orthonormal basis of the range of P_j.
  [[nodiscard]] const std::vector<CMatrix>& frames() const { return frames_; }

  /// Phi(x)(j) = phi(P_j x) / phi(P_j).
  [[nodiscard]] std::vector<double> operator()(const CMatrix& x) const;
  [[nodiscard]] std::vector<double> operator()(const HermitianMatrix& x) const {
    return (*this)(x.matrix());
  }

  /// sum_j z(j) v(j) mu_phi(j).
  [[nodiscard]] double integrate(std::span<const double> values) const;
  [[nodiscard]] double integrate(std::span<const double> z, std::span<const double> values) const;

  [[nodiscard]] const TraceFunctional& functional() const { return phi_; }

 private:
  TraceFunctional phi_;
  std::vector<std::vector<double>> points_;
  std::vector<double> weights_;
  std::vector<CMatrix> frames_;
};

/// For the tuple y_i = sum_t w_t a_t* x_it a_t of a field (which must be
/// abelian and centralized by phi): one probability measure per atom s with
/// int g d mu_s = Phi(sum_t w_t a_t* g(x_t) a_t)(s).
struct InducedMeasures {
  ConditionalExpectation expectation;
  AbelianTuple y;
  std::vector<AtomicMeasure> measures;
};

InducedMeasures induced_measures(const TraceFunctional& phi, const DiscreteField& field);

}  // namespace jtrace
