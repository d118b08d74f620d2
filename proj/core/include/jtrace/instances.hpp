#pragma once

// Seeded generation of test objects: Hermitian draws, commuting tuples,
// unital columns, discrete fields and compatible pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jtrace/rng.hpp"
#include "jtrace/spectral.hpp"

namespace jtrace {

inline constexpr double kUnitalTol = 1e-10;

/// Enough to regenerate an instance: generator name, seed, stream and the
/// generator parameters.
struct InstanceManifest {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string generator;
  nlohmann::json parameters = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const InstanceManifest& m);
void from_json(const nlohmann::json& j, InstanceManifest& m);

/// Matrices a_1..a_m with sum a_k* a_k = 1.
class UnitalColumn {
 public:
  /// Throws PreconditionError when the unital identity fails by more than
  /// kUnitalTol in Frobenius norm.
  explicit UnitalColumn(std::vector<CMatrix> blocks);

  [[nodiscard]] std::size_t size() const { return blocks_.size(); }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] const std::vector<CMatrix>& blocks() const { return blocks_; }
  [[nodiscard]] const CMatrix& operator[](std::size_t k) const { return blocks_[k]; }

 private:
  std::vector<CMatrix> blocks_;
  Eigen::Index dim_ = 0;
};

/// || sum_k w_k a_k* a_k - 1 ||_F, with unit weights when `weights` is empty.
double unital_residual(const std::vector<CMatrix>& blocks, const std::vector<double>& weights = {});

/// One node of a discrete field: weight w_t, column a_t and optionally an
/// abelian tuple x_t.
struct FieldNode {
  double weight = 1.0;
  CMatrix column;
  std::optional<AbelianTuple> tuple;
};

/// Finite weighted family with sum_t w_t a_t* a_t = 1.
class DiscreteField {
 public:
  /// Validates non-negative weights, equal shapes, the unital identity and
  /// (when present) equal tuple lengths.
  DiscreteField(std::vector<FieldNode> nodes, Cube cube);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] std::size_t arity() const { return cube_.size(); }
  [[nodiscard]] bool has_tuples() const;
  [[nodiscard]] const std::vector<FieldNode>& nodes() const { return nodes_; }
  [[nodiscard]] const FieldNode& operator[](std::size_t t) const { return nodes_[t]; }
  [[nodiscard]] const Cube& cube() const { return cube_; }

  /// y_i = sum_t w_t a_t* x_{it} a_t.
  [[nodiscard]] HermitianMatrix integrate(std::size_t i) const;
  [[nodiscard]] std::vector<HermitianMatrix> integrate_all() const;

 private:
  std::vector<FieldNode> nodes_;
  Cube cube_;
  Eigen::Index dim_ = 0;
};

/// GUE draw whose spectrum is affinely rescaled onto `interval`.
HermitianMatrix random_hermitian(Rng& rng, Eigen::Index dim, Interval interval);
HermitianMatrix random_hermitian(std::uint64_t seed, Eigen::Index dim, Interval interval);

/// Haar unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal moved into Q.
CMatrix haar_unitary(Rng& rng, Eigen::Index dim);

/// Random positive semidefinite B B* with operator norm `norm_bound * u`,
/// u uniform in (0, 1].
HermitianMatrix random_psd(Rng& rng, Eigen::Index dim, double norm_bound);

/// Commuting tuple together with the basis and eigenvalue table it was built from.
struct PlantedTuple {
  AbelianTuple tuple;
  CMatrix basis;
  RMatrix table;
};

PlantedTuple random_planted_tuple(Rng& rng, Eigen::Index dim, std::size_t n, const Cube& cube);
AbelianTuple random_abelian_tuple(Rng& rng, Eigen::Index dim, std::size_t n, const Cube& cube);
AbelianTuple random_abelian_tuple(std::uint64_t seed, Eigen::Index dim, std::size_t n, const Cube& cube);

/// Gaussian (m*dim) x dim matrix, orthonormalized, sliced into m blocks.
UnitalColumn random_unital_column(Rng& rng, std::size_t m, Eigen::Index dim);
UnitalColumn random_unital_column(std::uint64_t seed, std::size_t m, Eigen::Index dim);

/// Dirichlet(1) weights, Gaussian columns rescaled by S^{-1/2} where
/// S = sum_t w_t c_t* c_t, and (when n > 0) one planted abelian n-tuple per node.
DiscreteField random_field(Rng& rng, std::size_t nodes, Eigen::Index dim, std::size_t n,
                           const Cube& cube);
DiscreteField random_field(std::uint64_t seed, std::size_t nodes, Eigen::Index dim, std::size_t n,
                           const Cube& cube);

/// Symmetric Dirichlet draw.
std::vector<double> dirichlet(Rng& rng, std::size_t count, double alpha = 1.0);

// ---------------------------------------------------------------------------
// Tensor-leg constructions

/// Kronecker product of identities with `op` in position `leg`.
CMatrix embed_leg(const CMatrix& op, const std::vector<Eigen::Index>& leg_dims, std::size_t leg);
Eigen::Index total_dim(const std::vector<Eigen::Index>& leg_dims);

struct TensorPairOptions {
  /// y_leg = x_leg + (positive), so x_i <= y_i on the full space.
  bool ordered = false;
  /// x_leg and y_leg share an eigenbasis per leg.
  bool shared_leg_basis = false;
};

/// Two abelian n-tuples where member i acts only on tensor leg i.
struct TensorPair {
  std::vector<Eigen::Index> leg_dims;
  std::vector<HermitianMatrix> x_legs;
  std::vector<HermitianMatrix> y_legs;
  AbelianTuple x;
  AbelianTuple y;
};

TensorPair compatible_pair_tensor(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                  const Cube& cube, TensorPairOptions options = {});

struct CommutantPairOptions {
  /// x, c >= 0 and x <= x', c <= c' so that with eps >= 0 the first tuple is
  /// below the second in every component.
  bool ordered_positive = false;
};

/// Pair drawn from S = {(eps_i x + c_i)} with x in the commutant of a fixed
/// commutative algebra C and c_i in C. C is the span of the spectral
/// projections of a generator with degenerate (block) eigenspaces.
struct CommutantPair {
  std::vector<Eigen::Index> block_sizes;
  CMatrix frame;
  AbelianTuple x;
  AbelianTuple y;
};

CommutantPair compatible_pair_commutant(Rng& rng, Eigen::Index dim, const std::vector<double>& eps,
                                        CommutantPairOptions options = {});

/// Field whose node columns are scaled product unitaries s_t (u_1t (x) ... (x) u_nt)
/// and whose tuples are leg-local: x_it = 1 (x) ... (x) xhat_it (x) ... (x) 1.
/// With `scalar_columns` the columns are s_t * 1.
struct TensorField {
  std::vector<Eigen::Index> leg_dims;
  std::vector<std::vector<HermitianMatrix>> leg_ops;  // [t][i], on leg i
  DiscreteField field;
};

TensorField random_tensor_field(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                std::size_t nodes, const Cube& cube, bool scalar_columns = false);

/// Leg-local column fields: a_it acts on leg i, node weights w_t are shared,
/// and sum_t w_t a_it* a_it = c_i 1 with sum_i c_i = 1.
struct LegColumnField {
  std::vector<Eigen::Index> leg_dims;
  std::vector<double> weights;                        // [t]
  std::vector<std::vector<CMatrix>> leg_columns;      // [i][t], d_i x d_i
  std::vector<std::vector<HermitianMatrix>> leg_ops;  // [i][t], d_i x d_i
  Cube cube;
};

/// `constant_ops` makes x_it independent of t (one operator per leg).
LegColumnField random_leg_column_field(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                       std::size_t nodes, const Cube& cube, bool constant_ops);

// ---------------------------------------------------------------------------

struct FieldConditionCheck {
  bool holds = true;
  /// Worst relative residual of the cross-node commutator identity.
  double worst_relative = 0.0;
};

/// [a_t* x_it a_t, a_s* x_js a_s] = [a_t* x_jt a_t, a_s* x_is a_s] for all
/// i, j, s, t. Sufficient for the integrated tuple to commute.
FieldConditionCheck check_field_condition(const DiscreteField& field, double tol = kAbelianTol);

}  // namespace jtrace
