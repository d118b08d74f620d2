#include "jtrace/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/KroneckerProduct>

namespace jtrace {

void to_json(nlohmann::json& j, const InstanceManifest& m) {
  j = nlohmann::json{{"seed", m.seed},
                     {"stream", m.stream},
                     {"generator", m.generator},
                     {"parameters", m.parameters}};
}

void from_json(const nlohmann::json& j, InstanceManifest& m) {
  j.at("seed").get_to(m.seed);
  j.at("stream").get_to(m.stream);
  j.at("generator").get_to(m.generator);
  m.parameters = j.value("parameters", nlohmann::json::object());
}

double unital_residual(const std::vector<CMatrix>& blocks, const std::vector<double>& weights) {
  if (blocks.empty()) return 0.0;
  const Eigen::Index d = blocks.front().cols();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    sum += w * (blocks[k].adjoint() * blocks[k]);
  }
  return (sum - CMatrix::Identity(d, d)).norm();
}

UnitalColumn::UnitalColumn(std::vector<CMatrix> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw PreconditionError("unital column needs at least one block");
  dim_ = blocks_.front().cols();
  for (const auto& b : blocks_) {
    if (b.rows() != dim_ || b.cols() != dim_) {
      throw DimensionMismatch("unital column blocks must be square of equal size");
    }
  }
  const double r = unital_residual(blocks_);
  if (r > kUnitalTol) {
    throw PreconditionError("column is not unital: ||sum a*a - 1||_F = " + std::to_string(r));
  }
}

DiscreteField::DiscreteField(std::vector<FieldNode> nodes, Cube cube)
    : nodes_(std::move(nodes)), cube_(std::move(cube)) {
  if (nodes_.empty()) throw PreconditionError("field needs at least one node");
  dim_ = nodes_.front().column.cols();
  std::vector<CMatrix> columns;
  std::vector<double> weights;
  const bool tuples = nodes_.front().tuple.has_value();
  for (const auto& node : nodes_) {
    if (!(node.weight >= 0.0) || !std::isfinite(node.weight)) {
      throw PreconditionError("field weights must be finite and non-negative");
    }
    if (node.column.rows() != dim_ || node.column.cols() != dim_) {
      throw DimensionMismatch("field columns must be square of equal size");
    }
    if (node.tuple.has_value() != tuples) {
      throw PreconditionError("either every field node carries a tuple or none does");
    }
    if (node.tuple) {
      if (node.tuple->size() != cube_.size() || node.tuple->dim() != dim_) {
        throw DimensionMismatch("field tuple shape does not match the field");
      }
    }
    columns.push_back(node.column);
    weights.push_back(node.weight);
  }
  const double r = unital_residual(columns, weights);
  if (r > kUnitalTol) {
    throw PreconditionError("field is not unital: ||sum w a*a - 1||_F = " + std::to_string(r));
  }
}

bool DiscreteField::has_tuples() const { return nodes_.front().tuple.has_value(); }

HermitianMatrix DiscreteField::integrate(std::size_t i) const {
  if (!has_tuples()) throw PreconditionError("field has no tuples to integrate");
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& node : nodes_) {
    sum += node.weight * sandwich(node.column, (*node.tuple)[i].matrix());
  }
  return HermitianMatrix(sum);
}

std::vector<HermitianMatrix> DiscreteField::integrate_all() const {
  std::vector<HermitianMatrix> out;
  out.reserve(arity());
  for (std::size_t i = 0; i < arity(); ++i) out.push_back(integrate(i));
  return out;
}

namespace {

CMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix g(rows, cols);
  const double s = std::sqrt(0.5);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) g(r, c) = Complex(s * rng.normal(), s * rng.normal());
  }
  return g;
}

CMatrix inverse_sqrt(const CMatrix& s) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const RVector inv = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

HermitianMatrix from_spectrum(const CMatrix& basis, const RVector& values) {
  return HermitianMatrix(basis * values.cast<Complex>().asDiagonal() * basis.adjoint());
}

Cube spectral_hull(const std::vector<HermitianMatrix>& a, const std::vector<HermitianMatrix>& b,
                   bool clamp_at_zero) {
  Cube cube;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const RVector ea = eigenvalues(a[i]);
    const RVector eb = eigenvalues(b[i]);
    double lo = std::min(ea(0), eb(0));
    const double hi = std::max(ea(ea.size() - 1), eb(eb.size() - 1));
    if (clamp_at_zero) lo = std::max(lo, 0.0);
    cube.push_back({lo, std::max(lo, hi)});
  }
  return cube;
}

}  // namespace

std::vector<double> dirichlet(Rng& rng, std::size_t count, double alpha) {
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& v : w) {
    v = rng.gamma(alpha);
    total += v;
  }
  if (total <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(count));
    return w;
  }
  for (auto& v : w) v /= total;
  return w;
}

HermitianMatrix random_hermitian(Rng& rng, Eigen::Index dim, Interval interval) {
  if (interval.lo > interval.hi) throw DomainError("random_hermitian: empty interval");
  if (dim == 0) return HermitianMatrix::zero(0);
  if (interval.width() == 0.0) return interval.lo * HermitianMatrix::identity(dim);
  if (dim == 1) {
    CMatrix one(1, 1);
    one(0, 0) = rng.uniform(interval.lo, interval.hi);
    return HermitianMatrix(one);
  }
  const CMatrix g = gaussian_matrix(rng, dim, dim);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((g + g.adjoint()) * 0.5);
  const RVector ev = es.eigenvalues();
  const double spread = ev(dim - 1) - ev(0);
  RVector scaled(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double unit = spread > 0.0 ? (ev(k) - ev(0)) / spread : 0.5;
    scaled(k) = std::clamp(interval.lo + unit * interval.width(), interval.lo, interval.hi);
  }
  return from_spectrum(es.eigenvectors(), scaled);
}

HermitianMatrix random_hermitian(std::uint64_t seed, Eigen::Index dim, Interval interval) {
  Rng rng(seed, 0);
  return random_hermitian(rng, dim, interval);
}

CMatrix haar_unitary(Rng& rng, Eigen::Index dim) {
  const CMatrix z = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

HermitianMatrix random_psd(Rng& rng, Eigen::Index dim, double norm_bound) {
  const auto rank = static_cast<Eigen::Index>(rng.uniform_int(1, static_cast<std::uint64_t>(dim)));
  const CMatrix b = gaussian_matrix(rng, dim, rank);
  CMatrix p = b * b.adjoint();
  const double top = eigenvalues(HermitianMatrix(p))(dim - 1);
  const double target = norm_bound * rng.uniform(0.05, 1.0);
  if (top > 0.0) p *= target / top;
  return HermitianMatrix(p);
}

PlantedTuple random_planted_tuple(Rng& rng, Eigen::Index dim, std::size_t n, const Cube& cube) {
  if (cube.size() != n) throw DimensionMismatch("cube size does not match tuple length");
  const CMatrix u = haar_unitary(rng, dim);
  RMatrix table(dim, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      table(j, static_cast<Eigen::Index>(i)) = rng.uniform(cube[i].lo, cube[i].hi);
    }
  }
  std::vector<HermitianMatrix> members;
  members.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    members.push_back(from_spectrum(u, table.col(static_cast<Eigen::Index>(i))));
  }
  return {AbelianTuple(std::move(members), cube), u, table};
}

AbelianTuple random_abelian_tuple(Rng& rng, Eigen::Index dim, std::size_t n, const Cube& cube) {
  return random_planted_tuple(rng, dim, n, cube).tuple;
}

AbelianTuple random_abelian_tuple(std::uint64_t seed, Eigen::Index dim, std::size_t n,
                                  const Cube& cube) {
  Rng rng(seed, 0);
  return random_abelian_tuple(rng, dim, n, cube);
}

UnitalColumn random_unital_column(Rng& rng, std::size_t m, Eigen::Index dim) {
  if (m == 0) throw PreconditionError("unital column needs m >= 1");
  const auto rows = static_cast<Eigen::Index>(m) * dim;
  const CMatrix g = gaussian_matrix(rng, rows, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(rows, dim);
  std::vector<CMatrix> blocks;
  blocks.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    blocks.emplace_back(q.middleRows(static_cast<Eigen::Index>(k) * dim, dim));
  }
  return UnitalColumn(std::move(blocks));
}

UnitalColumn random_unital_column(std::uint64_t seed, std::size_t m, Eigen::Index dim) {
  Rng rng(seed, 0);
  return random_unital_column(rng, m, dim);
}

DiscreteField random_field(Rng& rng, std::size_t nodes, Eigen::Index dim, std::size_t n,
                           const Cube& cube) {
  if (nodes == 0) throw PreconditionError("field needs at least one node");
  const std::vector<double> weights = dirichlet(rng, nodes);
  std::vector<CMatrix> raw;
  CMatrix s = CMatrix::Zero(dim, dim);
  for (std::size_t t = 0; t < nodes; ++t) {
    raw.push_back(gaussian_matrix(rng, dim, dim));
    s += weights[t] * (raw.back().adjoint() * raw.back());
  }
  const CMatrix root = inverse_sqrt((s + s.adjoint()) * 0.5);
  std::vector<FieldNode> field;
  field.reserve(nodes);
  for (std::size_t t = 0; t < nodes; ++t) {
    FieldNode node{weights[t], raw[t] * root, std::nullopt};
    if (n > 0) {
      Rng child = rng.split(t);
      node.tuple = random_abelian_tuple(child, dim, n, cube);
    }
    field.push_back(std::move(node));
  }
  return DiscreteField(std::move(field), n > 0 ? cube : Cube{});
}

DiscreteField random_field(std::uint64_t seed, std::size_t nodes, Eigen::Index dim, std::size_t n,
                           const Cube& cube) {
  Rng rng(seed, 0);
  return random_field(rng, nodes, dim, n, cube);
}

Eigen::Index total_dim(const std::vector<Eigen::Index>& leg_dims) {
  return std::accumulate(leg_dims.begin(), leg_dims.end(), Eigen::Index{1}, std::multiplies<>());
}

CMatrix embed_leg(const CMatrix& op, const std::vector<Eigen::Index>& leg_dims, std::size_t leg) {
  if (leg >= leg_dims.size() || op.rows() != leg_dims[leg] || op.cols() != leg_dims[leg]) {
    throw DimensionMismatch("operator does not match the dimension of leg " + std::to_string(leg));
  }
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < leg_dims.size(); ++k) {
    const CMatrix factor = k == leg ? op : CMatrix::Identity(leg_dims[k], leg_dims[k]);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

TensorPair compatible_pair_tensor(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                  const Cube& cube, TensorPairOptions options) {
  if (cube.size() != leg_dims.size()) throw DimensionMismatch("one cube side per leg expected");
  std::vector<HermitianMatrix> x_legs, y_legs, x_full, y_full;
  for (std::size_t i = 0; i < leg_dims.size(); ++i) {
    const Eigen::Index d = leg_dims[i];
    const Interval side = cube[i];
    const double mid = side.lo + 0.5 * side.width();
    if (options.shared_leg_basis) {
      const CMatrix v = haar_unitary(rng, d);
      RVector a(d), b(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        if (options.ordered) {
          a(k) = rng.uniform(side.lo, mid);
          b(k) = a(k) + rng.uniform(0.0, 0.5 * side.width());
        } else {
          a(k) = rng.uniform(side.lo, side.hi);
          b(k) = rng.uniform(side.lo, side.hi);
        }
      }
      x_legs.push_back(from_spectrum(v, a));
      y_legs.push_back(from_spectrum(v, b));
    } else if (options.ordered) {
      x_legs.push_back(random_hermitian(rng, d, {side.lo, mid}));
      y_legs.push_back(x_legs.back() + random_psd(rng, d, 0.5 * side.width()));
    } else {
      x_legs.push_back(random_hermitian(rng, d, side));
      y_legs.push_back(random_hermitian(rng, d, side));
    }
    x_full.emplace_back(embed_leg(x_legs.back().matrix(), leg_dims, i));
    y_full.emplace_back(embed_leg(y_legs.back().matrix(), leg_dims, i));
  }
  return {leg_dims, std::move(x_legs), std::move(y_legs), AbelianTuple(std::move(x_full), cube),
          AbelianTuple(std::move(y_full), cube)};
}

CommutantPair compatible_pair_commutant(Rng& rng, Eigen::Index dim, const std::vector<double>& eps,
                                        CommutantPairOptions options) {
  if (dim < 1) throw DimensionMismatch("commutant pair needs dim >= 1");
  if (std::all_of(eps.begin(), eps.end(), [](double e) { return e == 0.0; })) {
    throw PreconditionError("direction vector must be non-zero");
  }
  if (options.ordered_positive &&
      std::any_of(eps.begin(), eps.end(), [](double e) { return e < 0.0; })) {
    throw PreconditionError("ordered positive pairs need a non-negative direction vector");
  }

  // Random composition of dim into blocks, at least one block of size >= 2
  // when dim >= 2 so that the commutant is non-commutative.
  std::vector<Eigen::Index> blocks;
  Eigen::Index left = dim;
  while (left > 0) {
    const auto size = static_cast<Eigen::Index>(rng.uniform_int(1, static_cast<std::uint64_t>(left)));
    blocks.push_back(size);
    left -= size;
  }
  if (dim >= 2 && std::all_of(blocks.begin(), blocks.end(), [](Eigen::Index b) { return b == 1; })) {
    blocks[0] = 2;
    blocks.erase(blocks.begin() + 1);
  }

  const CMatrix frame = haar_unitary(rng, dim);
  const Interval value_range = options.ordered_positive ? Interval{0.0, 1.0} : Interval{-1.0, 1.0};

  CMatrix x_blocks = CMatrix::Zero(dim, dim);
  CMatrix xp_blocks = CMatrix::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (Eigen::Index b : blocks) {
    const HermitianMatrix h = random_hermitian(rng, b, value_range);
    x_blocks.block(offset, offset, b, b) = h.matrix();
    if (options.ordered_positive) {
      xp_blocks.block(offset, offset, b, b) = (h + random_psd(rng, b, 1.0)).matrix();
    } else {
      xp_blocks.block(offset, offset, b, b) = random_hermitian(rng, b, value_range).matrix();
    }
    offset += b;
  }

  const std::size_t n = eps.size();
  std::vector<HermitianMatrix> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    RVector c(dim), cp(dim);
    offset = 0;
    for (Eigen::Index b : blocks) {
      const double gamma = rng.uniform(value_range.lo, value_range.hi);
      const double gamma_p = options.ordered_positive ? gamma + rng.uniform(0.0, 1.0)
                                                      : rng.uniform(value_range.lo, value_range.hi);
      c.segment(offset, b).setConstant(gamma);
      cp.segment(offset, b).setConstant(gamma_p);
      offset += b;
    }
    const CMatrix ci = c.cast<Complex>().asDiagonal();
    const CMatrix cpi = cp.cast<Complex>().asDiagonal();
    xs.emplace_back(frame * (eps[i] * x_blocks + ci) * frame.adjoint());
    ys.emplace_back(frame * (eps[i] * xp_blocks + cpi) * frame.adjoint());
  }
  Cube cube = spectral_hull(xs, ys, options.ordered_positive);
  return {blocks, frame, AbelianTuple(xs, cube), AbelianTuple(ys, cube)};
}

TensorField random_tensor_field(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                std::size_t nodes, const Cube& cube, bool scalar_columns) {
  if (cube.size() != leg_dims.size()) throw DimensionMismatch("one cube side per leg expected");
  if (nodes == 0) throw PreconditionError("field needs at least one node");
  const Eigen::Index dim = total_dim(leg_dims);
  const std::vector<double> weights = dirichlet(rng, nodes);

  std::vector<double> scales(nodes);
  double norm = 0.0;
  for (std::size_t t = 0; t < nodes; ++t) {
    scales[t] = rng.uniform(0.5, 1.5);
    norm += weights[t] * scales[t] * scales[t];
  }
  for (auto& s : scales) s /= std::sqrt(norm);

  std::vector<std::vector<HermitianMatrix>> leg_ops;
  std::vector<FieldNode> field;
  for (std::size_t t = 0; t < nodes; ++t) {
    CMatrix column = CMatrix::Identity(1, 1);
    if (scalar_columns) {
      column = CMatrix::Identity(dim, dim);
    } else {
      for (Eigen::Index d : leg_dims) column = Eigen::kroneckerProduct(column, haar_unitary(rng, d)).eval();
    }
    column *= scales[t];

    std::vector<HermitianMatrix> legs, full;
    for (std::size_t i = 0; i < leg_dims.size(); ++i) {
      legs.push_back(random_hermitian(rng, leg_dims[i], cube[i]));
      full.emplace_back(embed_leg(legs.back().matrix(), leg_dims, i));
    }
    leg_ops.push_back(std::move(legs));
    field.push_back(FieldNode{weights[t], std::move(column), AbelianTuple(std::move(full), cube)});
  }
  return {leg_dims, std::move(leg_ops), DiscreteField(std::move(field), cube)};
}

LegColumnField random_leg_column_field(Rng& rng, const std::vector<Eigen::Index>& leg_dims,
                                       std::size_t nodes, const Cube& cube, bool constant_ops) {
  if (cube.size() != leg_dims.size()) throw DimensionMismatch("one cube side per leg expected");
  if (nodes == 0) throw PreconditionError("field needs at least one node");
  LegColumnField out;
  out.leg_dims = leg_dims;
  out.cube = cube;
  out.weights = dirichlet(rng, nodes);
  const std::vector<double> shares = dirichlet(rng, leg_dims.size());
  for (std::size_t i = 0; i < leg_dims.size(); ++i) {
    const Eigen::Index d = leg_dims[i];
    std::vector<CMatrix> raw;
    CMatrix s = CMatrix::Zero(d, d);
    for (std::size_t t = 0; t < nodes; ++t) {
      raw.push_back(gaussian_matrix(rng, d, d));
      s += out.weights[t] * (raw.back().adjoint() * raw.back());
    }
    const CMatrix root = inverse_sqrt((s + s.adjoint()) * 0.5) * std::sqrt(shares[i]);
    std::vector<CMatrix> columns;
    std::vector<HermitianMatrix> ops;
    const HermitianMatrix fixed = random_hermitian(rng, d, cube[i]);
    for (std::size_t t = 0; t < nodes; ++t) {
      columns.push_back(raw[t] * root);
      ops.push_back(constant_ops ? fixed : random_hermitian(rng, d, cube[i]));
    }
    out.leg_columns.push_back(std::move(columns));
    out.leg_ops.push_back(std::move(ops));
  }
  return out;
}

FieldConditionCheck check_field_condition(const DiscreteField& field, double tol) {
  if (!field.has_tuples()) throw PreconditionError("field condition needs tuples");
  const std::size_t n = field.arity();
  std::vector<std::vector<CMatrix>> z(field.size());
  for (std::size_t t = 0; t < field.size(); ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      z[t].push_back(sandwich(field[t].column, (*field[t].tuple)[i].matrix()));
    }
  }
  FieldConditionCheck check;
  for (std::size_t t = 0; t < field.size(); ++t) {
    for (std::size_t s = 0; s < field.size(); ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const CMatrix diff = commutator(z[t][i], z[s][j]) - commutator(z[t][j], z[s][i]);
          const double scale =
              1.0 + z[t][i].norm() * z[s][j].norm() + z[t][j].norm() * z[s][i].norm();
          check.worst_relative = std::max(check.worst_relative, diff.norm() / scale);
        }
      }
    }
  }
  check.holds = check.worst_relative <= tol;
  return check;
}

}  // namespace jtrace
