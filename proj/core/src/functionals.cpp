#include "jtrace/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace jtrace {

TraceFunctional::TraceFunctional(HermitianMatrix density) : density_(std::move(density)) {
  const Eigen::Index d = density_.dim();
  if (d > 0) {
    const double floor = -1e-12 * (1.0 + density_.norm());
    if (min_eigenvalue(density_) < floor) {
      throw PreconditionError("functional density is not positive semidefinite");
    }
  }
  identity_ = density_.matrix() == CMatrix::Identity(d, d);
}

TraceFunctional TraceFunctional::trace(Eigen::Index dim) {
  return TraceFunctional(HermitianMatrix::identity(dim));
}

bool TraceFunctional::is_tracial(double tol) const {
  if (identity_) return true;
  const Eigen::Index d = dim();
  if (d == 0) return true;
  const double mean = total() / static_cast<double>(d);
  const double dev = (density_.matrix() - mean * CMatrix::Identity(d, d)).norm();
  return dev <= tol * (1.0 + density_.norm());
}

Complex TraceFunctional::evaluate_complex(const CMatrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) {
    throw DimensionMismatch("functional of dim " + std::to_string(dim()) + " applied to a " +
                            std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " matrix");
  }
  if (identity_) return x.trace();
  // trace(rho x) = sum_jk rho_jk x_kj
  return density_.matrix().cwiseProduct(x.transpose()).sum();
}

double TraceFunctional::operator()(const CMatrix& x) const {
  const Complex v = evaluate_complex(x);
  if (std::abs(v.imag()) > 1e-10 * (1.0 + density_.norm() * x.norm())) {
    throw PreconditionError("functional value has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

TraceFunctional TraceFunctional::scaled(double c) const {
  if (!(c > 0.0)) throw PreconditionError("functional scale must be positive");
  return TraceFunctional(c * density_);
}

bool in_centralizer(const TraceFunctional& phi, const HermitianMatrix& y, double tol) {
  if (phi.is_identity()) {
    if (y.dim() != phi.dim()) throw DimensionMismatch("centralizer test of unequal dims");
    return true;
  }
  const double c = commutator(phi.density(), y).norm();
  return c <= tol * (1.0 + phi.density().norm() * y.norm());
}

bool in_centralizer(const TraceFunctional& phi, std::span<const HermitianMatrix> ys, double tol) {
  return std::all_of(ys.begin(), ys.end(),
                     [&](const HermitianMatrix& y) { return in_centralizer(phi, y, tol); });
}

TraceFunctional centralizing_state(const AbelianTuple& y, const ScalarFunction& g) {
  const HermitianMatrix rho = apply_multivariate(g, y);
  const double total = rho.trace();
  if (!(total > 0.0)) throw PreconditionError("centralizing density has non-positive trace");
  return TraceFunctional((1.0 / total) * rho);
}

TraceFunctional centralizing_state(Rng& rng, const AbelianTuple& y) {
  std::vector<double> c(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    c[i] = rng.normal() / (1.0 + y.cube()[i].width());
  }
  ScalarFunction g;
  g.name = "centralizing_weight";
  g.cube = y.cube();
  g.eval = [c](Point p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += c[i] * p[i];
    return std::exp(s);
  };
  return centralizing_state(y, g);
}

TraceFunctional centralizing_state(std::uint64_t seed, const AbelianTuple& y) {
  Rng rng(seed, 0);
  return centralizing_state(rng, y);
}

double AtomicMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

double AtomicMeasure::moment(std::size_t i) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * a.point.at(i);
  return s;
}

double AtomicMeasure::integrate(const ScalarFunction& g) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * g.eval(a.point);
  return s;
}

AtomicMeasure spectral_mixture_measure(std::span<const HermitianMatrix> xs,
                                       const UnitalColumn& column, const CVector& xi) {
  if (xs.size() != column.size()) {
    throw DimensionMismatch("need one column block per matrix");
  }
  if (xi.size() != column.dim()) throw DimensionMismatch("vector does not match the dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw PreconditionError("xi must be a unit vector");

  std::vector<std::pair<double, double>> raw;  // (eigenvalue, mass)
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const Eigensystem es = eigensystem(xs[k]);
    const CVector image = column[k] * xi;
    const CVector coords = es.vectors.adjoint() * image;
    for (Eigen::Index j = 0; j < coords.size(); ++j) raw.emplace_back(es.values(j), std::norm(coords(j)));
  }
  std::sort(raw.begin(), raw.end());

  AtomicMeasure mu;
  for (const auto& [value, mass] : raw) {
    if (!mu.atoms.empty()) {
      auto& last = mu.atoms.back();
      if (std::abs(last.point[0] - value) <= 1e-12 * (1.0 + std::abs(value))) {
        last.mass += mass;
        continue;
      }
    }
    mu.atoms.push_back({{value}, mass});
  }
  return mu;
}

ConditionalExpectation::ConditionalExpectation(const TraceFunctional& phi, const AbelianTuple& y,
                                               double centralizer_tol)
    : phi_(phi) {
  if (phi.dim() != y.dim()) throw DimensionMismatch("functional and tuple dims differ");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!in_centralizer(phi, y[i], centralizer_tol)) {
      throw PreconditionError("y_" + std::to_string(i + 1) + " is not in the centralizer of phi");
    }
  }
  const JointSpectralDecomposition d = joint_diagonalize(y);
  const Eigen::Index dim = y.dim();
  const auto n = static_cast<Eigen::Index>(y.size());

  // Greedy clustering of equal joint eigenvalues.
  std::vector<std::vector<Eigen::Index>> members;
  std::vector<Eigen::Index> representative;
  for (Eigen::Index j = 0; j < dim; ++j) {
    bool placed = false;
    for (std::size_t c = 0; c < members.size() && !placed; ++c) {
      bool close = true;
      for (Eigen::Index i = 0; i < n && close; ++i) {
        const double a = d.table(j, i);
        const double b = d.table(representative[c], i);
        close = std::abs(a - b) <= kClusterGap * (1.0 + std::abs(b));
      }
      if (close) {
        members[c].push_back(j);
        placed = true;
      }
    }
    if (!placed) {
      members.push_back({j});
      representative.push_back(j);
    }
  }

  const CMatrix& rho = phi.density().matrix();
  const double null_floor = 1e-12 * std::max(1.0, phi.total());
  for (const auto& cluster : members) {
    CMatrix frame(dim, static_cast<Eigen::Index>(cluster.size()));
    std::vector<double> point(y.size(), 0.0);
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      frame.col(static_cast<Eigen::Index>(c)) = d.basis.col(cluster[c]);
      for (Eigen::Index i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] += d.table(cluster[c], i);
    }
    for (auto& v : point) v /= static_cast<double>(cluster.size());
    const double weight = (frame.adjoint() * rho * frame).trace().real();
    if (weight <= null_floor) continue;
    points_.push_back(std::move(point));
    weights_.push_back(weight);
    frames_.push_back(std::move(frame));
  }
  if (weights_.empty()) throw PreconditionError("every atom of the joint spectrum is phi-null");
}

std::vector<double> ConditionalExpectation::operator()(const CMatrix& x) const {
  if (x.rows() != phi_.dim() || x.cols() != phi_.dim()) {
    throw DimensionMismatch("conditional expectation argument has the wrong shape");
  }
  const CMatrix x_rho = x * phi_.density().matrix();
  std::vector<double> out(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    // phi(P_j x) = trace(rho P_j x) = trace(F* x rho F)
    const Complex v = (frames_[j].adjoint() * x_rho * frames_[j]).trace();
    out[j] = v.real() / weights_[j];
  }
  return out;
}

double ConditionalExpectation::integrate(std::span<const double> values) const {
  if (values.size() != weights_.size()) throw DimensionMismatch("one value per atom expected");
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * weights_[j];
  return s;
}

double ConditionalExpectation::integrate(std::span<const double> z,
                                         std::span<const double> values) const {
  if (z.size() != weights_.size()) throw DimensionMismatch("one value per atom expected");
  std::vector<double> product(values.begin(), values.end());
  for (std::size_t j = 0; j < z.size(); ++j) product.at(j) *= z[j];
  return integrate(product);
}

InducedMeasures induced_measures(const TraceFunctional& phi, const DiscreteField& field) {
  if (!field.has_tuples()) throw PreconditionError("induced measures need a field of tuples");
  AbelianTuple y(field.integrate_all(), field.cube());
  ConditionalExpectation expectation(phi, y);

  const CMatrix& rho = phi.density().matrix();
  std::vector<AtomicMeasure> measures(expectation.size());
  for (const auto& node : field.nodes()) {
    const JointSpectralDecomposition d = joint_diagonalize(*node.tuple);
    // Atom r of node t carries w_t phi(P_j a* q_r q_r* a) / mu(j); rho commutes
    // with P_j, so this is the diagonal of (F* a* Q)* (F* rho F) (F* a* Q).
    const CMatrix c = node.column.adjoint() * d.basis;
    for (std::size_t j = 0; j < expectation.size(); ++j) {
      const CMatrix& frame = expectation.frames()[j];
      const CMatrix projected = frame.adjoint() * c;            // F* a* Q
      const CMatrix weighted = frame.adjoint() * rho * frame;   // F* rho F
      const CMatrix gram = projected.adjoint() * weighted * projected;
      for (Eigen::Index r = 0; r < d.table.rows(); ++r) {
        std::vector<double> point(field.arity());
        for (std::size_t i = 0; i < field.arity(); ++i) {
          point[i] = field.cube()[i].clip(d.table(r, static_cast<Eigen::Index>(i)));
        }
        const double mass = node.weight * gram(r, r).real() / expectation.weights()[j];
        measures[j].atoms.push_back({std::move(point), mass});
      }
    }
  }
  return {std::move(expectation), std::move(y), std::move(measures)};
}

}  // namespace jtrace
