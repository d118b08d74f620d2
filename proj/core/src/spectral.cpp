#include "jtrace/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace jtrace {

double Interval::clip(double v) const {
  if (v >= lo && v <= hi) return v;
  if (v < lo && lo - v <= kSpectrumSlack * (1.0 + std::abs(lo))) return lo;
  if (v > hi && v - hi <= kSpectrumSlack * (1.0 + std::abs(hi))) return hi;
  throw DomainError("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
}

Cube uniform_cube(std::size_t n, Interval side) { return Cube(n, side); }

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("Hermitian matrix must be square, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw DomainError("Hermitian matrix has non-finite entries");
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return {CMatrix::Zero(dim, dim), Trusted{}};
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return {CMatrix::Identity(dim, dim), Trusted{}};
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> entries) {
  RVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return diagonal(v);
}

HermitianMatrix HermitianMatrix::diagonal(const RVector& entries) {
  if (!entries.allFinite()) throw DomainError("diagonal has non-finite entries");
  return {entries.cast<Complex>().asDiagonal(), Trusted{}};
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("sum of Hermitian matrices of unequal dim");
  return {a.m_ + b.m_, HermitianMatrix::Trusted{}};
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("difference of Hermitian matrices of unequal dim");
  return {a.m_ - b.m_, HermitianMatrix::Trusted{}};
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return {s * a.m_, HermitianMatrix::Trusted{}};
}

Eigensystem eigensystem(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x.matrix());
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector eigenvalues(const HermitianMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

double min_eigenvalue(const HermitianMatrix& x) {
  if (x.dim() == 0) return 0.0;
  return eigenvalues(x)(0);
}

CMatrix sandwich(const CMatrix& a, const CMatrix& x) {
  if (x.rows() != x.cols() || a.rows() != x.rows()) {
    throw DimensionMismatch("sandwich a* x a: a is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", x is " + std::to_string(x.rows()) +
                            "x" + std::to_string(x.cols()));
  }
  CMatrix xa = x * a;
  return a.adjoint() * xa;
}

CMatrix commutator(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols()) {
    throw DimensionMismatch("commutator of matrices of unequal shape");
  }
  return x * y - y * x;
}

CMatrix commutator(const HermitianMatrix& x, const HermitianMatrix& y) {
  return commutator(x.matrix(), y.matrix());
}

AbelianCheck is_abelian(std::span<const HermitianMatrix> members, double tol) {
  AbelianCheck check;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double c = commutator(members[i], members[j]).norm();
      const double rel = c / (1.0 + members[i].norm() * members[j].norm());
      check.worst_absolute = std::max(check.worst_absolute, c);
      check.worst_relative = std::max(check.worst_relative, rel);
    }
  }
  check.abelian = check.worst_relative <= tol;
  return check;
}

AbelianTuple::AbelianTuple(std::vector<HermitianMatrix> members, Cube cube, double tol)
    : members_(std::move(members)), cube_(std::move(cube)) {
  if (members_.size() != cube_.size()) {
    throw DimensionMismatch("tuple has " + std::to_string(members_.size()) + " members but cube has " +
                            std::to_string(cube_.size()) + " sides");
  }
  if (!members_.empty()) dim_ = members_.front().dim();
  for (const auto& m : members_) {
    if (m.dim() != dim_) throw DimensionMismatch("tuple members have unequal dimensions");
  }
  const AbelianCheck check = is_abelian(members_, tol);
  if (!check.abelian) {
    throw PreconditionError("tuple is not abelian: worst relative commutator " +
                            std::to_string(check.worst_relative));
  }
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (cube_[i].lo > cube_[i].hi) throw DomainError("empty cube side");
    if (dim_ == 0) continue;
    const RVector ev = eigenvalues(members_[i]);
    static_cast<void>(cube_[i].clip(ev(0)));
    static_cast<void>(cube_[i].clip(ev(ev.size() - 1)));
  }
}

AbelianTuple AbelianTuple::with_spectral_cube(std::vector<HermitianMatrix> members, double tol) {
  Cube cube;
  cube.reserve(members.size());
  for (const auto& m : members) {
    if (m.dim() == 0) {
      cube.push_back({0.0, 0.0});
      continue;
    }
    const RVector ev = eigenvalues(m);
    cube.push_back({ev(0), ev(ev.size() - 1)});
  }
  return {std::move(members), std::move(cube), tol};
}

namespace {

std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters_of(const RVector& sorted, double gap) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;  // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index k = 1; k <= sorted.size(); ++k) {
    if (k == sorted.size() || sorted(k) - sorted(k - 1) >= gap) {
      out.emplace_back(begin, k);
      begin = k;
    }
  }
  return out;
}

bool is_scalar(const CMatrix& m) {
  const Eigen::Index d = m.rows();
  const Complex mean = m.trace() / static_cast<double>(d);
  const CMatrix dev = m - mean * CMatrix::Identity(d, d);
  return dev.norm() <= kClusterGap * (1.0 + m.norm());
}

// Recursive splitting of the common eigenspaces of commuting Hermitian
// matrices: diagonalize a random combination, then refine every eigenvalue
// cluster on its own subspace.
class Splitter {
 public:
  explicit Splitter(std::uint64_t seed) : engine_(seed) {}

  CMatrix split(const std::vector<CMatrix>& members, int depth) {
    const Eigen::Index d = members.front().rows();
    if (d == 1) return CMatrix::Identity(1, 1);

    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix combo = CMatrix::Zero(d, d);
    for (const auto& m : members) {
      const double n = m.norm();
      if (n > 0.0) combo += (gauss(engine_) / n) * m;
    }
    combo = (combo + combo.adjoint()).eval() * 0.5;

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(combo);
    CMatrix vectors = solver.eigenvectors();
    auto clusters = clusters_of(solver.eigenvalues(), kClusterGap * (1.0 + combo.norm()));

    if (clusters.size() == 1) {
      // Degenerate combination: split by the first member that is not a
      // multiple of the identity on this subspace.
      const auto it = std::find_if(members.begin(), members.end(),
                                   [](const CMatrix& m) { return !is_scalar(m); });
      if (it == members.end()) return CMatrix::Identity(d, d);
      CMatrix herm = (*it + it->adjoint()) * 0.5;
      Eigen::SelfAdjointEigenSolver<CMatrix> single(herm);
      vectors = single.eigenvectors();
      clusters = clusters_of(single.eigenvalues(), kClusterGap * (1.0 + herm.norm()));
      if (clusters.size() == 1 || depth > 64) return vectors;
    }

    for (const auto& [begin, end] : clusters) {
      const Eigen::Index size = end - begin;
      if (size == 1) continue;
      const CMatrix block = vectors.middleCols(begin, size);
      std::vector<CMatrix> restricted;
      restricted.reserve(members.size());
      for (const auto& m : members) restricted.push_back(block.adjoint() * m * block);
      const CMatrix inner = split(restricted, depth + 1);
      vectors.middleCols(begin, size) = block * inner;
    }
    return vectors;
  }

 private:
  std::mt19937_64 engine_;
};

JointSpectralDecomposition decomposition_from_basis(std::span<const HermitianMatrix> members,
                                                    CMatrix basis) {
  JointSpectralDecomposition out;
  const Eigen::Index d = basis.rows();
  out.table.resize(d, static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    const CMatrix rotated = basis.adjoint() * members[i].matrix() * basis;
    for (Eigen::Index j = 0; j < d; ++j) {
      out.table(j, static_cast<Eigen::Index>(i)) = rotated(j, j).real();
    }
  }
  out.basis = std::move(basis);
  return out;
}

bool acceptable(std::span<const HermitianMatrix> members, const JointSpectralDecomposition& d) {
  const Eigen::Index n = d.basis.rows();
  const double unitarity = (d.basis.adjoint() * d.basis - CMatrix::Identity(n, n)).norm();
  return unitarity <= kUnitaryTol && reconstruction_residual(members, d) <= kReconstructionTol;
}

constexpr int kRandomAttempts = 5;
constexpr std::uint64_t kSplitterSeed = 0x6a09e667f3bcc909ULL;

}  // namespace

double reconstruction_residual(std::span<const HermitianMatrix> members,
                               const JointSpectralDecomposition& d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const RVector column = d.table.col(static_cast<Eigen::Index>(i));
    const CMatrix rebuilt = d.basis * column.cast<Complex>().asDiagonal() * d.basis.adjoint();
    const double r = (members[i].matrix() - rebuilt).norm() / (1.0 + members[i].norm());
    worst = std::max(worst, r);
  }
  return worst;
}

JointSpectralDecomposition joint_diagonalize(const AbelianTuple& t) {
  return joint_diagonalize(std::span<const HermitianMatrix>(t.members()));
}

JointSpectralDecomposition joint_diagonalize(std::span<const HermitianMatrix> members) {
  if (members.empty()) throw PreconditionError("cannot diagonalize an empty tuple");
  const Eigen::Index d = members.front().dim();
  for (const auto& m : members) {
    if (m.dim() != d) throw DimensionMismatch("tuple members have unequal dimensions");
  }
  if (d == 0) return {CMatrix(0, 0), RMatrix(0, static_cast<Eigen::Index>(members.size())), 1, false};

  std::vector<CMatrix> raw;
  raw.reserve(members.size());
  for (const auto& m : members) raw.push_back(m.matrix());

  for (int attempt = 1; attempt <= kRandomAttempts; ++attempt) {
    Splitter splitter(kSplitterSeed + static_cast<std::uint64_t>(attempt));
    auto out = decomposition_from_basis(members, splitter.split(raw, 0));
    out.attempts = attempt;
    if (acceptable(members, out)) return out;
  }
  auto fallback = jacobi_joint_diagonalize(members);
  if (acceptable(members, fallback)) return fallback;
  throw ConvergenceError("joint diagonalization failed: residual " +
                         std::to_string(reconstruction_residual(members, fallback)) +
                         " (input is probably only approximately commuting)");
}

JointSpectralDecomposition jacobi_joint_diagonalize(std::span<const HermitianMatrix> members,
                                                    int max_sweeps) {
  if (members.empty()) throw PreconditionError("cannot diagonalize an empty tuple");
  const Eigen::Index d = members.front().dim();
  std::vector<CMatrix> work;
  work.reserve(members.size());
  for (const auto& m : members) {
    if (m.dim() != d) throw DimensionMismatch("tuple members have unequal dimensions");
    work.push_back(m.matrix());
  }
  CMatrix v = CMatrix::Identity(d, d);
  const Complex i_unit(0.0, 1.0);
  constexpr double threshold = 1e-15;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
        for (const auto& a : work) {
          Eigen::Vector3cd h(a(p, p) - a(q, q), a(p, q) + a(q, p), i_unit * (a(q, p) - a(p, q)));
          g += (h * h.adjoint()).real();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3d angles = es.eigenvectors().col(2);
        if (angles(0) < 0.0) angles = -angles;
        const double c = std::sqrt(0.5 + angles(0) / 2.0);
        const Complex s = 0.5 * Complex(angles(1), -angles(2)) / c;
        if (std::abs(s) <= threshold) continue;
        rotated = true;
        // a <- G* a G with G = [c, -conj(s); s, c] acting on (p, q)
        for (auto& a : work) {
          const Eigen::RowVectorXcd rowp = a.row(p);
          const Eigen::RowVectorXcd rowq = a.row(q);
          a.row(p) = c * rowp + std::conj(s) * rowq;
          a.row(q) = -s * rowp + c * rowq;
          const CVector colp = a.col(p);
          const CVector colq = a.col(q);
          a.col(p) = c * colp + s * colq;
          a.col(q) = -std::conj(s) * colp + c * colq;
        }
        const CVector vp = v.col(p);
        const CVector vq = v.col(q);
        v.col(p) = c * vp + s * vq;
        v.col(q) = -std::conj(s) * vp + c * vq;
      }
    }
    if (!rotated) break;
  }
  auto out = decomposition_from_basis(members, std::move(v));
  out.attempts = 0;
  out.used_jacobi = true;
  return out;
}

double compatibility_residual(const AbelianTuple& x, const AbelianTuple& y) {
  if (x.size() != y.size() || x.dim() != y.dim()) {
    throw DimensionMismatch("compatibility requires tuples of equal length and dimension");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const CMatrix diff = commutator(x[i], y[j]) - commutator(x[j], y[i]);
      const double scale = 1.0 + x[i].norm() * y[j].norm() + x[j].norm() * y[i].norm();
      worst = std::max(worst, diff.norm() / scale);
    }
  }
  return worst;
}

bool compatible(const AbelianTuple& x, const AbelianTuple& y, double tol) {
  return compatibility_residual(x, y) <= tol;
}

bool psd_leq(const HermitianMatrix& x, const HermitianMatrix& y, double tol) {
  if (x.dim() != y.dim()) throw DimensionMismatch("operator order of matrices of unequal dim");
  const double scale = 1.0 + std::max(x.norm(), y.norm());
  return min_eigenvalue(y - x) >= -tol * scale;
}

std::vector<HermitianMatrix> blend(std::span<const HermitianMatrix> x,
                                   std::span<const HermitianMatrix> y, double s) {
  if (x.size() != y.size()) throw DimensionMismatch("blend of tuples of unequal length");
  std::vector<HermitianMatrix> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(s * x[i] + (1.0 - s) * y[i]);
  return out;
}

}  // namespace jtrace
