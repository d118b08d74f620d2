#include "jtrace/serialize.hpp"

namespace jtrace {

nlohmann::json matrix_to_json(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("only square matrices are serialized");
  std::vector<double> re;
  std::vector<double> im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (dim < 0 || re.size() != static_cast<std::size_t>(dim * dim) || im.size() != re.size()) {
    throw DimensionMismatch("matrix entries do not match dim");
  }
  CMatrix m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c, ++k) m(r, c) = Complex(re[k], im[k]);
  }
  return m;
}

nlohmann::json hermitian_to_json(const HermitianMatrix& x) { return matrix_to_json(x.matrix()); }

HermitianMatrix hermitian_from_json(const nlohmann::json& j) {
  const CMatrix m = matrix_from_json(j);
  if ((m - m.adjoint()).norm() > kHermitianTol * (1.0 + m.norm())) {
    throw PreconditionError("decoded matrix is not self-adjoint");
  }
  return HermitianMatrix(m);
}

nlohmann::json tuple_to_json(const AbelianTuple& t) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& x : t.members()) members.push_back(hermitian_to_json(x));
  nlohmann::json cube = nlohmann::json::array();
  for (const auto& side : t.cube()) cube.push_back({side.lo, side.hi});
  return {{"members", members}, {"cube", cube}};
}

AbelianTuple tuple_from_json(const nlohmann::json& j) {
  std::vector<HermitianMatrix> members;
  for (const auto& m : j.at("members")) members.push_back(hermitian_from_json(m));
  Cube cube;
  for (const auto& side : j.at("cube")) cube.push_back({side.at(0).get<double>(), side.at(1).get<double>()});
  return AbelianTuple(std::move(members), std::move(cube));
}

nlohmann::json decomposition_to_json(const JointSpectralDecomposition& d) {
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(d.table.size()));
  for (Eigen::Index r = 0; r < d.table.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.table.cols(); ++c) table.push_back(d.table(r, c));
  }
  return {{"dim", d.basis.rows()}, {"n", d.table.cols()}, {"basis", matrix_to_json(d.basis)},
          {"table", table}};
}

JointSpectralDecomposition decomposition_from_json(const nlohmann::json& j) {
  JointSpectralDecomposition d;
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto n = j.at("n").get<Eigen::Index>();
  d.basis = matrix_from_json(j.at("basis"));
  const auto table = j.at("table").get<std::vector<double>>();
  if (d.basis.rows() != dim || table.size() != static_cast<std::size_t>(dim * n)) {
    throw DimensionMismatch("decomposition table does not match dim and n");
  }
  d.table.resize(dim, n);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) d.table(r, c) = table[k++];
  }
  return d;
}

nlohmann::json measure_to_json(const AtomicMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms) atoms.push_back({{"point", a.point}, {"mass", a.mass}});
  return {{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const nlohmann::json& j) {
  AtomicMeasure mu;
  for (const auto& a : j.at("atoms")) {
    mu.atoms.push_back({a.at("point").get<std::vector<double>>(), a.at("mass").get<double>()});
  }
  return mu;
}

}  // namespace jtrace
