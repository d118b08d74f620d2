#pragma once

// JSON forms of matrices, tuples, decompositions and measures. Doubles are
// written with round-trip precision, so a decode reproduces every bit.

#include <nlohmann/json.hpp>

#include "jtrace/functionals.hpp"
#include "jtrace/spectral.hpp"

namespace jtrace {

/// {"dim": d, "re": [...], "im": [...]} in row-major order. Square only.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json hermitian_to_json(const HermitianMatrix& x);
/// Throws PreconditionError when the decoded matrix is not self-adjoint
/// within kHermitianTol.
HermitianMatrix hermitian_from_json(const nlohmann::json& j);

/// {"members": [...], "cube": [[lo, hi], ...]}.
nlohmann::json tuple_to_json(const AbelianTuple& t);
AbelianTuple tuple_from_json(const nlohmann::json& j);

/// {"dim", "n", "basis": matrix, "table": row-major list}.
nlohmann::json decomposition_to_json(const JointSpectralDecomposition& d);
JointSpectralDecomposition decomposition_from_json(const nlohmann::json& j);

/// {"atoms": [{"point": [...], "mass": m}, ...]}.
nlohmann::json measure_to_json(const AtomicMeasure& mu);
AtomicMeasure measure_from_json(const nlohmann::json& j);

}  // namespace jtrace
