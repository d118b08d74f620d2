#include "jtrace/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <thread>

#include "jtrace/errors.hpp"
#include "jtrace/verifiers.hpp"

namespace jtrace {

namespace {

struct SuiteInfo {
  std::string id;
  std::string statement;
  std::vector<std::string> preconditions;
  std::vector<std::string> default_functions;
  bool uses_seeds = true;
  bool uses_dims = true;
};

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> table = {
      {"thm2",
       "Tr f(sum_k a_k* x_k a_k) <= Tr sum_k a_k* f(x_k) a_k for convex f of one variable",
       {"f convex (declared and probed)", "spectra of x_k inside the interval of f",
        "column a_1..a_m unital"},
       {"exp_sum", "square", "relu_sum", "quartic"}},
      {"cor9",
       "phi(f(sum_t w_t a_t* x_t a_t)) <= phi(sum_t w_t a_t* f(x_t) a_t) for unital column fields",
       {"one variable", "f convex", "the integrated matrix lies in the centralizer of phi"},
       {"exp_sum", "square"}},
      {"thm7",
       "phi(f(y)) <= phi(sum_t w_t a_t* f(x_t) a_t), y_i = sum_t w_t a_t* x_it a_t",
       {"y is an abelian tuple", "every y_i lies in the centralizer of phi",
        "f convex on the cube"},
       {"exp_sum", "square"}},
      {"cor10",
       "phi(f(sum_t w_t x_t)) <= sum_t w_t phi(f(x_t)) for probability weights",
       {"weights sum to 1", "[x_it, x_js] = [x_jt, x_is] for all i, j, s, t",
        "the mixture lies in the centralizer of phi", "f convex"},
       {"exp_sum", "square"}},
      {"cor11",
       "tau(f(s x + (1-s) y)) <= s tau(f(x)) + (1-s) tau(f(y)) on an 11-point grid of s",
       {"x and y compatible: [x_i, y_j] = [x_j, y_i]", "tau a trace", "f convex"},
       {"exp_sum", "square"}},
      {"cor12",
       "field inequality with x_it acting on tensor leg i (mutually commuting subalgebras)",
       {"x_it supported on leg i", "unital column field", "y abelian and in the centralizer of phi",
        "f convex"},
       {"exp_sum", "square"}},
      {"cor13",
       "phi(f(y)) <= phi(sum_i sum_t w_t a_it* f(0, .., x_it, .., 0) a_it)",
       {"0 in every side of the cube", "a_it supported on leg i",
        "sum_i sum_t w_t a_it* a_it = 1", "y_i supported on leg i", "y in the centralizer of phi",
        "f convex"},
       {"exp_sum", "square"}},
      {"cor14",
       "phi(f(y)) <= phi(sum_i sum_t w_t a_it* f(x) a_it), y_i = sum_t w_t a_it* x_i a_it + (1-b_i) x_i",
       {"b_i = sum_t w_t a_it* a_it with sum_i b_i = 1", "y abelian and in the centralizer of phi",
        "f convex"},
       {"exp_sum", "square"}},
      {"thm16",
       "phi(f(x)) <= phi(f(y)) for x_i <= y_i and f increasing in each variable",
       {"x and y abelian", "x_i <= y_i", "f increasing",
        "either f convex and x in the centralizer of phi, or f concave and y in the centralizer"},
       {"exp_sum", "neg_exp_sum"}},
      {"prop18",
       "g(t) = phi(f((1-t) x + t y)) is nondecreasing with g'(t) = sum_k phi(f'_k(z) h_k) >= 0",
       {"x and y compatible", "x_i <= y_i", "f increasing", "x and y in the centralizer of phi"},
       {"exp_sum", "product"}},
      {"two_factor",
       "tau(x1 y1) <= tau(x2 y2) for positive x1 <= x2, y1 <= y2 without commutation",
       {"all four matrices positive semidefinite", "x1 <= x2 and y1 <= y2", "tau a trace"},
       {""}},
      {"sin_lp",
       "sin on [-pi/2, pi/2] is farther than (2 pi)^-2 from every f+ + f- with f+ convex "
       "increasing and f- concave increasing; the grid LP optimum is a lower bound",
       {"N >= 3 grid points"},
       {""},
       false,
       false},
      {"rst_search",
       "OPEN QUESTION: whether f(r, s, t) = rst is an increasing trace function. The search "
       "samples ordered positive triples with independent eigenbases and reports the minimum "
       "gap; a rechecked negative gap is a candidate counterexample",
       {"none; the search reports evidence and never asserts"},
       {""},
       false,
       false},
      {"rst_control",
       "control arm of the rst search on compatible triples, where monotonicity is proven; "
       "any candidate is an anomaly",
       {"compatible ordered positive triples"},
       {""},
       false,
       false},
  };
  return table;
}

const SuiteInfo& suite_info(const std::string& id) {
  for (const auto& s : suites()) {
    if (s.id == id) return s;
  }
  throw ConfigError("unknown suite '" + id + "'");
}

std::string reference_label(const std::string& id) {
  static const std::map<std::string, std::string> labels = {
      {"thm2", "Jensen trace inequality for a unital column"},
      {"cor9", "one-variable Jensen trace inequality for unital column fields"},
      {"thm7", "multivariate Jensen trace inequality for fields"},
      {"cor10", "Jensen trace inequality for mixtures of compatible tuples"},
      {"cor11", "trace convexity on compatible tuples"},
      {"cor12", "Jensen trace inequality on mutually commuting subalgebras"},
      {"cor13", "leg-local Jensen trace inequality with zero padding"},
      {"cor14", "leg-local Jensen trace inequality with a fixed tuple"},
      {"thm16", "trace monotonicity of convex or concave increasing functions"},
      {"prop18", "trace monotonicity along compatible paths"},
      {"two_factor", "two-factor trace monotonicity"},
      {"sin_lp", "no increasing convex plus concave split of sine"},
      {"rst_search", "open question on the triple product trace"},
      {"rst_control", "triple product trace on compatible triples"},
  };
  const auto it = labels.find(id);
  return it == labels.end() ? std::string() : it->second;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t cell_stream(const Cell& c) {
  return fnv1a(c.suite + "|" + c.function + "|" + std::to_string(c.dim) + "|" +
               std::to_string(c.lp_size));
}

Interval side_for(const std::string& fn) {
  static const std::set<std::string> positive = {"sqrt_sum", "log1p_sum", "product", "product2",
                                                 "product3"};
  return positive.count(fn) ? Interval{0.0, 1.0} : Interval{-1.0, 1.0};
}

std::size_t choose_arity(Rng& rng, const std::string& fn, std::size_t lo, std::size_t hi) {
  if (fn == "sin") return 1;
  if (fn == "product2") return 2;
  if (fn == "product3") return 3;
  return static_cast<std::size_t>(rng.uniform_int(lo, hi));
}

std::vector<Eigen::Index> leg_dims_for(Rng& rng, std::size_t legs, Eigen::Index cap) {
  std::vector<Eigen::Index> dims(legs);
  const auto lo = static_cast<std::uint64_t>(std::min<Eigen::Index>(2, cap));
  for (auto& d : dims) d = static_cast<Eigen::Index>(rng.uniform_int(lo, static_cast<std::uint64_t>(cap)));
  while (total_dim(dims) > 64) {
    auto it = std::max_element(dims.begin(), dims.end());
    --*it;
  }
  return dims;
}

ScalarFunction make_function(const Cell& cell, std::size_t arity, const Cube& cube) {
  return catalog(cell.function, arity, cube, cell.seed);
}

Cube hull(const std::vector<HermitianMatrix>& a, const std::vector<HermitianMatrix>& b,
          double floor) {
  Cube cube;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const RVector ea = eigenvalues(a[i]);
    const RVector eb = eigenvalues(b[i]);
    const double lo = std::max(floor, std::min(ea.minCoeff(), eb.minCoeff()));
    cube.push_back({lo, std::max(lo, std::max(ea.maxCoeff(), eb.maxCoeff()))});
  }
  return cube;
}

InequalityReport run_thm2(const Cell& cell, Rng& rng, double tol) {
  const Interval side = side_for(cell.function);
  const ScalarFunction f = make_function(cell, 1, {side});
  const auto m = static_cast<std::size_t>(rng.uniform_int(1, 4));
  std::vector<HermitianMatrix> xs;
  for (std::size_t k = 0; k < m; ++k) xs.push_back(random_hermitian(rng, cell.dim, f.cube[0]));
  const UnitalColumn column = random_unital_column(rng, m, cell.dim);
  return jensen_trace_matrix(f, xs, column, tol);
}

InequalityReport run_cor9(const Cell& cell, Rng& rng, double tol) {
  const Interval side = side_for(cell.function);
  const ScalarFunction f = make_function(cell, 1, {side});
  const auto nodes = static_cast<std::size_t>(rng.uniform_int(1, 4));
  const DiscreteField field = random_field(rng, nodes, cell.dim, 1, f.cube);
  const TraceFunctional phi = centralizing_state(rng, AbelianTuple(field.integrate_all(), f.cube));
  return jensen_one_var_field(f, field, phi, tol);
}

InequalityReport run_tensor_field(const Cell& cell, Rng& rng, bool subalgebra, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 2, 3);
  const ScalarFunction f = make_function(cell, n, uniform_cube(n, side_for(cell.function)));
  const auto legs = leg_dims_for(rng, n, cell.dim);
  const auto nodes = static_cast<std::size_t>(rng.uniform_int(1, 4));
  const bool scalar_columns = subalgebra && rng.uniform(0.0, 1.0) < 0.25;
  const TensorField inst = random_tensor_field(rng, legs, nodes, f.cube, scalar_columns);
  const TraceFunctional phi =
      centralizing_state(rng, AbelianTuple(inst.field.integrate_all(), f.cube));
  return subalgebra ? jensen_subalgebra_tensor(f, inst, phi, tol)
                     : jensen_field_multivar(f, inst.field, phi, tol);
}

CommutantPair commutant_pair(const Cell& cell, Rng& rng, std::size_t n) {
  const bool positive = side_for(cell.function).lo >= 0.0;
  std::vector<double> eps(n);
  for (auto& e : eps) e = positive ? rng.uniform(0.1, 1.0) : rng.normal();
  return compatible_pair_commutant(rng, cell.dim, eps, {.ordered_positive = positive});
}

InequalityReport run_cor10(const Cell& cell, Rng& rng, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 2, 2);
  const CommutantPair pair = commutant_pair(cell, rng, n);
  const ScalarFunction f = make_function(cell, n, pair.x.cube());
  const double w = rng.uniform(0.0, 1.0);
  const std::vector<AbelianTuple> tuples = {pair.x, pair.y};
  const std::vector<double> weights = {w, 1.0 - w};
  std::vector<HermitianMatrix> mix;
  for (std::size_t i = 0; i < n; ++i) mix.push_back(w * pair.x[i] + (1.0 - w) * pair.y[i]);
  const TraceFunctional phi = centralizing_state(rng, AbelianTuple(mix, f.cube));
  return jensen_mixture(f, tuples, weights, phi, tol);
}

InequalityReport run_cor11(const Cell& cell, Rng& rng, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 2, 2);
  const CommutantPair pair = commutant_pair(cell, rng, n);
  const ScalarFunction f = make_function(cell, n, pair.x.cube());
  std::vector<double> grid(11);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / 10.0;
  const auto reports =
      trace_convexity_segment(f, pair.x, pair.y, TraceFunctional::trace(cell.dim), grid, tol);
  // The row carries the grid point with the smallest relative gap.
  const InequalityReport* worst = &reports.front();
  for (const auto& r : reports) {
    if (r.verdict == Verdict::precondition_failed) return r;
    if (r.gap / r.scale() < worst->gap / worst->scale()) worst = &r;
  }
  return *worst;
}

InequalityReport run_leg_column(const Cell& cell, Rng& rng, bool constant, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 2, 3);
  Cube cube = uniform_cube(n, side_for(cell.function));
  const ScalarFunction f = make_function(cell, n, cube);
  const auto legs = leg_dims_for(rng, n, cell.dim);
  const auto nodes = static_cast<std::size_t>(rng.uniform_int(1, 3));
  const LegColumnField inst = random_leg_column_field(rng, legs, nodes, f.cube, constant);
  const std::vector<HermitianMatrix> y = constant ? constant_tuple(inst) : block_zero_tuple(inst);
  const TraceFunctional phi = centralizing_state(rng, AbelianTuple(y, f.cube));
  return constant ? jensen_constant_tuple(f, inst, phi, tol)
                  : jensen_block_zero(f, inst, phi, tol);
}

InequalityReport run_thm16(const Cell& cell, Rng& rng, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 1, 3);
  Interval side = side_for(cell.function);
  if (cell.function == "sin") side = {-1.5, 0.0};
  const PlantedTuple px = random_planted_tuple(rng, cell.dim, n, uniform_cube(n, side));
  const PlantedTuple py = random_planted_tuple(rng, cell.dim, n, uniform_cube(n, side));
  std::vector<HermitianMatrix> ys;
  for (std::size_t i = 0; i < n; ++i) {
    // Smallest nonnegative scalar shift that orders the pair; keeps y abelian.
    const double shift = std::max(0.0, -min_eigenvalue(py.tuple[i] - px.tuple[i]));
    ys.push_back(py.tuple[i] + shift * HermitianMatrix::identity(cell.dim));
  }
  const Cube cube = hull(px.tuple.members(), ys, side.lo >= 0.0 ? 0.0 : -1e300);
  const ScalarFunction f = make_function(cell, n, cube);
  const AbelianTuple x(px.tuple.members(), f.cube);
  const AbelianTuple y(ys, f.cube);
  // Centralize the side the function's shape calls for.
  const bool convex = f.claimed_convex;
  const TraceFunctional phi = centralizing_state(rng, convex ? x : y);
  return monotone_trace_check(f, x, y, phi, tol);
}

InequalityReport run_prop18(const Cell& cell, Rng& rng, double tol) {
  const std::size_t n = choose_arity(rng, cell.function, 1, 3);
  std::vector<double> eps(n);
  for (auto& e : eps) e = rng.uniform(0.1, 1.0);
  const CommutantPair pair = compatible_pair_commutant(rng, cell.dim, eps, {.ordered_positive = true});
  const ScalarFunction f = make_function(cell, n, pair.x.cube());
  // A density from the block algebra commutes with both tuples.
  RVector diag(cell.dim);
  Eigen::Index offset = 0;
  for (Eigen::Index b : pair.block_sizes) {
    diag.segment(offset, b).setConstant(rng.uniform(0.1, 1.0));
    offset += b;
  }
  diag /= diag.sum();
  const TraceFunctional phi(
      HermitianMatrix(pair.frame * diag.cast<Complex>().asDiagonal() * pair.frame.adjoint()));
  std::vector<double> grid(11);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / 10.0;
  return path_monotonicity_check(f, pair.x, pair.y, phi, grid, tol);
}

InequalityReport run_two_factor(const Cell& cell, Rng& rng, double tol) {
  const HermitianMatrix x1 = random_psd(rng, cell.dim, 1.0);
  const HermitianMatrix y1 = random_psd(rng, cell.dim, 1.0);
  const HermitianMatrix x2 = x1 + random_psd(rng, cell.dim, 1.0);
  const HermitianMatrix y2 = y1 + random_psd(rng, cell.dim, 1.0);
  const double c = rng.uniform(0.5, 2.0);
  return two_factor_monotone(x1, y1, x2, y2, TraceFunctional::trace(cell.dim).scaled(c), tol);
}

InequalityReport run_sin_lp(const Cell& cell) {
  const double bound = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  const SplitCertificate cert = sin_decomposition_lp(cell.lp_size);
  InequalityReport r =
      evaluated_report("sin_lp", reference_label("sin_lp"), bound, cert.optimum, 0.0, false);
  if (!(r.gap > 0.0)) r.verdict = Verdict::fail;
  r.metadata["N"] = cert.n;
  r.metadata["optimum"] = cert.optimum;
  r.metadata["certificate"] = {{"grid", cert.grid}, {"plus", cert.plus}, {"minus", cert.minus}};
  return r;
}

InequalityReport run_rst(const Cell& cell, const CampaignConfig& config, bool control) {
  RstSearchOptions opts;
  opts.seed = cell.seed;
  opts.trials = config.rst_trials;
  opts.dim_min = config.dim_min;
  opts.dim_max = config.dim_max;
  opts.arm = control ? RstArm::compatible : RstArm::general;
  opts.tol = config.tol;
  opts.workers = config.workers;
  const RstSearchResult result = rst_counterexample_search(opts);
  InequalityReport r =
      evaluated_report(cell.suite, reference_label(cell.suite), 0.0, result.min_gap, config.tol, control);
  r.verdict = result.candidate ? Verdict::fail : Verdict::pass;
  r.metadata["search"] = to_json(result);
  return r;
}

void tally(CampaignSummary& s, const InequalityReport& r) {
  ++s.rows;
  switch (r.verdict) {
    case Verdict::pass:
      ++s.passed;
      break;
    case Verdict::fail:
      ++s.failed;
      break;
    case Verdict::precondition_failed:
      ++s.precondition_failed;
      break;
  }
  if (r.anomaly()) ++s.anomalies;
  if (r.id == "rst_search" && r.verdict == Verdict::fail) ++s.candidates;
}

int exit_code_for(const CampaignSummary& s) {
  if (s.anomalies > 0) return kExitAnomaly;
  if (s.candidates > 0) return kExitCandidate;
  if (s.failed > 0 || s.precondition_failed > 0) return kExitFail;
  return kExitPass;
}

std::uint64_t get_count(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1) {
    throw ConfigError(std::string(what) + " must be an integer >= 1");
  }
  return j.get<std::uint64_t>();
}

}  // namespace

std::pair<Eigen::Index, Eigen::Index> parse_dim_range(const std::string& text) {
  auto parse = [&](std::string_view s) {
    Eigen::Index v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("invalid dimension range '" + text + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const Eigen::Index v = parse(text);
    return {v, v};
  }
  return {parse(std::string_view(text).substr(0, dots)), parse(std::string_view(text).substr(dots + 2))};
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw ConfigError("output format must be json or csv, got '" + text + "'");
}

CampaignConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"suites",  "seeds",    "dims",       "functions",
                                              "tolerances", "output", "workers", "lp_sizes",
                                              "rst_trials"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  CampaignConfig c;
  try {
    if (!j.contains("suites")) throw ConfigError("config needs a suites list");
    c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      if (s.is_object()) {
        c.seed_base = s.value("base", std::uint64_t{0});
        if (s.contains("count")) c.seed_count = get_count(s.at("count"), "seeds.count");
      } else {
        c.seed_count = get_count(s, "seeds");
      }
    }
    if (j.contains("dims")) {
      const auto& d = j.at("dims");
      if (d.is_string()) {
        std::tie(c.dim_min, c.dim_max) = parse_dim_range(d.get<std::string>());
      } else if (d.is_object()) {
        c.dim_min = d.at("min").get<Eigen::Index>();
        c.dim_max = d.at("max").get<Eigen::Index>();
      } else {
        c.dim_min = c.dim_max = d.get<Eigen::Index>();
      }
    }
    if (j.contains("functions")) c.functions = j.at("functions").get<std::vector<std::string>>();
    if (j.contains("tolerances")) c.tol = j.at("tolerances").value("rel", kDefaultRelTol);
    if (j.contains("output")) {
      const auto& o = j.at("output");
      c.output_path = o.value("path", std::string());
      c.format = parse_format(o.value("format", std::string("json")));
    }
    if (j.contains("workers")) c.workers = static_cast<unsigned>(get_count(j.at("workers"), "workers"));
    if (j.contains("lp_sizes")) c.lp_sizes = j.at("lp_sizes").get<std::vector<std::size_t>>();
    if (j.contains("rst_trials")) c.rst_trials = get_count(j.at("rst_trials"), "rst_trials");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

void validate(const CampaignConfig& c) {
  if (c.suites.empty()) throw ConfigError("suite list is empty");
  for (const auto& s : c.suites) suite_info(s);
  if (c.seed_count < 1) throw ConfigError("seed count must be >= 1");
  if (c.dim_min < 1 || c.dim_max < c.dim_min || c.dim_max > 64) {
    throw ConfigError("dims must satisfy 1 <= min <= max <= 64");
  }
  const auto names = catalog_names();
  for (const auto& f : c.functions) {
    if (std::find(names.begin(), names.end(), f) == names.end()) {
      throw ConfigError("unknown function '" + f + "'");
    }
  }
  if (!(c.tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.lp_sizes.empty()) throw ConfigError("lp_sizes is empty");
  for (auto n : c.lp_sizes) {
    if (n < 3) throw ConfigError("lp sizes must be >= 3");
  }
  if (c.rst_trials < 1) throw ConfigError("rst_trials must be >= 1");
}

std::vector<Cell> expand_cells(const CampaignConfig& config) {
  std::vector<Cell> cells;
  for (const auto& id : config.suites) {
    const SuiteInfo& info = suite_info(id);
    if (id == "sin_lp") {
      for (auto n : config.lp_sizes) cells.push_back({id, config.seed_base, 0, "", n});
      continue;
    }
    if (!info.uses_seeds) {
      cells.push_back({id, config.seed_base, 0, "", 0});
      continue;
    }
    const bool takes_functions = info.default_functions.front() != "";
    const std::vector<std::string> fns =
        !takes_functions ? std::vector<std::string>{""}
                         : (config.functions.empty() ? info.default_functions : config.functions);
    for (std::uint64_t k = 0; k < config.seed_count; ++k) {
      for (Eigen::Index d = config.dim_min; d <= config.dim_max; ++d) {
        for (const auto& fn : fns) cells.push_back({id, config.seed_base + k, d, fn, 0});
      }
    }
  }
  return cells;
}

InequalityReport run_cell(const Cell& cell, const CampaignConfig& config) {
  const std::uint64_t stream = cell_stream(cell);
  InequalityReport r;
  try {
    Rng rng(cell.seed, stream);
    const double tol = config.tol;
    if (cell.suite == "thm2") r = run_thm2(cell, rng, tol);
    else if (cell.suite == "cor9") r = run_cor9(cell, rng, tol);
    else if (cell.suite == "thm7") r = run_tensor_field(cell, rng, false, tol);
    else if (cell.suite == "cor10") r = run_cor10(cell, rng, tol);
    else if (cell.suite == "cor11") r = run_cor11(cell, rng, tol);
    else if (cell.suite == "cor12") r = run_tensor_field(cell, rng, true, tol);
    else if (cell.suite == "cor13") r = run_leg_column(cell, rng, false, tol);
    else if (cell.suite == "cor14") r = run_leg_column(cell, rng, true, tol);
    else if (cell.suite == "thm16") r = run_thm16(cell, rng, tol);
    else if (cell.suite == "prop18") r = run_prop18(cell, rng, tol);
    else if (cell.suite == "two_factor") r = run_two_factor(cell, rng, tol);
    else if (cell.suite == "sin_lp") r = run_sin_lp(cell);
    else if (cell.suite == "rst_search") r = run_rst(cell, config, false);
    else if (cell.suite == "rst_control") r = run_rst(cell, config, true);
    else throw ConfigError("unknown suite '" + cell.suite + "'");
  } catch (const Error& e) {
    r = precondition_report(cell.suite, "", e.what());
  }
  r.id = cell.suite;
  if (r.reference.empty()) r.reference = reference_label(cell.suite);
  r.seed = cell.seed;
  nlohmann::json params = {{"dim", cell.dim}};
  if (!cell.function.empty()) params["function"] = cell.function;
  if (cell.lp_size > 0) params["lp_size"] = cell.lp_size;
  r.metadata["manifest"] = InstanceManifest{cell.seed, stream, cell.suite, params};
  return r;
}

nlohmann::json to_json(const CampaignSummary& s) {
  return {{"rows", s.rows},
          {"passed", s.passed},
          {"failed", s.failed},
          {"precondition_failed", s.precondition_failed},
          {"anomalies", s.anomalies},
          {"candidates", s.candidates},
          {"exit_code", s.exit_code},
          {"extras", s.extras}};
}

CampaignSummary run_campaign(const CampaignConfig& config, std::ostream& rows,
                             std::ostream& diagnostics) {
  validate(config);
  const std::vector<Cell> cells = expand_cells(config);

  std::ofstream file;
  if (!config.output_path.empty()) {
    file.open(config.output_path, std::ios::out | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output file '" + config.output_path + "'");
  }
  std::ostream& out = config.output_path.empty() ? rows : file;
  if (config.format == OutputFormat::csv) out << csv_header() << '\n' << std::flush;

  CampaignSummary summary;
  const unsigned workers = std::max(1U, config.workers);
  const std::size_t window = static_cast<std::size_t>(workers) * 8;
  std::vector<InequalityReport> results;

  for (std::size_t begin = 0; begin < cells.size(); begin += window) {
    const std::size_t end = std::min(cells.size(), begin + window);
    results.assign(end - begin, InequalityReport{});
    std::atomic<std::size_t> next{begin};
    auto work = [&] {
      for (std::size_t k = next++; k < end; k = next++) results[k - begin] = run_cell(cells[k], config);
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    // Emit in cell order regardless of completion order.
    for (const auto& r : results) {
      tally(summary, r);
      if (config.format == OutputFormat::json) {
        out << nlohmann::json(r).dump() << '\n';
      } else {
        out << csv_row(r) << '\n';
      }
      if (r.anomaly()) {
        diagnostics << "anomaly in " << r.id << " seed " << r.seed
                    << ", manifest: " << r.metadata.at("manifest").dump() << '\n';
      }
      if (r.id == "sin_lp" && r.metadata.contains("N")) {
        summary.extras["sin_lp"].push_back({{"N", r.metadata["N"]}, {"optimum", r.metadata["optimum"]}});
      }
      if (r.metadata.contains("search")) summary.extras[r.id] = r.metadata["search"];
    }
    out << std::flush;
  }
  summary.exit_code = exit_code_for(summary);

  if (!config.output_path.empty()) {
    std::ofstream s(config.output_path + ".summary.json", std::ios::out | std::ios::trunc);
    s << to_json(summary).dump(2) << '\n';
  }
  return summary;
}

std::vector<std::string> suite_ids() {
  std::vector<std::string> ids;
  for (const auto& s : suites()) ids.push_back(s.id);
  return ids;
}

bool is_suite(const std::string& id) {
  const auto ids = suite_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::string describe(const std::string& id) {
  const SuiteInfo& info = suite_info(id);
  std::string text = id + ": " + info.statement + "\n";
  text += "preconditions:\n";
  for (const auto& p : info.preconditions) text += "  - " + p + "\n";
  if (info.default_functions.front() != "") {
    text += "default functions:";
    for (const auto& f : info.default_functions) text += " " + f;
    text += "\n";
  }
  text += "row schema: inequality-id, paper-ref, seed, lhs, rhs, gap = rhs - lhs, tol, verdict "
          "(pass | fail | precondition-failed), metadata.manifest\n";
  if (id == "sin_lp") text += "lhs is (2 pi)^-2, rhs is the LP optimum; pass iff rhs > lhs\n";
  if (id == "rst_search" || id == "rst_control") {
    text += "lhs is 0, rhs is the minimum gap Tr(y1 y2 y3) - Tr(x1 x2 x3); metadata.search holds "
            "{trials, dims, min_gap, candidate}\n";
  }
  return text;
}

}  // namespace jtrace
