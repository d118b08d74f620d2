#include "jtrace/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace jtrace {

HermitianMatrix apply_univariate(const ScalarFunction& f, const HermitianMatrix& x) {
  if (f.arity() != 1) {
    throw DimensionMismatch("apply_univariate needs a function of one variable, got arity " +
                            std::to_string(f.arity()));
  }
  const Eigensystem es = eigensystem(x);
  RVector mapped(es.values.size());
  double point[1];
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    point[0] = f.cube[0].clip(es.values(j));
    mapped(j) = f.eval(point);
  }
  return HermitianMatrix(es.vectors * mapped.cast<Complex>().asDiagonal() * es.vectors.adjoint());
}

HermitianMatrix apply_multivariate(const ScalarFunction& f, const AbelianTuple& t) {
  if (t.size() != f.arity()) {
    throw DimensionMismatch("function of arity " + std::to_string(f.arity()) + " applied to a " +
                            std::to_string(t.size()) + "-tuple");
  }
  if (t.size() == 1) return apply_univariate(f, t[0]);
  return apply_multivariate(f, t, joint_diagonalize(t));
}

HermitianMatrix apply_multivariate(const ScalarFunction& f, const AbelianTuple& t,
                                   const JointSpectralDecomposition& d) {
  if (t.size() != f.arity()) {
    throw DimensionMismatch("function of arity " + std::to_string(f.arity()) + " applied to a " +
                            std::to_string(t.size()) + "-tuple");
  }
  const Eigen::Index rows = d.table.rows();
  RVector mapped(rows);
  std::vector<double> point(t.size());
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      point[i] = f.cube[i].clip(d.table(j, static_cast<Eigen::Index>(i)));
    }
    mapped(j) = f.eval(point);
  }
  return HermitianMatrix(d.basis * mapped.cast<Complex>().asDiagonal() * d.basis.adjoint());
}

double difference_step(double coordinate) { return 1e-5 * (1.0 + std::abs(coordinate)); }

double partial_eval(const ScalarFunction& f, std::size_t k, Point point) {
  if (k >= f.arity() || point.size() != f.arity()) {
    throw DimensionMismatch("partial index or point size does not match the function arity");
  }
  if (f.partial) return f.partial(point, k);

  const Interval side = f.cube[k];
  const double at = point[k];
  const double h = difference_step(at);
  std::vector<double> probe(point.begin(), point.end());
  auto value_at = [&](double coordinate) {
    probe[k] = std::clamp(coordinate, side.lo, side.hi);
    return f.eval(probe);
  };

  if (at - h >= side.lo && at + h <= side.hi) {
    return (value_at(at + h) - value_at(at - h)) / (2.0 * h);
  }
  if (at + 2.0 * h <= side.hi) {
    return (-3.0 * value_at(at) + 4.0 * value_at(at + h) - value_at(at + 2.0 * h)) / (2.0 * h);
  }
  if (at - 2.0 * h >= side.lo) {
    return (3.0 * value_at(at) - 4.0 * value_at(at - h) + value_at(at - 2.0 * h)) / (2.0 * h);
  }
  // Interval narrower than two steps.
  const double lo = std::max(side.lo, at - h);
  const double hi = std::min(side.hi, at + h);
  if (hi <= lo) return 0.0;
  return (value_at(hi) - value_at(lo)) / (hi - lo);
}

ScalarFunction partial_function(const ScalarFunction& f, std::size_t k) {
  ScalarFunction out;
  out.name = f.name + "_d" + std::to_string(k + 1);
  out.cube = f.cube;
  out.eval = [f, k](Point p) { return partial_eval(f, k, p); };
  return out;
}

bool probe_midpoint_convexity(const ScalarFunction& f, std::uint64_t seed, int trials,
                              bool concave) {
  std::mt19937_64 engine(seed);
  const std::size_t n = f.arity();
  std::vector<double> p(n), q(n), mid(n);
  for (int trial = 0; trial < trials; ++trial) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> u(f.cube[i].lo, f.cube[i].hi);
      p[i] = f.cube[i].width() > 0 ? u(engine) : f.cube[i].lo;
      q[i] = f.cube[i].width() > 0 ? u(engine) : f.cube[i].lo;
      mid[i] = 0.5 * (p[i] + q[i]);
    }
    const double fp = f.eval(p);
    const double fq = f.eval(q);
    const double fm = f.eval(mid);
    const double slack = 1e-12 * (1.0 + std::abs(fp) + std::abs(fq));
    const double avg = 0.5 * (fp + fq);
    if (!concave && fm > avg + slack) return false;
    if (concave && fm < avg - slack) return false;
  }
  return true;
}

namespace {

double sum_of(Point p) {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

template <class Term, class Derivative>
ScalarFunction separable(std::string name, const Cube& cube, Term term, Derivative derivative) {
  ScalarFunction f;
  f.name = std::move(name);
  f.cube = cube;
  f.eval = [term](Point p) {
    double s = 0.0;
    for (double v : p) s += term(v);
    return s;
  };
  f.partial = [derivative](Point p, std::size_t k) { return derivative(p[k]); };
  return f;
}

void require_arity(const std::string& name, std::size_t arity, std::size_t expected) {
  if (arity != expected) {
    throw ConfigError("catalog function '" + name + "' has arity " + std::to_string(expected) +
                      ", requested " + std::to_string(arity));
  }
}

void require_lower_bound(const std::string& name, const Cube& cube, double bound, bool strict) {
  for (const auto& side : cube) {
    if (side.lo < bound || (strict && side.lo == bound)) {
      throw DomainError("catalog function '" + name + "' requires every cube side above " +
                        std::to_string(bound));
    }
  }
}

ScalarFunction product_function(std::string name, const Cube& cube) {
  ScalarFunction f;
  f.name = std::move(name);
  f.cube = cube;
  f.eval = [](Point p) {
    double r = 1.0;
    for (double v : p) r *= v;
    return r;
  };
  f.partial = [](Point p, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i != k) r *= p[i];
    }
    return r;
  };
  f.claimed_monotone_increasing =
      std::all_of(cube.begin(), cube.end(), [](const Interval& s) { return s.lo >= 0.0; });
  if (cube.size() == 1) f.claimed_convex = f.claimed_concave = true;
  return f;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"exp_sum", "exp(l1 + ... + ln)", true, false, true},
      {"square", "l1^2 + ... + ln^2", true, false, false},
      {"relu_sum", "max(l1,0) + ... + max(ln,0)", true, false, true},
      {"abs", "|l1| + ... + |ln|", true, false, false},
      {"quartic", "l1^4 + ... + ln^4", true, false, false},
      {"affine", "c.l + d, c_i in [0.1, 1], d in [-1, 1] (seeded)", true, true, true},
      {"neg_exp_sum", "-exp(-(l1 + ... + ln))", false, true, true},
      {"sqrt_sum", "sqrt(l1) + ... + sqrt(ln), cube in [0, inf)", false, true, true},
      {"log1p_sum", "log(1+l1) + ... + log(1+ln), cube in (-1, inf)", false, true, true},
      {"product", "l1 * ... * ln (increasing on the nonnegative orthant)", false, false, true},
      {"product2", "l1 * l2", false, false, true},
      {"product3", "l1 * l2 * l3", false, false, true},
      {"sin", "sin(l) on [-pi/2, pi/2]", false, false, true},
  };
  return entries;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog_entries()) names.push_back(e.name);
  return names;
}

ScalarFunction affine_function(std::vector<double> coefficients, double intercept, Cube cube) {
  if (coefficients.size() != cube.size()) {
    throw DimensionMismatch("affine function coefficients do not match the cube");
  }
  ScalarFunction f;
  f.name = "affine";
  f.cube = std::move(cube);
  f.claimed_convex = f.claimed_concave = true;
  f.claimed_monotone_increasing =
      std::all_of(coefficients.begin(), coefficients.end(), [](double c) { return c >= 0.0; });
  f.eval = [coefficients, intercept](Point p) {
    double s = intercept;
    for (std::size_t i = 0; i < p.size(); ++i) s += coefficients[i] * p[i];
    return s;
  };
  f.partial = [coefficients](Point, std::size_t k) { return coefficients[k]; };
  return f;
}

ScalarFunction catalog(const std::string& name, std::size_t arity, const Cube& cube,
                       std::uint64_t seed) {
  if (name == "sin") {
    require_arity(name, arity, 1);
    ScalarFunction f;
    f.name = name;
    f.cube = {{-std::numbers::pi / 2.0, std::numbers::pi / 2.0}};
    f.eval = [](Point p) { return std::sin(p[0]); };
    f.partial = [](Point p, std::size_t) { return std::cos(p[0]); };
    f.claimed_monotone_increasing = true;
    return f;
  }
  if (cube.size() != arity) {
    throw DimensionMismatch("catalog: cube has " + std::to_string(cube.size()) +
                            " sides, arity is " + std::to_string(arity));
  }
  if (arity == 0) throw ConfigError("catalog functions need at least one variable");

  if (name == "exp_sum") {
    ScalarFunction f;
    f.name = name;
    f.cube = cube;
    f.eval = [](Point p) { return std::exp(sum_of(p)); };
    f.partial = [](Point p, std::size_t) { return std::exp(sum_of(p)); };
    f.claimed_convex = f.claimed_monotone_increasing = true;
    return f;
  }
  if (name == "neg_exp_sum") {
    ScalarFunction f;
    f.name = name;
    f.cube = cube;
    f.eval = [](Point p) { return -std::exp(-sum_of(p)); };
    f.partial = [](Point p, std::size_t) { return std::exp(-sum_of(p)); };
    f.claimed_concave = f.claimed_monotone_increasing = true;
    return f;
  }
  if (name == "square") {
    auto f = separable(name, cube, [](double v) { return v * v; }, [](double v) { return 2.0 * v; });
    f.claimed_convex = true;
    return f;
  }
  if (name == "relu_sum") {
    auto f = separable(name, cube, [](double v) { return std::max(v, 0.0); },
                       [](double v) { return v > 0.0 ? 1.0 : 0.0; });
    f.claimed_convex = f.claimed_monotone_increasing = true;
    return f;
  }
  if (name == "abs") {
    auto f = separable(name, cube, [](double v) { return std::abs(v); },
                       [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
    f.claimed_convex = true;
    return f;
  }
  if (name == "quartic") {
    auto f = separable(name, cube, [](double v) { return v * v * v * v; },
                       [](double v) { return 4.0 * v * v * v; });
    f.claimed_convex = true;
    return f;
  }
  if (name == "sqrt_sum") {
    require_lower_bound(name, cube, 0.0, false);
    auto f = separable(name, cube, [](double v) { return std::sqrt(std::max(v, 0.0)); },
                       [](double v) { return 0.5 / std::sqrt(std::max(v, 1e-300)); });
    f.claimed_concave = f.claimed_monotone_increasing = true;
    return f;
  }
  if (name == "log1p_sum") {
    require_lower_bound(name, cube, -1.0, true);
    auto f = separable(name, cube, [](double v) { return std::log1p(v); },
                       [](double v) { return 1.0 / (1.0 + v); });
    f.claimed_concave = f.claimed_monotone_increasing = true;
    return f;
  }
  if (name == "affine") {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> coef(0.1, 1.0);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    std::vector<double> c(arity);
    for (auto& v : c) v = coef(engine);
    const double d = shift(engine);
    return affine_function(std::move(c), d, cube);
  }
  if (name == "product") return product_function(name, cube);
  if (name == "product2") {
    require_arity(name, arity, 2);
    return product_function(name, cube);
  }
  if (name == "product3") {
    require_arity(name, arity, 3);
    return product_function(name, cube);
  }
  throw ConfigError("unknown catalog function '" + name + "'");
}

}  // namespace jtrace
