#include "opmeans/scalar_funcs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opmeans/errors.hpp"
#include "opmeans/format.hpp"
#include "opmeans/random.hpp"

namespace opmeans {

using nlohmann::json;

namespace {

void require_positive(double t, const char* what) {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << what << ": argument " << t << " is not positive";
    throw DomainError(msg.str());
  }
}

}  // namespace

RepFn RepFn::arithmetic() { return RepFn(Kind::Arithmetic, 1.0); }
RepFn RepFn::harmonic() { return RepFn(Kind::Harmonic, -1.0); }
RepFn RepFn::geometric() { return RepFn(Kind::Geometric, 0.0); }

RepFn RepFn::power(double p) {
  if (p == 0.0 || !std::isfinite(p))
    throw InvalidArgument("power mean exponent must be finite and non-zero");
  return RepFn(Kind::Power, p);
}

RepFn RepFn::monomial(double q) {
  if (!std::isfinite(q)) throw InvalidArgument("monomial exponent must be finite");
  return RepFn(Kind::Monomial, q);
}

RepFn RepFn::tabulated(std::vector<double> t, std::vector<double> f) {
  const std::size_t n = t.size();
  if (n < 2 || f.size() != n) throw InvalidArgument("tabulation needs >= 2 matching points");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(t[k] > 0.0) || !(f[k] > 0.0)) throw InvalidArgument("tabulation must be positive");
    if (k > 0 && !(t[k] > t[k - 1])) throw InvalidArgument("tabulation grid must ascend");
  }
  // Fritsch-Carlson slopes.
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (f[k + 1] - f[k]) / (t[k + 1] - t[k]);
  std::vector<double> m(n);
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k)
    m[k] = delta[k - 1] * delta[k] > 0.0 ? 0.5 * (delta[k - 1] + delta[k]) : 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (delta[k] == 0.0) {
      m[k] = m[k + 1] = 0.0;
      continue;
    }
    const double alpha = m[k] / delta[k];
    const double beta = m[k + 1] / delta[k];
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      m[k] = tau * alpha * delta[k];
      m[k + 1] = tau * beta * delta[k];
    }
  }
  RepFn fn(Kind::Tabulated, 0.0);
  fn.table_ = std::make_shared<const Table>(Table{std::move(t), std::move(f), std::move(m)});
  double one = 0.0;
  try {
    one = fn(1.0);
  } catch (const DomainError&) {
    throw InvalidArgument("tabulation must cover t = 1");
  }
  if (std::abs(one - 1.0) > 1e-12) throw InvalidArgument("tabulated function must satisfy f(1) = 1");
  return fn;
}

RepFn RepFn::parse(std::string_view spec) {
  if (spec.starts_with("{")) {
    const json j = json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw InvalidArgument("malformed representing function JSON");
    return from_json(j);
  }
  if (spec == "arith") return arithmetic();
  if (spec == "harm") return harmonic();
  if (spec == "geom") return geometric();
  if (spec.starts_with("power:")) return power(parse_double(spec.substr(6)));
  if (spec.starts_with("mono:")) return monomial(parse_double(spec.substr(5)));
  throw InvalidArgument("unknown representing function '" + std::string(spec) + "'");
}

double RepFn::operator()(double t) const {
  require_positive(t, "representing function");
  switch (kind_) {
    case Kind::Arithmetic:
      return 0.5 * (1.0 + t);
    case Kind::Harmonic:
      return 2.0 * t / (1.0 + t);
    case Kind::Geometric:
      return std::sqrt(t);
    case Kind::Power:
      return std::pow(0.5 * (1.0 + std::pow(t, p_)), 1.0 / p_);
    case Kind::Monomial:
      return std::pow(t, p_);
    case Kind::Tabulated: {
      const Table& tb = *table_;
      if (t < tb.t.front() || t > tb.t.back()) {
        std::ostringstream msg;
        msg << "tabulated function: " << t << " outside [" << tb.t.front() << ", " << tb.t.back()
            << "]";
        throw DomainError(msg.str());
      }
      const auto it = std::upper_bound(tb.t.begin(), tb.t.end(), t);
      std::size_t k = static_cast<std::size_t>(it - tb.t.begin());
      k = std::clamp<std::size_t>(k, 1, tb.t.size() - 1) - 1;
      const double h = tb.t[k + 1] - tb.t[k];
      const double s = (t - tb.t[k]) / h;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
      const double h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s);
      const double h11 = s * s * (s - 1);
      return h00 * tb.f[k] + h10 * h * tb.slope[k] + h01 * tb.f[k + 1] + h11 * h * tb.slope[k + 1];
    }
    case Kind::Transpose:
      return t * (*inner_)(1.0 / t);
    case Kind::Adjoint:
      return 1.0 / (*inner_)(1.0 / t);
  }
  return 0.0;
}

double RepFn::derivative(double t) const {
  require_positive(t, "representing function derivative");
  switch (kind_) {
    case Kind::Arithmetic:
      return 0.5;
    case Kind::Harmonic:
      return 2.0 / ((1.0 + t) * (1.0 + t));
    case Kind::Geometric:
      return 0.5 / std::sqrt(t);
    case Kind::Power:
      return std::pow(0.5 * (1.0 + std::pow(t, p_)), 1.0 / p_ - 1.0) * 0.5 * std::pow(t, p_ - 1.0);
    case Kind::Monomial:
      return p_ * std::pow(t, p_ - 1.0);
    case Kind::Tabulated: {
      const Table& tb = *table_;
      const double h = 1e-6 * t;
      const double lo = std::max(t - h, tb.t.front());
      const double hi = std::min(t + h, tb.t.back());
      return ((*this)(hi) - (*this)(lo)) / (hi - lo);
    }
    case Kind::Transpose: {
      const double u = 1.0 / t;
      return (*inner_)(u) - inner_->derivative(u) * u;
    }
    case Kind::Adjoint: {
      const double u = 1.0 / t;
      const double fu = (*inner_)(u);
      return inner_->derivative(u) * u * u / (fu * fu);
    }
  }
  return 0.0;
}

std::string RepFn::label() const {
  switch (kind_) {
    case Kind::Arithmetic:
      return "arith";
    case Kind::Harmonic:
      return "harm";
    case Kind::Geometric:
      return "geom";
    case Kind::Power:
      return "power:" + format_double(p_);
    case Kind::Monomial:
      return "mono:" + format_double(p_);
    case Kind::Tabulated:
      return "tab";
    case Kind::Transpose:
      return "transpose(" + inner_->label() + ")";
    case Kind::Adjoint:
      return "adjoint(" + inner_->label() + ")";
  }
  return "";
}

json RepFn::to_json() const {
  switch (kind_) {
    case Kind::Arithmetic:
      return {{"kind", "arith"}};
    case Kind::Harmonic:
      return {{"kind", "harm"}};
    case Kind::Geometric:
      return {{"kind", "geom"}};
    case Kind::Power:
      return {{"kind", "power"}, {"p", p_}};
    case Kind::Monomial:
      return {{"kind", "mono"}, {"q", p_}};
    case Kind::Tabulated:
      return {{"kind", "tab"}, {"t", table_->t}, {"f", table_->f}};
    case Kind::Transpose:
      return {{"kind", "transpose"}, {"of", inner_->to_json()}};
    case Kind::Adjoint:
      return {{"kind", "adjoint"}, {"of", inner_->to_json()}};
  }
  return {};
}

RepFn RepFn::from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "arith") return arithmetic();
    if (kind == "harm") return harmonic();
    if (kind == "geom") return geometric();
    if (kind == "power") return power(j.at("p").get<double>());
    if (kind == "mono") return monomial(j.at("q").get<double>());
    if (kind == "tab")
      return tabulated(j.at("t").get<std::vector<double>>(), j.at("f").get<std::vector<double>>());
    if (kind == "transpose") return transpose_repfn(from_json(j.at("of")));
    if (kind == "adjoint") return adjoint_repfn(from_json(j.at("of")));
    throw FormatError("unknown representing function kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("representing function: ") + e.what());
  }
}

double eval_repfn(const RepFn& f, double t) { return f(t); }

std::string spec_string(const RepFn& f) {
  std::string s = f.label();
  try {
    RepFn::parse(s);
    return s;
  } catch (const Error&) {
    return f.to_json().dump();
  }
}

RepFn transpose_repfn(const RepFn& f) {
  RepFn r(RepFn::Kind::Transpose, 0.0);
  r.inner_ = std::make_shared<const RepFn>(f);
  return r;
}

RepFn adjoint_repfn(const RepFn& f) {
  RepFn r(RepFn::Kind::Adjoint, 0.0);
  r.inner_ = std::make_shared<const RepFn>(f);
  return r;
}

double limit_at_zero(const RepFn& f) {
  const double f1 = f(1e-14);
  const double f2 = f(1e-13);
  const double f3 = f(1e-12);
  const double d1 = f2 - f1;
  const double d2 = f3 - f2;
  double limit = f1;
  if (std::abs(d1) > 1e-15 * (1.0 + std::abs(f1))) {
    const double ratio = d2 / d1;
    if (!std::isfinite(ratio) || !(ratio > 1.0 + 1e-3))
      throw DomainError("representing function " + f.label() + " has no finite limit at 0");
    limit = f1 - d1 / (ratio - 1.0);
  }
  if (!std::isfinite(limit))
    throw DomainError("representing function " + f.label() + " has no finite limit at 0");
  return std::abs(limit) <= 1e-12 ? 0.0 : limit;
}

double invert_repfn(const RepFn& f, double y) {
  auto eval = [&](double t) {
    try {
      return f(t);
    } catch (const DomainError& e) {
      throw InverseDomainError(std::string("inverse of ") + f.label() + ": " + e.what());
    }
  };
  if (!(eval(2.0) > eval(0.5)))
    throw InverseDomainError("inverse of " + f.label() + ": function is not increasing");
  const auto out_of_range = [&] {
    std::ostringstream msg;
    msg << "inverse of " << f.label() << ": " << y << " is outside the range";
    return InverseDomainError(msg.str());
  };
  double lo = 1.0, hi = 1.0;
  while (eval(hi) < y) {
    hi *= 2.0;
    if (hi > 1e300 || !std::isfinite(eval(hi))) throw out_of_range();
  }
  while (eval(lo) > y) {
    lo *= 0.5;
    if (lo < 1e-300) throw out_of_range();
  }
  for (int it = 0; it < 200 && hi > lo * (1.0 + 4e-16); ++it) {
    const double mid = std::sqrt(lo * hi);
    if (eval(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double e = n == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * static_cast<double>(k) / (n - 1);
    g[k] = std::pow(10.0, e);
  }
  return g;
}

std::vector<double> standard_grid() { return logspace(-3.0, 3.0, 200); }

bool check_symmetry(const RepFn& f, const std::vector<double>& grid, double tol) {
  for (double t : grid) {
    const double ft = f(t);
    if (std::abs(t * f(1.0 / t) - ft) > tol * (1.0 + std::abs(ft))) return false;
  }
  return true;
}

bool check_self_adjoint(const RepFn& f, const std::vector<double>& grid, double tol) {
  for (double t : grid) {
    const double ft = f(t);
    if (std::abs(1.0 / f(1.0 / t) - ft) > tol * (1.0 + std::abs(ft))) return false;
  }
  return true;
}

bool geom_uniqueness_check(const RepFn& f, const std::vector<double>& grid, double tol) {
  if (!check_symmetry(f, grid, tol) || !check_self_adjoint(f, grid, tol)) return false;
  for (double t : grid) {
    const double ft = f(t);
    if (std::abs(ft * ft - t) > tol * (1.0 + t)) return false;
  }
  return true;
}

HermitianMatrix loewner_matrix(const RepFn& f, const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) fv[i] = f(grid[i]);
  HermitianMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    l.set(i, i, f.derivative(grid[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dt = grid[i] - grid[j];
      if (dt == 0.0) throw DomainError("Loewner matrix: coincident grid points");
      l.set(i, j, (fv[i] - fv[j]) / dt);
    }
  }
  return l;
}

bool loewner_certify_monotone(const RepFn& f, const std::vector<double>& grid, double tol) {
  if (grid.size() < 8) throw InvalidArgument("Loewner screen needs at least 8 grid points");
  const HermitianMatrix l = loewner_matrix(f, grid);
  return min_eigenvalue(l) >= -tol * (1.0 + l.frobenius());
}

std::vector<FunceqRow> funceq_scan(const RepFn& f, const std::vector<double>& c_grid,
                                   const std::vector<double>& t_grid, double tol) {
  std::vector<FunceqRow> rows;
  rows.reserve(c_grid.size());
  for (double c : c_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
      const double ft = f(t);
      worst = std::max(worst, std::abs(f(c * c * t) - c * ft) / (1.0 + std::abs(ft)));
    }
    rows.push_back({c, worst, worst <= tol});
  }
  return rows;
}

// ---------------------------------------------------------------------------

ScalarMap ScalarMap::power_affine(double a, double p, double b) {
  if (a == 0.0 || p == 0.0) throw InvalidArgument("power-affine map needs a != 0 and p != 0");
  ScalarMap m(Kind::PowerAffine);
  m.a_ = a;
  m.p_ = p;
  m.b_ = b;
  return m;
}

ScalarMap ScalarMap::log_affine(double a, double b) {
  if (a == 0.0) throw InvalidArgument("log-affine map needs a != 0");
  ScalarMap m(Kind::LogAffine);
  m.a_ = a;
  m.b_ = b;
  return m;
}

ScalarMap ScalarMap::exp() { return ScalarMap(Kind::Exp); }
ScalarMap ScalarMap::reciprocal() { return ScalarMap(Kind::Reciprocal); }
ScalarMap ScalarMap::identity() { return ScalarMap(Kind::Identity); }

ScalarMap ScalarMap::rep_inverse(const RepFn& f) {
  ScalarMap m(Kind::RepInverse);
  m.rep_ = std::make_shared<const RepFn>(f);
  return m;
}

ScalarMap ScalarMap::composite(std::vector<ScalarMap> stages) {
  if (stages.empty()) throw InvalidArgument("composite map needs at least one stage");
  if (stages.size() == 1) return stages.front();
  ScalarMap m(Kind::Composite);
  m.stages_ = std::move(stages);
  return m;
}

namespace {

std::vector<double> parse_numbers(std::string_view s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

[[noreturn]] void domain_fail(const std::string& what, double t) {
  std::ostringstream msg;
  msg << what << ": " << t << " is outside the domain";
  throw DomainError(msg.str());
}

[[noreturn]] void range_fail(const std::string& what, double y) {
  std::ostringstream msg;
  msg << "inverse of " << what << ": " << y << " is outside the range";
  throw InverseDomainError(msg.str());
}

}  // namespace

ScalarMap ScalarMap::parse(std::string_view spec) {
  if (spec.starts_with("{")) {
    const json j = json::parse(spec, nullptr, false);
    if (j.is_discarded()) throw InvalidArgument("malformed scalar map JSON");
    return from_json(j);
  }
  if (spec == "id") return identity();
  if (spec == "exp") return exp();
  if (spec == "log") return log_affine(1.0, 0.0);
  if (spec == "recip") return reciprocal();
  if (spec == "square") return power_affine(1.0, 2.0, 0.0);
  if (spec.starts_with("scale:")) return scale(parse_double(spec.substr(6)));
  if (spec.starts_with("pow:")) {
    const auto v = parse_numbers(spec.substr(4));
    if (v.size() == 1) return power_affine(1.0, v[0], 0.0);
    if (v.size() == 3) return power_affine(v[0], v[1], v[2]);
    throw InvalidArgument("pow: expects P or A,P,B");
  }
  if (spec.starts_with("log:")) {
    const auto v = parse_numbers(spec.substr(4));
    if (v.size() != 2) throw InvalidArgument("log: expects A,B");
    return log_affine(v[0], v[1]);
  }
  if (spec.starts_with("inv:")) return rep_inverse(RepFn::parse(spec.substr(4)));
  if (spec.starts_with("cmp:")) {
    std::vector<ScalarMap> stages;
    for (const std::string& part : split(spec.substr(4), ';')) stages.push_back(parse(part));
    return composite(std::move(stages));
  }
  throw InvalidArgument("unknown scalar map '" + std::string(spec) + "'");
}

double ScalarMap::operator()(double t) const {
  switch (kind_) {
    case Kind::PowerAffine:
      if (!(t > 0.0)) domain_fail(label(), t);
      return a_ * std::pow(t, p_) + b_;
    case Kind::LogAffine:
      if (!(t > 0.0)) domain_fail(label(), t);
      return a_ * std::log(t) + b_;
    case Kind::Exp: {
      const double v = std::exp(t);
      if (!std::isfinite(v) || v == 0.0) domain_fail(label(), t);
      return v;
    }
    case Kind::Reciprocal:
      if (!(t > 0.0)) domain_fail(label(), t);
      return 1.0 / t;
    case Kind::Identity:
      return t;
    case Kind::RepInverse:
      try {
        return invert_repfn(*rep_, t);
      } catch (const InverseDomainError&) {
        domain_fail(label(), t);
      }
    case Kind::Composite: {
      double v = t;
      for (const ScalarMap& s : stages_) v = s(v);
      return v;
    }
  }
  return 0.0;
}

double ScalarMap::inverse(double y) const {
  switch (kind_) {
    case Kind::PowerAffine: {
      const double base = (y - b_) / a_;
      if (!(base > 0.0)) range_fail(label(), y);
      return std::pow(base, 1.0 / p_);
    }
    case Kind::LogAffine:
      return std::exp((y - b_) / a_);
    case Kind::Exp:
      if (!(y > 0.0)) range_fail(label(), y);
      return std::log(y);
    case Kind::Reciprocal:
      if (!(y > 0.0)) range_fail(label(), y);
      return 1.0 / y;
    case Kind::Identity:
      return y;
    case Kind::RepInverse:
      if (!(y > 0.0)) range_fail(label(), y);
      return (*rep_)(y);
    case Kind::Composite: {
      double v = y;
      for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) v = it->inverse(v);
      return v;
    }
  }
  return 0.0;
}

bool ScalarMap::increasing() const {
  switch (kind_) {
    case Kind::PowerAffine:
      return a_ * p_ > 0.0;
    case Kind::LogAffine:
      return a_ > 0.0;
    case Kind::Reciprocal:
      return false;
    case Kind::Composite: {
      bool inc = true;
      for (const ScalarMap& s : stages_) inc = inc == s.increasing();
      return inc;
    }
    default:
      return true;
  }
}

Interval ScalarMap::domain() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::Exp:
    case Kind::Identity:
      return {-inf, inf};
    case Kind::RepInverse: {
      double lo = 0.0;
      try {
        lo = limit_at_zero(*rep_);
      } catch (const DomainError&) {
      }
      return {lo, inf};
    }
    case Kind::Composite:
      return stages_.front().domain();
    default:
      return {0.0, inf};
  }
}

Interval ScalarMap::range() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::PowerAffine:
      return a_ > 0.0 ? Interval{b_, inf} : Interval{-inf, b_};
    case Kind::LogAffine:
    case Kind::Identity:
      return {-inf, inf};
    case Kind::Exp:
    case Kind::Reciprocal:
    case Kind::RepInverse:
      return {0.0, inf};
    case Kind::Composite:
      return stages_.back().range();
  }
  return {};
}

bool ScalarMap::onto_reals() const {
  const Interval r = range();
  return std::isinf(r.lo) && std::isinf(r.hi);
}

std::string ScalarMap::label() const {
  switch (kind_) {
    case Kind::PowerAffine:
      return "pow:" + format_double(a_) + "," + format_double(p_) + "," + format_double(b_);
    case Kind::LogAffine:
      return "log:" + format_double(a_) + "," + format_double(b_);
    case Kind::Exp:
      return "exp";
    case Kind::Reciprocal:
      return "recip";
    case Kind::Identity:
      return "id";
    case Kind::RepInverse:
      return "inv:" + rep_->label();
    case Kind::Composite: {
      std::string s = "cmp:";
      for (std::size_t k = 0; k < stages_.size(); ++k) s += (k ? ";" : "") + stages_[k].label();
      return s;
    }
  }
  return "";
}

json ScalarMap::to_json() const {
  switch (kind_) {
    case Kind::PowerAffine:
      return {{"kind", "power_affine"}, {"a", a_}, {"p", p_}, {"b", b_}};
    case Kind::LogAffine:
      return {{"kind", "log_affine"}, {"a", a_}, {"b", b_}};
    case Kind::Exp:
      return {{"kind", "exp"}};
    case Kind::Reciprocal:
      return {{"kind", "reciprocal"}};
    case Kind::Identity:
      return {{"kind", "identity"}};
    case Kind::RepInverse:
      return {{"kind", "rep_inverse"}, {"of", rep_->to_json()}};
    case Kind::Composite: {
      json stages = json::array();
      for (const ScalarMap& s : stages_) stages.push_back(s.to_json());
      return {{"kind", "composite"}, {"stages", stages}};
    }
  }
  return {};
}

ScalarMap ScalarMap::from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power_affine")
      return power_affine(j.at("a").get<double>(), j.at("p").get<double>(), j.at("b").get<double>());
    if (kind == "log_affine") return log_affine(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "exp") return exp();
    if (kind == "reciprocal") return reciprocal();
    if (kind == "identity") return identity();
    if (kind == "rep_inverse") return rep_inverse(RepFn::from_json(j.at("of")));
    if (kind == "composite") {
      std::vector<ScalarMap> stages;
      for (const json& s : j.at("stages")) stages.push_back(from_json(s));
      return composite(std::move(stages));
    }
    throw FormatError("unknown scalar map kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("scalar map: ") + e.what());
  }
}

HermitianMatrix apply_map(const HermitianMatrix& h, const ScalarMap& phi) {
  return apply_fn(h, [&](double t) { return phi(t); });
}

HermitianMatrix apply_map_inverse(const HermitianMatrix& h, const ScalarMap& phi) {
  return apply_fn(h, [&](double y) { return phi.inverse(y); });
}

bool qa_homogeneity_check(const ScalarMap& phi, std::size_t trials, double tol, std::uint64_t seed) {
  Rng rng(seed);
  const auto mean = [&](double t, double s) { return phi.inverse(0.5 * (phi(t) + phi(s))); };
  for (std::size_t k = 0; k < trials; ++k) {
    const double l = log_uniform(rng, 0.1, 10.0);
    const double t = log_uniform(rng, 0.1, 10.0);
    const double s = log_uniform(rng, 0.1, 10.0);
    const double scaled = mean(l * t, l * s);
    const double ref = l * mean(t, s);
    if (std::abs(scaled - ref) > tol * (1.0 + std::abs(ref))) return false;
  }
  return true;
}

std::string spec_string(const ScalarMap& phi) {
  std::string s = phi.label();
  try {
    ScalarMap::parse(s);
    return s;
  } catch (const Error&) {
    return phi.to_json().dump();
  }
}

}  // namespace opmeans
