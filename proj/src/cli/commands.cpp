#include "topo/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "topo/greens/greens.hpp"
#include "topo/invariants/invariants.hpp"
#include "topo/krein/krein.hpp"
#include "topo/model/builtin.hpp"
#include "topo/model/io.hpp"
#include "topo/scattering/scattering.hpp"

namespace topo::cli {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::kI;

int parse_grid(const std::string& text) {
  int value = 0;
  for (double x : parse_list(text)) {
    if (x != std::floor(x) || x < 2) {
      throw Error(ErrorCode::InvalidArgument, "grid sizes must be integers >= 2");
    }
    if (value != 0 && int(x) != value) {
      throw Error(ErrorCode::InvalidArgument, "grids are uniform: all axes need the same size");
    }
    value = int(x);
  }
  if (value == 0) throw Error(ErrorCode::InvalidArgument, "empty grid specification");
  return value;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::InvalidArgument, "'" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return kUsage;
    case ErrorCode::InvalidModel:
    case ErrorCode::ParseError:
    case ErrorCode::GapViolated:
    case ErrorCode::InvalidGap:
    case ErrorCode::NoSpectralSplit:
    case ErrorCode::NotPerfectlyConducting:
    case ErrorCode::ResolventSingular:
      return kModelOrGap;
    default:
      return kConvergence;
  }
}

namespace {

// CSV table with a '#' metadata block in front.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  Table& row() {
    rows_.emplace_back();
    return *this;
  }
  Table& operator<<(const std::string& s) {
    rows_.back().push_back(s);
    return *this;
  }
  Table& operator<<(const char* s) { return *this << std::string(s); }
  Table& operator<<(double x) {
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return *this << os.str();
  }
  Table& operator<<(long x) { return *this << std::to_string(x); }
  Table& operator<<(int x) { return *this << std::to_string(x); }
  Table& operator<<(bool b) { return *this << (b ? "pass" : "fail"); }

  void write(std::ostream& os, const std::vector<std::string>& meta) const {
    for (const auto& m : meta) os << "# " << m << '\n';
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

// Zero means "chosen at run time" for these options.
std::string num_or_auto(double x) { return x == 0.0 ? "auto" : num(x); }

std::vector<std::string> metadata(const RunConfig& c) {
  std::string vals;
  for (std::size_t i = 0; i < c.values.size(); ++i) vals += (i ? ";" : "") + num(c.values[i]);
  return {"topo " + c.command + (c.which.empty() ? "" : " " + c.which),
          "model=" + c.model + (c.wire.empty() ? "" : " wire=" + c.wire),
          "mu=" + num(c.mu) + " delta=" + num_or_auto(c.delta) + " epsilon=" + num(c.epsilon),
          "grid=" + num_or_auto(c.grid) + " bulk_grid=" + num_or_auto(c.bulk_grid) +
              " depth=" + num_or_auto(c.depth) + " strip=" + std::to_string(c.strip),
          "route=" + c.route + " seed=" + std::to_string(c.seed) +
              " samples=" + std::to_string(c.samples),
          "vary=" + c.vary + " values=" + vals};
}

invariants::BoundaryOptions boundary_options(const RunConfig& c) {
  invariants::BoundaryOptions o;
  o.strip = c.strip;
  o.epsilon = c.epsilon;
  o.jobs = c.jobs;
  if (c.route == "truncated") {
    o.green.route = greens::GreenRoute::truncated_resolvent;
    o.green.depth = c.depth;
  } else if (c.route != "transfer") {
    throw Error(ErrorCode::InvalidArgument, "route must be 'transfer' or 'truncated'");
  }
  return o;
}

invariants::TheoremConfig theorem_config(const RunConfig& c) {
  invariants::TheoremConfig t;
  t.mu = c.mu;
  t.delta = c.delta;
  t.bulk_points = c.bulk_grid;
  t.boundary_points = c.grid;
  t.boundary = boundary_options(c);
  return t;
}

model::ScatteringSystem scattering_system(const RunConfig& c) {
  const auto any = model::resolve_model(c.model);
  if (const auto* s = std::get_if<model::ScatteringSystem>(&any)) return *s;
  const auto ins = model::require_insulator(any);
  const auto wire = c.wire.empty()
                        ? model::wire_chain(ins.fiber_dim)
                        : model::require_wire(model::resolve_model(c.wire));
  model::ScatteringSystem sys{wire, ins};
  sys.validate();
  return sys;
}

void result_row(Table& t, const std::string& name, const invariants::InvariantResult& r, bool ok) {
  t.row() << name << r.value << r.rounded << r.distance_to_integer << ok;
}

int cmd_chern_bulk(const RunConfig& c, Table& t) {
  const auto m = model::require_insulator(model::resolve_model(c.model));
  const int points = c.grid > 0 ? c.grid : invariants::default_bulk_points(m.dimension);
  const auto r = invariants::bulk_chern(m, c.mu, points, c.jobs);
  t.row() << points << r.value << r.rounded << r.distance_to_integer;
  return r.converged() ? kOk : kConvergence;
}

int cmd_theorem1(const RunConfig& c, Table& t) {
  const auto m = model::require_insulator(model::resolve_model(c.model));
  const auto r = invariants::verify_theorem1(m, theorem_config(c));
  result_row(t, "ch_bulk", r.bulk, r.bulk.converged());
  result_row(t, "ch_boundary_V", r.boundary, r.boundary.converged());
  t.row() << "bulk_equals_minus_boundary" << double(r.bulk.rounded + r.boundary.rounded) << 0L
          << 0.0 << r.pass;
  return r.pass ? kOk : kConvergence;
}

int cmd_theorem2(const RunConfig& c, Table& t) {
  const auto sys = scattering_system(c);
  const auto r = scattering::verify_theorem2(sys, theorem_config(c));
  result_row(t, "ch_R", r.reflection, r.reflection.converged());
  result_row(t, "ch_V", r.boundary, r.boundary.converged());
  result_row(t, "ch_bulk", r.bulk, r.bulk.converged());
  t.row() << "R_equals_V_equals_minus_bulk"
          << double(r.reflection.rounded - r.boundary.rounded) << 0L << 0.0 << r.pass;
  return r.pass ? kOk : kConvergence;
}

int cmd_bbc(const RunConfig& c, Table& t) {
  const auto m = model::require_insulator(model::resolve_model(c.model));
  const int d = m.dimension;
  const auto gap = greens::bulk_gap(m, c.mu);
  const double delta = c.delta > 0 ? c.delta : 1e-2 * gap.width();
  const int layers = c.depth > 0 ? c.depth : 30;
  const int points = c.grid > 0 ? c.grid : invariants::default_boundary_points(d);
  const int bulk_points = c.bulk_grid > 0 ? c.bulk_grid : invariants::default_bulk_points(d);
  const auto bulk = invariants::bulk_chern(m, c.mu, bulk_points, c.jobs);
  const model::MomentumGrid grid(d - 1, points, 0.5);
  const auto u = invariants::odd_winding(
      invariants::exp_map_field(m, grid, layers, gap.shrunk(0.05), c.mu, c.jobs));
  const auto v = invariants::odd_winding(
      invariants::boundary_unitary_field(m, {c.mu, delta}, grid, boundary_options(c)));
  result_row(t, "ch_bulk", bulk, bulk.converged());
  result_row(t, "ch_boundary_U", u, u.converged());
  result_row(t, "ch_boundary_V", v, v.converged());
  const bool ok1 = bulk.converged() && u.converged() && u.rounded == bulk.rounded;
  const bool ok2 = v.converged() && u.rounded == -v.rounded;
  t.row() << "U_equals_bulk" << double(u.rounded - bulk.rounded) << 0L << 0.0 << ok1;
  t.row() << "U_equals_minus_V" << double(u.rounded + v.rounded) << 0L << 0.0 << ok2;
  return ok1 && ok2 ? kOk : kConvergence;
}

// Randomized property suites; every draw comes from one seeded engine.
class Properties {
 public:
  Properties(std::uint64_t seed, int samples) : rng_(seed), samples_(samples) {}

  int run(Table& t) {
    bool all = true;
    auto report = [&](const std::string& name, double measured, double threshold) {
      const bool ok = measured <= threshold;
      all = all && ok;
      t.row() << name << samples_ << measured << threshold << ok;
    };
    report("solve_recovery", solve_recovery(), 1e-10);
    report("eigen_residual", eigen_residual(), 1e-8);
    report("cayley_contraction", cayley_contraction(), 1e-12);
    report("cayley_round_trip", cayley_round_trip(), 1e-10);
    report("mobius_composition", mobius_composition(), 1e-10);
    report("g_unitarity", g_unitarity(), 1e-10);
    report("eigenvalue_pairing", eigenvalue_pairing(), 1e-8);
    report("frame_angles_unitarity", frame_angles_unitarity(), 1e-10);
    report("eigenphase_sign_law", eigenphase_sign_law(), 0.0);
    report("boundary_unitary_contraction", boundary_contraction(), 1e-12);
    return all ? kOk : kConvergence;
  }

 private:
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int dim(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  ComplexMatrix random(int r, int c) {
    ComplexMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
    return m;
  }
  ComplexMatrix hermitian(int n) {
    const ComplexMatrix x = random(n, n);
    return (x + x.adjoint()) / 2.0;
  }
  // Cayley image of the Lie algebra {i G H}: a G-unitary matrix.
  ComplexMatrix g_unitary(int l) {
    const ComplexMatrix x = kI * krein::krein_form(l) * hermitian(2 * l) * 0.5;
    const ComplexMatrix id = ComplexMatrix::Identity(2 * l, 2 * l);
    return numerics::solve(id - x / 2.0, id + x / 2.0);
  }

  double solve_recovery() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const int n = dim(1, 20);
      const ComplexMatrix a = random(n, n) + double(n) * ComplexMatrix::Identity(n, n);
      const ComplexMatrix x0 = random(n, 3);
      const ComplexMatrix x = numerics::solve(a, a * x0);
      worst = std::max(worst, (x - x0).norm() / x0.norm());
    }
    return worst;
  }
  double eigen_residual() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const int n = dim(1, 20);
      const ComplexMatrix a = random(n, n);
      const auto ed = numerics::eigen(a);
      const double norm = numerics::spectral_norm(a);
      for (int j = 0; j < n; ++j) {
        const auto v = ed.eigenvectors.col(j);
        worst = std::max(worst, (a * v - ed.eigenvalues[j] * v).norm() / norm);
      }
    }
    return worst;
  }
  ComplexMatrix upper_half_plane(int l) {
    const ComplexMatrix y = random(l, l);
    return hermitian(l) + kI * (y * y.adjoint() + 1e-3 * ComplexMatrix::Identity(l, l));
  }
  double cayley_contraction() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const auto v = greens::cayley(upper_half_plane(dim(1, 8)));
      worst = std::max(worst, numerics::spectral_norm(v) - 1.0);
    }
    return worst;
  }
  double cayley_round_trip() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const auto g = upper_half_plane(dim(1, 8));
      const auto back = greens::cayley_inverse(greens::cayley(g));
      worst = std::max(worst, (back - g).norm() / g.norm());
    }
    return worst;
  }
  double mobius_composition() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const int l = dim(1, 4);
      const auto m1 = g_unitary(l), m2 = g_unitary(l);
      const auto z = random(l, l);
      const auto lhs = krein::mobius(m1 * m2, z);
      const auto rhs = krein::mobius(m1, krein::mobius(m2, z));
      worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    }
    return worst;
  }
  krein::TransferMatrix random_transfer() {
    const int l = dim(1, 4);
    const ComplexMatrix a = random(l, l) + 2.0 * ComplexMatrix::Identity(l, l);
    return krein::transfer_matrix(a, hermitian(l), uniform(-3, 3));
  }
  double g_unitarity() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const auto t = random_transfer();
      const auto g = krein::krein_form(int(t.matrix.rows() / 2));
      const double n = numerics::spectral_norm(t.matrix);
      worst = std::max(worst, (t.matrix.adjoint() * g * t.matrix - g).norm() / (n * n));
    }
    return worst;
  }
  double eigenvalue_pairing() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const auto t = random_transfer();
      const auto ev = Eigen::ComplexEigenSolver<ComplexMatrix>(t.matrix, false).eigenvalues();
      for (const auto& x : ev) {
        double best = HUGE_VAL;
        for (const auto& y : ev) best = std::min(best, std::abs(x - 1.0 / std::conj(y)));
        worst = std::max(worst, best / std::max(1.0, std::abs(x)));
      }
    }
    return worst;
  }
  double frame_angles_unitarity() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const int l = dim(1, 4);
      const auto ch = scattering::wire_channels(model::wire_chain(l), uniform(-1.5, 1.5));
      ComplexMatrix base = ComplexMatrix::Zero(2 * l, l);
      base.topRows(l).setIdentity();
      const ComplexMatrix phi = g_unitary(l) * base;
      worst = std::max(worst, numerics::unitarity_residual(krein::frame_angles(phi, ch.normal_form)));
    }
    return worst;
  }
  double eigenphase_sign_law() {
    double violations = 0;
    for (int s = 0; s < samples_; ++s) {
      const int l = dim(1, 3);
      model::WireModel w = model::wire_chain(l);
      for (int j = 0; j < l; ++j) w.onsite(j, j) = uniform(-0.3, 0.3);
      const auto ch = scattering::wire_channels(w, uniform(-1.5, 1.5));
      for (int v : ch.velocity_plus) violations += v != 1;
      for (int v : ch.velocity_minus) violations += v != -1;
    }
    return violations;
  }
  double boundary_contraction() {
    double worst = 0;
    for (int s = 0; s < samples_; ++s) {
      const auto m = dim(0, 1) ? model::qwz(uniform(-3, 3)) : model::trivial(2, uniform(0.5, 2));
      const Complex z(uniform(-1, 1), uniform(0.01, 1));
      const double k = uniform(0, 2 * std::numbers::pi);
      const auto v = greens::boundary_unitary(m, z, std::span<const double>(&k, 1));
      worst = std::max(worst, numerics::spectral_norm(v) - 1.0);
    }
    return worst;
  }

  std::mt19937_64 rng_;
  int samples_;
};

struct SweepRow {
  double parameter;
  std::function<invariants::InvariantResult()> compute;
};

int cmd_sweep(const RunConfig& c, Table& t) {
  const auto m = model::require_insulator(model::resolve_model(c.model));
  const int d = m.dimension;
  const auto gap = greens::bulk_gap(m, c.mu);
  const double delta = c.delta > 0 ? c.delta : 1e-2 * gap.width();
  const int points = c.grid > 0 ? c.grid : invariants::default_boundary_points(d);
  std::vector<double> values = c.values;
  if (values.empty()) {
    if (c.vary == "delta") values = {1e-3, 1e-2, 1e-1};
    else if (c.vary == "epsilon") values = {0.1, 0.5, 1.0};
    else if (c.vary == "grid") values = d == 2 ? std::vector<double>{16, 32, 64} : std::vector<double>{8, 12, 16};
    else if (c.vary == "strip_N") values = {1, 2, 3, 4};
  }
  if (c.vary != "delta" && c.vary != "epsilon" && c.vary != "grid" && c.vary != "strip_N") {
    throw Error(ErrorCode::InvalidArgument, "--vary must be delta, epsilon, grid or strip_N");
  }
  bool any = false;
  int last_failure = kOk;
  for (double x : values) {
    auto options = boundary_options(c);
    double dz = delta;
    int n = points;
    if (c.vary == "delta") dz = x;
    if (c.vary == "epsilon") options.epsilon = x;
    if (c.vary == "grid") n = int(x);
    if (c.vary == "strip_N") options.strip = int(x);
    try {
      const model::MomentumGrid grid(d - 1, n, 0.5);
      const auto field = invariants::boundary_unitary_field(m, {c.mu, dz}, grid, options);
      double unitarity = 0.0;
      for (const auto& v : field.values) unitarity = std::max(unitarity, numerics::unitarity_residual(v));
      const auto r = invariants::odd_winding(field, false);
      t.row() << c.vary << x << r.value << r.rounded << r.distance_to_integer << unitarity
              << (r.converged() ? "ok" : "unconverged");
      any = any || r.converged();
      if (!r.converged()) last_failure = kConvergence;
    } catch (const Error& e) {
      t.row() << c.vary << x << "nan" << "0" << "nan" << "nan" << std::string(to_string(e.code()));
      last_failure = exit_code_for(e.code());
    }
  }
  return any ? kOk : (last_failure == kOk ? kConvergence : last_failure);
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> header;
  if (c.command == "chern-bulk") {
    header = {"grid", "value", "rounded", "distance_to_integer"};
  } else if (c.command == "verify" && c.which == "properties") {
    header = {"check", "samples", "measured", "threshold", "result"};
  } else if (c.command == "verify") {
    header = {"check", "value", "rounded", "distance_to_integer", "result"};
  } else if (c.command == "sweep") {
    header = {"parameter", "value", "winding", "rounded", "distance_to_integer",
              "unitarity_residual", "status"};
  } else {
    err << "unknown command '" << c.command << "'\n";
    return kUsage;
  }
  Table table(header);
  int code = kOk;
  try {
    if (c.strip < 1 || !(c.epsilon > 0) || c.delta < 0 || c.depth < 0 || c.samples < 1) {
      throw Error(ErrorCode::InvalidArgument, "numeric parameters out of range");
    }
    if (c.command == "chern-bulk") {
      code = cmd_chern_bulk(c, table);
    } else if (c.command == "sweep") {
      code = cmd_sweep(c, table);
    } else if (c.which == "theorem1") {
      code = cmd_theorem1(c, table);
    } else if (c.which == "theorem2") {
      code = cmd_theorem2(c, table);
    } else if (c.which == "bbc") {
      code = cmd_bbc(c, table);
    } else if (c.which == "properties") {
      code = Properties(c.seed, c.samples).run(table);
    } else {
      throw Error(ErrorCode::InvalidArgument, "verify needs bbc, theorem1, theorem2 or properties");
    }
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (!std::isnan(e.value())) err << " (value " << num(e.value()) << ")";
    err << '\n';
    return exit_code_for(e.code());
  }
  if (c.output.empty()) {
    table.write(out, metadata(c));
  } else {
    std::ofstream file(c.output);
    if (!file) {
      err << "error: cannot write " << c.output << '\n';
      return kUsage;
    }
    table.write(file, metadata(c));
  }
  return code;
}

}  // namespace topo::cli
