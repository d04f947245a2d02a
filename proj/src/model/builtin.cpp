#include "topo/model/builtin.hpp"

#include <charconv>
#include <map>
#include <string>

#include "topo/error.hpp"

namespace topo::model {

using numerics::kI;

namespace {

ComplexMatrix pauli(int j) {
  ComplexMatrix s(2, 2);
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<int> unit(int dim, int axis, int sign) {
  std::vector<int> e(dim, 0);
  e[axis] = sign;
  return e;
}

// "name:key=value,..." split into a name and numeric parameters.
std::pair<std::string, std::map<std::string, double>> parse_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  std::string name(spec.substr(0, colon));
  std::map<std::string, double> params;
  if (colon == std::string_view::npos) return {name, params};
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "builtin parameter '" + std::string(item) + "' lacks '='");
    }
    const std::string key(item.substr(0, eq));
    const std::string_view text = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::ParseError, "builtin parameter '" + key + "' is not a number");
    }
    params[key] = value;
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  return {name, params};
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

void reject_leftovers(const std::map<std::string, double>& params, const std::string& name) {
  if (!params.empty()) {
    throw Error(ErrorCode::ParseError,
                "unknown parameter '" + params.begin()->first + "' for builtin " + name);
  }
}

}  // namespace

BlockJacobiModel chain() {
  BlockJacobiModel m;
  m.name = "chain";
  m.dimension = 2;
  m.fiber_dim = 1;
  m.layers.push_back({FourierMatrix::constant(ComplexMatrix::Identity(1, 1), 1),
                      FourierMatrix::constant(ComplexMatrix::Zero(1, 1), 1)});
  return m;
}

BlockJacobiModel qwz(double u, double t) {
  BlockJacobiModel m;
  m.name = "qwz";
  m.dimension = 2;
  m.fiber_dim = 2;
  const ComplexMatrix hop = (pauli(3) - kI * pauli(1)) / 2.0 + t * pauli(0);
  FourierMatrix onsite(2, 1);
  onsite.add({0}, u * pauli(3));
  // cos k s3 + sin k s2 = sum over e^{+-ik} of s3/2 +- s2/(2i)
  onsite.add({1}, pauli(3) / 2.0 + pauli(2) / (2.0 * kI));
  onsite.add({-1}, pauli(3) / 2.0 - pauli(2) / (2.0 * kI));
  m.layers.push_back({FourierMatrix::constant(hop, 1), onsite});
  return m;
}

BlockJacobiModel dirac4(double mass, double t) {
  BlockJacobiModel m;
  m.name = "dirac4";
  m.dimension = 4;
  m.fiber_dim = 4;
  const ComplexMatrix g0 = kron(pauli(3), pauli(0));
  const ComplexMatrix g4 = kron(pauli(2), pauli(0));
  FourierMatrix onsite(4, 3);
  onsite.add({0, 0, 0}, mass * g0);
  for (int j = 0; j < 3; ++j) {
    const ComplexMatrix gj = kron(pauli(1), pauli(j + 1));
    onsite.add(unit(3, j, 1), g0 / 2.0 + gj / (2.0 * kI));
    onsite.add(unit(3, j, -1), g0 / 2.0 - gj / (2.0 * kI));
  }
  const ComplexMatrix hop = (g0 + kI * g4) / 2.0 + t * ComplexMatrix::Identity(4, 4);
  m.layers.push_back({FourierMatrix::constant(hop, 3), onsite});
  return m;
}

BlockJacobiModel trivial(int dimension, double mass, double t) {
  BlockJacobiModel m;
  m.name = "trivial";
  m.dimension = dimension;
  m.fiber_dim = 2;
  m.layers.push_back({FourierMatrix::constant(t * pauli(0), dimension - 1),
                      FourierMatrix::constant(mass * pauli(3), dimension - 1)});
  return m;
}

WireModel wire_chain(int fiber_dim, double onsite) {
  return {ComplexMatrix::Identity(fiber_dim, fiber_dim),
          onsite * ComplexMatrix::Identity(fiber_dim, fiber_dim)};
}

BlockJacobiModel builtin_insulator(std::string_view spec) {
  auto [name, params] = parse_spec(spec);
  BlockJacobiModel m;
  if (name == "chain") {
    m = chain();
  } else if (name == "qwz") {
    const double u = take(params, "u", -1.0);
    m = qwz(u, take(params, "t", kDefaultHoppingShift));
  } else if (name == "dirac4") {
    const double mass = take(params, "m", -3.0);
    m = dirac4(mass, take(params, "t", kDefaultHoppingShift));
  } else if (name == "trivial") {
    const int d = int(take(params, "d", 2));
    const double mass = take(params, "mass", 1.0);
    m = trivial(d, mass, take(params, "t", kDefaultHoppingShift));
  } else {
    throw Error(ErrorCode::ParseError, "unknown builtin insulator '" + name + "'");
  }
  reject_leftovers(params, name);
  m.validate();
  return m;
}

WireModel builtin_wire(std::string_view spec) {
  auto [name, params] = parse_spec(spec);
  if (name != "wire" && name != "chain") {
    throw Error(ErrorCode::ParseError, "unknown builtin wire '" + name + "'");
  }
  const int l = int(take(params, "L", 1));
  const double b = take(params, "b", 0.0);
  reject_leftovers(params, name);
  if (l < 1) throw Error(ErrorCode::InvalidModel, "wire needs L >= 1");
  WireModel w = wire_chain(l, b);
  w.validate();
  return w;
}

}  // namespace topo::model
