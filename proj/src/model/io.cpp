#include "topo/model/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "topo/error.hpp"
#include "topo/model/builtin.hpp"

namespace topo::model {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(where, "unknown key '" + key + "'");
  }
}

const json& field(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

int integer(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

double real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

ComplexMatrix real_matrix(const json& v, int dim, const std::string& where) {
  if (!v.is_array() || int(v.size()) != dim * dim) {
    fail(where, "expected a row-major array of " + std::to_string(dim * dim) + " reals");
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m(i, j) = real(v[i * dim + j], where + "[" + std::to_string(i * dim + j) + "]");
    }
  }
  return m;
}

// {real_part, imag_part}; a missing imag_part means zero.
ComplexMatrix complex_matrix(const json& obj, int dim, const std::string& where) {
  allow_keys(obj, where, {"real_part", "imag_part"});
  ComplexMatrix m = real_matrix(field(obj, where, "real_part"), dim, where + ".real_part");
  if (obj.contains("imag_part")) {
    m += numerics::kI * real_matrix(obj["imag_part"], dim, where + ".imag_part");
  }
  return m;
}

std::vector<FourierMatrix> layer_series(const json& list, int period, int fiber_dim,
                                        int torus_dim, const std::string& where) {
  if (!list.is_array()) fail(where, "expected an array of layers");
  std::vector<FourierMatrix> out(period, FourierMatrix(fiber_dim, torus_dim));
  std::set<int> seen;
  for (std::size_t e = 0; e < list.size(); ++e) {
    const json& entry = list[e];
    const std::string at = where + "[" + std::to_string(e) + "]";
    allow_keys(entry, at, {"layer", "harmonics"});
    const int layer = integer(entry, at, "layer");
    if (layer < 1 || layer > period) {
      fail(at + ".layer", "must lie in 1.." + std::to_string(period));
    }
    if (!seen.insert(layer).second) fail(at + ".layer", "duplicate layer");
    const json& harmonics = field(entry, at, "harmonics");
    if (!harmonics.is_array()) fail(at + ".harmonics", "expected an array");
    for (std::size_t h = 0; h < harmonics.size(); ++h) {
      const std::string hat = at + ".harmonics[" + std::to_string(h) + "]";
      const json& term = harmonics[h];
      allow_keys(term, hat, {"exponent", "real_part", "imag_part"});
      const json& exp = field(term, hat, "exponent");
      if (!exp.is_array() || int(exp.size()) != torus_dim) {
        fail(hat + ".exponent", "expected " + std::to_string(torus_dim) + " integers");
      }
      std::vector<int> exponent;
      for (const auto& x : exp) {
        if (!x.is_number_integer()) fail(hat + ".exponent", "expected integers");
        exponent.push_back(x.get<int>());
      }
      json coeff = json::object();
      coeff["real_part"] = field(term, hat, "real_part");
      if (term.contains("imag_part")) coeff["imag_part"] = term["imag_part"];
      out[layer - 1].add(std::move(exponent), complex_matrix(coeff, fiber_dim, hat));
    }
  }
  for (int p = 1; p <= period; ++p) {
    if (!seen.count(p)) fail(where, "layer " + std::to_string(p) + " missing");
  }
  return out;
}

std::vector<Layer> layers_of(const json& obj, int period, int fiber_dim, int torus_dim,
                             const std::string& where) {
  const auto hop = layer_series(field(obj, where, "hoppings"), period, fiber_dim, torus_dim,
                                where + ".hoppings");
  const auto ons = layer_series(field(obj, where, "onsite"), period, fiber_dim, torus_dim,
                                where + ".onsite");
  std::vector<Layer> layers;
  for (int p = 0; p < period; ++p) layers.push_back({hop[p], ons[p]});
  return layers;
}

BlockJacobiModel insulator_from(const json& obj, const std::string& where) {
  allow_keys(obj, where, {"kind", "name", "dimension", "fiber_dim", "period_perp", "hoppings",
                          "onsite", "perturbation"});
  BlockJacobiModel m;
  if (obj.contains("name")) m.name = obj["name"].get<std::string>();
  m.dimension = integer(obj, where, "dimension");
  m.fiber_dim = integer(obj, where, "fiber_dim");
  const int period = integer(obj, where, "period_perp");
  if (m.dimension < 2 || m.dimension % 2) fail(where + ".dimension", "must be even and >= 2");
  if (m.fiber_dim < 1) fail(where + ".fiber_dim", "must be positive");
  if (period < 1) fail(where + ".period_perp", "must be positive");
  m.layers = layers_of(obj, period, m.fiber_dim, m.dimension - 1, where);
  if (obj.contains("perturbation")) {
    const json& pert = obj["perturbation"];
    const std::string at = where + ".perturbation";
    allow_keys(pert, at, {"lambda", "hoppings", "onsite"});
    Perturbation p;
    p.lambda = real(field(pert, at, "lambda"), at + ".lambda");
    p.layers = layers_of(pert, period, m.fiber_dim, m.dimension - 1, at);
    m.perturbation = std::move(p);
  }
  m.validate();
  return m;
}

WireModel wire_from(const json& obj, const std::string& where) {
  allow_keys(obj, where, {"kind", "name", "fiber_dim", "hopping", "onsite"});
  const int l = integer(obj, where, "fiber_dim");
  if (l < 1) fail(where + ".fiber_dim", "must be positive");
  WireModel w{complex_matrix(field(obj, where, "hopping"), l, where + ".hopping"),
              complex_matrix(field(obj, where, "onsite"), l, where + ".onsite")};
  w.validate();
  return w;
}

void nested_kind(const json& obj, const std::string& where, const char* expected) {
  if (obj.contains("kind") && obj["kind"] != expected) {
    fail(where + ".kind", std::string("expected '") + expected + "'");
  }
}

AnyModel model_from(const json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) fail(root, "expected an object");
  const json& kind = field(doc, root, "kind");
  if (!kind.is_string()) fail(root + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "insulator") return insulator_from(doc, root);
  if (k == "wire") return wire_from(doc, root);
  if (k == "scattering") {
    allow_keys(doc, root, {"kind", "name", "wire", "insulator"});
    const json& w = field(doc, root, "wire");
    const json& ins = field(doc, root, "insulator");
    nested_kind(w, root + ".wire", "wire");
    nested_kind(ins, root + ".insulator", "insulator");
    ScatteringSystem sys{wire_from(w, root + ".wire"), insulator_from(ins, root + ".insulator")};
    sys.validate();
    return sys;
  }
  fail(root + ".kind", "unknown kind '" + k + "'");
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json matrix_json(const ComplexMatrix& m, bool imag) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(imag ? m(i, j).imag() : m(i, j).real());
  }
  return arr;
}

json series_json(const std::vector<Layer>& layers, bool hopping) {
  json list = json::array();
  for (std::size_t p = 0; p < layers.size(); ++p) {
    const FourierMatrix& f = hopping ? layers[p].hopping : layers[p].onsite;
    json harmonics = json::array();
    for (const auto& t : f.terms()) {
      harmonics.push_back({{"exponent", t.exponent},
                           {"real_part", matrix_json(t.coefficient, false)},
                           {"imag_part", matrix_json(t.coefficient, true)}});
    }
    list.push_back({{"layer", int(p) + 1}, {"harmonics", harmonics}});
  }
  return list;
}

}  // namespace

AnyModel parse_model(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": malformed JSON");
  }
  try {
    return model_from(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) {
      throw Error(ErrorCode::ParseError, origin + ": " + std::string(e.what()).substr(12));
    }
    throw;
  }
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.string());
}

AnyModel resolve_model(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string_view spec = std::string_view(source).substr(prefix.size());
    if (spec.rfind("wire", 0) == 0) return builtin_wire(spec);
    return builtin_insulator(spec);
  }
  return load_model(source);
}

BlockJacobiModel require_insulator(const AnyModel& model) {
  if (const auto* m = std::get_if<BlockJacobiModel>(&model)) return *m;
  if (const auto* s = std::get_if<ScatteringSystem>(&model)) return s->insulator;
  throw Error(ErrorCode::InvalidModel, "an insulator model is required");
}

WireModel require_wire(const AnyModel& model) {
  if (const auto* w = std::get_if<WireModel>(&model)) return *w;
  if (const auto* s = std::get_if<ScatteringSystem>(&model)) return s->wire;
  throw Error(ErrorCode::InvalidModel, "a wire model is required");
}

std::string dump_model(const BlockJacobiModel& model) {
  json doc = {{"kind", "insulator"},
              {"name", model.name},
              {"dimension", model.dimension},
              {"fiber_dim", model.fiber_dim},
              {"period_perp", model.period()},
              {"hoppings", series_json(model.layers, true)},
              {"onsite", series_json(model.layers, false)}};
  if (model.perturbation) {
    doc["perturbation"] = {{"lambda", model.perturbation->lambda},
                           {"hoppings", series_json(model.perturbation->layers, true)},
                           {"onsite", series_json(model.perturbation->layers, false)}};
  }
  return doc.dump(2);
}

}  // namespace topo::model
