#include "topo/model/model.hpp"

#include <cmath>
#include <numbers>

#include "topo/error.hpp"

namespace topo::model {

using numerics::kI;

FourierMatrix FourierMatrix::constant(const ComplexMatrix& value, int torus_dim) {
  FourierMatrix f(int(value.rows()), torus_dim);
  f.add(std::vector<int>(torus_dim, 0), value);
  return f;
}

FourierMatrix& FourierMatrix::add(std::vector<int> exponent, const ComplexMatrix& coefficient) {
  if (int(exponent.size()) != torus_dim_) {
    throw Error(ErrorCode::InvalidModel, "harmonic exponent has wrong dimension");
  }
  if (coefficient.rows() != fiber_dim_ || coefficient.cols() != fiber_dim_) {
    throw Error(ErrorCode::InvalidModel, "harmonic coefficient has wrong shape");
  }
  for (auto& t : terms_) {
    if (t.exponent == exponent) {
      t.coefficient += coefficient;
      return *this;
    }
  }
  terms_.push_back({std::move(exponent), coefficient});
  return *this;
}

ComplexMatrix FourierMatrix::operator()(std::span<const double> k) const {
  if (int(k.size()) != torus_dim_) {
    throw Error(ErrorCode::InvalidArgument, "momentum has wrong number of components");
  }
  ComplexMatrix out = ComplexMatrix::Zero(fiber_dim_, fiber_dim_);
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int j = 0; j < torus_dim_; ++j) phase += t.exponent[j] * k[j];
    out += std::exp(kI * phase) * t.coefficient;
  }
  return out;
}

bool FourierMatrix::hermitian(double tol) const {
  for (const auto& t : terms_) {
    std::vector<int> neg(t.exponent.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -t.exponent[j];
    ComplexMatrix partner = ComplexMatrix::Zero(fiber_dim_, fiber_dim_);
    for (const auto& u : terms_) {
      if (u.exponent == neg) partner = u.coefficient;
    }
    if ((t.coefficient.adjoint() - partner).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

ComplexMatrix BlockJacobiModel::hopping(int n, std::span<const double> k) const {
  const int j = (n - 1) % period();
  ComplexMatrix a = layers[j].hopping(k);
  if (perturbation && perturbation->lambda != 0.0) {
    a += perturbation->lambda * perturbation->layers[j].hopping(k);
  }
  return a;
}

ComplexMatrix BlockJacobiModel::onsite(int n, std::span<const double> k) const {
  const int j = (n - 1) % period();
  ComplexMatrix b = layers[j].onsite(k);
  if (perturbation && perturbation->lambda != 0.0) {
    b += perturbation->lambda * perturbation->layers[j].onsite(k);
  }
  return b;
}

namespace {

void check_layer_shapes(const Layer& layer, int fiber_dim, int torus_dim, const char* what) {
  for (const FourierMatrix* f : {&layer.hopping, &layer.onsite}) {
    if (f->fiber_dim() != fiber_dim || f->torus_dim() != torus_dim) {
      throw Error(ErrorCode::InvalidModel, std::string(what) + " has inconsistent dimensions");
    }
    for (const auto& t : f->terms()) {
      if (!numerics::all_finite(t.coefficient)) {
        throw Error(ErrorCode::InvalidModel, std::string(what) + " has non-finite entries");
      }
    }
  }
}

constexpr double kHermitianTol = 1e-12;
constexpr double kHoppingConditionLimit = 1e10;
constexpr int kValidationPoints = 6;

}  // namespace

void BlockJacobiModel::validate(bool require_invertible_hopping) const {
  if (dimension < 2 || dimension % 2 != 0) {
    throw Error(ErrorCode::InvalidModel, "dimension must be even and positive");
  }
  if (fiber_dim < 1) throw Error(ErrorCode::InvalidModel, "fiber_dim must be positive");
  if (layers.empty()) throw Error(ErrorCode::InvalidModel, "period_perp must be at least 1");
  for (const auto& layer : layers) {
    check_layer_shapes(layer, fiber_dim, boundary_dim(), "layer");
    if (!layer.onsite.hermitian(kHermitianTol)) {
      throw Error(ErrorCode::InvalidModel, "onsite not Hermitian");
    }
  }
  if (perturbation) {
    if (!(perturbation->lambda >= 0.0)) {
      throw Error(ErrorCode::InvalidModel, "perturbation lambda must be non-negative");
    }
    if (perturbation->layers.size() != layers.size()) {
      throw Error(ErrorCode::InvalidModel, "perturbation period differs from model period");
    }
    for (const auto& layer : perturbation->layers) {
      check_layer_shapes(layer, fiber_dim, boundary_dim(), "perturbation");
      if (!layer.onsite.hermitian(kHermitianTol)) {
        throw Error(ErrorCode::InvalidModel, "perturbation onsite not Hermitian");
      }
    }
  }
  if (!require_invertible_hopping) return;
  const MomentumGrid grid(boundary_dim(), kValidationPoints, 0.25);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = grid.node(i);
    for (int n = 1; n <= period(); ++n) {
      const double rc = numerics::rcond(hopping(n, k));
      if (rc * kHoppingConditionLimit < 1.0) {
        throw Error(ErrorCode::InvalidModel, "hopping not invertible",
                    rc > 0.0 ? 1.0 / rc : HUGE_VAL);
      }
    }
  }
}

void WireModel::validate() const {
  const auto l = onsite.rows();
  if (l < 1 || onsite.cols() != l || hopping.rows() != l || hopping.cols() != l) {
    throw Error(ErrorCode::InvalidModel, "wire matrices must be square of equal size");
  }
  if (!numerics::all_finite(hopping) || !numerics::all_finite(onsite)) {
    throw Error(ErrorCode::InvalidModel, "wire has non-finite entries");
  }
  if (numerics::hermiticity_residual(onsite) > kHermitianTol) {
    throw Error(ErrorCode::InvalidModel, "onsite not Hermitian");
  }
  const double rc = numerics::rcond(hopping);
  if (rc * kHoppingConditionLimit < 1.0) {
    throw Error(ErrorCode::InvalidModel, "hopping not invertible",
                rc > 0.0 ? 1.0 / rc : HUGE_VAL);
  }
}

void ScatteringSystem::validate() const {
  wire.validate();
  insulator.validate();
  if (wire.fiber_dim() != insulator.fiber_dim) {
    throw Error(ErrorCode::InvalidModel, "wire and insulator fiber dimensions differ");
  }
}

ComplexMatrix half_space_fiber(const BlockJacobiModel& model, std::span<const double> k,
                               int layers) {
  if (layers < 1) throw Error(ErrorCode::InvalidArgument, "need at least one layer");
  const int l = model.fiber_dim;
  ComplexMatrix h = ComplexMatrix::Zero(layers * l, layers * l);
  for (int n = 1; n <= layers; ++n) {
    h.block((n - 1) * l, (n - 1) * l, l, l) = model.onsite(n, k);
    if (n > 1) {
      const ComplexMatrix a = model.hopping(n, k);
      h.block((n - 2) * l, (n - 1) * l, l, l) = a;
      h.block((n - 1) * l, (n - 2) * l, l, l) = a.adjoint();
    }
  }
  return h;
}

ComplexMatrix bulk_fiber(const BlockJacobiModel& model, std::span<const double> k) {
  if (int(k.size()) != model.dimension) {
    throw Error(ErrorCode::InvalidArgument, "bulk momentum needs d components");
  }
  const int p = model.period();
  const int l = model.fiber_dim;
  const auto kb = k.first(model.boundary_dim());
  ComplexMatrix h = half_space_fiber(model, kb, p);
  // A_{p+1} = A_1 couples layer p of one cell to layer 1 of the next.
  const ComplexMatrix a = model.hopping(1, kb) * std::exp(-kI * k.back());
  h.block((p - 1) * l, 0, l, l) += a;
  h.block(0, (p - 1) * l, l, l) += a.adjoint();
  return h;
}

ComplexMatrix bloch_fiber(const BlockJacobiModel& model, std::span<const double> k,
                          int layers, Boundary boundary) {
  if (boundary == Boundary::half_space) return half_space_fiber(model, k, layers);
  if (layers != model.period()) {
    throw Error(ErrorCode::InvalidArgument, "periodic fiber spans exactly one period");
  }
  return bulk_fiber(model, k);
}

ComplexMatrix scattering_fiber(const ScatteringSystem& sys, std::span<const double> k,
                               int wire_layers, int insulator_layers) {
  if (wire_layers < 1 || insulator_layers < 1) {
    throw Error(ErrorCode::InvalidArgument, "layer counts must be positive");
  }
  sys.validate();
  const int l = sys.wire.fiber_dim();
  const int total = wire_layers + insulator_layers;
  ComplexMatrix h = ComplexMatrix::Zero(total * l, total * l);
  for (int s = 0; s < wire_layers; ++s) {
    h.block(s * l, s * l, l, l) = sys.wire.onsite;
    if (s + 1 < total) {
      // The last wire bond is the coupling (0, 1), also carried by A.
      h.block(s * l, (s + 1) * l, l, l) = sys.wire.hopping;
      h.block((s + 1) * l, s * l, l, l) = sys.wire.hopping.adjoint();
    }
  }
  h.bottomRightCorner(insulator_layers * l, insulator_layers * l) =
      half_space_fiber(sys.insulator, k, insulator_layers);
  return h;
}

MomentumGrid::MomentumGrid(int dim, int points, double offset)
    : dim_(dim), points_(points), offset_(offset), size_(1) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "grid dimension must be positive");
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points per axis");
  for (int j = 0; j < dim; ++j) size_ *= std::size_t(points);
}

double MomentumGrid::spacing() const { return 2.0 * std::numbers::pi / points_; }

std::vector<int> MomentumGrid::coords(std::size_t index) const {
  std::vector<int> c(dim_);
  for (int j = dim_ - 1; j >= 0; --j) {
    c[j] = int(index % points_);
    index /= points_;
  }
  return c;
}

std::size_t MomentumGrid::index(std::span<const int> c) const {
  std::size_t idx = 0;
  for (int j = 0; j < dim_; ++j) {
    idx = idx * points_ + std::size_t(((c[j] % points_) + points_) % points_);
  }
  return idx;
}

std::vector<double> MomentumGrid::node(std::size_t index) const {
  const auto c = coords(index);
  std::vector<double> k(dim_);
  for (int j = 0; j < dim_; ++j) k[j] = (c[j] + offset_) * spacing();
  return k;
}

std::size_t MomentumGrid::shifted(std::size_t index, int axis, int step) const {
  auto c = coords(index);
  c[axis] += step;
  return this->index(c);
}

}  // namespace topo::model
