#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topo/numerics/linalg.hpp"

namespace topo::model {

using numerics::Complex;
using numerics::ComplexMatrix;

/// A matrix-valued trigonometric polynomial X(k) = sum_m X_m exp(i m.k) on the
/// boundary torus. Operators are recovered from fibers with the convention
/// fiber(k) = sum_r a(r) exp(i k r), a(n - m) = kernel(n, m).
class FourierMatrix {
 public:
  struct Term {
    std::vector<int> exponent;
    ComplexMatrix coefficient;
  };

  FourierMatrix() = default;
  FourierMatrix(int fiber_dim, int torus_dim) : fiber_dim_(fiber_dim), torus_dim_(torus_dim) {}

  static FourierMatrix constant(const ComplexMatrix& value, int torus_dim);

  /// Adds to the coefficient of exp(i exponent.k); repeated exponents accumulate.
  FourierMatrix& add(std::vector<int> exponent, const ComplexMatrix& coefficient);

  ComplexMatrix operator()(std::span<const double> k) const;

  int fiber_dim() const { return fiber_dim_; }
  int torus_dim() const { return torus_dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// True when X(k) is Hermitian for every real k (X_{-m} = X_m^*).
  bool hermitian(double tol) const;

 private:
  int fiber_dim_ = 0;
  int torus_dim_ = 0;
  std::vector<Term> terms_;
};

struct Layer {
  FourierMatrix hopping;  // A_n: block (n-1, n) of the Hamiltonian
  FourierMatrix onsite;   // B_n
};

/// Periodic perturbation lambda * H1 with the same layer structure.
struct Perturbation {
  double lambda = 0.0;
  std::vector<Layer> layers;
};

/// Nearest-neighbour insulator written layer by layer,
///   (H phi)_n = A_{n+1} phi_{n+1} + B_n phi_n + A_n^* phi_{n-1},
/// periodic with period p in the perpendicular direction. layers[j] holds
/// A_n and B_n for every layer n = j+1 (mod p), n counted from 1.
struct BlockJacobiModel {
  std::string name;
  int dimension = 2;  // d, even
  int fiber_dim = 1;  // L
  std::vector<Layer> layers;
  std::optional<Perturbation> perturbation;

  int period() const { return int(layers.size()); }
  int boundary_dim() const { return dimension - 1; }

  /// A_n(k), including the perturbation; n >= 1.
  ComplexMatrix hopping(int n, std::span<const double> k) const;
  /// B_n(k), including the perturbation; n >= 1.
  ComplexMatrix onsite(int n, std::span<const double> k) const;

  /// Throws InvalidModel naming the failed check. Invertibility of the
  /// hoppings is sampled on a grid of the boundary torus.
  void validate(bool require_invertible_hopping = true) const;
};

struct WireModel {
  ComplexMatrix hopping;  // A
  ComplexMatrix onsite;   // B = B^*

  int fiber_dim() const { return int(onsite.rows()); }
  void validate() const;
};

/// Wire on sites n <= 0 coupled to the insulator on n >= 1 through the wire
/// hopping A at the bond (0, 1).
struct ScatteringSystem {
  WireModel wire;
  BlockJacobiModel insulator;

  void validate() const;
};

enum class Boundary { half_space, periodic };

/// Depth-M Dirichlet truncation of the half-space fiber: layers 1..M.
ComplexMatrix half_space_fiber(const BlockJacobiModel& model, std::span<const double> k,
                               int layers);

/// Bulk fiber over one perpendicular period; `k` has d components, the last one
/// being the perpendicular Bloch momentum.
ComplexMatrix bulk_fiber(const BlockJacobiModel& model, std::span<const double> k);

/// Dispatches to half_space_fiber or bulk_fiber. For the periodic boundary `layers`
/// must equal the period and `k` carries the extra perpendicular component.
ComplexMatrix bloch_fiber(const BlockJacobiModel& model, std::span<const double> k,
                          int layers, Boundary boundary);

/// Wire layers -W+1..0 followed by insulator layers 1..I.
ComplexMatrix scattering_fiber(const ScatteringSystem& sys, std::span<const double> k,
                               int wire_layers, int insulator_layers);

/// Uniform grid on [0, 2pi)^dim with `points` nodes per axis, shifted by
/// `offset` times the spacing. Node index is row-major, last axis fastest.
class MomentumGrid {
 public:
  MomentumGrid(int dim, int points, double offset = 0.0);

  int dim() const { return dim_; }
  int points() const { return points_; }
  double offset() const { return offset_; }
  double spacing() const;
  std::size_t size() const { return size_; }

  std::vector<double> node(std::size_t index) const;
  std::vector<int> coords(std::size_t index) const;
  std::size_t index(std::span<const int> coords) const;
  /// Index of the neighbour shifted by `step` along `axis`, periodically.
  std::size_t shifted(std::size_t index, int axis, int step = 1) const;

 private:
  int dim_;
  int points_;
  double offset_;
  std::size_t size_;
};

}  // namespace topo::model
