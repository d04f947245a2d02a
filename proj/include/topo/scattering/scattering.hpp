#pragma once

#include <vector>

#include "topo/invariants/invariants.hpp"
#include "topo/krein/krein.hpp"
#include "topo/model/model.hpp"

namespace topo::scattering {

using numerics::Complex;
using numerics::ComplexMatrix;
using model::ScatteringSystem;
using model::WireModel;

struct WireChannels {
  double energy = 0.0;
  krein::EllipticNormalForm normal_form;
  std::vector<double> phases_plus;   // arg of Lambda_+
  std::vector<double> phases_minus;  // arg of Lambda_-
  std::vector<int> velocity_plus;    // sign of d theta / dE per channel
  std::vector<int> velocity_minus;
};

inline constexpr double kPhaseStep = 1e-5;

/// Normal form of the wire transfer matrix at E with channel phases and the
/// sign of their energy derivative (central differences at step 1e-5).
WireChannels wire_channels(const WireModel& wire, double energy);

/// Wire frames continued from Re z to z: the spans of the eigenvalues that the
/// positive (negative) signature channels move to as Im z is switched on,
/// tracked by nearest-eigenvalue matching along the vertical segment.
struct ContinuedFrames {
  ComplexMatrix psi_plus;
  ComplexMatrix psi_minus;
  ComplexMatrix n;  // (Psi_+, Psi_-) C
};

ContinuedFrames continue_frames(const WireModel& wire, const WireChannels& channels, Complex z,
                                int steps = 16);

/// Initial condition (A G; -(A^*)^{-1}) at the bond (0, 1) of the decaying
/// insulator solutions, G being the insulator boundary Green matrix.
ComplexMatrix insulator_frame(const ComplexMatrix& coupling, const ComplexMatrix& g_ins);

struct ReflectionRoutes {
  ComplexMatrix moebius;    // (conj(C) N^{-1} C^T) . cayley(A G A^*)
  ComplexMatrix frames;     // W_- W_+^{-1} from (Psi_+, Psi_-)^{-1} Phi
  ComplexMatrix w_plus;     // coordinates of Phi in the wire frames
  ComplexMatrix w_minus;
  ComplexMatrix phi;        // insulator frame
  ContinuedFrames wire;
  ComplexMatrix g_ins;
  double route_difference = 0.0;
};

/// Both reflection routes at (z, k). The wire channels are taken at Re z.
ReflectionRoutes reflection_routes(const ScatteringSystem& sys, Complex z,
                                   std::span<const double> k);
/// Same with the (k-independent) wire frames computed once by the caller.
ReflectionRoutes reflection_routes(const ScatteringSystem& sys, const ContinuedFrames& wire,
                                   Complex z, std::span<const double> k);

/// Reflection matrix by the Moebius route.
ComplexMatrix reflection_matrix(const ScatteringSystem& sys, Complex z, std::span<const double> k);

/// (G_wire - G_ins)(G_wire + G_ins)^{-1}.
ComplexMatrix reflection_simple(const ComplexMatrix& g_wire, const ComplexMatrix& g_ins);

/// Boundary Green matrix of the half wire n <= 0 at site 0.
ComplexMatrix wire_green(const WireModel& wire, Complex z);

/// ||Psi_+ w + Psi_- R w - Phi W_+^{-1} w|| over the columns w of the identity.
double matching_residual(const ReflectionRoutes& routes);

/// Builds the scattering states of an assembled finite system (W wire layers,
/// I insulator layers) at real E and returns the largest residual of
/// (H - E) phi on interior sites, relative to |phi|.
double schroedinger_residual(const ScatteringSystem& sys, double energy, std::span<const double> k,
                             int wire_layers = 6, int insulator_layers = 6);

struct Theorem2Report {
  invariants::InvariantResult reflection;  // Ch_{d-1}(R)
  invariants::InvariantResult boundary;    // Ch_{d-1}(V)
  invariants::InvariantResult bulk;        // Ch_d(P)
  double delta = 0.0;
  bool pass = false;
};

/// Checks Ch_{d-1}(R) = Ch_{d-1}(V) = -Ch_d(P) at z = mu + i delta.
Theorem2Report verify_theorem2(const ScatteringSystem& sys, const invariants::TheoremConfig& config);

/// R(k) on every node of a boundary grid.
invariants::UnitaryField reflection_field(const ScatteringSystem& sys, Complex z,
                                          const model::MomentumGrid& grid, int jobs = 0);

}  // namespace topo::scattering
