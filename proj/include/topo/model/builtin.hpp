#pragma once

#include <string_view>

#include "topo/model/model.hpp"

namespace topo::model {

/// Diagonal hopping added to the QWZ and Dirac hoppings, which are singular on
/// their own. It shifts both bands by 2t cos(k_perp) and leaves gaps at mu=0
/// open while t is small.
inline constexpr double kDefaultHoppingShift = 0.2;

/// Nearest-neighbour chain viewed as a d=2 model constant in the boundary
/// momentum: L=1, A=1, B=0.
BlockJacobiModel chain();

/// Two-band Chern insulator with B(k) = (u + cos k) s3 + sin k s2 and
/// A = (s3 - i s1)/2 + t.
BlockJacobiModel qwz(double u, double t = kDefaultHoppingShift);

/// Four-band model in d=4 with Gamma_j = s1 x s_j (j=1..3), Gamma_4 = s2 x 1,
/// Gamma_0 = s3 x 1; B(k) = sum_j sin k_j Gamma_j + (m + sum_j cos k_j) Gamma_0,
/// A = (Gamma_0 + i Gamma_4)/2 + t.
BlockJacobiModel dirac4(double m, double t = kDefaultHoppingShift);

/// Atomic insulator with L=2: B = mass diag(1,-1), A = t.
BlockJacobiModel trivial(int dimension = 2, double mass = 1.0,
                         double t = kDefaultHoppingShift);

/// L decoupled chains with hopping 1 and onsite energy `onsite`.
WireModel wire_chain(int fiber_dim, double onsite = 0.0);

/// Parses "name" or "name:key=value,key=value" for the models above, e.g.
/// "qwz:u=-1,t=0.2", "dirac4:m=-3", "trivial:d=4,mass=1", "chain", "wire:L=4,b=0".
BlockJacobiModel builtin_insulator(std::string_view spec);
WireModel builtin_wire(std::string_view spec);

}  // namespace topo::model
