#pragma once

#include <span>
#include <vector>

#include "topo/numerics/linalg.hpp"

namespace topo::krein {

using numerics::Complex;
using numerics::ComplexMatrix;

/// G = i [[0, -1], [1, 0]] in blocks of size L.
ComplexMatrix krein_form(int l);
/// J = diag(1, -1).
ComplexMatrix reference_form(int l);
/// C = 2^{-1/2} [[1, -i], [1, i]]; unitary with C G C^* = J.
ComplexMatrix cayley_matrix(int l);

struct TransferMatrix {
  ComplexMatrix matrix;
  Complex z;
  ComplexMatrix hopping;
  ComplexMatrix onsite;
};

/// [[(z - B) A^{-1}, -A^*], [A^{-1}, 0]]. It maps (A_n phi_n; phi_{n-1}) to
/// (A_{n+1} phi_{n+1}; phi_n) for solutions of the layer recursion.
TransferMatrix transfer_matrix(const ComplexMatrix& a, const ComplexMatrix& b, Complex z);

/// T_n ... T_1 Phi0 for the list (T_1, ..., T_n).
ComplexMatrix propagate(std::span<const TransferMatrix> ts, const ComplexMatrix& phi0);

enum class CircleClass { inside, on_circle, outside };

struct SpectralCluster {
  Complex eigenvalue;          // cluster mean
  CircleClass location;
  int nu_plus = 0;             // signature, on-circle clusters only
  int nu_minus = 0;
  bool defective = false;
  ComplexMatrix eigenvectors;  // orthonormal basis of the generalized eigenspace

  int multiplicity() const { return int(eigenvectors.cols()); }
  bool definite() const { return !defective && (nu_plus == 0 || nu_minus == 0); }
};

struct GUnitarySpectrum {
  std::vector<SpectralCluster> clusters;
  int inside = 0;   // counted with multiplicity
  int outside = 0;
  int on_circle = 0;

  bool elliptic() const { return inside == 0 && outside == 0; }
};

inline constexpr double kCircleTol = 1e-8;
inline constexpr double kSignatureTol = 1e-8;

/// Splits the spectrum by ||lambda| - 1| against circle_tol and computes the
/// signature of v^* G v on every on-circle generalized eigenspace. Defective
/// on-circle clusters are reported with their (indefinite) signature.
GUnitarySpectrum classify_spectrum(const TransferMatrix& t, double circle_tol = kCircleTol,
                                   double sig_tol = kSignatureTol);

struct EllipticNormalForm {
  ComplexMatrix n;  // (Psi_plus, Psi_minus) C
  std::vector<Complex> lambda_plus;
  std::vector<Complex> lambda_minus;
  ComplexMatrix psi_plus;
  ComplexMatrix psi_minus;

  ComplexMatrix psi() const;       // (Psi_plus, Psi_minus)
  ComplexMatrix psi_vee() const;   // first L columns of N
  ComplexMatrix psi_wedge() const; // last L columns of N
};

/// G-orthonormal eigenframes of an elliptic, definite transfer matrix:
/// (Psi_+, Psi_-)^* G (Psi_+, Psi_-) = J, positive signature first.
EllipticNormalForm elliptic_normal_form(const TransferMatrix& t, double circle_tol = kCircleTol);

/// (a Z + b)(c Z + d)^{-1} for M = [[a, b], [c, d]].
ComplexMatrix mobius(const ComplexMatrix& m, const ComplexMatrix& z);

/// (a - i b)(a + i b)^{-1} for Phi = (a; b).
ComplexMatrix stereographic(const ComplexMatrix& phi);

/// Coordinates Phi = Psi_vee N + Psi_wedge M in the frame of `nf`, returning
/// the unitary (N - i M)(N + i M)^{-1}.
ComplexMatrix frame_angles(const ComplexMatrix& phi, const EllipticNormalForm& nf,
                           double lagrangian_tol = 1e-8);

/// |Phi^* G Phi| relative to |Phi|^2.
double lagrangian_residual(const ComplexMatrix& phi);

}  // namespace topo::krein
