#pragma once

// Small named algebras and seeded random generators shared by the tests, the
// acceptance suite and the CLI.

#include <cstdint>
#include <random>
#include <string>

#include "deforma/dgla.hpp"

namespace deforma {

/// span(A, B) ⊂ sl(2), A = E12, B = E11 - E22, so [B, A] = 2A.
DGLA sl2_span();
/// sl(2) on (E, H, F) with [H,E] = 2E, [H,F] = -2F, [E,F] = H.
DGLA sl2();
/// Two-dimensional nonabelian Lie algebra [x, y] = y.
DGLA two_dim_nonabelian();
/// Strictly upper triangular 3x3 matrices: [a, b] = c.
DGLA heisenberg();

/// a, b in degree 0 and c, e in degree 1 with db = c, [a,e] = c + e,
/// [b,c] = c, [b,e] = e. Its minimal model has a nonzero arity-3 bracket.
DGLA transfer_witness_dgla();

/// Λ(e) with |e| = degree, zero differential.
CDGA exterior_cdga(int degree);
/// K[ε]/(ε²) with |ε| = 0.
CDGA dual_numbers();
/// K[s, ds]/(s^{k+1}, s^k ds), closed under d.
CDGA polynomial_forms(unsigned k);

/// Random invertible degree-preserving change of basis and its inverse.
struct BasisChange {
  Matrix p;
  Matrix pinv;
};
BasisChange random_basis_change(const GradedSpace& v, std::mt19937_64& rng);

struct SampleMorphism {
  std::string name;
  DGLAMorphism chi;
};

/// Draws a DGLA morphism from a fixed pool (each side dim ≤ 4, degrees in
/// [-1, 2]) and conjugates both sides by random changes of basis.
SampleMorphism random_dgla_morphism(std::mt19937_64& rng);
/// Random injective morphism that is injective in cohomology.
SampleMorphism random_injective_morphism(std::mt19937_64& rng);

/// Random small integer-valued rational in [-bound, bound].
Rational random_small(std::mt19937_64& rng, int bound = 3);

}  // namespace deforma
