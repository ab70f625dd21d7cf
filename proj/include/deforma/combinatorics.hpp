#pragma once

// Signs and index combinatorics for graded symmetric algebras.

#include <cstddef>
#include <vector>

#include "deforma/rational.hpp"

namespace deforma {

/// A permutation as a list of images of positions: the rearranged word is
/// (v[perm[0]], v[perm[1]], ...).
using Permutation = std::vector<std::size_t>;

/// Koszul sign of rearranging v_1 ... v_n into v_perm[0] ... v_perm[n-1] in the
/// graded symmetric algebra: each crossing of u past w contributes (-1)^{|u||w|}.
int koszul_sign(const Permutation& perm, const std::vector<int>& degrees);

/// Koszul sign times the sign of the permutation (graded exterior algebra).
int antisymmetric_koszul_sign(const Permutation& perm, const std::vector<int>& degrees);

int permutation_sign(const Permutation& perm);

/// All permutations increasing on the first p and on the last q positions,
/// in lexicographic order of the first block.
std::vector<Permutation> unshuffles(std::size_t p, std::size_t q);

/// All permutations of {0..n-1} in lexicographic order.
std::vector<Permutation> permutations(std::size_t n);

/// Set partitions of {0..n-1}; blocks are sorted and ordered by their minima.
using Partition = std::vector<std::vector<std::size_t>>;
std::vector<Partition> set_partitions(std::size_t n);

/// Bernoulli numbers with B_1 = -1/2.
Rational bernoulli(unsigned n);

/// The permutation that lists the blocks of a partition one after another.
Permutation concatenate(const Partition& blocks);

}  // namespace deforma
