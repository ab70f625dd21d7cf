#include "deforma/combinatorics.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace deforma {

namespace {

void check_permutation(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
}

}  // namespace

int koszul_sign(const Permutation& perm, const std::vector<int>& degrees) {
  if (perm.size() != degrees.size()) throw std::invalid_argument("koszul_sign: length mismatch");
  check_permutation(perm);
  long long parity = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) parity += static_cast<long long>(degrees[perm[i]]) * degrees[perm[j]];
    }
  }
  return sign_pow(parity);
}

int permutation_sign(const Permutation& perm) {
  check_permutation(perm);
  long long inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
  }
  return sign_pow(inversions);
}

int antisymmetric_koszul_sign(const Permutation& perm, const std::vector<int>& degrees) {
  return koszul_sign(perm, degrees) * permutation_sign(perm);
}

std::vector<Permutation> unshuffles(std::size_t p, std::size_t q) {
  const std::size_t n = p + q;
  std::vector<Permutation> out;
  // Choose the first block as a p-subset in lexicographic order.
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(p), true);
  do {
    Permutation perm;
    perm.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) perm.push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) perm.push_back(i);
    }
    out.push_back(std::move(perm));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

std::vector<Permutation> permutations(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Partition> set_partitions(std::size_t n) {
  std::vector<Partition> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  Partition current;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(current);
      return;
    }
    for (std::size_t b = 0; b < current.size(); ++b) {
      current[b].push_back(i);
      self(self, i + 1);
      current[b].pop_back();
    }
    current.push_back({i});
    self(self, i + 1);
    current.pop_back();
  };
  rec(rec, 0);
  return out;
}

Rational bernoulli(unsigned n) {
  static std::mutex mu;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    const unsigned m = static_cast<unsigned>(cache.size());
    Rational s = 0;
    for (unsigned k = 0; k < m; ++k) s += binomial(m + 1, k) * cache[k];
    cache.push_back(-s / Rational(m + 1));
  }
  return cache[n];
}

Permutation concatenate(const Partition& blocks) {
  Permutation p;
  for (const auto& b : blocks) p.insert(p.end(), b.begin(), b.end());
  return p;
}

}  // namespace deforma
