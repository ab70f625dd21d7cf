#pragma once

#include <string>
#include <vector>

namespace deforma {

/// Outcome of a validity check: empty failure list means valid. Only the first
/// few witnesses are kept.
struct Report {
  std::vector<std::string> failures;
  std::size_t limit = 16;

  bool ok() const { return failures.empty(); }
  void fail(std::string witness) {
    if (failures.size() < limit) failures.push_back(std::move(witness));
  }
  bool full() const { return failures.size() >= limit; }
  void merge(const Report& other, const std::string& prefix = "") {
    for (const auto& f : other.failures) fail(prefix + f);
  }
};

}  // namespace deforma
