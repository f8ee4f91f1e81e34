#pragma once

// Property suites per module. Each property is evaluated independently; an
// exception inside a property counts as a failure with its message.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3h/lattice.hpp"

namespace k3h {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool passed() const;
  // Names of failed properties, "suite/name".
  std::vector<std::string> failures() const;
  std::string to_json() const;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  // Lattice suite runs on this form instead of the Wehler one when set.
  std::optional<GramLattice> lattice;
  double tol = 1e-4;
  std::size_t max_letters = 60;
  std::size_t guard_bits = 200000;
};

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"lattice", "hyperbolic", "wehler", "heights", "invariants"};
  return names;
}

// suite is one of verify_suites() or "all"; kInvalidArgument otherwise.
VerifyReport run_verify(const std::string& suite, const VerifyConfig& config = {});

}  // namespace k3h
