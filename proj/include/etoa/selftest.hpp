#pragma once

#include <string>
#include <vector>

namespace etoa {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast oracle and invariant checks on small grids: Parseval, filter
/// unitarity, the Lorentzian impulse response, source normalization, the
/// no-signaling identity, the difference-time width and event round trips.
std::vector<SelfCheck> run_selftest();

}  // namespace etoa
