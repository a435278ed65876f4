#pragma once

// A named numerical check: a measured value against a bound.

#include <string>
#include <vector>

namespace cutloci {

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// value <= bound (NaN fails).
inline Check check_at_most(std::string name, double value, double bound) {
  return Check{std::move(name), value, bound, value <= bound};
}

/// value >= bound (NaN fails).
inline Check check_at_least(std::string name, double value, double bound) {
  return Check{std::move(name), value, bound, value >= bound};
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace cutloci
