#include "gradedmt/budget.hh"

#include <cstdlib>

#include "gradedmt/error.hh"

namespace gradedmt {

Budget Budget::from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("GRADEDMT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return Budget(v);
  }
  return Budget(fallback);
}

void Budget::charge(std::uint64_t units, const std::string& what) {
  used_ += units;
  if (used_ > limit_)
    throw BudgetError(what + " exceeds the search budget of " +
                      std::to_string(limit_));
}

void Budget::require(std::uint64_t units, const std::string& what) const {
  if (units > limit_ - std::min(used_, limit_))
    throw BudgetError(what + " needs " + std::to_string(units) +
                      " steps, over the search budget of " +
                      std::to_string(limit_));
}

}  // namespace gradedmt
