#pragma once

#include <cstdint>
#include <string>

namespace gradedmt {

// Caps the work of an enumerative search. GRADEDMT_BUDGET overrides the
// default limit of every budget built through from_env().
class Budget {
 public:
  static constexpr std::uint64_t kDefault = 200'000'000;

  explicit Budget(std::uint64_t limit = kDefault) : limit_(limit) {}
  static Budget from_env(std::uint64_t fallback = kDefault);

  // Throws BudgetError once the total exceeds the limit.
  void charge(std::uint64_t units, const std::string& what);
  // Throws BudgetError if `units` alone would exceed what is left.
  void require(std::uint64_t units, const std::string& what) const;

  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

}  // namespace gradedmt
