#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uvsram {

enum class CrashReason { OutOfRange, StepBudgetExceeded, NonFiniteControl };

inline std::string_view to_string(CrashReason r) {
  switch (r) {
    case CrashReason::OutOfRange: return "OutOfRange";
    case CrashReason::StepBudgetExceeded: return "StepBudgetExceeded";
    case CrashReason::NonFiniteControl: return "NonFiniteControl";
  }
  return "?";
}

/// Raised from inside a simulated run; the workload driver turns it into a
/// Crash result.
class CrashSignal : public std::runtime_error {
 public:
  CrashSignal(CrashReason reason, const std::string& detail)
      : std::runtime_error(std::string(to_string(reason)) + ": " + detail),
        reason_(reason) {}
  CrashReason reason() const noexcept { return reason_; }

 private:
  CrashReason reason_;
};

}  // namespace uvsram
