#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace troptrack {

// Module-level failure with a stable machine-readable code
// (ArcCountMismatch, GluingInvalid, SelfFolded, SurfaceExcluded, FlipBlocked,
// MoveNotApplicable, NotCarried, LoopInvalid, NotStable).
struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& message)
      : std::runtime_error(c + ": " + message), code(std::move(c)) {}
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

// Internal consistency check that survives NDEBUG builds.
#define TT_CHECK(cond, msg)                                              \
  do {                                                                   \
    if (!(cond))                                                         \
      throw std::logic_error(std::string("internal check failed: ") +    \
                             (msg) + " [" #cond "]");                    \
  } while (0)

}  // namespace troptrack
