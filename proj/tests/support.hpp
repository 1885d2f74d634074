#pragma once

#include <functional>
#include <optional>

#include "orka/error.hpp"

namespace orka::test {

// Kind of the orka::Error thrown by `f`, or nullopt when it returns normally.
inline std::optional<ErrorKind> error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace orka::test
