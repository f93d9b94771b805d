#include "etoa/errors.hpp"

namespace etoa {

ExitCode exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::config;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e)) {
    return ExitCode::io;
  }
  return ExitCode::numeric;
}

}  // namespace etoa
