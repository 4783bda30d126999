#pragma once

#include <functional>
#include <string>

namespace autosas {

using WarningHandler = std::function<void(const std::string&)>;

// Installs a process-wide sink for non-fatal diagnostics. Passing an empty
// handler restores the default (stderr).
void set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace autosas
