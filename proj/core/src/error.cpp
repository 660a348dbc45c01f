#include "netstab/error.hpp"

#include <fmt/format.h>

namespace netstab {

CapacityExhausted::CapacityExhausted(double x, double value)
    : DomainError(fmt::format("capacity exhausted: g({:.17g}) = {:.17g} <= 0", x, value)),
      x_(x) {}

OutOfRangeError::OutOfRangeError(double t, double lo, double hi)
    : Error(fmt::format("time {:.17g} outside buffered span [{:.17g}, {:.17g}]", t, lo, hi)) {}

IntegrationDiverged::IntegrationDiverged(double t, const std::string& cause)
    : Error(fmt::format("integration diverged at t = {:.17g}: {}", t, cause)), t_(t) {}

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : Error(line > 0 ? fmt::format("{}:{}: {}", source, line, what)
                     : fmt::format("{}: {}", source, what)),
      line_(line) {}

}  // namespace netstab
