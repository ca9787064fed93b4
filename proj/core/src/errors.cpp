#include "oamopo/errors.hpp"

namespace oamopo {

NumericalError::NumericalError(const std::string& what, double time)
    : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

}  // namespace oamopo
