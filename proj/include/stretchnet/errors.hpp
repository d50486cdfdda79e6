#pragma once

#include <stdexcept>

namespace stretchnet {

// An adaptive routine could not reach its requested tolerance, or a
// simulation violated one of its operational guards.
class numerical_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace stretchnet
