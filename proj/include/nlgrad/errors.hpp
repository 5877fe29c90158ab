#pragma once
#include <stdexcept>

namespace nlgrad {

// A computation finished but missed a pinned accuracy bar. Kept distinct
// from argument and usage errors so callers (the CLI in particular) can map
// it to its own failure class.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nlgrad
