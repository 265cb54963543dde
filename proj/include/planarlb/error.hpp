#pragma once

#include <stdexcept>
#include <string>

namespace planarlb {

// Bad input shape, out-of-range index, malformed file.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A construction whose distances would not fit into a signed 64-bit weight.
class OverflowError : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

// Update kind not permitted by the engine's update mode, or a decrement
// issued to an increment-only engine.
class ModeViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Reweight/delete of an edge that is not present, insert of one that is,
// or a reference to an unknown node.
class UnknownEdge : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

// Checkpoint/rollback misuse.
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// A reduction observed a value that a correct engine can never produce
// (e.g. a queried distance below the recovery offset).
class EngineFault : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace planarlb
