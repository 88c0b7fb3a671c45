#pragma once

#include <stdexcept>
#include <string>

namespace lll {

/// Base class for all errors raised by this library.  Every failure mode that
/// callers are expected to handle gets its own subclass so they can be caught
/// selectively; plain std::invalid_argument is reserved for programming errors
/// (malformed arguments that violate documented constructor invariants).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exact computation would have to enumerate more states than the
/// documented budget allows (joint scopes, independent-set counts, ...).
struct budget_exceeded : error {
    using error::error;
};

/// An event's scope is too large for exhaustive enumeration.
struct scope_too_large : budget_exceeded {
    using budget_exceeded::budget_exceeded;
};

/// A measure computation was asked to proceed from a state where the
/// underlying criterion fails, so the requested quantity is undefined.
struct criterion_violated : error {
    using error::error;
};

/// Input text could not be parsed; `line` is 1-based.
struct parse_error : error {
    int line;
    parse_error(const std::string& what, int line_no) : error(what), line(line_no) {}
};

/// A clause mentions the same variable twice (possibly with opposite signs).
struct duplicate_literal : parse_error {
    using parse_error::parse_error;
};

/// An operation that requires a single-variable event received a wider one.
struct not_singleton : error {
    using error::error;
};

/// Root finding failed: the target function has no root in the search range.
struct no_root : error {
    using error::error;
};

/// A numeric parameter is outside the range where the requested bound holds.
struct out_of_range_error : error {
    using error::error;
};

/// Block size is below the threshold required by the transversal bounds.
struct subcritical_block_size : out_of_range_error {
    using out_of_range_error::out_of_range_error;
};

/// A color appears too often for the Latin-transversal bounds to apply.
struct supercritical_colors : out_of_range_error {
    using out_of_range_error::out_of_range_error;
};

/// A resampling step was requested for an event that does not currently hold.
struct event_not_true : error {
    using error::error;
};

/// A randomized search gave up after its restart cap.
struct restarts_exhausted : error {
    using error::error;
};

} // namespace lll
