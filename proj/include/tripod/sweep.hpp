#pragma once

#include <utility>
#include <vector>

#include "tripod/maxwell_bloch.hpp"
#include "tripod/protocol.hpp"

namespace tripod {

/// One deterministic simulate per value; results are a pure function of
/// the SweepSpec and independent of scheduling. `max_threads` == 0 means use
/// hardware concurrency; either way results come back in value order.
/// Per-run failures are rethrown with the parameter value attached.
std::vector<std::pair<double, FieldRecord>>
run_sweep(const SweepSpec& spec, unsigned max_threads = 0);

} // namespace tripod
