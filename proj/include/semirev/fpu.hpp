#pragma once

namespace semirev {

// Enables flush-to-zero / denormals-are-zero for the calling thread.  The
// evolved states carry exponentially small tails across most of the grid;
// subnormal arithmetic on them costs two orders of magnitude in throughput
// and contributes nothing above 1e-300.
void flush_subnormals_to_zero();

}  // namespace semirev
