#pragma once

#include <vector>

#include "types.hpp"

namespace sqdyn {

// Continuous argument of a complex sequence: arg of each sample unwound
// against its predecessor with jump threshold pi. The first entry uses the
// principal argument.
std::vector<double> unwound_argument(const std::vector<Complex>& samples);

// Half-argument sequence arg/2 per sample, continuation started at the first
// sample. Throws zero_crossing when a sample magnitude drops below 1e-13.
std::vector<double> phase_continue(const std::vector<Complex>& samples);

} // namespace sqdyn
