#include "phase.hpp"

#include <cmath>

#include "errors.hpp"

namespace sqdyn {

std::vector<double> unwound_argument(const std::vector<Complex>& samples) {
    std::vector<double> args;
    args.reserve(samples.size());
    double acc = 0.0, prev_raw = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double raw = std::arg(samples[i]);
        if (i == 0) {
            acc = raw;
        } else {
            double delta = raw - prev_raw;
            while (delta > M_PI) delta -= 2.0 * M_PI;
            while (delta < -M_PI) delta += 2.0 * M_PI;
            acc += delta;
        }
        prev_raw = raw;
        args.push_back(acc);
    }
    return args;
}

std::vector<double> phase_continue(const std::vector<Complex>& samples) {
    for (const auto& s : samples)
        if (std::abs(s) < 1e-13)
            throw Error(errc::zero_crossing, "phase_continue: sample magnitude below 1e-13");
    auto args = unwound_argument(samples);
    for (auto& a : args) a *= 0.5;
    return args;
}

} // namespace sqdyn
