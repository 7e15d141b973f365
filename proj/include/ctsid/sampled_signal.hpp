#pragma once

#include <optional>
#include <vector>

namespace ctsid {

/// Assumed intersample behaviour when a sampled signal is interpolated.
enum class Hold { ZOH, FOH };

/// Timestamp/value pairs with an optional intersample-behaviour tag.
struct SampledSignal {
    std::vector<double> times;
    std::vector<double> values;
    std::optional<Hold> hold_tag;

    std::size_t size() const { return times.size(); }
};

/// Throws unless times and values have equal length and times are strictly
/// increasing.
void validate(const SampledSignal& sig);

}  // namespace ctsid
