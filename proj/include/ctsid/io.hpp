#pragma once

#include <string>
#include <utility>

#include "ctsid/estimator.hpp"
#include "ctsid/sampled_signal.hpp"
#include "ctsid/signals.hpp"

namespace ctsid {

/// CSV with header `t,u,y`, one row per sample, 17 significant digits.
void write_dataset_csv(const std::string& path, const SampledSignal& u,
                       const SampledSignal& y);
std::pair<SampledSignal, SampledSignal> read_dataset_csv(const std::string& path);

/// Structured text: an `offset=` line, a column header, then one
/// `amp,freq_rad_s,phase_rad` row per component.
void write_multisine(const std::string& path, const Multisine& ms);
Multisine read_multisine(const std::string& path);

/// Estimation report: final theta, convergence flag, and the per-iteration
/// history.
void write_report(const std::string& path, const EstimationResult& result,
                  const std::string& estimator_name);

}  // namespace ctsid
