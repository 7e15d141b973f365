#pragma once

#include <cstdint>
#include <vector>

#include "ctsid/lti.hpp"
#include "ctsid/polynomial.hpp"
#include "ctsid/sampled_signal.hpp"

namespace ctsid {

/// Offset plus a finite sum of cosines:
///   u(t) = offset + sum_l amp_l * cos(omega_l t + phase_l).
/// Sines are expressed as cosines with phase -pi/2.
struct Multisine {
    struct Component {
        double amp = 0.0;
        double omega = 0.0;  // rad/s, positive
        double phase = 0.0;  // rad
    };

    double offset = 0.0;
    std::vector<Component> components;

    double eval(double t) const;
};

/// Checks positivity and pairwise distinctness of the component frequencies
/// and positivity of the amplitudes.
void validate(const Multisine& ms);

/// Steady-state response of a stable filter to a multisine: offset scales by
/// H(0), each component amplitude by |H(i omega)| with phase shift
/// angle(H(i omega)). Components are kept even when the response amplitude
/// underflows, so frequencies are preserved for later composition.
Multisine filter_multisine(const TransferFunction& tf, const Multisine& ms);

/// Exact term-by-term differentiation.
Multisine derivative(const Multisine& ms, int order);

struct SamplingGrid {
    struct Regular {
        double h = 0.0;
    };
    struct IrregularUniform {
        double h_lb = 0.0;
        double h_hb = 0.0;
        std::uint64_t seed = 0;
    };

    std::vector<double> times;
};

SamplingGrid generate_grid(const SamplingGrid::Regular& kind, int N, double t1);
SamplingGrid generate_grid(const SamplingGrid::IrregularUniform& kind, int N, double t1);

/// i.i.d. zero-mean Gaussian noise, deterministic given the seed.
struct NoiseModel {
    double variance = 0.0;
    std::uint64_t seed = 0;

    std::vector<double> generate(int N) const;
};

/// Derives an independent 64-bit stream seed from a master seed and two
/// indices (e.g. condition and run).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

struct Dataset {
    Multisine input;   ///< the continuous-time input, known exactly
    SampledSignal u;   ///< input sampled at the grid
    SampledSignal y;   ///< noisy output samples
    bool resonant_grid = false;  ///< some omega_l * h is a near-multiple of 2 pi
};

/// Steady-state output of the system plus sampled noise; no simulation error.
Dataset generate_dataset(const TransferFunction& system, const Multisine& input,
                         const SamplingGrid& grid, const NoiseModel& noise);

}  // namespace ctsid
