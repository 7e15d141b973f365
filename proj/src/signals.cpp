#include "ctsid/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ctsid/errors.hpp"

namespace ctsid {

double Multisine::eval(double t) const {
    double v = offset;
    for (const auto& c : components) v += c.amp * std::cos(c.omega * t + c.phase);
    return v;
}

void validate(const Multisine& ms) {
    for (const auto& c : ms.components) {
        if (!(c.amp > 0.0)) throw Error("Multisine: amplitudes must be positive");
        if (!(c.omega > 0.0)) throw Error("Multisine: frequencies must be positive");
    }
    for (std::size_t i = 0; i < ms.components.size(); ++i)
        for (std::size_t j = i + 1; j < ms.components.size(); ++j)
            if (ms.components[i].omega == ms.components[j].omega)
                throw Error("Multisine: frequencies must be pairwise distinct");
}

Multisine filter_multisine(const TransferFunction& tf, const Multisine& ms) {
    if (!tf.stable()) throw UnstableFilter("filter_multisine: filter denominator is unstable");
    Multisine out;
    if (ms.offset != 0.0) {
        if (std::abs(tf.den().eval(0.0)) < 1e-300)
            throw PoleOnGrid("filter_multisine: pole at omega = 0");
        out.offset = freq_response(tf, 0.0).real() * ms.offset;
    }
    out.components.reserve(ms.components.size());
    for (const auto& c : ms.components) {
        const std::complex<double> H = freq_response(tf, c.omega);
        out.components.push_back({c.amp * std::abs(H), c.omega, c.phase + std::arg(H)});
    }
    return out;
}

Multisine derivative(const Multisine& ms, int order) {
    if (order < 0) throw Error("derivative: negative order");
    if (order == 0) return ms;
    Multisine out;
    out.offset = 0.0;
    out.components.reserve(ms.components.size());
    for (const auto& c : ms.components)
        out.components.push_back({c.amp * std::pow(c.omega, order), c.omega,
                                  c.phase + order * std::numbers::pi / 2.0});
    return out;
}

SamplingGrid generate_grid(const SamplingGrid::Regular& kind, int N, double t1) {
    if (N < 2) throw InvalidBounds("generate_grid: N must be at least 2");
    if (!(kind.h > 0.0)) throw InvalidBounds("generate_grid: h must be positive");
    SamplingGrid g;
    g.times.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) g.times[static_cast<std::size_t>(k)] = t1 + k * kind.h;
    return g;
}

SamplingGrid generate_grid(const SamplingGrid::IrregularUniform& kind, int N, double t1) {
    if (N < 2) throw InvalidBounds("generate_grid: N must be at least 2");
    if (!(kind.h_lb > 0.0) || kind.h_hb < kind.h_lb)
        throw InvalidBounds("generate_grid: need 0 < h_lb <= h_hb");
    SamplingGrid g;
    g.times.resize(static_cast<std::size_t>(N));
    g.times[0] = t1;
    std::mt19937_64 rng(kind.seed);
    std::uniform_real_distribution<double> gap(kind.h_lb, kind.h_hb);
    for (int k = 1; k < N; ++k)
        g.times[static_cast<std::size_t>(k)] = g.times[static_cast<std::size_t>(k) - 1] + gap(rng);
    return g;
}

std::vector<double> NoiseModel::generate(int N) const {
    std::vector<double> v(static_cast<std::size_t>(N), 0.0);
    if (variance < 0.0) throw Error("NoiseModel: negative variance");
    if (variance == 0.0) return v;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    for (auto& x : v) x = dist(rng);
    return v;
}

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(master ^ mix64(a)) ^ mix64(b ^ 0xda3e39cb94b95bdbULL));
}

Dataset generate_dataset(const TransferFunction& system, const Multisine& input,
                         const SamplingGrid& grid, const NoiseModel& noise) {
    validate(input);
    if (!system.stable()) throw UnstableFilter("generate_dataset: system is unstable");
    if (grid.times.size() < 2) throw InvalidBounds("generate_dataset: grid too short");

    const Multisine x = filter_multisine(system, input);
    const int N = static_cast<int>(grid.times.size());
    const std::vector<double> v = noise.generate(N);

    Dataset ds;
    ds.input = input;
    ds.u.times = grid.times;
    ds.y.times = grid.times;
    ds.u.values.resize(grid.times.size());
    ds.y.values.resize(grid.times.size());
    for (int k = 0; k < N; ++k) {
        const double t = grid.times[static_cast<std::size_t>(k)];
        ds.u.values[static_cast<std::size_t>(k)] = input.eval(t);
        ds.y.values[static_cast<std::size_t>(k)] =
            x.eval(t) + v[static_cast<std::size_t>(k)];
    }

    // Sampled multisines on resonant regular grids are non-informative; warn
    // instead of failing.
    bool regular = true;
    const double h0 = grid.times[1] - grid.times[0];
    for (std::size_t k = 1; k + 1 < grid.times.size(); ++k)
        if (std::abs(grid.times[k + 1] - grid.times[k] - h0) > 1e-12 * std::max(1.0, h0))
            regular = false;
    if (regular)
        for (const auto& c : input.components)
            if (std::abs(std::sin(c.omega * h0 / 2.0)) < 1e-6) ds.resonant_grid = true;

    return ds;
}

}  // namespace ctsid
