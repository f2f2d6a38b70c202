#pragma once

#include <cstdint>
#include <random>

#include "estent/box.hpp"
#include "estent/dynamics.hpp"

namespace estent {

/// Seeded generator with a portable uniform mapping, so the same seed yields
/// the same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform point in the box.
    Vec point_in(const Box& box);

private:
    std::mt19937_64 engine_;
};

/// I.i.d. uniform samples over `set`, held for `period` each, enough to cover
/// [0, horizon].
DisturbanceSignal random_disturbance(Rng& rng, const Box& set, double period,
                                     double horizon);

}  // namespace estent
