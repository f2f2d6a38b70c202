#include "estent/random.hpp"

#include <cmath>

#include "estent/errors.hpp"

namespace estent {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    // top 53 bits -> [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Vec Rng::point_in(const Box& box) {
    Vec p(box.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double w = box.half_widths()[i];
        p[i] = box.center()[i] + uniform(-w, w);
    }
    return p;
}

DisturbanceSignal random_disturbance(Rng& rng, const Box& set, double period,
                                     double horizon) {
    if (!(period > 0.0) || !(horizon >= 0.0)) {
        throw ConfigError("random_disturbance: period must be positive");
    }
    const auto count = static_cast<std::size_t>(std::ceil(horizon / period - 1e-9)) + 1;
    std::vector<Vec> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        samples.push_back(rng.point_in(set));
    }
    return {static_cast<int>(set.dim()), period, std::move(samples)};
}

}  // namespace estent
