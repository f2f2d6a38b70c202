#include "estent/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "estent/errors.hpp"

namespace estent {

void EstimatorConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("estimator: alpha must be positive");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("estimator: epsilon must be non-negative");
    }
    if (!(period > 0.0)) {
        throw ConfigError("estimator: transmission period T must be positive");
    }
    if (!(m_constant >= -alpha) || !std::isfinite(m_constant)) {
        throw ConfigError("estimator: M must satisfy M >= -alpha");
    }
    if (initial_set.dim() == 0 || !(initial_radius() > 0.0)) {
        throw ConfigError("estimator: K must have positive extent");
    }
    step_count(period, step);
}

double EstimatorConfig::contraction() const { return std::exp(-alpha * period); }

double EstimatorConfig::cover_ratio() const {
    return std::exp(-(m_constant + alpha) * period);
}

EstimatorConfig make_estimator_config(double alpha, double epsilon, double period,
                                      double mu_bar, const Box& initial_set, double step) {
    EstimatorConfig config;
    config.alpha = alpha;
    config.epsilon = epsilon;
    config.period = period;
    config.m_constant = std::max(mu_bar, -alpha);
    config.initial_set = initial_set;
    config.step = step;
    config.validate();
    return config;
}

int bits_for_frame(std::uint64_t cardinality) {
    if (cardinality < 1) {
        throw ConfigError("bits_for_frame: cardinality must be at least 1");
    }
    if (cardinality == 1) {
        return 0;
    }
    return static_cast<int>(std::bit_width(cardinality - 1));
}

FrameGeometry frame_geometry(const EstimatorConfig& config,
                             const std::optional<EstimatorState>& prev) {
    std::uint32_t k = 0;
    double delta = config.initial_radius();
    Box region;
    if (!prev) {
        region = config.initial_set.hypercube_hull();
    } else {
        k = prev->k + 1;
        delta = config.contraction() * prev->delta + 2.0 * config.epsilon;
        region = Box::ball(prev->nu_end, delta);
    }
    Cover cover = grid_cover(region, delta * config.cover_ratio(), config.cover_cap);
    return {k, delta, std::move(region), std::move(cover)};
}

namespace {

Trajectory nominal_flow(const SystemModel& model, const EstimatorConfig& config,
                        const Vec& start) {
    return integrate(model, start, DisturbanceSignal::zero(model.dist_dim()), config.period,
                     config.step);
}

EstimatorState make_state(FrameGeometry g, Vec x_star, Vec nu_end) {
    return {g.k, g.delta, std::move(g.region), std::move(g.cover), std::move(x_star),
            std::move(nu_end)};
}

EncoderOutput encode(const SystemModel& model, const EstimatorConfig& config,
                     FrameGeometry g, const Vec& measurement) {
    if (measurement.size() != model.state_dim()) {
        throw ConfigError("encoder: measurement dimension mismatch");
    }
    const bool contained = g.region.contains(measurement);
    const NearestPoint nearest = g.cover.nearest(measurement);
    const TransmissionRecord record{g.k, nearest.index, g.cover.size(),
                                    bits_for_frame(g.cover.size())};
    Vec x_star = g.cover.point(nearest.index);
    Vec nu_end = nominal_flow(model, config, x_star).final_state();
    return {make_state(std::move(g), std::move(x_star), std::move(nu_end)), record,
            nearest.distance, contained};
}

}  // namespace

EncoderOutput encoder_init(const SystemModel& model, const EstimatorConfig& config,
                           const Vec& measurement) {
    config.validate();
    if (!config.initial_set.contains(measurement)) {
        throw ConfigError("encoder_init: initial measurement lies outside K");
    }
    return encode(model, config, frame_geometry(config, std::nullopt), measurement);
}

EncoderOutput encoder_step(const SystemModel& model, const EstimatorState& state,
                           const EstimatorConfig& config, const Vec& measurement) {
    return encode(model, config, frame_geometry(config, state), measurement);
}

DecoderOutput decoder_step(const SystemModel& model, const std::optional<EstimatorState>& prev,
                           const EstimatorConfig& config, std::uint32_t k,
                           std::uint64_t index) {
    FrameGeometry g = frame_geometry(config, prev);
    if (k != g.k) {
        throw CorruptMessage("decoder expected frame " + std::to_string(g.k) + ", got " +
                             std::to_string(k));
    }
    if (index >= g.cover.size()) {
        throw CorruptMessage("cover index " + std::to_string(index) + " out of range for N=" +
                             std::to_string(g.cover.size()));
    }
    Vec x_star = g.cover.point(index);
    Trajectory nu = nominal_flow(model, config, x_star);
    Vec nu_end = nu.final_state();
    return {make_state(std::move(g), std::move(x_star), std::move(nu_end)), std::move(nu)};
}

WireRecord encode_wire(const WireMessage& message) {
    WireRecord out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = static_cast<std::byte>((message.k >> (8 * i)) & 0xFFu);
    }
    for (std::size_t i = 0; i < 8; ++i) {
        out[4 + i] = static_cast<std::byte>((message.index >> (8 * i)) & 0xFFu);
    }
    return out;
}

WireMessage decode_wire(std::span<const std::byte> bytes) {
    if (bytes.size() != kWireRecordSize) {
        throw CorruptMessage("wire record must be 12 bytes, got " +
                             std::to_string(bytes.size()));
    }
    WireMessage m;
    for (std::size_t i = 0; i < 4; ++i) {
        m.k |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    }
    for (std::size_t i = 0; i < 8; ++i) {
        m.index |= static_cast<std::uint64_t>(bytes[4 + i]) << (8 * i);
    }
    return m;
}

Encoder::Encoder(const SystemModel& model, EstimatorConfig config)
    : model_(model), config_(std::move(config)) {
    config_.validate();
}

EncoderOutput Encoder::push(const Vec& measurement) {
    EncoderOutput out = state_ ? encoder_step(model_, *state_, config_, measurement)
                               : encoder_init(model_, config_, measurement);
    state_ = out.state;
    return out;
}

Decoder::Decoder(const SystemModel& model, EstimatorConfig config)
    : model_(model), config_(std::move(config)) {
    config_.validate();
}

DecoderOutput Decoder::receive(std::span<const std::byte> bytes) {
    const WireMessage m = decode_wire(bytes);
    DecoderOutput out = decoder_step(model_, state_, config_, m.k, m.index);
    state_ = out.state;
    return out;
}

double tracking_bound(const EstimatorConfig& config, double d0, std::uint32_t k, double t) {
    const double start = k * config.period;
    const double slack = 1e-9 * std::max(1.0, std::abs(t));
    if (t < start - slack || t >= start + config.period - slack) {
        throw ConfigError("tracking_bound: t=" + std::to_string(t) + " outside frame " +
                          std::to_string(k));
    }
    const double a = config.contraction();
    const double abar = (1.0 - std::pow(a, k)) / (1.0 - a);
    return std::exp(-config.alpha * t) * d0 + 2.0 * config.epsilon * (abar + 1.0);
}

double asymptotic_bound(const EstimatorConfig& config) {
    return 2.0 * config.epsilon * (1.0 / (1.0 - config.contraction()) + 1.0);
}

double delta_recursive(const EstimatorConfig& config, double delta0, std::uint32_t k) {
    const double a = config.contraction();
    double delta = delta0;
    for (std::uint32_t i = 0; i < k; ++i) {
        delta = a * delta + 2.0 * config.epsilon;
    }
    return delta;
}

double delta_closed_form(const EstimatorConfig& config, double delta0, std::uint32_t k) {
    const double a = config.contraction();
    const double ak = std::pow(a, k);
    return ak * delta0 + 2.0 * config.epsilon * (1.0 - ak) / (1.0 - a);
}

Vec estimate_at(const RunLog& log, const EstimatorConfig& config, double t) {
    if (log.nu.empty()) {
        throw ConfigError("estimate_at: run was made without keep_signal");
    }
    const auto k = static_cast<std::size_t>(std::floor(t / config.period + 1e-12));
    if (t < 0.0 || k >= log.nu.size()) {
        throw ConfigError("estimate_at: t outside the simulated horizon");
    }
    const Trajectory& nu = log.nu[k];
    const double local = t - static_cast<double>(k) * config.period;
    const auto i = static_cast<std::size_t>(std::llround(local / nu.step));
    return nu.state(std::min(i, nu.size() - 1));
}

RunLog run_estimation(const SystemModel& model, const EstimatorConfig& config, const Vec& x0,
                      const DisturbanceSignal& d, const RunOptions& options) {
    config.validate();
    if (config.initial_set.dim() != model.state_dim()) {
        throw ConfigError("run_estimation: K dimension does not match the model");
    }
    if (!config.initial_set.contains(x0)) {
        throw ConfigError("run_estimation: x0 lies outside K");
    }
    d.check_within(model.disturbance_set());

    RunLog log;
    log.run_id = options.run_id;
    log.d0 = config.initial_radius();
    log.tolerance = options.tolerance >= 0.0
                        ? options.tolerance
                        : integration_tolerance(config.m_constant, config.period);

    Encoder encoder(model, config);
    Decoder decoder(model, config);
    const std::size_t steps = step_count(config.period, config.step);
    Vec plant = x0;

    for (std::uint32_t k = 0; k < options.frames; ++k) {
        const double t_start = k * config.period;
        const EncoderOutput enc = encoder.push(plant);
        const WireRecord wire = encode_wire({enc.record.k, enc.record.index});
        for (std::byte b : wire) {
            log.channel.push_back(static_cast<std::uint8_t>(b));
        }
        DecoderOutput dec = decoder.receive(wire);
        if (dec.state.x_star != enc.state.x_star || dec.state.nu_end != enc.state.nu_end) {
            throw std::logic_error("encoder and decoder reconstructions diverged");
        }

        const Trajectory x = integrate(model, plant, d, config.period, config.step, t_start);

        FrameLog row;
        row.k = k;
        row.t_start = t_start;
        row.delta = enc.state.delta;
        row.cardinality = enc.record.cardinality;
        row.bits = enc.record.bits;
        log.cumulative_bits += static_cast<std::uint64_t>(row.bits);
        row.cumulative_bits = log.cumulative_bits;
        row.x_star = enc.state.x_star;
        row.quantization_error = enc.quantization_error;
        row.contained = enc.contained;
        row.bound_at_start = tracking_bound(config, log.d0, k, t_start);
        row.worst_bound_margin = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < steps; ++i) {
            const auto col = static_cast<Eigen::Index>(i);
            const double err = (x.states.col(col) - dec.nu.states.col(col)).cwiseAbs().maxCoeff();
            const double t = t_start + static_cast<double>(i) * config.step;
            row.max_error = std::max(row.max_error, err);
            row.worst_bound_margin =
                std::max(row.worst_bound_margin, err - tracking_bound(config, log.d0, k, t));
        }
        row.bound_violated = row.worst_bound_margin > log.tolerance;
        log.containment_violations += row.contained ? 0 : 1;
        log.bound_violations += row.bound_violated ? 1 : 0;
        log.frames.push_back(std::move(row));
        if (options.keep_signal) {
            log.nu.push_back(std::move(dec.nu));
        }
        plant = x.final_state();
    }

    if (options.frames >= options.tail_min_frames && options.tail_frames > 0) {
        double tail = 0.0;
        const auto first = log.frames.size() - std::min<std::size_t>(options.tail_frames,
                                                                     log.frames.size());
        for (std::size_t i = first; i < log.frames.size(); ++i) {
            tail = std::max(tail, log.frames[i].max_error);
        }
        log.tail_error = tail;
        log.tail_ok = tail <= asymptotic_bound(config) + log.tolerance;
    }
    return log;
}

}  // namespace estent
