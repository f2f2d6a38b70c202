#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "estent/cover.hpp"
#include "estent/dynamics.hpp"

namespace estent {

/// Parameters shared by encoder and decoder. Neither side knows the
/// disturbance; both know the model, K and these constants.
struct EstimatorConfig {
    double alpha = 1.0;
    double epsilon = 0.0;
    double period = 1.0;  // T, time between transmissions
    double m_constant = 0.0;  // M = max(mu_bar, -alpha), or any larger value
    Box initial_set;
    double step = 1e-3;
    std::uint64_t cover_cap = kDefaultCoverCap;

    /// Throws ConfigError: alpha > 0, epsilon >= 0, T > 0, M >= -alpha,
    /// step divides T.
    void validate() const;
    /// exp(-alpha T)
    double contraction() const;
    /// exp(-(M + alpha) T): ratio of cover radius to region radius.
    double cover_ratio() const;
    /// Initial radius d_0: max half-width of K.
    double initial_radius() const { return initial_set.max_half_width(); }
};

EstimatorConfig make_estimator_config(double alpha, double epsilon, double period,
                                      double mu_bar, const Box& initial_set,
                                      double step = 1e-3);

/// State after frame k has been processed (identical on both channel ends).
struct EstimatorState {
    std::uint32_t k = 0;
    double delta = 0.0;   // radius of region
    Box region;           // K_k = B(nu_{k-1}(T), delta_k); hull of K for k = 0
    Cover cover;          // delta_k exp(-(M + alpha) T)-cover of the region
    Vec x_star;           // chosen cover point
    Vec nu_end;           // nu_k(T), centre of the next region
};

/// What the encoder sends for one frame, plus local bookkeeping.
struct TransmissionRecord {
    std::uint32_t k = 0;
    std::uint64_t index = 0;
    std::uint64_t cardinality = 0;  // N_k, derived on both ends, never sent
    int bits = 0;
};

/// 0 for N = 1, else ceil(log2 N).
int bits_for_frame(std::uint64_t cardinality);

/// Region radius and cover for frame 0 (prev empty) or the frame after prev.
struct FrameGeometry {
    std::uint32_t k = 0;
    double delta = 0.0;
    Box region;
    Cover cover;
};

FrameGeometry frame_geometry(const EstimatorConfig& config,
                             const std::optional<EstimatorState>& prev);

struct EncoderOutput {
    EstimatorState state;
    TransmissionRecord record;
    double quantization_error = 0.0;
    /// False when the measurement fell outside K_k; the cover point nearest to
    /// it is still sent.
    bool contained = true;
};

EncoderOutput encoder_init(const SystemModel& model, const EstimatorConfig& config,
                           const Vec& measurement);
EncoderOutput encoder_step(const SystemModel& model, const EstimatorState& state,
                           const EstimatorConfig& config, const Vec& measurement);

struct DecoderOutput {
    EstimatorState state;
    /// nu_k on [0, T] at integrator resolution (the disturbance-free flow from x*).
    Trajectory nu;
};

/// prev empty means frame 0. Throws CorruptMessage on frame or index mismatch.
DecoderOutput decoder_step(const SystemModel& model,
                           const std::optional<EstimatorState>& prev,
                           const EstimatorConfig& config, std::uint32_t k,
                           std::uint64_t index);

// Wire format: 12 bytes, little-endian, k (u32) then index (u64).
inline constexpr std::size_t kWireRecordSize = 12;
using WireRecord = std::array<std::byte, kWireRecordSize>;

struct WireMessage {
    std::uint32_t k = 0;
    std::uint64_t index = 0;
    bool operator==(const WireMessage&) const = default;
};

WireRecord encode_wire(const WireMessage& message);
WireMessage decode_wire(std::span<const std::byte> bytes);

class Encoder {
public:
    Encoder(const SystemModel& model, EstimatorConfig config);
    /// Quantises the measurement x(kT) of the next frame.
    EncoderOutput push(const Vec& measurement);
    const std::optional<EstimatorState>& state() const { return state_; }

private:
    const SystemModel& model_;
    EstimatorConfig config_;
    std::optional<EstimatorState> state_;
};

class Decoder {
public:
    Decoder(const SystemModel& model, EstimatorConfig config);
    /// Reconstructs nu_k from one wire record.
    DecoderOutput receive(std::span<const std::byte> bytes);
    const std::optional<EstimatorState>& state() const { return state_; }

private:
    const SystemModel& model_;
    EstimatorConfig config_;
    std::optional<EstimatorState> state_;
};

/// exp(-alpha t) d0 + 2 eps (abar_k + 1), abar_k = (1 - a^k) / (1 - a),
/// a = exp(-alpha T). Requires kT <= t < (k + 1)T.
double tracking_bound(const EstimatorConfig& config, double d0, std::uint32_t k, double t);
/// Limit of the error bound: 2 eps (1 / (1 - exp(-alpha T)) + 1).
double asymptotic_bound(const EstimatorConfig& config);
/// delta_k by iterating delta_k = a delta_{k-1} + 2 eps from delta_0.
double delta_recursive(const EstimatorConfig& config, double delta0, std::uint32_t k);
/// a^k delta_0 + 2 eps (1 - a^k) / (1 - a).
double delta_closed_form(const EstimatorConfig& config, double delta0, std::uint32_t k);

/// Plant + encoder + channel + decoder, frame by frame.
struct FrameLog {
    std::uint32_t k = 0;
    double t_start = 0.0;
    double delta = 0.0;
    std::uint64_t cardinality = 0;
    int bits = 0;
    std::uint64_t cumulative_bits = 0;
    Vec x_star;
    double quantization_error = 0.0;
    double max_error = 0.0;        // max over grid t in [kT, (k+1)T) of |x(t) - nu(t)|
    double bound_at_start = 0.0;   // tracking_bound at t = kT
    double worst_bound_margin = 0.0;  // max over grid t of error - bound
    bool contained = true;
    bool bound_violated = false;
    bool violation() const { return !contained || bound_violated; }
};

struct RunOptions {
    std::uint32_t frames = 50;
    std::uint64_t run_id = 0;
    /// Negative means integration_tolerance(M, T).
    double tolerance = -1.0;
    bool keep_signal = false;
    /// Frames at the end compared against asymptotic_bound.
    std::uint32_t tail_frames = 10;
    /// Minimum run length for the tail check.
    std::uint32_t tail_min_frames = 50;
};

struct RunLog {
    std::uint64_t run_id = 0;
    double d0 = 0.0;
    double tolerance = 0.0;
    std::vector<FrameLog> frames;
    std::vector<std::uint8_t> channel;  // every wire record, in order
    std::vector<Trajectory> nu;         // per-frame reconstruction when kept
    std::uint64_t cumulative_bits = 0;
    std::size_t containment_violations = 0;
    std::size_t bound_violations = 0;
    /// Max frame error over the tail window; set when frames >= tail_min_frames.
    std::optional<double> tail_error;
    bool tail_ok = true;
};

/// Estimate nu(t) at a time in [0, frames T) from a kept signal.
Vec estimate_at(const RunLog& log, const EstimatorConfig& config, double t);

RunLog run_estimation(const SystemModel& model, const EstimatorConfig& config, const Vec& x0,
                      const DisturbanceSignal& d, const RunOptions& options);

}  // namespace estent
