#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sddpg/baselines.hpp"
#include "sddpg/san.hpp"

namespace sddpg {

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int32_t> data;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
    std::int32_t& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::int32_t operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
};

// Layer-wise rescaled integer network: weights, biases and thresholds are
// integers, one rescale ratio per layer, decay factors unchanged.
struct QuantizedSan {
    std::vector<IntMatrix> weights;
    std::vector<std::vector<std::int64_t>> biases;
    std::vector<std::int64_t> thresholds;  // v_th(k) = round(r(k) * v_th)
    std::vector<double> ratios;            // r(k)
    int weight_max = 127;

    int layer_count() const { return static_cast<int>(weights.size()); }
    int input_size() const { return weights.front().cols; }
    int output_size() const { return weights.back().rows; }
};

// r(k) = weight_max / max|W(k)|; W_q = round(r W), b_q = round(r b),
// v_th_q = round(r v_th). Biases scale with the layer ratio since they enter
// the current equation like a weight from a constant input.
QuantizedSan quantize_san(const SanParams& params, const LifConfig& cfg, int weight_max = 127);

// Optional per-timestep, per-layer spike record for fidelity checks.
using SpikeRecord = std::vector<std::vector<SpikeVector>>;  // [t][k]

// Integer-weight forward pass with the same two-state dynamics. Synaptic
// sums accumulate in 64-bit integers; currents and voltages are doubles
// (exact for the dyadic decay factors), so no silent wraparound can occur.
Vector quantized_infer(const QuantizedSan& q, const SpikeTrain& train, const LifConfig& cfg,
                       SpikeRecord* record = nullptr);

struct ConversionConfig {
    // Candidate per-layer scale multipliers applied around the
    // activation-derived base factor; {1.0} alone with activation_base off
    // degenerates to a plain weight copy.
    std::vector<double> grid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0};
    bool activation_base = true;
    int sweeps = 2;
    std::uint64_t encode_seed = 0x636f6e76;
};

struct ConversionResult {
    SanParams params;
    double calibration_error = 0.0;     // mean |snn action - deep action|
    std::vector<double> factors;        // chosen per-layer scales
};

// Weight-rescaling conversion of a trained deep actor into spiking form:
// base factors from the per-layer maximum activation over the calibration
// set, then a coordinate grid search minimizing the mean action error.
ConversionResult dnn_snn_convert(const DeepActorParams& deep, const LifConfig& cfg,
                                 std::span<const Vector> calibration,
                                 const ConversionConfig& conv = {});

// Mean action error of a spiking net against the deep actor on a state set,
// with deterministic per-state encodings.
double conversion_error(const SanParams& san, const DeepActorParams& deep, const LifConfig& cfg,
                        std::span<const Vector> calibration, std::uint64_t encode_seed);

}  // namespace sddpg
