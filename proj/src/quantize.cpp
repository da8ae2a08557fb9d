#include "sddpg/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sddpg {

QuantizedSan quantize_san(const SanParams& params, const LifConfig& cfg, int weight_max) {
    params.validate();
    cfg.validate();
    if (weight_max < 1) throw std::invalid_argument("quantize_san: weight_max must be >= 1");

    QuantizedSan q;
    q.weight_max = weight_max;
    for (int k = 0; k < params.layer_count(); ++k) {
        const Matrix& w = params.weights[k];
        double w_abs_max = 0.0;
        for (double x : w.data) w_abs_max = std::max(w_abs_max, std::abs(x));
        if (w_abs_max == 0.0)
            throw std::invalid_argument("quantize_san: all-zero weight layer " +
                                        std::to_string(k));
        const double ratio = weight_max / w_abs_max;

        IntMatrix wq(w.rows, w.cols);
        for (std::size_t i = 0; i < w.data.size(); ++i)
            wq.data[i] = static_cast<std::int32_t>(std::llround(ratio * w.data[i]));
        std::vector<std::int64_t> bq(params.biases[k].size());
        for (std::size_t i = 0; i < bq.size(); ++i)
            bq[i] = std::llround(ratio * params.biases[k][i]);
        const std::int64_t th = std::llround(ratio * cfg.v_th);
        if (th < 1)
            throw std::invalid_argument("quantize_san: threshold rounds to zero at layer " +
                                        std::to_string(k));

        q.weights.push_back(std::move(wq));
        q.biases.push_back(std::move(bq));
        q.thresholds.push_back(th);
        q.ratios.push_back(ratio);
    }
    return q;
}

Vector quantized_infer(const QuantizedSan& q, const SpikeTrain& train, const LifConfig& cfg,
                       SpikeRecord* record) {
    const int layers = q.layer_count();
    if (train.timesteps != cfg.timesteps)
        throw std::invalid_argument("quantized_infer: spike train length mismatch");
    if (train.channels != q.input_size())
        throw std::invalid_argument("quantized_infer: spike train channel mismatch");

    std::vector<Vector> current(layers), voltage(layers);
    std::vector<SpikeVector> spikes(layers);
    for (int k = 0; k < layers; ++k) {
        current[k].assign(q.weights[k].rows, 0.0);
        voltage[k].assign(q.weights[k].rows, 0.0);
        spikes[k].assign(q.weights[k].rows, 0);
    }
    Vector count(q.output_size(), 0.0);
    if (record) record->assign(cfg.timesteps, {});

    for (int t = 0; t < cfg.timesteps; ++t) {
        const std::uint8_t* in = train.step(t);
        for (int k = 0; k < layers; ++k) {
            const IntMatrix& w = q.weights[k];
            const double threshold = static_cast<double>(q.thresholds[k]);
            SpikeVector next_spikes(w.rows, 0);
            for (int i = 0; i < w.rows; ++i) {
                // integer synaptic accumulation, wide enough for any fan-in here
                std::int64_t sum = q.biases[k][i];
                const std::int32_t* wr = w.data.data() + static_cast<std::size_t>(i) * w.cols;
                for (int j = 0; j < w.cols; ++j)
                    if (in[j]) sum += wr[j];
                const double c = cfg.current_decay * current[k][i] + static_cast<double>(sum);
                const double gate = spikes[k][i] ? 0.0 : 1.0;
                const double v = cfg.voltage_decay * voltage[k][i] * gate + c;
                current[k][i] = c;
                voltage[k][i] = v;
                next_spikes[i] = v > threshold ? 1 : 0;
            }
            spikes[k] = std::move(next_spikes);
            in = spikes[k].data();
            if (record) (*record)[t].push_back(spikes[k]);
        }
        for (int i = 0; i < q.output_size(); ++i) count[i] += spikes[layers - 1][i];
    }

    Vector action(count.size());
    for (std::size_t i = 0; i < action.size(); ++i) action[i] = count[i] / cfg.timesteps;
    return action;
}

double conversion_error(const SanParams& san, const DeepActorParams& deep, const LifConfig& cfg,
                        std::span<const Vector> calibration, std::uint64_t encode_seed) {
    if (calibration.empty()) throw std::invalid_argument("conversion_error: empty calibration set");
    double total = 0.0;
    long count = 0;
    for (std::size_t i = 0; i < calibration.size(); ++i) {
        Rng rng(Rng::mix(encode_seed, i));
        const auto train = poisson_encode(calibration[i], cfg.timesteps, rng);
        const auto snn_action = san_infer(san, train, cfg);
        const auto deep_action = deep_actor_forward(deep, calibration[i]);
        for (std::size_t d = 0; d < snn_action.size(); ++d) {
            total += std::abs(snn_action[d] - deep_action[d]);
            ++count;
        }
    }
    return total / count;
}

namespace {

// Per-layer maximum post-activation over the calibration set, input included
// as "layer -1" so factors normalize activation growth layer by layer.
std::vector<double> max_activations(const DeepActorParams& deep,
                                    std::span<const Vector> calibration) {
    const int layers = deep.layer_count();
    std::vector<double> peak(layers + 1, 1e-12);
    for (const auto& state : calibration) {
        for (double x : state) peak[0] = std::max(peak[0], std::abs(x));
        Vector act = state;
        for (int k = 0; k < layers; ++k) {
            Vector next(deep.weights[k].rows);
            matvec(deep.weights[k], act.data(), next.data());
            for (int i = 0; i < deep.weights[k].rows; ++i) {
                next[i] += deep.biases[k][i];
                if (k == layers - 1)
                    next[i] = 1.0 / (1.0 + std::exp(-next[i]));
                else
                    next[i] = std::max(0.0, next[i]);
                peak[k + 1] = std::max(peak[k + 1], next[i]);
            }
            act = std::move(next);
        }
    }
    return peak;
}

SanParams scaled_copy(const DeepActorParams& deep, const std::vector<double>& factors) {
    SanParams out;
    for (int k = 0; k < deep.layer_count(); ++k) {
        Matrix w = deep.weights[k];
        for (double& x : w.data) x *= factors[k];
        Vector b = deep.biases[k];
        for (double& x : b) x *= factors[k];
        out.weights.push_back(std::move(w));
        out.biases.push_back(std::move(b));
    }
    return out;
}

}  // namespace

ConversionResult dnn_snn_convert(const DeepActorParams& deep, const LifConfig& cfg,
                                 std::span<const Vector> calibration,
                                 const ConversionConfig& conv) {
    if (calibration.empty()) throw std::invalid_argument("dnn_snn_convert: empty calibration set");
    if (conv.grid.empty()) throw std::invalid_argument("dnn_snn_convert: empty factor grid");

    const int layers = deep.layer_count();
    std::vector<double> base(layers, 1.0);
    if (conv.activation_base) {
        const auto peak = max_activations(deep, calibration);
        // Rescale so each layer's peak drive lands near the firing threshold.
        for (int k = 0; k < layers; ++k) base[k] = cfg.v_th * peak[k] / peak[k + 1];
    }

    std::vector<double> factors = base;
    ConversionResult best;
    best.params = scaled_copy(deep, factors);
    best.calibration_error =
        conversion_error(best.params, deep, cfg, calibration, conv.encode_seed);
    best.factors = factors;

    for (int sweep = 0; sweep < conv.sweeps; ++sweep) {
        for (int k = 0; k < layers; ++k) {
            for (double m : conv.grid) {
                auto trial = best.factors;
                trial[k] = base[k] * m;
                const auto params = scaled_copy(deep, trial);
                const double err =
                    conversion_error(params, deep, cfg, calibration, conv.encode_seed);
                if (err < best.calibration_error) {
                    best.calibration_error = err;
                    best.factors = trial;
                    best.params = params;
                }
            }
        }
    }
    return best;
}

}  // namespace sddpg
