#pragma once

#include <string>

#include "sddpg/baselines.hpp"
#include "sddpg/critic.hpp"
#include "sddpg/ddpg.hpp"
#include "sddpg/quantize.hpp"
#include "sddpg/san.hpp"

namespace sddpg {

// Shared model file format (text, versioned header). Floats are written as
// C99 hex literals so every value round-trips bit exactly.
enum class ModelKind { san, critic, deep, quantized };

struct ModelFile {
    ModelKind kind = ModelKind::san;
    LifConfig lif;          // san + quantized
    SanParams san;          // kind == san
    CriticParams critic;    // kind == critic
    DeepActorParams deep;   // kind == deep
    QuantizedSan quantized; // kind == quantized
};

std::string serialize_model(const ModelFile& m);
ModelFile parse_model(const std::string& text);
void save_model(const ModelFile& m, const std::string& path);
ModelFile load_model(const std::string& path);

// Convenience wrappers.
void save_san(const SanParams& p, const LifConfig& cfg, const std::string& path);
void save_critic(const CriticParams& p, const std::string& path);
void save_deep(const DeepActorParams& p, const std::string& path);
void save_quantized(const QuantizedSan& q, const LifConfig& cfg, const std::string& path);

// Full training-state checkpoint (binary, versioned): networks, targets,
// optimizer moments, replay buffer, rng words and counters. Resuming with
// the same config and worlds reproduces the uninterrupted run bit for bit.
void save_checkpoint(const TrainState& st, const std::string& path);
TrainState load_checkpoint(const std::string& path);

}  // namespace sddpg
