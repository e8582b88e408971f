#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "carbon_ledger/errors.hpp"
#include "carbon_ledger/quantities.hpp"

namespace carbon_ledger {

// Server power model for inference: P = P_cpu + P_mem * M.
struct ServerPowerModel {
    PowerQuantity cpu_power;      // P_cpu, W
    double mem_watts_per_gb = 0;  // P_mem, W/GB
    double memory_gb = 0;         // M, GB

    static ServerPowerModel make(double cpu_watts, double mem_watts_per_gb, double memory_gb) {
        if (!(mem_watts_per_gb >= 0) || !(memory_gb >= 0)) {
            throw std::invalid_argument("power model fields must be non-negative");
        }
        return ServerPowerModel{PowerQuantity::from_watts(cpu_watts), mem_watts_per_gb, memory_gb};
    }
};

// T and N of the inference energy formula. One scalar latency applies to
// prompt and completion tokens alike.
struct InferenceProfile {
    double token_latency_s = 0;  // T, seconds per token
    std::uint64_t token_count = 0;  // N

    static InferenceProfile make(double token_latency_s, std::uint64_t token_count) {
        if (!(token_latency_s > 0)) {
            throw std::invalid_argument("token latency must be positive");
        }
        return InferenceProfile{token_latency_s, token_count};
    }
};

inline PowerQuantity server_power(const ServerPowerModel& m) {
    return PowerQuantity::from_watts(m.cpu_power.watts() + m.mem_watts_per_gb * m.memory_gb);
}

// Energy_emb = P * T * N, in joules (W * s * count).
inline EnergyQuantity embodied_energy(const ServerPowerModel& m, const InferenceProfile& p) {
    const double j =
        server_power(m).watts() * p.token_latency_s * static_cast<double>(p.token_count);
    return EnergyQuantity::from_joules(j);
}

inline CarbonQuantity embodied_carbon(const EnergyQuantity& e, const CarbonIntensityValue& ci) {
    return carbon_from_energy(e, ci);
}

// One persisted development session contributing to dynamic embodied carbon.
struct EmbodiedSession {
    std::string timestamp;  // ISO-8601
    InferenceProfile profile;
    EnergyQuantity energy;
    CarbonQuantity carbon;
    std::string label;
};

struct DynamicTotals {
    EnergyQuantity energy;
    CarbonQuantity carbon;
};

// Dynamic embodied carbon is the plain component-wise sum over sessions; no
// decay or amortization.
inline DynamicTotals accumulate_dynamic(const std::vector<EmbodiedSession>& sessions) {
    DynamicTotals t;
    for (const auto& s : sessions) {
        t.energy += s.energy;
        t.carbon += s.carbon;
    }
    return t;
}

// --- presets ----------------------------------------------------------------

struct EmbodiedPreset {
    std::string name;
    ServerPowerModel power;
    double token_latency_s;
};

// Default parameter set: 350 W CPU, 0.1 W/GB over 60 GB, 0.47 s/token.
// These are rough published estimates, overridable via config or flags.
inline const EmbodiedPreset& intel_blog_2023_preset() {
    static const EmbodiedPreset preset{"intel-blog-2023", ServerPowerModel::make(350.0, 0.1, 60.0),
                                       0.47};
    return preset;
}

inline const std::vector<EmbodiedPreset>& embodied_presets() {
    static const std::vector<EmbodiedPreset> presets{intel_blog_2023_preset()};
    return presets;
}

inline const EmbodiedPreset& find_preset(std::string_view name) {
    for (const auto& p : embodied_presets()) {
        if (p.name == name) return p;
    }
    std::string known;
    for (const auto& p : embodied_presets()) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw NoMatchError("unknown power-model preset '" + std::string(name) + "' (known: " + known +
                       ")");
}

} // namespace carbon_ledger
