#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "footfall/snn.hpp"

namespace footfall {

/// Published energy-per-spike figures; a range row keeps min < max.
struct EnergyEntry {
    std::string ref_id;
    double pj_per_spike_min = 0.0;
    double pj_per_spike_max = 0.0;

    bool is_range() const { return pj_per_spike_min != pj_per_spike_max; }
};

struct EnergyTable {
    std::vector<EnergyEntry> entries;
};

/// CSV columns: ref_id,pj_per_spike_min,pj_per_spike_max.
EnergyTable load_energy_table(const std::string& path);
void save_energy_table(const EnergyTable& table, const std::string& path);

/// Sequential MAC count of the dense network: sum of dims[l]*dims[l+1].
std::uint64_t ann_mac_count(const std::vector<int>& dims);

/// Addition count of the spiking network: each spike in a non-output layer
/// costs one add per fan-out synapse.
std::uint64_t snn_add_count(const std::vector<std::uint64_t>& spikes_per_layer,
                            const std::vector<int>& dims);
std::uint64_t snn_add_count(const SnnRunStats& stats, const std::vector<int>& dims);

/// Worst case: every neuron spikes every step.
std::uint64_t snn_add_count_worst_case(const std::vector<int>& dims, int n_steps);

struct EnergyEstimate {
    std::string ref_id;
    double total_pj_min = 0.0;
    double total_pj_max = 0.0;
};

/// total = n_spk x energy/spike per table entry; range rows report both ends.
std::vector<EnergyEstimate> energy_estimate(std::uint64_t n_spk, const EnergyTable& table);

} // namespace footfall
