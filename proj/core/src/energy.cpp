#include "footfall/energy.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace footfall {

EnergyTable load_energy_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open energy table " + path);
    EnergyTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string ref, lo, hi;
        if (!std::getline(ss, ref, ',') || !std::getline(ss, lo, ',') || !std::getline(ss, hi))
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected three columns");
        if (ref == "ref_id") continue; // header
        EnergyEntry e;
        e.ref_id = ref;
        try {
            e.pj_per_spike_min = std::stod(lo);
            e.pj_per_spike_max = std::stod(hi);
        } catch (const std::exception&) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": bad number");
        }
        if (!(e.pj_per_spike_min > 0.0) || e.pj_per_spike_max < e.pj_per_spike_min)
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": energies must be positive with min <= max");
        table.entries.push_back(std::move(e));
    }
    if (table.entries.empty()) throw FormatError(path + ": empty table");
    return table;
}

void save_energy_table(const EnergyTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f << "ref_id,pj_per_spike_min,pj_per_spike_max\n";
    char buf[64];
    for (const auto& e : table.entries) {
        std::snprintf(buf, sizeof buf, "%.17g", e.pj_per_spike_min);
        f << e.ref_id << ',' << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", e.pj_per_spike_max);
        f << buf << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

std::uint64_t ann_mac_count(const std::vector<int>& dims) {
    if (dims.size() < 2) throw ParameterError("need at least two layers");
    std::uint64_t macs = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        if (dims[l] < 0 || dims[l + 1] < 0) throw ParameterError("negative layer width");
        macs += static_cast<std::uint64_t>(dims[l]) * static_cast<std::uint64_t>(dims[l + 1]);
    }
    return macs;
}

std::uint64_t snn_add_count(const std::vector<std::uint64_t>& spikes_per_layer,
                            const std::vector<int>& dims) {
    if (dims.size() < 2) throw ParameterError("need at least two layers");
    if (spikes_per_layer.size() < dims.size() - 1)
        throw ParameterError("missing spike counts for non-output layers");
    std::uint64_t adds = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        adds += spikes_per_layer[l] * static_cast<std::uint64_t>(dims[l + 1]);
    return adds;
}

std::uint64_t snn_add_count(const SnnRunStats& stats, const std::vector<int>& dims) {
    return snn_add_count(stats.spikes_per_layer, dims);
}

std::uint64_t snn_add_count_worst_case(const std::vector<int>& dims, int n_steps) {
    if (n_steps < 0) throw ParameterError("negative step count");
    return ann_mac_count(dims) * static_cast<std::uint64_t>(n_steps);
}

std::vector<EnergyEstimate> energy_estimate(std::uint64_t n_spk, const EnergyTable& table) {
    std::vector<EnergyEstimate> out;
    out.reserve(table.entries.size());
    for (const auto& e : table.entries)
        out.push_back(EnergyEstimate{e.ref_id,
                                     static_cast<double>(n_spk) * e.pj_per_spike_min,
                                     static_cast<double>(n_spk) * e.pj_per_spike_max});
    return out;
}

} // namespace footfall
