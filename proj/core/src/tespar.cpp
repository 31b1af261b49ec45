#include "footfall/tespar.hpp"

#include <algorithm>

namespace footfall {

std::optional<Epoch> EpochScanner::push(double sample) {
    const std::size_t idx = n_;

    if (n_ == 0) {
        polarity_neg_ = sign_negative(sample);
        d_ = 1;
        prev1_ = sample;
        ++n_;
        return std::nullopt;
    }

    // extremum test at idx-1 needs s[idx-2], s[idx-1], s[idx]; it runs before
    // the crossing test because sample idx-1 still belongs to the open epoch
    if (n_ >= 2) {
        if (polarity_neg_) {
            if (prev2_ > prev1_ && prev1_ < sample) ++s_;
        } else {
            if (prev2_ < prev1_ && prev1_ > sample) ++s_;
        }
    }

    std::optional<Epoch> closed;
    if (sign_negative(sample) != sign_negative(prev1_)) {
        closed = Epoch{!polarity_neg_, d_, s_, idx};
        polarity_neg_ = sign_negative(sample);
        d_ = 1;
        s_ = 0;
    } else {
        ++d_;
    }

    prev2_ = prev1_;
    prev1_ = sample;
    ++n_;
    return closed;
}

void EpochScanner::reset() {
    n_ = 0;
    prev1_ = prev2_ = 0.0;
    polarity_neg_ = false;
    d_ = 0;
    s_ = 0;
}

std::vector<Epoch> extract_epochs(const AudioWindow& window) {
    if (window.samples.empty()) throw ParameterError("empty window");
    EpochScanner scanner;
    std::vector<Epoch> epochs;
    for (double x : window.samples)
        if (auto e = scanner.push(x)) epochs.push_back(*e);
    return epochs;
}

std::pair<int, int> code_epoch(const Epoch& e, int d_max, int s_max) {
    if (d_max < 1 || s_max < 1) throw ParameterError("d_max and s_max must be >= 1");
    const int d_bin = static_cast<int>(std::min<std::uint32_t>(
                          e.d, static_cast<std::uint32_t>(d_max))) - 1;
    const int s_bin = static_cast<int>(std::min<std::uint32_t>(
        e.s, static_cast<std::uint32_t>(s_max - 1)));
    return {d_bin, s_bin};
}

DsHistogram histogram(const std::vector<Epoch>& epochs, int d_max, int s_max) {
    DsHistogram h(d_max, s_max);
    for (const auto& e : epochs) {
        const auto [db, sb] = code_epoch(e, d_max, s_max);
        ++h.at(db, sb);
    }
    return h;
}

FeatureVector extract_fv(const AudioWindow& window, int d_max, int s_max) {
    return flatten(histogram(extract_epochs(window), d_max, s_max));
}

std::vector<DsHistogram> slice_histograms(const AudioWindow& window, int n_slices,
                                          int d_max, int s_max) {
    if (n_slices < 1) throw ParameterError("n_slices must be >= 1");
    const std::size_t len = window.samples.size();
    std::vector<DsHistogram> slices(static_cast<std::size_t>(n_slices),
                                    DsHistogram(d_max, s_max));
    const auto slice_of = [&](std::size_t close_index) {
        // boundaries at floor(k*len/n); close_index < len always
        const std::size_t k = close_index * static_cast<std::size_t>(n_slices) / len;
        return std::min<std::size_t>(k, static_cast<std::size_t>(n_slices) - 1);
    };
    for (const auto& e : extract_epochs(window)) {
        const auto [db, sb] = code_epoch(e, d_max, s_max);
        ++slices[slice_of(e.close_index)].at(db, sb);
    }
    return slices;
}

SliceRing::SliceRing(int n_slices, int d_max, int s_max)
    : slices_(static_cast<std::size_t>(n_slices), DsHistogram(d_max, s_max)),
      d_max_(d_max), s_max_(s_max) {
    if (n_slices < 1) throw ParameterError("n_slices must be >= 1");
}

FeatureVector SliceRing::accumulate(const DsHistogram& new_slice) {
    if (new_slice.d_max != d_max_ || new_slice.s_max != s_max_)
        throw ParameterError("slice dimensions do not match ring");
    slices_[head_] = new_slice;
    head_ = (head_ + 1) % slices_.size();

    DsHistogram agg(d_max_, s_max_);
    for (const auto& s : slices_)
        for (std::size_t i = 0; i < agg.counts.size(); ++i) agg.counts[i] += s.counts[i];
    return flatten(agg);
}

} // namespace footfall
