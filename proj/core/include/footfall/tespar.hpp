#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "footfall/audio.hpp"

namespace footfall {

/// One zero-crossing segment. d counts samples from the segment's first
/// sample up to (not including) the crossing that closed it; s counts strict
/// local maxima in positive segments and strict local minima in negative ones.
struct Epoch {
    bool positive = true;
    std::uint32_t d = 0;
    std::uint32_t s = 0;
    std::size_t close_index = 0; // sample index where the new sign appeared
};

/// D x S occurrence counts. Row-major over D then S.
struct DsHistogram {
    std::vector<std::uint32_t> counts;
    int d_max = 10;
    int s_max = 5;

    DsHistogram() : counts(static_cast<std::size_t>(d_max * s_max), 0) {}
    DsHistogram(int dmax, int smax)
        : counts(static_cast<std::size_t>(dmax * smax), 0), d_max(dmax), s_max(smax) {}

    std::uint32_t& at(int d_bin, int s_bin) {
        return counts[static_cast<std::size_t>(d_bin * s_max + s_bin)];
    }
    std::uint32_t at(int d_bin, int s_bin) const {
        return counts[static_cast<std::size_t>(d_bin * s_max + s_bin)];
    }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

/// Flattened histogram; the classifier input.
struct FeatureVector {
    std::vector<std::uint32_t> values;
    int d_max = 10;
    int s_max = 5;

    std::size_t size() const { return values.size(); }
};

/// Streaming epoch detector: push samples one at a time, closed epochs come
/// out as they latch. Keeps two samples of history so the extremum test
/// (three-sample comparator, strict both sides) can run one sample behind.
/// At most one epoch closes per sample.
class EpochScanner {
public:
    /// Feeds one sample; returns the epoch it closed, if any.
    std::optional<Epoch> push(double sample);

    /// End of stream; the trailing open segment is discarded.
    void reset();

    std::size_t samples_seen() const { return n_; }

private:
    static bool sign_negative(double x) { return x < 0.0; } // sign(0) treated positive

    std::size_t n_ = 0;  // samples consumed
    double prev1_ = 0.0; // s[n-1]
    double prev2_ = 0.0; // s[n-2]
    bool polarity_neg_ = false;
    std::uint32_t d_ = 0;
    std::uint32_t s_ = 0;
};

/// All epochs closed within the window (leading partial segment included,
/// trailing segment discarded).
std::vector<Epoch> extract_epochs(const AudioWindow& window);

/// Saturating bin mapping: d lands on [0, d_max-1] via min(d, d_max)-1,
/// s on [0, s_max-1] via min(s, s_max-1).
std::pair<int, int> code_epoch(const Epoch& e, int d_max, int s_max);

DsHistogram histogram(const std::vector<Epoch>& epochs, int d_max, int s_max);

inline FeatureVector flatten(const DsHistogram& h) {
    return FeatureVector{h.counts, h.d_max, h.s_max};
}

/// End-to-end: scan, code, histogram, flatten.
FeatureVector extract_fv(const AudioWindow& window, int d_max, int s_max);

/// Per-slice histograms of one window: slice k covers epochs whose
/// close_index falls in [floor(k*len/n), floor((k+1)*len/n)).
std::vector<DsHistogram> slice_histograms(const AudioWindow& window, int n_slices,
                                          int d_max, int s_max);

/// Ring of the most recent n_slices sub-histograms; the aggregate over the
/// ring is the feature vector of the covered span.
class SliceRing {
public:
    SliceRing(int n_slices, int d_max, int s_max);

    /// Evicts the oldest slice, inserts the new one, returns the aggregate.
    FeatureVector accumulate(const DsHistogram& new_slice);

    int n_slices() const { return static_cast<int>(slices_.size()); }

private:
    std::vector<DsHistogram> slices_;
    std::size_t head_ = 0;
    int d_max_;
    int s_max_;
};

} // namespace footfall
