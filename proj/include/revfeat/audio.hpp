#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace revfeat {

/// Multichannel sampled waveform. Samples are full-scale +-1.0, one vector
/// per channel, all channels equally long.
struct AudioClip {
    std::vector<std::vector<double>> samples;
    int sample_rate = 0;

    AudioClip() = default;
    AudioClip(std::vector<std::vector<double>> s, int rate)
        : samples(std::move(s)), sample_rate(rate) {
        validate();
    }

    static AudioClip mono(std::vector<double> s, int rate) {
        AudioClip c;
        c.samples.push_back(std::move(s));
        c.sample_rate = rate;
        c.validate();
        return c;
    }

    std::size_t channels() const { return samples.size(); }

    std::size_t length() const { return samples.empty() ? 0 : samples.front().size(); }

    std::span<const double> channel(std::size_t c) const {
        if (c >= samples.size()) throw std::invalid_argument("AudioClip: channel out of range");
        return samples[c];
    }

    void validate() const {
        if (sample_rate <= 0) throw std::invalid_argument("AudioClip: sample_rate must be positive");
        for (const auto& ch : samples) {
            if (ch.size() != length()) throw std::invalid_argument("AudioClip: channels differ in length");
        }
    }
};

}  // namespace revfeat
