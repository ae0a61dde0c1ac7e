#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "revfeat/wpe.hpp"

using namespace revfeat;

namespace {

ComplexSpectrogram make_spec(std::size_t frames, std::size_t bins, unsigned seed) {
    ComplexSpectrogram s;
    s.frames = frames;
    s.bins = bins;
    s.sample_rate = 24000;
    s.values.resize(frames * bins);
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (auto& v : s.values) v = {dist(rng), dist(rng)};
    return s;
}

double total_power(const ComplexSpectrogram& s) {
    double e = 0.0;
    for (const auto& v : s.values) e += std::norm(v);
    return e;
}

AudioClip random_mono(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return AudioClip::mono(std::move(x), 24000);
}

}  // namespace

TEST_CASE("wpe config validation") {
    CHECK_THROWS_AS((WpeConfig{0, 5, 5, 1e-6, 1e-10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WpeConfig{10, 0, 5, 1e-6, 1e-10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WpeConfig{10, 5, 0, 1e-6, 1e-10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WpeConfig{10, 5, 5, -1.0, 1e-10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((WpeConfig{10, 5, 5, 1e-6, 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((WpeConfig{}.validate()));
}

TEST_CASE("wpe needs enough frames for its filter") {
    auto s = make_spec(65, 3, 1);  // delay 5 + taps 60 leaves nothing to predict
    CHECK_THROWS_AS(wpe(s), std::invalid_argument);
    auto tiny = make_spec(20, 3, 2);
    CHECK_NOTHROW(wpe(tiny, WpeConfig{10, 5, 1, 1e-6, 1e-10}));
}

TEST_CASE("wpe rejects non-finite input") {
    auto s = make_spec(30, 2, 3);
    s.at(4, 1) = {std::nan(""), 0.0};
    CHECK_THROWS_AS(wpe(s, WpeConfig{4, 2, 1, 1e-6, 1e-10}), std::invalid_argument);
}

TEST_CASE("silence passes through as silence") {
    ComplexSpectrogram s;
    s.frames = 80;
    s.bins = 3;
    s.sample_rate = 24000;
    s.values.assign(s.frames * s.bins, {0.0, 0.0});
    const auto out = wpe(s, WpeConfig{10, 2, 3, 1e-6, 1e-10});
    REQUIRE(out.values.size() == s.values.size());
    for (const auto& v : out.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("white frames are nearly unpredictable") {
    // Independent frames have no linear structure across time, so the
    // prediction should remove only a small in-sample fraction of the power.
    auto s = make_spec(1500, 5, 7);
    const double before = total_power(s);
    const auto out = wpe(s, WpeConfig{8, 2, 3, 1e-6, 1e-10});
    const double after = total_power(out);
    CHECK(after > 0.9 * before);
    CHECK(after < 1.05 * before);
}

TEST_CASE("wpe output scales linearly with input gain") {
    auto s = make_spec(120, 4, 11);
    auto scaled = s;
    const double alpha = 2.5;
    for (auto& v : scaled.values) v *= alpha;
    const WpeConfig cfg{10, 3, 3, 1e-6, 1e-10};
    const auto a = wpe(s, cfg);
    const auto b = wpe(scaled, cfg);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double denom = std::max(std::abs(alpha * a.values[i]), 1e-9);
        max_rel = std::max(max_rel, std::abs(b.values[i] - alpha * a.values[i]) / denom);
    }
    CHECK(max_rel < 1e-6);
}

TEST_CASE("frequency bins are processed independently") {
    auto s = make_spec(100, 4, 13);
    auto permuted = s;
    // swap bins 1 and 3 in every frame
    for (std::size_t t = 0; t < s.frames; ++t) std::swap(permuted.at(t, 1), permuted.at(t, 3));
    const WpeConfig cfg{8, 2, 2, 1e-6, 1e-10};
    const auto a = wpe(s, cfg);
    const auto b = wpe(permuted, cfg);
    for (std::size_t t = 0; t < s.frames; ++t) {
        CHECK(a.at(t, 1) == b.at(t, 3));
        CHECK(a.at(t, 3) == b.at(t, 1));
        CHECK(a.at(t, 0) == b.at(t, 0));
    }
}

TEST_CASE("wpe is deterministic and independent of worker count") {
    auto s = make_spec(150, 6, 17);
    const WpeConfig cfg{10, 3, 2, 1e-6, 1e-10};
    const auto a = wpe(s, cfg);
    const auto b = wpe(s, cfg);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);

    setenv("REVFEAT_THREADS", "1", 1);
    const auto serial = wpe(s, cfg);
    setenv("REVFEAT_THREADS", "3", 1);
    const auto threaded = wpe(s, cfg);
    unsetenv("REVFEAT_THREADS");
    for (std::size_t i = 0; i < serial.values.size(); ++i)
        CHECK(serial.values[i] == threaded.values[i]);
}

TEST_CASE("split keeps the additive decomposition exact") {
    const auto clip = random_mono(24000, 23);
    const auto pair = split_direct_reverb(clip);
    REQUIRE(pair.direct.length() == clip.length());
    REQUIRE(pair.reverberant.length() == clip.length());
    double max_err = 0.0;
    for (std::size_t i = 0; i < clip.length(); ++i) {
        const double sum = pair.direct.samples[0][i] + pair.reverberant.samples[0][i];
        max_err = std::max(max_err, std::abs(sum - clip.samples[0][i]));
    }
    CHECK(max_err < 1e-12);
}

TEST_CASE("split rejects bad input") {
    std::vector<std::vector<double>> two(2, std::vector<double>(24000, 0.1));
    AudioClip stereo{std::move(two), 24000};
    CHECK_THROWS_AS(split_direct_reverb(stereo), std::invalid_argument);
    CHECK_THROWS_AS(split_direct_reverb(AudioClip::mono(std::vector<double>(100, 0.1), 24000)),
                    std::invalid_argument);
}

TEST_CASE("a sparse periodic train is highly predictable") {
    // X(t, f) = 1 when t % 20 == 0. With the filter window covering lag 20
    // the pulse at t is an exact linear function of the pulse at t - 20, so
    // nearly all the power should be removed once the history is warm. The
    // power floor is raised so that exactly-zero frames get a finite weight.
    ComplexSpectrogram s;
    s.frames = 400;
    s.bins = 3;
    s.sample_rate = 24000;
    s.values.assign(s.frames * s.bins, {0.0, 0.0});
    for (std::size_t t = 0; t < s.frames; t += 20)
        for (std::size_t f = 0; f < s.bins; ++f) s.at(t, f) = {1.0, 0.0};
    const auto out = wpe(s, WpeConfig{25, 2, 5, 1e-6, 1e-2});
    // Measure residual power on pulse frames after warmup.
    double in_e = 0.0, out_e = 0.0;
    for (std::size_t t = 100; t < s.frames; ++t)
        for (std::size_t f = 0; f < s.bins; ++f) {
            in_e += std::norm(s.at(t, f));
            out_e += std::norm(out.at(t, f));
        }
    CHECK(out_e < 0.25 * in_e);
}
