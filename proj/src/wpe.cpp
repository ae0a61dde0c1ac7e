#include "revfeat/wpe.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "revfeat/threading.hpp"

namespace revfeat {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// One frequency bin: x is the length-T time series, out receives the
// dereverberated series. Filter taps predict frame t from frames
// t-delay .. t-delay-K+1 (zeros before the signal start).
void wpe_bin(const std::vector<std::complex<double>>& x, const WpeConfig& cfg,
             std::vector<std::complex<double>>& out) {
    const std::size_t T = x.size();
    const int K = cfg.taps;
    const int delay = cfg.delay;

    VectorXd lambda(T);
    for (std::size_t t = 0; t < T; ++t)
        lambda[t] = std::max(std::norm(x[t]), cfg.power_floor);

    MatrixXcd m(K, T);
    VectorXcd y(T), g(K);
    std::vector<std::complex<double>> d(x);

    for (int it = 0; it < cfg.iterations; ++it) {
        for (std::size_t t = 0; t < T; ++t) {
            const double inv_sqrt = 1.0 / std::sqrt(lambda[t]);
            y[t] = std::conj(x[t]) * inv_sqrt;
            for (int k = 0; k < K; ++k) {
                const long src = static_cast<long>(t) - delay - k;
                m(k, t) = src >= 0 ? x[static_cast<std::size_t>(src)] * inv_sqrt
                                   : std::complex<double>(0.0, 0.0);
            }
        }
        MatrixXcd r = MatrixXcd::Zero(K, K);
        r.selfadjointView<Eigen::Lower>().rankUpdate(m);
        const VectorXcd p = m * y;
        const double trace = r.diagonal().real().sum();
        if (trace <= 0.0) {
            g.setZero();  // silent bin: nothing to predict
        } else {
            double load = cfg.regularization * trace / K;
            Eigen::LLT<MatrixXcd, Eigen::Lower> llt;
            llt.compute(MatrixXcd(r + load * MatrixXcd::Identity(K, K)));
            if (llt.info() != Eigen::Success) {
                load *= 10.0;
                llt.compute(MatrixXcd(r + load * MatrixXcd::Identity(K, K)));
                if (llt.info() != Eigen::Success)
                    throw std::runtime_error("wpe: normal equations not solvable");
            }
            g = llt.solve(p);
        }
        for (std::size_t t = 0; t < T; ++t) {
            std::complex<double> pred(0.0, 0.0);
            const int k_max = std::min<long>(K, static_cast<long>(t) - delay + 1);
            for (int k = 0; k < k_max; ++k)
                pred += std::conj(g[k]) * x[t - delay - k];
            d[t] = x[t] - pred;
            lambda[t] = std::max(std::norm(d[t]), cfg.power_floor);
        }
    }
    out = std::move(d);
}

}  // namespace

ComplexSpectrogram wpe(const ComplexSpectrogram& spec, const WpeConfig& cfg) {
    cfg.validate();
    if (spec.frames <= static_cast<std::size_t>(cfg.delay + cfg.taps))
        throw std::invalid_argument("wpe: need more frames than delay + taps");
    for (const auto& v : spec.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("wpe: non-finite input");

    ComplexSpectrogram out = spec;
    parallel_for(spec.bins, [&](std::size_t f) {
        std::vector<std::complex<double>> x(spec.frames), d;
        for (std::size_t t = 0; t < spec.frames; ++t) x[t] = spec.at(t, f);
        wpe_bin(x, cfg, d);
        for (std::size_t t = 0; t < spec.frames; ++t) out.at(t, f) = d[t];
    });
    return out;
}

DirectReverbPair split_direct_reverb(const AudioClip& w_channel, const StftConfig& stft_cfg,
                                     const WpeConfig& wpe_cfg) {
    w_channel.validate();
    if (w_channel.channels() != 1)
        throw std::invalid_argument("split_direct_reverb: expected a mono clip");
    if (w_channel.length() < stft_cfg.win_len)
        throw std::invalid_argument("split_direct_reverb: clip shorter than the analysis window");

    const AudioClip d_raw = istft(wpe(stft(w_channel, stft_cfg), wpe_cfg));

    const std::size_t n = w_channel.length();
    DirectReverbPair pair;
    pair.source_len = n;
    pair.direct = AudioClip::mono(std::vector<double>(n, 0.0), w_channel.sample_rate);
    const std::size_t copy = std::min(n, d_raw.length());
    std::copy_n(d_raw.samples[0].begin(), copy, pair.direct.samples[0].begin());

    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = w_channel.samples[0][i] - pair.direct.samples[0][i];
    pair.reverberant = AudioClip::mono(std::move(r), w_channel.sample_rate);
    return pair;
}

}  // namespace revfeat
