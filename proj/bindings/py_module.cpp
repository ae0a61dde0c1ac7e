// Python bindings for the revfeat core. Audio crosses the boundary as float64
// numpy arrays — 1-D (n,) for mono, 2-D (channels, n) for multichannel — and
// feature stacks come back as float32 (channels, frames, bins) arrays.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/augment.hpp"
#include "revfeat/dsp.hpp"
#include "revfeat/events.hpp"
#include "revfeat/features.hpp"
#include "revfeat/geometry.hpp"
#include "revfeat/io.hpp"
#include "revfeat/metrics.hpp"
#include "revfeat/simulate.hpp"
#include "revfeat/wpe.hpp"

namespace py = pybind11;
using namespace revfeat;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    const double* p = a.data();
    return std::vector<double>(p, p + a.shape(0));
}

AudioClip to_clip(const DoubleArray& a, int sample_rate) {
    if (a.ndim() == 1) return AudioClip::mono(to_vector(a), sample_rate);
    if (a.ndim() != 2) throw std::invalid_argument("expected audio of shape (n,) or (channels, n)");
    const auto channels = static_cast<std::size_t>(a.shape(0));
    const auto n = static_cast<std::size_t>(a.shape(1));
    std::vector<std::vector<double>> ch(channels);
    const double* p = a.data();
    for (std::size_t c = 0; c < channels; ++c) ch[c].assign(p + c * n, p + (c + 1) * n);
    return AudioClip{std::move(ch), sample_rate};
}

py::array_t<double> from_vector(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

py::array_t<double> from_clip(const AudioClip& c) {
    const py::ssize_t channels = static_cast<py::ssize_t>(c.channels());
    const py::ssize_t n = static_cast<py::ssize_t>(c.length());
    py::array_t<double> out({channels, n});
    for (py::ssize_t i = 0; i < channels; ++i)
        std::memcpy(out.mutable_data(i, 0), c.samples[static_cast<std::size_t>(i)].data(),
                    static_cast<std::size_t>(n) * sizeof(double));
    return out;
}

py::array_t<double> from_grid(const Grid& g) {
    py::array_t<double> out({static_cast<py::ssize_t>(g.rows), static_cast<py::ssize_t>(g.cols)});
    std::memcpy(out.mutable_data(), g.v.data(), g.v.size() * sizeof(double));
    return out;
}

py::array_t<float> stack_data(const FeatureStack& s) {
    py::array_t<float> out({static_cast<py::ssize_t>(s.channels),
                            static_cast<py::ssize_t>(s.frames), static_cast<py::ssize_t>(s.bins)});
    std::memcpy(out.mutable_data(), s.data.data(), s.data.size() * sizeof(float));
    return out;
}

FeatureConfig config_for(int sample_rate) {
    FeatureConfig cfg;
    cfg.sample_rate = sample_rate;
    return cfg;
}

double metric_field(const SeldScores& s, const std::string& name) {
    if (name == "seld") return s.seld;
    if (name == "f" || name == "f_score") return s.f_score;
    if (name == "doae") return s.doae;
    if (name == "rde") return s.rde;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

PairAveraging averaging_for(bool tp_only) {
    return tp_only ? PairAveraging::tp_only : PairAveraging::all_matched;
}

}  // namespace

PYBIND11_MODULE(_revfeat, m) {
    m.doc() = "Reverberation-aware features for sound event localization with distance";

    py::class_<EventRecord>(m, "EventRecord")
        .def(py::init([](int frame, int class_id, double azimuth, double elevation,
                         double distance, int track_id) {
                 EventRecord e;
                 e.frame = frame;
                 e.class_id = class_id;
                 e.track_id = track_id;
                 e.azimuth = azimuth;
                 e.elevation = elevation;
                 e.distance = distance;
                 return e;
             }),
             py::arg("frame"), py::arg("class_id"), py::arg("azimuth"), py::arg("elevation"),
             py::arg("distance"), py::arg("track_id") = 0)
        .def_readwrite("frame", &EventRecord::frame)
        .def_readwrite("class_id", &EventRecord::class_id)
        .def_readwrite("track_id", &EventRecord::track_id)
        .def_readwrite("azimuth", &EventRecord::azimuth)
        .def_readwrite("elevation", &EventRecord::elevation)
        .def_readwrite("distance", &EventRecord::distance)
        .def("__repr__", [](const EventRecord& e) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "EventRecord(frame=%d, class_id=%d, azimuth=%.2f, elevation=%.2f, "
                          "distance=%.3f, track_id=%d)",
                          e.frame, e.class_id, e.azimuth, e.elevation, e.distance, e.track_id);
            return std::string(buf);
        });

    py::class_<SceneGeometry>(m, "SceneGeometry")
        .def(py::init([](double distance, double source_height, double mic_height, double speed) {
                 return SceneGeometry{distance, source_height, mic_height, speed};
             }),
             py::arg("distance"), py::arg("source_height"), py::arg("mic_height"),
             py::arg("speed_of_sound") = kSpeedOfSound)
        .def_readwrite("distance_d", &SceneGeometry::distance_d)
        .def_readwrite("source_height", &SceneGeometry::source_height)
        .def_readwrite("mic_height", &SceneGeometry::mic_height)
        .def_readwrite("speed_of_sound", &SceneGeometry::speed_of_sound);

    py::class_<ItdgRow>(m, "ItdgRow")
        .def_readonly("distance_m", &ItdgRow::distance_m)
        .def_readonly("source_height_m", &ItdgRow::source_height_m)
        .def_readonly("mic_height_m", &ItdgRow::mic_height_m)
        .def_readonly("direct_ms", &ItdgRow::direct_ms)
        .def_readonly("first_ref_ms", &ItdgRow::first_ref_ms)
        .def_readonly("itdg_ms", &ItdgRow::itdg_ms);

    py::class_<RirTail>(m, "RirTail")
        .def(py::init([](double start_s, double t60_s, double level, std::uint32_t seed) {
                 return RirTail{start_s, t60_s, level, seed};
             }),
             py::arg("start_s") = 0.02, py::arg("t60_s") = 0.5, py::arg("level") = 0.05,
             py::arg("seed") = 1)
        .def_readwrite("start_s", &RirTail::start_s)
        .def_readwrite("t60_s", &RirTail::t60_s)
        .def_readwrite("level", &RirTail::level)
        .def_readwrite("seed", &RirTail::seed);

    py::class_<SyntheticRIR>(m, "SyntheticRIR")
        .def_readonly("sample_rate", &SyntheticRIR::sample_rate)
        .def_readonly("direct_delay_s", &SyntheticRIR::direct_delay_s)
        .def_readonly("direct_amplitude", &SyntheticRIR::direct_amplitude)
        .def_readonly("reflection_delay_s", &SyntheticRIR::reflection_delay_s)
        .def_readonly("reflection_amplitude", &SyntheticRIR::reflection_amplitude)
        .def_property_readonly("samples",
                               [](const SyntheticRIR& r) { return from_vector(r.samples); });

    py::class_<ReflectionLag>(m, "ReflectionLag")
        .def_readonly("found", &ReflectionLag::found)
        .def_readonly("pooled_index", &ReflectionLag::pooled_index)
        .def_readonly("seconds", &ReflectionLag::seconds);

    py::class_<AcsTransform>(m, "AcsTransform")
        .def_readonly("id", &AcsTransform::id)
        .def_readonly("azimuth_deg", &AcsTransform::azimuth_deg)
        .def_readonly("elevation_flip", &AcsTransform::elevation_flip);

    py::class_<ClassScore>(m, "ClassScore")
        .def_readonly("class_id", &ClassScore::class_id)
        .def_readonly("tp", &ClassScore::tp)
        .def_readonly("fp", &ClassScore::fp)
        .def_readonly("fn", &ClassScore::fn)
        .def_readonly("matched", &ClassScore::matched)
        .def_readonly("f", &ClassScore::f)
        .def_readonly("doae", &ClassScore::doae)
        .def_readonly("rde", &ClassScore::rde)
        .def_readonly("sentinel", &ClassScore::sentinel);

    py::class_<SeldScores>(m, "SeldScores")
        .def_readonly("f_score", &SeldScores::f_score)
        .def_readonly("doae", &SeldScores::doae)
        .def_readonly("rde", &SeldScores::rde)
        .def_readonly("seld", &SeldScores::seld)
        .def_readonly("per_class", &SeldScores::per_class);

    py::class_<JackknifeEstimate>(m, "JackknifeEstimate")
        .def_readonly("point", &JackknifeEstimate::point)
        .def_readonly("pseudo_mean", &JackknifeEstimate::pseudo_mean)
        .def_readonly("low", &JackknifeEstimate::low)
        .def_readonly("high", &JackknifeEstimate::high);

    py::class_<FeatureStack>(m, "FeatureStack")
        .def_property_readonly("data", &stack_data)
        .def_readonly("channels", &FeatureStack::channels)
        .def_readonly("frames", &FeatureStack::frames)
        .def_readonly("bins", &FeatureStack::bins)
        .def_readonly("channel_names", &FeatureStack::channel_names)
        .def_readonly("frame_rate", &FeatureStack::frame_rate)
        .def_property_readonly("mode",
                               [](const FeatureStack& s) { return feature_mode_name(s.mode); });

    // Features -------------------------------------------------------------

    m.def(
        "extract",
        [](const DoubleArray& foa, int sample_rate, const std::string& mode) {
            return stack_features(to_clip(foa, sample_rate), parse_feature_mode(mode),
                                  config_for(sample_rate));
        },
        py::arg("foa"), py::arg("sample_rate"), py::arg("mode") = "none",
        "Stacked model input from a (4, n) first-order ambisonic clip.");

    m.def(
        "stpacc",
        [](const DoubleArray& x, int sample_rate) {
            const AudioClip clip = AudioClip::mono(to_vector(x), sample_rate);
            return from_grid(stpacc_features(clip)[0]);
        },
        py::arg("x"), py::arg("sample_rate") = 24000,
        "Short-term autocorrelation power, pooled to (frames, 128) lags.");

    m.def(
        "split_direct_reverb",
        [](const DoubleArray& x, int sample_rate) {
            const DirectReverbPair pair =
                split_direct_reverb(AudioClip::mono(to_vector(x), sample_rate));
            return py::make_tuple(from_vector(pair.direct.samples[0]),
                                  from_vector(pair.reverberant.samples[0]));
        },
        py::arg("x"), py::arg("sample_rate"),
        "Weighted-prediction-error split of a mono signal into (direct, reverberant).");

    // Geometry -------------------------------------------------------------

    m.attr("SPEED_OF_SOUND") = kSpeedOfSound;
    m.def("direct_delay", &direct_delay, py::arg("geometry"));
    m.def("first_reflection_delay", &first_reflection_delay, py::arg("geometry"));
    m.def("itdg", &itdg, py::arg("geometry"),
          "Initial time-delay gap (floor reflection minus direct), seconds.");
    m.def("itdg_table", &itdg_table, py::arg("distances"), py::arg("heights"),
          py::arg("speed_of_sound") = kSpeedOfSound);

    // Simulation -----------------------------------------------------------

    m.def(
        "burst_noise",
        [](double duration_s, int sample_rate, std::uint32_t seed) {
            return from_vector(burst_noise(duration_s, sample_rate, seed).samples[0]);
        },
        py::arg("duration_s"), py::arg("sample_rate"), py::arg("seed"),
        "Seeded speech stand-in: gated bursts of a dense inharmonic comb.");
    m.def(
        "make_rir",
        [](const SceneGeometry& g, double beta, const std::optional<RirTail>& tail,
           int sample_rate, std::size_t length) {
            return make_rir(g, beta, tail, sample_rate, length);
        },
        py::arg("geometry"), py::arg("beta"), py::arg("tail") = py::none(),
        py::arg("sample_rate") = 24000, py::arg("length") = 12000,
        "Two-impulse floor-reflection response with an optional decaying tail.");
    m.def(
        "spatialize",
        [](const DoubleArray& dry, int sample_rate, const SyntheticRIR& rir) {
            const AudioClip wet = spatialize(AudioClip::mono(to_vector(dry), sample_rate), rir);
            return from_vector(wet.samples[0]);
        },
        py::arg("dry"), py::arg("sample_rate"), py::arg("rir"));
    m.def(
        "true_drr",
        [](const DoubleArray& rir, int sample_rate, double split_s) {
            return true_drr(to_vector(rir), sample_rate, split_s);
        },
        py::arg("rir"), py::arg("sample_rate"), py::arg("split_s") = 0.0025);
    m.def(
        "reflection_lag",
        [](const DoubleArray& x, int sample_rate) {
            const FeatureStack st = stpacc_stack(AudioClip::mono(to_vector(x), sample_rate));
            return dominant_reflection_lag(st, 0, st.frames, sample_rate);
        },
        py::arg("x"), py::arg("sample_rate") = 24000,
        "Dominant pooled-autocorrelation lag of a mono signal over all frames.");

    // Augmentation ---------------------------------------------------------

    m.def("acs_transforms", [] {
        const auto& arr = acs_transforms();
        return std::vector<AcsTransform>(arr.begin(), arr.end());
    });
    m.def(
        "acs_audio",
        [](const DoubleArray& foa, int sample_rate, const AcsTransform& t) {
            return from_clip(acs_audio(to_clip(foa, sample_rate), t));
        },
        py::arg("foa"), py::arg("sample_rate"), py::arg("transform"));
    m.def("acs_labels", &acs_labels, py::arg("events"), py::arg("transform"));
    m.def("wrap_azimuth", &wrap_azimuth, py::arg("azimuth_deg"));

    // Metrics --------------------------------------------------------------

    m.def("angular_error", &angular_error, py::arg("az1"), py::arg("el1"), py::arg("az2"),
          py::arg("el2"), "Great-circle angle between two directions, degrees.");
    m.def("relative_distance_error", &relative_distance_error, py::arg("predicted"),
          py::arg("reference"));
    m.def(
        "score",
        [](const std::vector<EventRecord>& preds, const std::vector<EventRecord>& refs,
           bool tp_only) { return score(preds, refs, averaging_for(tp_only)); },
        py::arg("preds"), py::arg("refs"), py::arg("tp_only") = false,
        "Location-dependent detection scores with distance.");
    m.def(
        "jackknife_ci",
        [](const std::vector<std::pair<std::vector<EventRecord>, std::vector<EventRecord>>>& seqs,
           const std::string& metric, bool tp_only) {
            std::vector<SequenceData> data;
            data.reserve(seqs.size());
            for (const auto& [preds, refs] : seqs) data.push_back({preds, refs});
            return jackknife_ci(
                data, [&](const SeldScores& s) { return metric_field(s, metric); },
                averaging_for(tp_only));
        },
        py::arg("sequences"), py::arg("metric") = "seld", py::arg("tp_only") = false,
        "Leave-one-sequence-out 95% confidence interval for a metric; sequences are "
        "(predictions, references) pairs.");

    // File formats ---------------------------------------------------------

    m.def(
        "read_wav",
        [](const std::string& path) {
            const AudioClip clip = read_wav(path);
            return py::make_tuple(from_clip(clip), clip.sample_rate);
        },
        py::arg("path"), "Returns (samples with shape (channels, n), sample_rate).");
    m.def(
        "write_wav",
        [](const std::string& path, const DoubleArray& samples, int sample_rate,
           const std::string& encoding) {
            WavEncoding enc;
            if (encoding == "float32")
                enc = WavEncoding::float32;
            else if (encoding == "pcm16")
                enc = WavEncoding::pcm16;
            else
                throw std::invalid_argument("encoding must be 'float32' or 'pcm16'");
            write_wav(path, to_clip(samples, sample_rate), enc);
        },
        py::arg("path"), py::arg("samples"), py::arg("sample_rate"),
        py::arg("encoding") = "float32");
    m.def("read_metadata_csv", &read_metadata_csv, py::arg("path"));
    m.def("write_metadata_csv", &write_metadata_csv, py::arg("path"), py::arg("events"));
    m.def(
        "write_tensor",
        [](const std::string& path, const FeatureStack& stack) { write_tensor(path, stack); },
        py::arg("path"), py::arg("stack"));
    m.def(
        "read_tensor",
        [](const std::string& path) {
            TensorFile tf = read_tensor(path);
            return py::make_tuple(std::move(tf.stack), tf.metadata_json);
        },
        py::arg("path"), "Returns (stack, metadata_json).");
}
