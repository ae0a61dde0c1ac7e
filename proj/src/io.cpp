#include "revfeat/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "revfeat/augment.hpp"

namespace revfeat {

namespace {

using nlohmann::json;

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }

struct Cursor {
    const std::string& data;
    std::size_t pos = 0;
    std::string path;

    void need(std::size_t n, const char* what) const {
        if (pos + n > data.size())
            throw std::runtime_error(path + ": truncated file while reading " + what);
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos);
        pos += 2;
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos);
        pos += 4;
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    }
    std::string bytes(std::size_t n, const char* what) {
        need(n, what);
        std::string out = data.substr(pos, n);
        pos += n;
        return out;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return std::move(ss).str();
}

double decode_sample(const unsigned char* p, int bits, bool is_float) {
    if (is_float) {
        const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                                (static_cast<std::uint32_t>(p[1]) << 8) |
                                (static_cast<std::uint32_t>(p[2]) << 16) |
                                (static_cast<std::uint32_t>(p[3]) << 24);
        return static_cast<double>(std::bit_cast<float>(u));
    }
    switch (bits) {
        case 16: {
            const std::int16_t v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v -= 0x1000000;
            return v / 8388608.0;
        }
        case 32: {
            const std::int32_t v = static_cast<std::int32_t>(
                static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24));
            return v / 2147483648.0;
        }
        default:
            throw std::logic_error("unreachable sample width");
    }
}

std::string semantics_name(BinSemantics s) {
    return s == BinSemantics::time_lag ? "lag" : "mel";
}

json tensor_metadata(const FeatureStack& stack, const FeatureConfig& cfg) {
    json meta;
    meta["mode"] = feature_mode_name(stack.mode);
    meta["frame_rate"] = stack.frame_rate;
    json sem = json::array();
    for (BinSemantics s : stack.bin_semantics) sem.push_back(semantics_name(s));
    meta["bin_semantics"] = sem;
    meta["parameters"] = {
        {"sample_rate", cfg.sample_rate},
        {"window", "periodic_hann"},
        {"stft", {{"win_len", cfg.stft.win_len}, {"fft_len", cfg.stft.fft_len}, {"hop", cfg.stft.hop}}},
        {"mel",
         {{"scale", "htk_2595_log10"},
          {"n_mels", cfg.n_mels},
          {"f_min", cfg.f_min},
          {"f_max", cfg.resolved_f_max()},
          {"normalization", "peak"}}},
        {"log_floor", 1e-10},
        {"psd_epsilon", 1e-10},
        {"iv_norm_epsilon", 1e-10},
        {"stpacc",
         {{"win_len", cfg.stpacc_stft.win_len},
          {"fft_len", cfg.stpacc_stft.fft_len},
          {"hop", cfg.stpacc_stft.hop},
          {"smoothing", "hann8_unit_sum_same"},
          {"lag_pool", 4}}},
        {"wpe",
         {{"taps", cfg.wpe.taps},
          {"delay", cfg.wpe.delay},
          {"iterations", cfg.wpe.iterations},
          {"regularization", cfg.wpe.regularization},
          {"power_floor", cfg.wpe.power_floor}}},
    };
    return meta;
}

}  // namespace

AudioClip read_wav(const std::string& path) {
    const std::string data = read_file(path);
    Cursor cur{data, 0, path};
    if (cur.bytes(4, "RIFF header") != "RIFF")
        throw std::runtime_error(path + ": not a RIFF file");
    cur.u32("RIFF size");
    if (cur.bytes(4, "WAVE tag") != "WAVE")
        throw std::runtime_error(path + ": not a WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::string payload;
    bool have_data = false;

    while (cur.pos + 8 <= data.size()) {
        const std::string id = cur.bytes(4, "chunk id");
        const std::uint32_t size = cur.u32("chunk size");
        if (id == "fmt ") {
            if (size < 16) throw std::runtime_error(path + ": malformed 'fmt ' chunk");
            const std::string body = cur.bytes(size, "'fmt ' chunk");
            Cursor fmt{body, 0, path};
            format = fmt.u16("format");
            channels = fmt.u16("channels");
            rate = fmt.u32("rate");
            fmt.u32("byte rate");
            fmt.u16("block align");
            bits = fmt.u16("bits");
            if (format == 0xFFFE) {
                if (size < 40) throw std::runtime_error(path + ": malformed extensible 'fmt ' chunk");
                fmt.u16("extension size");
                fmt.u16("valid bits");
                fmt.u32("channel mask");
                format = fmt.u16("subformat");
            }
            have_fmt = true;
        } else if (id == "data") {
            payload = cur.bytes(size, "'data' chunk");
            have_data = true;
        } else {
            cur.bytes(size, "chunk body");
        }
        if (size % 2 == 1 && cur.pos < data.size()) ++cur.pos;  // chunks are word-aligned
    }
    if (!have_fmt) throw std::runtime_error(path + ": missing 'fmt ' chunk");
    if (!have_data) throw std::runtime_error(path + ": missing 'data' chunk");
    if (channels == 0 || rate == 0) throw std::runtime_error(path + ": malformed 'fmt ' chunk");

    const bool is_float = format == 3;
    if (!is_float && format != 1)
        throw std::runtime_error(path + ": unsupported encoding in 'fmt ' chunk (format tag " +
                                 std::to_string(format) + ")");
    if (is_float && bits != 32)
        throw std::runtime_error(path + ": unsupported float width in 'fmt ' chunk");
    if (!is_float && bits != 16 && bits != 24 && bits != 32)
        throw std::runtime_error(path + ": unsupported sample width in 'fmt ' chunk");

    const std::size_t bytes_per = bits / 8;
    const std::size_t stride = bytes_per * channels;
    if (payload.size() % stride != 0)
        throw std::runtime_error(path + ": truncated 'data' chunk");
    const std::size_t n_frames = payload.size() / stride;

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.samples.assign(channels, std::vector<double>(n_frames));
    const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
    for (std::size_t i = 0; i < n_frames; ++i)
        for (std::size_t c = 0; c < channels; ++c)
            clip.samples[c][i] = decode_sample(p + i * stride + c * bytes_per, bits, is_float);
    return clip;
}

void write_wav(const std::string& path, const AudioClip& clip, WavEncoding encoding) {
    clip.validate();
    const std::uint16_t channels = static_cast<std::uint16_t>(clip.channels());
    const std::uint16_t bits = encoding == WavEncoding::float32 ? 32 : 16;
    const std::uint16_t format = encoding == WavEncoding::float32 ? 3 : 1;
    const std::uint32_t stride = channels * bits / 8;
    const std::uint32_t data_size = static_cast<std::uint32_t>(clip.length() * stride);

    std::string buf;
    buf.reserve(44 + data_size);
    buf += "RIFF";
    put_u32(buf, 36 + data_size);
    buf += "WAVE";
    buf += "fmt ";
    put_u32(buf, 16);
    put_u16(buf, format);
    put_u16(buf, channels);
    put_u32(buf, static_cast<std::uint32_t>(clip.sample_rate));
    put_u32(buf, static_cast<std::uint32_t>(clip.sample_rate) * stride);
    put_u16(buf, static_cast<std::uint16_t>(stride));
    put_u16(buf, bits);
    buf += "data";
    put_u32(buf, data_size);
    for (std::size_t i = 0; i < clip.length(); ++i) {
        for (std::size_t c = 0; c < channels; ++c) {
            const double v = clip.samples[c][i];
            if (encoding == WavEncoding::float32) {
                put_f32(buf, static_cast<float>(v));
            } else {
                const double clamped = std::clamp(v, -1.0, 1.0);
                const long scaled = std::lround(clamped * 32768.0);
                put_u16(buf, static_cast<std::uint16_t>(
                                 static_cast<std::int16_t>(std::clamp(scaled, -32768L, 32767L))));
            }
        }
    }
    detail::atomic_write(path, buf);
}

std::vector<EventRecord> read_metadata_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error(path + ": cannot open file");
    std::vector<EventRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);

        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6)
            throw std::runtime_error(where + ": expected 6 comma-separated fields, got " +
                                     std::to_string(fields.size()));

        double values[6];
        for (int i = 0; i < 6; ++i) {
            std::size_t consumed = 0;
            try {
                values[i] = std::stod(fields[i], &consumed);
            } catch (const std::exception&) {
                throw std::runtime_error(where + ": field " + std::to_string(i + 1) +
                                         " is not numeric");
            }
            while (consumed < fields[i].size() &&
                   std::isspace(static_cast<unsigned char>(fields[i][consumed])))
                ++consumed;
            if (consumed != fields[i].size())
                throw std::runtime_error(where + ": field " + std::to_string(i + 1) +
                                         " is not numeric");
        }
        for (int i = 0; i < 3; ++i)
            if (values[i] != std::floor(values[i]))
                throw std::runtime_error(where + ": field " + std::to_string(i + 1) +
                                         " must be an integer");

        EventRecord r;
        r.frame = static_cast<int>(values[0]);
        r.class_id = static_cast<int>(values[1]);
        r.track_id = static_cast<int>(values[2]);
        r.azimuth = wrap_azimuth(values[3]);
        r.elevation = values[4];
        r.distance = values[5] / 100.0;
        if (r.frame < 0) throw std::runtime_error(where + ": negative frame index");
        if (r.class_id < 0 || r.class_id > 12)
            throw std::runtime_error(where + ": class id out of range 0..12");
        if (r.elevation < -90.0 || r.elevation > 90.0)
            throw std::runtime_error(where + ": elevation out of [-90, 90]");
        if (r.distance < 0.0) throw std::runtime_error(where + ": negative distance");
        out.push_back(r);
    }
    return out;
}

namespace {

std::string format_angle(double v) {
    char buf[32];
    if (v == std::floor(v))
        std::snprintf(buf, sizeof buf, "%ld", std::lround(v));
    else
        std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_metadata_csv(const std::string& path, const std::vector<EventRecord>& events) {
    std::string buf;
    for (const EventRecord& e : events) {
        buf += std::to_string(e.frame);
        buf += ',';
        buf += std::to_string(e.class_id);
        buf += ',';
        buf += std::to_string(e.track_id);
        buf += ',';
        buf += format_angle(e.azimuth);
        buf += ',';
        buf += format_angle(e.elevation);
        buf += ',';
        buf += std::to_string(std::lround(e.distance * 100.0));
        buf += '\n';
    }
    detail::atomic_write(path, buf);
}

void write_tensor(const std::string& path, const FeatureStack& stack, const FeatureConfig& cfg) {
    std::string buf;
    buf += "RVFT0001";
    const std::string mode = feature_mode_name(stack.mode);
    put_u32(buf, static_cast<std::uint32_t>(mode.size()));
    buf += mode;
    put_u32(buf, static_cast<std::uint32_t>(stack.channels));
    put_u32(buf, static_cast<std::uint32_t>(stack.frames));
    put_u32(buf, static_cast<std::uint32_t>(stack.bins));
    put_u32(buf, static_cast<std::uint32_t>(stack.channel_names.size()));
    for (const std::string& name : stack.channel_names) {
        put_u32(buf, static_cast<std::uint32_t>(name.size()));
        buf += name;
    }
    for (float v : stack.data) put_f32(buf, v);
    buf += tensor_metadata(stack, cfg).dump();
    detail::atomic_write(path, buf);
}

TensorFile read_tensor(const std::string& path) {
    const std::string data = read_file(path);
    Cursor cur{data, 0, path};
    if (cur.bytes(8, "magic") != "RVFT0001")
        throw std::runtime_error(path + ": not a feature tensor (bad magic)");

    TensorFile out;
    const std::uint32_t mode_len = cur.u32("mode tag");
    out.stack.mode = parse_feature_mode(cur.bytes(mode_len, "mode tag"));
    out.stack.channels = cur.u32("channel count");
    out.stack.frames = cur.u32("frame count");
    out.stack.bins = cur.u32("bin count");
    const std::uint32_t n_names = cur.u32("name count");
    if (n_names != out.stack.channels)
        throw std::runtime_error(path + ": channel name count does not match channel count");
    for (std::uint32_t i = 0; i < n_names; ++i) {
        const std::uint32_t len = cur.u32("name length");
        out.stack.channel_names.push_back(cur.bytes(len, "channel name"));
    }

    const std::size_t count = out.stack.channels * out.stack.frames * out.stack.bins;
    if (cur.pos + 4 * count > data.size())
        throw std::runtime_error(path + ": payload size mismatch (truncated tensor)");
    out.stack.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto* p = reinterpret_cast<const unsigned char*>(data.data() + cur.pos + 4 * i);
        const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                                (static_cast<std::uint32_t>(p[1]) << 8) |
                                (static_cast<std::uint32_t>(p[2]) << 16) |
                                (static_cast<std::uint32_t>(p[3]) << 24);
        out.stack.data[i] = std::bit_cast<float>(u);
    }
    cur.pos += 4 * count;

    out.metadata_json = data.substr(cur.pos);
    out.stack.bin_semantics.assign(out.stack.channels, BinSemantics::mel_frequency);
    if (!out.metadata_json.empty()) {
        json meta;
        try {
            meta = json::parse(out.metadata_json);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ": malformed metadata block: " + e.what());
        }
        out.stack.frame_rate = meta.value("frame_rate", 0.0);
        if (meta.contains("bin_semantics")) {
            const auto& sem = meta["bin_semantics"];
            if (sem.size() != out.stack.channels)
                throw std::runtime_error(path + ": bin_semantics length mismatch");
            for (std::size_t c = 0; c < out.stack.channels; ++c)
                out.stack.bin_semantics[c] = sem[c] == "lag" ? BinSemantics::time_lag
                                                             : BinSemantics::mel_frequency;
        }
    }
    return out;
}

std::vector<ChunkPlan> plan_chunks(std::size_t total_samples, int sample_rate, double chunk_seconds,
                                   bool training) {
    if (sample_rate <= 0 || chunk_seconds <= 0.0)
        throw std::invalid_argument("plan_chunks: bad sample rate or chunk length");
    const std::size_t chunk = static_cast<std::size_t>(std::lround(chunk_seconds * sample_rate));
    if (chunk == 0) throw std::invalid_argument("plan_chunks: chunk shorter than one sample");

    std::vector<ChunkPlan> out;
    if (training) {
        for (std::size_t start = 0; start + chunk <= total_samples;
             start += static_cast<std::size_t>(sample_rate))
            out.push_back({start, chunk, false});
    } else {
        for (std::size_t start = 0; start < total_samples; start += chunk) {
            const std::size_t len = std::min(chunk, total_samples - start);
            out.push_back({start, len, len < chunk});
        }
    }
    return out;
}

AudioClip slice_chunk(const AudioClip& clip, std::size_t start, std::size_t chunk_len) {
    clip.validate();
    if (start >= clip.length()) throw std::invalid_argument("slice_chunk: start beyond clip end");
    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.samples.assign(clip.channels(), std::vector<double>(chunk_len, 0.0));
    const std::size_t n = std::min(chunk_len, clip.length() - start);
    for (std::size_t c = 0; c < clip.channels(); ++c)
        std::copy_n(clip.samples[c].begin() + static_cast<std::ptrdiff_t>(start), n,
                    out.samples[c].begin());
    return out;
}

namespace detail {

void atomic_write(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp(target);
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(tmp.string() + ": cannot open for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) throw std::runtime_error(tmp.string() + ": write failed");
    }
    fs::rename(tmp, target);
}

}  // namespace detail

}  // namespace revfeat
