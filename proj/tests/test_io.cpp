#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "revfeat/io.hpp"

using namespace revfeat;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "revfeat_io_tests";
    fs::create_directories(dir);
    return dir;
}

std::string path_in(const std::string& name) { return (test_dir() / name).string(); }

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u24(std::string& buf, std::int32_t v) {
    const std::uint32_t u = static_cast<std::uint32_t>(v) & 0xffffff;
    buf.push_back(static_cast<char>(u & 0xff));
    buf.push_back(static_cast<char>((u >> 8) & 0xff));
    buf.push_back(static_cast<char>((u >> 16) & 0xff));
}

void dump(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

/// Minimal RIFF wrapper around a prebuilt fmt body and data payload.
std::string wav_bytes(const std::string& fmt_body, const std::string& payload) {
    std::string buf = "RIFF";
    put_u32(buf, static_cast<std::uint32_t>(4 + 8 + fmt_body.size() + 8 + payload.size()));
    buf += "WAVE";
    buf += "fmt ";
    put_u32(buf, static_cast<std::uint32_t>(fmt_body.size()));
    buf += fmt_body;
    buf += "data";
    put_u32(buf, static_cast<std::uint32_t>(payload.size()));
    buf += payload;
    return buf;
}

std::string fmt_body(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                     std::uint16_t bits) {
    std::string body;
    put_u16(body, format);
    put_u16(body, channels);
    put_u32(body, rate);
    put_u32(body, rate * channels * bits / 8);
    put_u16(body, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(body, bits);
    return body;
}

AudioClip random_clip(std::size_t channels, std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-0.9, 0.9);
    std::vector<std::vector<double>> ch(channels, std::vector<double>(n));
    for (auto& c : ch)
        for (double& v : c) v = dist(rng);
    return AudioClip{std::move(ch), 24000};
}

EventRecord rec(int frame, int cls, int track, double az, double el, double dist_m) {
    EventRecord e;
    e.frame = frame;
    e.class_id = cls;
    e.track_id = track;
    e.azimuth = az;
    e.elevation = el;
    e.distance = dist_m;
    return e;
}

FeatureStack small_stack() {
    FeatureStack s;
    s.channels = 2;
    s.frames = 3;
    s.bins = 4;
    s.mode = FeatureMode::stpacc;
    s.channel_names = {"logmel_w", "stpacc"};
    s.bin_semantics = {BinSemantics::mel_frequency, BinSemantics::time_lag};
    s.frame_rate = 160.0;
    s.data.resize(2 * 3 * 4);
    for (std::size_t i = 0; i < s.data.size(); ++i)
        s.data[i] = static_cast<float>(std::sin(0.7 * static_cast<double>(i)) * 3.0);
    return s;
}

}  // namespace

TEST_CASE("float wav round trip preserves float-precision samples") {
    const auto clip = random_clip(4, 72000, 1);
    const std::string p = path_in("roundtrip_f32.wav");
    write_wav(p, clip, WavEncoding::float32);
    const auto back = read_wav(p);
    REQUIRE(back.channels() == 4);
    REQUIRE(back.length() == 72000);
    CHECK(back.sample_rate == 24000);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t i = 0; i < back.length(); ++i)
            CHECK(back.samples[c][i] == static_cast<double>(static_cast<float>(clip.samples[c][i])));
}

TEST_CASE("pcm16 quantizes and clamps full scale") {
    AudioClip clip;
    clip.sample_rate = 24000;
    clip.samples = {{1.0, -1.0, 0.5, 0.0, 2.0, -3.0}};
    const std::string p = path_in("clamp_pcm16.wav");
    write_wav(p, clip, WavEncoding::pcm16);
    const auto back = read_wav(p);
    CHECK(back.samples[0][0] == doctest::Approx(32767.0 / 32768.0));
    CHECK(back.samples[0][1] == doctest::Approx(-1.0));
    CHECK(back.samples[0][2] == doctest::Approx(0.5));
    CHECK(back.samples[0][3] == doctest::Approx(0.0));
    CHECK(back.samples[0][4] == doctest::Approx(32767.0 / 32768.0));  // clamped
    CHECK(back.samples[0][5] == doctest::Approx(-1.0));               // clamped
}

TEST_CASE("pcm16 round trip is accurate to half a quantization step") {
    const auto clip = random_clip(2, 4800, 2);
    const std::string p = path_in("roundtrip_pcm16.wav");
    write_wav(p, clip, WavEncoding::pcm16);
    const auto back = read_wav(p);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < back.length(); ++i)
            CHECK(std::abs(back.samples[c][i] - clip.samples[c][i]) <= 0.5 / 32768.0 + 1e-12);
}

TEST_CASE("hand-built 24-bit pcm decodes with correct scaling") {
    std::string payload;
    put_u24(payload, 4194304);   // +0.5
    put_u24(payload, -8388608);  // -1.0
    put_u24(payload, 0);
    const std::string p = path_in("hand_24bit.wav");
    dump(p, wav_bytes(fmt_body(1, 1, 48000, 24), payload));
    const auto clip = read_wav(p);
    REQUIRE(clip.channels() == 1);
    REQUIRE(clip.length() == 3);
    CHECK(clip.sample_rate == 48000);
    CHECK(clip.samples[0][0] == doctest::Approx(0.5));
    CHECK(clip.samples[0][1] == doctest::Approx(-1.0));
    CHECK(clip.samples[0][2] == doctest::Approx(0.0));
}

TEST_CASE("extensible wrapper around pcm16 is accepted") {
    std::string body = fmt_body(0xFFFE, 1, 24000, 16);
    put_u16(body, 22);      // extension size
    put_u16(body, 16);      // valid bits
    put_u32(body, 0x4);     // channel mask
    put_u16(body, 1);       // subformat: pcm
    for (int i = 0; i < 14; ++i) body.push_back(static_cast<char>(i));  // rest of the GUID
    std::string payload;
    put_u16(payload, 16384);  // +0.5
    put_u16(payload, static_cast<std::uint16_t>(-16384));
    const std::string p = path_in("extensible.wav");
    dump(p, wav_bytes(body, payload));
    const auto clip = read_wav(p);
    CHECK(clip.samples[0][0] == doctest::Approx(0.5));
    CHECK(clip.samples[0][1] == doctest::Approx(-0.5));
}

TEST_CASE("unsupported wav flavours are reported clearly") {
    const std::string eight = path_in("eight_bit.wav");
    dump(eight, wav_bytes(fmt_body(1, 1, 24000, 8), std::string(4, '\x40')));
    CHECK_THROWS_WITH_AS(read_wav(eight),
                         doctest::Contains("unsupported sample width"), std::runtime_error);

    const std::string mp3 = path_in("mp3_tag.wav");
    dump(mp3, wav_bytes(fmt_body(85, 1, 24000, 16), std::string(4, '\0')));
    CHECK_THROWS_WITH_AS(read_wav(mp3), doctest::Contains("format tag 85"), std::runtime_error);

    const std::string junk = path_in("junk.wav");
    dump(junk, "JUNKJUNKJUNKJUNK");
    CHECK_THROWS_WITH_AS(read_wav(junk), doctest::Contains("not a RIFF file"), std::runtime_error);

    // 10 payload bytes cannot hold an integer number of 16-bit stereo frames
    const std::string trunc = path_in("trunc.wav");
    dump(trunc, wav_bytes(fmt_body(1, 2, 24000, 16), std::string(10, '\0')));
    CHECK_THROWS_WITH_AS(read_wav(trunc), doctest::Contains("truncated 'data'"), std::runtime_error);

    std::string no_data = "RIFF";
    put_u32(no_data, 4 + 8 + 16);
    no_data += "WAVE";
    no_data += "fmt ";
    put_u32(no_data, 16);
    no_data += fmt_body(1, 1, 24000, 16);
    const std::string p = path_in("no_data.wav");
    dump(p, no_data);
    CHECK_THROWS_WITH_AS(read_wav(p), doctest::Contains("missing 'data'"), std::runtime_error);
}

TEST_CASE("metadata csv parses frames, ids and units") {
    const std::string p = path_in("meta_basic.csv");
    dump(p, "50,1,0,-90,10,250\n12,3,1,45.5,-10.25,300\n\n7,0,2,190,0,120\n");
    const auto rows = read_metadata_csv(p);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].frame == 50);
    CHECK(rows[0].class_id == 1);
    CHECK(rows[0].track_id == 0);
    CHECK(rows[0].azimuth == doctest::Approx(-90.0));
    CHECK(rows[0].elevation == doctest::Approx(10.0));
    CHECK(rows[0].distance == doctest::Approx(2.5));
    // real-valued angles are allowed
    CHECK(rows[1].azimuth == doctest::Approx(45.5));
    CHECK(rows[1].elevation == doctest::Approx(-10.25));
    // azimuth outside the interval is wrapped
    CHECK(rows[2].azimuth == doctest::Approx(-170.0));
}

TEST_CASE("metadata csv reports malformed rows with line numbers") {
    const std::string five = path_in("meta_five.csv");
    dump(five, "1,2,3,4,5\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(five), doctest::Contains(":1:"), std::runtime_error);
    CHECK_THROWS_WITH_AS(read_metadata_csv(five), doctest::Contains("expected 6"),
                         std::runtime_error);

    const std::string text = path_in("meta_text.csv");
    dump(text, "1,2,3,4,5,6\nx,2,3,4,5,6\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(text), doctest::Contains(":2:"), std::runtime_error);

    const std::string frac = path_in("meta_frac.csv");
    dump(frac, "1.5,2,3,4,5,6\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(frac), doctest::Contains("must be an integer"),
                         std::runtime_error);

    const std::string cls = path_in("meta_class.csv");
    dump(cls, "1,13,0,0,0,100\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(cls), doctest::Contains("class id"), std::runtime_error);

    const std::string elev = path_in("meta_elev.csv");
    dump(elev, "1,5,0,0,91,100\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(elev), doctest::Contains("elevation"),
                         std::runtime_error);

    const std::string neg = path_in("meta_neg.csv");
    dump(neg, "-1,5,0,0,0,100\n");
    CHECK_THROWS_WITH_AS(read_metadata_csv(neg), doctest::Contains("negative frame"),
                         std::runtime_error);
}

TEST_CASE("empty metadata file yields no records") {
    const std::string p = path_in("meta_empty.csv");
    dump(p, "");
    CHECK(read_metadata_csv(p).empty());
    CHECK_THROWS_AS(read_metadata_csv(path_in("does_not_exist.csv")), std::runtime_error);
}

TEST_CASE("metadata csv round trip") {
    std::vector<EventRecord> events{rec(0, 1, 0, -90.0, 10.0, 2.5),
                                    rec(3, 12, 2, 45.5, -10.25, 3.0),
                                    rec(7, 0, 1, 180.0, 90.0, 0.6)};
    const std::string p = path_in("meta_roundtrip.csv");
    write_metadata_csv(p, events);
    const auto back = read_metadata_csv(p);
    REQUIRE(back.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(back[i].frame == events[i].frame);
        CHECK(back[i].class_id == events[i].class_id);
        CHECK(back[i].track_id == events[i].track_id);
        CHECK(back[i].azimuth == doctest::Approx(events[i].azimuth).epsilon(1e-6));
        CHECK(back[i].elevation == doctest::Approx(events[i].elevation).epsilon(1e-6));
        // distance survives the centimeter rounding
        CHECK(std::abs(back[i].distance - events[i].distance) <= 0.005 + 1e-12);
    }
}

TEST_CASE("tensor files round trip bit for bit") {
    const FeatureStack s = small_stack();
    const std::string p = path_in("tensor_roundtrip.rvft");
    write_tensor(p, s);
    const TensorFile back = read_tensor(p);
    CHECK(back.stack.channels == s.channels);
    CHECK(back.stack.frames == s.frames);
    CHECK(back.stack.bins == s.bins);
    CHECK(back.stack.mode == s.mode);
    CHECK(back.stack.frame_rate == doctest::Approx(s.frame_rate));
    REQUIRE(back.stack.channel_names.size() == s.channel_names.size());
    for (std::size_t i = 0; i < s.channel_names.size(); ++i)
        CHECK(back.stack.channel_names[i] == s.channel_names[i]);
    REQUIRE(back.stack.bin_semantics.size() == s.bin_semantics.size());
    for (std::size_t i = 0; i < s.bin_semantics.size(); ++i)
        CHECK(back.stack.bin_semantics[i] == s.bin_semantics[i]);
    REQUIRE(back.stack.data.size() == s.data.size());
    for (std::size_t i = 0; i < s.data.size(); ++i) CHECK(back.stack.data[i] == s.data[i]);
    // the metadata block names the extraction parameters
    CHECK(back.metadata_json.find("\"mode\"") != std::string::npos);
    CHECK(back.metadata_json.find("\"wpe\"") != std::string::npos);
    CHECK(back.metadata_json.find("\"mel\"") != std::string::npos);
    CHECK(back.metadata_json.find("periodic_hann") != std::string::npos);
}

TEST_CASE("corrupt tensor files are rejected") {
    const FeatureStack s = small_stack();
    const std::string good = path_in("tensor_good.rvft");
    write_tensor(good, s);
    std::ifstream f(good, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    const std::string p1 = path_in("tensor_bad_magic.rvft");
    dump(p1, bad_magic);
    CHECK_THROWS_WITH_AS(read_tensor(p1), doctest::Contains("bad magic"), std::runtime_error);

    // keep the 56-byte header but only half of the 96-byte float payload
    const std::string p2 = path_in("tensor_trunc.rvft");
    dump(p2, bytes.substr(0, 104));
    CHECK_THROWS_WITH_AS(read_tensor(p2), doctest::Contains("payload size mismatch"),
                         std::runtime_error);

    // a complete payload followed by garbage metadata
    const std::string p3 = path_in("tensor_badmeta.rvft");
    dump(p3, bytes.substr(0, 56 + 96) + "{not json");
    CHECK_THROWS_WITH_AS(read_tensor(p3), doctest::Contains("malformed metadata"),
                         std::runtime_error);
}

TEST_CASE("training chunks slide by one second and must fit") {
    const auto plans = plan_chunks(240000, 24000, 3.0, true);
    REQUIRE(plans.size() == 8);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        CHECK(plans[i].start == i * 24000);
        CHECK(plans[i].length == 72000);
        CHECK_FALSE(plans[i].padded);
    }
    // a clip shorter than one chunk yields nothing
    CHECK(plan_chunks(71999, 24000, 3.0, true).empty());
}

TEST_CASE("test chunks tile the clip and pad the tail") {
    const auto plans = plan_chunks(240000, 24000, 3.0, false);
    REQUIRE(plans.size() == 4);
    CHECK(plans[3].start == 216000);
    CHECK(plans[3].length == 24000);
    CHECK(plans[3].padded);
    for (int i = 0; i < 3; ++i) {
        CHECK(plans[i].length == 72000);
        CHECK_FALSE(plans[i].padded);
    }
    // an exact multiple needs no padding
    const auto exact = plan_chunks(216000, 24000, 3.0, false);
    REQUIRE(exact.size() == 3);
    for (const auto& p : exact) CHECK_FALSE(p.padded);

    CHECK_THROWS_AS(plan_chunks(240000, 0, 3.0, false), std::invalid_argument);
    CHECK_THROWS_AS(plan_chunks(240000, 24000, 0.0, false), std::invalid_argument);
}

TEST_CASE("slice_chunk copies and zero-pads") {
    const auto clip = random_clip(2, 120, 9);
    const auto out = slice_chunk(clip, 100, 50);
    REQUIRE(out.channels() == 2);
    REQUIRE(out.length() == 50);
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < 20; ++i) CHECK(out.samples[c][i] == clip.samples[c][100 + i]);
        for (std::size_t i = 20; i < 50; ++i) CHECK(out.samples[c][i] == 0.0);
    }
    CHECK_THROWS_AS(slice_chunk(clip, 120, 10), std::invalid_argument);
}

TEST_CASE("writes never leave temporary files behind") {
    for (const auto& entry : fs::directory_iterator(test_dir()))
        CHECK(entry.path().extension() != ".tmp");
}
