#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "revfeat/audio.hpp"
#include "revfeat/events.hpp"
#include "revfeat/features.hpp"

namespace revfeat {

enum class WavEncoding { float32, pcm16 };

/// RIFF/WAVE reader for integer PCM (16/24/32-bit), 32-bit float, and the
/// extensible wrappers around both; samples scaled into [-1, 1].
AudioClip read_wav(const std::string& path);

void write_wav(const std::string& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::float32);

/// Frame-resolution event annotations: frame, class, source, azimuth,
/// elevation, distance-in-cm per row, no header. Distances are returned in
/// meters; azimuths are wrapped into (-180, 180].
std::vector<EventRecord> read_metadata_csv(const std::string& path);

void write_metadata_csv(const std::string& path, const std::vector<EventRecord>& events);

struct TensorFile {
    FeatureStack stack;
    std::string metadata_json;
};

/// Binary feature-tensor container with an 8-byte magic, little-endian header,
/// float32 payload in (channel, time, bin) order and a trailing JSON block
/// recording the extraction parameters.
void write_tensor(const std::string& path, const FeatureStack& stack,
                  const FeatureConfig& cfg = {});

TensorFile read_tensor(const std::string& path);

struct ChunkPlan {
    std::size_t start = 0;   // samples
    std::size_t length = 0;  // samples actually taken from the clip
    bool padded = false;     // true when length < chunk size and zeros fill the rest
};

/// Training chunks start every second and must fit entirely; test chunks tile
/// the clip without overlap and the final partial chunk is zero-padded.
std::vector<ChunkPlan> plan_chunks(std::size_t total_samples, int sample_rate,
                                   double chunk_seconds, bool training);

/// Copy [start, start+chunk_len) of every channel, zero-padding past the end.
AudioClip slice_chunk(const AudioClip& clip, std::size_t start, std::size_t chunk_len);

namespace detail {
void atomic_write(const std::string& path, const std::string& bytes);
}

}  // namespace revfeat
