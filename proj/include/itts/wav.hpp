#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace itts {

struct Waveform {
    std::vector<float> samples;  // mono, in [-1, 1]
    int sample_rate = 22050;
};

// Half-open sample interval per token (1-based token index -> spans[index-1]).
// Intervals are nondecreasing, non-overlapping and within bounds; gaps are
// allowed (silence between tokens).
struct Alignment {
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
};

// 16-bit PCM mono only. Reading scales by 1/32768 (so -32768 -> -1.0);
// writing scales by 32767 with clamping, no dither.
Waveform read_wav(const std::string& path);
void write_wav(const Waveform& wav, const std::string& path);

// CSV with header index,start_sample,end_sample; indices 1..M contiguous.
Alignment read_alignment(const std::string& path, std::int64_t n_samples);
void write_alignment(const Alignment& alignment, const std::string& path);

void validate_alignment(const Alignment& alignment, std::int64_t n_samples);

std::pair<Waveform, Alignment> import_waveform(const std::string& wav_path,
                                               const std::string& alignment_path);

}  // namespace itts
