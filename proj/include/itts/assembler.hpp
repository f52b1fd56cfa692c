#pragma once

#include <map>
#include <string>
#include <vector>

#include "itts/corpus.hpp"
#include "itts/encoder.hpp"
#include "itts/policy.hpp"
#include "itts/wav.hpp"

namespace itts {

// Deterministic stand-in decoder: each token renders as a fixed-amplitude
// sinusoid whose duration follows its character count and whose frequency
// follows the first component of its encoder vector, so segment audio
// genuinely varies with the lookahead context.
struct ToySynthConfig {
    int sample_rate = 22050;
    double base_ms = 40.0;
    double per_char_ms = 25.0;
    double freq_lo_hz = 120.0;
    double freq_span_hz = 60.0;  // zero-vector z maps to 150 Hz
    double amplitude = 0.5;
    double ramp_ms = 10.0;  // linear onset/offset
};

// Frequency for a token whose z[0] is the given value: freq_lo + span *
// clamp(0.5 + 0.5 z0, 0, 1).
double toy_frequency(double z0, const ToySynthConfig& config = {});

// Duration in samples: floor((base + per_char * chars)/1000 * rate).
std::int64_t toy_duration_samples(std::size_t chars, const ToySynthConfig& config = {});

// Renders tokens 1..c consecutively; alignment is exact by construction.
std::pair<Waveform, Alignment> toy_synthesize(const PrefixEncoding& prefix,
                                              const Sentence& sentence,
                                              const ToySynthConfig& config = {});

// Overlap length: round-half-away-from-zero of crossfade_ms/1000 * rate.
std::int64_t crossfade_overlap(double crossfade_ms, int sample_rate);

// Linear complementary ramps over the overlap; outside it, samples verbatim.
Waveform crossfade_concat(const Waveform& a, const Waveform& b, double crossfade_ms);

struct AssemblySegment {
    int n = 0;
    int source_prefix_c = 0;
    std::int64_t cut_begin = 0;  // interval in the source waveform
    std::int64_t cut_end = 0;
    std::int64_t out_begin = 0;  // interval in the assembled output
    std::int64_t out_end = 0;
};

struct AssemblyResult {
    Waveform waveform;
    Alignment alignment;  // output-side spans per token
    std::vector<AssemblySegment> segments;
};

using ImportedPrefixes = std::map<int, std::pair<Waveform, Alignment>>;  // keyed by c

// For n = 1..N: take the waveform synthesized from the prefix of c(n,k)
// tokens, cut token n's aligned interval, cross-fade-append. When imported
// is null the toy decoder synthesizes each required prefix.
AssemblyResult assemble_incremental(const Sentence& sentence, int k,
                                    const EncoderWeights& weights, const EncoderConfig& config,
                                    double crossfade_ms, const ToySynthConfig& toy = {},
                                    const ImportedPrefixes* imported = nullptr);

// Toy decoder applied to the full-sentence encoding z^full.
std::pair<Waveform, Alignment> offline_synthesize(const Sentence& sentence,
                                                  const EncoderWeights& weights,
                                                  const EncoderConfig& config,
                                                  const ToySynthConfig& toy = {});

void write_assembly_report(const AssemblyResult& result, const std::string& path);

}  // namespace itts
