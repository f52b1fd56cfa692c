#include "itts/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "itts/error.hpp"
#include "itts/kernels.hpp"

namespace itts {

double toy_frequency(double z0, const ToySynthConfig& config) {
    const double squashed = std::clamp(0.5 + 0.5 * z0, 0.0, 1.0);
    return config.freq_lo_hz + config.freq_span_hz * squashed;
}

std::int64_t toy_duration_samples(std::size_t chars, const ToySynthConfig& config) {
    const double ms = config.base_ms + config.per_char_ms * static_cast<double>(chars);
    return static_cast<std::int64_t>(std::floor(ms / 1000.0 * config.sample_rate));
}

std::pair<Waveform, Alignment> toy_synthesize(const PrefixEncoding& prefix,
                                              const Sentence& sentence,
                                              const ToySynthConfig& config) {
    if (prefix.c < 1 || prefix.c > sentence.length())
        throw IndexError("prefix token count " + std::to_string(prefix.c));
    if (static_cast<int>(prefix.vectors.size()) != prefix.c)
        throw ShapeError("prefix encoding", "vector count differs from c");

    Waveform wav;
    wav.sample_rate = config.sample_rate;
    Alignment alignment;

    const std::int64_t ramp =
        static_cast<std::int64_t>(std::floor(config.ramp_ms / 1000.0 * config.sample_rate));
    for (int j = 1; j <= prefix.c; ++j) {
        const Token& tok = sentence.token(j);
        const TokenVector& tv = prefix.vectors[static_cast<std::size_t>(j - 1)];
        const double freq = toy_frequency(static_cast<double>(tv.z.front()), config);
        const std::int64_t len = toy_duration_samples(tok.text.size(), config);
        const std::int64_t begin = static_cast<std::int64_t>(wav.samples.size());
        const double phase_step = 6.283185307179586476925286766559 * freq /
                                  static_cast<double>(config.sample_rate);
        for (std::int64_t i = 0; i < len; ++i) {
            double gain = 1.0;
            if (ramp > 0) {
                gain = std::min(gain, static_cast<double>(i + 1) / static_cast<double>(ramp));
                gain = std::min(gain, static_cast<double>(len - i) / static_cast<double>(ramp));
            }
            wav.samples.push_back(static_cast<float>(
                config.amplitude * gain * std::sin(phase_step * static_cast<double>(i))));
        }
        alignment.spans.emplace_back(begin, begin + len);
    }
    return {std::move(wav), std::move(alignment)};
}

std::int64_t crossfade_overlap(double crossfade_ms, int sample_rate) {
    if (crossfade_ms < 0.0) throw OverlapError("negative crossfade");
    return std::llround(crossfade_ms / 1000.0 * sample_rate);
}

Waveform crossfade_concat(const Waveform& a, const Waveform& b, double crossfade_ms) {
    if (a.sample_rate != b.sample_rate)
        throw RateError(std::to_string(a.sample_rate) + " vs " + std::to_string(b.sample_rate));
    const std::int64_t overlap = crossfade_overlap(crossfade_ms, a.sample_rate);
    const std::int64_t len_a = static_cast<std::int64_t>(a.samples.size());
    const std::int64_t len_b = static_cast<std::int64_t>(b.samples.size());
    if (overlap > std::min(len_a, len_b))
        throw OverlapError("overlap " + std::to_string(overlap) + " exceeds segment length");

    Waveform out;
    out.sample_rate = a.sample_rate;
    out.samples.resize(static_cast<std::size_t>(len_a + len_b - overlap));
    std::copy(a.samples.begin(), a.samples.end() - overlap, out.samples.begin());
    if (overlap > 0)
        kernels::crossfade_mix(a.samples.data() + (len_a - overlap), b.samples.data(),
                               out.samples.data() + (len_a - overlap),
                               static_cast<std::size_t>(overlap));
    std::copy(b.samples.begin() + overlap, b.samples.end(),
              out.samples.begin() + static_cast<std::size_t>(len_a));
    return out;
}

namespace {

std::pair<const Waveform*, const Alignment*> imported_prefix(const ImportedPrefixes& imported,
                                                             int c) {
    const auto it = imported.find(c);
    if (it == imported.end()) throw MissingPrefix(c);
    return {&it->second.first, &it->second.second};
}

}  // namespace

AssemblyResult assemble_incremental(const Sentence& sentence, int k,
                                    const EncoderWeights& weights, const EncoderConfig& config,
                                    double crossfade_ms, const ToySynthConfig& toy,
                                    const ImportedPrefixes* imported) {
    const int N = sentence.length();
    if (N == 0) throw EmptyInput();

    // Toy prefixes are synthesized once per distinct c; identical by
    // determinism to synthesizing per n.
    std::map<int, std::pair<Waveform, Alignment>> toy_cache;
    PrefixTable table;
    if (!imported) table = encode_all_prefixes(sentence, weights, config);

    AssemblyResult result;
    for (int n = 1; n <= N; ++n) {
        const int c = context_size(n, k, N);
        const Waveform* wav = nullptr;
        const Alignment* alignment = nullptr;
        if (imported) {
            std::tie(wav, alignment) = imported_prefix(*imported, c);
        } else {
            auto it = toy_cache.find(c);
            if (it == toy_cache.end()) {
                PrefixEncoding prefix;
                prefix.n = n;
                prefix.k = k;
                prefix.c = c;
                prefix.vectors = table.by_c[static_cast<std::size_t>(c - 1)];
                it = toy_cache.emplace(c, toy_synthesize(prefix, sentence, toy)).first;
            }
            wav = &it->second.first;
            alignment = &it->second.second;
        }

        if (static_cast<int>(alignment->spans.size()) < n)
            throw AlignmentError(n, "prefix alignment has no entry for token");
        const auto [cut_begin, cut_end] = alignment->spans[static_cast<std::size_t>(n - 1)];
        if (cut_end > static_cast<std::int64_t>(wav->samples.size()))
            throw AlignmentError(n, "interval exceeds prefix waveform");

        Waveform segment;
        segment.sample_rate = wav->sample_rate;
        segment.samples.assign(wav->samples.begin() + cut_begin, wav->samples.begin() + cut_end);

        AssemblySegment seg;
        seg.n = n;
        seg.source_prefix_c = c;
        seg.cut_begin = cut_begin;
        seg.cut_end = cut_end;

        if (n == 1) {
            result.waveform = std::move(segment);
            seg.out_begin = 0;
            seg.out_end = static_cast<std::int64_t>(result.waveform.samples.size());
        } else {
            const std::int64_t overlap = crossfade_overlap(crossfade_ms, result.waveform.sample_rate);
            const std::int64_t before = static_cast<std::int64_t>(result.waveform.samples.size());
            result.waveform = crossfade_concat(result.waveform, segment, crossfade_ms);
            seg.out_begin = before - overlap;
            seg.out_end = static_cast<std::int64_t>(result.waveform.samples.size());
        }
        result.alignment.spans.emplace_back(seg.out_begin, seg.out_end);
        result.segments.push_back(seg);
    }
    return result;
}

std::pair<Waveform, Alignment> offline_synthesize(const Sentence& sentence,
                                                  const EncoderWeights& weights,
                                                  const EncoderConfig& config,
                                                  const ToySynthConfig& toy) {
    const int N = sentence.length();
    if (N == 0) throw EmptyInput();
    const CharStates states = encode_chars(sentence.raw, weights, config);
    PrefixEncoding full;
    full.n = N;
    full.k = 0;
    full.c = N;
    full.vectors.reserve(static_cast<std::size_t>(N));
    for (int j = 1; j <= N; ++j) {
        TokenVector tv = extract_token_vector(states, sentence, j);
        tv.context_tokens = N;
        tv.full_context = true;
        full.vectors.push_back(std::move(tv));
    }
    return toy_synthesize(full, sentence, toy);
}

void write_assembly_report(const AssemblyResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "n,source_prefix_c,cut_begin,cut_end,out_begin,out_end\n";
    for (const auto& seg : result.segments)
        out << seg.n << ',' << seg.source_prefix_c << ',' << seg.cut_begin << ',' << seg.cut_end
            << ',' << seg.out_begin << ',' << seg.out_end << '\n';
}

}  // namespace itts
