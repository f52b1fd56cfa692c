#include "itts/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "itts/csv.hpp"
#include "itts/error.hpp"

namespace itts {

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint16_t get_u16(std::istream& in) {
    unsigned char b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw FormatError("truncated WAV file");
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated WAV file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

Waveform read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open WAV file: " + path);

    char tag[4];
    if (!in.read(tag, 4) || std::memcmp(tag, "RIFF", 4) != 0) throw FormatError("not a RIFF file");
    get_u32(in);  // riff size
    if (!in.read(tag, 4) || std::memcmp(tag, "WAVE", 4) != 0) throw FormatError("not a WAVE file");

    Waveform wav;
    bool have_fmt = false;
    while (in.read(tag, 4)) {
        const std::uint32_t chunk_size = get_u32(in);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw FormatError("short fmt chunk");
            const std::uint16_t format = get_u16(in);
            const std::uint16_t channels = get_u16(in);
            const std::uint32_t rate = get_u32(in);
            get_u32(in);  // byte rate
            get_u16(in);  // block align
            const std::uint16_t bits = get_u16(in);
            if (format != 1) throw FormatError("only PCM WAV supported");
            if (channels != 1) throw FormatError("only mono WAV supported");
            if (bits != 16) throw FormatError("only 16-bit WAV supported");
            wav.sample_rate = static_cast<int>(rate);
            in.ignore(chunk_size - 16);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            if (!have_fmt) throw FormatError("data chunk before fmt");
            const std::size_t n = chunk_size / 2;
            wav.samples.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint16_t raw = get_u16(in);
                const std::int16_t s = static_cast<std::int16_t>(raw);
                wav.samples[i] = static_cast<float>(s) / 32768.0f;
            }
            return wav;
        } else {
            in.ignore(chunk_size + (chunk_size & 1));
        }
    }
    throw FormatError("no data chunk");
}

void write_wav(const Waveform& wav, const std::string& path) {
    if (wav.sample_rate <= 0) throw FormatError("sample rate must be positive");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write WAV file: " + path);

    const std::uint32_t data_bytes = static_cast<std::uint32_t>(wav.samples.size() * 2);
    out.write("RIFF", 4);
    put_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(wav.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(wav.sample_rate) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.write("data", 4);
    put_u32(out, data_bytes);
    for (float x : wav.samples) {
        long v = std::lroundf(x * 32767.0f);
        v = std::clamp(v, -32768L, 32767L);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    }
    if (!out) throw DataError("write failed: " + path);
}

void validate_alignment(const Alignment& alignment, std::int64_t n_samples) {
    std::int64_t prev_end = 0;
    for (std::size_t i = 0; i < alignment.spans.size(); ++i) {
        const auto [begin, end] = alignment.spans[i];
        const int token = static_cast<int>(i) + 1;
        if (begin < 0 || end < begin) throw AlignmentError(token, "bad interval");
        if (begin < prev_end) throw AlignmentError(token, "overlaps previous token");
        if (end > n_samples) throw AlignmentError(token, "extends past waveform end");
        prev_end = end;
    }
}

Alignment read_alignment(const std::string& path, std::int64_t n_samples) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open alignment file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "index,start_sample,end_sample")
        throw ParseError(1, "bad alignment header");

    Alignment alignment;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
        const long long index = csv::parse_int(fields[0], line_no);
        if (index != static_cast<long long>(alignment.spans.size()) + 1)
            throw ParseError(line_no, "token indices must be 1..M contiguous");
        alignment.spans.emplace_back(csv::parse_int(fields[1], line_no),
                                     csv::parse_int(fields[2], line_no));
    }
    validate_alignment(alignment, n_samples);
    return alignment;
}

void write_alignment(const Alignment& alignment, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write alignment file: " + path);
    out << "index,start_sample,end_sample\n";
    for (std::size_t i = 0; i < alignment.spans.size(); ++i)
        out << (i + 1) << ',' << alignment.spans[i].first << ',' << alignment.spans[i].second
            << '\n';
}

std::pair<Waveform, Alignment> import_waveform(const std::string& wav_path,
                                               const std::string& alignment_path) {
    Waveform wav = read_wav(wav_path);
    Alignment alignment = read_alignment(alignment_path, static_cast<std::int64_t>(wav.samples.size()));
    return {std::move(wav), std::move(alignment)};
}

}  // namespace itts
