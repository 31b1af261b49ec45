#include "footfall/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace footfall {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

} // namespace

AudioBuffer load_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    if (raw.size() < 44 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
        std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
        throw FormatError(path + ": not a RIFF/WAVE file");

    // chunk walk; fmt must precede data
    std::size_t pos = 12;
    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    while (pos + 8 <= raw.size()) {
        const char* id = reinterpret_cast<const char*>(raw.data() + pos);
        const std::uint32_t len = read_u32(raw.data() + pos + 4);
        if (pos + 8 + len > raw.size()) throw IoError(path + ": truncated chunk");
        const unsigned char* body = raw.data() + pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw FormatError(path + ": short fmt chunk");
            format = read_u16(body);
            channels = read_u16(body + 2);
            rate = read_u32(body + 4);
            bits = read_u16(body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_len = len;
            break;
        }
        pos += 8 + len + (len & 1); // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) throw FormatError(path + ": missing fmt or data chunk");
    if (format != 1) throw FormatError(path + ": only PCM (format 1) is supported");
    if (channels != 1 && channels != 2)
        throw FormatError(path + ": only mono or stereo supported");
    if (bits != 8 && bits != 16 && bits != 24)
        throw FormatError(path + ": only 8/16/24-bit PCM supported");
    if (rate == 0) throw FormatError(path + ": zero sample rate");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (data_len % frame_bytes != 0) throw IoError(path + ": data chunk not frame-aligned");
    const std::size_t frames = data_len / frame_bytes;

    AudioBuffer buf;
    buf.sample_rate_hz = static_cast<int>(rate);
    buf.samples.resize(frames);

    for (std::size_t n = 0; n < frames; ++n) {
        double acc = 0.0;
        for (unsigned ch = 0; ch < channels; ++ch) {
            const unsigned char* p = data + n * frame_bytes + ch * bytes_per_sample;
            double v = 0.0;
            switch (bits) {
            case 8: // unsigned, midpoint 128
                v = (static_cast<int>(p[0]) - 128) / 128.0;
                break;
            case 16: {
                const std::int16_t s = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = s / 32768.0;
                break;
            }
            case 24: {
                std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
                if (s & 0x800000) s |= ~0xffffff; // sign extend
                v = s / 8388608.0;
                break;
            }
            }
            acc += v;
        }
        buf.samples[n] = acc / channels;
    }
    return buf;
}

void save_wav(const std::string& path, const AudioBuffer& buf) {
    if (buf.sample_rate_hz <= 0) throw ParameterError("sample_rate_hz must be positive");
    std::vector<unsigned char> out;
    const std::uint32_t data_len = static_cast<std::uint32_t>(buf.samples.size() * 2);
    out.reserve(44 + data_len);

    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_len);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1); // PCM
    put_u16(out, 1); // mono
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_len);

    for (double s : buf.samples) {
        const double c = std::clamp(s, -1.0, 1.0);
        const auto q = static_cast<std::int16_t>(std::lrint(c * 32767.0));
        put_u16(out, static_cast<std::uint16_t>(q));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot create " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("write failed: " + path);
}

} // namespace footfall
