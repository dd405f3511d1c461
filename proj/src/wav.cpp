#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vpnn/audio.hpp"
#include "vpnn/error.hpp"

namespace vpnn {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

[[noreturn]] void parse_error(const std::filesystem::path& path,
                              const std::string& what) {
  throw Error(ErrorKind::Parse, path.string() + ": " + what);
}

std::int16_t quantize_pcm16(double x) {
  const double scaled = std::round(x * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

WavData wav_read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    parse_error(path, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format_tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* samples = nullptr;
  std::size_t sample_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* chunk = data + pos;
    const std::uint32_t chunk_size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > size - body) {
      // Tolerate a truncated data chunk (streamed writers leave the size
      // open); anything else is malformed.
      if (std::memcmp(chunk, "data", 4) != 0) {
        parse_error(path, "chunk extends past end of file");
      }
    }
    const std::size_t available = std::min<std::size_t>(chunk_size, size - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) parse_error(path, "fmt chunk too short");
      format_tag = read_u16(data + body);
      channels = read_u16(data + body + 2);
      rate = read_u32(data + body + 4);
      bits = read_u16(data + body + 14);
      if (format_tag == kFormatExtensible) {
        if (available < 40) parse_error(path, "extensible fmt chunk too short");
        // First two bytes of the sub-format GUID carry the plain format tag.
        format_tag = read_u16(data + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      samples = data + body;
      sample_bytes = available;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }

  if (!have_fmt) parse_error(path, "missing fmt chunk");
  if (samples == nullptr) parse_error(path, "missing data chunk");
  if (channels == 0) parse_error(path, "zero channels");
  if (rate == 0) parse_error(path, "zero sample rate");

  WavData out;
  out.sample_rate = static_cast<int>(rate);
  if (format_tag == kFormatPcm && bits == 16) {
    out.format = SampleFormat::Pcm16;
  } else if (format_tag == kFormatFloat && bits == 32) {
    out.format = SampleFormat::Float32;
  } else {
    parse_error(path, "unsupported codec (format " + std::to_string(format_tag) +
                          ", " + std::to_string(bits) +
                          " bits); only PCM16 and float32 are supported");
  }

  const std::size_t width = bits / 8;
  const std::size_t frames = sample_bytes / (width * channels);
  out.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = samples + (i * channels + c) * width;
      if (out.format == SampleFormat::Pcm16) {
        out.channels[c][i] = static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else {
        out.channels[c][i] = std::bit_cast<float>(read_u32(p));
      }
    }
  }
  return out;
}

Waveform wav_read(const std::filesystem::path& path, int channel) {
  WavData all = wav_read_all(path);
  if (channel < 0 || static_cast<std::size_t>(channel) >= all.channels.size()) {
    throw Error(ErrorKind::InvalidArgument,
                path.string() + ": channel " + std::to_string(channel) +
                    " requested, file has " +
                    std::to_string(all.channels.size()));
  }
  return {std::move(all.channels[channel]), all.sample_rate};
}

void wav_write(const std::filesystem::path& path, const Waveform& w,
               SampleFormat format) {
  WavData data;
  data.sample_rate = w.sample_rate;
  data.format = format;
  data.channels.push_back(w.samples);
  wav_write(path, data);
}

void wav_write(const std::filesystem::path& path, const WavData& data) {
  if (data.channels.empty()) {
    throw Error(ErrorKind::InvalidArgument, "wav_write: no channels");
  }
  if (data.sample_rate <= 0) {
    throw Error(ErrorKind::InvalidArgument, "wav_write: sample rate must be > 0");
  }
  const std::size_t frames = data.channels.front().size();
  for (const auto& ch : data.channels) {
    if (ch.size() != frames) {
      throw Error(ErrorKind::InvalidArgument,
                  "wav_write: channels differ in length");
    }
  }
  const auto channels = static_cast<std::uint16_t>(data.channels.size());
  const bool pcm = data.format == SampleFormat::Pcm16;
  const std::uint16_t width = pcm ? 2 : 4;
  const auto data_bytes = static_cast<std::uint32_t>(frames * channels * width);

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, channels);
  put_u32(out, static_cast<std::uint32_t>(data.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(data.sample_rate) * channels * width);
  put_u16(out, static_cast<std::uint16_t>(channels * width));
  put_u16(out, static_cast<std::uint16_t>(8 * width));
  out += "data";
  put_u32(out, data_bytes);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& ch : data.channels) {
      if (pcm) {
        put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(ch[i])));
      } else {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(ch[i])));
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::Io, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace vpnn
