#include "dualdomain/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dd {

namespace {

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                    (static_cast<std::uint32_t>(p[1]) << 8));
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

void push_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

WavData load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::uint8_t* body = chunk + 8;
    if (pos + 8 + size > bytes.size())
      throw std::runtime_error("truncated WAV chunk: " + path);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw std::runtime_error("short fmt chunk: " + path);
      format = read_u16(body);
      channels = read_u16(body + 2);
      sample_rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      if (format == kFormatExtensible) {
        if (size < 40)
          throw std::runtime_error("short extensible fmt chunk: " + path);
        format = read_u16(body + 24);  // first bytes of the subformat GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = body;
      data_size = size;
    }
    pos += 8 + size + (size & 1);  // chunks are word-aligned
  }

  if (format == 0 || data == nullptr)
    throw std::runtime_error("missing fmt or data chunk: " + path);
  if (channels == 0 || sample_rate == 0)
    throw std::runtime_error("bad fmt chunk: " + path);

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool pcm24 = format == kFormatPcm && bits == 24;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !pcm24 && !float32)
    throw std::runtime_error("unsupported WAV format (need 16/24-bit PCM or "
                             "32-bit float): " + path);

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_size;

  WavData wav;
  wav.sample_rate = sample_rate;
  wav.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::uint8_t* s = data + f * frame_size;  // first channel
    double v = 0.0;
    if (pcm16) {
      const auto raw = static_cast<std::int16_t>(read_u16(s));
      v = static_cast<double>(raw) / 32768.0;
    } else if (pcm24) {
      std::int32_t raw = static_cast<std::int32_t>(
          static_cast<std::uint32_t>(s[0]) |
          (static_cast<std::uint32_t>(s[1]) << 8) |
          (static_cast<std::uint32_t>(s[2]) << 16));
      if (raw & 0x800000) raw -= 0x1000000;
      v = static_cast<double>(raw) / 8388608.0;
    } else {
      float raw;
      std::uint32_t u = read_u32(s);
      std::memcpy(&raw, &u, sizeof raw);
      v = std::clamp(static_cast<double>(raw), -1.0, 1.0);
    }
    wav.samples[f] = v;
  }
  return wav;
}

void save_wav(const std::string& path, std::span<const double> samples,
              std::size_t sample_rate) {
  if (sample_rate == 0) throw std::invalid_argument("zero sample rate");
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(samples.size() * 2);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  push_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  push_u32(out, 16);
  push_u16(out, kFormatPcm);
  push_u16(out, 1);  // mono
  push_u32(out, static_cast<std::uint32_t>(sample_rate));
  push_u32(out, static_cast<std::uint32_t>(sample_rate * 2));
  push_u16(out, 2);   // block align
  push_u16(out, 16);  // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  push_u32(out, data_size);
  for (double x : samples) {
    const double clamped = std::clamp(x, -1.0, 1.0);
    const long long scaled = std::llround(clamped * 32768.0);
    const std::int16_t s = static_cast<std::int16_t>(
        std::clamp<long long>(scaled, -32768, 32767));
    push_u16(out, static_cast<std::uint16_t>(s));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace dd
