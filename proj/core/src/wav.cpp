// SPDX-License-Identifier: Apache-2.0
#include "srploc/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "srploc/error.hpp"

namespace srploc {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

SampleFormat parse_sample_format(std::string_view name) {
  if (name == "pcm16") return SampleFormat::kPcm16;
  if (name == "pcm24") return SampleFormat::kPcm24;
  if (name == "pcm32") return SampleFormat::kPcm32;
  if (name == "float32" || name == "float") return SampleFormat::kFloat32;
  throw ArgumentError("unknown sample format '" + std::string(name) +
                      "' (expected pcm16, pcm24, pcm32 or float32)");
}

double quantization_step(SampleFormat format) {
  switch (format) {
    case SampleFormat::kPcm16: return 1.0 / 32768.0;
    case SampleFormat::kPcm24: return 1.0 / 8388608.0;
    case SampleFormat::kPcm32: return 1.0 / 2147483648.0;
    case SampleFormat::kFloat32: return 0.0;
  }
  return 0.0;
}

SignalBlock parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(name + ": not a RIFF/WAVE file");
  }
  Format fmt;
  bool have_fmt = false;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw FormatError(name + ": malformed fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      fmt.tag = le16(f);
      fmt.channels = le16(f + 2);
      fmt.rate = le32(f + 4);
      fmt.block_align = le16(f + 12);
      fmt.bits = le16(f + 14);
      if (fmt.tag == kFormatExtensible) {
        if (size < 40) throw FormatError(name + ": truncated WAVE_FORMAT_EXTENSIBLE header");
        fmt.tag = le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Streaming writers sometimes leave the size unset; use what is there.
      data_size = std::min<std::size_t>(size, available);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1U);
  }
  if (!have_fmt) throw FormatError(name + ": missing fmt chunk");
  if (!have_data) throw FormatError(name + ": missing data chunk");
  if (fmt.channels == 0) throw FormatError(name + ": header declares zero channels");
  if (fmt.rate == 0) throw FormatError(name + ": header declares a zero sample rate");

  const bool is_pcm = fmt.tag == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  const bool is_float = fmt.tag == kFormatFloat && (fmt.bits == 32 || fmt.bits == 64);
  if (!is_pcm && !is_float) {
    throw FormatError(name + ": unsupported codec (format tag " + std::to_string(fmt.tag) + ", " +
                      std::to_string(fmt.bits) +
                      " bits); expected 16/24/32-bit PCM or 32/64-bit float");
  }
  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  if (fmt.block_align != frame_bytes) {
    throw FormatError(name + ": block align " + std::to_string(fmt.block_align) +
                      " does not match " + std::to_string(fmt.channels) + " channels of " +
                      std::to_string(fmt.bits) + " bits");
  }
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) throw FormatError(name + ": data chunk holds no samples");

  SignalBlock out;
  out.fs = static_cast<double>(fmt.rate);
  out.channels.assign(fmt.channels, std::vector<double>(frames));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const std::uint8_t* p = data + n * frame_bytes + c * bytes_per_sample;
      double v = 0.0;
      if (is_float && fmt.bits == 32) {
        v = static_cast<double>(std::bit_cast<float>(le32(p)));
      } else if (is_float) {
        const std::uint64_t u = static_cast<std::uint64_t>(le32(p)) |
                                (static_cast<std::uint64_t>(le32(p + 4)) << 32);
        v = std::bit_cast<double>(u);
      } else if (fmt.bits == 16) {
        v = static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else if (fmt.bits == 24) {
        std::int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
        if (s & 0x800000) s -= 0x1000000;
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(le32(p)) / 2147483648.0;
      }
      out.channels[c][n] = v;
    }
  }
  return out;
}

SignalBlock read_audio(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes, path);
}

std::vector<std::uint8_t> encode_wav(const SignalBlock& signal, SampleFormat format) {
  signal.validate();
  const std::uint16_t bits = format == SampleFormat::kPcm16 ? 16 : format == SampleFormat::kPcm24 ? 24 : 32;
  const std::uint16_t tag = format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const auto channels = static_cast<std::uint16_t>(signal.channel_count());
  const std::size_t frames = signal.length();
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const std::size_t data_bytes = frames * block_align;
  if (data_bytes > 0xFFFFFFFFULL - 44) throw ArgumentError("signal too long for a WAV file");
  const auto rate = static_cast<std::uint32_t>(std::llround(signal.fs));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, static_cast<std::uint32_t>(36 + data_bytes));
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, tag);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * block_align);
  put16(out, block_align);
  put16(out, bits);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, static_cast<std::uint32_t>(data_bytes));

  const double full_scale = format == SampleFormat::kPcm16   ? 32768.0
                            : format == SampleFormat::kPcm24 ? 8388608.0
                                                             : 2147483648.0;
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = signal.channels[c][n];
      if (format == SampleFormat::kFloat32) {
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        continue;
      }
      const double q = std::clamp(std::round(v * full_scale), -full_scale, full_scale - 1.0);
      const auto s = static_cast<std::int64_t>(q);
      for (int b = 0; b < bits; b += 8) out.push_back(static_cast<std::uint8_t>((s >> b) & 0xFF));
    }
  }
  return out;
}

void write_audio(const std::string& path, const SignalBlock& signal, SampleFormat format) {
  const auto bytes = encode_wav(signal, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write audio file '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace srploc
