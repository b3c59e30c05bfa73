// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "srploc/stft.hpp"

namespace srploc {

enum class SampleFormat { kPcm16, kPcm24, kPcm32, kFloat32 };

SampleFormat parse_sample_format(std::string_view name);
// Quantization step of the format for signals in [-1, 1]; 0 for float.
double quantization_step(SampleFormat format);

// Reads a RIFF/WAVE file: integer PCM (16/24/32-bit) and IEEE float
// (32/64-bit), plain or WAVE_FORMAT_EXTENSIBLE. Integer samples are scaled
// to [-1, 1). Throws IoError or FormatError.
SignalBlock read_audio(const std::string& path);
SignalBlock parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& source_name);

// Integer formats are rounded to the nearest step and clipped.
std::vector<std::uint8_t> encode_wav(const SignalBlock& signal, SampleFormat format);
void write_audio(const std::string& path, const SignalBlock& signal, SampleFormat format);

}  // namespace srploc
