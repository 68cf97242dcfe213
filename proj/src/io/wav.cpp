// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/io/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "beamkit/error.hpp"

namespace beamkit {

namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(const std::vector<char>& buf, std::size_t pos) {
  BEAMKIT_REQUIRE(pos + sizeof(T) <= buf.size(), ErrorCode::kParse, "truncated WAV header");
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  return v;
}

template <typename T>
void WriteLe(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

MultichannelWaveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  BEAMKIT_REQUIRE(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();

  BEAMKIT_REQUIRE(buf.size() >= 12 && std::memcmp(buf.data(), "RIFF", 4) == 0 &&
                      std::memcmp(buf.data() + 8, "WAVE", 4) == 0,
                  ErrorCode::kParse, "not a RIFF/WAVE file" + where);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::size_t data_pos = 0, data_size = 0;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id(buf.data() + pos, 4);
    const std::uint32_t size = ReadLe<std::uint32_t>(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      BEAMKIT_REQUIRE(size >= 16, ErrorCode::kParse, "short fmt chunk" + where);
      format = ReadLe<std::uint16_t>(buf, body);
      channels = ReadLe<std::uint16_t>(buf, body + 2);
      sample_rate = ReadLe<std::uint32_t>(buf, body + 4);
      bits = ReadLe<std::uint16_t>(buf, body + 14);
      if (format == kFormatExtensible) {
        BEAMKIT_REQUIRE(size >= 40, ErrorCode::kParse, "short extensible fmt chunk" + where);
        format = ReadLe<std::uint16_t>(buf, body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      BEAMKIT_REQUIRE(body + size <= buf.size(), ErrorCode::kParse,
                      "declared data length exceeds the file" + where);
      data_pos = body;
      data_size = size;
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }
  BEAMKIT_REQUIRE(have_fmt && have_data, ErrorCode::kParse, "missing fmt or data chunk" + where);
  BEAMKIT_REQUIRE(channels >= 1 && sample_rate >= 1, ErrorCode::kParse, "invalid fmt chunk" + where);
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  BEAMKIT_REQUIRE(pcm16 || f32, ErrorCode::kParse,
                  "unsupported encoding (format " + std::to_string(format) + ", " +
                      std::to_string(bits) + " bits)" + where);
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * bits / 8;
  BEAMKIT_REQUIRE(data_size % frame_bytes == 0, ErrorCode::kParse,
                  "data length is not a whole number of frames" + where);
  const std::size_t frames = data_size / frame_bytes;
  // Anything after the data chunk must be well-formed chunks, otherwise the
  // declared length disagrees with the payload.
  std::size_t tail = data_pos + data_size + (data_size & 1);
  while (tail < buf.size()) {
    BEAMKIT_REQUIRE(tail + 8 <= buf.size(), ErrorCode::kParse,
                    "declared data length disagrees with the file size" + where);
    const std::uint32_t size = ReadLe<std::uint32_t>(buf, tail + 4);
    BEAMKIT_REQUIRE(tail + 8 + size <= buf.size(), ErrorCode::kParse,
                    "declared data length disagrees with the file size" + where);
    tail += 8 + size + (size & 1);
  }

  MultichannelWaveform wave(channels, frames, static_cast<int>(sample_rate));
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t m = 0; m < channels; ++m) {
      const std::size_t at = data_pos + (n * channels + m) * (bits / 8);
      wave.at(m, n) = pcm16 ? ReadLe<std::int16_t>(buf, at) / 32767.0
                            : static_cast<double>(ReadLe<float>(buf, at));
    }
  }
  return wave;
}

void WriteWav(const std::filesystem::path& path, const MultichannelWaveform& wave,
              WavEncoding encoding) {
  BEAMKIT_REQUIRE(wave.channels() >= 1, ErrorCode::kInvalidInput, "cannot write zero channels");
  std::ofstream out(path, std::ios::binary);
  BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "cannot create " + path.string());
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const auto channels = static_cast<std::uint16_t>(wave.channels());
  const std::uint32_t block = channels * bits / 8u;
  const std::uint64_t data_size = static_cast<std::uint64_t>(block) * wave.length();
  BEAMKIT_REQUIRE(data_size + 36 <= UINT32_MAX, ErrorCode::kInvalidInput, "WAV too large");

  out.write("RIFF", 4);
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(36 + data_size));
  out.write("WAVEfmt ", 8);
  WriteLe<std::uint32_t>(out, 16);
  WriteLe<std::uint16_t>(out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  WriteLe<std::uint16_t>(out, channels);
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(wave.sample_rate()));
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(wave.sample_rate()) * block);
  WriteLe<std::uint16_t>(out, static_cast<std::uint16_t>(block));
  WriteLe<std::uint16_t>(out, bits);
  out.write("data", 4);
  WriteLe<std::uint32_t>(out, static_cast<std::uint32_t>(data_size));
  for (std::size_t n = 0; n < wave.length(); ++n) {
    for (std::size_t m = 0; m < wave.channels(); ++m) {
      const double v = wave.at(m, n);
      if (encoding == WavEncoding::kPcm16) {
        const double clipped = std::clamp(v, -1.0, 1.0);
        WriteLe<std::int16_t>(out, static_cast<std::int16_t>(std::lround(clipped * 32767.0)));
      } else {
        WriteLe<float>(out, static_cast<float>(v));
      }
    }
  }
  BEAMKIT_REQUIRE(out.good(), ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace beamkit
