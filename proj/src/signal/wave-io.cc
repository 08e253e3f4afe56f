// sfmdnn/src/signal/wave-io.cc

// Copyright 2026  The sfmdnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sfmdnn/signal/wave-io.h"

#include <algorithm>
#include <cmath>

#include "sfmdnn/base/byte-io.h"
#include "sfmdnn/base/errors.h"

namespace sfm {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t block_align = 0;
  uint16_t bits = 0;
};

FmtChunk ParseFmt(ByteReader *r, uint32_t chunk_size) {
  if (chunk_size < 16) throw FormatError("wav: fmt chunk too short");
  FmtChunk f;
  size_t start = r->Position();
  f.format = r->GetU16();
  f.channels = r->GetU16();
  f.sample_rate = r->GetU32();
  r->GetU32();  // byte rate
  f.block_align = r->GetU16();
  f.bits = r->GetU16();
  if (f.format == kFormatExtensible) {
    if (chunk_size < 40) throw FormatError("wav: extensible fmt chunk too short");
    r->GetU16();  // cbSize
    r->GetU16();  // valid bits
    r->GetU32();  // channel mask
    f.format = r->GetU16();  // first two bytes of the subformat GUID
    r->Skip(14);
  }
  size_t consumed = r->Position() - start;
  r->Skip(chunk_size - consumed);
  return f;
}

}  // namespace

void ValidateWaveform(const Waveform &w) {
  if (w.sample_rate <= 0) throw ConfigError("waveform: sample_rate must be > 0");
  for (double s : w.samples)
    if (!std::isfinite(s)) throw ConfigError("waveform: non-finite sample");
}

Waveform ParseWav(const std::vector<unsigned char> &bytes,
                  const WavReadOptions &opts) {
  ByteReader r(bytes.data(), bytes.size(), "wav");
  if (bytes.size() < 12 || r.GetBytes(4) != "RIFF")
    throw FormatError("wav: missing RIFF header");
  r.GetU32();
  if (r.GetBytes(4) != "WAVE") throw FormatError("wav: missing WAVE tag");

  bool have_fmt = false;
  FmtChunk fmt;
  while (r.Remaining() >= 8) {
    std::string id = r.GetBytes(4);
    uint32_t size = r.GetU32();
    if (id == "fmt ") {
      if (r.Remaining() < size) throw FormatError("wav: truncated fmt chunk");
      fmt = ParseFmt(&r, size);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError("wav: data chunk before fmt chunk");
      if (r.Remaining() < size)
        throw FormatError("wav: data chunk declares " + std::to_string(size) +
                          " bytes but only " + std::to_string(r.Remaining()) +
                          " remain");
      if (fmt.channels == 0) throw FormatError("wav: zero channels");
      if (fmt.sample_rate == 0) throw FormatError("wav: zero sample rate");
      const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
      const bool f32 = fmt.format == kFormatFloat && fmt.bits == 32;
      if (!pcm16 && !f32)
        throw UnsupportedError("wav: unsupported encoding (format " +
                               std::to_string(fmt.format) + ", " +
                               std::to_string(fmt.bits) + " bits)");
      if (opts.channel < 0 || opts.channel >= fmt.channels)
        throw ConfigError("wav: channel " + std::to_string(opts.channel) +
                          " requested but file has " +
                          std::to_string(fmt.channels));
      const size_t bytes_per_sample = fmt.bits / 8;
      const size_t frame_bytes = bytes_per_sample * fmt.channels;
      const size_t num_frames = size / frame_bytes;
      Waveform w;
      w.sample_rate = static_cast<int>(fmt.sample_rate);
      w.samples.resize(num_frames);
      const unsigned char *base = r.Current();
      for (size_t i = 0; i < num_frames; ++i) {
        ByteReader s(base + i * frame_bytes + opts.channel * bytes_per_sample,
                     bytes_per_sample, "wav sample");
        if (pcm16) {
          int16_t v = static_cast<int16_t>(s.GetU16());
          w.samples[i] = v / 32768.0;
        } else {
          w.samples[i] = s.GetF32();
        }
      }
      return w;
    } else {
      if (r.Remaining() < size) throw FormatError("wav: truncated chunk " + id);
      r.Skip(size);
      if ((size & 1) && r.Remaining() > 0) r.Skip(1);  // RIFF pad byte
    }
  }
  throw FormatError("wav: no data chunk");
}

Waveform LoadWav(const std::string &path, const WavReadOptions &opts) {
  auto bytes = ReadFileBytes(path);
  try {
    return ParseWav(bytes, opts);
  } catch (const FormatError &e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::vector<unsigned char> SerializeWav(const Waveform &w,
                                        const WavWriteOptions &opts) {
  if (w.sample_rate <= 0) throw ConfigError("wav: sample_rate must be > 0");
  const bool pcm16 = opts.encoding == WavEncoding::kPcm16;
  const uint16_t bits = pcm16 ? 16 : 32;
  const uint32_t data_bytes = static_cast<uint32_t>(w.size() * (bits / 8));
  ByteWriter out;
  out.PutBytes("RIFF");
  out.PutU32(36 + data_bytes);
  out.PutBytes("WAVE");
  out.PutBytes("fmt ");
  out.PutU32(16);
  out.PutU16(pcm16 ? kFormatPcm : kFormatFloat);
  out.PutU16(1);
  out.PutU32(static_cast<uint32_t>(w.sample_rate));
  out.PutU32(static_cast<uint32_t>(w.sample_rate) * (bits / 8));
  out.PutU16(bits / 8);
  out.PutU16(bits);
  out.PutBytes("data");
  out.PutU32(data_bytes);
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw NumericError("wav: non-finite sample");
    if (pcm16) {
      double v = std::round(s * 32768.0);
      v = std::clamp(v, -32768.0, 32767.0);
      out.PutI16(static_cast<int16_t>(v));
    } else {
      out.PutF32(static_cast<float>(s));
    }
  }
  return std::move(out.Buffer());
}

void SaveWav(const Waveform &w, const std::string &path,
             const WavWriteOptions &opts) {
  WriteFileBytes(path, SerializeWav(w, opts));
}

}  // namespace sfm
