// sfmdnn/include/sfmdnn/signal/wave-io.h

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

#ifndef SFMDNN_SIGNAL_WAVE_IO_H_
#define SFMDNN_SIGNAL_WAVE_IO_H_

#include <string>
#include <vector>

namespace sfm {

// Mono PCM audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Throws ConfigError for a non-positive rate or non-finite samples.
void ValidateWaveform(const Waveform &w);

enum class WavEncoding { kPcm16, kFloat32 };

struct WavReadOptions {
  int channel = 0;
};

struct WavWriteOptions {
  WavEncoding encoding = WavEncoding::kPcm16;
};

// Reads RIFF/WAVE PCM16 or IEEE float32 (plain or WAVE_FORMAT_EXTENSIBLE).
// One channel is extracted; PCM16 is scaled by 1/32768.
//   FormatError       malformed or truncated file
//   UnsupportedError  other encodings / bit depths
//   IoError           file cannot be opened
Waveform LoadWav(const std::string &path, const WavReadOptions &opts = {});
Waveform ParseWav(const std::vector<unsigned char> &bytes,
                  const WavReadOptions &opts = {});

// PCM16 output clamps to full scale: anything >= 1.0 is written as 32767.
void SaveWav(const Waveform &w, const std::string &path,
             const WavWriteOptions &opts = {});
std::vector<unsigned char> SerializeWav(const Waveform &w,
                                        const WavWriteOptions &opts = {});

}  // namespace sfm

#endif  // SFMDNN_SIGNAL_WAVE_IO_H_
