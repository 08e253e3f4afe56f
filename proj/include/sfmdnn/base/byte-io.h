// sfmdnn/include/sfmdnn/base/byte-io.h

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

#ifndef SFMDNN_BASE_BYTE_IO_H_
#define SFMDNN_BASE_BYTE_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "sfmdnn/base/errors.h"

namespace sfm {

// Little-endian encoders used by the WAV, feature and checkpoint formats.
class ByteWriter {
 public:
  void PutBytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void PutU16(uint16_t v) { PutLe(v); }
  void PutU32(uint32_t v) { PutLe(v); }
  void PutI16(int16_t v) { PutLe(static_cast<uint16_t>(v)); }
  void PutF32(float v) { PutLe(std::bit_cast<uint32_t>(v)); }
  void PutF64(double v) { PutLe(std::bit_cast<uint64_t>(v)); }

  std::vector<unsigned char> &Buffer() { return buf_; }
  const std::vector<unsigned char> &Buffer() const { return buf_; }

 private:
  template <typename U>
  void PutLe(U v) {
    for (size_t i = 0; i < sizeof(U); ++i)
      buf_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  }
  std::vector<unsigned char> buf_;
};

class ByteReader {
 public:
  ByteReader(const unsigned char *data, size_t size, std::string what)
      : data_(data), size_(size), what_(std::move(what)) {}

  size_t Remaining() const { return size_ - pos_; }
  size_t Position() const { return pos_; }
  void Skip(size_t n) {
    Need(n);
    pos_ += n;
  }
  std::string GetBytes(size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char *>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  const unsigned char *Current() const { return data_ + pos_; }
  uint16_t GetU16() { return GetLe<uint16_t>(); }
  uint32_t GetU32() { return GetLe<uint32_t>(); }
  float GetF32() { return std::bit_cast<float>(GetLe<uint32_t>()); }
  double GetF64() { return std::bit_cast<double>(GetLe<uint64_t>()); }

  void Need(size_t n) const {
    if (Remaining() < n) throw FormatError(what_ + ": unexpected end of data");
  }

 private:
  template <typename U>
  U GetLe() {
    Need(sizeof(U));
    U v = 0;
    for (size_t i = 0; i < sizeof(U); ++i)
      v |= static_cast<U>(static_cast<U>(data_[pos_ + i]) << (8 * i));
    pos_ += sizeof(U);
    return v;
  }
  const unsigned char *data_;
  size_t size_;
  size_t pos_ = 0;
  std::string what_;
};

std::vector<unsigned char> ReadFileBytes(const std::string &path);
void WriteFileBytes(const std::string &path,
                    const std::vector<unsigned char> &bytes);

}  // namespace sfm

#endif  // SFMDNN_BASE_BYTE_IO_H_
