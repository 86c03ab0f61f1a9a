#pragma once

#include <stdexcept>
#include <string>

#include "mrf2d/plane.hpp"

namespace mrf2d {

/// Thrown on malformed PBM input; carries a byte offset into the stream.
class PbmParseError : public std::runtime_error {
 public:
  PbmParseError(const std::string& what, std::int64_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::int64_t offset() const { return offset_; }

 private:
  std::int64_t offset_;
};

/// Reads a P1 (ASCII) or P4 (binary) PBM file. PBM bit 1 maps to pixel 1.
BinaryImage load_pbm(const std::string& path);

/// Writes a PBM file; binary (P4) by default.
void save_pbm(const BinaryImage& image, const std::string& path, bool binary = true);

}  // namespace mrf2d
