#include "mrf2d/pbm.hpp"

#include <fstream>
#include <sstream>

namespace mrf2d {

namespace {

constexpr std::int64_t kMaxDimension = 1 << 20;

// Skips PBM whitespace and '#' comments; returns false on end of stream.
bool skip_separators(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == EOF) return false;
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    return true;
  }
}

std::int64_t read_dimension(std::istream& in, const char* what) {
  if (!skip_separators(in)) throw PbmParseError(std::string("missing ") + what, in.tellg());
  std::int64_t value = 0;
  if (!(in >> value)) throw PbmParseError(std::string("malformed ") + what, in.tellg());
  if (value < 1 || value > kMaxDimension)
    throw PbmParseError(std::string(what) + " out of range", in.tellg());
  return value;
}

}  // namespace

BinaryImage load_pbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PbmParseError("cannot open '" + path + "'", 0);

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '1' && magic[1] != '4'))
    throw PbmParseError("not a P1/P4 PBM file", 0);
  const bool binary = magic[1] == '4';

  const std::int64_t width = read_dimension(in, "width");
  const std::int64_t height = read_dimension(in, "height");
  BinaryImage image(static_cast<int>(height), static_cast<int>(width));

  if (binary) {
    // Exactly one whitespace byte separates the header from the payload.
    const int c = in.get();
    if (c == EOF || !std::isspace(c)) throw PbmParseError("missing header terminator", in.tellg());
    const std::int64_t row_bytes = (width + 7) / 8;
    std::vector<char> row(static_cast<std::size_t>(row_bytes));
    for (std::int64_t m = 0; m < height; ++m) {
      in.read(row.data(), row_bytes);
      if (in.gcount() != row_bytes) throw PbmParseError("truncated P4 payload", in.tellg());
      for (std::int64_t n = 0; n < width; ++n) {
        const unsigned byte = static_cast<unsigned char>(row[static_cast<std::size_t>(n / 8)]);
        image(static_cast<int>(m), static_cast<int>(n)) =
            static_cast<std::uint8_t>((byte >> (7 - n % 8)) & 1u);
      }
    }
  } else {
    for (std::int64_t i = 0; i < image.size(); ++i) {
      if (!skip_separators(in)) throw PbmParseError("truncated P1 payload", in.tellg());
      const int c = in.get();
      if (c != '0' && c != '1') throw PbmParseError("invalid P1 pixel", in.tellg());
      image[i] = static_cast<std::uint8_t>(c - '0');
    }
  }
  return image;
}

void save_pbm(const BinaryImage& image, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_pbm: cannot open '" + path + "'");
  if (binary) {
    out << "P4\n" << image.cols() << " " << image.rows() << "\n";
    const int row_bytes = (image.cols() + 7) / 8;
    std::vector<char> row(static_cast<std::size_t>(row_bytes));
    for (int m = 0; m < image.rows(); ++m) {
      std::fill(row.begin(), row.end(), 0);
      for (int n = 0; n < image.cols(); ++n) {
        if (image(m, n)) row[static_cast<std::size_t>(n / 8)] |= static_cast<char>(0x80u >> (n % 8));
      }
      out.write(row.data(), row_bytes);
    }
  } else {
    out << "P1\n" << image.cols() << " " << image.rows() << "\n";
    for (int m = 0; m < image.rows(); ++m) {
      for (int n = 0; n < image.cols(); ++n) {
        out << int(image(m, n)) << (n + 1 == image.cols() ? "" : " ");
      }
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("save_pbm: write failed for '" + path + "'");
}

}  // namespace mrf2d
