#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mrf2d {

/// Dense row-major 2D array of pixels. Used for binary images ({0,1}),
/// bipolar images ({-1,+1}) and real-valued planes (received signal, LLRs).
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Plane: dimensions must be positive");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t size() const { return static_cast<std::int64_t>(rows_) * cols_; }

  T& operator()(int m, int n) { return data_[static_cast<std::size_t>(m) * cols_ + n]; }
  const T& operator()(int m, int n) const { return data_[static_cast<std::size_t>(m) * cols_ + n]; }

  T& at(int m, int n) {
    check(m, n);
    return (*this)(m, n);
  }
  const T& at(int m, int n) const {
    check(m, n);
    return (*this)(m, n);
  }

  /// Linear (row-major) pixel access, used by interleavers.
  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool same_shape(const Plane<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Plane& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

  Plane transposed() const {
    Plane out(cols_, rows_);
    for (int m = 0; m < rows_; ++m)
      for (int n = 0; n < cols_; ++n) out(n, m) = (*this)(m, n);
    return out;
  }

 private:
  void check(int m, int n) const {
    if (m < 0 || m >= rows_ || n < 0 || n >= cols_) throw std::out_of_range("Plane: index out of range");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using BinaryImage = Plane<std::uint8_t>;   // pixels in {0,1}
using BipolarImage = Plane<std::int8_t>;   // pixels in {-1,+1}
using RealPlane = Plane<double>;

inline RealPlane to_real(const BinaryImage& b) {
  RealPlane out(b.rows(), b.cols());
  for (std::int64_t i = 0; i < b.size(); ++i) out[i] = static_cast<double>(b[i]);
  return out;
}

inline RealPlane to_real(const BipolarImage& b) {
  RealPlane out(b.rows(), b.cols());
  for (std::int64_t i = 0; i < b.size(); ++i) out[i] = static_cast<double>(b[i]);
  return out;
}

/// Hamming distance between two equally sized binary images.
inline std::int64_t count_bit_errors(const BinaryImage& a, const BinaryImage& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("count_bit_errors: dimension mismatch");
  std::int64_t errors = 0;
  for (std::int64_t i = 0; i < a.size(); ++i) errors += (a[i] != b[i]) ? 1 : 0;
  return errors;
}

}  // namespace mrf2d
