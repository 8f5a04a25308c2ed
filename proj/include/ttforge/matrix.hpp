#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace ttforge {

using BigInt = boost::multiprecision::cpp_int;

/// Dense square matrix of arbitrary-precision nonnegative integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(int n);

  int size() const { return n_; }
  BigInt& at(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const BigInt& at(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  BigInt row_sum(int i) const;
  bool is_positive() const;

  /// Matrix times column vector.
  std::vector<BigInt> apply(const std::vector<BigInt>& x) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  /// Whitespace-separated grid, one row per line.
  std::string to_text() const;
  static IntMatrix from_text(std::string_view text);

 private:
  int n_ = 0;
  std::vector<BigInt> data_;
};

}  // namespace ttforge
