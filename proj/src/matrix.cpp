#include "ttforge/matrix.hpp"

#include <sstream>

#include "ttforge/error.hpp"

namespace ttforge {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(static_cast<int>(rows.size())) {
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw Error("IntMatrix: not square");
    int j = 0;
    for (long x : row) {
      if (x < 0) throw Error("IntMatrix: negative entry");
      at(i, j++) = x;
    }
    ++i;
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

BigInt IntMatrix::row_sum(int i) const {
  BigInt s = 0;
  for (int j = 0; j < n_; ++j) s += at(i, j);
  return s;
}

bool IntMatrix::is_positive() const {
  for (const auto& x : data_) {
    if (x <= 0) return false;
  }
  return true;
}

std::vector<BigInt> IntMatrix::apply(const std::vector<BigInt>& x) const {
  std::vector<BigInt> y(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (at(i, j) != 0) y[i] += at(i, j) * x[j];
    }
  }
  return y;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.n_ != b.n_) throw Error("IntMatrix: size mismatch");
  IntMatrix c(a.n_);
  for (int i = 0; i < a.n_; ++i) {
    for (int k = 0; k < a.n_; ++k) {
      if (a.at(i, k) == 0) continue;
      for (int j = 0; j < a.n_; ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  }
  return c;
}

std::string IntMatrix::to_text() const {
  std::ostringstream out;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (j) out << ' ';
      out << at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

IntMatrix IntMatrix::from_text(std::string_view text) {
  std::vector<std::vector<BigInt>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::vector<BigInt> row;
    std::string cell;
    while (cells >> cell) {
      if (cell.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidInput("matrix entry '" + cell + "' is not a nonnegative integer");
      }
      row.emplace_back(cell);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  IntMatrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.n_; ++i) {
    if (static_cast<int>(rows[i].size()) != m.n_) {
      throw InvalidInput("matrix text is not square");
    }
    for (int j = 0; j < m.n_; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace ttforge
