#pragma once

// Maximum-weight one-to-one assignment (Hungarian algorithm, O(n^2 m)).

#include <cstddef>
#include <limits>
#include <vector>

namespace kgforge {

// weight(i, j) for i < rows, j < cols. Returns, for every row, the matched
// column or -1. Every row is matched when rows <= cols, every column when
// rows > cols. Weights must be non-negative so that a full matching is
// always optimal.
template <typename Weight>
std::vector<int> max_weight_assignment(std::size_t rows, std::size_t cols,
                                       Weight weight) {
  using W = long long;
  std::vector<int> result(rows, -1);
  if (rows == 0 || cols == 0) return result;
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) -> W {
    return -static_cast<W>(transposed ? weight(j, i) : weight(i, j));
  };

  const W inf = std::numeric_limits<W>::max() / 4;
  std::vector<W> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<W> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      W delta = inf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        W cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (!p[j]) continue;
    std::size_t small = p[j] - 1, large = j - 1;
    if (transposed) {
      result[large] = static_cast<int>(small);
    } else {
      result[small] = static_cast<int>(large);
    }
  }
  return result;
}

}  // namespace kgforge
