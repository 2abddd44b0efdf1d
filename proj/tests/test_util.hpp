#pragma once

#include <functional>
#include <vector>

namespace kloost::testing {

inline std::vector<std::vector<int>> compositions_up_to(int max_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = 1; k <= left; ++k) {
      cur.push_back(k);
      rec(left - k);
      cur.pop_back();
    }
  };
  for (int n = 1; n <= max_size; ++n) rec(n);
  return out;
}

// All r in Z_{>=0}^N with sum r <= max_sum.
inline std::vector<std::vector<int>> exponent_vectors(int N, int max_sum) {
  std::vector<std::vector<int>> out;
  std::vector<int> r(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == N) {
      out.push_back(r);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      r[static_cast<std::size_t>(k)] = x;
      rec(k + 1, left - x);
    }
  };
  rec(0, max_sum);
  return out;
}

}  // namespace kloost::testing
