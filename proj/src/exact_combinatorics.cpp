#include "fidest/exact_combinatorics.hpp"

#include <stdexcept>
#include <vector>

namespace fidest {

WideInt stirling2(int j, int l) {
  if (j < 0 || l < 0) {
    throw std::domain_error("stirling2: indices must be >= 0");
  }
  if (l > j) {
    return 0;
  }
  if (j == 0) {
    return 1;  // S(0,0)
  }
  if (l == 0) {
    return 0;
  }
  // one row of the recurrence at a time
  std::vector<WideInt> row(static_cast<size_t>(l) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int n = 1; n <= j; ++n) {
    for (int k = std::min(n, l); k >= 1; --k) {
      row[k] = k * row[k] + row[k - 1];
    }
    row[0] = 0;
  }
  return row[l];
}

WideInt falling_factorial(long long n, int l) {
  if (n < 0 || l < 0) {
    throw std::domain_error("falling_factorial: arguments must be >= 0");
  }
  if (l > n) {
    return 0;
  }
  WideInt r = 1;
  for (int i = 0; i < l; ++i) {
    r *= (n - i);
  }
  return r;
}

}  // namespace fidest
