#ifndef FIDEST_EXACT_COMBINATORICS_HPP
#define FIDEST_EXACT_COMBINATORICS_HPP

#include <boost/multiprecision/cpp_int.hpp>

// Exact integer combinatorics backing the analytic (validation-scale)
// moment path, where the alternating sums demand exact arithmetic.

namespace fidest {

using WideInt = boost::multiprecision::cpp_int;

// Stirling number of the second kind {j over l} via the standard
// recurrence S(j,l) = l*S(j-1,l) + S(j-1,l-1). Out-of-range l yields 0.
WideInt stirling2(int j, int l);

// Descending factorial n*(n-1)*...*(n-l+1); 1 when l = 0, 0 when l > n.
WideInt falling_factorial(long long n, int l);

}  // namespace fidest

#endif  // FIDEST_EXACT_COMBINATORICS_HPP
