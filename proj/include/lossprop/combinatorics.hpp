#pragma once

#include <cstdint>
#include <vector>

namespace lossprop {

// Factorial / binomial tables shared by the propagation kernels and the
// splitter oracles.  Exact integer binomials are kept alongside log-factorials
// so quotients of large factorials can be formed in log space and exponentiated
// once, instead of multiplying values that overflow past 20!.
//
// Convention: a binomial whose arguments would require the factorial of a
// negative integer is zero; callers skip such terms explicitly.
class CombinatoricsTable {
  public:
    // Tables cover factorials up to 2*n_max (pair indices such as l + l' reach
    // twice the single-mode cutoff).
    explicit CombinatoricsTable(int n_max);

    // ln(n!) for 0 <= n <= 2*n_max.
    double log_factorial(int n) const;

    // C(n, k) exactly; zero when k < 0, k > n, or n < 0.
    std::int64_t binomial(int n, int k) const;

    int max_n() const { return max_n_; }

  private:
    int max_n_;
    std::vector<double> log_fact_;
    std::vector<std::vector<std::int64_t>> binom_;
};

}  // namespace lossprop
