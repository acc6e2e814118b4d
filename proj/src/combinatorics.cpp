#include "lossprop/combinatorics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lossprop/errors.hpp"
#include "lossprop/fock.hpp"

namespace lossprop {

CombinatoricsTable::CombinatoricsTable(int n_max) {
    if (n_max < 0 || n_max > kMaxPhotonCutoff)
        throw CutoffExceeded("combinatorics table cutoff must be in [0, 30], got " +
                             std::to_string(n_max));
    max_n_ = 2 * n_max;

    log_fact_.resize(max_n_ + 1);
    log_fact_[0] = 0.0;
    for (int n = 1; n <= max_n_; ++n) log_fact_[n] = log_fact_[n - 1] + std::log(double(n));

    // Pascal's triangle; C(60, 30) ~ 1.2e17 still fits in int64.
    binom_.resize(max_n_ + 1);
    for (int n = 0; n <= max_n_; ++n) {
        binom_[n].assign(n + 1, 1);
        for (int k = 1; k < n; ++k) binom_[n][k] = binom_[n - 1][k - 1] + binom_[n - 1][k];
    }
}

double CombinatoricsTable::log_factorial(int n) const {
    if (n < 0 || n > max_n_)
        throw std::out_of_range("log_factorial argument " + std::to_string(n) +
                                " outside table range [0, " + std::to_string(max_n_) + "]");
    return log_fact_[n];
}

std::int64_t CombinatoricsTable::binomial(int n, int k) const {
    if (n < 0 || k < 0 || k > n) return 0;  // negative-factorial convention: term vanishes
    if (n > max_n_)
        throw std::out_of_range("binomial argument " + std::to_string(n) +
                                " outside table range [0, " + std::to_string(max_n_) + "]");
    return binom_[n][k];
}

}  // namespace lossprop
