#include "pfc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pfc {

namespace {

// log(k!) memoized per thread; the miner hammers this from worker threads
double log_factorial(std::int64_t k) {
    thread_local std::vector<double> table{0.0, 0.0};
    while (static_cast<std::int64_t>(table.size()) <= k)
        table.push_back(table.back() + std::log(static_cast<double>(table.size())));
    return table[k];
}

double log_choose(std::int64_t n, std::int64_t k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

} // namespace

double fisher_one_sided(const ContingencyTable& t) {
    if (t.n11 < 0 || t.n10 < 0 || t.n01 < 0 || t.n00 < 0)
        throw std::invalid_argument("fisher_one_sided: negative cell");
    if (t.total() == 0)
        throw std::invalid_argument("fisher_one_sided: empty table");

    const std::int64_t r1 = t.row1(), r2 = t.row2(), c1 = t.col1(), n = t.total();
    if (r1 == 0 || c1 == 0) return 1.0;  // the only reachable table

    // upper tail sum(k = n11 .. min(r1, c1)) of the hypergeometric pmf: the
    // first term comes from log-factorials, the rest by the term ratio
    //   P(X=k+1) / P(X=k) = (r1-k)(c1-k) / ((k+1)(n-r1-c1+k+1)),
    // so the whole tail costs one exp plus a few multiplications
    const std::int64_t kmax = std::min(r1, c1);
    double term = std::exp(log_choose(r1, t.n11) + log_choose(r2, c1 - t.n11) -
                           log_choose(n, c1));
    double p = term;
    for (std::int64_t k = t.n11; k < kmax; ++k) {
        term *= static_cast<double>(r1 - k) * static_cast<double>(c1 - k) /
                (static_cast<double>(k + 1) * static_cast<double>(n - r1 - c1 + k + 1));
        p += term;
        if (term < p * 1e-18) break;  // remaining terms shrink geometrically
    }
    return std::min(p, 1.0);
}

double confidence_weight(double eta, double epsilon) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("confidence_weight: eta must lie in [0,1]");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("confidence_weight: epsilon must lie in (0,1)");
    return -std::log(1.0 + epsilon - eta);
}

} // namespace pfc
