#pragma once

#include <cstdint>

namespace pfc {

// 2x2 contingency table for one refinement step:
//   rows: candidate literal true / false (within the premise support)
//   cols: conclusion true / false
struct ContingencyTable {
    std::int64_t n11 = 0;  // candidate true,  conclusion true
    std::int64_t n10 = 0;  // candidate true,  conclusion false
    std::int64_t n01 = 0;  // candidate false, conclusion true
    std::int64_t n00 = 0;  // candidate false, conclusion false

    std::int64_t row1() const { return n11 + n10; }
    std::int64_t row2() const { return n01 + n00; }
    std::int64_t col1() const { return n11 + n01; }
    std::int64_t total() const { return n11 + n10 + n01 + n00; }
};

// One-sided Fisher exact test in the enrichment direction: probability of
// observing at least n11 successes in row 1 with all margins fixed
// (hypergeometric upper tail). Zero first-row or first-column margin gives 1.
// Throws std::invalid_argument on negative cells or an all-zero table.
// Tails below roughly 1e-308 underflow to 0, which is on the significant side
// of every sane threshold.
double fisher_one_sided(const ContingencyTable& t);

// Confidence weight of a rule with conditional probability eta:
//   -ln(1 + epsilon - eta)
// Zero at eta == epsilon, maximal (-ln epsilon) at eta == 1, slightly negative
// toward eta == 0. Throws std::invalid_argument when eta is outside [0,1] or
// epsilon outside (0,1).
double confidence_weight(double eta, double epsilon);

} // namespace pfc
