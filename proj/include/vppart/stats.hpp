#pragma once

#include <cstddef>
#include <span>

namespace vppart {

// ART F-ratio: mean F-measure relative to random testing's expected 1/theta.
double f_ratio(double mean_f, double theta);

// Two-tailed unpaired Mann-Whitney-Wilcoxon p-value. When both samples have
// at most kExactMannWhitneyLimit values the exact permutation distribution of
// the midrank sum is used; otherwise the normal approximation with tie and
// continuity corrections. Throws ContractViolation on an empty sample.
inline constexpr std::size_t kExactMannWhitneyLimit = 10;
double mann_whitney_p(std::span<const double> a, std::span<const double> b);
double mann_whitney_p_exact(std::span<const double> a, std::span<const double> b);
double mann_whitney_p_normal(std::span<const double> a, std::span<const double> b);

// Vargha-Delaney A12: P(x > y) + 0.5 * P(x == y) for x from a, y from b,
// computed from midranks.
double vargha_delaney_a12(std::span<const double> a, std::span<const double> b);

}  // namespace vppart
