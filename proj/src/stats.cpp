#include "vppart/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "vppart/errors.hpp"

namespace vppart {

namespace {

// Pooled sample with doubled midranks (integers, so sums compare exactly).
struct Ranking {
  std::vector<std::int64_t> doubled_rank;  // a's values first, then b's
  double tie_term = 0.0;                   // sum over tie groups of t^3 - t
};

Ranking rank_pooled(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> values;
  values.reserve(n);
  values.insert(values.end(), a.begin(), a.end());
  values.insert(values.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

  Ranking r;
  r.doubled_rank.resize(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]]) ++end;
    // 1-based positions start+1 .. end share midrank (start+1+end)/2.
    const auto doubled = static_cast<std::int64_t>(start + 1 + end);
    for (std::size_t i = start; i < end; ++i) r.doubled_rank[order[i]] = doubled;
    const auto t = static_cast<double>(end - start);
    r.tie_term += t * t * t - t;
    start = end;
  }
  return r;
}

void require_nonempty(std::span<const double> a, std::span<const double> b, const char* who) {
  if (a.empty() || b.empty()) throw ContractViolation(std::string(who) + ": samples must be nonempty");
}

}  // namespace

double f_ratio(double mean_f, double theta) { return mean_f * theta; }

double mann_whitney_p_normal(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b, "mann_whitney_p");
  const Ranking r = rank_pooled(a, b);
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  const std::int64_t doubled_sum =
      std::accumulate(r.doubled_rank.begin(), r.doubled_rank.begin() + static_cast<std::ptrdiff_t>(a.size()),
                      std::int64_t{0});
  const double u1 = static_cast<double>(doubled_sum) / 2.0 - n1 * (n1 + 1.0) / 2.0;
  const double mean = n1 * n2 / 2.0;
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - r.tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(u1 - mean) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double mann_whitney_p_exact(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b, "mann_whitney_p");
  const Ranking r = rank_pooled(a, b);
  const std::size_t n1 = a.size();
  const std::size_t n = r.doubled_rank.size();
  const auto max_sum = static_cast<std::size_t>(2 * n * n1 + 1);

  // ways[j][s]: number of j-subsets of the pooled items whose doubled ranks sum to s.
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t item = 0; item < n; ++item) {
    const auto rank = static_cast<std::size_t>(r.doubled_rank[item]);
    for (std::size_t j = std::min(n1, item + 1); j >= 1; --j) {
      for (std::size_t s = max_sum; s >= rank; --s) {
        ways[j][s] += ways[j - 1][s - rank];
        if (s == rank) break;
      }
    }
  }

  std::int64_t observed = 0;
  for (std::size_t i = 0; i < n1; ++i) observed += r.doubled_rank[i];
  const auto center = static_cast<std::int64_t>(n1 * (n + 1));  // doubled expected rank sum
  const std::int64_t observed_dev = std::llabs(observed - center);

  double extreme = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    const double w = ways[n1][s];
    if (w == 0.0) continue;
    total += w;
    if (std::llabs(static_cast<std::int64_t>(s) - center) >= observed_dev) extreme += w;
  }
  return std::min(1.0, extreme / total);
}

double mann_whitney_p(std::span<const double> a, std::span<const double> b) {
  if (a.size() <= kExactMannWhitneyLimit && b.size() <= kExactMannWhitneyLimit) return mann_whitney_p_exact(a, b);
  return mann_whitney_p_normal(a, b);
}

double vargha_delaney_a12(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b, "vargha_delaney_a12");
  const Ranking r = rank_pooled(a, b);
  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  std::int64_t doubled_sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) doubled_sum += r.doubled_rank[i];
  // Doubled U statistic of a is an integer; dividing once keeps symmetry exact.
  const double doubled_u = static_cast<double>(doubled_sum) - n1 * (n1 + 1.0);
  return doubled_u / (2.0 * n1 * n2);
}

}  // namespace vppart
