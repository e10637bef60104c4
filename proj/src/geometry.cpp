#include "vppart/geometry.hpp"

#include <cmath>
#include <string>

#include "vppart/errors.hpp"

namespace vppart {

namespace {

void require_finite(std::span<const double> coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw ContractViolation("Point: coordinates must be finite");
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ContractViolation("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { require_finite(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { require_finite(coords_); }

InputDomain::InputDomain(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.dim() == 0) throw ContractViolation("InputDomain: dimension must be at least 1");
  require_same_dim(lower_.dim(), upper_.dim());
  for (std::size_t i = 0; i < lower_.dim(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw ContractViolation("InputDomain: lower bound must be below upper bound in dimension " +
                              std::to_string(i));
    }
  }
}

InputDomain InputDomain::unit(std::size_t dim) {
  return InputDomain(Point(std::vector<double>(dim, 0.0)), Point(std::vector<double>(dim, 1.0)));
}

bool InputDomain::contains(std::span<const double> p) const noexcept {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= lower_[i] && p[i] < upper_[i])) return false;
  }
  return true;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

void uniform_sample_into(const InputDomain& domain, RandomStream& rng, std::span<double> out) {
  require_same_dim(domain.dim(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rng.uniform(domain.lower()[i], domain.upper()[i]);
  }
}

Point uniform_sample(const InputDomain& domain, RandomStream& rng) {
  std::vector<double> coords(domain.dim());
  uniform_sample_into(domain, rng, coords);
  return Point(std::move(coords));
}

}  // namespace vppart
