#pragma once

// Dynamically insertable epsilon-ary vantage-point tree with approximate
// nearest-distance search.
//
// Leaves hold up to lambda points. Inserting into a full leaf promotes it
// once: a random stored point becomes the vantage point, the lambda+1 points
// are split into epsilon distance shells, and each shell becomes a new leaf.
// A common node keeps its shell boundaries mu_0..mu_{eps-1} and search slack
// sigma exactly as computed at promotion; later inserts never refresh them,
// which is what makes the search approximate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vppart/geometry.hpp"
#include "vppart/point_block.hpp"
#include "vppart/rng.hpp"

namespace vppart {

struct TreeParams {
  int epsilon = 3;  // children per common node
  int lambda = 10;  // leaf capacity

  // Throws ContractViolation unless epsilon >= 2 and lambda >= epsilon - 1.
  void validate() const;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

// Shell boundaries from ascending distances: mu_0 = 0 and
// mu_i = (S[i*m - 1] + S[i*m]) / 2 with m = floor(|S| / epsilon).
// Throws InvalidPartition when |S| < epsilon.
std::vector<double> compute_boundaries(std::span<const double> sorted_dists, int epsilon);

// Realized distance range of one shell. count == 0 marks an empty shell.
struct SubsetBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
};

// Largest half-gap between consecutive nonempty shells, each gap clamped at
// zero. Fewer than two nonempty shells give 0.
double compute_sigma(std::span<const SubsetBounds> subsets);

// Child index for a point at distance dist from the vantage point:
// 0 when dist <= mu_1, i when mu_i < dist <= mu_{i+1}, eps-1 when dist > mu_{eps-1}.
std::size_t route(std::span<const double> boundaries, double dist);

// Outcome of promoting a full leaf, before it is spliced into a tree.
struct PromotionPlan {
  Point vantage;
  std::vector<double> boundaries;
  double sigma = 0.0;
  std::vector<SubsetBounds> subsets;
  std::vector<std::vector<Point>> children;  // epsilon point sets, routed by boundaries
};

// Splits stored ∪ {incoming} around stored[vantage_index].
PromotionPlan plan_promotion(std::span<const Point> stored, const Point& incoming,
                             std::size_t vantage_index, int epsilon);

class VpTree {
 public:
  using NodeId = std::uint32_t;

  struct Leaf {
    PointBlock points;
  };
  struct Common {
    Point vantage;
    std::vector<double> boundaries;
    double sigma = 0.0;
    std::vector<NodeId> children;
  };
  using Node = std::variant<Leaf, Common>;

  // vantage_seed drives the random vantage choice at each promotion.
  VpTree(std::size_t dim, TreeParams params, RngSeed vantage_seed);

  std::size_t dim() const noexcept { return dim_; }
  const TreeParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t promotions() const noexcept { return promotions_; }

  // Stores p in exactly one leaf, promoting that leaf at most once.
  void insert(std::span<const double> p);
  void insert(const Point& p) { insert(p.coords()); }

  // Minimum distance from q to the points in every leaf the search explores.
  // Always the distance to some stored point, so never below the exact
  // nearest distance. Throws NoNeighbors on an empty tree.
  double nearest_distance(std::span<const double> q) const;
  double nearest_distance(const Point& q) const { return nearest_distance(q.coords()); }

  std::optional<NodeId> root() const noexcept {
    return nodes_.empty() ? std::nullopt : std::optional<NodeId>(0);
  }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  // Every stored point, depth-first in child order.
  std::vector<Point> points() const;

  // Full structural audit; describes the first broken invariant, if any.
  std::optional<std::string> find_violation() const;

  // Deterministic nested text form: one node per line, two-space indent per
  // level, reals in fixed notation with six decimals.
  std::string dump() const;

 private:
  double search(NodeId id, std::span<const double> q) const;
  double exhaustive(NodeId id, std::span<const double> q) const;
  void collect(NodeId id, std::vector<Point>& out) const;
  void promote(NodeId leaf_id, std::span<const double> p);

  std::size_t dim_;
  TreeParams params_;
  RandomStream rng_;
  std::vector<Node> nodes_;
  std::size_t size_ = 0;
  std::size_t promotions_ = 0;
};

}  // namespace vppart
