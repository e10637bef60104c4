#include "vppart/vptree.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "vppart/errors.hpp"

namespace vppart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void append_real(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

void append_point(std::string& out, std::span<const double> p) {
  out += '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ',';
    append_real(out, p[i]);
  }
  out += ')';
}

}  // namespace

void TreeParams::validate() const {
  if (epsilon < 2) throw ContractViolation("TreeParams: epsilon must be at least 2");
  if (lambda < 1) throw ContractViolation("TreeParams: lambda must be at least 1");
  if (lambda < epsilon - 1) throw ContractViolation("TreeParams: lambda must be at least epsilon - 1");
}

std::vector<double> compute_boundaries(std::span<const double> sorted_dists, int epsilon) {
  if (epsilon < 1) throw InvalidPartition("compute_boundaries: epsilon must be positive");
  const auto eps = static_cast<std::size_t>(epsilon);
  if (sorted_dists.size() < eps) {
    throw InvalidPartition("compute_boundaries: " + std::to_string(sorted_dists.size()) +
                           " distances cannot form " + std::to_string(epsilon) + " subsets");
  }
  const std::size_t step = sorted_dists.size() / eps;
  std::vector<double> mu(eps, 0.0);
  for (std::size_t i = 1; i < eps; ++i) {
    mu[i] = (sorted_dists[i * step - 1] + sorted_dists[i * step]) / 2.0;
  }
  return mu;
}

double compute_sigma(std::span<const SubsetBounds> subsets) {
  double sigma = 0.0;
  const SubsetBounds* prev = nullptr;
  for (const SubsetBounds& s : subsets) {
    if (s.count == 0) continue;
    if (prev != nullptr) sigma = std::max(sigma, std::max(0.0, (s.lower - prev->upper) / 2.0));
    prev = &s;
  }
  return sigma;
}

std::size_t route(std::span<const double> boundaries, double dist) {
  const auto upper = boundaries.subspan(1);
  return static_cast<std::size_t>(std::lower_bound(upper.begin(), upper.end(), dist) - upper.begin());
}

PromotionPlan plan_promotion(std::span<const Point> stored, const Point& incoming,
                             std::size_t vantage_index, int epsilon) {
  if (vantage_index >= stored.size()) throw ContractViolation("plan_promotion: vantage index out of range");
  const auto eps = static_cast<std::size_t>(epsilon);

  std::vector<const Point*> all;
  all.reserve(stored.size() + 1);
  for (const Point& p : stored) all.push_back(&p);
  all.push_back(&incoming);

  PromotionPlan plan;
  plan.vantage = stored[vantage_index];

  std::vector<double> dists(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) dists[i] = euclidean_distance(*all[i], plan.vantage);
  std::vector<double> sorted = dists;
  std::sort(sorted.begin(), sorted.end());
  plan.boundaries = compute_boundaries(sorted, epsilon);

  plan.children.resize(eps);
  plan.subsets.resize(eps);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t c = route(plan.boundaries, dists[i]);
    plan.children[c].push_back(*all[i]);
    SubsetBounds& b = plan.subsets[c];
    if (b.count == 0) {
      b.lower = b.upper = dists[i];
    } else {
      b.lower = std::min(b.lower, dists[i]);
      b.upper = std::max(b.upper, dists[i]);
    }
    ++b.count;
  }
  plan.sigma = compute_sigma(plan.subsets);
  return plan;
}

namespace {

bool overfull(const PromotionPlan& plan, std::size_t lambda) {
  return std::any_of(plan.children.begin(), plan.children.end(), [&](const auto& c) { return c.size() > lambda; });
}

// Whether an over-capacity leaf could have been promoted when its last point
// arrived, i.e. some vantage among the earlier points splits it within capacity.
bool splittable(const PointBlock& block, std::size_t lambda, int epsilon) {
  std::vector<Point> stored;
  for (std::size_t i = 0; i + 1 < block.size(); ++i) stored.push_back(block.at(i));
  const Point last = block.at(block.size() - 1);
  for (std::size_t v = 0; v < stored.size(); ++v) {
    if (!overfull(plan_promotion(stored, last, v, epsilon), lambda)) return true;
  }
  return false;
}

}  // namespace

VpTree::VpTree(std::size_t dim, TreeParams params, RngSeed vantage_seed)
    : dim_(dim), params_(params), rng_(vantage_seed) {
  if (dim == 0) throw ContractViolation("VpTree: dimension must be at least 1");
  params_.validate();
}

void VpTree::insert(std::span<const double> p) {
  if (p.size() != dim_) throw ContractViolation("VpTree::insert: dimension mismatch");
  if (nodes_.empty()) {
    nodes_.emplace_back(Leaf{PointBlock(dim_, static_cast<std::size_t>(params_.lambda))});
  }
  NodeId id = 0;
  while (const auto* common = std::get_if<Common>(&nodes_[id])) {
    id = common->children[route(common->boundaries, euclidean_distance(common->vantage.coords(), p))];
  }
  auto& leaf = std::get<Leaf>(nodes_[id]);
  if (leaf.points.size() < static_cast<std::size_t>(params_.lambda)) {
    leaf.points.push_back(p);
  } else {
    promote(id, p);
  }
  ++size_;
}

void VpTree::promote(NodeId leaf_id, std::span<const double> p) {
  const auto lambda = static_cast<std::size_t>(params_.lambda);
  std::vector<Point> stored;
  {
    const PointBlock& block = std::get<Leaf>(nodes_[leaf_id]).points;
    stored.reserve(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) stored.push_back(block.at(i));
  }
  // The vantage is drawn at random. Exact duplicates can crowd one shell past
  // capacity whatever the split; the other vantages are then tried in turn and,
  // if none works, the leaf absorbs the point past capacity.
  const Point incoming(std::vector<double>(p.begin(), p.end()));
  const std::size_t first = rng_.below(stored.size());
  std::optional<PromotionPlan> chosen;
  for (std::size_t k = 0; k < stored.size() && !chosen; ++k) {
    PromotionPlan plan = plan_promotion(stored, incoming, (first + k) % stored.size(), params_.epsilon);
    if (!overfull(plan, lambda)) chosen = std::move(plan);
  }
  if (!chosen) {
    std::get<Leaf>(nodes_[leaf_id]).points.push_back(p);
    return;
  }
  PromotionPlan& plan = *chosen;

  Common common{std::move(plan.vantage), std::move(plan.boundaries), plan.sigma, {}};
  common.children.reserve(plan.children.size());
  for (const auto& child_points : plan.children) {
    PointBlock block(dim_, lambda);
    for (const Point& q : child_points) block.push_back(q.coords());
    common.children.push_back(static_cast<NodeId>(nodes_.size()));
    nodes_.emplace_back(Leaf{std::move(block)});
  }
  nodes_[leaf_id] = std::move(common);
  ++promotions_;
}

double VpTree::nearest_distance(std::span<const double> q) const {
  if (q.size() != dim_) throw ContractViolation("VpTree::nearest_distance: dimension mismatch");
  if (empty()) throw NoNeighbors("VpTree::nearest_distance: tree is empty");
  return search(0, q);
}

double VpTree::search(NodeId id, std::span<const double> q) const {
  const Node& n = nodes_[id];
  if (const auto* leaf = std::get_if<Leaf>(&n)) return leaf->points.min_distance(q);

  const auto& common = std::get<Common>(n);
  const auto& mu = common.boundaries;
  const double sigma = common.sigma;
  const std::size_t last = mu.size() - 1;
  const double dv = euclidean_distance(common.vantage.coords(), q);

  double best = kInf;
  for (std::size_t i = 0; i < last; ++i) {
    // Shell 0 starts at distance 0 inclusive, so its lower test always holds.
    const bool above_lower = i == 0 || mu[i] - sigma < dv;
    if (above_lower && dv <= mu[i + 1] + sigma) best = std::min(best, search(common.children[i], q));
  }
  if (dv > mu[last]) best = std::min(best, search(common.children[last], q));

  // Only possible when every explored shell came out of promotion empty.
  if (best == kInf) best = exhaustive(id, q);
  return best;
}

double VpTree::exhaustive(NodeId id, std::span<const double> q) const {
  const Node& n = nodes_[id];
  if (const auto* leaf = std::get_if<Leaf>(&n)) return leaf->points.min_distance(q);
  double best = kInf;
  for (NodeId c : std::get<Common>(n).children) best = std::min(best, exhaustive(c, q));
  return best;
}

void VpTree::collect(NodeId id, std::vector<Point>& out) const {
  const Node& n = nodes_[id];
  if (const auto* leaf = std::get_if<Leaf>(&n)) {
    for (std::size_t i = 0; i < leaf->points.size(); ++i) out.push_back(leaf->points.at(i));
    return;
  }
  for (NodeId c : std::get<Common>(n).children) collect(c, out);
}

std::vector<Point> VpTree::points() const {
  std::vector<Point> out;
  out.reserve(size_);
  if (!nodes_.empty()) collect(0, out);
  return out;
}

std::optional<std::string> VpTree::find_violation() const {
  if (nodes_.empty()) {
    if (size_ != 0) return "empty tree reports nonzero size";
    return std::nullopt;
  }

  struct Ancestor {
    const Common* node;
    std::size_t child;
  };
  const auto lambda = static_cast<std::size_t>(params_.lambda);
  const auto eps = static_cast<std::size_t>(params_.epsilon);
  std::size_t counted = 0;
  std::vector<Ancestor> path;
  std::optional<std::string> problem;

  auto visit = [&](auto&& self, NodeId id) -> void {
    if (problem) return;
    const Node& n = nodes_[id];
    if (const auto* leaf = std::get_if<Leaf>(&n)) {
      if (leaf->points.size() > lambda && splittable(leaf->points, lambda, params_.epsilon)) {
        problem = "leaf " + std::to_string(id) + " holds " + std::to_string(leaf->points.size()) +
                  " points, capacity " + std::to_string(lambda);
        return;
      }
      for (std::size_t i = 0; i < leaf->points.size(); ++i) {
        const Point p = leaf->points.at(i);
        for (const Ancestor& a : path) {
          const double d = euclidean_distance(a.node->vantage, p);
          if (route(a.node->boundaries, d) != a.child) {
            problem = "point in leaf " + std::to_string(id) + " violates shell " + std::to_string(a.child) +
                      " of an ancestor";
            return;
          }
        }
      }
      counted += leaf->points.size();
      return;
    }
    const auto& common = std::get<Common>(n);
    if (common.children.size() != eps || common.boundaries.size() != eps) {
      problem = "common node " + std::to_string(id) + " does not have epsilon children";
      return;
    }
    if (common.boundaries[0] != 0.0) problem = "common node " + std::to_string(id) + " has mu_0 != 0";
    for (std::size_t i = 1; i < eps && !problem; ++i) {
      if (common.boundaries[i] < common.boundaries[i - 1]) {
        problem = "common node " + std::to_string(id) + " has decreasing boundaries";
      }
    }
    if (!(common.sigma >= 0.0)) problem = "common node " + std::to_string(id) + " has negative sigma";
    if (problem) return;

    std::vector<Point> first_shell;
    collect(common.children[0], first_shell);
    if (std::find(first_shell.begin(), first_shell.end(), common.vantage) == first_shell.end()) {
      problem = "vantage point of node " + std::to_string(id) + " is missing from shell 0";
      return;
    }
    for (std::size_t c = 0; c < eps; ++c) {
      path.push_back({&common, c});
      self(self, common.children[c]);
      path.pop_back();
    }
  };
  visit(visit, 0);
  if (problem) return problem;
  if (counted != size_) {
    return "tree reports size " + std::to_string(size_) + " but leaves hold " + std::to_string(counted);
  }
  return std::nullopt;
}

std::string VpTree::dump() const {
  std::string out;
  if (nodes_.empty()) return "empty\n";
  auto visit = [&](auto&& self, NodeId id, std::size_t depth) -> void {
    out.append(depth * 2, ' ');
    const Node& n = nodes_[id];
    if (const auto* leaf = std::get_if<Leaf>(&n)) {
      out += "leaf points=[";
      for (std::size_t i = 0; i < leaf->points.size(); ++i) {
        if (i > 0) out += ',';
        append_point(out, leaf->points.at(i).coords());
      }
      out += "]\n";
      return;
    }
    const auto& common = std::get<Common>(n);
    out += "common vantage=";
    append_point(out, common.vantage.coords());
    out += " mu=[";
    for (std::size_t i = 0; i < common.boundaries.size(); ++i) {
      if (i > 0) out += ',';
      append_real(out, common.boundaries[i]);
    }
    out += "] sigma=";
    append_real(out, common.sigma);
    out += '\n';
    for (NodeId c : common.children) self(self, c, depth + 1);
  };
  visit(visit, 0, 0);
  return out;
}

}  // namespace vppart
