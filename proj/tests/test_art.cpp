#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "vppart/art.hpp"
#include "vppart/errors.hpp"
#include "vppart/failure_sim.hpp"
#include "vppart/point_block.hpp"

using namespace vppart;

namespace {

ArtConfig config_for(std::size_t dim, int eps = 3, int lambda = 10, std::size_t k = 10) {
  ArtConfig c;
  c.k = k;
  c.tree = TreeParams{eps, lambda};
  c.domain = InputDomain::unit(dim);
  return c;
}

double brute_min(const std::vector<Point>& pts, std::span<const double> q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, euclidean_distance(p.coords(), q));
  return best;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (Algorithm a : {Algorithm::Rt, Algorithm::Fscs, Algorithm::Vpp}) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("kdfc"), ConfigError);
}

TEST_CASE("argmax keeps the first of tied maxima") {
  const double tied[] = {0.375, 0.05, 0.375};
  CHECK(argmax_first(tied) == 0);
  const double later[] = {0.1, 0.3, 0.2};
  CHECK(argmax_first(later) == 1);
  CHECK_THROWS_AS(argmax_first({}), ContractViolation);
}

TEST_CASE("farthest candidate from a single executed point") {
  // Executed {0.5}; candidates at 0.125, 0.45, 0.875 have min distances
  // 0.375, ~0.05, 0.375. The two ties are exact in binary, so the first wins.
  PointBlock executed(1);
  executed.push_back(std::vector<double>{0.5});
  const double candidates[] = {0.125, 0.45, 0.875};
  std::vector<double> dists;
  for (double c : candidates) dists.push_back(executed.min_distance(std::span<const double>(&c, 1)));
  REQUIRE(dists.size() == 3);
  CHECK(dists[0] == 0.375);
  CHECK(dists[1] == doctest::Approx(0.05));
  CHECK(dists[2] == 0.375);
  CHECK(candidates[argmax_first(dists)] == 0.125);
}

TEST_CASE("nearest distances from a one-leaf tree") {
  VpTree tree(1, TreeParams{3, 10}, {1, 2});
  tree.insert(Point{0.2});
  tree.insert(Point{0.8});
  const double candidates[] = {0.5, 0.05, 0.95};
  std::vector<double> dists;
  for (double c : candidates) dists.push_back(tree.nearest_distance(std::span<const double>(&c, 1)));
  CHECK(dists[0] == doctest::Approx(0.3));
  CHECK(dists[1] == doctest::Approx(0.15));
  CHECK(dists[2] == doctest::Approx(0.15));
  CHECK(candidates[argmax_first(dists)] == 0.5);
}

TEST_CASE("random tester stays in the domain and is reproducible") {
  const InputDomain dom(Point{-2.0, 10.0}, Point{3.0, 11.0});
  ArtConfig c = config_for(2);
  c.domain = dom;
  RandomTester a(c, {5, 1}), b(c, {5, 1});
  for (int i = 0; i < 1000; ++i) {
    const Point p = a.next();
    CHECK(dom.contains(p.coords()));
    CHECK(p == b.next());
    a.record(p);
    b.record(p);
  }
  RandomTester one(config_for(1), {6, 1});
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += one.next()[0];
  CHECK(std::abs(sum / 10000 - 0.5) <= 0.02);
}

TEST_CASE("select_next needs an executed test") {
  FscsArt f(config_for(2), {1, 1});
  CHECK_THROWS_AS(f.select_next(), ContractViolation);
  VppArt v(config_for(2), {1, 1}, {1, 2});
  CHECK_THROWS_AS(v.select_next(), ContractViolation);
  CHECK_NOTHROW(f.next());
}

TEST_CASE("fscs picks the candidate with the largest exact nearest distance") {
  for (std::size_t dim : {1u, 2u, 5u}) {
    FscsArt f(config_for(dim), {dim, 1});
    std::vector<Point> executed;
    for (int step = 0; step < 150; ++step) {
      const Point p = f.next();
      if (step > 0) {
        const auto cands = f.last_candidates();
        const auto dists = f.last_candidate_distances();
        REQUIRE(dists.size() == 10);
        std::vector<double> exact;
        for (std::size_t c = 0; c < 10; ++c) exact.push_back(brute_min(executed, cands.subspan(c * dim, dim)));
        const double chosen = brute_min(executed, p.coords());
        for (double e : exact) CHECK(chosen >= e);
        for (std::size_t c = 0; c < 10; ++c) CHECK(dists[c] == doctest::Approx(exact[c]).epsilon(1e-12));
      }
      f.record(p);
      executed.push_back(p);
      CHECK(f.executed_count() == executed.size());
    }
  }
}

TEST_CASE("single candidate is always returned") {
  FscsArt f(config_for(2, 3, 10, 1), {3, 1});
  f.record(f.next());
  const Point p = f.select_next();
  const auto c = f.last_candidates();
  CHECK(std::vector<double>(c.begin(), c.end()) == std::vector<double>(p.coords().begin(), p.coords().end()));
}

TEST_CASE("vpp matches fscs while its tree is a single leaf") {
  for (std::size_t dim : {1u, 3u, 10u}) {
    const ArtConfig c = config_for(dim, 3, 1000);
    FscsArt f(c, {40 + dim, 1});
    VppArt v(c, {40 + dim, 1}, {40 + dim, 2});
    for (int step = 0; step < 300; ++step) {
      const Point a = f.next();
      const Point b = v.next();
      REQUIRE(a == b);
      f.record(a);
      v.record(b);
    }
    CHECK(v.tree().promotions() == 0);
  }
}

TEST_CASE("vpp candidate distances are never below the exact ones") {
  const std::size_t dim = 2;
  FscsArt f(config_for(dim), {77, 1});
  VppArt v(config_for(dim), {77, 1}, {77, 2});
  std::vector<Point> executed;
  std::size_t agree = 0, steps = 0;
  for (int step = 0; step < 500; ++step) {
    const Point pv = v.next();
    if (step > 0) {
      const auto cands = v.last_candidates();
      const auto dists = v.last_candidate_distances();
      for (std::size_t c = 0; c < dists.size(); ++c) {
        REQUIRE(dists[c] >= brute_min(executed, cands.subspan(c * dim, dim)));
      }
      // Same executed set and candidate stream: compare with the exact choice.
      FscsArt oracle(config_for(dim), {0, 1});
      std::vector<double> exact;
      for (std::size_t c = 0; c < dists.size(); ++c) exact.push_back(brute_min(executed, cands.subspan(c * dim, dim)));
      const std::size_t best = argmax_first(exact);
      agree += std::equal(pv.coords().begin(), pv.coords().end(), cands.begin() + static_cast<std::ptrdiff_t>(best * dim))
                   ? 1
                   : 0;
      ++steps;
    }
    v.record(pv);
    executed.push_back(pv);
  }
  CHECK(v.executed_count() == 500);
  MESSAGE("vpp chose the exact farthest candidate in " << agree << " of " << steps << " steps");
  CHECK(v.tree().promotions() > 0);
}

TEST_CASE("run_until_failure basics") {
  const auto dom = InputDomain::unit(2);
  RandomStream rng({1, 0});
  const FailureProfile everything = make_profile(Pattern::Block, 1.0, dom, rng);
  for (Algorithm a : {Algorithm::Rt, Algorithm::Fscs, Algorithm::Vpp}) {
    const auto r = run_until_failure(a, everything, config_for(2), 9, 10);
    CHECK(r.f_measure == 1);
    CHECK_FALSE(r.exhausted);
    CHECK(r.algorithm == a);
    CHECK(r.f_time >= 0.0);
  }
  CHECK_THROWS_AS(run_until_failure(Algorithm::Rt, everything, config_for(2), 9, 0), ContractViolation);
  CHECK_THROWS_AS(run_until_failure(Algorithm::Rt, everything, config_for(3), 9, 5), ContractViolation);

  RandomStream rng2({2, 0});
  const FailureProfile tiny = make_profile(Pattern::Block, 1e-9, dom, rng2);
  const auto r = run_until_failure(Algorithm::Fscs, tiny, config_for(2), 3, 25);
  CHECK(r.exhausted);
  CHECK(r.f_measure == 25);
}

TEST_CASE("default cap") {
  CHECK(default_cap(0.01) == 1000);
  CHECK(default_cap(0.003) == 3340);
  CHECK(default_cap(0.5, 2.0) == 4);
}

TEST_CASE("same seed, same trial; no promotion means equal fscs and vpp f-measures") {
  const auto dom = InputDomain::unit(3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomStream rng({s, 0});
    const auto prof = make_profile(Pattern::Block, 0.05, dom, rng);
    const auto a = run_until_failure(Algorithm::Vpp, prof, config_for(3), s, 200);
    const auto b = run_until_failure(Algorithm::Vpp, prof, config_for(3), s, 200);
    CHECK(a.f_measure == b.f_measure);
    const auto f = run_until_failure(Algorithm::Fscs, prof, config_for(3, 3, 500), s, 200);
    const auto v = run_until_failure(Algorithm::Vpp, prof, config_for(3, 3, 500), s, 200);
    CHECK(f.f_measure == v.f_measure);
  }
}
