#pragma once

// Property suites shared by the `suite` command and the acceptance test.
// Each suite returns one CriterionResult; flexes reported along the way are
// collected in a FlexPool for the finite-difference check.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rigidkit/error.hpp"
#include "rigidkit/framework.hpp"
#include "rigidkit/graph.hpp"
#include "rigidkit/lq.hpp"
#include "rigidkit/moves.hpp"
#include "rigidkit/polytope.hpp"
#include "rigidkit/random.hpp"
#include "rigidkit/sparsity.hpp"

namespace rigidkit::suites {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct FlexSample {
  Framework framework;
  Vector flex;
  std::string origin;
};

struct FlexPool {
  std::vector<FlexSample> lq;
  std::vector<FlexSample> poly;
};

// Stream ids for derive_seed; one per suite so suites never share draws.
enum Stream : std::uint64_t {
  kOracleStream = 1,
  kSmallCompleteStream = 2,
  kTightLqStream = 3,
  kConstructStream = 4,
  kInvarianceStream = 7,
  kRoundTripStream = 8,
};

namespace detail {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects failure messages, keeping only the first few for the summary.
class Failures {
 public:
  void add(const std::string& message) {
    if (count_++ < 3) first_.push_back(message);
  }
  bool empty() const { return count_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const std::string& m : first_) s += "; " + m;
    return s;
  }

 private:
  long count_ = 0;
  std::vector<std::string> first_;
};

inline CriterionResult finish(int id, std::string name, const Failures& failures, const std::string& ok_detail,
                              const Timer& timer) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.passed = failures.empty();
  r.detail = r.passed ? ok_detail : failures.summary();
  r.seconds = timer.seconds();
  return r;
}

inline std::string describe(const Graph& g) {
  return "n=" + std::to_string(g.vertex_count()) + " m=" + std::to_string(g.edge_count());
}

}  // namespace detail

/// Random spanning tree (random attachment) plus each remaining pair with
/// probability `density`.
inline Graph random_connected_graph(int n, double density, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<char>> used(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.index(static_cast<std::size_t>(v)));
    edges.emplace_back(u, v);
    used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!used[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] && rng.unit() < density) edges.emplace_back(u, v);
  return Graph::make(n, edges);
}

/// Removes `count` random edges from g while keeping it connected. Edges whose
/// removal would disconnect are skipped.
inline Graph remove_random_edges(Graph g, int count, Rng& rng) {
  for (int removed = 0; removed < count;) {
    std::vector<Edge> candidates;
    for (const Edge& e : g.edges()) {
      std::vector<Edge> rest;
      for (const Edge& f : g.edges())
        if (f != e) rest.push_back(f);
      if (is_connected(g.vertex_count(), rest)) candidates.push_back(e);
    }
    if (candidates.empty()) break;
    const Edge e = candidates[rng.index(candidates.size())];
    g = g.without_edge(e.u, e.v);
    ++removed;
  }
  return g;
}

inline std::vector<Edge> non_edges(const Graph& g) {
  std::vector<Edge> out;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = u + 1; v < g.vertex_count(); ++v)
      if (!g.has_edge(u, v)) out.emplace_back(u, v);
  return out;
}

// ------------------------------------------------------------------ 1

/// Pebble game against brute force: every connected graph on <= 6 labelled
/// vertices plus 200 random connected graphs on <= 10 vertices.
inline CriterionResult oracle_equivalence(std::uint64_t seed) {
  detail::Timer timer;
  detail::Failures failures;
  const SparsityParams params_list[] = {{2, 2}, {2, 3}, {2, 1}};
  long compared = 0;

  const auto compare = [&](const Graph& g, SparsityParams params) {
    ++compared;
    const SparsityVerdict fast = is_sparse_pebble(g, params);
    const SparsityVerdict slow = is_sparse_bruteforce(g, params);
    if (fast.is_sparse != slow.is_sparse || fast.is_tight != slow.is_tight) {
      failures.add("(" + std::to_string(params.k) + "," + std::to_string(params.l) + ") disagree on " + detail::describe(g));
    } else if (fast.witness && !violates_count(g, *fast.witness, params)) {
      failures.add("pebble witness does not violate the count on " + detail::describe(g));
    }
  };

  for (int n = 1; n <= 6; ++n) {
    std::vector<Edge> all;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
    const std::uint32_t limit = 1u << all.size();
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
      std::vector<Edge> chosen;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (mask & (1u << i)) chosen.push_back(all[i]);
      if (!is_connected(n, chosen)) continue;
      const Graph g = Graph::make(n, std::span<const Edge>(chosen));
      for (SparsityParams params : params_list) compare(g, params);
    }
  }

  Rng rng(derive_seed(seed, kOracleStream));
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(rng.index(9));
    const double density = rng.uniform(0.05, 0.6);
    const Graph g = random_connected_graph(n, density, rng);
    for (SparsityParams params : params_list) compare(g, params);
  }

  const double elapsed = timer.seconds();
  if (elapsed >= 60.0) failures.add("runtime " + std::to_string(elapsed) + " s exceeds 60 s");
  return detail::finish(1, "pebble game agrees with brute force", failures,
                        "agreement 100% (" + std::to_string(compared) + " verdicts)", timer);
}

// ------------------------------------------------------------------ 2

/// K2 and K3 flexible, K4 rank 6 with every deletion rank 5, for q in
/// {1.5, 3, 5} in the plane.
inline CriterionResult small_complete_lq(std::uint64_t seed, FlexPool* pool = nullptr) {
  detail::Timer timer;
  detail::Failures failures;
  std::ostringstream summary;
  const double qs[] = {1.5, 3.0, 5.0};
  for (std::size_t qi = 0; qi < 3; ++qi) {
    const LqNorm norm = LqNorm::make(qs[qi]);
    const std::uint64_t base = derive_seed(seed, kSmallCompleteStream * 16 + qi);
    const auto collect = [&](const Framework& f, const RigidityReport& r, const std::string& origin) {
      if (!pool) return;
      for (const Vector& u : r.nontrivial_flexes) pool->lq.push_back({f, u, origin});
    };

    int flexible_k2 = 0, flexible_k3 = 0;
    for (int t = 0; t < 20; ++t) {
      const Framework k2 = Framework::make(Graph::complete(2), random_placement(2, 2, base, t), norm);
      const RigidityReport r2 = analyze(k2);
      if (!r2.is_rigid) ++flexible_k2;
      collect(k2, r2, "K2 q=" + std::to_string(qs[qi]));
      const Framework k3 = Framework::make(Graph::complete(3), random_placement(3, 2, base, 100 + t), norm);
      const RigidityReport r3 = analyze(k3);
      if (!r3.is_rigid && r3.nullity == 3) ++flexible_k3;
      collect(k3, r3, "K3 q=" + std::to_string(qs[qi]));
    }
    if (flexible_k2 != 20) failures.add("q=" + std::to_string(qs[qi]) + ": K2 flexible in " + std::to_string(flexible_k2) + "/20");
    if (flexible_k3 != 20) failures.add("q=" + std::to_string(qs[qi]) + ": K3 flexible with nullity 3 in " + std::to_string(flexible_k3) + "/20");

    int full_rank = 0;
    const Graph k4 = Graph::complete(4);
    for (int t = 0; t < 100; ++t) {
      const Framework f = Framework::make(k4, random_placement(4, 2, base, 200 + t), norm);
      if (analyze(f).rank != 6) continue;
      ++full_rank;
      for (const Edge& e : k4.edges()) {
        const Framework cut = f.with_graph(k4.without_edge(e.u, e.v));
        const RigidityReport r = analyze(cut);
        if (r.rank != 5) failures.add("K4-" + to_string(e) + " rank " + std::to_string(r.rank) + " at trial " + std::to_string(t));
        collect(cut, r, "K4-" + to_string(e));
      }
    }
    if (full_rank < 99) failures.add("q=" + std::to_string(qs[qi]) + ": K4 rank 6 in " + std::to_string(full_rank) + "/100");
    summary << (qi ? ", " : "") << "q=" << qs[qi] << ": K4 rank 6 in " << full_rank << "/100";
  }
  return detail::finish(2, "small complete graphs under lq", failures, "K2, K3 flexible 20/20; " + summary.str(), timer);
}

// ------------------------------------------------------------------ 3

/// Tight graphs are rigid at a best-of-20 placement, sparse-not-tight graphs
/// are flexible and graphs breaking the count have dependent rows. q = 3.
inline CriterionResult tightness_vs_lq_rigidity(std::uint64_t seed, FlexPool* pool = nullptr) {
  detail::Timer timer;
  detail::Failures failures;
  const LqNorm norm = LqNorm::make(3.0);
  Rng rng(derive_seed(seed, kTightLqStream));
  const auto best_of_20 = [&](const Graph& g, std::uint64_t trial_seed) {
    return sample_regular_placement(g, norm, 2, trial_seed, 20);
  };
  long unstable = 0;

  try {
    for (int i = 0; i < 50; ++i) {
      // Targets 4..9; a closing vertex-to-K4 can overshoot by up to 3.
      const Graph g = generate_tight_graph(4 + static_cast<int>(rng.index(6)), Scheme::A, rng.next()).graph;
      const int n = g.vertex_count();
      if (!is_two_two_tight(g)) failures.add("generator produced a non-tight graph " + detail::describe(g));
      const SampledPlacement s = best_of_20(g, rng.next());
      if (!s.stable) ++unstable;
      if (s.achieved_rank != 2L * n - 2) failures.add("tight " + detail::describe(g) + " best rank " + std::to_string(s.achieved_rank));
    }

    for (int i = 0; i < 50; ++i) {
      const Graph tight = generate_tight_graph(4 + static_cast<int>(rng.index(6)), Scheme::A, rng.next()).graph;
      const int n = tight.vertex_count();
      const Graph g = remove_random_edges(tight, 1 + static_cast<int>(rng.index(3)), rng);
      const SparsityVerdict pebble = is_sparse_pebble(g, kTwoTwo);
      const SparsityVerdict oracle = is_sparse_bruteforce(g, kTwoTwo);
      if (!pebble.is_sparse || pebble.is_tight || !oracle.is_sparse || oracle.is_tight) {
        failures.add("expected sparse-not-tight " + detail::describe(g));
        continue;
      }
      const SampledPlacement s = best_of_20(g, rng.next());
      if (!s.stable) ++unstable;
      if (s.achieved_rank >= 2L * n - 2) failures.add("sparse-not-tight " + detail::describe(g) + " is rigid");
      if (pool) {
        const Framework f = Framework::make(g, s.placement, norm);
        for (const Vector& u : analyze(f).nontrivial_flexes) pool->lq.push_back({f, u, "sparse " + detail::describe(g)});
      }
    }

    for (int i = 0; i < 20; ++i) {
      Graph g = Graph::complete(1);
      if (i % 2 == 0) {
        const Graph tight = generate_tight_graph(5 + static_cast<int>(rng.index(5)), Scheme::A, rng.next()).graph;
        const std::vector<Edge> extra = non_edges(tight);
        const Edge e = extra[rng.index(extra.size())];
        g = tight.with_edge(e.u, e.v);
      } else {
        // K5 with a pendant path of length 0..9 hanging off a random vertex.
        const int tail = static_cast<int>(rng.index(10));
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < 5; ++u)
          for (int v = u + 1; v < 5; ++v) edges.emplace_back(u, v);
        int prev = static_cast<int>(rng.index(5));
        for (int t = 0; t < tail; ++t) {
          edges.emplace_back(prev, 5 + t);
          prev = 5 + t;
        }
        g = Graph::make(5 + tail, edges);
      }
      if (is_sparse_pebble(g, kTwoTwo).is_sparse) failures.add("expected a violating subgraph in " + detail::describe(g));
      const SampledPlacement s = best_of_20(g, rng.next());
      if (!s.stable) ++unstable;
      if (s.achieved_rank >= static_cast<long>(g.edge_count())) failures.add("violating " + detail::describe(g) + " has independent rows");
    }
  } catch (const Error& e) {
    failures.add(std::string("exception: ") + e.what());
  }
  if (unstable) failures.add(std::to_string(unstable) + " placement(s) failed the 10x stability probe");
  return detail::finish(3, "tightness matches lq rigidity", failures,
                        "50 tight rigid, 50 sparse-not-tight flexible, 20 violating dependent; all ranks stable", timer);
}

// ------------------------------------------------------------------ 4

/// Scheme-B constructions under the max norm, and the converse witnesses.
inline CriterionResult coloured_construction(std::uint64_t seed, FlexPool* pool = nullptr) {
  detail::Timer timer;
  detail::Failures failures;
  const PolytopeNorm linf = PolytopeNorm::linf(2);
  Rng rng(derive_seed(seed, kConstructStream));

  for (int i = 0; i < 50; ++i) {
    const GeneratedGraph gen = generate_tight_graph(4 + static_cast<int>(rng.index(6)), Scheme::B, rng.next());
    try {
      const Framework f = construct_coloured_placement(gen.sequence, linf, {}, rng.next());
      const PolytopeAnalysis a = analyze_poly(f);
      const std::string tag = detail::describe(f.graph());
      if (!a.colouring.well_positioned) failures.add(tag + " not well-positioned");
      if (!a.criteria || !a.criteria->edge_disjoint_spanning_trees) failures.add(tag + " classes are not spanning trees");
      if (!a.report.is_minimal) failures.add(tag + " not minimally rigid");
      if (!is_two_two_tight(f.graph())) failures.add(tag + " not tight");
      for (const Edge& e : f.graph().edges()) {
        const Framework cut = f.with_graph(f.graph().without_edge(e.u, e.v));
        const PolytopeAnalysis c = analyze_poly(cut);
        if (c.report.is_rigid) failures.add(tag + " minus " + to_string(e) + " still rigid");
        if (pool)
          for (const Vector& u : c.report.nontrivial_flexes) pool->poly.push_back({cut, u, tag + " minus " + to_string(e)});
      }
    } catch (const Error& e) {
      failures.add(std::string("construction failed: ") + e.what());
    }
  }

  // Converse: random well-positioned placements where some colour class does
  // not span.
  int found = 0;
  for (int attempt = 0; found < 20 && attempt < 10000; ++attempt) {
    const int n = 3 + static_cast<int>(rng.index(6));
    const Graph g = random_connected_graph(n, rng.uniform(0.2, 0.9), rng);
    const Framework f = Framework::make(g, random_placement(n, 2, rng.next(), 0), linf);
    const FrameworkColouring colouring = colour_framework(f);
    if (!colouring.well_positioned) continue;
    int missing = 0;
    for (int k = 1; k <= 2 && !missing; ++k)
      if (!spans_all_vertices(g, colouring.class_edges(g, k))) missing = k;
    if (!missing) continue;
    ++found;
    const std::string tag = detail::describe(g) + " colour " + std::to_string(missing);
    const PolytopeAnalysis a = analyze_poly(f);
    if (a.report.is_rigid) failures.add(tag + " reported rigid");
    Vector u = partition_flex_witness(f, missing);
    u.normalize();
    const Matrix r = rigidity_matrix_poly(f);
    const double residual = (r * u).norm();
    const double nontrivial = remove_translation(u, n, 2).norm();
    if (residual >= 1e-9) failures.add(tag + " witness residual " + std::to_string(residual));
    if (nontrivial <= 1e-6) failures.add(tag + " witness is a translation");
    if (pool) pool->poly.push_back({f, u, "witness " + tag});
  }
  if (found < 20) failures.add("only " + std::to_string(found) + " converse placements found");
  return detail::finish(4, "coloured construction and spanning trees", failures,
                        "50 constructions minimal with edge-disjoint spanning trees; 20 witnesses verified", timer);
}

// ------------------------------------------------------------------ 5

/// The K4 placement built by vertex-to-K4 on K1 with epsilon = 0.1.
inline CriterionResult example_k4_colouring() {
  detail::Timer timer;
  detail::Failures failures;
  MoveSequence seq;
  seq.moves.push_back(VertexToK4{0, {}});
  PlacementParams params;
  params.epsilon = 0.1;
  params.r = 1.0;
  const Framework f = construct_coloured_placement(seq, PolytopeNorm::linf(2), params, 0);
  const FrameworkColouring c = colour_framework(f);
  // 0-based labels: w1 w2 w3 w4 are vertices 0 1 2 3.
  const std::vector<std::pair<Edge, int>> expected{{Edge(0, 1), 1}, {Edge(0, 2), 1}, {Edge(2, 3), 1},
                                                   {Edge(0, 3), 2}, {Edge(1, 2), 2}, {Edge(1, 3), 2}};
  for (const auto& [e, colour] : expected) {
    const long i = f.graph().edge_index(e.u, e.v);
    if (i < 0 || c.colours[static_cast<std::size_t>(i)] != colour) failures.add("edge " + to_string(e) + " colour mismatch");
  }
  const Matrix expected_p = (Matrix(4, 2) << 0, 0, 1, 0, 1, 0.9, 0, 1.1).finished();
  if ((f.placement() - expected_p).cwiseAbs().maxCoeff() > 1e-12) failures.add("placement differs from the recipe");
  const PolytopeAnalysis a = analyze_poly(f);
  if (a.report.rank != 6) failures.add("rank " + std::to_string(a.report.rank));
  return detail::finish(5, "K4 coloured placement", failures, "colours {01,02,23}->1, {03,12,13}->2; rank 6", timer);
}

// ------------------------------------------------------------------ 6

inline constexpr double kFiniteDifferenceGrid[] = {1e-2, 1e-3, 1e-4, 1e-5};

/// Largest t for which no edge changes its maximizing facet or sign along u.
inline double colour_stability_radius(const Framework& f, const Vector& u) {
  const PolytopeNorm& p = std::get<PolytopeNorm>(f.norm());
  const int d = f.dim();
  double radius = std::numeric_limits<double>::infinity();
  for (const Edge& e : f.graph().edges()) {
    const Vector a = f.edge_vector(e);
    const Vector w = u.segment(static_cast<Eigen::Index>(e.u) * d, d) - u.segment(static_cast<Eigen::Index>(e.v) * d, d);
    std::vector<double> value;
    double drift = 0.0;
    for (const Vector& b : p.facets()) {
      value.push_back(std::abs(a.dot(b)));
      drift = std::max(drift, std::abs(w.dot(b)));
    }
    std::sort(value.rbegin(), value.rend());
    const double gap = value.size() > 1 ? std::min(value[0] - value[1], value[0]) : value[0];
    if (drift > 0.0) radius = std::min(radius, gap / (4.0 * drift));
  }
  return radius;
}

/// Finite-difference check of every collected flex, plus translations.
inline CriterionResult flex_consistency(const FlexPool& pool) {
  detail::Timer timer;
  detail::Failures failures;
  const std::vector<double> grid(std::begin(kFiniteDifferenceGrid), std::end(kFiniteDifferenceGrid));
  double worst_lq = 0.0, worst_poly = 0.0, worst_translation = 0.0;

  const auto check_translation = [&](const Framework& f) {
    const int n = f.graph().vertex_count(), d = f.dim();
    const Matrix t = translation_basis(n, d);
    for (Eigen::Index c = 0; c < t.cols(); ++c)
      for (const EdgeDeviation& row : finite_difference_flex_check(f, t.col(c), grid))
        for (double dev : row.deviation) worst_translation = std::max(worst_translation, dev);
  };

  // Deviations within a few ulps of the edge length are rounding, not
  // signal, and count as zero when comparing successive ratios.
  long lq_edges = 0, over_bound = 0, not_monotone = 0;
  std::vector<double> final_ratios;
  for (const FlexSample& s : pool.lq) {
    double sample_worst = 0.0;
    for (const EdgeDeviation& row : finite_difference_flex_check(s.framework, s.flex, grid)) {
      ++lq_edges;
      const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, norm_length(s.framework.norm(), s.framework.edge_vector(row.edge)));
      std::vector<double> ratio;
      for (std::size_t i = 0; i < grid.size(); ++i) ratio.push_back(row.deviation[i] <= floor ? 0.0 : row.deviation[i] / grid[i]);
      bool monotone = true;
      for (std::size_t i = 1; i < ratio.size(); ++i) monotone = monotone && ratio[i] <= ratio[i - 1];
      if (!monotone && not_monotone++ == 0) failures.add(s.origin + " edge " + to_string(row.edge) + " ratio not decreasing");
      if (!(ratio.back() < 1e-6)) ++over_bound;
      sample_worst = std::max(sample_worst, ratio.back());
    }
    final_ratios.push_back(sample_worst);
    worst_lq = std::max(worst_lq, sample_worst);
    check_translation(s.framework);
  }
  std::sort(final_ratios.begin(), final_ratios.end());
  const double median_lq = final_ratios.empty() ? 0.0 : final_ratios[final_ratios.size() / 2];
  if (over_bound) {
    std::ostringstream m;
    m << "lq ratio at t=1e-5 is >= 1e-6 on " << over_bound << "/" << lq_edges << " edges (per-flex median "
      << median_lq << ", max " << worst_lq << "; the ratio shrinks linearly in t, i.e. second-order length change)";
    failures.add(m.str());
  }

  for (const FlexSample& s : pool.poly) {
    const double radius = colour_stability_radius(s.framework, s.flex);
    std::vector<double> small;
    for (double t : grid)
      if (t < radius) small.push_back(t);
    if (std::isfinite(radius) && radius / 2 < grid.back()) small.push_back(radius / 2);
    if (small.empty()) small = grid;
    for (const EdgeDeviation& row : finite_difference_flex_check(s.framework, s.flex, small)) {
      for (double dev : row.deviation) {
        worst_poly = std::max(worst_poly, dev);
        if (dev > 1e-12) failures.add(s.origin + " edge " + to_string(row.edge) + " deviates " + std::to_string(dev));
      }
    }
    check_translation(s.framework);
  }
  if (worst_translation > 1e-12) failures.add("translation deviation " + std::to_string(worst_translation));

  std::ostringstream ok;
  ok << pool.lq.size() << " lq flexes (max ratio at t=1e-5: " << worst_lq << "), " << pool.poly.size()
     << " polytopic flexes (max deviation " << worst_poly << "), translations max " << worst_translation;
  return detail::finish(6, "finite differences match flexes", failures, ok.str(), timer);
}

// ------------------------------------------------------------------ 7

/// Signed permutations and translations keep lq ranks; the linear map taking
/// two random facets to the standard basis keeps polytopic verdicts.
inline CriterionResult invariance(std::uint64_t seed) {
  detail::Timer timer;
  detail::Failures failures;
  Rng rng(derive_seed(seed, kInvarianceStream));
  const double qs[] = {1.5, 3.0, 5.0};
  int lq_cases = 0;

  for (int i = 0; i < 60; ++i) {
    const int n = 2 + static_cast<int>(rng.index(9));
    const Graph g = i % 2 ? generate_tight_graph(n, Scheme::A, rng.next()).graph
                          : random_connected_graph(n, rng.uniform(0.1, 0.7), rng);
    const LqNorm norm = LqNorm::make(qs[i % 3]);
    const Framework f = Framework::make(g, sample_regular_placement(g, norm, 2, rng.next(), 5).placement, norm);
    SignedPermutation map = SignedPermutation::identity(2);
    if (rng.coin()) std::swap(map.perm[0], map.perm[1]);
    for (int& s : map.signs) s = rng.coin() ? 1 : -1;
    const Vector shift = (Vector(2) << rng.uniform(-5, 5), rng.uniform(-5, 5)).finished();
    const long before = analyze(f).rank;
    const long mapped = analyze(apply_linear_isometry(f, map)).rank;
    const long shifted = analyze(apply_linear_isometry(f, map, shift)).rank;
    ++lq_cases;
    if (before != mapped || before != shifted) {
      failures.add(detail::describe(g) + " rank " + std::to_string(before) + " -> " + std::to_string(mapped) + "/" +
                   std::to_string(shifted));
    }
  }

  int poly_cases = 0;
  for (int i = 0; i < 20; ++i) {
    Vector b1(2), b2(2);
    do {
      b1 << rng.uniform(-2, 2), rng.uniform(-2, 2);
      b2 << rng.uniform(-2, 2), rng.uniform(-2, 2);
    } while (std::abs(b1(0) * b2(1) - b1(1) * b2(0)) < 0.2);
    const PolytopeNorm norm = PolytopeNorm::make({b1, b2});
    const GeneratedGraph gen = generate_tight_graph(4 + static_cast<int>(rng.index(6)), Scheme::B, rng.next());
    const int n = gen.graph.vertex_count();
    std::vector<Framework> cases;
    try {
      const Framework built = construct_coloured_placement(gen.sequence, norm, {}, rng.next());
      cases.push_back(built);
      const Edge e = built.graph().edges()[rng.index(built.graph().edge_count())];
      cases.push_back(built.with_graph(built.graph().without_edge(e.u, e.v)));
    } catch (const Error& e) {
      failures.add(std::string("construction failed: ") + e.what());
    }
    for (int extra = 0; extra < 3; ++extra) {
      const Framework f = Framework::make(gen.graph, random_placement(n, 2, rng.next(), 0), norm);
      if (colour_framework(f).well_positioned) cases.push_back(f);
    }
    const Matrix a = linf_change_of_basis(norm);
    for (const Framework& f : cases) {
      const PolytopeAnalysis before = analyze_poly(f);
      const Framework g = apply_linear_map(f, a);
      const PolytopeAnalysis after = analyze_poly(g);
      ++poly_cases;
      const bool same = before.report.rank == after.report.rank && before.report.is_rigid == after.report.is_rigid &&
                        before.report.is_minimal == after.report.is_minimal &&
                        before.colouring.colours == after.colouring.colours;
      if (!same) failures.add("norm " + std::to_string(i) + " " + detail::describe(f.graph()) + " verdict changed");
      const auto& facets = std::get<PolytopeNorm>(g.norm()).facets();
      if ((facets[0] - Vector::Unit(2, 0)).norm() > 1e-12 || (facets[1] - Vector::Unit(2, 1)).norm() > 1e-12)
        failures.add("change of basis did not reach the standard facets");
    }
  }
  return detail::finish(7, "isometry and change-of-basis invariance", failures,
                        std::to_string(lq_cases) + " lq rank checks, " + std::to_string(poly_cases) +
                            " polytopic verdicts over 20 norms",
                        timer);
}

// ------------------------------------------------------------------ 8

/// reduce_to_k1 inverts generated sequences and refuses non-tight input.
inline CriterionResult reduction_round_trip(std::uint64_t seed) {
  detail::Timer timer;
  detail::Failures failures;
  Rng rng(derive_seed(seed, kRoundTripStream));
  for (int i = 0; i < 50; ++i) {
    const Scheme scheme = i % 2 ? Scheme::B : Scheme::A;
    const Graph g = generate_tight_graph(2 + static_cast<int>(rng.index(6)), scheme, rng.next()).graph;
    try {
      const ReductionMoves allowed = scheme == Scheme::A ? ReductionMoves::SchemeA : ReductionMoves::SchemeB;
      const Reduction red = reduce_to_k1(g, allowed);
      if (!(replay(red.sequence).relabelled(red.relabel) == g)) failures.add("replay mismatch on " + detail::describe(g));
    } catch (const Error& e) {
      failures.add(detail::describe(g) + ": " + e.what());
    }
  }
  for (int i = 0; i < 20; ++i) {
    // Targets 5..9 so the tight graph is never complete.
    const Graph tight = generate_tight_graph(5 + static_cast<int>(rng.index(5)), Scheme::A, rng.next()).graph;
    Graph g = tight;
    if (i % 2 == 0) {
      g = remove_random_edges(tight, 1, rng);
    } else {
      const std::vector<Edge> extra = non_edges(tight);
      const Edge e = extra[rng.index(extra.size())];
      g = tight.with_edge(e.u, e.v);
    }
    try {
      reduce_to_k1(g);
      failures.add("accepted non-tight " + detail::describe(g));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotTight) failures.add(std::string("wrong error: ") + e.what());
    }
  }
  return detail::finish(8, "reduction round trip", failures, "50 graphs reduced and replayed; 20 non-tight rejected", timer);
}

// -------------------------------------------------------------- groups

/// Runs all eight checks in order, feeding collected flexes to the sixth.
inline std::vector<CriterionResult> run_all(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result = {}) {
  std::vector<CriterionResult> out;
  const auto push = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  FlexPool pool;
  push(oracle_equivalence(seed));
  push(small_complete_lq(seed, &pool));
  push(tightness_vs_lq_rigidity(seed, &pool));
  push(coloured_construction(seed, &pool));
  push(example_k4_colouring());
  push(flex_consistency(pool));
  push(invariance(seed));
  push(reduction_round_trip(seed));
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"oracle", "thm38", "thm410", "invariants", "all"};
  return names;
}

/// Named groups for the command line: oracle = 1; thm38 = 2, 3;
/// thm410 = 4, 5; invariants = 6, 7, 8; all = 1..8.
inline std::vector<CriterionResult> run_named(const std::string& name, std::uint64_t seed,
                                              const std::function<void(const CriterionResult&)>& on_result = {}) {
  std::vector<CriterionResult> out;
  const auto push = [&](CriterionResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  if (name == "oracle") {
    push(oracle_equivalence(seed));
  } else if (name == "thm38") {
    push(small_complete_lq(seed));
    push(tightness_vs_lq_rigidity(seed));
  } else if (name == "thm410") {
    push(coloured_construction(seed));
    push(example_k4_colouring());
  } else if (name == "invariants") {
    FlexPool pool;
    small_complete_lq(seed, &pool);
    tightness_vs_lq_rigidity(seed, &pool);
    coloured_construction(seed, &pool);
    push(flex_consistency(pool));
    push(invariance(seed));
    push(reduction_round_trip(seed));
  } else if (name == "all") {
    return run_all(seed, on_result);
  } else {
    throw Error(ErrorCode::InvalidParameters, "unknown suite \"" + name + "\"");
  }
  return out;
}

}  // namespace rigidkit::suites
