#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rigidkit/moves.hpp"
#include "rigidkit/polytope.hpp"
#include "rigidkit/suites.hpp"

using namespace rigidkit;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Placement points(std::initializer_list<std::pair<double, double>> xs) {
  Placement p(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : xs) {
    p(i, 0) = x;
    p(i, 1) = y;
    ++i;
  }
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ParseError;
}

const PolytopeNorm kMax = PolytopeNorm::linf(2);

/// p1 = 0, p2 = b1, p3 = b1 + (1-eps) b2, p4 = (1+eps) b2 with standard facets.
Framework k4_example(double eps = 0.1) {
  return Framework::make(Graph::complete(4), points({{0, 0}, {1, 0}, {1, 1 - eps}, {0, 1 + eps}}), kMax);
}

int colour_of(const Framework& f, const FrameworkColouring& c, Vertex a, Vertex b) {
  const long i = f.graph().edge_index(a, b);
  EXPECT_GE(i, 0);
  return c.colours.at(static_cast<std::size_t>(i));
}

}  // namespace

TEST(PolytopeNorm, Validation) {
  EXPECT_EQ(code_of([] { PolytopeNorm::make({vec({1, 0}), vec({1, 0})}); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(code_of([] { PolytopeNorm::make({vec({1, 0}), vec({-1, 0})}); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(code_of([] { PolytopeNorm::make({vec({1, 0}), vec({2, 0})}); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(code_of([] { PolytopeNorm::make({vec({0, 0}), vec({0, 1})}); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(code_of([] { PolytopeNorm::make({}); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(PolytopeNorm::make({vec({1, 0}), vec({0, 1}), vec({1, 1})}).facet_count(), 3u);
}

TEST(PolytopeLength, Examples) {
  EXPECT_EQ(polytope_length(vec({1, 0}), kMax), 1.0);
  EXPECT_EQ(polytope_length(vec({1, -1}), kMax), 1.0);
  EXPECT_EQ(polytope_length(vec({2, 0.5}), kMax), 2.0);
}

TEST(PolytopeLength, L1FacetsGiveTheSumOfAbsoluteValues) {
  const PolytopeNorm l1 = PolytopeNorm::l1(2);
  for (const Vector& a : {vec({0.3, -0.9}), vec({-2, -5}), vec({4, 0})})
    EXPECT_DOUBLE_EQ(polytope_length(a, l1), a.cwiseAbs().sum());
}

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa(vec({2, 0.5}), kMax), vec({1, 0}));
  EXPECT_EQ(kappa(vec({1, 1}), kMax), vec({0, 0}));
  EXPECT_EQ(kappa(vec({0, -3}), kMax), vec({0, 1}));
}

TEST(Kappa, ConsistentWithLength) {
  Rng rng(4);
  const PolytopeNorm p = PolytopeNorm::make({vec({1, 0.2}), vec({-0.3, 1}), vec({0.7, 0.7})});
  for (int i = 0; i < 200; ++i) {
    const Vector a = vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    const Vector k = kappa(a, p);
    if (!k.isZero(0.0)) {
      EXPECT_DOUBLE_EQ(polytope_length(a, p), std::abs(a.dot(k)));
    }
  }
}

TEST(Colouring, ExampleK4) {
  const Framework f = k4_example();
  const FrameworkColouring c = colour_framework(f);
  EXPECT_TRUE(c.well_positioned);
  EXPECT_EQ(colour_of(f, c, 0, 1), 1);
  EXPECT_EQ(colour_of(f, c, 0, 2), 1);
  EXPECT_EQ(colour_of(f, c, 2, 3), 1);
  EXPECT_EQ(colour_of(f, c, 0, 3), 2);
  EXPECT_EQ(colour_of(f, c, 1, 2), 2);
  EXPECT_EQ(colour_of(f, c, 1, 3), 2);
}

TEST(Colouring, TiesAndSingleEdges) {
  const Framework tie = Framework::make(Graph::complete(2), points({{0, 0}, {1, 1}}), kMax);
  const FrameworkColouring c = colour_framework(tie);
  EXPECT_FALSE(c.well_positioned);
  ASSERT_EQ(c.offending_edges.size(), 1u);
  EXPECT_EQ(c.offending_edges[0], Edge(0, 1));
  const Framework flat = Framework::make(Graph::complete(2), points({{0, 0}, {1, 0}}), kMax);
  EXPECT_EQ(colour_framework(flat).colours, std::vector<int>{1});
}

TEST(RigidityMatrixPoly, Rows) {
  const Framework flat = Framework::make(Graph::complete(2), points({{0, 0}, {1, 0}}), kMax);
  // kappa returns the facet itself, whatever the sign of a . b.
  EXPECT_EQ(rigidity_matrix_poly(flat), (Matrix(1, 4) << 1, 0, -1, 0).finished());
  const Framework tie = Framework::make(Graph::complete(2), points({{0, 0}, {1, 1}}), kMax);
  EXPECT_EQ(code_of([&] { rigidity_matrix_poly(tie); }), ErrorCode::NotWellPositioned);
  EXPECT_TRUE(rigidity_matrix_poly(tie, true).isZero(0.0));
  const Matrix r = rigidity_matrix_poly(k4_example());
  EXPECT_EQ(r.rows(), 6);
  EXPECT_EQ(r.cols(), 8);
  EXPECT_EQ(numerical_rank(r).rank, 6);
  EXPECT_EQ(oracle::gauss_rank(r), 6);
  EXPECT_LT((r * translation_basis(4, 2)).norm(), 1e-15);
}

TEST(AnalyzePoly, Examples) {
  const PolytopeAnalysis k4 = analyze_poly(k4_example());
  EXPECT_TRUE(k4.report.is_rigid);
  EXPECT_TRUE(k4.report.is_minimal);
  ASSERT_TRUE(k4.criteria);
  EXPECT_TRUE(k4.criteria->edge_disjoint_spanning_trees);
  ASSERT_TRUE(k4.criteria->trees);
  EXPECT_EQ((*k4.criteria->trees)[0], (std::vector<Edge>{Edge(0, 1), Edge(0, 2), Edge(2, 3)}));
  EXPECT_EQ((*k4.criteria->trees)[1], (std::vector<Edge>{Edge(0, 3), Edge(1, 2), Edge(1, 3)}));
  EXPECT_TRUE(k4.criteria_consistent);

  const Framework k3 = Framework::make(Graph::complete(3), points({{0, 0}, {1, 0.3}, {0.2, 0.9}}), kMax);
  EXPECT_FALSE(analyze_poly(k3).report.is_rigid);
  const Framework k2 = Framework::make(Graph::complete(2), points({{0, 0}, {1, 0}}), kMax);
  const PolytopeAnalysis a2 = analyze_poly(k2);
  EXPECT_FALSE(a2.report.is_rigid);
  ASSERT_TRUE(a2.criteria);
  EXPECT_FALSE(a2.criteria->class_spans[1]);
  EXPECT_FALSE(a2.criteria->sufficient_holds && a2.criteria->edge_disjoint_spanning_trees);
}

TEST(AnalyzePoly, RefusesTiesUnlessAllowed) {
  const Framework tie = Framework::make(Graph::complete(2), points({{0, 0}, {1, 1}}), kMax);
  EXPECT_EQ(code_of([&] { analyze_poly(tie); }), ErrorCode::NotWellPositioned);
  PolytopeAnalysisOptions options;
  options.allow_degenerate = true;
  const PolytopeAnalysis a = analyze_poly(tie, options);
  EXPECT_EQ(a.report.rank, 0);
  EXPECT_FALSE(a.criteria);
}

TEST(PartitionWitness, K2) {
  const Framework k2 = Framework::make(Graph::complete(2), points({{0, 0}, {1, 0}}), kMax);
  EXPECT_EQ(code_of([&] { partition_flex_witness(k2, 1); }), ErrorCode::ColourSpans);
  const Vector u = partition_flex_witness(k2, 2);
  EXPECT_TRUE(u.head(2).isZero(0.0));
  EXPECT_FALSE(u.tail(2).isZero(0.0));
  EXPECT_LT((rigidity_matrix_poly(k2) * u).norm(), 1e-15);
  EXPECT_EQ(classify_flex_poly(k2, u), FlexClass::NonTrivial);
}

TEST(PartitionWitness, PathAllColourOne) {
  const Framework p3 = Framework::make(Graph::path(3), points({{0, 0}, {1, 0.1}, {2, -0.1}}), kMax);
  const Vector u = partition_flex_witness(p3, 2);
  EXPECT_LT((rigidity_matrix_poly(p3) * u).norm(), 1e-15);
  EXPECT_EQ(classify_flex_poly(p3, u), FlexClass::NonTrivial);
}

TEST(PartitionWitness, K4ExampleHasNone) {
  const Framework f = k4_example();
  EXPECT_EQ(code_of([&] { partition_flex_witness(f, 1); }), ErrorCode::ColourSpans);
  EXPECT_EQ(code_of([&] { partition_flex_witness(f, 2); }), ErrorCode::ColourSpans);
}

TEST(PartitionWitness, EdgesAreLocallyConstant) {
  // Flexes built from facet-orthogonal blocks leave every length unchanged
  // for small t.
  const Framework p3 = Framework::make(Graph::path(3), points({{0, 0}, {1, 0.1}, {2, -0.1}}), kMax);
  const Vector u = partition_flex_witness(p3, 2);
  for (const EdgeDeviation& row : finite_difference_flex_check(p3, u, {1e-2, 1e-3, 1e-4, 1e-5}))
    for (double d : row.deviation) EXPECT_LE(d, 1e-12);
}

TEST(Construct, K4Example) {
  MoveSequence seq;
  seq.moves.push_back(VertexToK4{0, {}});
  const Framework f = construct_coloured_placement(seq, kMax, {}, 0);
  EXPECT_LT((f.placement() - k4_example().placement()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Construct, HennebergOneColours) {
  MoveSequence seq;
  seq.moves.push_back(VertexToK4{0, {}});
  seq.moves.push_back(Henneberg1{0, 2});
  const Framework f = construct_coloured_placement(seq, kMax, {}, 3);
  ASSERT_EQ(f.graph().vertex_count(), 5);
  const FrameworkColouring c = colour_framework(f);
  EXPECT_EQ(colour_of(f, c, 4, 0), 1);
  EXPECT_EQ(colour_of(f, c, 4, 2), 2);
  EXPECT_TRUE(spanning_tree_criteria(f).edge_disjoint_spanning_trees);
}

TEST(Construct, VertexSplitColours) {
  MoveSequence seq;
  seq.moves.push_back(VertexToK4{0, {}});
  seq.moves.push_back(VertexSplit{0, 1, {2}});  // 01 has colour 1
  const Framework f = construct_coloured_placement(seq, kMax, {}, 0);
  const FrameworkColouring c = colour_framework(f);
  EXPECT_EQ(colour_of(f, c, 4, 0), 2);
  EXPECT_EQ(colour_of(f, c, 4, 1), 1);
  EXPECT_EQ(colour_of(f, c, 4, 2), 1);  // inherits the colour of 02
  EXPECT_TRUE(analyze_poly(f).report.is_minimal);
}

TEST(Construct, RejectsBadInput) {
  MoveSequence v4c;
  v4c.moves.push_back(VertexToK4{0, {}});
  v4c.moves.push_back(VertexToFourCycle{0, 1, 2, {}});
  EXPECT_EQ(code_of([&] { construct_coloured_placement(v4c, kMax, {}, 0); }), ErrorCode::InvalidParameters);
  MoveSequence k4;
  k4.moves.push_back(VertexToK4{0, {}});
  EXPECT_EQ(code_of([&] {
              construct_coloured_placement(k4, PolytopeNorm::make({vec({1, 0}), vec({0, 1}), vec({1, 1})}), {}, 0);
            }),
            ErrorCode::InvalidNorm);
  PlacementParams bad;
  bad.epsilon = 0.0;
  EXPECT_EQ(code_of([&] { construct_coloured_placement(k4, kMax, bad, 0); }), ErrorCode::InvalidParameters);
  // A skew this large never colours the K4 correctly, however often it is halved.
  PlacementParams huge;
  huge.epsilon = 1e300;
  EXPECT_EQ(code_of([&] { construct_coloured_placement(k4, kMax, huge, 0); }), ErrorCode::ParameterUnderflow);
}

TEST(Construct, ThreeWayEquivalenceOnGeneratedSequences) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const GeneratedGraph gen = generate_tight_graph(9, Scheme::B, seed);
    const Framework f = construct_coloured_placement(gen.sequence, kMax, {}, seed);
    const PolytopeAnalysis a = analyze_poly(f);
    ASSERT_TRUE(a.criteria);
    EXPECT_TRUE(a.report.is_minimal) << seed;
    EXPECT_TRUE(a.criteria->edge_disjoint_spanning_trees) << seed;
    EXPECT_TRUE(is_two_two_tight(f.graph())) << seed;
    EXPECT_TRUE(a.criteria_consistent);
    EXPECT_EQ(a.report.rank, oracle::gauss_rank(rigidity_matrix_poly(f)));
  }
}

TEST(Construct, WorksForSkewedFacets) {
  const PolytopeNorm skew = PolytopeNorm::make({vec({1, 0.4}), vec({-0.3, 1.2})});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GeneratedGraph gen = generate_tight_graph(8, Scheme::B, seed);
    const Framework f = construct_coloured_placement(gen.sequence, skew, {}, seed);
    EXPECT_TRUE(analyze_poly(f).report.is_minimal);
  }
}

TEST(Criteria, SufficiencyAndNecessityOnRandomPlacements) {
  Rng rng(77);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const int n = 3 + static_cast<int>(rng.index(5));
    const Graph g = suites::random_connected_graph(n, rng.uniform(0.3, 1.0), rng);
    const Framework f = Framework::make(g, random_placement(n, 2, rng.next(), 0), kMax);
    if (!colour_framework(f).well_positioned) continue;
    const PolytopeAnalysis a = analyze_poly(f);
    ASSERT_TRUE(a.criteria);
    if (a.criteria->sufficient_holds) {
      EXPECT_TRUE(a.report.is_rigid);
    }
    if (a.report.is_rigid) {
      EXPECT_TRUE(a.criteria->class_spans[0] && a.criteria->class_spans[1]);
    }
    EXPECT_TRUE(a.criteria_consistent);
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(ChangeOfBasis, MapsFacetsToStandardBasis) {
  const PolytopeNorm skew = PolytopeNorm::make({vec({2, 1}), vec({-1, 1})});
  const Matrix a = linf_change_of_basis(skew);
  const Framework f = Framework::make(Graph::complete(4), points({{0, 0}, {1, 0.3}, {0.2, 1.4}, {-0.8, 0.9}}), skew);
  const Framework g = apply_linear_map(f, a);
  const auto& facets = std::get<PolytopeNorm>(g.norm()).facets();
  EXPECT_LT((facets[0] - vec({1, 0})).norm(), 1e-14);
  EXPECT_LT((facets[1] - vec({0, 1})).norm(), 1e-14);
  // Lengths are preserved edge by edge.
  for (const Edge& e : f.graph().edges())
    EXPECT_NEAR(polytope_length(f.edge_vector(e), skew), polytope_length(g.edge_vector(e), kMax), 1e-12);
  EXPECT_EQ(colour_framework(f).colours, colour_framework(g).colours);
}
