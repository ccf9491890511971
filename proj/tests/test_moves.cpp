#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rigidkit/moves.hpp"

using namespace rigidkit;

namespace {

bool throws_code(const std::function<void()>& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST(Moves, VertexToK4OnK1IsK4) {
  const Graph g = apply_move(Graph::complete(1), VertexToK4{0, {}});
  EXPECT_EQ(g, Graph::complete(4));
}

TEST(Moves, HennebergOneOnK4) {
  const Graph g = apply_move(Graph::complete(4), Henneberg1{0, 1});
  EXPECT_EQ(g.vertex_count(), 5);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_TRUE(g.has_edge(4, 0));
  EXPECT_TRUE(g.has_edge(4, 1));
}

TEST(Moves, HennebergTwoOnK4) {
  const Graph g = apply_move(Graph::complete(4), Henneberg2{0, 1, 2});
  EXPECT_EQ(g.vertex_count(), 5);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(4, 0));
  EXPECT_TRUE(g.has_edge(4, 1));
  EXPECT_TRUE(g.has_edge(4, 2));
}

TEST(Moves, VertexToFourCycleReassigns) {
  // K4 plus H1 on {0,1}: vertex 0 has neighbours 1,2,3,4.
  const Graph base = apply_move(Graph::complete(4), Henneberg1{0, 1});
  const Graph g = apply_move(base, VertexToFourCycle{0, 1, 2, {3}});
  EXPECT_EQ(g.vertex_count(), 6);
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_TRUE(g.has_edge(5, 1));
  EXPECT_TRUE(g.has_edge(5, 2));
  EXPECT_TRUE(g.has_edge(5, 3));
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(Moves, VertexSplitAddsEdgeToBothEnds) {
  const Graph g = apply_move(Graph::complete(4), VertexSplit{0, 1, {2}});
  EXPECT_TRUE(g.has_edge(4, 0));
  EXPECT_TRUE(g.has_edge(4, 1));
  EXPECT_TRUE(g.has_edge(4, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_EQ(g.edge_count(), 8u);
}

TEST(Moves, VertexToK4Assignment) {
  // On K4, expand vertex 0 and hand edges 01, 02, 03 to slots 0, 1, 3.
  const Graph g = apply_move(Graph::complete(4), VertexToK4{0, {{1, 0}, {2, 1}, {3, 3}}});
  EXPECT_EQ(g.vertex_count(), 7);
  EXPECT_EQ(g.edge_count(), 12u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(4, 2));
  EXPECT_TRUE(g.has_edge(6, 3));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_TRUE(is_two_two_tight(g));
}

TEST(Moves, InvalidMovesAreRejected) {
  const Graph k4 = Graph::complete(4);
  EXPECT_TRUE(throws_code([&] { apply_move(k4, Henneberg1{1, 1}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(k4, Henneberg1{0, 9}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(k4, Henneberg2{0, 1, 1}); }, ErrorCode::InvalidMove));
  const Graph p = Graph::path(3);
  EXPECT_TRUE(throws_code([&] { apply_move(p, Henneberg2{0, 2, 1}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(p, VertexToFourCycle{0, 1, 2, {}}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(p, VertexSplit{0, 2, {}}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(k4, VertexSplit{0, 1, {1}}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(k4, VertexToK4{0, {{1, 0}, {2, 0}}}); }, ErrorCode::InvalidMove));
  EXPECT_TRUE(throws_code([&] { apply_move(k4, VertexToK4{0, {{1, 0}, {2, 0}, {3, 4}}}); }, ErrorCode::InvalidMove));
  EXPECT_FALSE(is_valid_move(k4, Henneberg1{2, 2}));
  EXPECT_TRUE(is_valid_move(k4, Henneberg1{2, 3}));
}

TEST(Moves, CountBookkeepingAndTightness) {
  for (Scheme scheme : {Scheme::A, Scheme::B}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const GeneratedGraph gen = generate_tight_graph(12, scheme, seed);
      Graph g = gen.sequence.start;
      for (const Move& m : gen.sequence.moves) {
        ASSERT_TRUE(scheme_allows(scheme, kind_of(m)));
        const Graph next = apply_move(g, m);
        const long dv = next.vertex_count() - g.vertex_count();
        const long de = static_cast<long>(next.edge_count()) - static_cast<long>(g.edge_count());
        EXPECT_EQ(de, 2 * dv);
        EXPECT_TRUE(is_two_two_tight(next));
        g = next;
      }
      EXPECT_EQ(g, gen.graph);
      EXPECT_GE(g.vertex_count(), 12);
      EXPECT_LE(g.vertex_count(), 15);
    }
  }
}

TEST(Generate, Examples) {
  const GeneratedGraph k1 = generate_tight_graph(1, Scheme::A, 99);
  EXPECT_EQ(k1.graph, Graph::complete(1));
  EXPECT_TRUE(k1.sequence.moves.empty());
  const GeneratedGraph four = generate_tight_graph(4, Scheme::A, 7);
  if (four.graph.vertex_count() == 4) {
    EXPECT_EQ(four.graph, Graph::complete(4));
  }
  EXPECT_TRUE(is_two_two_tight(generate_tight_graph(10, Scheme::B, 1).graph));
  EXPECT_EQ(generate_tight_graph(10, Scheme::B, 1).graph, generate_tight_graph(10, Scheme::B, 1).graph);
}

TEST(Generate, K4IsTheOnlyTightGraphOnFourVertices) {
  // Brute force over all 64 edge sets of K4.
  int tight = 0;
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<Edge> chosen;
    int bit = 0;
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v, ++bit)
        if (mask & (1 << bit)) chosen.emplace_back(u, v);
    if (!is_connected(4, chosen)) continue;
    if (oracle::sparsity(Graph::make(4, std::span<const Edge>(chosen)), 2, 2).tight) ++tight;
  }
  EXPECT_EQ(tight, 1);
}

TEST(Reduce, Examples) {
  const Reduction k4 = reduce_to_k1(Graph::complete(4));
  ASSERT_EQ(k4.sequence.moves.size(), 1u);
  EXPECT_EQ(kind_of(k4.sequence.moves[0]), MoveKind::VK4);
  EXPECT_TRUE(throws_code([] { reduce_to_k1(Graph::complete(3)); }, ErrorCode::NotTight));
  EXPECT_TRUE(throws_code([] { reduce_to_k1(Graph::complete(5)); }, ErrorCode::NotTight));
  const Reduction k1 = reduce_to_k1(Graph::complete(1));
  EXPECT_TRUE(k1.sequence.moves.empty());
}

TEST(Reduce, RoundTripIsIsomorphic) {
  for (Scheme scheme : {Scheme::A, Scheme::B}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Graph g = generate_tight_graph(5, scheme, seed).graph;
      const Reduction red = reduce_to_k1(g);
      const Graph back = replay(red.sequence);
      EXPECT_TRUE(oracle::isomorphic(back, g)) << "seed " << seed;
      EXPECT_EQ(back.relabelled(red.relabel), g);
    }
  }
}

TEST(Reduce, RespectsSchemeRestriction) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = generate_tight_graph(9, Scheme::B, seed).graph;
    const Reduction red = reduce_to_k1(g, ReductionMoves::SchemeB);
    for (const Move& m : red.sequence.moves) EXPECT_TRUE(scheme_allows(Scheme::B, kind_of(m)));
    EXPECT_EQ(replay(red.sequence).relabelled(red.relabel), g);
  }
}
