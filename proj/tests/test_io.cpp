#include <gtest/gtest.h>

#include "rigidkit/io.hpp"
#include "rigidkit/lq.hpp"

using namespace rigidkit;
using rigidkit::io::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidParameters;
}

}  // namespace

TEST(Io, GraphRoundTrip) {
  const Graph g = generate_tight_graph(7, Scheme::A, 3).graph;
  EXPECT_EQ(io::graph_from_json(json::parse(io::to_json(g).dump())), g);
}

TEST(Io, GraphParseErrors) {
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"edges": []})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"n": 2, "edges": [[0]]})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"n": "two", "edges": []})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"n": 2, "edges": [[0, 1], [1, 0]]})")); }),
            ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"n": 3, "edges": [[0, 1]]})")); }),
            ErrorCode::Disconnected);
}

TEST(Io, Norms) {
  EXPECT_EQ(std::get<LqNorm>(io::norm_from_json(json::parse(R"({"type": "lq", "q": 3})"), 2)).q(), 3.0);
  EXPECT_EQ(std::get<PolytopeNorm>(io::norm_from_json(json::parse(R"({"type": "lq", "q": "inf"})"), 2)).facets(),
            PolytopeNorm::linf(2).facets());
  EXPECT_EQ(std::get<PolytopeNorm>(io::norm_from_json(json::parse(R"({"type": "lq", "q": 1})"), 2)).facets(),
            PolytopeNorm::l1(2).facets());
  EXPECT_EQ(code_of([] { io::norm_from_json(json::parse(R"({"type": "lq"})"), 2); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::norm_from_json(json::parse(R"({"type": "lq", "q": "big"})"), 2); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::norm_from_json(json::parse(R"({"type": "lq", "q": 0.5})"), 2); }), ErrorCode::InvalidNorm);
  EXPECT_EQ(code_of([] { io::norm_from_json(json::parse(R"({"type": "euclid"})"), 2); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::norm_from_json(json::parse(R"({"type": "polytope", "facets": [[1, 0], [-1, 0]]})"), 2); }),
            ErrorCode::InvalidNorm);
}

TEST(Io, FrameworkRoundTrip) {
  const json in = json::parse(R"({
    "graph": {"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]},
    "placement": [[0, 0], [1, 0.25], [0.5, 1]],
    "norm": {"type": "polytope", "facets": [[1, 0.5], [0, 1]]}
  })");
  const Framework f = io::framework_from_json(in);
  const Framework back = io::framework_from_json(json::parse(io::to_json(f).dump()));
  EXPECT_EQ(back.graph(), f.graph());
  EXPECT_EQ(back.placement(), f.placement());
  EXPECT_EQ(std::get<PolytopeNorm>(back.norm()).facets(), std::get<PolytopeNorm>(f.norm()).facets());
}

TEST(Io, FrameworkErrors) {
  EXPECT_EQ(code_of([] {
              io::framework_from_json(json::parse(
                  R"({"graph": {"n": 2, "edges": [[0, 1]]}, "placement": [[0, 0]], "norm": {"type": "linf"}})"));
            }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] {
              io::framework_from_json(json::parse(
                  R"({"graph": {"n": 2, "edges": [[0, 1]]}, "placement": [[0, 0], [0, 0]], "norm": {"type": "linf"}})"));
            }),
            ErrorCode::CoincidentEndpoints);
  EXPECT_EQ(code_of([] {
              io::framework_from_json(json::parse(
                  R"({"graph": {"n": 2, "edges": [[0, 1]]}, "placement": [[0, 0], [1, "x"]], "norm": {"type": "linf"}})"));
            }),
            ErrorCode::ParseError);
}

TEST(Io, MoveSequenceRoundTrip) {
  for (Scheme scheme : {Scheme::A, Scheme::B}) {
    const GeneratedGraph gen = generate_tight_graph(12, scheme, 11);
    const MoveSequence back = io::sequence_from_json(json::parse(io::to_json(gen.sequence).dump()));
    ASSERT_EQ(back.moves.size(), gen.sequence.moves.size());
    for (std::size_t i = 0; i < back.moves.size(); ++i) EXPECT_EQ(back.moves[i], gen.sequence.moves[i]);
    EXPECT_EQ(replay(back), gen.graph);
  }
}

TEST(Io, BareMoveArray) {
  const MoveSequence seq = io::sequence_from_json(json::parse(R"([{"type": "VK4", "v1": 0}, {"type": "H1", "v1": 0, "v2": 3}])"));
  EXPECT_EQ(seq.start, Graph::complete(1));
  EXPECT_EQ(replay(seq).vertex_count(), 5);
  EXPECT_EQ(code_of([] { io::sequence_from_json(json::parse(R"([{"type": "H3"}])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::sequence_from_json(json::parse(R"([{"type": "H1", "v1": 0}])")); }), ErrorCode::ParseError);
}

TEST(Io, ReportFields) {
  const Framework f = Framework::make(Graph::complete(3), (Placement(3, 2) << 0, 0, 1, 0.2, 0.3, 0.9).finished(),
                                      LqNorm::make(3));
  const json j = io::to_json(analyze(f));
  EXPECT_EQ(j.at("rank").get<int>(), 3);
  EXPECT_EQ(j.at("nullity").get<int>(), 3);
  EXPECT_FALSE(j.at("is_rigid").get<bool>());
  EXPECT_EQ(j.at("nontrivial_flexes").size(), 1u);
}

TEST(Io, DotMarksColoursAndTies) {
  const Framework f = Framework::make(Graph::path(3), (Placement(3, 2) << 0, 0, 1, 0.2, 2, 1.2).finished(),
                                      PolytopeNorm::linf(2));
  const FrameworkColouring c = colour_framework(f);
  const std::string dot = io::to_dot(f.graph(), c);
  EXPECT_NE(dot.find("0 -- 1 [color=red"), std::string::npos);
  EXPECT_NE(dot.find("1 -- 2 [color=black, style=dashed"), std::string::npos);
  const std::string plain = io::to_dot(f.graph());
  EXPECT_EQ(plain.find("color"), std::string::npos);
  const std::string svg = io::to_svg(f, c);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("stroke=\"red\""), std::string::npos);
}
