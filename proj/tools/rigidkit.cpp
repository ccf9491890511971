// rigidkit command-line front end.
//
// Exit codes: 0 success (check-sparsity: tight), 1 suite failure or internal
// error, 2 malformed input / invalid parameters / no verdict possible,
// 3 sparse-not-tight or not tight, 4 not sparse.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rigidkit/error.hpp"
#include "rigidkit/framework.hpp"
#include "rigidkit/io.hpp"
#include "rigidkit/lq.hpp"
#include "rigidkit/moves.hpp"
#include "rigidkit/polytope.hpp"
#include "rigidkit/sparsity.hpp"
#include "rigidkit/suites.hpp"

namespace {

using rigidkit::Error;
using rigidkit::ErrorCode;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitSparseNotTight = 3;
constexpr int kExitNotSparse = 4;

struct Options {
  std::uint64_t seed = 1;
  int trials = 20;
  std::optional<double> tol;
  std::string format = "json";
  bool oracle = false;
  bool quiet = false;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

rigidkit::TolerancePolicy policy_of(const Options& o) {
  rigidkit::TolerancePolicy p;
  if (o.tol) p.relative = *o.tol;
  return p;
}

void warn(const Options& o, const std::string& message) {
  if (!o.quiet) std::cerr << "warning: " << message << "\n";
}

void warn_extreme_q(const Options& o, const rigidkit::NormSpec& norm) {
  if (const auto* lq = std::get_if<rigidkit::LqNorm>(&norm)) {
    if (lq->q() < 1.05 || lq->q() > 50.0)
      warn(o, "q = " + std::to_string(lq->q()) + " is close to a polytopic endpoint; ranks may be ill-conditioned");
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string verdict_text(const rigidkit::SparsityVerdict& v) {
  if (!v.is_sparse) return "not sparse";
  return v.is_tight ? "tight" : "sparse, not tight";
}

json verdict_json(const rigidkit::SparsityVerdict& v) {
  json out = {{"verdict", verdict_text(v)}, {"is_sparse", v.is_sparse}, {"is_tight", v.is_tight}};
  if (v.witness) out["witness"] = *v.witness;
  return out;
}

// ---------------------------------------------------------- commands

int cmd_check_sparsity(const Options& o, const std::string& file, int k, int l) {
  const rigidkit::Graph g = rigidkit::io::graph_from_json(read_json(file));
  const rigidkit::SparsityParams params{k, l};
  const rigidkit::SparsityVerdict pebble = rigidkit::is_sparse_pebble(g, params);
  std::optional<rigidkit::SparsityVerdict> oracle;
  if (o.oracle) oracle = rigidkit::is_sparse_bruteforce(g, params);
  const bool agree = !oracle || (oracle->is_sparse == pebble.is_sparse && oracle->is_tight == pebble.is_tight);

  if (o.format == "json") {
    json out = verdict_json(pebble);
    out["k"] = k;
    out["l"] = l;
    if (oracle) {
      out["oracle"] = verdict_json(*oracle);
      out["agree"] = agree;
    }
    emit(out);
  } else {
    std::cout << verdict_text(pebble) << "\n";
    if (pebble.witness) {
      std::cout << "witness:";
      for (int v : *pebble.witness) std::cout << " " << v;
      std::cout << "\n";
    }
    if (oracle) std::cout << "oracle: " << verdict_text(*oracle) << "\nagreement: " << (agree ? "yes" : "NO") << "\n";
  }
  if (!agree) return kExitFailure;
  if (!pebble.is_sparse) return kExitNotSparse;
  return pebble.is_tight ? kExitOk : kExitSparseNotTight;
}

int cmd_analyze(const Options& o, const std::string& file, bool allow_degenerate) {
  const rigidkit::Framework f = rigidkit::io::framework_from_json(read_json(file));
  warn_extreme_q(o, f.norm());
  const rigidkit::Graph& g = f.graph();

  if (std::holds_alternative<rigidkit::LqNorm>(f.norm())) {
    const rigidkit::RigidityReport r = rigidkit::analyze(f, policy_of(o));
    if (o.format == "json") {
      emit(rigidkit::io::to_json(r));
    } else if (o.format == "dot") {
      std::cout << rigidkit::io::to_dot(g, std::nullopt, f.placement());
    } else if (o.format == "svg") {
      std::optional<rigidkit::Vector> flex;
      if (!r.nontrivial_flexes.empty()) flex = r.nontrivial_flexes.front();
      std::cout << rigidkit::io::to_svg(f, std::nullopt, flex);
    } else {
      std::cout << "rank " << r.rank << " of " << r.matrix_rows << "x" << r.matrix_cols << ", nullity " << r.nullity
                << "\nrigid: " << (r.is_rigid ? "yes" : "no") << "\nminimal: " << (r.is_minimal ? "yes" : "no")
                << "\nnontrivial flexes: " << r.nontrivial_flexes.size() << "\nrank stable: " << (r.rank_stable ? "yes" : "no")
                << "\n";
    }
    if (!r.rank_stable) warn(o, "rank changes when the tolerance is raised tenfold");
    return kExitOk;
  }

  rigidkit::PolytopeAnalysisOptions options;
  options.policy = policy_of(o);
  options.allow_degenerate = allow_degenerate;
  const rigidkit::PolytopeAnalysis a = rigidkit::analyze_poly(f, options);
  if (o.format == "json") {
    emit(rigidkit::io::to_json(g, a));
  } else if (o.format == "dot") {
    std::cout << rigidkit::io::to_dot(g, a.colouring, f.placement());
  } else if (o.format == "svg") {
    std::optional<rigidkit::Vector> flex;
    if (!a.report.nontrivial_flexes.empty()) flex = a.report.nontrivial_flexes.front();
    std::cout << rigidkit::io::to_svg(f, a.colouring, flex);
  } else {
    const rigidkit::RigidityReport& r = a.report;
    std::cout << "rank " << r.rank << " of " << r.matrix_rows << "x" << r.matrix_cols << ", nullity " << r.nullity
              << "\nwell-positioned: " << (a.colouring.well_positioned ? "yes" : "no")
              << "\nrigid: " << (r.is_rigid ? "yes" : "no") << "\nminimal: " << (r.is_minimal ? "yes" : "no") << "\n";
    if (a.criteria)
      std::cout << "edge-disjoint monochrome spanning trees: " << (a.criteria->edge_disjoint_spanning_trees ? "yes" : "no")
                << "\n";
  }
  if (!a.colouring.well_positioned) warn(o, "degenerate matrix: tied edges " + rigidkit::describe_offending(a.colouring));
  return kExitOk;
}

int cmd_colour(const Options& o, const std::string& file) {
  const rigidkit::Framework f = rigidkit::io::framework_from_json(read_json(file));
  const rigidkit::FrameworkColouring c = rigidkit::colour_framework(f);
  if (o.format == "dot") {
    std::cout << rigidkit::io::to_dot(f.graph(), c, f.placement());
  } else if (o.format == "svg") {
    std::cout << rigidkit::io::to_svg(f, c);
  } else if (o.format == "json") {
    emit(rigidkit::io::to_json(f.graph(), c));
  } else {
    for (std::size_t i = 0; i < c.colours.size(); ++i)
      std::cout << rigidkit::to_string(f.graph().edges()[i]) << " " << c.colours[i] << "\n";
    std::cout << "well-positioned: " << (c.well_positioned ? "yes" : "no") << "\n";
  }
  return c.well_positioned ? kExitOk : kExitInput;
}

rigidkit::Scheme parse_scheme(const std::string& s) {
  if (s == "A" || s == "a") return rigidkit::Scheme::A;
  if (s == "B" || s == "b") return rigidkit::Scheme::B;
  throw Error(ErrorCode::InvalidParameters, "scheme must be A or B");
}

int cmd_generate(const Options& o, int n, const std::string& scheme) {
  const rigidkit::GeneratedGraph gen = rigidkit::generate_tight_graph(n, parse_scheme(scheme), o.seed);
  if (o.format == "dot") {
    std::cout << rigidkit::io::to_dot(gen.graph);
  } else {
    emit({{"graph", rigidkit::io::to_json(gen.graph)}, {"sequence", rigidkit::io::to_json(gen.sequence)}});
  }
  return kExitOk;
}

int cmd_reduce(const Options&, const std::string& file, const std::string& moves) {
  const rigidkit::Graph g = rigidkit::io::graph_from_json(read_json(file));
  rigidkit::ReductionMoves allowed = rigidkit::ReductionMoves::All;
  if (moves == "A") allowed = rigidkit::ReductionMoves::SchemeA;
  else if (moves == "B") allowed = rigidkit::ReductionMoves::SchemeB;
  else if (moves != "all") throw Error(ErrorCode::InvalidParameters, "--moves must be A, B or all");
  try {
    const rigidkit::Reduction red = rigidkit::reduce_to_k1(g, allowed);
    emit({{"sequence", rigidkit::io::to_json(red.sequence)}, {"relabel", red.relabel}});
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotTight) throw;
    std::cerr << "error: " << e.what() << "\n";
    return kExitSparseNotTight;
  }
}

int cmd_replay(const Options& o, const std::string& file) {
  const rigidkit::Graph g = rigidkit::replay(rigidkit::io::sequence_from_json(read_json(file)));
  if (o.format == "dot") std::cout << rigidkit::io::to_dot(g);
  else emit(rigidkit::io::to_json(g));
  return kExitOk;
}

int cmd_construct(const Options& o, const std::string& file, const std::string& norm_text,
                  const rigidkit::PlacementParams& params) {
  const json j = read_json(file);
  // Accepts a bare move sequence or the output of `generate`.
  const rigidkit::MoveSequence seq = rigidkit::io::sequence_from_json(j.contains("sequence") ? j.at("sequence") : j);
  const rigidkit::NormSpec norm = rigidkit::io::norm_from_json(json::parse(norm_text), 2);
  const auto* poly = std::get_if<rigidkit::PolytopeNorm>(&norm);
  if (!poly) throw Error(ErrorCode::InvalidNorm, "construct needs a polytopic norm");
  const rigidkit::Framework f = rigidkit::construct_coloured_placement(seq, *poly, params, o.seed);
  if (o.format == "dot") std::cout << rigidkit::io::to_dot(f.graph(), rigidkit::colour_framework(f), f.placement());
  else if (o.format == "svg") std::cout << rigidkit::io::to_svg(f, rigidkit::colour_framework(f));
  else emit(rigidkit::io::to_json(f));
  return kExitOk;
}

int cmd_sample(const Options& o, const std::string& file, double q) {
  const rigidkit::Graph g = rigidkit::io::graph_from_json(read_json(file));
  const rigidkit::NormSpec norm = rigidkit::norm_from_q(q, 2);
  warn_extreme_q(o, norm);
  const auto* lq = std::get_if<rigidkit::LqNorm>(&norm);
  if (!lq) throw Error(ErrorCode::InvalidNorm, "sample draws l^q placements; use construct for polytopic norms");
  const rigidkit::SampledPlacement s = rigidkit::sample_regular_placement(g, *lq, 2, o.seed, o.trials, policy_of(o));
  if (!s.stable) warn(o, "best placement's rank is not stable under a 10x tolerance change");
  json out = rigidkit::io::to_json(rigidkit::Framework::make(g, s.placement, *lq));
  out["achieved_rank"] = s.achieved_rank;
  out["rank_stable"] = s.stable;
  emit(out);
  return kExitOk;
}

int cmd_export(const Options& o, const std::string& file) {
  const json j = read_json(file);
  if (j.contains("placement")) {
    const rigidkit::Framework f = rigidkit::io::framework_from_json(j);
    std::optional<rigidkit::FrameworkColouring> c;
    if (std::holds_alternative<rigidkit::PolytopeNorm>(f.norm())) c = rigidkit::colour_framework(f);
    if (o.format == "svg") std::cout << rigidkit::io::to_svg(f, c);
    else if (o.format == "dot") std::cout << rigidkit::io::to_dot(f.graph(), c, f.placement());
    else emit(rigidkit::io::to_json(f));
    return kExitOk;
  }
  const rigidkit::Graph g = rigidkit::io::graph_from_json(j.contains("graph") ? j.at("graph") : j);
  if (o.format == "svg") throw Error(ErrorCode::InvalidParameters, "svg export needs a framework file");
  if (o.format == "dot") std::cout << rigidkit::io::to_dot(g);
  else emit(rigidkit::io::to_json(g));
  return kExitOk;
}

int cmd_suite(const Options& o, const std::string& name) {
  bool all_passed = true;
  const auto print = [&](const rigidkit::suites::CriterionResult& r) {
    all_passed = all_passed && r.passed;
    if (!o.quiet || !r.passed)
      std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << "\n";
  };
  const auto results = rigidkit::suites::run_named(name, o.seed, print);
  long passed = 0;
  for (const auto& r : results) passed += r.passed;
  std::cout << name << " seed=" << o.seed << ": " << passed << "/" << results.size() << " passed\n";
  return all_passed ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidkit: rigidity of bar-joint frameworks in l^q and polytopic normed planes"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  if (const char* env = std::getenv("RIGIDKIT_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: RIGIDKIT_SEED is not an unsigned integer\n";
      return kExitInput;
    }
  }
  app.add_option("--seed", o.seed, "64-bit seed (default 1, or $RIGIDKIT_SEED)");
  app.add_option("--trials", o.trials, "placements tried by `sample`")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "relative SVD threshold factor (default 2^-40)")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "json | text | dot | svg")
      ->check(CLI::IsMember({"json", "text", "dot", "svg"}));
  app.add_flag("--quiet", o.quiet, "suppress warnings and passing suite lines");

  std::string file, scheme = "A", moves = "all", suite_name, norm_text = R"({"type":"linf"})";
  int k = 2, l = 2, n = 10;
  double q = 3.0;
  bool allow_degenerate = false;
  rigidkit::PlacementParams params;

  auto* sparsity = app.add_subcommand("check-sparsity", "(k,l)-sparsity verdict by the pebble game");
  sparsity->add_option("graph", file, "graph JSON")->required();
  sparsity->add_option("-k", k, "pebbles per vertex");
  sparsity->add_option("-l", l, "count offset");
  sparsity->add_flag("--oracle", o.oracle, "also run brute force and report agreement");

  auto* analyze = app.add_subcommand("analyze", "rigidity report for a framework");
  analyze->add_option("framework", file, "framework JSON")->required();
  analyze->add_flag("--allow-degenerate", allow_degenerate, "build the matrix even with tied edges");

  auto* colour = app.add_subcommand("colour", "framework colouring of a polytopic framework");
  colour->add_option("framework", file, "framework JSON")->required();

  auto* generate = app.add_subcommand("generate", "random (2,2)-tight graph from K1");
  generate->add_option("-n", n, "target vertex count")->check(CLI::PositiveNumber);
  generate->add_option("--scheme", scheme, "A or B");

  auto* reduce = app.add_subcommand("reduce", "inverse moves down to K1");
  reduce->add_option("graph", file, "graph JSON")->required();
  reduce->add_option("--moves", moves, "A, B or all");

  auto* replay = app.add_subcommand("replay", "apply a move sequence");
  replay->add_option("sequence", file, "move sequence JSON")->required();

  auto* construct = app.add_subcommand("construct", "coloured placement for a scheme-B sequence");
  construct->add_option("sequence", file, "move sequence JSON")->required();
  construct->add_option("--norm", norm_text, "norm JSON with two facets (default max norm)");
  construct->add_option("--epsilon", params.epsilon, "initial epsilon");
  construct->add_option("--r", params.r, "initial K4 scale");
  construct->add_option("--delta", params.delta, "initial jitter radius");

  auto* sample = app.add_subcommand("sample", "best-of-trials l^q placement for a graph");
  sample->add_option("graph", file, "graph JSON")->required();
  sample->add_option("-q", q, "exponent");

  auto* suite = app.add_subcommand("suite", "acceptance suites: oracle, thm38, thm410, invariants, all");
  suite->add_option("name", suite_name, "suite name")->required()->check(CLI::IsMember(rigidkit::suites::suite_names()));

  auto* exporter = app.add_subcommand("export", "re-emit a graph or framework as json, dot or svg");
  exporter->add_option("file", file, "graph or framework JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }
  // The sparsity verdict is a one-liner unless JSON is asked for.
  if (sparsity->parsed() && app.get_option("--format")->count() == 0) o.format = "text";

  try {
    if (sparsity->parsed()) return cmd_check_sparsity(o, file, k, l);
    if (analyze->parsed()) return cmd_analyze(o, file, allow_degenerate);
    if (colour->parsed()) return cmd_colour(o, file);
    if (generate->parsed()) return cmd_generate(o, n, scheme);
    if (reduce->parsed()) return cmd_reduce(o, file, moves);
    if (replay->parsed()) return cmd_replay(o, file);
    if (construct->parsed()) return cmd_construct(o, file, norm_text, params);
    if (sample->parsed()) return cmd_sample(o, file, q);
    if (suite->parsed()) return cmd_suite(o, suite_name);
    if (exporter->parsed()) return cmd_export(o, file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
