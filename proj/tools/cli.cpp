#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "ttforge/error.hpp"
#include "ttforge/generator.hpp"
#include "ttforge/induced.hpp"
#include "ttforge/io.hpp"
#include "ttforge/properties.hpp"
#include "ttforge/suspension.hpp"
#include "ttforge/traintrack.hpp"

namespace ttforge::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string command;
  std::string file;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::optional<int> count;
  std::string format = "json";
  int jobs = 1;
  bool adversarial = false;
  std::string check = "all";
  int max_edges = 6;
};

/// Carries an exit code through the command handlers.
struct Exit {
  int code;
  std::string message;
};

Json envelope(const std::string& command, const std::string& hash) {
  return {{"schema_version", kSchemaVersion},
          {"tool_version", kToolVersion},
          {"command", command},
          {"input_hash", hash}};
}

std::string read_text(const std::string& file) {
  if (file.empty()) throw Exit{kInputError, "no input file given"};
  if (file == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Exit{kInputError, "cannot read " + file};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const GraphMap& require_map(const InputDocument& doc) {
  if (!doc.map) throw InvalidInput("input has no \"map\"");
  return *doc.map;
}

void render_text(const Json& j, const std::string& indent, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        out << indent << k << ":\n";
        render_text(v, indent + "  ", out);
      } else {
        out << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured() && !v.empty()) {
        out << indent << "-\n";
        render_text(v, indent + "  ", out);
      } else {
        out << indent << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    out << indent << j.dump() << "\n";
  }
}

void emit(const Options& opt, const Json& report, std::ostream& out) {
  if (opt.format == "text") {
    render_text(report, "", out);
  } else {
    out << dump(report);
  }
}

void save(const Options& opt, const std::string& name, const std::string& text) {
  if (opt.out_dir.empty()) return;
  fs::create_directories(opt.out_dir);
  std::ofstream f(fs::path(opt.out_dir) / name, std::ios::binary);
  if (!f) throw Exit{kInputError, "cannot write to " + opt.out_dir};
  f << text;
}

Json edge_list(const Graph& g, const std::vector<EdgeId>& edges) {
  Json out = Json::array();
  for (EdgeId e : edges) out.push_back(g.edge_name(e));
  return out;
}

int cmd_analyze(const Options& opt, std::ostream& out) {
  const InputDocument doc = parse_input(read_text(opt.file));
  const GraphMap& f = require_map(doc);
  if (!f.is_self_map()) throw InvalidInput("map is not a self-map");
  const Graph& g = f.domain();
  const IntMatrix a = transition_matrix(f);
  const auto tt = is_train_track(f);
  const auto ex = is_expanding(f);
  const auto irr = is_irreducible(a);
  const auto prim = has_positive_power(a);
  spdlog::debug("analyze: tt={} expanding={} irreducible={}", tt.train_track, ex.expanding,
                irr.irreducible);

  Json result = {{"transition_matrix", to_json(a)}, {"train_track", to_json(tt, g)}};
  result["expanding"] = {
      {"expanding", ex.expanding},
      {"bounded_edge", ex.bounded_edge ? Json(g.edge_name(*ex.bounded_edge)) : Json(nullptr)},
      {"stable_length", ex.bounded_edge ? big_to_json(ex.stable_length) : Json(nullptr)}};
  result["irreducible"] = {
      {"irreducible", irr.irreducible},
      {"missing", irr.missing ? edge_list(g, {irr.missing->first, irr.missing->second})
                              : Json(nullptr)}};
  result["primitive"] = prim.has_value();
  result["positive_power"] = prim ? Json(*prim) : Json(nullptr);
  if (irr.irreducible) {
    const auto pf = pf_eigenvalue(a);
    result["lambda"] = pf.value;
    result["lambda_bracket"] = {pf.lower, pf.upper};
  } else {
    result["lambda"] = nullptr;
  }
  const auto inv = find_invariant_subgraph(f);
  result["invariant_subgraph"] = inv ? edge_list(g, *inv) : Json(nullptr);
  Json loops = Json::object();
  if (tt.train_track && ex.expanding && irr.irreducible) {
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      loops[g.edge_name(e)] = to_string(g, legal_loop_through(f, e).darts);
    }
  }
  result["legal_loops"] = loops;

  Json report = envelope("analyze", doc.hash);
  report["status"] = "ok";
  report["result"] = result;
  emit(opt, report, out);
  save(opt, "analyze.json", dump(report));
  return kOk;
}

int cmd_quotient(const Options& opt, std::ostream& out) {
  const InputDocument doc = parse_input(read_text(opt.file));
  std::optional<Pi1Endomorphism> phi = doc.endomorphism;
  Json where = Json::object();
  if (!phi) {
    const GraphMap& f = require_map(doc);
    if (!f.is_self_map()) throw InvalidInput("map is not a self-map");
    VertexId v;
    int r;
    if (doc.basepoint && f.vertex_image(*doc.basepoint) == *doc.basepoint) {
      v = *doc.basepoint;
      r = 1;
    } else {
      const auto pv = find_periodic_vertex(f);
      v = pv.v;
      r = pv.r;
    }
    phi = pi1_endomorphism(power(f, r), v);
    where = {{"basepoint", f.domain().vertex_name(v)}, {"power", r}};
  } else {
    where = {{"basepoint", phi->ambient().vertex_name(phi->base())}, {"power", 1}};
  }
  const auto q = stable_quotient(*phi);
  Json result = to_json(q, phi->ambient());
  result["at"] = where;
  Json report = envelope("quotient", doc.hash);
  report["status"] = "ok";
  report["result"] = result;
  emit(opt, report, out);
  save(opt, "quotient.json", dump(report));
  return kOk;
}

int cmd_induce(const Options& opt, std::ostream& out, std::ostream& err) {
  const InputDocument doc = parse_input(read_text(opt.file));
  const GraphMap& f = require_map(doc);
  InducedPackage pkg = [&] {
    try {
      return build_induced(f);
    } catch (const PreconditionFailed& e) {
      throw Exit{kInputError, std::string("induce: ") + e.what()};
    }
  }();
  const VerificationReport vr = verify_package(pkg);
  const auto q = stable_quotient(pi1_endomorphism(power(f, pkg.r), pkg.v));
  const ConjugacyResult conj = conjugacy_check(pkg, q);
  const bool lift_nr = lifted_power_onto_core(pkg, pkg.n * pkg.r);
  const bool lift_n1r = lifted_power_onto_core(pkg, (pkg.n + 1) * pkg.r);

  const bool ok = vr.passed() && conj.ambient_identity_holds && conj.rank_agrees && lift_nr &&
                  lift_n1r;
  Json report = envelope("induce", doc.hash);
  report["status"] = ok ? "ok" : "failed";
  report["result"] = {{"constants", package_constants(pkg)},
                      {"verification", to_json(vr)},
                      {"conjugacy", to_json(conj, f.domain())},
                      {"lifted_power_onto_core", {{"nr", lift_nr}, {"n_plus_1_r", lift_n1r}}},
                      {"fbar", to_json(pkg.fbar)},
                      {"P", to_json(pkg.P)},
                      {"pbar", to_json(pkg.pbar)}};
  if (!opt.out_dir.empty()) write_package(opt.out_dir, pkg, report);
  emit(opt, report, out);
  if (!ok) {
    err << "induce: verification failed\n";
    return kVerificationFailure;
  }
  return kOk;
}

Json sample_json(const SampleCheck& c) {
  return {{"samples", c.samples},
          {"failures", c.failures},
          {"first_failure", c.first_failure ? Json(*c.first_failure) : Json(nullptr)}};
}

Json check_flow(const Options& opt, const MappingTorus& m, bool& ok) {
  const int count = opt.count.value_or(1000);
  std::vector<TorusPoint> samples = sample_points(m, count, opt.seed);
  std::mt19937_64 rng(opt.seed);
  SampleCheck semigroup, h10, h01;
  const HMaps h = h_maps(m);
  auto tally = [](SampleCheck& c, bool good, const std::string& what) {
    ++c.samples;
    if (!good) {
      ++c.failures;
      if (!c.first_failure) c.first_failure = what;
    }
  };
  for (const TorusPoint& x : samples) {
    const Rational s(static_cast<long>(rng() % 24), 1 + static_cast<long>(rng() % 6));
    const Rational s2(static_cast<long>(rng() % 24), 1 + static_cast<long>(rng() % 6));
    const std::string at = to_string(m.graph(), x);
    tally(semigroup, flow(m, x, s + s2) == flow(m, flow(m, x, s), s2), at);
    tally(h10, h.h1(h.h0(x)) == flow(m, x, 1), at);
    tally(h01, h.h0(h.h1(x)) == flow(m, x, 1), at);
  }
  Json result = {{"homotopy_equivalence", m.homotopy_equivalence},
                 {"semigroup", sample_json(semigroup)},
                 {"h1_h0_equals_psi1", sample_json(h10)},
                 {"h0_h1_equals_phi1", sample_json(h01)}};
  ok = semigroup.ok() && h10.ok() && h01.ok();

  std::optional<FlowHomotopyPair> pair;
  std::string source;
  try {
    const InducedPackage pkg = build_induced(m.F);
    const MappingTorus y = MappingTorus::of(pkg.fbar);
    const PlMap alpha(pkg.P, std::vector<GraphMap>(pkg.K, pkg.f));
    const PlMap beta(pkg.pbar, {});
    pair = flow_homotopy_pair(m, y, alpha, beta, pkg.K,
                              sample_points(m, count, opt.seed, {&alpha}),
                              sample_points(y, count, opt.seed + 1, {&beta}));
    source = "induced package (P, pbar, K)";
  } catch (const PreconditionFailed& e) {
    spdlog::info("suspend: no induced package ({}); using the identity pair", e.what());
    const PlMap id(GraphMap::identity(m.F.domain_ptr()), {});
    pair = flow_homotopy_pair(m, m, id, id, 0, samples, samples);
    source = "identity";
  }
  result["flow_homotopy_pair"] = {{"source", source},
                                  {"k", pair->k},
                                  {"alpha_equivariance", sample_json(pair->alpha_equivariance)},
                                  {"beta_equivariance", sample_json(pair->beta_equivariance)},
                                  {"beta_alpha_equals_psi_k_plus_2", sample_json(pair->beta_alpha)},
                                  {"alpha_beta_equals_psi_k_plus_2", sample_json(pair->alpha_beta)}};
  ok = ok && pair->ok();
  return result;
}

Json check_descriptor(const Options& opt, const InputDocument& doc, const MappingTorus& m,
                      bool& ok) {
  std::optional<CoverDescriptor> d;
  std::string source;
  if (doc.descriptor) {
    d = descriptor_from_json(m, *doc.descriptor);
    source = "input descriptor";
  } else {
    const VertexId base = doc.basepoint.value_or(0);
    SubgroupGraph delta = doc.subgroup ? fold(m.F.domain_ptr(), base, *doc.subgroup)
                                       : whole_group(m.F.domain_ptr(), base);
    if (!delta.is_covering()) throw InvalidInput("subgroup does not have finite index");
    d = descriptor_from_subgroup(m, std::move(delta));
    source = doc.subgroup ? "input subgroup" : "trivial cover";
  }
  const FirstReturn fr = section_first_return(*d);
  const CoverDescriptor again = make_cover_descriptor(m, d->delta, fr.g, fr.j);
  const CoverDescriptor reparsed = descriptor_from_json(m, to_json(*d));
  const bool round_trip = fr.verified && again.g.map() == d->g.map() && again.j == d->j &&
                          reparsed.g.map() == d->g.map() && reparsed.j == d->j;

  SampleCheck commute;
  std::mt19937_64 rng(opt.seed);
  const Graph& dg = d->delta.graph();
  for (int i = 0; i < 100; ++i) {
    const long den = 2 + static_cast<long>(rng() % 30);
    const GraphPoint p =
        dg.num_edges() == 0 || i % 10 == 0
            ? GraphPoint::at_vertex(static_cast<VertexId>(rng() % dg.num_vertices()))
            : GraphPoint::on_edge(dg, static_cast<EdgeId>(rng() % dg.num_edges()),
                                  Rational(1 + static_cast<long>(rng() % (den - 1)), den));
    const TorusPoint x{p, Rational(static_cast<long>(rng() % (7 * d->j)), 7)};
    const Rational s(static_cast<long>(rng() % 50), 1 + static_cast<long>(rng() % 5));
    ++commute.samples;
    if (project(*d, lifted_flow(*d, x, s)) != flow(m, project(*d, x), s)) {
      ++commute.failures;
      if (!commute.first_failure) commute.first_failure = to_string(dg, x);
    }
  }
  const DualClass dual = dual_class(*d);
  Json values = Json::object();
  for (const auto& [name, v] : dual.values) values[name] = big_to_json(v);
  ok = round_trip && commute.ok();
  return {{"source", source},
          {"descriptor", to_json(*d)},
          {"j", d->j},
          {"sheets", d->sheets},
          {"degree", d->degree()},
          {"round_trip", round_trip},
          {"first_return_j", fr.j},
          {"dual_class", {{"values", values}, {"index", big_to_json(dual.index)}}},
          {"lifted_flow_commutes", sample_json(commute)}};
}

int cmd_suspend(const Options& opt, std::ostream& out, std::ostream& err) {
  const InputDocument doc = parse_input(read_text(opt.file));
  const MappingTorus m = MappingTorus::of(require_map(doc));
  Json result = Json::object();
  bool ok = true;

  if (doc.flow) {
    const Json& fj = *doc.flow;
    if (!fj.is_object() || !fj.contains("points") || !fj["points"].is_array()) {
      throw InvalidInput("flow: expected {\"points\": [...], \"s\": [num, den]}");
    }
    const Rational s = fj.contains("s") ? rational_from_json(fj["s"]) : Rational(1);
    if (s < 0) throw InvalidInput("flow: negative time");
    Json images = Json::array();
    for (const Json& p : fj["points"]) {
      const TorusPoint x = torus_point_from_json(m.graph(), p);
      if (x.t < 0 || x.t >= 1) throw InvalidInput("flow: height outside [0,1)");
      images.push_back(to_json(m.graph(), flow(m, x, s)));
    }
    result["flow"] = images;
  }
  if (opt.check == "flow" || opt.check == "all") {
    bool flow_ok = true;
    result["flow_checks"] = check_flow(opt, m, flow_ok);
    ok = ok && flow_ok;
  }
  if (opt.check == "descriptor" || opt.check == "all") {
    bool desc_ok = true;
    try {
      result["descriptor_checks"] = check_descriptor(opt, doc, m, desc_ok);
    } catch (const PreconditionFailed& e) {
      result["descriptor_checks"] = {{"error", e.what()}};
      desc_ok = false;
    }
    ok = ok && desc_ok;
  }

  Json report = envelope("suspend", doc.hash);
  report["status"] = ok ? "ok" : "failed";
  report["result"] = result;
  emit(opt, report, out);
  save(opt, "suspend.json", dump(report));
  if (!ok) {
    err << "suspend: checks failed\n";
    return kVerificationFailure;
  }
  return kOk;
}

Json run_case(const Options& opt, std::size_t index) {
  const std::uint64_t seed = case_seed(opt.seed, index);
  GeneratorOptions gopt;
  gopt.max_edges = opt.max_edges;
  Json c = {{"index", index}, {"seed", seed}};
  try {
    if (opt.adversarial && index % 5 == 4) {
      const GraphMap f = generate_non_train_track(seed, gopt);
      const CaseReport r = check_map_properties(f);
      c["kind"] = "adversarial";
      c["graph"] = to_json(f.domain());
      c["map"] = to_json(f);
      c["status"] = r.rejected ? "rejected" : "fail";
      c["reason"] = r.rejected ? Json(*r.rejected) : Json("accepted a non-train-track map");
      return c;
    }
    const GeneratedMap gen = generate_train_track(seed, gopt);
    const CaseReport r = check_map_properties(gen.f);
    c["kind"] = "train_track";
    c["attempts"] = gen.attempts;
    c["graph"] = to_json(gen.f.domain());
    c["map"] = to_json(gen.f);
    if (r.package) c["K"] = r.package->K;
    if (r.ok() && !r.rejected) {
      c["status"] = "pass";
      return c;
    }
    c["status"] = "fail";
    Json details = Json::object();
    for (const auto& o : r.outcomes) {
      if (!o.ok) details[o.name] = o.detail;
    }
    if (r.rejected) details["build_induced"] = *r.rejected;
    c["failed"] = details;
    const GraphMap small = shrink(gen.f, [](const GraphMap& g) {
      const CaseReport rr = check_map_properties(g);
      return !rr.ok() || rr.rejected.has_value();
    });
    c["shrunk"] = to_json(small);
  } catch (const std::exception& e) {
    c["status"] = "fail";
    c["failed"] = {{"exception", e.what()}};
  }
  return c;
}

int cmd_proptest(const Options& opt, std::ostream& out, std::ostream& err) {
  const int count = opt.count.value_or(100);
  if (count < 0) throw Exit{kInputError, "--count must be nonnegative"};
  if (opt.jobs < 1) throw Exit{kInputError, "--jobs must be positive"};
  if (opt.max_edges < 2) throw Exit{kInputError, "--max-edges must be at least 2"};
  const std::string params = "seed=" + std::to_string(opt.seed) +
                             ";count=" + std::to_string(count) +
                             ";adversarial=" + (opt.adversarial ? "1" : "0") +
                             ";max_edges=" + std::to_string(opt.max_edges);
  std::vector<Json> cases(static_cast<std::size_t>(count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      cases[i] = run_case(opt, i);
      spdlog::debug("proptest: case {} {}", i, cases[i]["status"].get<std::string>());
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < opt.jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int passed = 0, failed = 0, rejected = 0;
  for (const Json& c : cases) {
    const std::string s = c["status"];
    passed += s == "pass";
    failed += s == "fail";
    rejected += s == "rejected";
  }
  Json report = envelope("proptest", fnv1a_hex(params));
  report["parameters"] = {{"seed", opt.seed},
                          {"count", count},
                          {"adversarial", opt.adversarial},
                          {"max_edges", opt.max_edges}};
  report["status"] = failed == 0 ? "ok" : "failed";
  report["result"] = {{"passed", passed},
                      {"failed", failed},
                      {"rejected_as_expected", rejected},
                      {"cases", cases}};
  emit(opt, report, out);
  save(opt, "proptest.json", dump(report));
  if (failed > 0) {
    err << "proptest: " << failed << " case(s) failed\n";
    return kVerificationFailure;
  }
  return kOk;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot(const Graph& g, const std::string& name,
                const std::function<std::string(EdgeId)>& label) {
  std::ostringstream out;
  out << "digraph " << quoted(name) << " {\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) out << "  " << quoted(g.vertex_name(v)) << ";\n";
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    out << "  " << quoted(g.vertex_name(g.origin(d))) << " -> "
        << quoted(g.vertex_name(g.terminus(d))) << " [label=" << quoted(label(e)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

int cmd_export_dot(const Options& opt, std::ostream& out) {
  std::string text;
  if (!opt.file.empty() && opt.file != "-" && fs::is_directory(opt.file)) {
    const PackageFiles p = read_package(opt.file);
    text = dot(*p.theta_bar, "theta_bar", [&](EdgeId e) {
      return p.theta_bar->edge_name(e) + " / " + to_string(*p.theta, p.pbar.edge_image(e));
    });
  } else {
    const InputDocument doc = parse_input(read_text(opt.file));
    text = dot(*doc.graph, "theta", [&](EdgeId e) { return doc.graph->edge_name(e); });
  }
  out << text;
  save(opt, "graph.dot", text);
  return kOk;
}

}  // namespace

void configure_logging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_mt("ttforge");
    spdlog::set_default_logger(logger);
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("TTFORGE_LOG")) level = spdlog::level::from_str(env);
    spdlog::set_level(level);
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();
  Options opt;
  CLI::App app{"ttforge: train track maps, induced maps on covers, and mapping tori"};
  app.add_option("command", opt.command, "analyze|quotient|induce|suspend|proptest|export-dot")
      ->required()
      ->check(CLI::IsMember({"analyze", "quotient", "induce", "suspend", "proptest", "export-dot"}));
  app.add_option("file", opt.file, "input JSON file, '-' for stdin, or a package directory");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--count", opt.count, "number of samples or cases");
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", opt.jobs, "proptest worker threads");
  app.add_flag("--adversarial", opt.adversarial, "proptest: inject non-train-track maps");
  app.add_option("--check", opt.check, "suspend: flow|descriptor|all")
      ->check(CLI::IsMember({"flow", "descriptor", "all"}));
  app.add_option("--max-edges", opt.max_edges, "proptest: edge bound for generated graphs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  spdlog::debug("command {} file '{}'", opt.command, opt.file);

  try {
    if (opt.command == "analyze") return cmd_analyze(opt, out);
    if (opt.command == "quotient") return cmd_quotient(opt, out);
    if (opt.command == "induce") return cmd_induce(opt, out, err);
    if (opt.command == "suspend") return cmd_suspend(opt, out, err);
    if (opt.command == "proptest") return cmd_proptest(opt, out, err);
    return cmd_export_dot(opt, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionFailed& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "verification error: " << e.what() << "\n";
    return kVerificationFailure;
  }
}

}  // namespace ttforge::cli
