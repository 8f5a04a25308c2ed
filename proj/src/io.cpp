#include "ttforge/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "ttforge/error.hpp"

namespace ttforge {

namespace {

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInput(std::string(where) + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

std::string str(const Json& j, const char* where) {
  if (!j.is_string()) throw InvalidInput(std::string(where) + ": expected a string");
  return j.get<std::string>();
}

VertexId vertex_named(const Graph& g, const std::string& name, const char* where) {
  if (auto v = g.find_vertex(name)) return *v;
  throw InvalidInput(std::string(where) + ": unknown vertex \"" + name + "\"");
}

EdgeId edge_named(const Graph& g, const std::string& name, const char* where) {
  if (auto e = g.find_edge(name)) return *e;
  throw InvalidInput(std::string(where) + ": unknown edge \"" + name + "\"");
}

Path path_in(const Graph& g, const Json& j, std::optional<VertexId> trivial_at,
             const char* where) {
  try {
    Path p = parse_path(g, str(j, where), trivial_at);
    if (!is_path(g, p)) throw InvalidInput(std::string(where) + ": darts are not incident");
    return p;
  } catch (const InvalidInput&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidInput(std::string(where) + ": " + e.what());
  }
}

Json rational_pair(const Rational& x) {
  return Json::array({big_to_json(numerator(x)), big_to_json(denominator(x))});
}

BigInt big_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput("expected an integer");
}

Rational rational_from(const Json& num, const Json& den) {
  const BigInt d = big_from_json(den);
  if (d <= 0) throw InvalidInput("torus point: denominator must be positive");
  return Rational(big_from_json(num), d);
}

Json word_list(const Graph& g, const std::vector<Path>& paths) {
  Json out = Json::array();
  for (const Path& p : paths) out.push_back(to_string(g, p));
  return out;
}

Json basis_rows(const std::vector<std::vector<int>>& rows) {
  Json out = Json::array();
  for (const auto& w : rows) out.push_back(basis_word_to_string(w));
  return out;
}

void write_file(const std::filesystem::path& p, const Json& j) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << dump(j);
}

Json read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw InvalidInput(p.string() + ": " + e.what());
  }
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xf];
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json big_to_json(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
    return static_cast<long long>(x);
  }
  return x.str();
}

Json to_json(const Graph& g) {
  Json vs = Json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) vs.push_back(g.vertex_name(v));
  Json es = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    es.push_back({{"id", g.edge_name(e)},
                  {"from", g.vertex_name(g.origin(d))},
                  {"to", g.vertex_name(g.terminus(d))}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

Graph graph_from_json(const Json& j) {
  const char* where = "graph";
  const Json& vs = field(j, "vertices", where);
  const Json& es = field(j, "edges", where);
  if (!vs.is_array() || !es.is_array()) throw InvalidInput("graph: vertices and edges must be arrays");
  Graph g;
  for (const Json& v : vs) {
    const std::string name = str(v, "graph vertex");
    if (name.empty() || g.find_vertex(name)) {
      throw InvalidInput("graph: empty or duplicate vertex \"" + name + "\"");
    }
    g.add_vertex(name);
  }
  for (const Json& e : es) {
    const std::string id = str(field(e, "id", "graph edge"), "graph edge id");
    if (id.empty() || id[0] == '-' || id == "1" || id.find(' ') != std::string::npos ||
        g.find_edge(id)) {
      throw InvalidInput("graph: invalid or duplicate edge id \"" + id + "\"");
    }
    g.add_edge(id, vertex_named(g, str(field(e, "from", "graph edge"), "from"), "graph edge"),
               vertex_named(g, str(field(e, "to", "graph edge"), "to"), "graph edge"));
  }
  if (g.num_vertices() == 0) throw InvalidInput("graph: no vertices");
  if (!g.is_connected()) throw InvalidInput("graph: not connected");
  return g;
}

Json to_json(const GraphMap& f) {
  Json vs = Json::object();
  for (VertexId v = 0; v < f.domain().num_vertices(); ++v) {
    vs[f.domain().vertex_name(v)] = f.codomain().vertex_name(f.vertex_image(v));
  }
  Json es = Json::object();
  for (EdgeId e = 0; e < f.domain().num_edges(); ++e) {
    es[f.domain().edge_name(e)] = to_string(f.codomain(), f.edge_image(e));
  }
  return {{"vertices", vs}, {"edges", es}};
}

GraphMap map_from_json(const Json& j, GraphPtr domain, GraphPtr codomain) {
  const char* where = "map";
  const Json& es = field(j, "edges", where);
  if (!es.is_object()) throw InvalidInput("map: edges must be an object");
  std::vector<VertexId> vmap(domain->num_vertices(), -1);
  if (j.contains("vertices")) {
    const Json& vs = j.at("vertices");
    if (!vs.is_object()) throw InvalidInput("map: vertices must be an object");
    for (const auto& [name, image] : vs.items()) {
      vmap[vertex_named(*domain, name, where)] =
          vertex_named(*codomain, str(image, "map vertex image"), where);
    }
  } else if (codomain->num_vertices() == 1) {
    std::fill(vmap.begin(), vmap.end(), 0);
  }
  for (VertexId v = 0; v < domain->num_vertices(); ++v) {
    if (vmap[v] < 0) {
      throw InvalidInput("map: no image for vertex \"" + domain->vertex_name(v) + "\"");
    }
  }
  std::vector<Path> images(domain->num_edges());
  std::vector<bool> seen(domain->num_edges(), false);
  for (const auto& [name, image] : es.items()) {
    const EdgeId e = edge_named(*domain, name, where);
    images[e] = path_in(*codomain, image, std::nullopt, "map edge image");
    seen[e] = true;
  }
  for (EdgeId e = 0; e < domain->num_edges(); ++e) {
    if (!seen[e]) throw InvalidInput("map: no image for edge \"" + domain->edge_name(e) + "\"");
  }
  GraphMap f(std::move(domain), std::move(codomain), std::move(vmap), std::move(images));
  if (auto violation = validate(f)) {
    throw InvalidInput("map: " + to_string(violation->kind) + ": " + violation->detail);
  }
  return f;
}

Json to_json(const SubgroupGraph& h) {
  const Graph& g = h.graph();
  Json vs = Json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    vs.push_back({{"id", g.vertex_name(v)}, {"over", h.ambient().vertex_name(h.vertex_label(v))}});
  }
  Json es = Json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    es.push_back({{"id", g.edge_name(e)},
                  {"from", g.vertex_name(g.origin(d))},
                  {"to", g.vertex_name(g.terminus(d))},
                  {"over", h.ambient().edge_name(h.edge_label(e))}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

SubgroupGraph subgroup_from_json(const Json& j, GraphPtr ambient) {
  const char* where = "labeled graph";
  const Json& vs = field(j, "vertices", where);
  const Json& es = field(j, "edges", where);
  if (!vs.is_array() || !es.is_array() || vs.empty()) {
    throw InvalidInput("labeled graph: vertices must be a nonempty array");
  }
  std::map<std::string, VertexId> names;
  std::optional<SubgroupGraph> h;
  for (const Json& v : vs) {
    const std::string id = str(field(v, "id", where), where);
    const VertexId over = vertex_named(*ambient, str(field(v, "over", where), where), where);
    if (names.contains(id)) throw InvalidInput("labeled graph: duplicate vertex \"" + id + "\"");
    if (!h) {
      h.emplace(ambient, over);
      names[id] = 0;
    } else {
      names[id] = h->add_vertex(over);
    }
  }
  std::map<std::string, bool> edge_ids;
  for (const Json& e : es) {
    const std::string id = str(field(e, "id", where), where);
    if (edge_ids[id]) throw InvalidInput("labeled graph: duplicate edge \"" + id + "\"");
    edge_ids[id] = true;
    auto endpoint = [&](const char* key) {
      const std::string name = str(field(e, key, where), where);
      auto it = names.find(name);
      if (it == names.end()) throw InvalidInput("labeled graph: unknown vertex \"" + name + "\"");
      return it->second;
    };
    const EdgeId label = edge_named(*ambient, str(field(e, "over", where), where), where);
    try {
      h->add_edge(endpoint("from"), endpoint("to"), label);
    } catch (const InvalidInput&) {
      throw;
    } catch (const Error& err) {
      throw InvalidInput(std::string("labeled graph: ") + err.what());
    }
  }
  return std::move(*h);
}

Json to_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.size(); ++j) row.push_back(big_to_json(a.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Graph& g, const TorusPoint& x) {
  const Json t = rational_pair(x.t);
  if (x.position.is_vertex()) {
    return Json::array({"vertex", g.vertex_name(x.position.vertex), t[0], t[1]});
  }
  const Json l = rational_pair(x.position.lambda);
  return Json::array({"edge", g.edge_name(x.position.edge), l[0], l[1], t[0], t[1]});
}

TorusPoint torus_point_from_json(const Graph& g, const Json& j) {
  const char* where = "torus point";
  if (!j.is_array() || j.empty()) throw InvalidInput("torus point: expected an array");
  const std::string kind = str(j[0], where);
  if (kind == "vertex" && j.size() == 4) {
    return TorusPoint{GraphPoint::at_vertex(vertex_named(g, str(j[1], where), where)),
                      rational_from(j[2], j[3])};
  }
  if (kind == "edge" && j.size() == 6) {
    const Rational lambda = rational_from(j[2], j[3]);
    if (lambda < 0 || lambda > 1) throw InvalidInput("torus point: λ outside [0,1]");
    return TorusPoint{GraphPoint::on_edge(g, edge_named(g, str(j[1], where), where), lambda),
                      rational_from(j[4], j[5])};
  }
  throw InvalidInput("torus point: malformed");
}

Rational rational_from_json(const Json& j) {
  if (j.is_array() && j.size() == 2) return rational_from(j[0], j[1]);
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw InvalidInput("expected a rational [num, den]");
}

Json to_json(const CoverDescriptor& d) {
  return {{"cover", to_json(d.delta)}, {"map", to_json(d.g.map())}, {"j", d.j}};
}

CoverDescriptor descriptor_from_json(const MappingTorus& m, const Json& j) {
  SubgroupGraph delta = subgroup_from_json(field(j, "cover", "descriptor"), m.F.domain_ptr());
  const Json& jj = field(j, "j", "descriptor");
  if (!jj.is_number_integer() || jj.get<long long>() < 1 || jj.get<long long>() > 1024) {
    throw InvalidInput("descriptor: j must be an integer in [1, 1024]");
  }
  // The cover JSON may use its own names; read the map through them.
  const Json& cover = j.at("cover");
  std::map<std::string, std::string> vnames, enames;
  for (std::size_t i = 0; i < cover.at("vertices").size(); ++i) {
    vnames[cover["vertices"][i]["id"].get<std::string>()] =
        delta.graph().vertex_name(static_cast<VertexId>(i));
  }
  for (std::size_t i = 0; i < cover.at("edges").size(); ++i) {
    enames[cover["edges"][i]["id"].get<std::string>()] =
        delta.graph().edge_name(static_cast<EdgeId>(i));
  }
  auto rename_vertex = [&](const std::string& s) {
    auto it = vnames.find(s);
    if (it == vnames.end()) throw InvalidInput("descriptor map: unknown vertex \"" + s + "\"");
    return it->second;
  };
  auto rename_path = [&](const std::string& s) {
    std::istringstream in(s);
    std::string tok, out;
    while (in >> tok) {
      const bool neg = tok[0] == '-';
      auto it = enames.find(neg ? tok.substr(1) : tok);
      if (it == enames.end()) throw InvalidInput("descriptor map: unknown edge \"" + tok + "\"");
      if (!out.empty()) out += ' ';
      out += (neg ? "-" : "") + it->second;
    }
    return out;
  };
  const Json& mj = field(j, "map", "descriptor");
  Json renamed = {{"vertices", Json::object()}, {"edges", Json::object()}};
  if (mj.contains("vertices") && mj["vertices"].is_object()) {
    for (const auto& [k, v] : mj["vertices"].items()) {
      renamed["vertices"][rename_vertex(k)] = rename_vertex(str(v, "descriptor map"));
    }
  }
  if (!mj.contains("edges") || !mj["edges"].is_object()) {
    throw InvalidInput("descriptor map: missing edges");
  }
  for (const auto& [k, v] : mj["edges"].items()) {
    auto it = enames.find(k);
    if (it == enames.end()) throw InvalidInput("descriptor map: unknown edge \"" + k + "\"");
    renamed["edges"][it->second] = rename_path(str(v, "descriptor map"));
  }
  GraphMap g = map_from_json(renamed, delta.graph_ptr(), delta.graph_ptr());
  return make_cover_descriptor(m, std::move(delta), g, static_cast<int>(jj.get<long long>()));
}

InputDocument parse_input(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("input: expected a JSON object");
  InputDocument doc;
  doc.hash = fnv1a_hex(text);
  try {
    doc.graph = std::make_shared<const Graph>(graph_from_json(field(j, "graph", "input")));
    if (j.contains("basepoint")) {
      doc.basepoint = vertex_named(*doc.graph, str(j["basepoint"], "basepoint"), "basepoint");
    }
    if (j.contains("map")) doc.map = map_from_json(j["map"], doc.graph, doc.graph);
    const VertexId base = doc.basepoint.value_or(0);
    if (j.contains("endomorphism")) {
      const Json& images = field(j["endomorphism"], "images", "endomorphism");
      if (!images.is_object()) throw InvalidInput("endomorphism: images must be an object");
      const auto tree = spanning_tree(*doc.graph, base);
      std::vector<Path> imgs;
      for (EdgeId e : non_tree_edges(*doc.graph, tree)) {
        const std::string& name = doc.graph->edge_name(e);
        if (!images.contains(name)) {
          throw InvalidInput("endomorphism: no image for generator \"" + name + "\"");
        }
        Path p = path_in(*doc.graph, images[name], base, "endomorphism image");
        if (p.start != base || p.finish != base) {
          throw InvalidInput("endomorphism: image of \"" + name + "\" is not a loop at the basepoint");
        }
        imgs.push_back(std::move(p));
      }
      if (images.size() != imgs.size()) {
        throw InvalidInput("endomorphism: images must be given exactly for the generators");
      }
      doc.endomorphism.emplace(doc.graph, base, std::move(imgs));
    }
    if (j.contains("subgroup")) {
      const Json& gens = j["subgroup"];
      if (!gens.is_array()) throw InvalidInput("subgroup: expected an array of paths");
      std::vector<Path> loops;
      for (const Json& w : gens) {
        Path p = path_in(*doc.graph, w, base, "subgroup generator");
        if (p.start != base || p.finish != base) {
          throw InvalidInput("subgroup: generator is not a loop at the basepoint");
        }
        loops.push_back(std::move(p));
      }
      doc.subgroup = std::move(loops);
    }
    if (j.contains("descriptor")) doc.descriptor = j["descriptor"];
    if (j.contains("flow")) doc.flow = j["flow"];
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("input: ") + e.what());
  }
  return doc;
}

Json to_json(const InputDocument& doc) {
  Json j = {{"graph", to_json(*doc.graph)}};
  if (doc.map) j["map"] = to_json(*doc.map);
  if (doc.basepoint) j["basepoint"] = doc.graph->vertex_name(*doc.basepoint);
  if (doc.endomorphism) {
    Json images = Json::object();
    for (int i = 0; i < doc.endomorphism->rank(); ++i) {
      images[doc.graph->edge_name(doc.endomorphism->generator_edge(i))] =
          to_string(*doc.graph, doc.endomorphism->images()[i]);
    }
    j["endomorphism"] = {{"images", images}};
  }
  if (doc.subgroup) j["subgroup"] = word_list(*doc.graph, *doc.subgroup);
  if (doc.descriptor) j["descriptor"] = *doc.descriptor;
  if (doc.flow) j["flow"] = *doc.flow;
  return j;
}

Json to_json(const TrainTrackCertificate& c, const Graph& g) {
  Json out = {{"train_track", c.train_track}, {"reason", c.reason}};
  Json closure = Json::array();
  for (const Turn& t : c.closure) closure.push_back(to_string(g, t));
  out["turn_closure"] = closure;
  Json orbit = Json::array();
  for (const Turn& t : c.offending_orbit) orbit.push_back(to_string(g, t));
  out["offending_orbit"] = orbit;
  return out;
}

Json to_json(const StableQuotientReport& q, const Graph& g) {
  return {{"K", q.stabilization},
          {"rank", q.rank},
          {"basis", word_list(g, q.basis)},
          {"phi_bar", basis_rows(q.restriction)},
          {"image_ranks", q.image_ranks},
          {"J", to_json(q.image)}};
}

Json to_json(const VerificationReport& r) {
  auto opt = [](const std::optional<int>& x) { return x ? Json(*x) : Json(nullptr); };
  return {{"fbar_P_equals_P_f", r.fbar_P_equals_P_f},
          {"pbar_fbar_equals_f_pbar", r.pbar_fbar_equals_f_pbar},
          {"pbar_P_equals_f_K", r.pbar_P_equals_f_K},
          {"P_pbar_equals_fbar_K", r.P_pbar_equals_fbar_K},
          {"K_formula", r.K_formula},
          {"no_valence_one", r.no_valence_one},
          {"fbar_train_track", r.fbar_train_track},
          {"fbar_expanding", r.fbar_expanding},
          {"fbar_irreducible", r.fbar_irreducible},
          {"f_positive_power", opt(r.f_positive_power)},
          {"fbar_positive_power", opt(r.fbar_positive_power)},
          {"primitivity_transfers", r.primitivity_transfers},
          {"lambda_f", r.lambda_f},
          {"lambda_fbar", r.lambda_fbar},
          {"lambda_difference", r.lambda_difference},
          {"lambda_match", r.lambda_match},
          {"core_rank", r.core_rank},
          {"j_rank", r.j_rank},
          {"rank_matches", r.rank_matches},
          {"n_values", r.n_values},
          {"n_constant", r.n_constant},
          {"failures", r.failures},
          {"passed", r.passed()}};
}

Json to_json(const ConjugacyResult& c, const Graph& g) {
  return {{"fbar_star", basis_rows(c.fbar_star)},
          {"phi_bar", basis_rows(c.phi_bar)},
          {"witness", c.witness ? Json(basis_word_to_string(*c.witness)) : Json(nullptr)},
          {"bound", c.bound},
          {"candidates", c.candidates},
          {"ambient_conjugator", to_string(g, c.ambient_conjugator)},
          {"ambient_identity_holds", c.ambient_identity_holds},
          {"rank_agrees", c.rank_agrees},
          {"summary", c.summary}};
}

Json package_constants(const InducedPackage& pkg) {
  const Graph& t = pkg.f.domain();
  const Graph& tb = *pkg.theta_bar;
  Json orbit = Json::array();
  for (VertexId v : pkg.orbit) orbit.push_back(t.vertex_name(v));
  return {{"v", t.vertex_name(pkg.v)},
          {"r", pkg.r},
          {"n", pkg.n},
          {"k", pkg.k},
          {"K", pkg.K},
          {"orbit", orbit},
          {"n_values", pkg.n_values},
          {"trivial_cover", pkg.trivial_cover},
          {"cover_base", tb.vertex_name(pkg.cover_base)},
          {"z", tb.vertex_name(pkg.z)},
          {"preperiod", pkg.preperiod},
          {"period", pkg.period},
          {"J_basis", word_list(t, pkg.j.basis_words())},
          {"J_rank", pkg.j.rank()}};
}

void write_package(const std::filesystem::path& dir, const InducedPackage& pkg,
                   const Json& report) {
  std::filesystem::create_directories(dir);
  write_file(dir / "theta_bar.json",
             {{"ambient", to_json(pkg.f.domain())}, {"graph", to_json(*pkg.theta_bar)}});
  write_file(dir / "fbar.json", to_json(pkg.fbar));
  write_file(dir / "pbar.json", to_json(pkg.pbar));
  write_file(dir / "P.json", to_json(pkg.P));
  write_file(dir / "constants.json", package_constants(pkg));
  write_file(dir / "report.json", report);
}

PackageFiles read_package(const std::filesystem::path& dir) {
  const Json tb = read_file(dir / "theta_bar.json");
  auto theta = std::make_shared<const Graph>(graph_from_json(field(tb, "ambient", "theta_bar")));
  auto theta_bar = std::make_shared<const Graph>(graph_from_json(field(tb, "graph", "theta_bar")));
  GraphMap fbar = map_from_json(read_file(dir / "fbar.json"), theta_bar, theta_bar);
  GraphMap pbar = map_from_json(read_file(dir / "pbar.json"), theta_bar, theta);
  GraphMap P = map_from_json(read_file(dir / "P.json"), theta, theta_bar);
  return PackageFiles{theta, theta_bar, std::move(fbar), std::move(pbar), std::move(P),
                      read_file(dir / "constants.json")};
}

}  // namespace ttforge
