#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"
#include "ttforge/induced.hpp"
#include "ttforge/matrix.hpp"
#include "ttforge/suspension.hpp"
#include "ttforge/traintrack.hpp"

namespace ttforge {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// {"vertices": [...], "edges": [{"id", "from", "to"}, ...]}
Json to_json(const Graph& g);
Graph graph_from_json(const Json& j);

/// {"vertices": {name: name}, "edges": {name: "path"}}. Vertex images may be
/// omitted when the codomain has a single vertex.
Json to_json(const GraphMap& f);
GraphMap map_from_json(const Json& j, GraphPtr domain, GraphPtr codomain);

/// Labeled graph: vertices and edges carry `over` (ambient name); the first
/// vertex is the basepoint.
Json to_json(const SubgroupGraph& h);
SubgroupGraph subgroup_from_json(const Json& j, GraphPtr ambient);

Json to_json(const IntMatrix& a);
Json big_to_json(const BigInt& x);

/// ["edge", id, λ_num, λ_den, t_num, t_den] or ["vertex", id, t_num, t_den].
Json to_json(const Graph& g, const TorusPoint& x);
TorusPoint torus_point_from_json(const Graph& g, const Json& j);
/// [num, den] with den > 0, or a plain integer.
Rational rational_from_json(const Json& j);

/// {"cover": <labeled graph>, "map": <self-map of the cover>, "j": j}
Json to_json(const CoverDescriptor& d);
/// Parses and validates with make_cover_descriptor.
CoverDescriptor descriptor_from_json(const MappingTorus& m, const Json& j);

/// Parsed input file. Everything but the graph is optional.
struct InputDocument {
  GraphPtr graph;
  std::optional<GraphMap> map;
  std::optional<VertexId> basepoint;
  /// Images of the spanning-tree generators at the basepoint.
  std::optional<Pi1Endomorphism> endomorphism;
  /// Generators of a subgroup, as closed paths at the basepoint.
  std::optional<std::vector<Path>> subgroup;
  std::optional<Json> descriptor;
  /// Flow queries for `suspend`: {"points": [...], "s": [num, den]}.
  std::optional<Json> flow;
  std::string hash;
};

/// Throws InvalidInput on malformed JSON or any schema or validity error.
InputDocument parse_input(std::string_view text);
Json to_json(const InputDocument& doc);

Json to_json(const TrainTrackCertificate& c, const Graph& g);
Json to_json(const StableQuotientReport& q, const Graph& g);
Json to_json(const VerificationReport& r);
Json to_json(const ConjugacyResult& c, const Graph& g);
Json package_constants(const InducedPackage& pkg);

/// Writes theta_bar.json, fbar.json, pbar.json, P.json, constants.json and
/// report.json under `dir`.
void write_package(const std::filesystem::path& dir, const InducedPackage& pkg,
                   const Json& report);

/// Reads Θ̄, f̄ and p̄ back from a package directory.
struct PackageFiles {
  GraphPtr theta;
  GraphPtr theta_bar;
  GraphMap fbar;
  GraphMap pbar;
  GraphMap P;
  Json constants;
};
PackageFiles read_package(const std::filesystem::path& dir);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace ttforge
