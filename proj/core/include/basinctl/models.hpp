#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "basinctl/system.hpp"

namespace basinctl {

using Edge = std::pair<std::size_t, std::size_t>;
using EdgeList = std::vector<Edge>;

/// Named model parameters, e.g. {"gamma": 1.0} or {"k": 0.05, "nodes": 10}.
using ModelParams = std::map<std::string, double>;

inline constexpr const char* kDoubleWellParticle = "double_well_particle";
inline constexpr const char* kBistableNetwork = "bistable_network";

/// Particle in the quartic double-well potential U(x) = x^4/4 - x^2/2 with
/// linear damping gamma. State (x, v); stable fixed points (+-1, 0).
DynamicalSystem make_double_well_particle(double gamma);

/// n bistable nodes y_i' = y_i - y_i^3 + k * sum_j A_ij (y_j - y_i) on an
/// undirected graph. Throws BadTopology if an edge references a node >= n.
DynamicalSystem make_bistable_network(std::size_t nodes, double coupling, const EdgeList& edges);

/// Builds a bundled model by name.
///
/// double_well_particle: params {gamma} (default 1).
/// bistable_network: params {k, nodes}; `nodes` defaults to one more than the
/// largest index in `topology`.
///
/// Throws UnknownModel, BadTopology, or ValidationError for bad params.
DynamicalSystem registry_build(const std::string& name, const ModelParams& params,
                               const std::optional<EdgeList>& topology = std::nullopt);

/// Reads an edge list: one `i j` pair per line, 0-based, `#` comments.
/// Throws BadTopology on malformed lines.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

/// Documented stable fixed points of a bundled model.
std::vector<Vector> stable_fixed_points(const DynamicalSystem& system);

}  // namespace basinctl
