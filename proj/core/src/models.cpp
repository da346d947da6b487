#include "basinctl/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

double param_or(const ModelParams& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void require_known_keys(const ModelParams& params, std::initializer_list<const char*> keys,
                        const std::string& model) {
  for (const auto& [key, value] : params) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw ValidationError("unknown parameter '" + key + "' for model " + model);
    }
    if (!std::isfinite(value)) {
      throw ValidationError("parameter '" + key + "' for model " + model + " is not finite");
    }
  }
}

}  // namespace

DynamicalSystem make_double_well_particle(double gamma) {
  if (!std::isfinite(gamma)) throw ValidationError("gamma must be finite");
  DynamicalSystem sys;
  sys.name = kDoubleWellParticle;
  sys.dimension = 2;
  sys.params = {gamma};
  sys.rhs_into = [gamma](const Vector& y, Vector& out) {
    const double x = y[0];
    const double v = y[1];
    out[0] = v;
    out[1] = -gamma * v + x - x * x * x;
  };
  sys.rhs = [into = sys.rhs_into](const Vector& y) {
    Vector out(2);
    into(y, out);
    return out;
  };
  sys.analytic_jacobian = [gamma](const Vector& y) {
    Matrix jac(2, 2);
    jac << 0.0, 1.0, 1.0 - 3.0 * y[0] * y[0], -gamma;
    return jac;
  };
  return sys;
}

DynamicalSystem make_bistable_network(std::size_t nodes, double coupling, const EdgeList& edges) {
  if (nodes == 0) throw ValidationError("bistable_network needs at least one node");
  if (!std::isfinite(coupling)) throw ValidationError("coupling must be finite");

  // Graph Laplacian L = D - A with unit weights; duplicate edges and
  // self-loops are ignored.
  std::set<Edge> unique;
  for (const auto& [i, j] : edges) {
    if (i >= nodes || j >= nodes) {
      throw BadTopology("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") references a node outside 0.." + std::to_string(nodes - 1));
    }
    if (i != j) unique.emplace(std::min(i, j), std::max(i, j));
  }
  const auto n = static_cast<Eigen::Index>(nodes);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * unique.size());
  for (const auto& [a, b] : unique) {
    const auto i = static_cast<Eigen::Index>(a);
    const auto j = static_cast<Eigen::Index>(b);
    triplets.emplace_back(i, j, -1.0);
    triplets.emplace_back(j, i, -1.0);
    triplets.emplace_back(i, i, 1.0);
    triplets.emplace_back(j, j, 1.0);
  }
  // Explicit zero diagonal so the Jacobian can add to it in place.
  for (Eigen::Index i = 0; i < n; ++i) triplets.emplace_back(i, i, 0.0);
  SparseMatrix laplacian(n, n);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());

  SparseMatrix coupling_term = (-coupling) * laplacian;
  coupling_term.makeCompressed();

  DynamicalSystem sys;
  sys.name = kBistableNetwork;
  sys.dimension = nodes;
  sys.params = {coupling, static_cast<double>(nodes)};
  sys.rhs_into = [coupling_term](const Vector& y, Vector& out) {
    out = y.array() - y.array().cube();
    out.noalias() += coupling_term * y;
  };
  sys.rhs = [into = sys.rhs_into](const Vector& y) {
    Vector out(y.size());
    into(y, out);
    return out;
  };
  sys.sparse_jacobian = [coupling_term](const Vector& y) {
    SparseMatrix jac = coupling_term;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      jac.coeffRef(i, i) += 1.0 - 3.0 * y[i] * y[i];
    }
    return jac;
  };
  sys.jacobian_product = [coupling_term](const Vector& y, const Matrix& m, Matrix& out) {
    out.noalias() = coupling_term * m;
    out.noalias() += (1.0 - 3.0 * y.array().square()).matrix().asDiagonal() * m;
  };
  sys.jacobian_product = [coupling_term](const Vector& y, const Matrix& m, Matrix& out) {
    out.noalias() = coupling_term * m;
    out.noalias() += (1.0 - 3.0 * y.array().square()).matrix().asDiagonal() * m;
  };
  return sys;
}

DynamicalSystem registry_build(const std::string& name, const ModelParams& params,
                               const std::optional<EdgeList>& topology) {
  if (name == kDoubleWellParticle) {
    require_known_keys(params, {"gamma"}, name);
    return make_double_well_particle(param_or(params, "gamma", 1.0));
  }
  if (name == kBistableNetwork) {
    require_known_keys(params, {"k", "nodes"}, name);
    const EdgeList edges = topology.value_or(EdgeList{});
    std::size_t nodes = 0;
    if (const auto it = params.find("nodes"); it != params.end()) {
      if (it->second < 1 || it->second != std::floor(it->second)) {
        throw ValidationError("bistable_network: 'nodes' must be a positive integer");
      }
      nodes = static_cast<std::size_t>(it->second);
    } else {
      for (const auto& [i, j] : edges) nodes = std::max({nodes, i + 1, j + 1});
      if (nodes == 0) throw ValidationError("bistable_network: give 'nodes' or a topology");
    }
    return make_bistable_network(nodes, param_or(params, "k", 0.0), edges);
  }
  throw UnknownModel("unknown model '" + name + "' (expected " + kDoubleWellParticle + " or " +
                     kBistableNetwork + ")");
}

EdgeList read_edge_list(std::istream& in) {
  EdgeList edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long i = -1;
    long long j = -1;
    std::string rest;
    if (!(fields >> i >> j) || (fields >> rest) || i < 0 || j < 0) {
      throw BadTopology("edge list line " + std::to_string(lineno) + ": expected `i j`, got '" +
                        line + "'");
    }
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return edges;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw BadTopology("cannot open edge list " + path.string());
  return read_edge_list(in);
}

std::vector<Vector> stable_fixed_points(const DynamicalSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.dimension);
  if (system.name == kDoubleWellParticle) {
    return {Vector{{1.0, 0.0}}, Vector{{-1.0, 0.0}}};
  }
  if (system.name == kBistableNetwork) {
    return {Vector::Ones(n), Vector::Constant(n, -1.0)};
  }
  return {};
}

}  // namespace basinctl
