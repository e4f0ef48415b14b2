#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace xhaul {

// Thrown for malformed input documents (bad kinds, duplicate ids, broken
// invariants).  The CLI maps it to its schema-error exit code.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

using NodeId = int;
using EdgeId = int;

enum class NodeKind { RegionalPP, EdgePP, CellSitePP, Switch, Core };

const char* to_string(NodeKind k);
NodeKind node_kind_from_string(const std::string& s);

// True for node kinds that can host RAN functions (have compute).
bool is_processing(NodeKind k);

struct Node {
  NodeId id = -1;
  NodeKind kind = NodeKind::Switch;
  int cpus = 0;                // 0 for Switch/Core
  double capacity_gops = 0.0;  // cpus * per-CPU GOPS, filled at load time
  bool core_adjacent = false;  // has an edge to the core node
};

struct Edge {
  EdgeId id = -1;
  NodeId a = -1, b = -1;       // endpoints, undirected
  double capacity_gbps = 0.0;  // shared by both directions
  double length_km = 0.0;
};

// A loop-free edge sequence between two nodes.  nodes.size() == edges.size()+1
// and nodes.front()/nodes.back() are the endpoints.  An empty path (colocated
// endpoints) has one node and no edges.
struct Path {
  std::vector<EdgeId> edges;
  std::vector<NodeId> nodes;
  double length_km = 0.0;

  int hops() const { return static_cast<int>(edges.size()); }
  bool empty() const { return edges.empty(); }
  bool uses_edge(EdgeId e) const;
  // Edge preceding `e` in the sequence; -1 when `e` is the first hop.
  // Precondition: uses_edge(e).
  EdgeId prev_edge(EdgeId e) const;
  bool operator==(const Path& o) const { return nodes == o.nodes && edges == o.edges; }
};

class Topology {
 public:
  std::vector<Node> nodes;  // dense ids: nodes[i].id == i
  std::vector<Edge> edges;  // dense ids: edges[i].id == i

  const Node& node(NodeId v) const { return nodes.at(v); }
  const Edge& edge(EdgeId e) const { return edges.at(e); }
  // Edge ids incident to v, ascending.
  const std::vector<EdgeId>& incident(NodeId v) const { return adj_.at(v); }
  NodeId other_end(EdgeId e, NodeId v) const;
  NodeId core_node() const { return core_; }

  std::vector<NodeId> processing_nodes() const;  // ascending id
  std::vector<NodeId> switch_nodes() const;      // ascending id

  // Called after nodes/edges are filled; builds adjacency, flags
  // core-adjacency and verifies structural invariants (single core,
  // connectivity, compute only on processing nodes, no duplicate edges).
  void finalize();

 private:
  std::vector<std::vector<EdgeId>> adj_;
  NodeId core_ = -1;
};

// Parses the `topology` object of a scenario document.  `per_cpu_gops`
// converts per-node CPU counts into capacities.
Topology load_topology(const nlohmann::json& doc, double per_cpu_gops);

// Shortest-path distance (km) from src to every node; unreachable = +inf.
std::vector<double> dijkstra_km(const Topology& t, NodeId src);

// The k shortest loop-free paths from src to dst, sorted by
// (length_km, hop count, lexicographic edge-id sequence).  All paths tying
// with the k-th by length are resolved through the full sort key before
// truncation, so the result does not depend on search order.
// Precondition: src != dst.
std::vector<Path> k_shortest_paths(const Topology& t, NodeId src, NodeId dst, int k);

// Candidate path sets shared by every solver so they search identical spaces.
// Ordered pairs are kept separately: list(u,v) follows the u->v direction,
// which matters for ingress-dependent delay terms.  Colocated endpoints map
// to the single empty path.
class PathCatalog {
 public:
  PathCatalog() = default;
  PathCatalog(const Topology& t, int k);

  int k() const { return k_; }
  const std::vector<Path>& paths(NodeId src, NodeId dst) const;
  double dist_km(NodeId src, NodeId dst) const;

 private:
  int k_ = 0;
  std::map<std::pair<NodeId, NodeId>, std::vector<Path>> table_;
  std::vector<std::vector<double>> dist_;
};

}  // namespace xhaul
