#include "xhaul/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace xhaul {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLenTol = 1e-9;
}  // namespace

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::RegionalPP: return "regional_pp";
    case NodeKind::EdgePP: return "edge_pp";
    case NodeKind::CellSitePP: return "cell_site_pp";
    case NodeKind::Switch: return "switch";
    case NodeKind::Core: return "core";
  }
  return "?";
}

NodeKind node_kind_from_string(const std::string& s) {
  if (s == "regional_pp") return NodeKind::RegionalPP;
  if (s == "edge_pp") return NodeKind::EdgePP;
  if (s == "cell_site_pp") return NodeKind::CellSitePP;
  if (s == "switch") return NodeKind::Switch;
  if (s == "core") return NodeKind::Core;
  throw SchemaError("unknown node kind '" + s + "'");
}

bool is_processing(NodeKind k) {
  return k == NodeKind::RegionalPP || k == NodeKind::EdgePP || k == NodeKind::CellSitePP;
}

bool Path::uses_edge(EdgeId e) const {
  return std::find(edges.begin(), edges.end(), e) != edges.end();
}

EdgeId Path::prev_edge(EdgeId e) const {
  for (size_t i = 0; i < edges.size(); ++i)
    if (edges[i] == e) return i == 0 ? -1 : edges[i - 1];
  throw std::logic_error("prev_edge: edge not on path");
}

NodeId Topology::other_end(EdgeId e, NodeId v) const {
  const Edge& ed = edge(e);
  if (ed.a == v) return ed.b;
  if (ed.b == v) return ed.a;
  throw std::logic_error("other_end: node not an endpoint");
}

std::vector<NodeId> Topology::processing_nodes() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (is_processing(n.kind)) out.push_back(n.id);
  return out;
}

std::vector<NodeId> Topology::switch_nodes() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes)
    if (n.kind == NodeKind::Switch) out.push_back(n.id);
  return out;
}

void Topology::finalize() {
  if (nodes.empty()) throw SchemaError("topology has no nodes");
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id != static_cast<NodeId>(i))
      throw SchemaError("node ids must be dense and start at 0");

  core_ = -1;
  for (const Node& n : nodes) {
    if (n.kind == NodeKind::Core) {
      if (core_ != -1) throw SchemaError("topology must have exactly one core node");
      core_ = n.id;
    }
    if (!is_processing(n.kind) && n.cpus != 0)
      throw SchemaError("node " + std::to_string(n.id) + ": only processing nodes may have cpus");
    if (n.cpus < 0 || n.capacity_gops < 0)
      throw SchemaError("node " + std::to_string(n.id) + ": negative compute");
  }
  if (core_ == -1) throw SchemaError("topology must have exactly one core node");

  adj_.assign(nodes.size(), {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.id != static_cast<EdgeId>(i)) throw SchemaError("edge ids must be dense and start at 0");
    if (e.a < 0 || e.b < 0 || e.a >= static_cast<NodeId>(nodes.size()) ||
        e.b >= static_cast<NodeId>(nodes.size()))
      throw SchemaError("edge " + std::to_string(e.id) + ": endpoint out of range");
    if (e.a == e.b) throw SchemaError("edge " + std::to_string(e.id) + ": self-loop");
    if (e.capacity_gbps <= 0 || e.length_km < 0)
      throw SchemaError("edge " + std::to_string(e.id) + ": bad capacity or length");
    auto key = std::minmax(e.a, e.b);
    if (!seen.insert({key.first, key.second}).second)
      throw SchemaError("duplicate edge between " + std::to_string(e.a) + " and " + std::to_string(e.b));
    adj_[e.a].push_back(e.id);
    adj_[e.b].push_back(e.id);
  }
  for (auto& v : adj_) std::sort(v.begin(), v.end());

  for (Node& n : nodes) {
    n.core_adjacent = false;
    for (EdgeId e : adj_[n.id])
      if (other_end(e, n.id) == core_) n.core_adjacent = true;
  }

  // Connectivity (BFS from node 0 over all edges).
  std::vector<char> vis(nodes.size(), 0);
  std::queue<NodeId> q;
  q.push(0);
  vis[0] = 1;
  size_t reached = 1;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (EdgeId e : adj_[v]) {
      NodeId u = other_end(e, v);
      if (!vis[u]) {
        vis[u] = 1;
        ++reached;
        q.push(u);
      }
    }
  }
  if (reached != nodes.size()) throw SchemaError("topology is not connected");
}

Topology load_topology(const nlohmann::json& doc, double per_cpu_gops) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw SchemaError("topology must contain 'nodes' and 'edges'");
  Topology t;
  for (const auto& jn : doc.at("nodes")) {
    Node n;
    n.id = jn.at("id").get<int>();
    n.kind = node_kind_from_string(jn.at("kind").get<std::string>());
    n.cpus = jn.value("cpus", 0);
    n.capacity_gops = n.cpus * per_cpu_gops;
    t.nodes.push_back(n);
  }
  for (const auto& je : doc.at("edges")) {
    Edge e;
    e.id = static_cast<EdgeId>(t.edges.size());
    e.a = je.at("a").get<int>();
    e.b = je.at("b").get<int>();
    e.capacity_gbps = je.at("capacity_gbps").get<double>();
    e.length_km = je.at("length_km").get<double>();
    t.edges.push_back(e);
  }
  t.finalize();
  return t;
}

std::vector<double> dijkstra_km(const Topology& t, NodeId src) {
  std::vector<double> dist(t.nodes.size(), kInf);
  dist[src] = 0;
  // (dist, node) keys make the visit order deterministic.
  std::priority_queue<std::pair<double, NodeId>, std::vector<std::pair<double, NodeId>>,
                      std::greater<>>
      pq;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (EdgeId e : t.incident(v)) {
      NodeId u = t.other_end(e, v);
      double nd = d + t.edge(e).length_km;
      if (nd < dist[u] - kLenTol) {
        dist[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return dist;
}

namespace {

// Shortest path by length with banned nodes/edges; empty result if none.
// Ties are broken toward smaller node ids so the search itself is
// deterministic (the final sort key is applied by the caller anyway).
Path sp_restricted(const Topology& t, NodeId src, NodeId dst,
                   const std::vector<char>& node_banned, const std::set<EdgeId>& edge_banned) {
  size_t n = t.nodes.size();
  std::vector<double> dist(n, kInf);
  std::vector<EdgeId> via(n, -1);
  dist[src] = 0;
  std::priority_queue<std::pair<double, NodeId>, std::vector<std::pair<double, NodeId>>,
                      std::greater<>>
      pq;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v] + kLenTol) continue;
    for (EdgeId e : t.incident(v)) {
      if (edge_banned.count(e)) continue;
      NodeId u = t.other_end(e, v);
      if (node_banned[u] && u != dst) continue;
      double nd = d + t.edge(e).length_km;
      if (nd < dist[u] - kLenTol) {
        dist[u] = nd;
        via[u] = e;
        pq.push({nd, u});
      }
    }
  }
  Path p;
  if (dist[dst] == kInf) return p;
  NodeId v = dst;
  while (v != src) {
    EdgeId e = via[v];
    p.edges.push_back(e);
    p.nodes.push_back(v);
    v = t.other_end(e, v);
  }
  p.nodes.push_back(src);
  std::reverse(p.edges.begin(), p.edges.end());
  std::reverse(p.nodes.begin(), p.nodes.end());
  p.length_km = dist[dst];
  return p;
}

struct PathKeyLess {
  bool operator()(const Path& x, const Path& y) const {
    if (std::abs(x.length_km - y.length_km) > kLenTol) return x.length_km < y.length_km;
    if (x.hops() != y.hops()) return x.hops() < y.hops();
    return x.edges < y.edges;
  }
};

}  // namespace

std::vector<Path> k_shortest_paths(const Topology& t, NodeId src, NodeId dst, int k) {
  if (src == dst) throw std::invalid_argument("k_shortest_paths: src == dst");
  if (k <= 0) return {};

  // Yen's algorithm.  Generation continues past k while candidates tie with
  // the k-th length, then the full key decides the cut.
  std::vector<Path> found;
  std::set<std::vector<EdgeId>> found_keys;
  auto cmp = [](const Path& x, const Path& y) {
    if (std::abs(x.length_km - y.length_km) > kLenTol) return x.length_km > y.length_km;
    return x.edges > y.edges;  // any total order works for the candidate heap
  };
  std::priority_queue<Path, std::vector<Path>, decltype(cmp)> cand(cmp);
  std::set<std::vector<EdgeId>> cand_keys;

  std::vector<char> no_ban(t.nodes.size(), 0);
  Path first = sp_restricted(t, src, dst, no_ban, {});
  if (first.edges.empty()) return {};
  cand.push(first);
  cand_keys.insert(first.edges);

  while (!cand.empty()) {
    Path p = cand.top();
    cand.pop();
    if (static_cast<int>(found.size()) >= k && p.length_km > found[k - 1].length_km + kLenTol)
      break;
    found.push_back(p);
    found_keys.insert(p.edges);
    if (static_cast<int>(found.size()) >= 4 * k + 64) break;  // tie-flood guard

    // Spur from every node of p.
    for (size_t i = 0; i < p.edges.size(); ++i) {
      NodeId spur = p.nodes[i];
      std::vector<EdgeId> root(p.edges.begin(), p.edges.begin() + i);
      std::set<EdgeId> banned_edges;
      for (const Path& q : found)
        if (q.edges.size() > i && std::equal(root.begin(), root.end(), q.edges.begin()))
          banned_edges.insert(q.edges[i]);
      std::vector<char> banned_nodes(t.nodes.size(), 0);
      for (size_t j = 0; j < i; ++j) banned_nodes[p.nodes[j]] = 1;

      Path tail = sp_restricted(t, spur, dst, banned_nodes, banned_edges);
      if (tail.edges.empty()) continue;
      Path whole;
      whole.edges = root;
      whole.edges.insert(whole.edges.end(), tail.edges.begin(), tail.edges.end());
      whole.nodes.assign(p.nodes.begin(), p.nodes.begin() + i);
      whole.nodes.insert(whole.nodes.end(), tail.nodes.begin(), tail.nodes.end());
      whole.length_km = 0;
      for (EdgeId e : whole.edges) whole.length_km += t.edge(e).length_km;
      if (found_keys.count(whole.edges) || !cand_keys.insert(whole.edges).second) continue;
      cand.push(whole);
    }
    std::sort(found.begin(), found.end(), PathKeyLess{});
  }

  std::sort(found.begin(), found.end(), PathKeyLess{});
  if (static_cast<int>(found.size()) > k) found.resize(k);
  return found;
}

PathCatalog::PathCatalog(const Topology& t, int k) : k_(k) {
  std::vector<NodeId> pnodes = t.processing_nodes();
  for (NodeId u : pnodes) {
    for (NodeId v : pnodes) {
      if (u == v) {
        Path self;
        self.nodes = {u};
        table_[{u, u}] = {self};
      } else {
        table_[{u, v}] = k_shortest_paths(t, u, v, k);
      }
    }
  }
  dist_.resize(t.nodes.size());
  for (const Node& n : t.nodes) dist_[n.id] = dijkstra_km(t, n.id);
}

const std::vector<Path>& PathCatalog::paths(NodeId src, NodeId dst) const {
  auto it = table_.find({src, dst});
  if (it == table_.end()) throw std::logic_error("PathCatalog: pair not precomputed");
  return it->second;
}

double PathCatalog::dist_km(NodeId src, NodeId dst) const { return dist_.at(src).at(dst); }

}  // namespace xhaul
