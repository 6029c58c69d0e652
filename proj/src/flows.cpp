#include "perc/flows.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>

#include "perc/topology.hpp"

namespace perc {

namespace {

constexpr int kInfCap = 1 << 29;

int linf(Site p) { return std::max(std::abs(p.x), std::abs(p.y)); }

// Forward half of the star neighborhood in row-major order; enumerating
// pairs through it yields each unordered arc exactly once with endpoints
// already normalized.
constexpr Site kForwardStar[4] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};

// Residual graph with companion edge pairs at indices 2e and 2e+1. All
// adjacency lists keep insertion order, so augmenting-path selection (and
// with it the final residual graph) is reproducible.
struct MaxFlowGraph {
  struct Edge {
    int to;
    int cap;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;

  explicit MaxFlowGraph(int n) : adj((size_t)n) {}

  void add(int u, int v, int cap_fwd, int cap_rev) {
    adj[(size_t)u].push_back((int)edges.size());
    edges.push_back({v, cap_fwd});
    adj[(size_t)v].push_back((int)edges.size());
    edges.push_back({u, cap_rev});
  }

  // Edmonds-Karp: repeatedly augment along the first shortest path found
  // in adjacency order.
  int run(int s, int t) {
    int total = 0;
    std::vector<int> pre(adj.size());
    for (;;) {
      std::fill(pre.begin(), pre.end(), -1);
      pre[(size_t)s] = -2;
      std::queue<int> q;
      q.push(s);
      while (!q.empty() && pre[(size_t)t] == -1) {
        int u = q.front();
        q.pop();
        for (int id : adj[(size_t)u]) {
          const Edge& e = edges[(size_t)id];
          if (e.cap <= 0 || pre[(size_t)e.to] != -1) continue;
          pre[(size_t)e.to] = id;
          q.push(e.to);
        }
      }
      if (pre[(size_t)t] == -1) return total;
      int push = kInfCap;
      for (int v = t; v != s;) {
        int id = pre[(size_t)v];
        push = std::min(push, edges[(size_t)id].cap);
        v = edges[(size_t)(id ^ 1)].to;
      }
      for (int v = t; v != s;) {
        int id = pre[(size_t)v];
        edges[(size_t)id].cap -= push;
        edges[(size_t)(id ^ 1)].cap += push;
        v = edges[(size_t)(id ^ 1)].to;
      }
      total += push;
    }
  }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(adj.size(), 0);
    std::queue<int> q;
    seen[(size_t)s] = 1;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj[(size_t)u]) {
        const Edge& e = edges[(size_t)id];
        if (e.cap <= 0 || seen[(size_t)e.to]) continue;
        seen[(size_t)e.to] = 1;
        q.push(e.to);
      }
    }
    return seen;
  }
};

void require_box_in_window(const Configuration& cfg, const BoxRegion& box, const char* who) {
  if (!cfg.window().contains({box.lo_x(), box.lo_y()}) ||
      !cfg.window().contains({box.hi_x(), box.hi_y()}))
    throw std::invalid_argument(std::string(who) + ": window too small");
}

}  // namespace

FlowNetwork build_network(const Configuration& cfg, int s, int t) {
  if (s < 0 || s >= t) throw std::invalid_argument("build_network: require 0 <= s < t");
  require_box_in_window(cfg, BoxRegion{t + 1, {0, 0}}, "build_network");

  FlowNetwork net;
  net.s = s;
  net.t = t;
  net.sources = ring_sites(s + 1, {0, 0});
  net.sinks = ring_sites(t + 1, {0, 0});
  for (int y = -t; y <= t; ++y)
    for (int x = -t; x <= t; ++x)
      if (linf({x, y}) >= s + 2) net.intermediates.push_back({x, y});

  auto is_node = [&](Site p) {
    int r = linf(p);
    return r >= s + 1 && r <= t + 1;
  };
  for (int y = -(t + 1); y <= t + 1; ++y)
    for (int x = -(t + 1); x <= t + 1; ++x) {
      Site u{x, y};
      if (!is_node(u)) continue;
      for (Site d : kForwardStar) {
        Site v{x + d.x, y + d.y};
        if (!is_node(v)) continue;
        int cap = (cfg.spin(u) == 1 && cfg.spin(v) == 1) ? 1 : 0;
        net.arcs.push_back({u, v, cap});
      }
    }
  return net;
}

MaxFlowResult max_flow_min_cut(const FlowNetwork& net) {
  std::vector<Site> nodes;
  nodes.reserve(net.sources.size() + net.sinks.size() + net.intermediates.size());
  nodes.insert(nodes.end(), net.sources.begin(), net.sources.end());
  nodes.insert(nodes.end(), net.sinks.begin(), net.sinks.end());
  nodes.insert(nodes.end(), net.intermediates.begin(), net.intermediates.end());
  std::sort(nodes.begin(), nodes.end());

  std::map<Site, int> id;
  for (int i = 0; i < (int)nodes.size(); ++i) id[nodes[i]] = i;
  const int super_s = (int)nodes.size();
  const int super_t = super_s + 1;

  MaxFlowGraph g(super_t + 1);
  for (Site p : net.sources) g.add(super_s, id.at(p), kInfCap, 0);
  for (Site p : net.sinks) g.add(id.at(p), super_t, kInfCap, 0);
  // Undirected arcs: full capacity in both directions, opposing flows
  // cancel through the companion slots.
  for (const Arc& a : net.arcs) g.add(id.at(a.a), id.at(a.b), a.capacity, a.capacity);

  MaxFlowResult out;
  out.value = g.run(super_s, super_t);
  std::vector<char> reach = g.reachable(super_s);

  int cut_capacity = 0;
  for (const Arc& a : net.arcs) {
    bool ra = reach[(size_t)id.at(a.a)] != 0;
    bool rb = reach[(size_t)id.at(a.b)] != 0;
    if (ra == rb) continue;
    out.cut.push_back(ra ? a : Arc{a.b, a.a, a.capacity});
    cut_capacity += a.capacity;
  }
  for (Site p : nodes)
    if (reach[(size_t)id.at(p)]) out.source_side.push_back(p);
  if (cut_capacity != out.value)
    throw std::logic_error("max_flow_min_cut: flow value does not equal cut capacity");
  return out;
}

int disjoint_path_count(const Configuration& cfg, int k, int i) {
  if (k < 0 || k >= i - 1)
    throw std::invalid_argument("disjoint_path_count: require 0 <= k < i-1");
  require_box_in_window(cfg, BoxRegion{i, {0, 0}}, "disjoint_path_count");

  std::vector<Site> nodes;
  for (int y = -i; y <= i; ++y)
    for (int x = -i; x <= i; ++x) {
      Site p{x, y};
      if (linf(p) >= k + 1 && cfg.spin(p) == 1) nodes.push_back(p);
    }
  std::map<Site, int> id;
  for (int m = 0; m < (int)nodes.size(); ++m) id[nodes[m]] = m;

  // Site-disjointness: split every usable site into a unit-capacity
  // in/out pair (vertices 2m and 2m+1).
  const int super_s = 2 * (int)nodes.size();
  const int super_t = super_s + 1;
  MaxFlowGraph g(super_t + 1);
  for (int m = 0; m < (int)nodes.size(); ++m) g.add(2 * m, 2 * m + 1, 1, 0);
  for (int m = 0; m < (int)nodes.size(); ++m) {
    Site u = nodes[m];
    for (Site d : kForwardStar) {
      auto it = id.find({u.x + d.x, u.y + d.y});
      if (it == id.end()) continue;
      g.add(2 * m + 1, 2 * it->second, 1, 0);
      g.add(2 * it->second + 1, 2 * m, 1, 0);
    }
  }
  for (int m = 0; m < (int)nodes.size(); ++m) {
    int r = linf(nodes[m]);
    if (r == k + 1) g.add(super_s, 2 * m, 1, 0);
    if (r == i) g.add(2 * m + 1, super_t, 1, 0);
  }
  return g.run(super_s, super_t);
}

namespace {

// Sparse allowed-site set with per-site cost for the circuit search.
struct Shell {
  std::vector<Site> sites;         // ascending row-major
  std::vector<std::uint8_t> cost;  // parallel to sites

  int index_of(Site p) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), p);
    if (it == sites.end() || !(*it == p)) return -1;
    return (int)(it - sites.begin());
  }
};

struct FoundWalk {
  std::vector<Site> walk;  // closed, first site not repeated at the end
  int cost = 0;
};

// Cheapest closed nearest walk through the shell with nonzero winding
// number around `center`; the cost of a walk is the sum of entered-site
// costs, the start site paid once on re-entry. States live on the cyclic
// cover (site, accumulated signed ray crossings) and are relaxed by a 0-1
// Dijkstra whose tie-breaking is fixed by the neighbor table.
std::optional<FoundWalk> cheapest_winding_walk(const Shell& shell, Site center) {
  const int n = (int)shell.sites.size();
  std::vector<int> starts;  // shell sites on the +x ray: every winding circuit meets one
  for (int m = 0; m < n; ++m)
    if (shell.sites[m].y == center.y && shell.sites[m].x > center.x) starts.push_back(m);
  if (starts.empty()) return std::nullopt;

  // A self-avoiding circuit crosses each ray site at most once, so its
  // lift stays within +-(number of ray sites) levels.
  const int cap = (int)starts.size() + 1;
  const int levels = 2 * cap + 1;
  const int kInf = std::numeric_limits<int>::max();
  auto nbr = neighbor_offsets(Kind::nearest);

  std::optional<FoundWalk> best;
  for (int start : starts) {
    std::vector<int> dist((size_t)n * (size_t)levels, kInf);
    std::vector<int> prev((size_t)n * (size_t)levels, -1);
    auto state = [&](int m, int lev) { return (size_t)m * (size_t)levels + (size_t)(lev + cap); };

    std::deque<size_t> dq;
    dist[state(start, 0)] = 0;
    dq.push_back(state(start, 0));
    size_t goal = (size_t)-1;
    while (!dq.empty()) {
      size_t cur = dq.front();
      dq.pop_front();
      int m = (int)(cur / (size_t)levels);
      int lev = (int)(cur % (size_t)levels) - cap;
      if (m == start && lev != 0) {  // pop order is nondecreasing in cost
        goal = cur;
        break;
      }
      Site u = shell.sites[m];
      for (Site d : nbr) {
        Site v{u.x + d.x, u.y + d.y};
        int mv = shell.index_of(v);
        if (mv < 0) continue;
        int nl = lev + ray_crossing_sign(u, v, center);
        if (nl < -cap || nl > cap) continue;
        int nd = dist[cur] + (int)shell.cost[(size_t)mv];
        size_t ns = state(mv, nl);
        if (nd >= dist[ns]) continue;
        dist[ns] = nd;
        prev[ns] = (int)cur;
        if (shell.cost[(size_t)mv] == 0)
          dq.push_front(ns);
        else
          dq.push_back(ns);
      }
    }
    if (goal == (size_t)-1) continue;

    FoundWalk cand;
    cand.cost = dist[goal];
    for (size_t st = goal; st != state(start, 0); st = (size_t)prev[st])
      cand.walk.push_back(shell.sites[st / (size_t)levels]);
    std::reverse(cand.walk.begin(), cand.walk.end());
    cand.walk.pop_back();  // drop the duplicated start at the walk's end
    cand.walk.insert(cand.walk.begin(), shell.sites[(size_t)start]);
    if (!best || cand.cost < best->cost) best = std::move(cand);
  }
  return best;
}

struct BuiltCircuit {
  Circuit circuit{{}, Kind::nearest};
  std::vector<Site> pearls;
  bool ok = false;
};

// Turn a cheapest closed walk into a validated self-avoiding circuit
// around gamma and collect its spin-1 sites.
BuiltCircuit finish_circuit(const Configuration& cfg, std::vector<Site> walk, const BoxRegion& gamma) {
  BuiltCircuit out;
  std::vector<Site> cyc = erase_loops_keep_winding(std::move(walk), gamma.center);
  if (!is_self_avoiding_circuit(cyc, Kind::nearest)) return out;
  Circuit c{std::move(cyc), Kind::nearest};
  if (winding_closed(c.sites, gamma.center) < 0) std::reverse(c.sites.begin() + 1, c.sites.end());
  if (!encircles_box(c, gamma)) return out;
  for (Site p : c.sites)
    if (cfg.spin(p) == 1) out.pearls.push_back(p);
  out.circuit = std::move(c);
  out.ok = true;
  return out;
}

// Try to order a sorted site set into a single self-avoiding nearest
// cycle; empty result if any site fails to have degree exactly 2 or the
// walk does not exhaust the set.
std::vector<Site> order_as_circuit(const std::vector<Site>& sites) {
  if (sites.size() < 4) return {};
  auto nbr = neighbor_offsets(Kind::nearest);
  auto two_neighbors = [&](Site p, Site out[2]) {
    int cnt = 0;
    for (Site d : nbr) {
      Site q{p.x + d.x, p.y + d.y};
      if (!contains_site(sites, q)) continue;
      if (cnt < 2) out[cnt] = q;
      ++cnt;
    }
    return cnt == 2;
  };

  Site start = sites.front();
  Site pair[2];
  if (!two_neighbors(start, pair)) return {};
  std::vector<Site> order{start};
  Site prev = start;
  Site cur = pair[0];
  while (!(cur == start)) {
    order.push_back(cur);
    if (order.size() > sites.size()) return {};
    if (!two_neighbors(cur, pair)) return {};
    Site next = pair[0] == prev ? pair[1] : pair[0];
    prev = cur;
    cur = next;
  }
  if (order.size() != sites.size()) return {};
  return order;
}

// Report-only split of the frontier: the certified boundary circuit, the
// layer just inside it, and the spin/adjacency classes the construction
// reasons about.
void fill_boundary_decomposition(const Configuration& cfg, const std::vector<Site>& b, int s,
                                 CutDecomposition& dec) {
  std::vector<Site> outer = boundary(b, Kind::star);

  // Nearest-adjacency components of the frontier.
  std::vector<int> comp(outer.size(), -1);
  int ncomp = 0;
  auto nbr = neighbor_offsets(Kind::nearest);
  for (size_t m = 0; m < outer.size(); ++m) {
    if (comp[m] != -1) continue;
    comp[m] = ncomp;
    std::vector<size_t> stack{m};
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (Site d : nbr) {
        Site q{outer[u].x + d.x, outer[u].y + d.y};
        auto it = std::lower_bound(outer.begin(), outer.end(), q);
        if (it == outer.end() || !(*it == q)) continue;
        size_t v = (size_t)(it - outer.begin());
        if (comp[v] == -1) {
          comp[v] = ncomp;
          stack.push_back(v);
        }
      }
    }
    ++ncomp;
  }

  BoxRegion around{s + 1, {0, 0}};  // the source ring and everything inside it
  for (int c = 0; c < ncomp && dec.b_outer.empty(); ++c) {
    std::vector<Site> sites;
    for (size_t m = 0; m < outer.size(); ++m)
      if (comp[m] == c) sites.push_back(outer[m]);
    std::vector<Site> ordered = order_as_circuit(sites);
    if (ordered.empty()) continue;
    Circuit cand{std::move(ordered), Kind::nearest};
    if (!encircles_box(cand, around)) continue;
    if (winding_closed(cand.sites, around.center) < 0)
      std::reverse(cand.sites.begin() + 1, cand.sites.end());
    dec.b_outer = cand.sites;
  }
  if (dec.b_outer.empty()) return;

  std::vector<Site> bo_sorted = sorted_unique(dec.b_outer);
  Circuit bo{dec.b_outer, Kind::nearest};
  std::vector<Site> interior = circuit_interior(bo);
  auto star = neighbor_offsets(Kind::star);
  auto touches = [&](Site p, const std::vector<Site>& set) {
    for (Site d : star)
      if (contains_site(set, {p.x + d.x, p.y + d.y})) return true;
    return false;
  };

  for (Site p : interior)
    if (touches(p, bo_sorted)) dec.b_inner.push_back(p);

  std::vector<Site> bo_spin1;
  for (Site p : bo_sorted)
    if (cfg.spin(p) == 1) bo_spin1.push_back(p);
  for (Site p : dec.b_inner) {
    if (cfg.spin(p) == 0)
      dec.d_sites.push_back(p);
    else if (touches(p, bo_spin1))
      dec.e_sites.push_back(p);
  }
  std::vector<Site> stranded;  // inner spin-1 sites with no spin-1 contact outward
  for (Site p : dec.b_inner)
    if (cfg.spin(p) == 1 && !contains_site(dec.e_sites, p)) stranded.push_back(p);
  for (Site p : bo_sorted)
    if (touches(p, stranded)) dec.f_sites.push_back(p);
}

}  // namespace

NeckletResult necklet_construct(const Configuration& cfg, const BoxRegion& gamma, int s, int t) {
  BoxRegion core{s, {0, 0}};
  if (!core.contains({gamma.lo_x(), gamma.lo_y()}) || !core.contains({gamma.hi_x(), gamma.hi_y()}))
    throw std::invalid_argument("necklet_construct: gamma must lie inside the source box");

  FlowNetwork net = build_network(cfg, s, t);
  MaxFlowResult flow = max_flow_min_cut(net);

  NeckletResult out;
  out.decomposition.flow_value = flow.value;
  out.decomposition.cut = flow.cut;

  // The region the construction grows from: residual-reachable sites plus
  // the enclosed core box, so the frontier is purely outward.
  std::vector<Site> b = flow.source_side;
  for (Site p : core.sites()) b.push_back(p);
  b = sorted_unique(std::move(b));
  out.decomposition.b_sites = b;

  // The circuit hunts through a two-layer shell: the outward frontier of
  // b plus the b sites star-adjacent to it. The outer layer alone can be
  // forced through spin-1 sites no saturated arc accounts for; the inner
  // layer provides the zero-cost weave past them.
  Shell shell;
  {
    std::vector<Site> outer = boundary(b, Kind::star);
    std::vector<Site> all = outer;
    auto star = neighbor_offsets(Kind::star);
    for (Site p : outer)
      for (Site d : star) {
        Site q{p.x + d.x, p.y + d.y};
        if (contains_site(b, q)) all.push_back(q);
      }
    shell.sites = sorted_unique(std::move(all));
    shell.cost.reserve(shell.sites.size());
    for (Site p : shell.sites) shell.cost.push_back(cfg.spin(p));
  }

  auto attempt = [&](const Shell& sh) -> BuiltCircuit {
    auto walk = cheapest_winding_walk(sh, gamma.center);
    if (!walk) return {};
    return finish_circuit(cfg, std::move(walk->walk), gamma);
  };

  BuiltCircuit built = attempt(shell);

  if (!built.ok || (int)built.pearls.size() != flow.value) {
    // A spin-1 frontier site carrying two or more saturated cut arcs lets
    // the circuit cancel two crossings at a single site. Excluding such
    // sites pushes the circuit onto the inner layer, where the crossings
    // are met one site apiece.
    std::map<Site, int> saturated_at;
    for (const Arc& a : flow.cut)
      if (a.capacity == 1) ++saturated_at[a.b];
    std::vector<Site> pinched;
    for (const auto& [site, cnt] : saturated_at)
      if (cnt >= 2) pinched.push_back(site);
    if (!pinched.empty()) {
      Shell reduced;
      for (size_t m = 0; m < shell.sites.size(); ++m) {
        if (contains_site(pinched, shell.sites[m])) continue;
        reduced.sites.push_back(shell.sites[m]);
        reduced.cost.push_back(shell.cost[m]);
      }
      BuiltCircuit second = attempt(reduced);
      if (second.ok && (int)second.pearls.size() == flow.value) built = std::move(second);
    }
  }

  fill_boundary_decomposition(cfg, b, s, out.decomposition);
  out.decomposition.site_disjoint_paths = disjoint_path_count(cfg, s, t + 1);

  if (!built.ok) {
    out.failure = "no circuit with nonzero winding exists in the boundary shell";
    return out;
  }
  out.necklet.circuit = built.circuit;
  out.necklet.pearls = built.pearls;
  if ((int)built.pearls.size() != flow.value) {
    out.failure = "pearl count " + std::to_string(built.pearls.size()) +
                  " does not match flow value " + std::to_string(flow.value);
    return out;
  }
  out.valid = true;
  return out;
}

std::vector<Site> pearl_blocking_set(const Configuration& cfg, const Necklet& necklet,
                                     const BoxRegion& gamma) {
  if (!is_self_avoiding_circuit(necklet.circuit.sites, Kind::nearest))
    throw std::invalid_argument("pearl_blocking_set: not a self-avoiding nearest circuit");
  if (!encircles_box(necklet.circuit, gamma))
    throw std::invalid_argument("pearl_blocking_set: circuit does not enclose gamma");

  std::vector<Site> interior = circuit_interior(necklet.circuit);
  auto star = neighbor_offsets(Kind::star);
  std::vector<Site> blocked;
  for (Site p : necklet.pearls)
    for (Site d : star) {
      Site q{p.x + d.x, p.y + d.y};
      if (contains_site(interior, q)) blocked.push_back(q);
    }
  blocked = sorted_unique(std::move(blocked));

  if (blocked.size() > 5 * necklet.pearls.size())
    throw std::logic_error("pearl_blocking_set: blocking set exceeds five sites per pearl");

  Configuration flipped = cfg;
  for (Site q : blocked) flipped.set_spin(q, 0);

  const BoxRegion& w = cfg.window();
  int margin = std::min(std::min(w.hi_x() - gamma.center.x, gamma.center.x - w.lo_x()),
                        std::min(w.hi_y() - gamma.center.y, gamma.center.y - w.lo_y()));
  if (margin < gamma.half_width + 2)
    throw std::invalid_argument("pearl_blocking_set: window too small to search around gamma");
  Annulus region{gamma, BoxRegion{margin, gamma.center}};
  if (!find_monochrome_circuit(flipped, gamma, region, 0, Kind::nearest))
    throw std::logic_error("pearl_blocking_set: no 0circuit around gamma after the flip");
  return blocked;
}

}  // namespace perc
