#include "stab/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "stab/error.hpp"
#include "stab/geom.hpp"

namespace stab {
namespace {

constexpr double kResidualEps = 1e-12;

using Matrix = std::vector<std::vector<double>>;

Matrix adjacency(const WeightedSupportGraph& g) {
  Matrix cap(g.n, std::vector<double>(g.n, 0.0));
  for (const WeightedEdge& e : g.edges) {
    cap[e.u][e.v] += e.w;
    cap[e.v][e.u] += e.w;
  }
  return cap;
}

// BFS over arcs with residual >= threshold; returns parents (or empty).
std::vector<int> augmenting_path(const Matrix& res, int s, int t,
                                 double threshold) {
  const int n = static_cast<int>(res.size());
  std::vector<int> prev(n, -1);
  prev[s] = s;
  std::deque<int> queue{s};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (prev[v] >= 0 || res[u][v] < threshold) continue;
      prev[v] = u;
      if (v == t) return prev;
      queue.push_back(v);
    }
  }
  return {};
}

std::vector<int> components(const WeightedSupportGraph& g) {
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const WeightedEdge& e : g.edges) parent[find(e.u)] = find(e.v);
  std::vector<int> label(g.n, -1);
  int next = 0;
  std::vector<int> comp(g.n);
  for (int v = 0; v < g.n; ++v) {
    const int r = find(v);
    if (label[r] < 0) label[r] = next++;
    comp[v] = label[r];
  }
  return comp;
}

void sort_cuts(std::vector<VertexCut>& cuts) {
  for (VertexCut& c : cuts) std::sort(c.members.begin(), c.members.end());
  std::sort(cuts.begin(), cuts.end(), [](const VertexCut& a, const VertexCut& b) {
    if (a.cut_value != b.cut_value) return a.cut_value < b.cut_value;
    return a.members < b.members;
  });
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](const VertexCut& a, const VertexCut& b) {
                           return a.members == b.members;
                         }),
             cuts.end());
}

}  // namespace

WeightedSupportGraph WeightedSupportGraph::from_edge_weights(
    std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != num_edges(n))
    throw Error("edge weight vector does not match vertex count");
  WeightedSupportGraph g;
  g.n = n;
  for (int id = 0; id < num_edges(n); ++id) {
    if (x[id] <= kSupportThreshold) continue;
    const Segment s = edge_at(id, n);
    g.edges.push_back(WeightedEdge{s.a, s.b, x[id]});
  }
  return g;
}

double cut_weight(std::span<const double> x, int n,
                  std::span<const int> members) {
  std::vector<char> in(n, 0);
  for (int v : members) in[v] = 1;
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (in[i] != in[j]) total += x[edge_id(i, j, n)];
  return total;
}

double max_flow(const WeightedSupportGraph& g, int s, int t,
                std::vector<char>* source_side) {
  if (s == t) throw Error("max_flow: source equals sink");
  Matrix res = adjacency(g);
  double max_cap = 0.0;
  for (const WeightedEdge& e : g.edges) max_cap = std::max(max_cap, e.w);
  double delta = max_cap > 0 ? std::exp2(std::floor(std::log2(max_cap))) : 0.0;
  double flow = 0.0;
  auto augment_all = [&](double threshold) {
    for (;;) {
      const std::vector<int> prev = augmenting_path(res, s, t, threshold);
      if (prev.empty()) return;
      double bottleneck = std::numeric_limits<double>::infinity();
      for (int v = t; v != s; v = prev[v])
        bottleneck = std::min(bottleneck, res[prev[v]][v]);
      for (int v = t; v != s; v = prev[v]) {
        res[prev[v]][v] -= bottleneck;
        res[v][prev[v]] += bottleneck;
      }
      flow += bottleneck;
    }
  };
  for (; delta >= 1e-11; delta /= 2) augment_all(delta);
  augment_all(kResidualEps);

  if (source_side != nullptr) {
    source_side->assign(g.n, 0);
    std::deque<int> queue{s};
    (*source_side)[s] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < g.n; ++v) {
        if ((*source_side)[v] || res[u][v] < kResidualEps) continue;
        (*source_side)[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return flow;
}

double GomoryHuTree::min_cut(int u, int v) const {
  if (u == v) return std::numeric_limits<double>::infinity();
  // Depth via parent walks; n is small.
  auto depth = [&](int w) {
    int d = 0;
    while (w != 0) {
      w = parent[w];
      ++d;
    }
    return d;
  };
  int du = depth(u), dv = depth(v);
  double best = std::numeric_limits<double>::infinity();
  while (du > dv) {
    best = std::min(best, value[u]);
    u = parent[u];
    --du;
  }
  while (dv > du) {
    best = std::min(best, value[v]);
    v = parent[v];
    --dv;
  }
  while (u != v) {
    best = std::min({best, value[u], value[v]});
    u = parent[u];
    v = parent[v];
  }
  return best;
}

std::vector<int> GomoryHuTree::side_of(int v) const {
  std::vector<int> side;
  const int n = static_cast<int>(parent.size());
  for (int u = 0; u < n; ++u) {
    int w = u;
    while (w != 0 && w != v) w = parent[w];
    if (w == v && v != 0) side.push_back(u);
  }
  return side;
}

GomoryHuTree gomory_hu(const WeightedSupportGraph& g) {
  if (g.n < 2) throw Error("gomory_hu: need at least two vertices");
  GomoryHuTree tree;
  tree.parent.assign(g.n, 0);
  tree.value.assign(g.n, 0.0);
  std::vector<char> side;
  for (int s = 1; s < g.n; ++s) {
    const int t = tree.parent[s];
    const double f = max_flow(g, s, t, &side);
    tree.value[s] = f;
    for (int i = 0; i < g.n; ++i) {
      if (i != s && side[i] && tree.parent[i] == t) tree.parent[i] = s;
    }
    if (t != 0 && side[tree.parent[t]]) {
      tree.parent[s] = tree.parent[t];
      tree.parent[t] = s;
      tree.value[s] = tree.value[t];
      tree.value[t] = f;
    }
  }
  return tree;
}

std::vector<OddSetCut> separate_blossom(std::span<const double> x, int n) {
  if (n % 2 != 0) throw Error("matching requires even n");
  if (n < 2) throw Error("separate_blossom: need at least two vertices");
  const WeightedSupportGraph g = WeightedSupportGraph::from_edge_weights(x, n);
  const GomoryHuTree tree = gomory_hu(g);
  std::vector<OddSetCut> cuts;
  for (int v = 1; v < n; ++v) {
    if (tree.value[v] >= 1.0 - kViolationTol) continue;
    std::vector<int> side = tree.side_of(v);
    if (side.size() % 2 == 0) continue;
    const double value = cut_weight(x, n, side);
    if (value < 1.0 - kViolationTol)
      cuts.push_back(OddSetCut{std::move(side), value});
  }
  sort_cuts(cuts);
  return cuts;
}

VertexCut stoer_wagner(const WeightedSupportGraph& g) {
  if (g.n < 2) throw Error("stoer_wagner: need at least two vertices");
  Matrix w = adjacency(g);
  std::vector<std::vector<int>> merged(g.n);
  for (int v = 0; v < g.n; ++v) merged[v] = {v};
  std::vector<int> alive(g.n);
  std::iota(alive.begin(), alive.end(), 0);
  VertexCut best;
  best.cut_value = std::numeric_limits<double>::infinity();
  while (alive.size() > 1) {
    const int m = static_cast<int>(alive.size());
    std::vector<double> key(m, 0.0);
    std::vector<char> added(m, 0);
    int prev = -1, last = -1;
    for (int step = 0; step < m; ++step) {
      int pick = -1;
      for (int i = 0; i < m; ++i)
        if (!added[i] && (pick < 0 || key[i] > key[pick])) pick = i;
      added[pick] = 1;
      prev = last;
      last = pick;
      if (step == m - 1) {
        if (key[pick] < best.cut_value) {
          best.cut_value = key[pick];
          best.members = merged[alive[pick]];
        }
      }
      for (int i = 0; i < m; ++i)
        if (!added[i]) key[i] += w[alive[pick]][alive[i]];
    }
    const int keep = alive[prev], drop = alive[last];
    merged[keep].insert(merged[keep].end(), merged[drop].begin(),
                        merged[drop].end());
    for (int v = 0; v < g.n; ++v) {
      w[keep][v] += w[drop][v];
      w[v][keep] = w[keep][v];
    }
    w[keep][keep] = 0.0;
    alive.erase(alive.begin() + last);
  }
  std::sort(best.members.begin(), best.members.end());
  return best;
}

std::vector<ConnCut> separate_connectivity(std::span<const double> x, int n) {
  if (n < 2) throw Error("separate_connectivity: need at least two vertices");
  const WeightedSupportGraph g = WeightedSupportGraph::from_edge_weights(x, n);
  const std::vector<int> comp = components(g);
  const int count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<ConnCut> cuts;
  if (count > 1) {
    for (int c = 0; c < count; ++c) {
      ConnCut cut;
      for (int v = 0; v < n; ++v)
        if (comp[v] == c) cut.members.push_back(v);
      cut.cut_value = cut_weight(x, n, cut.members);
      cuts.push_back(std::move(cut));
    }
  } else {
    VertexCut cut = stoer_wagner(g);
    cut.cut_value = cut_weight(x, n, cut.members);
    if (cut.cut_value < 1.0 - kViolationTol) cuts.push_back(std::move(cut));
  }
  sort_cuts(cuts);
  return cuts;
}

}  // namespace stab
