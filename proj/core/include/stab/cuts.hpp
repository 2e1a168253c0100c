#pragma once

#include <span>
#include <vector>

namespace stab {

/// Edges lighter than this are dropped before any cut computation.
inline constexpr double kSupportThreshold = 1e-7;
/// A cut is reported as violated when its value is below 1 - kViolationTol.
inline constexpr double kViolationTol = 1e-7;

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

/// Support graph of a fractional vector over the complete graph K_n.
struct WeightedSupportGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;

  /// `x` is indexed by complete-graph edge id (see edge_id in geom.hpp).
  static WeightedSupportGraph from_edge_weights(std::span<const double> x,
                                                int n);
};

/// A vertex set S together with the weight x(delta(S)) crossing it.
struct VertexCut {
  std::vector<int> members;
  double cut_value = 0.0;
};

using OddSetCut = VertexCut;
using ConnCut = VertexCut;

/// x(delta(S)) for x indexed by complete-graph edge id.
double cut_weight(std::span<const double> x, int n, std::span<const int> members);

/// Maximum s-t flow by augmenting paths with capacity scaling. If
/// `source_side` is given it receives the source side of a minimum cut.
double max_flow(const WeightedSupportGraph& g, int s, int t,
                std::vector<char>* source_side = nullptr);

/// Cut tree: for each vertex v != 0, tree edge (v, parent[v]) with value
/// value[v]; removing it splits the vertices into a minimum v-parent cut.
struct GomoryHuTree {
  std::vector<int> parent;
  std::vector<double> value;

  /// Minimum edge value on the tree path between u and v.
  double min_cut(int u, int v) const;
  /// Vertices on v's side after removing the tree edge (v, parent[v]).
  std::vector<int> side_of(int v) const;
};

/// Gusfield's construction with n - 1 max-flow calls. Throws for n < 2.
GomoryHuTree gomory_hu(const WeightedSupportGraph& g);

/// Violated odd-set (blossom) constraints x(delta(S)) >= 1. With every vertex
/// an odd terminal, the minimum odd cut is a fundamental cut of the cut tree
/// with an odd side, so all such tree cuts below 1 are returned, most
/// violated first. Throws for odd n.
std::vector<OddSetCut> separate_blossom(std::span<const double> x, int n);

/// Violated connectivity constraints x(delta(S)) >= 1: one cut per connected
/// component when the support is disconnected, otherwise the global minimum
/// cut (Stoer-Wagner) if it is below 1. Throws for n < 2.
std::vector<ConnCut> separate_connectivity(std::span<const double> x, int n);

/// Global minimum cut of the support graph (Stoer-Wagner).
VertexCut stoer_wagner(const WeightedSupportGraph& g);

}  // namespace stab
