#pragma once

// Rooted-tree model of a distribution feeder.
//
// Vertex 0 is the substation bus. Every other vertex v owns the edge that
// connects it to its parent, so edge indices coincide with child-vertex
// indices (edge 0 does not exist). The substation bus carries no load and has
// exactly one child; that edge is the root edge and always carries a sensor.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace outage {

struct Load {
  double mean = 0.0;
  double variance = 0.0;
};

struct VertexSpec {
  std::string id;
  std::optional<std::string> parent;
  std::optional<std::string> edge;  // name of the edge to the parent, defaults to id
  double mean = 0.0;
  std::optional<double> sigma2;
  bool kappa_derived = false;  // variance from the forecast scaling law
};

// Ingestion format shared by feeder files and generators.
struct FeederSpec {
  std::vector<VertexSpec> vertices;
  std::vector<std::string> sensors;
  // Protective devices. When non-empty, loads that are not separated by a
  // device are lumped into a single vertex and only device edges remain.
  std::vector<std::string> devices;
};

class Tree {
 public:
  static constexpr int kRoot = 0;

  // Validates and builds a tree. Throws InvalidInput on cycles, multiple or
  // missing roots, orphans, duplicate ids, negative variances, root load.
  static Tree build(const FeederSpec& spec);

  // parent[0] must be -1; names default to "v<i>" / "e<i>".
  static Tree from_parents(std::vector<int> parent, std::vector<Load> loads,
                           std::vector<std::string> vertex_names = {},
                           std::vector<std::string> edge_names = {});

  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t edge_count() const { return parent_.size() - 1; }

  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const Load& load(int v) const { return loads_[v]; }
  int depth(int v) const { return depth_[v]; }
  int root_edge() const { return children_[kRoot].front(); }

  // Edge whose child endpoint is v's parent; -1 for the root edge.
  int parent_edge(int e) const { return parent_[e] == kRoot ? -1 : parent_[e]; }

  // True when a == b or a lies on the path from b to the root.
  bool is_ancestor_or_self(int a, int b) const {
    return tin_[a] <= tin_[b] && tout_[b] <= tout_[a];
  }

  // Vertices with parents before children / children before parents.
  const std::vector<int>& preorder() const { return preorder_; }
  const std::vector<int>& postorder() const { return postorder_; }

  // Subtree of v, v included.
  std::vector<int> descendants(int v) const;

  std::string_view vertex_name(int v) const { return vertex_names_[v]; }
  std::string_view edge_name(int e) const { return edge_names_[e]; }

  // Lookups throw InvalidInput for unknown ids. Edges may be referenced by
  // their own name or by the name of their child vertex.
  int vertex(std::string_view name) const;
  int edge(std::string_view name) const;
  std::optional<int> find_vertex(std::string_view name) const;
  std::optional<int> find_edge(std::string_view name) const;

  double total_mean() const;

  // Returns a copy with the loads replaced.
  Tree with_loads(std::vector<Load> loads) const;

  // Sensors named in the FeederSpec the tree was built from, resolved to edges.
  const std::vector<int>& declared_sensors() const { return declared_sensors_; }

 private:
  void finalize();

  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<Load> loads_;
  std::vector<int> depth_;
  std::vector<int> tin_, tout_;
  std::vector<int> preorder_, postorder_;
  std::vector<std::string> vertex_names_, edge_names_;
  std::unordered_map<std::string, int> vertex_index_, edge_index_;
  std::vector<int> declared_sensors_;
};

// Cumulative forecast mean and variance over the subtree hanging below each
// edge, child endpoint included. Index 0 holds the whole-feeder totals.
struct CumulativeStats {
  std::vector<double> wmu;
  std::vector<double> wsigma;
};

CumulativeStats cumulative_stats(const Tree& tree);
// Same, with per-vertex means taken from a forecast vector instead of the tree.
CumulativeStats cumulative_stats(const Tree& tree, std::span<const double> forecasts);

std::vector<int> descendants(const Tree& tree, int v);
std::vector<int> children(const Tree& tree, int v);

// Maximal junction-free paths of edges.
struct Branch {
  std::vector<int> edges;  // top to bottom
  int parent = -1;
  std::vector<int> children;
  int depth = 0;
};

struct BranchGraph {
  std::vector<Branch> branches;
  std::vector<int> roots;
  std::vector<int> branch_of_edge;  // -1 for edges outside the graph

  std::size_t size() const { return branches.size(); }
};

// Branches over a subset of edges. A branch continues from e into its only
// in-scope child edge unless split_after[e] is set; the branch holding a split
// edge ends with it. Branch ids follow a preorder walk, children ordered by
// their first edge.
BranchGraph build_branches(const Tree& tree, const std::vector<char>& in_scope,
                           const std::vector<char>& split_after);

// Branch graph of the whole tree. Every sensor other than the root edge ends
// its branch, so the upper part keeps the sensed edge.
BranchGraph branch_decompose(const Tree& tree, std::span<const int> sensors = {});

// Edge mask helper.
std::vector<char> edge_mask(const Tree& tree, std::span<const int> edges);

}  // namespace outage
