#include "outage/network.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "outage/error.hpp"
#include "outage/forecast.hpp"

namespace outage {

namespace {

struct RawVertex {
  int parent = -1;
  double mean = 0.0;
  double variance = 0.0;     // explicit part
  double kappa_mean = 0.0;   // mean of loads whose variance follows the scaling law
};

double kappa_variance(double mean) {
  if (mean <= 0.0) return 0.0;
  const double sd = kappa_of_load(mean) * mean;
  return sd * sd;
}

// Walks parent links; throws on a cycle. parent[root] == -1.
void check_acyclic(const std::vector<int>& parent, const std::vector<std::string>& names) {
  const std::size_t n = parent.size();
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> path;
  for (std::size_t start = 0; start < n; ++start) {
    int v = static_cast<int>(start);
    path.clear();
    while (v >= 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = parent[v];
    }
    if (v >= 0 && state[v] == 1) throw InvalidInput("cycle detected at vertex '" + names[v] + "'");
    for (int p : path) state[p] = 2;
  }
}

}  // namespace

Tree Tree::build(const FeederSpec& spec) {
  if (spec.vertices.empty()) throw InvalidInput("feeder has no vertices");

  std::unordered_map<std::string, int> decl;
  for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
    if (!decl.emplace(spec.vertices[i].id, static_cast<int>(i)).second)
      throw InvalidInput("duplicate vertex id '" + spec.vertices[i].id + "'");
  }

  int root_decl = -1;
  for (std::size_t i = 0; i < spec.vertices.size(); ++i) {
    if (spec.vertices[i].parent) continue;
    if (root_decl >= 0)
      throw InvalidInput("multiple roots: '" + spec.vertices[root_decl].id + "' and '" +
                         spec.vertices[i].id + "'");
    root_decl = static_cast<int>(i);
  }
  if (root_decl < 0) throw InvalidInput("no root vertex (every vertex has a parent)");

  // Root first, everything else in declaration order.
  std::vector<int> order{root_decl};
  for (std::size_t i = 0; i < spec.vertices.size(); ++i)
    if (static_cast<int>(i) != root_decl) order.push_back(static_cast<int>(i));
  std::vector<int> index_of(spec.vertices.size());
  for (std::size_t k = 0; k < order.size(); ++k) index_of[order[k]] = static_cast<int>(k);

  const std::size_t n = order.size();
  std::vector<RawVertex> raw(n);
  std::vector<std::string> vnames(n), enames(n);
  for (std::size_t k = 0; k < n; ++k) {
    const VertexSpec& vs = spec.vertices[order[k]];
    vnames[k] = vs.id;
    enames[k] = k == 0 ? std::string{} : vs.edge.value_or(vs.id);
    if (k == 0) {
      if (vs.mean != 0.0 || vs.sigma2.value_or(0.0) != 0.0)
        throw InvalidInput("root vertex '" + vs.id + "' must carry no load");
      continue;
    }
    if (*vs.parent == vs.id) throw InvalidInput("cycle detected: vertex '" + vs.id + "' is its own parent");
    auto it = decl.find(*vs.parent);
    if (it == decl.end())
      throw InvalidInput("orphan vertex '" + vs.id + "': unknown parent '" + *vs.parent + "'");
    raw[k].parent = index_of[it->second];
    raw[k].mean = vs.mean;
    if (vs.kappa_derived) {
      raw[k].kappa_mean = vs.mean;
    } else if (vs.sigma2) {
      if (*vs.sigma2 < 0.0) throw InvalidInput("negative variance at vertex '" + vs.id + "'");
      raw[k].variance = *vs.sigma2;
    } else {
      throw InvalidInput("vertex '" + vs.id + "' needs sigma2 or kappa_derived");
    }
  }

  {
    std::vector<int> parents(n);
    for (std::size_t k = 0; k < n; ++k) parents[k] = raw[k].parent;
    check_acyclic(parents, vnames);
  }

  if (!spec.devices.empty()) {
    // Lump every vertex into the nearest vertex at or above it whose parent
    // edge is a protective device (or the root edge).
    std::unordered_map<std::string, int> edge_lookup;
    for (std::size_t k = 1; k < n; ++k) {
      edge_lookup.emplace(enames[k], static_cast<int>(k));
      edge_lookup.emplace(vnames[k], static_cast<int>(k));
    }
    std::vector<char> kept(n, 0);
    for (const auto& d : spec.devices) {
      auto it = edge_lookup.find(d);
      if (it == edge_lookup.end()) throw InvalidInput("unknown device edge '" + d + "'");
      kept[it->second] = 1;
    }
    for (std::size_t k = 1; k < n; ++k)
      if (raw[k].parent == 0) kept[k] = 1;

    // Resolve heads in an order where parents come first.
    std::vector<int> head(n, -1);
    head[0] = 0;
    std::vector<int> pending;
    for (std::size_t k = 1; k < n; ++k) {
      int v = static_cast<int>(k);
      pending.clear();
      while (head[v] < 0) {
        pending.push_back(v);
        v = raw[v].parent;
      }
      for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
        const int u = *it;
        head[u] = kept[u] ? u : head[raw[u].parent];
      }
    }

    std::vector<int> new_index(n, -1);
    std::vector<int> members;
    for (std::size_t k = 0; k < n; ++k)
      if (head[k] == static_cast<int>(k)) {
        new_index[k] = static_cast<int>(members.size());
        members.push_back(static_cast<int>(k));
      }
    std::vector<RawVertex> lumped(members.size());
    std::vector<std::string> lv(members.size()), le(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int h = members[i];
      lv[i] = vnames[h];
      le[i] = enames[h];
      lumped[i].parent = h == 0 ? -1 : new_index[head[raw[h].parent]];
    }
    for (std::size_t k = 1; k < n; ++k) {
      RawVertex& target = lumped[new_index[head[k]]];
      target.mean += raw[k].mean;
      target.variance += raw[k].variance;
      target.kappa_mean += raw[k].kappa_mean;
    }
    raw = std::move(lumped);
    vnames = std::move(lv);
    enames = std::move(le);
  }

  std::vector<int> parents(raw.size());
  std::vector<Load> loads(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    parents[k] = raw[k].parent;
    loads[k] = {raw[k].mean, raw[k].variance + kappa_variance(raw[k].kappa_mean)};
  }

  Tree tree = from_parents(std::move(parents), std::move(loads), std::move(vnames), std::move(enames));
  for (const auto& s : spec.sensors) tree.declared_sensors_.push_back(tree.edge(s));
  std::sort(tree.declared_sensors_.begin(), tree.declared_sensors_.end());
  tree.declared_sensors_.erase(std::unique(tree.declared_sensors_.begin(), tree.declared_sensors_.end()),
                               tree.declared_sensors_.end());
  return tree;
}

Tree Tree::from_parents(std::vector<int> parent, std::vector<Load> loads,
                        std::vector<std::string> vertex_names,
                        std::vector<std::string> edge_names) {
  const std::size_t n = parent.size();
  if (n < 2) throw InvalidInput("a feeder needs at least the root and one load vertex");
  if (loads.size() != n) throw InvalidInput("load vector size does not match vertex count");
  if (parent[0] != -1) throw InvalidInput("vertex 0 must be the root");
  for (std::size_t v = 1; v < n; ++v)
    if (parent[v] < 0 || parent[v] >= static_cast<int>(n))
      throw InvalidInput("vertex " + std::to_string(v) + " has an invalid parent");
  if (loads[0].mean != 0.0 || loads[0].variance != 0.0)
    throw InvalidInput("root vertex must carry no load");
  for (std::size_t v = 0; v < n; ++v)
    if (loads[v].variance < 0.0) throw InvalidInput("negative variance at vertex " + std::to_string(v));

  Tree t;
  t.parent_ = std::move(parent);
  t.loads_ = std::move(loads);
  t.vertex_names_ = std::move(vertex_names);
  t.edge_names_ = std::move(edge_names);
  if (t.vertex_names_.empty())
    for (std::size_t v = 0; v < n; ++v) t.vertex_names_.push_back("v" + std::to_string(v));
  if (t.edge_names_.empty()) {
    t.edge_names_.emplace_back();
    for (std::size_t v = 1; v < n; ++v) t.edge_names_.push_back("e" + std::to_string(v));
  }
  if (t.vertex_names_.size() != n || t.edge_names_.size() != n)
    throw InvalidInput("name vectors do not match vertex count");
  check_acyclic(t.parent_, t.vertex_names_);
  t.finalize();
  return t;
}

void Tree::finalize() {
  const std::size_t n = parent_.size();
  children_.assign(n, {});
  for (std::size_t v = 1; v < n; ++v) children_[parent_[v]].push_back(static_cast<int>(v));
  if (children_[kRoot].size() != 1)
    throw InvalidInput("the root must have exactly one child edge (the substation edge), found " +
                       std::to_string(children_[kRoot].size()));

  depth_.assign(n, 0);
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  preorder_.clear();
  postorder_.clear();
  preorder_.reserve(n);
  postorder_.reserve(n);

  int clock = 0;
  std::vector<std::pair<int, std::size_t>> stack{{kRoot, 0}};
  tin_[kRoot] = clock++;
  preorder_.push_back(kRoot);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < children_[v].size()) {
      const int c = children_[v][next++];
      depth_[c] = depth_[v] + 1;
      tin_[c] = clock++;
      preorder_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      tout_[v] = clock++;
      postorder_.push_back(v);
      stack.pop_back();
    }
  }
  if (preorder_.size() != n) throw InvalidInput("vertices unreachable from the root");

  vertex_index_.clear();
  edge_index_.clear();
  for (std::size_t v = 0; v < n; ++v) {
    if (!vertex_index_.emplace(vertex_names_[v], static_cast<int>(v)).second)
      throw InvalidInput("duplicate vertex id '" + vertex_names_[v] + "'");
    if (v > 0 && !edge_index_.emplace(edge_names_[v], static_cast<int>(v)).second)
      throw InvalidInput("duplicate edge id '" + edge_names_[v] + "'");
  }
}

std::vector<int> Tree::descendants(int v) const {
  std::vector<int> out;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (auto it = children_[u].rbegin(); it != children_[u].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::optional<int> Tree::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Tree::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it != edge_index_.end()) return it->second;
  auto v = find_vertex(name);
  if (v && *v != kRoot) return v;
  return std::nullopt;
}

int Tree::vertex(std::string_view name) const {
  if (auto v = find_vertex(name)) return *v;
  throw InvalidInput("unknown vertex '" + std::string(name) + "'");
}

int Tree::edge(std::string_view name) const {
  if (auto e = find_edge(name)) return *e;
  throw InvalidInput("unknown edge '" + std::string(name) + "'");
}

double Tree::total_mean() const {
  double s = 0.0;
  for (const auto& l : loads_) s += l.mean;
  return s;
}

Tree Tree::with_loads(std::vector<Load> loads) const {
  return from_parents(parent_, std::move(loads), vertex_names_, edge_names_);
}

CumulativeStats cumulative_stats(const Tree& tree) {
  std::vector<double> means(tree.vertex_count());
  for (std::size_t v = 0; v < means.size(); ++v) means[v] = tree.load(static_cast<int>(v)).mean;
  return cumulative_stats(tree, means);
}

CumulativeStats cumulative_stats(const Tree& tree, std::span<const double> forecasts) {
  const std::size_t n = tree.vertex_count();
  if (forecasts.size() != n) throw InvalidInput("forecast vector size does not match vertex count");
  CumulativeStats s;
  s.wmu.assign(forecasts.begin(), forecasts.end());
  s.wsigma.resize(n);
  for (std::size_t v = 0; v < n; ++v) s.wsigma[v] = tree.load(static_cast<int>(v)).variance;
  for (int v : tree.postorder()) {
    if (v == Tree::kRoot) continue;
    s.wmu[tree.parent(v)] += s.wmu[v];
    s.wsigma[tree.parent(v)] += s.wsigma[v];
  }
  return s;
}

std::vector<int> descendants(const Tree& tree, int v) {
  if (v < 0 || v >= static_cast<int>(tree.vertex_count()))
    throw InvalidInput("unknown vertex index " + std::to_string(v));
  return tree.descendants(v);
}

std::vector<int> children(const Tree& tree, int v) {
  if (v < 0 || v >= static_cast<int>(tree.vertex_count()))
    throw InvalidInput("unknown vertex index " + std::to_string(v));
  return tree.children(v);
}

BranchGraph build_branches(const Tree& tree, const std::vector<char>& in_scope,
                           const std::vector<char>& split_after) {
  const std::size_t n = tree.vertex_count();
  BranchGraph g;
  g.branch_of_edge.assign(n, -1);

  auto scoped_children = [&](int e) {
    std::vector<int> out;
    for (int c : tree.children(e))
      if (in_scope[c]) out.push_back(c);
    return out;
  };

  std::vector<int> top;
  for (std::size_t e = 1; e < n; ++e) {
    if (!in_scope[e]) continue;
    const int p = tree.parent_edge(static_cast<int>(e));
    if (p < 0 || !in_scope[p]) top.push_back(static_cast<int>(e));
  }

  // Depth-first construction; a stack of (first edge, parent branch).
  std::vector<std::pair<int, int>> stack;
  for (auto it = top.rbegin(); it != top.rend(); ++it) stack.emplace_back(*it, -1);
  while (!stack.empty()) {
    auto [first, parent] = stack.back();
    stack.pop_back();
    const int id = static_cast<int>(g.branches.size());
    Branch b;
    b.parent = parent;
    b.depth = parent < 0 ? 0 : g.branches[parent].depth + 1;
    int e = first;
    std::vector<int> next;
    while (true) {
      b.edges.push_back(e);
      g.branch_of_edge[e] = id;
      next = scoped_children(e);
      if (next.size() == 1 && !split_after[e]) {
        e = next.front();
        continue;
      }
      break;
    }
    g.branches.push_back(std::move(b));
    if (parent < 0)
      g.roots.push_back(id);
    else
      g.branches[parent].children.push_back(id);
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.emplace_back(*it, id);
  }
  return g;
}

BranchGraph branch_decompose(const Tree& tree, std::span<const int> sensors) {
  std::vector<char> all(tree.vertex_count(), 1);
  all[Tree::kRoot] = 0;
  std::vector<char> split = edge_mask(tree, sensors);
  split[tree.root_edge()] = 0;
  return build_branches(tree, all, split);
}

std::vector<char> edge_mask(const Tree& tree, std::span<const int> edges) {
  std::vector<char> m(tree.vertex_count(), 0);
  for (int e : edges) {
    if (e <= 0 || e >= static_cast<int>(tree.vertex_count()))
      throw InvalidInput("edge index " + std::to_string(e) + " not in tree");
    m[e] = 1;
  }
  return m;
}

}  // namespace outage
