#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace conley {

struct SccResult {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> component;  // kNone for inactive nodes
  std::vector<std::vector<std::size_t>> members;  // each list sorted ascending
};

/// Iterative Tarjan over the nodes with active[v] != 0. `successors(v)` must
/// return a range of node ids; edges to inactive nodes are ignored.
template <class Successors>
SccResult strongly_connected_components(std::size_t n, Successors&& successors, std::span<const char> active) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  SccResult out;
  out.component.assign(n, SccResult::kNone);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next successor position)
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (!active[root] || index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& succ = successors(v);
      if (pos < succ.size()) {
        std::size_t w = succ[pos++];
        if (!active[w]) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t node = v;
      frames.pop_back();
      if (!frames.empty()) {
        std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[node]);
      }
      if (low[node] == index[node]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component[w] = out.members.size();
          comp.push_back(w);
        } while (w != node);
        std::sort(comp.begin(), comp.end());
        out.members.push_back(std::move(comp));
      }
    }
  }
  return out;
}

/// Nodes reachable from the seeds (seeds included) through active nodes.
template <class Successors>
std::vector<char> reachable_from(std::size_t n, std::span<const std::size_t> seeds, Successors&& successors,
                                 std::span<const char> active) {
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> todo;
  for (std::size_t s : seeds) {
    if (active[s] && !seen[s]) {
      seen[s] = 1;
      todo.push_back(s);
    }
  }
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    for (std::size_t w : successors(v)) {
      if (active[w] && !seen[w]) {
        seen[w] = 1;
        todo.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace conley
