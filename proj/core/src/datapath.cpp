#include "sdsi/datapath.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdsi {

std::size_t DatapathGraph::add_input() { return n_inputs_++; }

std::size_t DatapathGraph::add_node(OnlineOperator op) {
  std::size_t slots = op.arity();
  nodes_.push_back(Node{std::move(op), std::vector<std::optional<Port>>(slots)});
  return nodes_.size() - 1;
}

void DatapathGraph::connect(Port src, std::size_t node, std::size_t slot) {
  if (node >= nodes_.size() || slot >= nodes_[node].in.size())
    throw std::out_of_range("connect: no such node slot");
  if (src.external ? src.index >= n_inputs_ : src.index >= nodes_.size())
    throw std::out_of_range("connect: no such source");
  nodes_[node].in[slot] = src;
}

std::size_t DatapathGraph::add_output(Port src) {
  if (src.external ? src.index >= n_inputs_ : src.index >= nodes_.size())
    throw std::out_of_range("add_output: no such source");
  outputs_.push_back(src);
  return outputs_.size() - 1;
}

std::vector<std::size_t> DatapathGraph::topological_order() const {
  const std::size_t n = nodes_.size();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& p : nodes_[v].in) {
      if (!p) throw std::logic_error("datapath node has an unwired input slot");
      if (!p->external) {
        succ[p->index].push_back(v);
        ++indeg[v];
      }
    }
  }
  std::vector<std::size_t> order, ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (std::size_t s : succ[v])
      if (--indeg[s] == 0) ready.push_back(s);
  }
  if (order.size() != n) throw std::logic_error("datapath graph is cyclic");
  return order;
}

int DatapathGraph::delay() const {
  auto order = topological_order();
  std::vector<int> finish(nodes_.size(), 0);
  for (std::size_t v : order) {
    int start = 0;
    for (const auto& p : nodes_[v].in)
      if (!p->external) start = std::max(start, finish[p->index]);
    finish[v] = start + nodes_[v].op.delta();
  }
  int best = 0;
  for (const auto& o : outputs_)
    if (!o.external) best = std::max(best, finish[o.index]);
  return best;
}

DatapathExecutor::DatapathExecutor(DatapathGraph g) : g_(std::move(g)) {
  order_ = g_.topological_order();
  for (const auto& node : g_.nodes_) queues_.emplace_back(node.in.size());
}

std::vector<std::vector<Digit>> DatapathExecutor::step(std::span<const Digit> inputs) {
  if (inputs.size() != g_.n_inputs_) throw std::invalid_argument("executor: wrong input count");
  std::vector<std::vector<Digit>> produced(g_.nodes_.size());
  for (std::size_t v = 0; v < g_.nodes_.size(); ++v)
    for (std::size_t s = 0; s < g_.nodes_[v].in.size(); ++s)
      if (g_.nodes_[v].in[s]->external)
        queues_[v][s].push_back(inputs[g_.nodes_[v].in[s]->index]);

  std::vector<Digit> buf;
  for (std::size_t v : order_) {
    auto& qs = queues_[v];
    auto& node = g_.nodes_[v];
    while (std::all_of(qs.begin(), qs.end(), [](const auto& q) { return !q.empty(); })) {
      buf.clear();
      for (auto& q : qs) {
        buf.push_back(q.front());
        q.pop_front();
      }
      if (auto d = node.op.pull_digit(buf)) {
        produced[v].push_back(*d);
        for (std::size_t u = 0; u < g_.nodes_.size(); ++u)
          for (std::size_t s = 0; s < g_.nodes_[u].in.size(); ++s) {
            const auto& p = *g_.nodes_[u].in[s];
            if (!p.external && p.index == v) queues_[u][s].push_back(*d);
          }
      }
    }
  }
  ++steps_;
  std::vector<std::vector<Digit>> out;
  for (const auto& o : g_.outputs_) {
    if (o.external) out.push_back({inputs[o.index]});
    else out.push_back(produced[o.index]);
  }
  return out;
}

}  // namespace sdsi
