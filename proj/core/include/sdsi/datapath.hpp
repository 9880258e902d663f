#pragma once

#include "sdsi/online.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace sdsi {

// Acyclic network of online operators fed by external digit inputs.
class DatapathGraph {
 public:
  struct Port {
    bool external;
    std::size_t index;
  };

  std::size_t add_input();
  // Adds an operator; its input slots are wired later with connect().
  std::size_t add_node(OnlineOperator op);
  void connect(Port src, std::size_t node, std::size_t slot);
  std::size_t add_output(Port src);

  static Port input(std::size_t i) { return {true, i}; }
  static Port node(std::size_t i) { return {false, i}; }

  std::size_t input_count() const { return n_inputs_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t output_count() const { return outputs_.size(); }

  // Longest input-to-output path, summing operator delays. Throws on cycles
  // or unwired slots.
  int delay() const;
  std::vector<std::size_t> topological_order() const;

 private:
  friend class DatapathExecutor;
  struct Node {
    OnlineOperator op;
    std::vector<std::optional<Port>> in;
  };
  std::size_t n_inputs_ = 0;
  std::vector<Node> nodes_;
  std::vector<Port> outputs_;
};

// Steps a copy of the graph one external digit at a time.
class DatapathExecutor {
 public:
  explicit DatapathExecutor(DatapathGraph g);

  // Feeds one digit per external input; returns the digits that reached each
  // output during this step (possibly none).
  std::vector<std::vector<Digit>> step(std::span<const Digit> inputs);
  std::size_t steps() const { return steps_; }

 private:
  DatapathGraph g_;
  std::vector<std::size_t> order_;
  // queues_[node][slot]
  std::vector<std::vector<std::deque<Digit>>> queues_;
  std::size_t steps_ = 0;
};

}  // namespace sdsi
