#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "gvae/tensor.hpp"

namespace gvae {

class Graph;

// Handle to a node in a Graph. Cheap to copy; valid for the graph's lifetime.
class Var {
  public:
    Var() = default;

    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }
    std::size_t numel() const { return value().numel(); }
    double scalar() const;

    // Gradient of the last backward() root with respect to this node.
    const std::vector<double>& grad() const;

  private:
    friend class Graph;
    struct Node;
    explicit Var(Node* node) : node_(node) {}
    Node* node_ = nullptr;
};

enum class ReduceKind { Sum, Mean };

// Define-by-run reverse-mode autodiff over dense float64 tensors. Nodes are
// appended in construction order, which is a topological order by definition;
// backward() walks them once in reverse. The graph is meant to be built fresh
// for every objective evaluation and discarded afterwards.
class Graph {
  public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    // Leaves. constant() copies the value and receives no gradient;
    // param() references an external tensor and accumulates into its grad.
    Var constant(Tensor value);
    Var constant(std::vector<double> row_values);
    Var param(Tensor& parameter);

    // out[r,o] = sum_i in[r,i] * w[i,o] + b[o]; rank-1 input treated as one row.
    Var affine(Var input, Var weight, Var bias);

    Var relu(Var x);
    // exp(a/2); guards against float64 overflow (a > 1400).
    Var positivity_map(Var x);
    // min(max(x, lo), hi); gradient passes only strictly inside the band.
    Var clamp(Var x, double lo, double hi);
    Var log(Var x);
    Var sqrt(Var x);
    Var square(Var x);
    Var reciprocal(Var x);

    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var a, double c);
    Var add_scalar(Var a, double c);

    Var sum(Var a);
    Var mean(Var a);
    Var sum_axis(Var a, std::size_t axis);
    Var mean_axis(Var a, std::size_t axis);
    Var reduce(Var a, ReduceKind kind, std::optional<std::size_t> axis = std::nullopt);

    Var concat(Var a, Var b);                    // rank-1 ++ rank-1
    Var concat_cols(Var a, Var b);               // [K×a] ++ [K×b] -> [K×(a+b)]
    Var repeat_rows(Var v, std::size_t copies);  // [n] -> [copies×n]

    // Reverse pass from a scalar root. All accumulators (node gradients and
    // bound parameter gradients) are zeroed first, so repeated calls without
    // re-running the forward pass leave gradients unchanged.
    void backward(Var root);

    std::size_t node_count() const { return nodes_.size(); }

  private:
    friend class Var;
    Var::Node& make_node(Tensor value);
    Var unary(Var x, const char* name,
              const std::function<double(double)>& f,
              const std::function<double(double, double)>& df);

    std::deque<Var::Node> nodes_;
};

}  // namespace gvae
