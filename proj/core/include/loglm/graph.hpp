#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglm/tensor.hpp"

namespace loglm {

// Reverse-mode automatic differentiation over an eagerly-evaluated tape.
//
// Every op computes its output tensor immediately and appends one node, so
// node ids are a valid topological order by construction. backward() clears
// all adjoints and re-accumulates them, so running it twice on the same graph
// yields identical gradients. Construction and backward are single-threaded
// per graph instance.
class Graph {
public:
    using NodeId = std::int32_t;

    enum class Op : std::uint8_t {
        Constant,
        Param,
        MatMul,
        MatMulNT, // A * B^T
        Add,
        AddN,
        Mul,
        Tanh,
        Sigmoid,
        ConcatCols,
        SliceCols,
        Row,
        StackRows,
        MeanRows,
        SoftmaxRow,
        CrossEntropy,
        Scale,
        SumAll,
    };

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    // Leaf that never receives a gradient.
    NodeId constant(Tensor t);
    // Leaf that participates in backward(); read its adjoint via grad().
    NodeId param(Tensor t);

    NodeId matmul(NodeId a, NodeId b);
    NodeId matmul_nt(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);
    NodeId add_n(const std::vector<NodeId>& xs);
    NodeId mul(NodeId a, NodeId b);
    NodeId tanh(NodeId a);
    NodeId sigmoid(NodeId a);
    NodeId concat_cols(NodeId a, NodeId b);
    NodeId slice_cols(NodeId a, int begin, int len);
    // Single row of a as a 1xN tensor (embedding/table lookup).
    NodeId row(NodeId a, int r);
    // K row vectors stacked into a KxN matrix.
    NodeId stack_rows(const std::vector<NodeId>& rows);
    NodeId mean_rows(NodeId a);
    // Row-wise softmax with max subtraction.
    NodeId softmax_row(NodeId a);
    // -log softmax(logits)[target] for a 1xN logits row; returns a scalar.
    NodeId cross_entropy(NodeId logits, int target);
    NodeId scale(NodeId a, Real c);
    NodeId sum_all(NodeId a);

    // Accumulates adjoints for every node reachable from `loss`, which must
    // be scalar. Parameter leaves then expose their gradients via grad().
    void backward(NodeId loss);

    const Tensor& value(NodeId id) const { return nodes_[check(id)].value; }
    // Adjoint of a node after backward(); empty tensor when unreached.
    const Tensor& grad(NodeId id) const { return nodes_[check(id)].grad; }
    bool requires_grad(NodeId id) const { return nodes_[check(id)].needs_grad; }

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Op op;
        bool needs_grad = false;
        int aux0 = 0; // slice begin / row index / cross-entropy target
        int aux1 = 0; // slice length
        Real scalar = 0;
        std::vector<NodeId> in;
        Tensor value;
        Tensor grad;
    };

    NodeId push(Node n);
    NodeId check(NodeId id) const;
    Tensor& grad_buf(NodeId id);
    void backprop_node(NodeId id);

    std::vector<Node> nodes_;
};

const char* op_name(Graph::Op op);

} // namespace loglm
