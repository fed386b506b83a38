#include "loglm/graph.hpp"

#include <algorithm>
#include <cmath>

namespace loglm {

const char* op_name(Graph::Op op) {
    switch (op) {
    case Graph::Op::Constant: return "constant";
    case Graph::Op::Param: return "param";
    case Graph::Op::MatMul: return "matmul";
    case Graph::Op::MatMulNT: return "matmul_nt";
    case Graph::Op::Add: return "add";
    case Graph::Op::AddN: return "add_n";
    case Graph::Op::Mul: return "mul";
    case Graph::Op::Tanh: return "tanh";
    case Graph::Op::Sigmoid: return "sigmoid";
    case Graph::Op::ConcatCols: return "concat_cols";
    case Graph::Op::SliceCols: return "slice_cols";
    case Graph::Op::Row: return "row";
    case Graph::Op::StackRows: return "stack_rows";
    case Graph::Op::MeanRows: return "mean_rows";
    case Graph::Op::SoftmaxRow: return "softmax_row";
    case Graph::Op::CrossEntropy: return "cross_entropy";
    case Graph::Op::Scale: return "scale";
    case Graph::Op::SumAll: return "sum_all";
    }
    return "?";
}

Graph::NodeId Graph::check(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
        throw IndexError("graph: node id out of range");
    return id;
}

Graph::NodeId Graph::push(Node n) {
    if (!n.value.all_finite())
        throw NumericError(std::string("non-finite value produced by op ") + op_name(n.op));
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Graph::NodeId Graph::constant(Tensor t) {
    Node n{Op::Constant};
    n.value = std::move(t);
    return push(std::move(n));
}

Graph::NodeId Graph::param(Tensor t) {
    Node n{Op::Param};
    n.needs_grad = true;
    n.value = std::move(t);
    return push(std::move(n));
}

namespace {
bool any_needs_grad(const Graph& g, const std::vector<Graph::NodeId>& in) {
    return std::any_of(in.begin(), in.end(), [&](Graph::NodeId id) { return g.requires_grad(id); });
}
} // namespace

Graph::NodeId Graph::matmul(NodeId a, NodeId b) {
    Node n{Op::MatMul};
    n.in = {check(a), check(b)};
    matmul_into(n.value, value(a), value(b));
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::matmul_nt(NodeId a, NodeId b) {
    Node n{Op::MatMulNT};
    n.in = {check(a), check(b)};
    matmul_nt_into(n.value, value(a), value(b));
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::add(NodeId a, NodeId b) {
    return add_n({a, b});
}

Graph::NodeId Graph::add_n(const std::vector<NodeId>& xs) {
    if (xs.empty()) throw DimensionError("add_n: no inputs");
    Node n{Op::AddN};
    n.in = xs;
    const Tensor& first = value(check(xs[0]));
    Tensor out = first;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const Tensor& t = value(check(xs[i]));
        if (!t.same_shape(first)) throw DimensionError("add: shape mismatch");
        for (std::int64_t j = 0; j < out.size(); ++j) out[j] += t[j];
    }
    n.value = std::move(out);
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::mul(NodeId a, NodeId b) {
    const Tensor& ta = value(check(a));
    const Tensor& tb = value(check(b));
    if (!ta.same_shape(tb)) throw DimensionError("mul: shape mismatch");
    Node n{Op::Mul};
    n.in = {a, b};
    Tensor out = ta;
    for (std::int64_t j = 0; j < out.size(); ++j) out[j] *= tb[j];
    n.value = std::move(out);
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::tanh(NodeId a) {
    Node n{Op::Tanh};
    n.in = {check(a)};
    Tensor out = value(a);
    for (std::int64_t j = 0; j < out.size(); ++j) out[j] = std::tanh(out[j]);
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::sigmoid(NodeId a) {
    Node n{Op::Sigmoid};
    n.in = {check(a)};
    Tensor out = value(a);
    for (std::int64_t j = 0; j < out.size(); ++j) out[j] = Real(1) / (Real(1) + std::exp(-out[j]));
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::concat_cols(NodeId a, NodeId b) {
    const Tensor& ta = value(check(a));
    const Tensor& tb = value(check(b));
    if (ta.rows() != tb.rows()) throw DimensionError("concat: row counts disagree");
    Node n{Op::ConcatCols};
    n.in = {a, b};
    Tensor out(ta.rows(), ta.cols() + tb.cols());
    for (int r = 0; r < ta.rows(); ++r) {
        std::copy(ta.row_ptr(r), ta.row_ptr(r) + ta.cols(), out.row_ptr(r));
        std::copy(tb.row_ptr(r), tb.row_ptr(r) + tb.cols(), out.row_ptr(r) + ta.cols());
    }
    n.value = std::move(out);
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::slice_cols(NodeId a, int begin, int len) {
    const Tensor& ta = value(check(a));
    if (begin < 0 || len <= 0 || begin + len > ta.cols())
        throw DimensionError("slice_cols: range out of bounds");
    Node n{Op::SliceCols};
    n.in = {a};
    n.aux0 = begin;
    n.aux1 = len;
    Tensor out(ta.rows(), len);
    for (int r = 0; r < ta.rows(); ++r)
        std::copy(ta.row_ptr(r) + begin, ta.row_ptr(r) + begin + len, out.row_ptr(r));
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::row(NodeId a, int r) {
    const Tensor& ta = value(check(a));
    if (r < 0 || r >= ta.rows()) throw IndexError("row: index out of range");
    Node n{Op::Row};
    n.in = {a};
    n.aux0 = r;
    Tensor out(1, ta.cols());
    std::copy(ta.row_ptr(r), ta.row_ptr(r) + ta.cols(), out.data());
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::stack_rows(const std::vector<NodeId>& rows) {
    if (rows.empty()) throw DimensionError("stack_rows: no inputs");
    const Tensor& first = value(check(rows[0]));
    if (first.rows() != 1) throw DimensionError("stack_rows: inputs must be row vectors");
    Node n{Op::StackRows};
    n.in = rows;
    Tensor out(static_cast<int>(rows.size()), first.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Tensor& t = value(check(rows[i]));
        if (t.rows() != 1 || t.cols() != first.cols())
            throw DimensionError("stack_rows: shape mismatch");
        std::copy(t.data(), t.data() + t.cols(), out.row_ptr(static_cast<int>(i)));
    }
    n.value = std::move(out);
    n.needs_grad = any_needs_grad(*this, n.in);
    return push(std::move(n));
}

Graph::NodeId Graph::mean_rows(NodeId a) {
    const Tensor& ta = value(check(a));
    Node n{Op::MeanRows};
    n.in = {a};
    Tensor out(1, ta.cols());
    for (int r = 0; r < ta.rows(); ++r) {
        const Real* src = ta.row_ptr(r);
        for (int c = 0; c < ta.cols(); ++c) out[c] += src[c];
    }
    const Real inv = Real(1) / ta.rows();
    for (int c = 0; c < ta.cols(); ++c) out[c] *= inv;
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::softmax_row(NodeId a) {
    const Tensor& ta = value(check(a));
    if (ta.cols() < 1) throw DimensionError("softmax: empty input");
    Node n{Op::SoftmaxRow};
    n.in = {a};
    Tensor out(ta.rows(), ta.cols());
    for (int r = 0; r < ta.rows(); ++r) {
        const Real* src = ta.row_ptr(r);
        Real* dst = out.row_ptr(r);
        Real mx = src[0];
        for (int c = 1; c < ta.cols(); ++c) mx = std::max(mx, src[c]);
        Real sum = 0;
        for (int c = 0; c < ta.cols(); ++c) {
            dst[c] = std::exp(src[c] - mx);
            sum += dst[c];
        }
        const Real inv = Real(1) / sum;
        for (int c = 0; c < ta.cols(); ++c) dst[c] *= inv;
    }
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::cross_entropy(NodeId logits, int target) {
    const Tensor& ta = value(check(logits));
    if (ta.rows() != 1) throw DimensionError("cross_entropy: logits must be a row vector");
    if (target < 0 || target >= ta.cols()) throw IndexError("cross_entropy: target out of range");
    Node n{Op::CrossEntropy};
    n.in = {logits};
    n.aux0 = target;
    // loss = logsumexp(logits) - logits[target], with max subtraction.
    Real mx = ta[0];
    for (int c = 1; c < ta.cols(); ++c) mx = std::max(mx, ta[c]);
    Real sum = 0;
    for (int c = 0; c < ta.cols(); ++c) sum += std::exp(ta[c] - mx);
    n.value = Tensor::scalar(std::log(sum) + mx - ta[target]);
    n.needs_grad = requires_grad(logits);
    return push(std::move(n));
}

Graph::NodeId Graph::scale(NodeId a, Real c) {
    Node n{Op::Scale};
    n.in = {check(a)};
    n.scalar = c;
    Tensor out = value(a);
    for (std::int64_t j = 0; j < out.size(); ++j) out[j] *= c;
    n.value = std::move(out);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Graph::NodeId Graph::sum_all(NodeId a) {
    Node n{Op::SumAll};
    n.in = {check(a)};
    const Tensor& ta = value(a);
    Real acc = 0;
    for (std::int64_t j = 0; j < ta.size(); ++j) acc += ta[j];
    n.value = Tensor::scalar(acc);
    n.needs_grad = requires_grad(a);
    return push(std::move(n));
}

Tensor& Graph::grad_buf(NodeId id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) {
        n.grad = Tensor(n.value.rows(), n.value.cols());
    }
    return n.grad;
}

void Graph::backward(NodeId loss) {
    check(loss);
    const Tensor& lv = nodes_[loss].value;
    if (lv.rows() != 1 || lv.cols() != 1)
        throw ContractError("backward: loss node must be scalar");
    for (Node& n : nodes_) n.grad = Tensor();
    grad_buf(loss)[0] = Real(1);
    for (NodeId id = loss; id >= 0; --id) {
        Node& n = nodes_[id];
        if (!n.needs_grad || n.grad.empty()) continue;
        backprop_node(id);
    }
}

void Graph::backprop_node(NodeId id) {
    Node& n = nodes_[id];
    const Tensor& dy = n.grad;
    auto din = [&](std::size_t slot) -> Tensor& { return grad_buf(n.in[slot]); };
    auto wants = [&](std::size_t slot) { return nodes_[n.in[slot]].needs_grad; };

    switch (n.op) {
    case Op::Constant:
    case Op::Param:
        return;
    case Op::MatMul: {
        // C = A B: dA += dC B^T, dB += A^T dC
        if (wants(0)) {
            Tensor tmp;
            matmul_nt_into(tmp, dy, value(n.in[1]));
            Tensor& g = din(0);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += tmp[j];
        }
        if (wants(1)) {
            Tensor tmp;
            matmul_tn_into(tmp, value(n.in[0]), dy);
            Tensor& g = din(1);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += tmp[j];
        }
        return;
    }
    case Op::MatMulNT: {
        // C = A B^T: dA += dC B, dB += dC^T A
        if (wants(0)) {
            Tensor tmp;
            matmul_into(tmp, dy, value(n.in[1]));
            Tensor& g = din(0);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += tmp[j];
        }
        if (wants(1)) {
            Tensor tmp;
            matmul_tn_into(tmp, dy, value(n.in[0]));
            Tensor& g = din(1);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += tmp[j];
        }
        return;
    }
    case Op::AddN: {
        for (std::size_t s = 0; s < n.in.size(); ++s) {
            if (!wants(s)) continue;
            Tensor& g = din(s);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j];
        }
        return;
    }
    case Op::Mul: {
        const Tensor& a = value(n.in[0]);
        const Tensor& b = value(n.in[1]);
        if (wants(0)) {
            Tensor& g = din(0);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j] * b[j];
        }
        if (wants(1)) {
            Tensor& g = din(1);
            for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j] * a[j];
        }
        return;
    }
    case Op::Tanh: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        const Tensor& y = n.value;
        for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j] * (Real(1) - y[j] * y[j]);
        return;
    }
    case Op::Sigmoid: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        const Tensor& y = n.value;
        for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j] * y[j] * (Real(1) - y[j]);
        return;
    }
    case Op::ConcatCols: {
        const Tensor& a = value(n.in[0]);
        const Tensor& b = value(n.in[1]);
        if (wants(0)) {
            Tensor& g = din(0);
            for (int r = 0; r < a.rows(); ++r)
                for (int c = 0; c < a.cols(); ++c) g.at(r, c) += dy.at(r, c);
        }
        if (wants(1)) {
            Tensor& g = din(1);
            for (int r = 0; r < b.rows(); ++r)
                for (int c = 0; c < b.cols(); ++c) g.at(r, c) += dy.at(r, c + a.cols());
        }
        return;
    }
    case Op::SliceCols: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        for (int r = 0; r < dy.rows(); ++r)
            for (int c = 0; c < dy.cols(); ++c) g.at(r, c + n.aux0) += dy.at(r, c);
        return;
    }
    case Op::Row: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        Real* dst = g.row_ptr(n.aux0);
        for (int c = 0; c < dy.cols(); ++c) dst[c] += dy[c];
        return;
    }
    case Op::StackRows: {
        for (std::size_t s = 0; s < n.in.size(); ++s) {
            if (!wants(s)) continue;
            Tensor& g = din(s);
            const Real* src = dy.row_ptr(static_cast<int>(s));
            for (int c = 0; c < g.cols(); ++c) g[c] += src[c];
        }
        return;
    }
    case Op::MeanRows: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        const Real inv = Real(1) / g.rows();
        for (int r = 0; r < g.rows(); ++r)
            for (int c = 0; c < g.cols(); ++c) g.at(r, c) += dy[c] * inv;
        return;
    }
    case Op::SoftmaxRow: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        const Tensor& y = n.value;
        for (int r = 0; r < y.rows(); ++r) {
            const Real* yr = y.row_ptr(r);
            const Real* dr = dy.row_ptr(r);
            Real dot = 0;
            for (int c = 0; c < y.cols(); ++c) dot += dr[c] * yr[c];
            Real* gr = g.row_ptr(r);
            for (int c = 0; c < y.cols(); ++c) gr[c] += (dr[c] - dot) * yr[c];
        }
        return;
    }
    case Op::CrossEntropy: {
        if (!wants(0)) return;
        // dL/dlogits = softmax(logits) - onehot(target)
        const Tensor& logits = value(n.in[0]);
        Tensor& g = din(0);
        Real mx = logits[0];
        for (int c = 1; c < logits.cols(); ++c) mx = std::max(mx, logits[c]);
        Real sum = 0;
        for (int c = 0; c < logits.cols(); ++c) sum += std::exp(logits[c] - mx);
        const Real d = dy[0];
        for (int c = 0; c < logits.cols(); ++c) {
            Real p = std::exp(logits[c] - mx) / sum;
            g[c] += d * (p - (c == n.aux0 ? Real(1) : Real(0)));
        }
        return;
    }
    case Op::Scale: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[j] * n.scalar;
        return;
    }
    case Op::SumAll: {
        if (!wants(0)) return;
        Tensor& g = din(0);
        for (std::int64_t j = 0; j < g.size(); ++j) g[j] += dy[0];
        return;
    }
    }
}

} // namespace loglm
