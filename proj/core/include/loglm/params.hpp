#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglm/graph.hpp"
#include "loglm/tensor.hpp"

namespace loglm {

// One learnable tensor plus its accumulated gradient.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;

    Parameter() = default;
    Parameter(std::string n, Tensor v)
        : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

    void zero_grad() { grad.zero(); }
};

using ParamRefs = std::vector<Parameter*>;

void zero_grads(const ParamRefs& params);
Real global_grad_norm(const ParamRefs& params);
// Scales all gradients down so their global L2 norm is at most max_norm.
void clip_global_norm(const ParamRefs& params, Real max_norm);

// ADAM with bias correction. Moment tensors are kept per parameter, aligned
// with the ParamRefs order the state was created with.
struct AdamConfig {
    Real lr = 0.01;
    Real beta1 = 0.9;
    Real beta2 = 0.999;
    Real eps = 1e-8;
};

class AdamState {
public:
    AdamState() = default;
    AdamState(const ParamRefs& params, AdamConfig cfg);

    // One optimizer step from the parameters' accumulated gradients. A
    // non-finite gradient rejects the whole update and leaves parameters,
    // moments and the step counter untouched.
    void step(const ParamRefs& params);

    std::int64_t steps_taken() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::int64_t step_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

// Binds parameters of a model into a graph as leaves, caching the node per
// parameter, and pulls the adjoints back out after backward().
class ParamBinder {
public:
    explicit ParamBinder(Graph& g) : g_(&g) {}

    Graph::NodeId operator[](Parameter& p) {
        for (const auto& [param, id] : bound_)
            if (param == &p) return id;
        Graph::NodeId id = g_->param(p.value);
        bound_.emplace_back(&p, id);
        return id;
    }

    // param.grad += scale * node adjoint, for every bound parameter reached
    // by the last backward().
    void accumulate(Real scale = Real(1)) {
        for (auto& [param, id] : bound_) {
            const Tensor& g = g_->grad(id);
            if (g.empty()) continue;
            Tensor& acc = param->grad;
            for (std::int64_t j = 0; j < acc.size(); ++j) acc[j] += scale * g[j];
        }
    }

private:
    Graph* g_;
    std::vector<std::pair<Parameter*, Graph::NodeId>> bound_;
};

} // namespace loglm
