#include "loglm/params.hpp"

#include <cmath>

#include "loglm/errors.hpp"

namespace loglm {

void zero_grads(const ParamRefs& params) {
    for (Parameter* p : params) p->zero_grad();
}

Real global_grad_norm(const ParamRefs& params) {
    Real sq = 0;
    for (const Parameter* p : params)
        for (std::int64_t j = 0; j < p->grad.size(); ++j) sq += p->grad[j] * p->grad[j];
    return std::sqrt(sq);
}

void clip_global_norm(const ParamRefs& params, Real max_norm) {
    const Real norm = global_grad_norm(params);
    if (norm <= max_norm || norm == Real(0)) return;
    const Real s = max_norm / norm;
    for (Parameter* p : params)
        for (std::int64_t j = 0; j < p->grad.size(); ++j) p->grad[j] *= s;
}

AdamState::AdamState(const ParamRefs& params, AdamConfig cfg) : cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Parameter* p : params) {
        m_.emplace_back(p->value.rows(), p->value.cols());
        v_.emplace_back(p->value.rows(), p->value.cols());
    }
}

void AdamState::step(const ParamRefs& params) {
    if (params.size() != m_.size())
        throw ContractError("adam: parameter list does not match state");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->value.same_shape(m_[i]))
            throw DimensionError("adam: parameter shape does not match state");
        if (!params[i]->grad.all_finite())
            throw NumericError("adam: non-finite gradient for " + params[i]->name +
                               ", update rejected");
    }
    step_ += 1;
    const Real bc1 = Real(1) - std::pow(cfg_.beta1, static_cast<Real>(step_));
    const Real bc2 = Real(1) - std::pow(cfg_.beta2, static_cast<Real>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& val = params[i]->value;
        const Tensor& g = params[i]->grad;
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (std::int64_t j = 0; j < val.size(); ++j) {
            m[j] = cfg_.beta1 * m[j] + (Real(1) - cfg_.beta1) * g[j];
            v[j] = cfg_.beta2 * v[j] + (Real(1) - cfg_.beta2) * g[j] * g[j];
            const Real mhat = m[j] / bc1;
            const Real vhat = v[j] / bc2;
            val[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

} // namespace loglm
