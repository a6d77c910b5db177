#include "hsd/adam.hpp"

#include <cmath>

namespace hsd {

void adam_update(AdamState& state, const AdamHyper& hyper,
                 const std::vector<Span>& params, const std::vector<Span>& grads) {
    if (params.size() != grads.size()) throw NumericError("parameter/gradient span mismatch");
    std::size_t total = 0;
    for (const auto& span : params) total += span.size;
    if (total != static_cast<std::size_t>(state.m.size())) {
        throw NumericError("optimizer state does not match parameter count");
    }
    state.t += 1;
    const Real bc1 = Real(1) - std::pow(hyper.beta1, static_cast<Real>(state.t));
    const Real bc2 = Real(1) - std::pow(hyper.beta2, static_cast<Real>(state.t));

    Eigen::Index at = 0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].size != grads[i].size) {
            throw NumericError("parameter/gradient span mismatch");
        }
        Real* p = params[i].data;
        const Real* g = grads[i].data;
        for (std::size_t k = 0; k < params[i].size; ++k, ++at) {
            if (!std::isfinite(g[k])) throw NumericError("non-finite gradient");
            const Real gd = g[k] + hyper.weight_decay * p[k];
            Real& m = state.m[at];
            Real& v = state.v[at];
            m = hyper.beta1 * m + (Real(1) - hyper.beta1) * gd;
            v = hyper.beta2 * v + (Real(1) - hyper.beta2) * gd * gd;
            const Real m_hat = m / bc1;
            const Real v_hat = v / bc2;
            p[k] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
        }
    }
}

}  // namespace hsd
