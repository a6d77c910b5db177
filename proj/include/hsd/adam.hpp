#pragma once

#include <vector>

#include "hsd/common.hpp"
#include "hsd/model.hpp"

namespace hsd {

struct AdamHyper {
    Real lr = Real(1e-3);
    Real beta1 = Real(0.9);
    Real beta2 = Real(0.999);
    Real eps = Real(1e-8);
    Real weight_decay = Real(0);
};

// First/second moment estimates over one flat parameter vector.
struct AdamState {
    Vec m;
    Vec v;
    long t = 0;

    explicit AdamState(std::size_t scalars)
        : m(Vec::Zero(static_cast<Eigen::Index>(scalars))),
          v(Vec::Zero(static_cast<Eigen::Index>(scalars))) {}
};

// One update over parallel parameter/gradient spans. Weight decay is added
// to the raw gradient before the moment updates (decoupled variants do not
// match this). Throws NumericError if any gradient is not finite.
void adam_update(AdamState& state, const AdamHyper& hyper,
                 const std::vector<Span>& params, const std::vector<Span>& grads);

}  // namespace hsd
