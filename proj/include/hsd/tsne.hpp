#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hsd {

struct TsneOptions {
    double perplexity = 30;
    int iterations = 1000;
    std::uint64_t seed = 0;
    double learning_rate = 200;
};

struct TsneResult {
    Eigen::MatrixXd y;            // rows × 2
    std::vector<double> kl;       // per iteration, against the plain (un-exaggerated) affinities
};

// Exact (all-pairs) projection to 2D. Gaussian input affinities with
// per-point bandwidth bisected to the target perplexity, symmetrized and
// floored at 1e-12; Student-t output affinities; gradient descent with
// momentum 0.5 for the first 250 iterations and 0.8 after, input affinities
// exaggerated 12x over that same stretch; seeded Gaussian init (sigma 1e-4);
// coordinates re-centered on their mean every iteration. Runs in 64-bit
// floats regardless of the model's float width.
TsneResult tsne_project(const Eigen::MatrixXd& x, const TsneOptions& options);

}  // namespace hsd
