#include "hsd/tsne.hpp"

#include <cmath>
#include <limits>

#include "hsd/common.hpp"
#include "hsd/rng.hpp"

namespace hsd {
namespace {

constexpr double kExaggeration = 12;
constexpr int kEarlyIterations = 250;
constexpr double kProbFloor = 1e-12;

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    Eigen::MatrixXd d = sq.replicate(1, x.rows()) + sq.transpose().replicate(x.rows(), 1) -
                        2.0 * (x * x.transpose());
    return d.cwiseMax(0.0);
}

// Conditional distributions p(j|i): bandwidth per row bisected until the
// entropy hits log(perplexity).
Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& d, double perplexity) {
    const Eigen::Index m = d.rows();
    const double target = std::log(perplexity);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);

    for (Eigen::Index i = 0; i < m; ++i) {
        double beta = 1.0;
        double beta_lo = -std::numeric_limits<double>::infinity();
        double beta_hi = std::numeric_limits<double>::infinity();
        Eigen::VectorXd row(m);

        for (int round = 0; round < 50; ++round) {
            double sum = 0;
            for (Eigen::Index j = 0; j < m; ++j) {
                row[j] = j == i ? 0.0 : std::exp(-beta * d(i, j));
                sum += row[j];
            }
            double entropy;
            if (sum <= 0) {
                entropy = 0;
            } else {
                // H = log(sum) + beta * E[d]
                double weighted = 0;
                for (Eigen::Index j = 0; j < m; ++j) weighted += row[j] * d(i, j);
                entropy = std::log(sum) + beta * weighted / sum;
                row /= sum;
            }
            const double diff = entropy - target;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0) {
                beta_lo = beta;
                beta = std::isinf(beta_hi) ? beta * 2 : (beta + beta_hi) / 2;
            } else {
                beta_hi = beta;
                beta = std::isinf(beta_lo) ? beta / 2 : (beta + beta_lo) / 2;
            }
        }
        p.row(i) = row.transpose();
    }
    return p;
}

}  // namespace

TsneResult tsne_project(const Eigen::MatrixXd& x, const TsneOptions& options) {
    const Eigen::Index m = x.rows();
    if (m < 4) throw DataError("projection needs at least 4 points");
    if (!(options.perplexity > 0) || options.perplexity >= static_cast<double>(m)) {
        throw ConfigError("perplexity must lie in (0, point count)");
    }
    if (options.iterations < 1) throw ConfigError("iterations must be positive");

    const Eigen::MatrixXd d = squared_distances(x);
    if (d.maxCoeff() <= 0) {
        throw DataError("all points are identical, nothing to project");
    }

    Eigen::MatrixXd p = conditional_affinities(d, options.perplexity);
    p = ((p + p.transpose()) / (2.0 * static_cast<double>(m))).cwiseMax(kProbFloor).eval();

    Rng rng(derive_seed(options.seed, "projection-init"));
    Eigen::MatrixXd y(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index k = 0; k < 2; ++k) y(i, k) = 1e-4 * rng.gaussian();
    }

    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(m, 2);
    Eigen::MatrixXd grad(m, 2);
    Eigen::MatrixXd num(m, m);

    TsneResult result;
    result.kl.reserve(static_cast<std::size_t>(options.iterations));

    for (int it = 1; it <= options.iterations; ++it) {
        const bool early = it <= kEarlyIterations;
        const double exaggeration = early ? kExaggeration : 1.0;
        const double momentum = early ? 0.5 : 0.8;

        // Student-t affinities in the plane.
        double z = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            num(i, i) = 0;
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const double dy0 = y(i, 0) - y(j, 0);
                const double dy1 = y(i, 1) - y(j, 1);
                const double n = 1.0 / (1.0 + dy0 * dy0 + dy1 * dy1);
                num(i, j) = n;
                num(j, i) = n;
                z += 2 * n;
            }
        }

        grad.setZero();
        double kl = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                if (j == i) continue;
                const double q = std::max(num(i, j) / z, kProbFloor);
                const double coeff = 4.0 * (exaggeration * p(i, j) - q) * num(i, j);
                grad(i, 0) += coeff * (y(i, 0) - y(j, 0));
                grad(i, 1) += coeff * (y(i, 1) - y(j, 1));
                kl += p(i, j) * std::log(p(i, j) / q);
            }
        }
        result.kl.push_back(kl);

        step = momentum * step - options.learning_rate * grad;
        y += step;
        y.rowwise() -= y.colwise().mean();
    }

    result.y = y;
    return result;
}

}  // namespace hsd
