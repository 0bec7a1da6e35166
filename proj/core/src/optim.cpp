#include "m3icro/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "m3icro/errors.hpp"

namespace m3icro {

AdamOptimizer::AdamOptimizer(std::vector<ParamGroup> groups, long total_steps,
                             bool cosine_decay, double beta1, double beta2, double eps)
    : groups_(std::move(groups)),
      total_steps_(std::max<long>(total_steps, 1)),
      cosine_decay_(cosine_decay),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {
    m_.reserve(groups_.size());
    v_.reserve(groups_.size());
    for (const ParamGroup& g : groups_) {
        m_.emplace_back(g.values.size(), 0.0);
        v_.emplace_back(g.values.size(), 0.0);
    }
}

double AdamOptimizer::current_lr_scale() const {
    if (!cosine_decay_) return 1.0;
    const double t = std::min<double>(static_cast<double>(step_), static_cast<double>(total_steps_));
    return 0.5 * (1.0 + std::cos(M_PI * t / static_cast<double>(total_steps_)));
}

void AdamOptimizer::step(std::span<const std::span<const double>> grads) {
    if (grads.size() != groups_.size()) {
        throw DimensionError("adam: expected " + std::to_string(groups_.size()) +
                             " gradient groups, got " + std::to_string(grads.size()));
    }
    const double scale = current_lr_scale(); // schedule evaluated before the step
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
        ParamGroup& g = groups_[gi];
        std::span<const double> grad = grads[gi];
        if (grad.size() != g.values.size()) {
            throw DimensionError("adam: gradient group " + std::to_string(gi) +
                                 " length mismatch");
        }
        const double lr = g.lr * scale;
        auto& m = m_[gi];
        auto& v = v_[gi];
        for (std::size_t i = 0; i < grad.size(); ++i) {
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * grad[i];
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            g.values[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
        }
        if (g.clamp == ClampKind::unit_interval) {
            for (double& x : g.values) x = std::clamp(x, 0.0, 1.0);
        }
    }
}

void AdamOptimizer::step(std::span<const double> grads) {
    const std::span<const double> one[] = {grads};
    step(std::span<const std::span<const double>>(one, 1));
}

} // namespace m3icro
