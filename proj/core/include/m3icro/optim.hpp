// Adam optimizer over named parameter groups with per-group learning rates,
// cosine learning-rate decay and optional post-step clamping.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace m3icro {

enum class ClampKind {
    none,
    unit_interval, ///< clamp each value to [0, 1]
};

struct ParamGroup {
    std::span<double> values;
    double lr = 1e-3;
    ClampKind clamp = ClampKind::none;
};

/// Standard Adam (beta1 0.9, beta2 0.999, eps 1e-8) with bias correction.
/// The learning rate follows cosine decay to zero over total_steps.
class AdamOptimizer {
public:
    AdamOptimizer(std::vector<ParamGroup> groups, long total_steps,
                  bool cosine_decay = true, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);

    /// Applies one update. grads[g] must match groups[g].values in length;
    /// throws DimensionError otherwise.
    void step(std::span<const std::span<const double>> grads);

    /// Convenience for a single group.
    void step(std::span<const double> grads);

    long steps_taken() const { return step_; }
    double current_lr_scale() const;

private:
    std::vector<ParamGroup> groups_;
    std::vector<std::vector<double>> m_, v_;
    long total_steps_;
    long step_ = 0;
    bool cosine_decay_;
    double beta1_, beta2_, eps_;
};

} // namespace m3icro
