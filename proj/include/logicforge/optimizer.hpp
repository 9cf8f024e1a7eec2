#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace logicforge {

// Adam with bias correction. One instance per parameter group; step()
// advances the group's timestep.
class Adam {
public:
    Adam(size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(double* theta, const double* grad, double lr) {
        ++t_;
        double bc1 = 1.0 - std::pow(beta1_, double(t_));
        double bc2 = 1.0 - std::pow(beta2_, double(t_));
        for (size_t i = 0; i < m_.size(); ++i) {
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
            theta[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
        }
    }

    size_t size() const { return m_.size(); }
    uint64_t timestep() const { return t_; }

private:
    std::vector<double> m_, v_;
    uint64_t t_ = 0;
    double beta1_, beta2_, eps_;
};

}  // namespace logicforge
