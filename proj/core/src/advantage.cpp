#include "ragcritic/advantage.hpp"

#include <cmath>

#include "ragcritic/errors.hpp"

namespace ragcritic {

AdvantageSet compute_advantages(const RewardGroup& group, StdMode mode) {
    if (group.rewards.empty()) throw UsageError("reward group must not be empty");

    const size_t n = group.rewards.size();
    AdvantageSet out;
    out.advantages.assign(n, 0.0);

    double sum = 0.0;
    for (double reward : group.rewards) sum += reward;
    out.mean = sum / static_cast<double>(n);

    double squared = 0.0;
    for (double reward : group.rewards) {
        const double delta = reward - out.mean;
        squared += delta * delta;
    }
    const double divisor = (mode == StdMode::sample && n > 1)
                               ? static_cast<double>(n - 1)
                               : static_cast<double>(n);
    out.std_dev = std::sqrt(squared / divisor);

    if (out.std_dev < group.epsilon) {
        out.degenerate = true;
        return out;
    }
    for (size_t i = 0; i < n; ++i) {
        out.advantages[i] = (group.rewards[i] - out.mean) / out.std_dev;
    }
    return out;
}

}  // namespace ragcritic
