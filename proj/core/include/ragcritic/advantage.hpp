#pragma once

#include <vector>

namespace ragcritic {

/// Rewards of one group of sampled critiques for the same input.
struct RewardGroup {
    std::vector<double> rewards;
    double epsilon = 1e-8;  // below this spread the group is degenerate
};

struct AdvantageSet {
    std::vector<double> advantages;
    double mean = 0.0;
    double std_dev = 0.0;
    bool degenerate = false;  // all-equal group; advantages forced to zero
};

enum class StdMode { population, sample };

/// Group-relative standardization: (r_i - mean) / std. Groups whose spread
/// falls below epsilon yield all-zero advantages instead of dividing by a
/// propped-up denominator. Throws UsageError on an empty group.
AdvantageSet compute_advantages(const RewardGroup& group,
                                StdMode mode = StdMode::population);

}  // namespace ragcritic
