#pragma once

#include "fairlab/lts.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fairlab
{

constexpr std::uint64_t k_default_seed = 0xC0FFEE;

struct ProbEstimate
{
    std::size_t runs = 0;
    std::size_t horizon = 0;
    std::size_t reached = 0;
    double estimate = 0.0;
    std::uint64_t seed = 0;
};

// {"weights":{"t0":1,"t3":"1/3"}}; transitions not listed weigh 1.
std::map<TransIdx, double> load_weights(const AugmentedLTS& lts, const std::string& json_text);

// Monte-Carlo estimate of reaching the goal within `horizon` steps. Each
// run draws from its own generator seeded with (seed, run index). With
// several initial states a run starts in one of them uniformly, as if from
// a fresh pre-initial state.
ProbEstimate simulate(const AugmentedLTS& lts, const std::vector<bool>& goal,
                      const std::map<TransIdx, double>& weights, std::size_t horizon, std::size_t runs,
                      std::uint64_t seed = k_default_seed);

std::string estimate_json(const ProbEstimate& p);

} // namespace fairlab
