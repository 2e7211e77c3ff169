#include "fairlab/simulate.hpp"

#include <json.hpp>

#include <random>

namespace fairlab
{

namespace
{

double parse_weight(const nlohmann::json& v, const std::string& id)
{
    double w = 0;
    if (v.is_number()) {
        w = v.get<double>();
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        std::size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                w = std::stod(s);
            } else {
                double den = std::stod(s.substr(slash + 1));
                if (den <= 0)
                    throw LtsError("weight of " + id + " has a non-positive denominator");
                w = std::stod(s.substr(0, slash)) / den;
            }
        } catch (const std::logic_error&) {
            throw LtsError("weight of " + id + " is not a number");
        }
    } else {
        throw LtsError("weight of " + id + " is not a number");
    }
    if (!(w > 0))
        throw LtsError("weight of " + id + " must be positive");
    return w;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

std::map<TransIdx, double> load_weights(const AugmentedLTS& lts, const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw LtsError(std::string("weights: ") + e.what());
    }
    if (!j.is_object() || !j.contains("weights") || !j.at("weights").is_object())
        throw LtsError("weights: expected {\"weights\": {...}}");
    std::map<TransIdx, double> w;
    for (const auto& [id, v] : j.at("weights").items())
        w[lts.transition_index(id)] = parse_weight(v, id);
    return w;
}

ProbEstimate simulate(const AugmentedLTS& lts, const std::vector<bool>& goal,
                      const std::map<TransIdx, double>& weights, std::size_t horizon, std::size_t runs,
                      std::uint64_t seed)
{
    for (const auto& [t, w] : weights)
        if (!(w > 0))
            throw LtsError("weight of " + lts.transitions.at(t).id + " must be positive");
    auto weight = [&](TransIdx t) {
        auto it = weights.find(t);
        return it == weights.end() ? 1.0 : it->second;
    };

    ProbEstimate p;
    p.runs = runs;
    p.horizon = horizon;
    p.seed = seed;
    const auto lo = static_cast<std::uint32_t>(seed);
    const auto hi = static_cast<std::uint32_t>(seed >> 32);
    for (std::size_t run = 0; run < runs; ++run) {
        std::seed_seq seq{lo, hi, static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
        std::mt19937_64 rng(seq);
        StateIdx s = lts.initial.size() == 1
                         ? lts.initial[0]
                         : lts.initial[std::min(lts.initial.size() - 1,
                                                static_cast<std::size_t>(unit(rng) * lts.initial.size()))];
        bool hit = goal[s];
        for (std::size_t step = 0; step < horizon && !hit; ++step) {
            const auto& outs = lts.out[s];
            if (outs.empty())
                break;
            double total = 0;
            for (TransIdx t : outs)
                total += weight(t);
            double x = unit(rng) * total;
            TransIdx pick = outs.back();
            for (TransIdx t : outs) {
                if (x < weight(t)) {
                    pick = t;
                    break;
                }
                x -= weight(t);
            }
            s = lts.transitions[pick].target;
            hit = goal[s];
        }
        if (hit)
            ++p.reached;
    }
    p.estimate = runs ? static_cast<double>(p.reached) / static_cast<double>(runs) : 0.0;
    return p;
}

std::string estimate_json(const ProbEstimate& p)
{
    nlohmann::ordered_json j;
    j["runs"] = p.runs;
    j["horizon"] = p.horizon;
    j["reached"] = p.reached;
    j["estimate"] = p.estimate;
    j["seed"] = p.seed;
    return j.dump(2) + "\n";
}

} // namespace fairlab
