#pragma once

#include <cstdint>
#include <random>

#include "indiff/market.hpp"

namespace indiff {
namespace testkit {

/// Deterministic no-arbitrage market generator: a strictly positive measure
/// q~ is drawn first and the increments are recentred so that q~' dS = 0,
/// which certifies the polytope nonempty by construction.
struct MarketParams {
    int min_states = 2;
    int max_states = 6;
    int min_assets = 1;
    int max_assets = 2;
    double min_prob = 0.05;
};

FiniteMarket random_market(std::mt19937_64& rng, const MarketParams& p = {});

/// Uniform bounded claim in [-scale, scale]^n.
Vector random_claim(std::mt19937_64& rng, int states, double scale = 1.0);

}  // namespace testkit
}  // namespace indiff
