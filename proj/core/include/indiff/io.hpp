#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "indiff/exp_mixture.hpp"
#include "indiff/market.hpp"
#include "indiff/utility.hpp"

namespace indiff {

/// Input rejection with a stable machine-readable code, e.g.
/// "probs-not-normalized", "bad-schema", "arbitrage".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct LoadedMarket {
    FiniteMarket market;
    std::optional<Vector> claim;
};

/// Market document:
///   { "probs": [..], "delta_s": [[..] per state], "W": [..]?, "x0": number?,
///     "claim": [..]? }
/// Probabilities must be positive and sum to one (code
/// "probs-not-normalized"); construction failures map to "arbitrage".
LoadedMarket load_market_json(const std::string& text);
LoadedMarket load_market_file(const std::string& path);

/// Mixture-family document:
///   { "gamma": number?, "z_atoms": [[z, p], ..] | "paper-default",
///     "N": int?, "p1": number?, "r": number?,
///     "claim": {"type": "zero"}
///            | {"type": "delta_y", "delta": d}
///            | {"type": "bounded_alpha", "grid": [[y, z, value], ..],
///               "bound": number?} }
/// A grid-backed claim is piecewise linear in y per atom and held constant
/// beyond the last grid point.
ExpMixtureMarket load_exp_mixture_json(const std::string& text);
ExpMixtureMarket load_exp_mixture_file(const std::string& path);

/// Custom utility document: { "type": "exp_sum", "terms": [[a_k, g_k], ..] }
/// meaning u(x) = -sum_k a_k exp(-g_k x) with a_k, g_k > 0 (strictly
/// increasing, strictly concave, bounded above).
Utility load_utility_json(const std::string& text);
Utility load_utility_file(const std::string& path);

/// Claim document: either a bare array [..] or { "values": [..] } or
/// { "constant": c } resolved against the market size.
Vector load_claim_json(const std::string& text, int states);
Vector load_claim_file(const std::string& path, int states);

std::string read_text_file(const std::string& path);

}  // namespace indiff
