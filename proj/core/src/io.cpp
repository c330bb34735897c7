#include "indiff/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace indiff {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ValidationError("bad-schema", "input is not valid JSON");
    return j;
}

Vector to_vector(const json& arr, const char* what) {
    if (!arr.is_array())
        throw ValidationError("bad-schema", std::string(what) + " must be an array");
    Vector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw ValidationError("bad-schema",
                                  std::string(what) + " must hold numbers");
        v[static_cast<int>(i)] = arr[i].get<double>();
    }
    return v;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("bad-file", "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedMarket load_market_json(const std::string& text) {
    json j = parse(text);
    if (!j.contains("probs") || !j.contains("delta_s"))
        throw ValidationError("bad-schema",
                              "market file needs 'probs' and 'delta_s'");
    Vector probs = to_vector(j["probs"], "probs");
    if (probs.size() == 0 || probs.minCoeff() <= 0.0)
        throw ValidationError("probs-not-positive",
                              "probabilities must be positive");
    if (std::fabs(probs.sum() - 1.0) > 1e-12)
        throw ValidationError("probs-not-normalized",
                              "probabilities must sum to 1");

    const json& ds = j["delta_s"];
    if (!ds.is_array() || ds.size() != static_cast<std::size_t>(probs.size()))
        throw ValidationError("bad-schema",
                              "delta_s must have one row per state");
    std::size_t d = ds.empty() ? 0 : ds[0].size();
    Matrix delta(probs.size(), d);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds[i].is_array() || ds[i].size() != d)
            throw ValidationError("bad-schema", "delta_s rows must agree in length");
        for (std::size_t k = 0; k < d; ++k)
            delta(static_cast<int>(i), static_cast<int>(k)) =
                ds[i][k].get<double>();
    }

    double x0 = j.value("x0", 0.0);
    std::optional<Vector> W;
    if (j.contains("W")) {
        W = to_vector(j["W"], "W");
        if (W->size() != probs.size())
            throw ValidationError("bad-schema", "W length must match states");
    }

    std::optional<Vector> claim;
    if (j.contains("claim")) {
        claim = to_vector(j["claim"], "claim");
        if (claim->size() != probs.size())
            throw ValidationError("bad-schema", "claim length must match states");
    }

    try {
        return LoadedMarket{FiniteMarket(probs, delta, x0, W), claim};
    } catch (const std::invalid_argument& e) {
        throw ValidationError("arbitrage", e.what());
    }
}

LoadedMarket load_market_file(const std::string& path) {
    return load_market_json(read_text_file(path));
}

namespace {

ExpMixtureMarket::Claim parse_mixture_claim(const json& j) {
    if (!j.contains("type"))
        throw ValidationError("bad-schema", "claim needs a 'type'");
    std::string type = j["type"].get<std::string>();
    if (type == "zero") return ExpMixtureMarket::ZeroClaim{};
    if (type == "delta_y") {
        if (!j.contains("delta"))
            throw ValidationError("bad-schema", "delta_y claim needs 'delta'");
        return ExpMixtureMarket::DeltaYClaim{j["delta"].get<double>()};
    }
    if (type == "bounded_alpha") {
        if (!j.contains("grid"))
            throw ValidationError("bad-schema", "bounded_alpha needs 'grid'");
        // per-atom piecewise-linear tables in y, constant beyond the ends
        std::map<double, std::vector<std::pair<double, double>>> tables;
        double max_abs = 0.0;
        for (const auto& row : j["grid"]) {
            if (!row.is_array() || row.size() != 3)
                throw ValidationError("bad-schema",
                                      "grid rows must be [y, z, value]");
            double y = row[0].get<double>(), z = row[1].get<double>(),
                   v = row[2].get<double>();
            tables[z].push_back({y, v});
            max_abs = std::max(max_abs, std::fabs(v));
        }
        for (auto& [z, tab] : tables) std::sort(tab.begin(), tab.end());
        double bound = j.value("bound", max_abs);
        auto alpha = [tables](double y, double z) -> double {
            // nearest atom table
            auto it = tables.lower_bound(z - 1e-12);
            if (it == tables.end()) --it;
            const auto& tab = it->second;
            if (tab.empty()) return 0.0;
            if (y <= tab.front().first) return tab.front().second;
            if (y >= tab.back().first) return tab.back().second;
            auto hi = std::lower_bound(
                tab.begin(), tab.end(), std::make_pair(y, -1e300));
            auto lo = hi - 1;
            double t = (y - lo->first) / (hi->first - lo->first);
            return lo->second + t * (hi->second - lo->second);
        };
        return ExpMixtureMarket::BoundedAlphaClaim{alpha, bound};
    }
    throw ValidationError("bad-schema", "unknown claim type: " + type);
}

}  // namespace

ExpMixtureMarket load_exp_mixture_json(const std::string& text) {
    json j = parse(text);
    double gamma = j.value("gamma", 1.0);

    std::vector<ExpMixtureMarket::ZAtom> atoms;
    if (!j.contains("z_atoms") ||
        (j["z_atoms"].is_string() &&
         j["z_atoms"].get<std::string>() == "paper-default")) {
        atoms = ExpMixtureMarket::default_atoms(
            j.value("N", 50), j.value("p1", 0.99), j.value("r", 0.1));
    } else {
        for (const auto& row : j["z_atoms"]) {
            if (!row.is_array() || row.size() != 2)
                throw ValidationError("bad-schema", "z_atoms rows must be [z, p]");
            atoms.push_back({row[0].get<double>(), row[1].get<double>()});
        }
    }

    ExpMixtureMarket::Claim claim = ExpMixtureMarket::ZeroClaim{};
    if (j.contains("claim")) claim = parse_mixture_claim(j["claim"]);

    try {
        return ExpMixtureMarket(std::move(atoms), gamma, std::move(claim));
    } catch (const MonotonicityError&) {
        throw;  // a solver-style failure, not a schema problem
    } catch (const std::invalid_argument& e) {
        throw ValidationError("bad-mixture-market", e.what());
    }
}

ExpMixtureMarket load_exp_mixture_file(const std::string& path) {
    return load_exp_mixture_json(read_text_file(path));
}

Utility load_utility_json(const std::string& text) {
    json j = parse(text);
    std::string type = j.value("type", "");
    if (type != "exp_sum")
        throw ValidationError("bad-schema",
                              "utility spec: only type 'exp_sum' is supported");
    std::vector<std::pair<double, double>> terms;
    for (const auto& row : j["terms"]) {
        if (!row.is_array() || row.size() != 2)
            throw ValidationError("bad-schema", "terms rows must be [a, g]");
        double a = row[0].get<double>(), g = row[1].get<double>();
        if (!(a > 0.0 && g > 0.0))
            throw ValidationError("bad-schema", "terms need a > 0 and g > 0");
        terms.push_back({a, g});
    }
    if (terms.empty())
        throw ValidationError("bad-schema", "utility spec needs terms");
    auto u = [terms](double x) {
        double s = 0.0;
        for (auto [a, g] : terms) s -= a * std::exp(-g * x);
        return s;
    };
    auto du = [terms](double x) {
        double s = 0.0;
        for (auto [a, g] : terms) s += a * g * std::exp(-g * x);
        return s;
    };
    return Utility::custom(u, du);
}

Utility load_utility_file(const std::string& path) {
    return load_utility_json(read_text_file(path));
}

Vector load_claim_json(const std::string& text, int states) {
    json j = parse(text);
    if (j.is_array()) {
        Vector v = to_vector(j, "claim");
        if (v.size() != states)
            throw ValidationError("bad-schema", "claim length must match states");
        return v;
    }
    if (j.contains("values")) return load_claim_json(j["values"].dump(), states);
    if (j.contains("constant"))
        return Vector::Constant(states, j["constant"].get<double>());
    throw ValidationError("bad-schema",
                          "claim file must be an array, 'values' or 'constant'");
}

Vector load_claim_file(const std::string& path, int states) {
    return load_claim_json(read_text_file(path), states);
}

}  // namespace indiff
