#include "indiff/testkit.hpp"

namespace indiff {
namespace testkit {

FiniteMarket random_market(std::mt19937_64& rng, const MarketParams& p) {
    std::uniform_int_distribution<int> n_dist(p.min_states, p.max_states);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        int n = n_dist(rng);
        int d = std::uniform_int_distribution<int>(
            p.min_assets, std::min(p.max_assets, n - 1))(rng);

        Vector probs(n), qt(n);
        for (int i = 0; i < n; ++i) probs[i] = p.min_prob + unif(rng);
        probs /= probs.sum();
        for (int i = 0; i < n; ++i) qt[i] = p.min_prob + unif(rng);
        qt /= qt.sum();

        Matrix dS(n, d);
        bool degenerate = false;
        for (int j = 0; j < d; ++j) {
            Vector col(n);
            for (int i = 0; i < n; ++i) col[i] = 2.0 * unif(rng) - 1.0;
            col.array() -= qt.dot(col);  // recentre: qt' col = 0
            if (col.cwiseAbs().maxCoeff() < 1e-3) { degenerate = true; break; }
            dS.col(j) = col;
        }
        if (degenerate) continue;
        try {
            return FiniteMarket(probs, dS);
        } catch (const std::invalid_argument&) {
            continue;  // borderline certificate, draw again
        }
    }
    throw std::runtime_error("random_market: generation failed repeatedly");
}

Vector random_claim(std::mt19937_64& rng, int states, double scale) {
    std::uniform_real_distribution<double> unif(-scale, scale);
    Vector B(states);
    for (int i = 0; i < states; ++i) B[i] = unif(rng);
    return B;
}

}  // namespace testkit
}  // namespace indiff
