#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace foct {

// Grunwald-Letnikov differ-integral of a sampled signal, computed by the
// binomial-coefficient recursion over the full history:
//
//   D^a f(t_k) ~ h^{-a} * sum_{j=0..k} w_j f(t_{k-j}),
//   w_0 = 1,  w_j = w_{j-1} * (1 - (a+1)/j)
//
// Brute-force reference used by the test suites to validate band-limited
// realizations inside their fitting range; nothing here shares code with
// the Oustaloup path.
inline std::vector<double> gl_differintegral(std::span<const double> samples,
                                             double order, double sample_time) {
    if (!(sample_time > 0.0))
        throw std::domain_error("gl_differintegral: sample_time must be positive");
    if (!(std::abs(order) < 2.0))
        throw std::domain_error("gl_differintegral: |order| must be < 2");

    const std::size_t n = samples.size();
    std::vector<double> weights(n);
    if (n > 0) weights[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
        weights[j] = weights[j - 1] * (1.0 - (order + 1.0) / static_cast<double>(j));

    const double scale = std::pow(sample_time, -order);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j)
            acc += weights[j] * samples[k - j];
        out[k] = scale * acc;
    }
    return out;
}

}  // namespace foct
