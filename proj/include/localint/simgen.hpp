#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "localint/dataset.hpp"

namespace localint {

enum class DgpKind { basic, t_dependent, counterexample, product };

struct DgpConfig {
    std::size_t n_units = 110000;
    std::size_t n_contexts = 10000;
    std::uint64_t seed = 0;
    double noise_sd = 1.0;
    double t_adjustment = 0.1;
    DgpKind kind = DgpKind::basic;
};

struct GeneratedData {
    Dataset dataset;
    double ground_truth = 0.0;  // TACE for basic/t_dependent, TACRR for product
};

// Context-interference DGP: x uniform on {0.1..0.4}, contexts uniform,
// per-context treatment boost u uniform on {0.1..0.4}, t ~ B(x+u),
// i = treated fraction of context peers, exposure w ~ B(i),
// y ~ N(4x + t + 4w, noise_sd). Ground-truth TACE = 1. The exposure w is
// emitted as an oracle-only covariate column "w"; estimators never use it.
GeneratedData gen_basic(const DgpConfig& config);

// Same mechanism but the signature drops by t_adjustment for treated
// units: i = max(0, i_tilde - c*t). Treated units never reach i > 1 - c.
GeneratedData gen_t_dependent(const DgpConfig& config);

// Product-outcome DGP: y = (1 + t + x)(1 + i) + eps, eps ~ N(0,
// 0.1*noise_sd). Ground-truth TACRR = mean over x levels of (2+x)/(1+x).
GeneratedData gen_product(const DgpConfig& config);

struct CounterexamplePair {
    Dataset model1;
    Dataset model2;
    double tace1 = 0.0;
    double tace2 = 0.0;
};

// Two outcome models over identical (t, x, constant signature c) draws:
//   model 1: y = alpha * t * c + x
//   model 2: y = alpha2 * t * c + beta * t + x
// Requires alpha*c == alpha2*c + beta (to 1e-12) and c != 1, so the two
// observational tables coincide while the causal effects alpha and
// alpha2 + beta differ.
CounterexamplePair gen_counterexample_pair(std::size_t n, std::uint64_t seed, double c,
                                           double alpha, double alpha2, double beta);

struct ToyModelParams {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    int t1 = 1, t2 = 1, t3 = 0;
};

struct ToyResult {
    double y1 = 0.0, y2 = 0.0, y3 = 0.0;
    double recovered_alpha = 0.0;
    double bias = 0.0;
};

// Three-unit linear demonstrators. Example 1: y3 = rho*t3 + beta*t2, so
// y1 - y3 recovers alpha exactly. Example 2 adds delta*t1 to y2 and y3,
// and y1 - y3 is off by -delta.
ToyResult toy_linear(int example, const ToyModelParams& params);

// y' = y + strength * signature * scale, all other columns unchanged.
Dataset inject_interference(const Dataset& dataset, const std::string& signature_col,
                            const std::string& scale_col, double strength);

}  // namespace localint
