#include "localint/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "localint/rng.hpp"

namespace localint {
namespace {

// Stream tags for substream derivation; each (variable, unit) pair gets
// its own counter-based stream so generation is order-independent.
enum Stream : std::uint64_t {
    kCovariate = 1,
    kContextAssign = 2,
    kContextBoost = 3,
    kTreatment = 4,
    kExposure = 5,
    kOutcome = 6,
};

const double kXLevels[4] = {0.1, 0.2, 0.3, 0.4};

struct CoreDraws {
    std::vector<double> x;
    std::vector<std::int64_t> context;
    std::vector<int> t;
    std::vector<double> i;  // context fraction, t-adjusted when requested
};

CoreDraws draw_core(const DgpConfig& config, double t_adjustment) {
    if (config.n_units < config.n_contexts || config.n_contexts < 1)
        throw ValidationError("need n_units >= n_contexts >= 1");
    if (config.noise_sd <= 0) throw ValidationError("noise_sd must be > 0");
    const std::size_t n = config.n_units;

    CoreDraws d;
    d.context.resize(n);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
        Substream assign(config.seed, kContextAssign, static_cast<std::uint64_t>(attempt));
        std::vector<std::size_t> count(config.n_contexts, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = assign.below(config.n_contexts);
            d.context[i] = static_cast<std::int64_t>(c);
            count[c] += 1;
        }
        ok = std::none_of(count.begin(), count.end(),
                          [](std::size_t c) { return c == 1; });
    }
    if (!ok)
        throw ValidationError(
            "could not sample a context assignment without singleton contexts in 100 attempts; "
            "increase n_units or decrease n_contexts");

    d.x.resize(n);
    d.t.resize(n);
    std::vector<double> boost(config.n_contexts);
    for (std::size_t c = 0; c < config.n_contexts; ++c) {
        Substream s(config.seed, kContextBoost, c);
        boost[c] = kXLevels[s.below(4)];
    }
    std::vector<std::size_t> ctx_total(config.n_contexts, 0), ctx_treated(config.n_contexts, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Substream sx(config.seed, kCovariate, i);
        d.x[i] = kXLevels[sx.below(4)];
        Substream st(config.seed, kTreatment, i);
        d.t[i] = st.bernoulli(d.x[i] + boost[static_cast<std::size_t>(d.context[i])]);
        ctx_total[static_cast<std::size_t>(d.context[i])] += 1;
        ctx_treated[static_cast<std::size_t>(d.context[i])] += static_cast<std::size_t>(d.t[i]);
    }
    d.i.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(d.context[i]);
        const double tilde = static_cast<double>(ctx_treated[c] - static_cast<std::size_t>(d.t[i])) /
                             static_cast<double>(ctx_total[c] - 1);
        d.i[i] = std::max(0.0, tilde - t_adjustment * d.t[i]);
    }
    return d;
}

GeneratedData build_additive(const DgpConfig& config, double t_adjustment) {
    const auto d = draw_core(config, t_adjustment);
    const std::size_t n = config.n_units;
    std::vector<UnitRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Substream sw(config.seed, kExposure, i);
        Substream sy(config.seed, kOutcome, i);
        const int w = sw.bernoulli(d.i[i]);
        UnitRecord r;
        r.unit_id = static_cast<std::int64_t>(i);
        r.t = d.t[i];
        r.x = {d.x[i], static_cast<double>(w)};
        r.context = d.context[i];
        r.sig = {d.i[i]};
        r.y = 4.0 * d.x[i] + d.t[i] + 4.0 * w + config.noise_sd * sy.normal();
        records.push_back(std::move(r));
    }
    GeneratedData out{Dataset(std::move(records), {"x_1", "w"}, {"i_ctx"}), 1.0};
    return out;
}

}  // namespace

GeneratedData gen_basic(const DgpConfig& config) { return build_additive(config, 0.0); }

GeneratedData gen_t_dependent(const DgpConfig& config) {
    return build_additive(config, config.t_adjustment);
}

GeneratedData gen_product(const DgpConfig& config) {
    const auto d = draw_core(config, 0.0);
    const std::size_t n = config.n_units;
    std::vector<UnitRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Substream sy(config.seed, kOutcome, i);
        UnitRecord r;
        r.unit_id = static_cast<std::int64_t>(i);
        r.t = d.t[i];
        r.x = {d.x[i]};
        r.context = d.context[i];
        r.sig = {d.i[i]};
        r.y = (1.0 + d.t[i] + d.x[i]) * (1.0 + d.i[i]) + 0.1 * config.noise_sd * sy.normal();
        records.push_back(std::move(r));
    }
    double tacrr = 0.0;
    for (double x : kXLevels) tacrr += (2.0 + x) / (1.0 + x) / 4.0;
    return GeneratedData{Dataset(std::move(records), {"x_1"}, {"i_ctx"}), tacrr};
}

CounterexamplePair gen_counterexample_pair(std::size_t n, std::uint64_t seed, double c,
                                           double alpha, double alpha2, double beta) {
    if (n < 1) throw ValidationError("need n >= 1");
    if (c == 1.0)
        throw ValidationError("constant signature c = 1 makes the two models share their TACE");
    if (std::fabs(alpha * c - (alpha2 * c + beta)) > 1e-12)
        throw ValidationError("parameters violate alpha*c == alpha2*c + beta");

    std::vector<UnitRecord> r1, r2;
    r1.reserve(n);
    r2.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Substream sx(seed, kCovariate, i);
        Substream st(seed, kTreatment, i);
        const double x = sx.u01();
        const int t = st.bernoulli(0.5);
        UnitRecord a;
        a.unit_id = static_cast<std::int64_t>(i);
        a.t = t;
        a.x = {x};
        a.sig = {c};
        UnitRecord b = a;
        a.y = alpha * t * c + x;
        b.y = alpha2 * t * c + beta * t + x;
        r1.push_back(std::move(a));
        r2.push_back(std::move(b));
    }
    CounterexamplePair out{Dataset(std::move(r1), {"x_1"}, {"i_const"}),
                           Dataset(std::move(r2), {"x_1"}, {"i_const"}), alpha, alpha2 + beta};
    return out;
}

ToyResult toy_linear(int example, const ToyModelParams& p) {
    if (example != 1 && example != 2) throw ValidationError("toy example must be 1 or 2");
    if ((p.t1 != 0 && p.t1 != 1) || (p.t2 != 0 && p.t2 != 1) || (p.t3 != 0 && p.t3 != 1))
        throw ValidationError("toy treatments must be binary");
    const double delta = example == 1 ? 0.0 : p.delta;
    ToyResult r;
    r.y1 = p.alpha * p.t1 + p.beta * p.t2;
    r.y2 = p.gamma * p.t2 + delta * p.t1;
    r.y3 = p.rho * p.t3 + p.beta * p.t2 + delta * p.t1;
    r.recovered_alpha = r.y1 - r.y3;
    r.bias = r.recovered_alpha - p.alpha;
    return r;
}

Dataset inject_interference(const Dataset& dataset, const std::string& signature_col,
                            const std::string& scale_col, double strength) {
    if (!std::isfinite(strength)) throw ValidationError("strength must be finite");
    std::vector<double> y(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i)
        y[i] = dataset.record(i).y +
               strength * dataset.value(i, signature_col) * dataset.value(i, scale_col);
    return dataset.with_outcomes(y);
}

}  // namespace localint
