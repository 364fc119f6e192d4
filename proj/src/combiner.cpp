#include "onematch/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "onematch/errors.hpp"
#include "onematch/rng.hpp"

namespace onematch {

namespace {

constexpr std::size_t kDim = kFeatureCount + 1;  // weights + intercept

double sigmoid(double z) {
    if (z >= 0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^t) without overflow.
double softplus(double t) {
    return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

struct Problem {
    std::vector<std::array<double, kFeatureCount>> x;  // standardized
    std::vector<double> y;
};

double raw_score(const std::array<double, kFeatureCount>& x,
                 const std::array<double, kFeatureCount>& w, double b) {
    double z = b;
    for (std::size_t i = 0; i < kFeatureCount; ++i) z += w[i] * x[i];
    return z;
}

double penalized_ll(const Problem& p, const std::array<double, kFeatureCount>& w, double b,
                    double lambda) {
    double ll = 0.0;
    for (std::size_t n = 0; n < p.x.size(); ++n) {
        double z = raw_score(p.x[n], w, b);
        ll -= p.y[n] > 0.5 ? softplus(-z) : softplus(z);
    }
    double wsq = 0.0;
    for (double wi : w) wsq += wi * wi;
    return ll - 0.5 * lambda * wsq;
}

std::array<double, kDim> gradient(const Problem& p, const std::array<double, kFeatureCount>& w,
                                  double b, double lambda) {
    std::array<double, kDim> g{};
    for (std::size_t n = 0; n < p.x.size(); ++n) {
        double resid = p.y[n] - sigmoid(raw_score(p.x[n], w, b));
        for (std::size_t i = 0; i < kFeatureCount; ++i) g[i] += resid * p.x[n][i];
        g[kFeatureCount] += resid;
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) g[i] -= lambda * w[i];
    return g;
}

double max_abs(const std::array<double, kDim>& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

// Solves A d = g for symmetric positive definite A via Gaussian
// elimination with partial pivoting. Used for the Newton direction.
std::array<double, kDim> solve_spd(std::array<std::array<double, kDim>, kDim> a,
                                   std::array<double, kDim> g) {
    for (std::size_t col = 0; col < kDim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < kDim; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300)
            throw Error("combiner", "TrainingFailure", "singular Newton system");
        std::swap(a[col], a[piv]);
        std::swap(g[col], g[piv]);
        for (std::size_t r = col + 1; r < kDim; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < kDim; ++c) a[r][c] -= f * a[col][c];
            g[r] -= f * g[col];
        }
    }
    std::array<double, kDim> d{};
    for (std::size_t rr = kDim; rr-- > 0;) {
        double s = g[rr];
        for (std::size_t c = rr + 1; c < kDim; ++c) s -= a[rr][c] * d[c];
        d[rr] = s / a[rr][rr];
    }
    return d;
}

// Newton direction: (-H) d = grad, H the penalized Hessian.
std::array<double, kDim> newton_direction(const Problem& p,
                                          const std::array<double, kFeatureCount>& w, double b,
                                          double lambda, const std::array<double, kDim>& g) {
    std::array<std::array<double, kDim>, kDim> a{};
    for (std::size_t n = 0; n < p.x.size(); ++n) {
        double s = sigmoid(raw_score(p.x[n], w, b));
        double weight = s * (1.0 - s);
        std::array<double, kDim> row;
        for (std::size_t i = 0; i < kFeatureCount; ++i) row[i] = p.x[n][i];
        row[kFeatureCount] = 1.0;
        for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t j = i; j < kDim; ++j) a[i][j] += weight * row[i] * row[j];
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) a[i][i] += lambda;
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < i; ++j) a[i][j] = a[j][i];
    return solve_spd(a, g);
}

}  // namespace

std::array<double, kFeatureCount> Standardizer::apply(const FeatureVector& f) const {
    std::array<double, kFeatureCount> out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double v = feature_value(f, i).value_or(mean[i]);
        out[i] = (v - mean[i]) / sd[i];
    }
    return out;
}

Standardizer fit_standardizer(const std::vector<LabeledExample>& examples) {
    if (examples.size() < 2)
        throw Error("combiner", "TooFewExamples", std::to_string(examples.size()));
    Standardizer s;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& ex : examples) {
            if (auto v = feature_value(ex.features, i)) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) throw Error("combiner", "DegenerateFeature", kFeatureNames[i]);
        double mean = sum / static_cast<double>(n);
        double ssd = 0.0;
        for (const auto& ex : examples) {
            if (auto v = feature_value(ex.features, i)) {
                double d = *v - mean;
                ssd += d * d;
            }
        }
        s.mean[i] = mean;
        s.sd[i] = std::max(std::sqrt(ssd / static_cast<double>(n)), Standardizer::kSdFloor);
    }
    return s;
}

std::pair<double, std::array<double, kDim>> log_likelihood_and_gradient(
    const LogisticModel& m, const std::vector<LabeledExample>& examples) {
    Problem p;
    p.x.reserve(examples.size());
    p.y.reserve(examples.size());
    for (const auto& ex : examples) {
        p.x.push_back(m.standardizer.apply(ex.features));
        p.y.push_back(ex.label ? 1.0 : 0.0);
    }
    return {penalized_ll(p, m.weights, m.intercept, m.config.lambda),
            gradient(p, m.weights, m.intercept, m.config.lambda)};
}

LogisticModel train_logistic(const std::vector<LabeledExample>& examples,
                             const TrainConfig& config) {
    bool any_pos = false, any_neg = false;
    for (const auto& ex : examples) (ex.label ? any_pos : any_neg) = true;
    if (!any_pos || !any_neg)
        throw Error("combiner", "DegenerateLabels", "training data has a single class");

    LogisticModel m;
    m.config = config;
    m.standardizer = fit_standardizer(examples);

    Problem p;
    p.x.reserve(examples.size());
    p.y.reserve(examples.size());
    for (const auto& ex : examples) {
        p.x.push_back(m.standardizer.apply(ex.features));
        p.y.push_back(ex.label ? 1.0 : 0.0);
    }

    std::array<double, kFeatureCount> w{};
    double b = 0.0;
    double ll = penalized_ll(p, w, b, config.lambda);
    m.info.ll_trace.push_back(ll);
    double step = config.initial_step;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        auto g = gradient(p, w, b, config.lambda);
        if (max_abs(g) <= config.tolerance) {
            m.info.converged = true;
            break;
        }
        std::array<double, kDim> dir;
        if (config.optimizer == Optimizer::Newton) {
            dir = newton_direction(p, w, b, config.lambda, g);
            step = 1.0;
        } else {
            dir = g;
            step = std::min(step * 2.0, config.initial_step * 1048576.0);
        }
        // Backtrack until the penalized log-likelihood stops decreasing.
        double t = step;
        std::array<double, kFeatureCount> w2;
        double b2, ll2;
        for (;;) {
            for (std::size_t i = 0; i < kFeatureCount; ++i) w2[i] = w[i] + t * dir[i];
            b2 = b + t * dir[kFeatureCount];
            ll2 = penalized_ll(p, w2, b2, config.lambda);
            if (ll2 >= ll) break;
            if (t < 1e-18)
                throw Error("combiner", "TrainingFailure",
                            "log-likelihood decreases at the backtracking floor, iteration " +
                                std::to_string(iter));
            t /= 2.0;
        }
        // A step that moves nothing means the objective is flat to machine
        // precision; further iterations cannot make progress.
        bool moved = b2 != b;
        for (std::size_t i = 0; i < kFeatureCount && !moved; ++i) moved = w2[i] != w[i];
        w = w2;
        b = b2;
        ll = ll2;
        step = t;
        m.info.ll_trace.push_back(ll);
        m.info.iterations = iter + 1;
        if (!moved) break;
    }
    if (!m.info.converged) {
        auto g = gradient(p, w, b, config.lambda);
        m.info.converged = max_abs(g) <= config.tolerance;
    }
    m.weights = w;
    m.intercept = b;
    m.info.final_log_likelihood = ll;
    return m;
}

double predict(const LogisticModel& m, const FeatureVector& f) {
    auto x = m.standardizer.apply(f);
    double pr = sigmoid(raw_score(x, m.weights, m.intercept));
    const double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return std::clamp(pr, lo, hi);
}

std::vector<IdPair> boundary_sample(const std::vector<ScoresRow>& rows,
                                    const BoundarySampleConfig& config) {
    std::vector<IdPair> band;
    for (const auto& r : rows) {
        if (r.score && std::abs(*r.score - 0.5) <= config.band)
            band.push_back({r.left, r.right});
    }
    std::sort(band.begin(), band.end());
    band.erase(std::unique(band.begin(), band.end()), band.end());
    if (band.size() > config.count) {
        Rng rng(config.seed);
        auto idx = rng.sample_indices(band.size(), config.count);
        std::vector<IdPair> picked;
        picked.reserve(idx.size());
        for (auto i : idx) picked.push_back(band[i]);
        std::sort(picked.begin(), picked.end());
        band = std::move(picked);
    }
    return band;
}

void write_model_json(std::ostream& out, const LogisticModel& m) {
    nlohmann::ordered_json j;
    auto named = [](const std::array<double, kFeatureCount>& v) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < kFeatureCount; ++i) o[kFeatureNames[i]] = v[i];
        return o;
    };
    j["weights"] = named(m.weights);
    j["intercept"] = m.intercept;
    j["means"] = named(m.standardizer.mean);
    j["sds"] = named(m.standardizer.sd);
    j["config"] = {
        {"lambda", m.config.lambda},
        {"tolerance", m.config.tolerance},
        {"max_iters", m.config.max_iters},
        {"initial_step", m.config.initial_step},
        {"optimizer", m.config.optimizer == Optimizer::Newton ? "newton" : "gradient_ascent"},
    };
    j["seed"] = m.config.seed;
    j["training"] = {
        {"iterations", m.info.iterations},
        {"converged", m.info.converged},
        {"final_log_likelihood", m.info.final_log_likelihood},
    };
    out << j.dump(2) << '\n';
}

LogisticModel read_model_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("combiner", "ModelFormat", e.what());
    }
    try {
        LogisticModel m;
        auto named = [&](const nlohmann::json& o, std::array<double, kFeatureCount>& v) {
            for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = o.at(kFeatureNames[i]).get<double>();
        };
        named(j.at("weights"), m.weights);
        m.intercept = j.at("intercept").get<double>();
        named(j.at("means"), m.standardizer.mean);
        named(j.at("sds"), m.standardizer.sd);
        if (j.contains("config")) {
            const auto& c = j["config"];
            if (c.contains("lambda")) m.config.lambda = c["lambda"].get<double>();
            if (c.contains("tolerance")) m.config.tolerance = c["tolerance"].get<double>();
            if (c.contains("max_iters")) m.config.max_iters = c["max_iters"].get<int>();
            if (c.contains("initial_step")) m.config.initial_step = c["initial_step"].get<double>();
            if (c.contains("optimizer"))
                m.config.optimizer = c["optimizer"].get<std::string>() == "newton"
                                         ? Optimizer::Newton
                                         : Optimizer::GradientAscent;
        }
        if (j.contains("seed")) m.config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("training")) {
            const auto& t = j["training"];
            if (t.contains("iterations")) m.info.iterations = t["iterations"].get<int>();
            if (t.contains("converged")) m.info.converged = t["converged"].get<bool>();
            if (t.contains("final_log_likelihood"))
                m.info.final_log_likelihood = t["final_log_likelihood"].get<double>();
        }
        for (double sd : m.standardizer.sd)
            if (!(sd > 0.0)) throw Error("combiner", "ModelFormat", "non-positive sd");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error("combiner", "ModelFormat", e.what());
    }
}

}  // namespace onematch
