#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "onematch/features.hpp"
#include "onematch/model.hpp"

namespace onematch {

// Per-feature centering/scaling fitted on training data. Absent values
// impute to the training mean, i.e. to 0 after standardization.
struct Standardizer {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> sd{};  // population sd, floored at kSdFloor

    static constexpr double kSdFloor = 1e-9;

    std::array<double, kFeatureCount> apply(const FeatureVector& f) const;
};

struct LabeledExample {
    FeatureVector features;
    bool label = false;
};

// Throws combiner:TooFewExamples (< 2 rows) or combiner:DegenerateFeature
// (a feature absent in every row).
Standardizer fit_standardizer(const std::vector<LabeledExample>& examples);

enum class Optimizer { GradientAscent, Newton };

struct TrainConfig {
    double lambda = 1e-6;      // L2 penalty on weights; the intercept is unpenalized
    double tolerance = 1e-8;   // max-norm of the gradient at convergence
    int max_iters = 10000;
    double initial_step = 1.0; // line-search starting step for gradient ascent
    Optimizer optimizer = Optimizer::GradientAscent;
    std::uint64_t seed = 0;    // recorded in the model; the fit itself is deterministic
};

struct TrainInfo {
    int iterations = 0;
    bool converged = false;
    double final_log_likelihood = 0.0;
    std::vector<double> ll_trace;  // penalized log-likelihood after each accepted step
};

struct LogisticModel {
    std::array<double, kFeatureCount> weights{};
    double intercept = 0.0;
    Standardizer standardizer;
    TrainConfig config;
    TrainInfo info;
};

// Penalized conditional log-likelihood and its gradient (five weights
// then the intercept) at the model's parameters.
std::pair<double, std::array<double, kFeatureCount + 1>> log_likelihood_and_gradient(
    const LogisticModel& m, const std::vector<LabeledExample>& examples);

// Full-batch ascent from zero weights. Throws combiner:DegenerateLabels
// when only one class is present, combiner:TrainingFailure when the line
// search stalls before the gradient is small.
LogisticModel train_logistic(const std::vector<LabeledExample>& examples,
                             const TrainConfig& config = {});

// Match probability, clamped strictly inside (0, 1).
double predict(const LogisticModel& m, const FeatureVector& f);

struct BoundarySampleConfig {
    std::size_t count = 100;
    double band = 0.05;  // keep pairs with |score - 0.5| <= band
    std::uint64_t seed = 0;
};

// Uniform sample (without replacement) of scored pairs near the decision
// boundary, returned sorted by id pair. Pairs without a score are skipped.
std::vector<IdPair> boundary_sample(const std::vector<ScoresRow>& rows,
                                    const BoundarySampleConfig& config);

// JSON round-trip for trained models.
void write_model_json(std::ostream& out, const LogisticModel& m);
LogisticModel read_model_json(std::istream& in);

}  // namespace onematch
