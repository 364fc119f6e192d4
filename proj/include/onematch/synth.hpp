#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "onematch/model.hpp"

namespace onematch {

// Knobs for the corpus generator. Defaults give a mildly noisy
// near-one-to-one instance; everything is driven by the single seed.
struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_left = 1000;
    std::size_t n_right = 1000;
    double overlap = 0.8;              // fraction of the left present on the right
    double duplicate_rate = 0.0;       // per-entity chance of a within-side copy
    double satellite_probability = 0.0;// per shared movie: add Making-of/Bonus rows
    double title_noise_rate = 0.0;     // per right-side copy: drop or insert a token
    double alt_title_rate = 0.0;       // per right-side copy: extra variant title
    double initialism_rate = 0.0;      // per name: "Bruce Willis" -> "B. Willis"
    int year_jitter = 0;               // +/- years on the right-side copy
    int runtime_jitter = 0;            // +/- minutes on the right-side copy

    struct MissingRates {
        double year = 0.0;
        double runtime = 0.0;
        double cast = 0.0;
        double directors = 0.0;
    } missing;

    std::size_t token_pool = 1500;     // distinct title tokens
    double zipf_exponent = 1.05;       // title token skew
    std::size_t cast_pool = 4000;      // distinct person names
};

struct SynthCorpus {
    Dataset left{"left", Side::Left, {}};
    Dataset right{"right", Side::Right, {}};
    TruthSet truth;  // complete: pairs not listed positive are negative
};

// Validates rates/pools; infeasible overlap (more shared movies than
// the right side can hold) is synth:ConfigError.
void validate_config(const SynthConfig& config);

SynthCorpus generate(const SynthConfig& config);

// JSON round-trip; unknown keys rejected so typos don't silently
// change an experiment.
SynthConfig read_synth_config(std::istream& in);
void write_synth_config(std::ostream& out, const SynthConfig& config);

}  // namespace onematch
