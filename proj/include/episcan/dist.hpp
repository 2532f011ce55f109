// Samplers layered on a Philox stream. All are deterministic functions of
// the stream state; none keeps hidden state of its own.
#pragma once

#include <cstdint>

#include "episcan/rng.hpp"

namespace episcan::dist {

inline double uniform01(rng::Stream& s) { return s.next_double(); }

double uniform(rng::Stream& s, double lo, double hi);

// Marsaglia polar method; the second variate of each accepted pair is
// discarded so the draw count stays a pure function of the stream.
double normal(rng::Stream& s);

bool bernoulli(rng::Stream& s, double p);

// Number of successes in 2 trials, one uniform per draw.
int binomial2(rng::Stream& s, double p);

// Knuth product method below mean 10, Hormann's PTRS transformed rejection
// above.
long poisson(rng::Stream& s, double mean);

}  // namespace episcan::dist
