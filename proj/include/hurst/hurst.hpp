#pragma once

// Umbrella header: self-similarity analysis of traded-value tick series.
//
// Pipeline: tape.hpp parses and filters tick files, series.hpp buckets them
// into per-second traded value, wavelet.hpp decomposes a series into Haar
// octaves, estimator.hpp turns octave moments into a Hurst estimate with
// confidence intervals, synth.hpp generates the synthetic series used to
// validate the estimator.

#include "hurst/date.hpp"
#include "hurst/decimal.hpp"
#include "hurst/errors.hpp"
#include "hurst/estimator.hpp"
#include "hurst/export.hpp"
#include "hurst/rng.hpp"
#include "hurst/series.hpp"
#include "hurst/synth.hpp"
#include "hurst/tape.hpp"
#include "hurst/wavelet.hpp"
#include "hurst/zeta.hpp"
