// Forward model: blur, sampling, quantization, and the three matrices that
// connect a signal's difference vector to its quantized observations.
//
// gamma = M * g_D holds exactly in counts: the measurement matrix M is the
// deformation matrix with every entry outside a critical window snapped to
// 0 or 1 and the single remaining entry per row solved from the data, so
// its entries are exact rationals.
#pragma once

#include <cstddef>
#include <vector>

#include "qsr/signal.hpp"
#include "qsr/types.hpp"

namespace qsr {

struct Observation {
    SamplingGrid grid;
    std::vector<Counts> samples;  // gamma, counts
};

// Consecutive differences of the samples; entry 0 equals sample 0.
using DifferenceSequence = std::vector<Counts>;

struct DeformationMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;  // row-major

    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct MeasurementMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> data;

    const Rational& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    Rational& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

// Rows are consecutive differences of measurement-matrix rows (row 0 kept).
struct DifferenceMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> data;

    const Rational& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    Rational& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

struct QuantizeResult {
    Counts value = 0;
    bool fragile = false;  // within 1e-9 counts of a rounding boundary
};

struct FragilityWarning {
    std::size_t sample_index = 0;
    double unrounded_counts = 0.0;
};

struct SampleResult {
    Observation observation;
    std::vector<FragilityWarning> warnings;
};

// Blurred signal value at time t (units of T), in amplitude units.
double blurred_value(const PiecewiseSignal& s, const BlurMixture& blur, double t);

// Round an amplitude to the 1/256 grid, ties to the even count.
// Throws std::overflow_error when |result| exceeds amp_cap.
QuantizeResult quantize(double amplitude, Counts amp_cap = kDefaultAmpCap);

// Blur + sample + quantize over the grid.  Throws on invalid signal/grid.
SampleResult sample(const PiecewiseSignal& s, const BlurMixture& blur, const SamplingGrid& grid,
                    Counts amp_cap = kDefaultAmpCap);

DifferenceSequence difference_sequence(const Observation& obs);

// M~_{i,j} = mixture CDF at (t_i - D_j).
DeformationMatrix deformation_matrix(const PiecewiseSignal& s, const BlurMixture& blur,
                                     const SamplingGrid& grid);

// Snap entries outside the nu_j window of each column, then solve the at
// most one critical entry per row so that M * g_D = gamma exactly.
// Throws std::runtime_error when a row has two critical candidates or the
// snapped row cannot reproduce the sample (regime violation).
MeasurementMatrix measurement_matrix(const PiecewiseSignal& s, const BlurMixture& blur,
                                     const SamplingGrid& grid, const Observation& obs);

DifferenceMatrix difference_matrix(const MeasurementMatrix& m);

}  // namespace qsr
