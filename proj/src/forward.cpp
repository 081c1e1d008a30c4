#include "qsr/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsr/normal.hpp"
#include "qsr/regime.hpp"

namespace qsr {

namespace {

void require_valid_blur(const BlurMixture& blur) {
    if (blur.weights.empty() || blur.weights.size() != blur.sigmas.size())
        throw std::invalid_argument("blur mixture: weights/sigmas size mismatch");
    double wsum = 0.0;
    for (double w : blur.weights) {
        if (!(w > 0.0)) throw std::invalid_argument("blur mixture: nonpositive weight");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("blur mixture: weights must sum to 1");
    for (double s : blur.sigmas)
        if (!(s > 0.0)) throw std::invalid_argument("blur mixture: nonpositive sigma");
}

// Weighted CDF of the mixture evaluated at a time offset dt.
double mixture_cdf(const BlurMixture& blur, double dt) {
    double v = 0.0;
    for (std::size_t k = 0; k < blur.sigmas.size(); ++k)
        v += blur.weights[k] * std_normal_cdf(dt / blur.sigmas[k]);
    return v;
}

double blurred_value_of(const DifferenceVector& gd, const std::vector<double>& breaks,
                        const BlurMixture& blur, double t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < gd.size(); ++j)
        acc += static_cast<double>(gd[j]) * mixture_cdf(blur, t - breaks[j]);
    return acc / static_cast<double>(kCountsPerUnit);
}

}  // namespace

double blurred_value(const PiecewiseSignal& s, const BlurMixture& blur, double t) {
    require_valid_blur(blur);
    return blurred_value_of(difference_vector(s), s.breaks, blur, t);
}

QuantizeResult quantize(double amplitude, Counts amp_cap) {
    const double y = amplitude * static_cast<double>(kCountsPerUnit);
    if (!std::isfinite(y)) throw std::invalid_argument("quantize: non-finite amplitude");
    // nearbyint under the default rounding mode resolves half-count ties to
    // the even count.
    const double rounded = std::nearbyint(y);
    if (std::fabs(rounded) > static_cast<double>(amp_cap))
        throw std::overflow_error("quantize: amplitude beyond cap");
    QuantizeResult out;
    out.value = static_cast<Counts>(rounded);
    out.fragile = std::fabs(y - std::floor(y) - 0.5) < 1e-9;
    return out;
}

SampleResult sample(const PiecewiseSignal& s, const BlurMixture& blur, const SamplingGrid& grid,
                    Counts amp_cap) {
    const ValidationReport v = validate_signal(s, grid, false, amp_cap);
    if (!v.ok()) throw std::invalid_argument("sample: " + v.violations.front());
    require_valid_blur(blur);
    const DifferenceVector gd = difference_vector(s);
    SampleResult out;
    out.observation.grid = grid;
    out.observation.samples.resize(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double y = blurred_value_of(gd, s.breaks, blur, grid.time(i));
        const QuantizeResult q = quantize(y, amp_cap);
        out.observation.samples[i] = q.value;
        if (q.fragile) out.warnings.push_back({i, y * static_cast<double>(kCountsPerUnit)});
    }
    return out;
}

DifferenceSequence difference_sequence(const Observation& obs) {
    DifferenceSequence d(obs.samples.size());
    Counts prev = 0;
    for (std::size_t i = 0; i < obs.samples.size(); ++i) {
        d[i] = obs.samples[i] - prev;
        prev = obs.samples[i];
    }
    return d;
}

DeformationMatrix deformation_matrix(const PiecewiseSignal& s, const BlurMixture& blur,
                                     const SamplingGrid& grid) {
    const ValidationReport v = validate_signal(s, grid);
    if (!v.ok()) throw std::invalid_argument("deformation_matrix: " + v.violations.front());
    require_valid_blur(blur);
    DeformationMatrix m;
    m.rows = grid.count;
    m.cols = s.breaks.size();
    m.data.assign(m.rows * m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            m.data[i * m.cols + j] = mixture_cdf(blur, grid.time(i) - s.breaks[j]);
    return m;
}

MeasurementMatrix measurement_matrix(const PiecewiseSignal& s, const BlurMixture& blur,
                                     const SamplingGrid& grid, const Observation& obs) {
    const ValidationReport v = validate_signal(s, grid);
    if (!v.ok()) throw std::invalid_argument("measurement_matrix: " + v.violations.front());
    require_valid_blur(blur);
    if (obs.samples.size() != grid.count)
        throw std::invalid_argument("measurement_matrix: sample count does not match grid");
    const DifferenceVector gd = difference_vector(s);
    const RegimeProfile profile = make_profile(s);
    if (!prop1_holds(blur, profile))
        throw std::runtime_error("measurement_matrix: blur too wide for the one-critical regime");
    const double sm = blur.sigma_max();

    MeasurementMatrix m;
    m.rows = grid.count;
    m.cols = gd.size();
    m.data.assign(m.rows * m.cols, Rational(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::size_t critical = m.cols;  // sentinel: none
        Counts snapped = 0;             // contribution of the entries snapped to 1
        for (std::size_t j = 0; j < m.cols; ++j) {
            const double z = (grid.time(i) - s.breaks[j]) / sm;
            if (z > profile.nus[j]) {
                m.at(i, j) = Rational(1);
                snapped += gd[j];
            } else if (z < -profile.nus[j]) {
                m.at(i, j) = Rational(0);
            } else if (critical != m.cols) {
                throw std::runtime_error("measurement_matrix: two critical candidates in row " +
                                         std::to_string(i));
            } else {
                critical = j;
            }
        }
        if (critical == m.cols) {
            if (snapped != obs.samples[i])
                throw std::runtime_error("measurement_matrix: snapped row " + std::to_string(i) +
                                         " does not reproduce the sample");
        } else {
            const Rational r(obs.samples[i] - snapped, gd[critical]);
            if (r < Rational(0) || r > Rational(1))
                throw std::runtime_error("measurement_matrix: solved entry outside [0,1] in row " +
                                         std::to_string(i));
            m.at(i, critical) = r;
        }
    }
    return m;
}

DifferenceMatrix difference_matrix(const MeasurementMatrix& m) {
    DifferenceMatrix d;
    d.rows = m.rows;
    d.cols = m.cols;
    d.data.assign(d.rows * d.cols, Rational(0));
    for (std::size_t j = 0; j < m.cols; ++j) {
        Rational prev(0);
        for (std::size_t i = 0; i < m.rows; ++i) {
            d.at(i, j) = m.at(i, j) - prev;
            prev = m.at(i, j);
        }
    }
    return d;
}

}  // namespace qsr
