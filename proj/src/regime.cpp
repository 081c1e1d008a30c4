#include "qsr/regime.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "qsr/normal.hpp"

namespace qsr {

namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

std::string row_col(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

double nu(Counts step) {
    if (step == 0) throw std::invalid_argument("nu: zero step");
    const Counts a = step < 0 ? -step : step;
    if (a == 1) return 0.0;  // Phi(0) = 1/2 forces the threshold to 0
    return inverse_std_normal_cdf(1.0 - 1.0 / (2.0 * static_cast<double>(a)));
}

RegimeProfile make_profile(const PiecewiseSignal& s) {
    const DifferenceVector gd = difference_vector(s);
    RegimeProfile p;
    p.nus.resize(gd.size());
    for (std::size_t j = 0; j < gd.size(); ++j) p.nus[j] = nu(gd[j]);
    p.nu_max = *std::max_element(p.nus.begin(), p.nus.end());
    p.sigma_bound =
        p.nu_max > 0.0 ? 0.5 / p.nu_max : std::numeric_limits<double>::infinity();
    return p;
}

bool prop1_holds(const BlurMixture& blur, const RegimeProfile& profile) {
    return blur.sigma_max() < profile.sigma_bound;
}

SegmentationInfo segmentation(const PiecewiseSignal& s, const SamplingGrid& grid) {
    const ValidationReport r = validate_signal(s, grid);
    if (!r.ok()) throw std::invalid_argument("segmentation: " + r.violations.front());
    const std::size_t m = s.amps.size();
    SegmentationInfo out;
    out.etas.assign(m + 2, 0);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double t = grid.time(i);
        std::size_t bucket = 0;
        while (bucket <= m && t > s.breaks[bucket]) ++bucket;
        ++out.etas[bucket];
    }
    out.iotas.assign(m + 1, 0);
    std::size_t acc = 0;
    for (std::size_t j = 0; j <= m; ++j) {
        acc += out.etas[j];
        out.iotas[j] = acc;
    }
    return out;
}

ColumnForm classify_column(const MeasurementMatrix& m, std::size_t j, const SegmentationInfo& seg) {
    if (j >= m.cols || j >= seg.iotas.size())
        throw std::out_of_range("classify_column: column index");
    const std::size_t iota = seg.iotas[j];

    std::size_t crit = m.rows;  // sentinel: none
    for (std::size_t i = 0; i < m.rows; ++i) {
        const Rational& v = m.at(i, j);
        if (v != kZero && v != kOne) {
            if (crit != m.rows)
                throw std::runtime_error("column " + std::to_string(j) + ": two fractional entries");
            crit = i;
        }
    }
    // All non-critical entries must form the 0 -> 1 step with the flip at
    // first_one.
    const auto expect_step = [&](std::size_t first_one, std::size_t skip) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == skip) continue;
            if (m.at(i, j) != (i >= first_one ? kOne : kZero))
                throw std::runtime_error("column " + std::to_string(j) +
                                         ": 0/1 pattern broken at row " + std::to_string(i));
        }
    };

    ColumnForm out;
    if (crit == m.rows) {
        expect_step(iota, m.rows);
        out.kind = ColumnFormKind::EXACT_STEP;
        return out;
    }
    out.critical_row = crit;
    out.critical_value = m.at(crit, j);
    if (crit == iota && out.critical_value > kHalf) {
        expect_step(iota + 1, crit);
        out.kind = ColumnFormKind::LATE_CRITICAL;
    } else if (crit + 1 == iota && out.critical_value < kHalf) {
        expect_step(iota, crit);
        out.kind = ColumnFormKind::EARLY_CRITICAL;
    } else {
        throw std::runtime_error("column " + std::to_string(j) +
                                 ": fractional entry misplaced or exactly one half");
    }
    return out;
}

CheckReport check_prop3(const MeasurementMatrix& m, const DifferenceMatrix& md, double min_gap_T) {
    CheckReport r;
    r.id = "prop3";
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::size_t critical = 0;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const Rational& v = m.at(i, j);
            if (v != kZero && v != kOne) ++critical;
        }
        if (critical > 1) {
            r.passed = false;
            r.notes.push_back("measurement row " + std::to_string(i) + " has " +
                              std::to_string(critical) + " critical entries");
        }
    }
    if (min_gap_T > 2.0) {
        for (std::size_t i = 0; i < md.rows; ++i) {
            std::size_t nonzero = 0;
            for (std::size_t j = 0; j < md.cols; ++j)
                if (md.at(i, j) != kZero) ++nonzero;
            if (nonzero > 1) {
                r.passed = false;
                r.notes.push_back("difference row " + std::to_string(i) + " has " +
                                  std::to_string(nonzero) + " nonzeros despite gap > 2T");
            }
        }
    }
    return r;
}

CheckReport check_prop4(const SegmentationInfo& seg, unsigned l, double min_gap_T) {
    CheckReport r;
    r.id = "prop4";
    if (l == 0) {
        r.passed = false;
        r.notes.push_back("l must be positive");
        return r;
    }
    const double threshold = (static_cast<double>(l) + 1.0) / static_cast<double>(l);
    if (!(min_gap_T > threshold)) {
        r.flagged.push_back("min gap does not exceed (l+1)T/l; nothing asserted");
        return r;
    }
    std::size_t run = 1;
    for (std::size_t j = 1; j < seg.iotas.size(); ++j) {
        run = seg.iotas[j] == seg.iotas[j - 1] + 1 ? run + 1 : 1;
        if (run >= static_cast<std::size_t>(l) + 1) {
            r.passed = false;
            r.notes.push_back(std::to_string(l + 1) +
                              " consecutive segmentation points ending at sample " +
                              std::to_string(seg.iotas[j]));
        }
    }
    return r;
}

CheckReport check_prop5(const DifferenceMatrix& md, double min_gap_T) {
    CheckReport r;
    r.id = "prop5";
    for (std::size_t i = 0; i < md.rows; ++i) {
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < md.cols; ++j)
            if (md.at(i, j) != kZero) nz.push_back(j);
        if (nz.size() > 2) {
            r.passed = false;
            r.notes.push_back("difference row " + std::to_string(i) + " has " +
                              std::to_string(nz.size()) + " nonzeros");
            continue;
        }
        if (nz.size() != 2) continue;
        if (nz[1] != nz[0] + 1) {
            r.passed = false;
            r.notes.push_back("difference row " + std::to_string(i) +
                              " has nonzeros in non-consecutive columns");
        }
        bool fractional = false;
        for (std::size_t j : nz) {
            const Rational a = boost::abs(md.at(i, j));
            if (a != kOne) fractional = true;
        }
        if (!fractional) {
            r.passed = false;
            r.notes.push_back("difference row " + std::to_string(i) +
                              " has two nonzeros with neither fractional");
        }
        if (min_gap_T > 1.5) {
            for (std::size_t j : nz) {
                const Rational a = boost::abs(md.at(i, j));
                if (!(a > kZero && a < kHalf)) {
                    r.passed = false;
                    r.notes.push_back("entry " + row_col(i, j) +
                                      " outside (0, 1/2) despite gap > 1.5T");
                }
            }
        }
    }
    return r;
}

CheckReport check_prop6(const DifferenceMatrix& md, double min_gap_T) {
    CheckReport r;
    r.id = "prop6";
    if (!(min_gap_T > 1.5)) {
        r.flagged.push_back("min gap does not exceed 1.5T; nothing asserted");
        return r;
    }
    std::size_t prev = md.rows;  // sentinel: none yet
    for (std::size_t i = 0; i < md.rows; ++i) {
        std::size_t nonzero = 0;
        for (std::size_t j = 0; j < md.cols; ++j)
            if (md.at(i, j) != kZero) ++nonzero;
        if (nonzero != 2) continue;
        if (prev != md.rows && i < prev + 3) {
            r.passed = false;
            r.notes.push_back("two-nonzero rows " + std::to_string(prev) + " and " +
                              std::to_string(i) + " closer than 3 apart");
        }
        prev = i;
    }
    return r;
}

CheckReport check_theorem7(const DifferenceSequence& delta, const SegmentationInfo& seg,
                           const MeasurementMatrix& m) {
    CheckReport r;
    r.id = "theorem7";
    std::vector<ColumnForm> forms(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        try {
            forms[j] = classify_column(m, j, seg);
        } catch (const std::exception& e) {
            r.passed = false;
            r.notes.push_back(e.what());
            return r;
        }
    }
    for (std::size_t j = 0; j + 1 < m.cols; ++j) {
        if (seg.iotas[j + 1] != seg.iotas[j] + 2) continue;
        if (forms[j + 1].kind != ColumnFormKind::EARLY_CRITICAL) continue;
        const std::size_t i = seg.iotas[j];
        if (i + 1 >= delta.size()) continue;
        const Counts first = std::llabs(delta[i]);
        const Counts second = std::llabs(delta[i + 1]);
        const std::string where = "columns " + std::to_string(j) + "," + std::to_string(j + 1) +
                                  " at sample " + std::to_string(i);
        if (forms[j].kind == ColumnFormKind::LATE_CRITICAL) {
            if (!(first > second)) {
                r.passed = false;
                r.notes.push_back("merged pair " + where + ": |delta| ordering violated");
            }
        } else if (!(first > second)) {
            r.flagged.push_back("unmerged pair " + where + ": |delta| ordering fails");
        }
        if (!(std::llabs(delta[i] + 2 * kCountsPerUnit) > second))
            r.flagged.push_back("pair " + where + ": shifted |delta| ordering fails");
    }
    return r;
}

}  // namespace qsr
