#include "qsr/labeling.hpp"

#include <cmath>
#include <stdexcept>

namespace qsr {

namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

constexpr double kEdgeTol = 1e-12;  // window-edge / interval-endpoint ties

}  // namespace

const char* token_name(Token t) {
    switch (t) {
        case Token::Z: return "Z";
        case Token::A: return "A";
        case Token::F1: return "F1";
        case Token::F2: return "F2";
        case Token::S1: return "S1";
        case Token::S2: return "S2";
        case Token::P1: return "P1";
        case Token::P2: return "P2";
        case Token::P3: return "P3";
    }
    return "?";
}

TokenSeq label_from_truth(const DifferenceMatrix& md, const SegmentationInfo& seg) {
    TokenSeq out(md.rows, Token::Z);
    auto place = [&](std::size_t i, Token t) {
        if (out[i] != Token::Z)
            throw std::runtime_error("label_from_truth: token collision at index " +
                                     std::to_string(i));
        out[i] = t;
    };
    for (std::size_t j = 0; j < md.cols; ++j) {
        const std::size_t iota = seg.iotas[j];
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < md.rows; ++i)
            if (md.at(i, j) != kZero) nz.push_back(i);
        const std::string where = "label_from_truth: column " + std::to_string(j);
        if (nz.size() == 1) {
            if (nz[0] != iota || md.at(iota, j) != kOne)
                throw std::runtime_error(where + " is not a whole step at its segmentation point");
            place(iota, Token::A);
        } else if (nz.size() == 2 && nz[0] == iota && nz[1] == iota + 1) {
            const Rational x = md.at(iota, j);
            if (!(x > kHalf && x < kOne) || md.at(iota + 1, j) != kOne - x)
                throw std::runtime_error(where + " is not a forward split");
            place(iota, Token::F1);
            place(iota + 1, Token::F2);
        } else if (nz.size() == 2 && iota >= 1 && nz[0] == iota - 1 && nz[1] == iota) {
            const Rational x = md.at(iota - 1, j);
            if (!(x > kZero && x < kHalf) || md.at(iota, j) != kOne - x)
                throw std::runtime_error(where + " is not a backward split");
            // a backward split landing on the previous forward split merges
            // into a triple
            if (out[iota - 1] == Token::F2) {
                if (iota < 2 || out[iota - 2] != Token::F1)
                    throw std::runtime_error(where + ": dangling second half of a forward split");
                out[iota - 2] = Token::P1;
                out[iota - 1] = Token::P2;
                place(iota, Token::P3);
            } else {
                place(iota - 1, Token::S1);
                place(iota, Token::S2);
            }
        } else {
            throw std::runtime_error(where + " matches no column form");
        }
    }
    return out;
}

GapGeometry gap_geometry(const PiecewiseSignal& s, const SamplingGrid& grid, std::size_t j) {
    if (j == 0 || j >= s.breaks.size()) throw std::out_of_range("gap_geometry: break index");
    const double gap = s.breaks[j] - s.breaks[j - 1];
    GapGeometry g;
    g.n = static_cast<unsigned>(std::ceil(gap));
    g.f = static_cast<double>(g.n) - gap;
    const SegmentationInfo seg = segmentation(s, grid);
    g.delta = grid.time(seg.iotas[j - 1]) - s.breaks[j - 1];
    return g;
}

CategoryId classify_gap(double nu_prev, double nu_j, double sigma_max, const GapGeometry& geom) {
    if (geom.n != 2) throw std::invalid_argument("classify_gap: gap must span two samples");
    if (!(geom.f > 0.0 && geom.f < 0.5))
        throw std::invalid_argument("classify_gap: fractional part outside (0, 0.5)");
    const double wp = sigma_max * nu_prev;
    const double wj = sigma_max * nu_j;
    const double f = geom.f;
    const auto tie = [](double a, double b) { return std::fabs(a - b) < kEdgeTol; };
    if (tie(wp + wj, 1.0 - f) || tie(wp, f) || tie(wj, f) || tie(wp, f + wj))
        throw std::domain_error("classify_gap: window edge ties a category boundary");
    CategoryId c;
    if (wp + wj > 1.0 - f) {
        c.category = wp < f ? 1 : 3;
        c.sub = wj < f ? 1 : 2;
    } else {
        c.category = wp < f ? 2 : (wp < f + wj ? 4 : 5);
    }
    return c;
}

namespace {

struct TableRow {
    double lo, hi;
    int follow;  // 0 terminal, else sub-case code to dispatch into
    std::vector<TokenSet> segment;
    std::vector<TokenSet> next_opening;
    const char* tag;
};

// The four tabulated sub-cases, keyed 11/12/31/32.  Intervals are in units
// of T over (0, 1); rows whose interval is empty in the given geometry are
// skipped by the caller.
std::vector<TableRow> parse_table(int code, double wp, double wj, double f) {
    const TokenSet A{Token::A}, F1{Token::F1}, F2{Token::F2}, S1{Token::S1}, S2{Token::S2};
    const TokenSet P1{Token::P1}, P2{Token::P2}, P3{Token::P3};
    const TokenSet F1orP1{Token::F1, Token::P1}, S2orP3{Token::S2, Token::P3};
    const double g = 1.0 - f;
    switch (code) {
        case 11:
            return {{0.0, g - wj, 0, {F1, F2}, {A}, "1.1/1"},
                    {g - wj, wp, 0, {P1, P2}, {P3}, "1.1/2"},
                    {wp, g, 0, {A, S1}, {S2}, "1.1/3"},
                    {g, 1.0 - wp, 0, {A}, {F1orP1}, "1.1/4"},
                    {1.0 - wp, g + wj, 0, {S2orP3}, {F1orP1}, "1.1/5"},
                    {g + wj, 1.0, 0, {S2orP3}, {A}, "1.1/6"}};
        case 12:
            return {{0.0, wj - f, 0, {F1, F2}, {F1orP1}, "1.2/1"},
                    {wj - f, g - wj, 0, {F1, F2}, {A}, "1.2/2"},
                    {g - wj, 1.0 - wp, 11, {}, {}, "1.2/3"},
                    {1.0 - wp, 1.0, 0, {S2orP3}, {F1orP1}, "1.2/4"}};
        case 31:
            return {{0.0, wp, 11, {}, {}, "3.1/1"},
                    {wp, 1.0 - wp, 0, {A, S1}, {S2}, "3.1/2"},
                    {1.0 - wp, g, 0, {S2orP3, S1}, {S2}, "3.1/3"},
                    {g, g + wj, 0, {S2orP3}, {F1orP1}, "3.1/4"},
                    {g + wj, 1.0, 0, {S2orP3}, {A}, "3.1/5"}};
        case 32:
            return {{0.0, g - wj, 12, {}, {}, "3.2/1"},
                    {g - wj, g, 31, {}, {}, "3.2/2"},
                    {g, 1.0, 0, {S2orP3}, {F1orP1}, "3.2/3"}};
        default:
            return {};
    }
}

}  // namespace

ParsePrediction predict_parse(const CategoryId& cat, const GapGeometry& geom, double nu_prev,
                              double nu_j, double sigma_max) {
    ParsePrediction out;
    if (geom.n != 2) {
        out.supported = false;
        out.reason = "gaps spanning three or more samples are not tabulated";
        return out;
    }
    if (cat.category != 1 && cat.category != 3) {
        out.supported = false;
        out.reason = "category " + std::to_string(cat.category) + " has no parse table";
        return out;
    }
    const double wp = sigma_max * nu_prev;
    const double wj = sigma_max * nu_j;
    int code = cat.category * 10 + cat.sub;
    for (int depth = 0; depth < 4; ++depth) {
        const TableRow* hit = nullptr;
        const auto rows = parse_table(code, wp, wj, geom.f);
        for (const auto& row : rows) {
            if (row.lo >= row.hi) continue;
            if (std::fabs(geom.delta - row.lo) < kEdgeTol ||
                std::fabs(geom.delta - row.hi) < kEdgeTol)
                throw std::domain_error("predict_parse: sample offset ties an interval endpoint");
            if (geom.delta > row.lo && geom.delta < row.hi) {
                hit = &row;
                break;
            }
        }
        if (hit == nullptr)
            throw std::domain_error("predict_parse: sample offset outside every interval");
        if (hit->follow == 0) {
            out.segment = hit->segment;
            out.next_opening = hit->next_opening;
            out.interval = hit->tag;
            return out;
        }
        code = hit->follow;
    }
    throw std::logic_error("predict_parse: table dispatch did not terminate");
}

}  // namespace qsr
