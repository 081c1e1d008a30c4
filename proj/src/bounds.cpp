#include "qsr/bounds.hpp"

#include <stdexcept>
#include <string>

namespace qsr {

BreakSide break_side(Token t) {
    switch (t) {
        case Token::A:
            return BreakSide::kBetween;
        case Token::F1:
        case Token::P1:
            return BreakSide::kBefore;
        case Token::S2:
        case Token::P3:
            return BreakSide::kAfter;
        default:
            throw std::invalid_argument(std::string("not an anchor token: ") + token_name(t));
    }
}

std::vector<Anchor> anchors(const TokenSeq& labels) {
    std::vector<Anchor> out;
    const auto expect = [&](std::size_t i, Token t) {
        if (i >= labels.size() || labels[i] != t)
            throw std::invalid_argument(std::string("malformed labels: ") + token_name(t) +
                                        " missing at entry " + std::to_string(i));
    };
    for (std::size_t i = 0; i < labels.size(); ++i) {
        switch (labels[i]) {
            case Token::Z:
                break;
            case Token::A:
                out.push_back({i, BreakSide::kBetween});
                break;
            case Token::F1:
                expect(i + 1, Token::F2);
                out.push_back({i, BreakSide::kBefore});
                i += 1;
                break;
            case Token::S1:
                expect(i + 1, Token::S2);
                out.push_back({i + 1, BreakSide::kAfter});
                i += 1;
                break;
            case Token::P1:
                expect(i + 1, Token::P2);
                expect(i + 2, Token::P3);
                out.push_back({i, BreakSide::kBefore});
                out.push_back({i + 2, BreakSide::kAfter});
                i += 2;
                break;
            default:
                throw std::invalid_argument(std::string("malformed labels: stray ") +
                                            token_name(labels[i]) + " at entry " +
                                            std::to_string(i));
        }
    }
    return out;
}

LocationInterval locate(BreakSide side, std::size_t iota, double t_first, double nu,
                        double sigma_max) {
    const double w = nu * sigma_max;
    const double at = t_first + static_cast<double>(iota);
    switch (side) {
        case BreakSide::kBefore:
            return {at - w, at};
        case BreakSide::kAfter:
            return {at - 1.0, at - 1.0 + w};
        case BreakSide::kBetween:
            return {at - 1.0 + w, at - w};
    }
    throw std::invalid_argument("locate: bad side");
}

LocationInterval distance_bounds(BreakSide x, BreakSide y, std::size_t iota_j,
                                 std::size_t iota_jk, double nu_j, double nu_jk,
                                 double sigma_max, bool alt_forms) {
    if (iota_jk <= iota_j)
        throw std::invalid_argument("distance_bounds: anchors out of order");
    const double d = static_cast<double>(iota_jk - iota_j);
    const double wj = nu_j * sigma_max;
    const double wk = nu_jk * sigma_max;
    using S = BreakSide;
    if (x == S::kBetween && y == S::kBetween) return {d - 1.0 + wj + wk, d + 1.0 - wj - wk};
    if (x == S::kBetween && y == S::kBefore) return {d - wk, d + 1.0 - wj};
    if (x == S::kBetween && y == S::kAfter)
        // alt: treating the later break's radius like the earlier one's
        // cancels the correction term; the bracket then misses breaks that
        // sit deep in their windows.
        return {d - 1.0 + wj, alt_forms ? d : d + wk - wj};
    if (x == S::kBefore && y == S::kBetween) return {d - 1.0 + wk, d + wj - wk};
    if (x == S::kBefore && y == S::kBefore) return {d - wk, d + wj};
    if (x == S::kBefore && y == S::kAfter) return {d - 1.0, d - 1.0 + wj + wk};
    if (x == S::kAfter && y == S::kBetween)
        // alt: adding the radii instead of differencing them overshoots the
        // true minimum distance.
        return {alt_forms ? d + wk + wj : d + wk - wj, d + 1.0 - wk};
    if (x == S::kAfter && y == S::kBefore) return {d + 1.0 - wj - wk, d + 1.0};
    return {d - wj, d + wk};  // kAfter, kAfter
}

LocationInterval tighten_with_min_gap(LocationInterval in, std::size_t k, double min_gap) {
    LocationInterval out = in;
    const double floor_lo = static_cast<double>(k) * min_gap;
    if (floor_lo > out.lo) out.lo = floor_lo;
    if (!(out.lo < out.hi))
        throw std::domain_error("tighten_with_min_gap: interval became empty");
    return out;
}

}  // namespace qsr
