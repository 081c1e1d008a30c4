#include "qsr/recovery.hpp"

#include <cassert>
#include <numeric>
#include <optional>
#include <sstream>

// Collaborative parse of two difference sequences taken from the same signal
// on different grids.  Each sequence is a chain of clusters, one or two
// clusters per step: a step shows up as a single entry (A), as a split pair
// (F1,F2 falling, S1,S2 rising), or commingled with its successor in a triple
// (P1,P2,P3).  A matcher fires only when the cluster reading it commits is
// the only one compatible with the other sequence; everything here is exact
// integer arithmetic, so a fired match is a proof, not a guess.

namespace qsr {
namespace {

Counts abs_c(Counts v) { return v < 0 ? -v : v; }

Counts total(const DifferenceSequence& d) {
    return std::accumulate(d.begin(), d.end(), Counts{0});
}

// Step values s with a = v*s, v in (1/2,1): the open interval (a, 2a) as a
// closed integer range.  Empty for |a| == 1, and never contains a, 2a, or 0.
CountsInterval share_window(Counts a) {
    if (a > 0) return {a + 1, 2 * a - 1};
    return {2 * a + 1, a - 1};
}

// First-step values for which the triple's trailing entry c is the larger
// share of the SECOND step: sum3 - s must land in share_window(c).
CountsInterval co_window(Counts sum3, Counts c) {
    CountsInterval w = share_window(c);
    return {sum3 - w.hi, sum3 - w.lo};
}

// A split pair has two nonzero same-sign entries of distinct magnitude; the
// larger-first form is F, the smaller-first form is S.  Equal magnitudes
// would mean an exact half split, which quantization excludes.
bool valid_pair(Counts a, Counts b) {
    return a != 0 && b != 0 && sign(a) == sign(b) && abs_c(a) != abs_c(b);
}

// Triple shape for two commingled steps: nonzero rim, dominant head.
// The middle entry may vanish.
bool commingle_shaped(Counts a, Counts b, Counts c) {
    return a != 0 && c != 0 && abs_c(a) > abs_c(b);
}

CountsInterval commingle_first_window(Counts a, Counts b, Counts c) {
    return intersect(share_window(a), co_window(a + b + c, c));
}

void split_tokens(Counts p, Counts q, Token* out) {
    if (abs_c(p) > abs_c(q)) {
        out[0] = Token::F1;
        out[1] = Token::F2;
    } else {
        out[0] = Token::S1;
        out[1] = Token::S2;
    }
}

struct Side {
    const DifferenceSequence* d = nullptr;
    TokenSeq labels;
    std::size_t cur = 0;   // next unconsumed entry
    std::size_t step = 0;  // next unexplained step

    std::size_t size() const { return d->size(); }
    Counts at(std::size_t i) const { return (*d)[i]; }
    Counts head() const { return at(cur); }
    bool done() const { return cur == size(); }
    void skip_zeros() {
        while (cur < size() && at(cur) == 0) ++cur;
    }
};

enum class ClusterKind { kA, kF, kS, kCM };

struct Candidate {
    ClusterKind kind;
    CountsInterval vals;  // possible values of the step the cluster opens
};

struct Engine {
    Side s[2];
    std::vector<CountsInterval> gd;
    // (first index, exact pair sum) for steps committed only as a bounded split
    std::vector<std::pair<std::size_t, Counts>> split_sums;
    std::vector<std::string> trace;
    std::string ambiguity;  // latest elimination that saw several readings

    bool aligned() const { return s[0].step == s[1].step; }
    int laggard() const { return s[0].step < s[1].step ? 0 : 1; }

    // Value of an already committed step; exact by construction (bounded
    // splits always advance both sides past themselves).
    Counts known(std::size_t k) const {
        assert(k < gd.size() && gd[k].exact());
        return gd[k].lo;
    }

    void put_exact(std::size_t k, Counts v) {
        if (k < gd.size()) {
            if (gd[k].lo != v || gd[k].hi != v) {
                std::ostringstream m;
                m << "step " << k << " resolved twice with different values: " << gd[k].lo
                  << " vs " << v;
                throw InconsistentInputsError(m.str());
            }
            return;
        }
        assert(k == gd.size());
        gd.push_back({v, v});
    }

    void put_split(CountsInterval first, Counts sum) {
        split_sums.emplace_back(gd.size(), sum);
        gd.push_back(first);
        gd.push_back({sum - first.hi, sum - first.lo});
    }

    void commit(int si, std::initializer_list<Token> toks, std::size_t steps) {
        Side& sd = s[si];
        for (Token t : toks) sd.labels[sd.cur++] = t;
        sd.step += steps;
    }

    void note(const char* id) { trace.emplace_back(id); }
    void note(std::string id) { trace.push_back(std::move(id)); }
};

// --- matchers, in scan order ------------------------------------------------

// Identical leading entries, or the laggard's entry equal to the known step.
bool m_equal(Engine& e) {
    if (e.aligned()) {
        if (e.s[0].head() != e.s[1].head()) return false;
        e.put_exact(e.s[0].step, e.s[0].head());
        e.commit(0, {Token::A}, 1);
        e.commit(1, {Token::A}, 1);
        e.note("equal");
        return true;
    }
    int li = e.laggard();
    Side& lag = e.s[li];
    if (lag.head() != e.known(lag.step)) return false;
    e.commit(li, {Token::A}, 1);
    e.note("equal");
    return true;
}

// One side's single entry equals the sum of a split pair on the other side;
// staggered form: the laggard's pair sums to the known step.
bool m_one_two(Engine& e) {
    auto pair_sum = [](const Side& sd) -> std::optional<Counts> {
        if (sd.cur + 1 >= sd.size()) return std::nullopt;
        Counts p = sd.at(sd.cur), q = sd.at(sd.cur + 1);
        if (!valid_pair(p, q)) return std::nullopt;
        return p + q;
    };
    Token pt[2];
    if (e.aligned()) {
        for (int one : {0, 1}) {
            const Side& sg = e.s[one];
            const Side& pr = e.s[1 - one];
            auto sum = pair_sum(pr);
            if (!sum || *sum != sg.head()) continue;
            e.put_exact(sg.step, sg.head());
            split_tokens(pr.head(), pr.at(pr.cur + 1), pt);
            e.commit(one, {Token::A}, 1);
            e.commit(1 - one, {pt[0], pt[1]}, 1);
            e.note("one-two");
            return true;
        }
        return false;
    }
    int li = e.laggard();
    Side& lag = e.s[li];
    auto sum = pair_sum(lag);
    if (!sum || *sum != e.known(lag.step)) return false;
    split_tokens(lag.head(), lag.at(lag.cur + 1), pt);
    e.commit(li, {pt[0], pt[1]}, 1);
    e.note("one-two");
    return true;
}

// A split pair on each side with a common sum.
bool m_two_two(Engine& e) {
    if (!e.aligned()) return false;
    const Side& a = e.s[0];
    const Side& b = e.s[1];
    if (a.cur + 1 >= a.size() || b.cur + 1 >= b.size()) return false;
    Counts a1 = a.head(), a2 = a.at(a.cur + 1);
    Counts b1 = b.head(), b2 = b.at(b.cur + 1);
    if (!valid_pair(a1, a2) || !valid_pair(b1, b2) || a1 + a2 != b1 + b2) return false;
    Token ta[2], tb[2];
    split_tokens(a1, a2, ta);
    split_tokens(b1, b2, tb);
    e.put_exact(a.step, a1 + a2);
    e.commit(0, {ta[0], ta[1]}, 1);
    e.commit(1, {tb[0], tb[1]}, 1);
    e.note("two-two");
    return true;
}

// A commingled triple on one side against two split pairs on the other
// (zeros allowed between the pairs).  The pair sums give both steps exactly;
// they must land inside the triple's admissible split, which also rules out
// lookalike shapes that are really a pair followed by a single entry.
bool m_merge_four(Engine& e) {
    if (!e.aligned()) return false;
    for (int ci : {0, 1}) {
        const Side& cm = e.s[ci];
        const Side& q = e.s[1 - ci];
        if (cm.cur + 2 >= cm.size()) continue;
        Counts a = cm.head(), b = cm.at(cm.cur + 1), c = cm.at(cm.cur + 2);
        if (!commingle_shaped(a, b, c)) continue;
        CountsInterval w = commingle_first_window(a, b, c);
        if (w.empty()) continue;
        if (q.cur + 1 >= q.size()) continue;
        Counts q1 = q.head(), q2 = q.at(q.cur + 1);
        if (!valid_pair(q1, q2)) continue;
        std::size_t r = q.cur + 2;
        while (r < q.size() && q.at(r) == 0) ++r;
        if (r + 1 >= q.size()) continue;
        Counts q3 = q.at(r), q4 = q.at(r + 1);
        if (!valid_pair(q3, q4)) continue;
        if (q1 + q2 + q3 + q4 != a + b + c) continue;
        Counts g1 = q1 + q2, g2 = q3 + q4;
        if (!w.contains(g1) || !share_window(c).contains(g2)) continue;
        e.put_exact(cm.step, g1);
        e.put_exact(cm.step + 1, g2);
        e.commit(ci, {Token::P1, Token::P2, Token::P3}, 2);
        Token t1[2], t2[2];
        split_tokens(q1, q2, t1);
        split_tokens(q3, q4, t2);
        e.commit(1 - ci, {t1[0], t1[1]}, 1);
        e.s[1 - ci].skip_zeros();
        e.commit(1 - ci, {t2[0], t2[1]}, 1);
        e.note("merge-four");
        return true;
    }
    return false;
}

// Three-entry readings of a triple: a single entry plus a pair in either
// order, or a commingled pair of steps.  Each reading pins the value of the
// first step it covers; all cover exactly two steps of the common sum.
struct TripleForm {
    ClusterKind first;       // kind of the opening cluster
    CountsInterval vals;     // possible first-step values
    Token toks[3];
};

void triple_forms(Counts a, Counts b, Counts c, std::vector<TripleForm>& out) {
    out.clear();
    if (a != 0 && valid_pair(b, c)) {
        TripleForm f{ClusterKind::kA, {a, a}, {Token::A, Token::Z, Token::Z}};
        split_tokens(b, c, f.toks + 1);
        out.push_back(f);
    }
    if (valid_pair(a, b) && c != 0) {
        TripleForm f{abs_c(a) > abs_c(b) ? ClusterKind::kF : ClusterKind::kS,
                     {a + b, a + b},
                     {Token::Z, Token::Z, Token::A}};
        split_tokens(a, b, f.toks);
        out.push_back(f);
    }
    if (commingle_shaped(a, b, c)) {
        CountsInterval w = commingle_first_window(a, b, c);
        if (!w.empty())
            out.push_back({ClusterKind::kCM, w, {Token::P1, Token::P2, Token::P3}});
    }
}

// Triple against triple with a common sum.  Readings that no reading of the
// other side can meet are dropped; a single surviving value commits both
// sides exactly, two surviving commingled windows commit their intersection
// as bounds.  Anything else stays open.
bool m_three_three(Engine& e) {
    if (!e.aligned()) return false;
    const Side& a = e.s[0];
    const Side& b = e.s[1];
    if (a.cur + 2 >= a.size() || b.cur + 2 >= b.size()) return false;
    Counts a1 = a.head(), a2 = a.at(a.cur + 1), a3 = a.at(a.cur + 2);
    Counts b1 = b.head(), b2 = b.at(b.cur + 1), b3 = b.at(b.cur + 2);
    Counts sum = a1 + a2 + a3;
    if (sum != b1 + b2 + b3) return false;
    static thread_local std::vector<TripleForm> fa, fb;
    triple_forms(a1, a2, a3, fa);
    triple_forms(b1, b2, b3, fb);
    if (fa.empty() || fb.empty()) return false;

    const TripleForm* pick_a = nullptr;
    const TripleForm* pick_b = nullptr;
    CountsInterval meet{1, 0};
    int n_pairs = 0;
    bool all_cm = true;
    for (const TripleForm& x : fa) {
        for (const TripleForm& y : fb) {
            CountsInterval m = intersect(x.vals, y.vals);
            if (m.empty()) continue;
            ++n_pairs;
            pick_a = &x;
            pick_b = &y;
            meet = m;
            if (x.first != ClusterKind::kCM || y.first != ClusterKind::kCM) all_cm = false;
        }
    }
    if (n_pairs == 0) return false;
    if (n_pairs > 1) {
        // Different pairings pin different values: genuinely ambiguous.
        std::ostringstream m;
        m << "several readings share the sum " << sum << " at d0[" << a.cur << "], d1[" << b.cur
          << "]";
        e.ambiguity = m.str();
        return false;
    }
    if (!meet.exact()) {
        // One pairing, a range of values: both sides commingled.  Commit the
        // split as bounds; the sum stays exact.
        assert(all_cm);
        (void)all_cm;
        e.put_split(meet, sum);
        e.commit(0, {Token::P1, Token::P2, Token::P3}, 2);
        e.commit(1, {Token::P1, Token::P2, Token::P3}, 2);
        e.note("three-three-bounds");
        return true;
    }
    Counts v = meet.lo;
    e.put_exact(a.step, v);
    e.put_exact(a.step + 1, sum - v);
    e.commit(0, {pick_a->toks[0], pick_a->toks[1], pick_a->toks[2]}, 2);
    e.commit(1, {pick_b->toks[0], pick_b->toks[1], pick_b->toks[2]}, 2);
    e.note("three-three");
    return true;
}

// Head clusters of both sides, cross-eliminated.  A side whose only
// surviving reading has a pinned value gets committed; the other side
// catches up through the staggered matchers.
bool m_head_commit(Engine& e) {
    if (!e.aligned()) return false;
    std::vector<Candidate> cand[2];
    for (int i : {0, 1}) {
        const Side& sd = e.s[i];
        cand[i].push_back({ClusterKind::kA, {sd.head(), sd.head()}});
        if (sd.cur + 1 < sd.size() && valid_pair(sd.head(), sd.at(sd.cur + 1))) {
            Counts p = sd.head(), q = sd.at(sd.cur + 1);
            cand[i].push_back(
                {abs_c(p) > abs_c(q) ? ClusterKind::kF : ClusterKind::kS, {p + q, p + q}});
        }
        if (sd.cur + 2 < sd.size()) {
            Counts p = sd.head(), q = sd.at(sd.cur + 1), r = sd.at(sd.cur + 2);
            if (commingle_shaped(p, q, r)) {
                CountsInterval w = commingle_first_window(p, q, r);
                if (!w.empty()) cand[i].push_back({ClusterKind::kCM, w});
            }
        }
    }
    std::vector<Candidate> alive[2];
    for (int i : {0, 1}) {
        for (const Candidate& x : cand[i]) {
            for (const Candidate& y : cand[1 - i]) {
                if (!intersect(x.vals, y.vals).empty()) {
                    alive[i].push_back(x);
                    break;
                }
            }
        }
    }
    if (alive[0].empty() || alive[1].empty()) return false;

    auto unique_exact = [](const std::vector<Candidate>& v) {
        return v.size() == 1 && v[0].vals.exact();
    };
    int who = -1;
    if (unique_exact(alive[0]) && unique_exact(alive[1])) {
        // Mutual survival of two pinned readings means equal values; prefer
        // the one that commits a single step so the other side can chain.
        who = (alive[1][0].kind != ClusterKind::kCM && alive[0][0].kind == ClusterKind::kCM) ? 1
                                                                                            : 0;
    } else if (unique_exact(alive[0])) {
        who = 0;
    } else if (unique_exact(alive[1])) {
        who = 1;
    } else {
        if (alive[0].size() > 1 || alive[1].size() > 1) {
            std::ostringstream m;
            m << "several head readings survive at d0[" << e.s[0].cur << "], d1[" << e.s[1].cur
              << "]";
            e.ambiguity = m.str();
        }
        return false;
    }

    const Candidate& c = alive[who][0];
    Counts v = c.vals.lo;
    switch (c.kind) {
        case ClusterKind::kA:
            e.put_exact(e.s[who].step, v);
            e.commit(who, {Token::A}, 1);
            e.note("head-commit:A");
            break;
        case ClusterKind::kF:
            e.put_exact(e.s[who].step, v);
            e.commit(who, {Token::F1, Token::F2}, 1);
            e.note("head-commit:F");
            break;
        case ClusterKind::kS:
            e.put_exact(e.s[who].step, v);
            e.commit(who, {Token::S1, Token::S2}, 1);
            e.note("head-commit:S");
            break;
        case ClusterKind::kCM: {
            const Side& sd = e.s[who];
            Counts sum = sd.head() + sd.at(sd.cur + 1) + sd.at(sd.cur + 2);
            e.put_exact(sd.step, v);
            e.put_exact(sd.step + 1, sum - v);
            e.commit(who, {Token::P1, Token::P2, Token::P3}, 2);
            e.note("head-commit:P");
            break;
        }
    }
    return true;
}

// The laggard's commingled triple resolved against the known step; binds the
// step after it as well, which must agree with anything already committed.
bool m_carry(Engine& e) {
    if (e.aligned()) return false;
    int li = e.laggard();
    Side& lag = e.s[li];
    if (lag.cur + 2 >= lag.size()) return false;
    Counts a = lag.head(), b = lag.at(lag.cur + 1), c = lag.at(lag.cur + 2);
    if (!commingle_shaped(a, b, c)) return false;
    CountsInterval w = commingle_first_window(a, b, c);
    Counts v = e.known(lag.step);
    if (!w.contains(v)) return false;
    Counts next = a + b + c - v;
    if (!share_window(c).contains(next)) return false;
    e.put_exact(lag.step + 1, next);
    e.commit(li, {Token::P1, Token::P2, Token::P3}, 2);
    e.note("carry");
    return true;
}

using Matcher = bool (*)(Engine&);
constexpr Matcher kMatchers[] = {m_equal,        m_one_two,     m_two_two, m_merge_four,
                                 m_three_three,  m_head_commit, m_carry};
constexpr std::size_t kNumMatchers = sizeof(kMatchers) / sizeof(kMatchers[0]);

}  // namespace

RecoveryResult recover(const DifferenceSequence& d0, const DifferenceSequence& d1,
                       const RecoverOptions& opts) {
    if (d0 == d1) throw IdenticalInputsError{};
    if (total(d0) != 0 || total(d1) != 0)
        throw InconsistentInputsError("difference totals must vanish");

    Engine e;
    e.s[0].d = &d0;
    e.s[1].d = &d1;
    e.s[0].labels.assign(d0.size(), Token::Z);
    e.s[1].labels.assign(d1.size(), Token::Z);

    RecoveryResult out;
    std::size_t start = 0;
    for (;;) {
        e.s[0].skip_zeros();
        e.s[1].skip_zeros();
        bool f0 = e.s[0].done(), f1 = e.s[1].done();
        if (f0 && f1) {
            if (e.s[0].step != e.s[1].step)
                throw InconsistentInputsError("sequences explain different numbers of steps");
            out.complete = true;
            break;
        }
        // A finished side pins the step count; the other may still be catching
        // up on already known steps, but may not get ahead of it.
        if (f0 && e.s[1].step >= e.s[0].step)
            throw InconsistentInputsError("first sequence ends before the second is explained");
        if (f1 && e.s[0].step >= e.s[1].step)
            throw InconsistentInputsError("second sequence ends before the first is explained");

        std::size_t fired = kNumMatchers;
        for (std::size_t i = start; i < kNumMatchers; ++i) {
            if (kMatchers[i](e)) {
                fired = i;
                break;
            }
        }
        if (fired == kNumMatchers) {
            std::ostringstream m;
            m << "no match at d0[" << e.s[0].cur << "], d1[" << e.s[1].cur << "]";
            e.s[0].done() ? (m << " (first side done)") : (m << "; d0 head " << e.s[0].head());
            e.s[1].done() ? (m << " (second side done)") : (m << "; d1 head " << e.s[1].head());
            out.diagnostics.push_back(m.str());
            if (!e.ambiguity.empty()) out.diagnostics.push_back("ambiguous: " + e.ambiguity);
            break;
        }
        start = opts.reset_after_match ? 0 : fired;
    }

    out.labels0 = std::move(e.s[0].labels);
    out.labels1 = std::move(e.s[1].labels);
    out.trace = std::move(e.trace);
    out.gd = e.gd;

    // Amplitudes relative to the leading level: cumulative sums of the steps.
    // Across a bounded split only the middle level is loose; the sum of the
    // split is pinned, so the level after it is exact again.
    Counts base = 0;
    std::size_t si = 0;
    for (std::size_t k = 0; k < e.gd.size(); ++k) {
        CountsInterval g;
        if (si < e.split_sums.size() && e.split_sums[si].first == k) {
            g = {base + e.gd[k].lo, base + e.gd[k].hi};
        } else if (si < e.split_sums.size() && e.split_sums[si].first + 1 == k) {
            base += e.split_sums[si].second;
            ++si;
            g = {base, base};
        } else {
            base += e.gd[k].lo;
            g = {base, base};
        }
        bool last = (k + 1 == e.gd.size());
        if (!last || !out.complete) out.amplitudes.push_back(g);
    }
    return out;
}

std::pair<CountsInterval, CountsInterval> commingle_split_bounds(
    const std::array<Counts, 3>& t0, const std::array<Counts, 3>& t1) {
    for (const auto& t : {t0, t1}) {
        if (!commingle_shaped(t[0], t[1], t[2]))
            throw std::invalid_argument("triple is not commingle-shaped");
    }
    Counts sum = t0[0] + t0[1] + t0[2];
    if (sum != t1[0] + t1[1] + t1[2]) throw std::invalid_argument("triple sums differ");
    CountsInterval w = intersect(commingle_first_window(t0[0], t0[1], t0[2]),
                                 commingle_first_window(t1[0], t1[1], t1[2]));
    if (w.empty()) throw std::invalid_argument("no common split of the two triples");
    return {w, {sum - w.hi, sum - w.lo}};
}

}  // namespace qsr
