#pragma once

#include "drt/certificate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace drt {

// ---------------------------------------------------------------------------------------------
// More 1s than 2s

inline int prop213_coloring(const Word& s) {
    if (!in_fin(s, 3)) throw std::invalid_argument("prop213_coloring: " + format_word(s) + " is not in (ω)^3_fin");
    auto ones = std::count(s.begin(), s.end(), 1u);
    auto twos = std::count(s.begin(), s.end(), 2u);
    return ones > twos ? 1 : 0;
}

struct Prop213Witnesses {
    std::size_t i = 0, N = 0, h = 0;
    Word x, y;  // both coarsenings of p↾μ^p(N+1)
    int colorX = 0, colorY = 0;
};

// x: B_i ; B_{i+1} ∪ ... ∪ B_N ; cut at B_{N+1}.  y: B_i..B_N without B_h ; B_h ; cut at B_{N+1},
// with h minimising |B_h ∩ [0, μ^p(N+1))|.
inline Prop213Witnesses prop213_witnesses(const Prefix& p, std::optional<std::size_t> block = std::nullopt) {
    if (p.tail == Tail::Undeclared)
        throw std::invalid_argument("prop213_witnesses: no nonzero block is known to be finite under an undeclared tail");
    std::size_t i = block.value_or(1);
    if (i == 0) throw std::invalid_argument("prop213_witnesses: block 0 is not a nonzero block");
    if (i >= p.blocks_started() && p.tail != Tail::Discrete)
        throw ExtensionRequired(p.size() + 1, "block " + std::to_string(i) + " has not started");
    std::size_t cut0 = p.tail == Tail::Discrete ? std::max(p.size(), mu(p, i) + 1) : p.size();
    Word w0 = p.take(cut0);
    std::size_t size_i = static_cast<std::size_t>(std::count(w0.begin(), w0.end(), i));
    Prop213Witnesses out;
    out.i = i;
    out.N = i + 2 + size_i;
    std::size_t end = mu(p, out.N + 1);
    Word w = p.take(end);

    std::vector<std::size_t> sizes(out.N + 1, 0);
    for (std::size_t v : w) if (v <= out.N) ++sizes[v];
    out.h = i + 1;
    for (std::size_t j = i + 1; j <= out.N; ++j)
        if (sizes[j] < sizes[out.h]) out.h = j;

    out.x.assign(end, 0);
    out.y.assign(end, 0);
    for (std::size_t n = 0; n < end; ++n) {
        std::size_t b = w[n];
        if (b == i) out.x[n] = 1;
        else if (b > i && b <= out.N) out.x[n] = 2;
        if (b == out.h) out.y[n] = 2;
        else if (b >= i && b <= out.N) out.y[n] = 1;
    }
    out.colorX = prop213_coloring(out.x);
    out.colorY = prop213_coloring(out.y);
    if (out.colorX == out.colorY) throw std::logic_error("prop213_witnesses: both coarsenings got the same color");
    return out;
}

// ---------------------------------------------------------------------------------------------
// O_{a,b}: |σ| = b+1, μ^σ(1) = a, μ^σ(2) = b

inline bool in_O_ab(const Word& s, std::size_t a, std::size_t b) {
    return in_fin(s, 3) && s.size() == b + 1 && first_occurrence(s, 1) == a && first_occurrence(s, 2) == b;
}

// A partial injection known on [0, bound]; values past the bound are treated as absent.
struct InjectionPresentation {
    std::map<std::size_t, std::size_t> g;
    std::size_t bound = 0;
};

inline void validate(const InjectionPresentation& g) {
    std::set<std::size_t> seen;
    for (const auto& [t, v] : g.g) {
        if (t > g.bound) throw std::invalid_argument("injection table entry past its bound");
        if (!seen.insert(v).second) throw std::invalid_argument("injection repeats the value " + std::to_string(v));
    }
}

// ∃u ≤ a ∃ b < t ≤ s: g(t) = u; the least such t, if any.
inline std::optional<std::size_t> open_closed_trigger(const InjectionPresentation& g, std::size_t a, std::size_t b,
                                                      std::size_t s) {
    for (auto it = g.g.upper_bound(b); it != g.g.end() && it->first <= s; ++it)
        if (it->second <= a) return it->first;
    return std::nullopt;
}

// ⟨s, σ⟩ ∈ O iff σ ∈ O_{a,b} for some 0 < a < b < s with the trigger by stage s. The code lists σ
// itself (tag = its least stage) as a finite rule on words of length ≤ sBound.
inline OpenCode open_closed_gadget(const InjectionPresentation& g, std::size_t sBound) {
    validate(g);
    auto rule = [g, sBound](const Word& w) {
        if (w.size() < 3) return false;
        std::size_t b = w.size() - 1;
        if (first_occurrence(w, 2) != b) return false;
        std::size_t a = first_occurrence(w, 1);
        return open_closed_trigger(g, a, b, sBound).has_value();
    };
    return rule_code(3, rule, sBound, "open-closed");
}

// Every pair of decided block minima a < b must avoid the trigger for p to be homogeneous for Ō.
inline std::optional<std::pair<std::size_t, std::size_t>> open_closed_violation(const Prefix& p,
                                                                               const InjectionPresentation& g) {
    std::vector<std::size_t> mus = p.mu_table();
    for (std::size_t x = 1; x < mus.size(); ++x)
        for (std::size_t y = x + 1; y < mus.size(); ++y)
            if (open_closed_trigger(g, mus[x], mus[y], g.bound)) return std::make_pair(mus[x], mus[y]);
    return std::nullopt;
}

// Interval blocks whose next minimum passes every t with g(t) ≤ the current minimum.
inline Prefix open_closed_partition(const InjectionPresentation& g, std::size_t blocks) {
    std::vector<std::size_t> mins{0};
    std::size_t cur = g.g.empty() ? 1 : g.g.begin()->second + 1;
    mins.push_back(std::max<std::size_t>(cur, 1));
    while (mins.size() < blocks + 1) {
        std::size_t a = mins.back(), next = a + 1;
        for (const auto& [t, v] : g.g)
            if (v <= a) next = std::max(next, t + 1);
        mins.push_back(next);
    }
    Word w;
    for (std::size_t b = 0; b + 1 < mins.size(); ++b)
        while (w.size() < mins[b + 1]) w.push_back(b);
    w.push_back(mins.size() - 1);
    return Prefix(w, Tail::Undeclared);
}

// n ∈ range(g) iff ∃t ≤ μ^p(f(n)+1) with g(t) = n, where f(n) is the least m with μ^p(m) > n.
inline bool open_closed_decode(const Prefix& p, const InjectionPresentation& g, std::size_t n) {
    std::size_t m = 1;
    while (mu(p, m) <= n) ++m;
    std::size_t top = mu(p, m + 1);
    if (top > g.bound) throw ExtensionRequired(top + 1, "injection table ends before the decode bound");
    for (auto it = g.g.begin(); it != g.g.end() && it->first <= top; ++it)
        if (it->second == n) return true;
    return false;
}

// ---------------------------------------------------------------------------------------------
// Moduli: R = ∪{O_{a,b} : f(a) ≤ b}

// Strictly increasing table, continued linearly with the given slope.
struct ModulusFunction {
    std::vector<std::size_t> table;
    std::size_t slope = 1;

    std::size_t operator()(std::size_t n) const {
        if (n < table.size()) return table[n];
        std::size_t last = table.empty() ? 0 : table.back();
        std::size_t from = table.empty() ? 0 : table.size() - 1;
        return last + (n - from) * slope;
    }
};

inline void validate(const ModulusFunction& f) {
    if (f.slope == 0) throw std::invalid_argument("modulus slope must be positive");
    for (std::size_t n = 1; n < f.table.size(); ++n)
        if (f.table[n] <= f.table[n - 1]) throw std::invalid_argument("modulus table is not strictly increasing");
}

struct ModulusGadget {
    OpenCode R, Rbar;
};

inline ModulusGadget modulus_gadget(const ModulusFunction& f) {
    validate(f);
    auto side = [f](bool inside) {
        return [f, inside](const Word& w) {
            if (w.size() < 3 || first_occurrence(w, 2) != w.size() - 1) return false;
            return (f(first_occurrence(w, 1)) <= w.size() - 1) == inside;
        };
    };
    return {rule_code(3, side(true), std::nullopt, "modulus"), rule_code(3, side(false), std::nullopt, "modulus-complement")};
}

// A pair of decided block minima a < b with f(a) > b, i.e. a coarsening outside R.
inline std::optional<std::pair<std::size_t, std::size_t>> modulus_violation(const Prefix& p, const ModulusFunction& f) {
    std::vector<std::size_t> mus = p.mu_table();
    for (std::size_t x = 1; x < mus.size(); ++x)
        for (std::size_t y = x + 1; y < mus.size(); ++y)
            if (f(mus[x]) > mus[y]) return std::make_pair(mus[x], mus[y]);
    return std::nullopt;
}

// Claim 1: B_1^x = B_1^p and B_2^x = V for the first block V ≠ B_1 with min V ≥ f(μ^p(1)).
inline Word modulus_claim1_witness(const Prefix& p, const ModulusFunction& f) {
    std::size_t u = mu(p, 1);
    std::size_t m = 2;
    while (mu(p, m) < f(u)) {
        ++m;
        if (m >= p.blocks_started() && p.tail != Tail::Discrete)
            throw ExtensionRequired(std::max(p.size() + 1, f(u) + 1), "no decided block starts at or after f(μ(1))");
    }
    std::size_t v = mu(p, m);
    Word w = p.take(v + 1);
    Word x(v + 1, 0);
    for (std::size_t n = 0; n <= v; ++n) x[n] = w[n] == 1 ? 1 : (w[n] == m ? 2 : 0);
    return x;
}

// Claim 2: f(μ^p(n+1)) ≤ μ^p(n+2) for every decided n; the first n that fails.
inline std::optional<std::size_t> modulus_claim2_violation(const Prefix& p, const ModulusFunction& f) {
    std::vector<std::size_t> mus = p.mu_table();
    for (std::size_t n = 0; n + 2 < mus.size(); ++n)
        if (f(mus[n + 1]) > mus[n + 2]) return n;
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Diagonalising against a uniform procedure

// Thrown when a functional asks about a word its step budget does not reach.
struct BeyondUse : std::runtime_error {
    BeyondUse() : std::runtime_error("query beyond the current use bound") {}
};

struct OracleQuery {
    int side = 0;
    Word word;
    bool answer = false;
    bool operator==(const OracleQuery&) const = default;
};

// R_0, R_1 after `stage` rounds of the basic module (0^{2s+1}1 into R_0, 0^{2s+2}1 into R_1),
// optionally frozen: R_i kept, R_{1−i} flooded with every 0^t1 for t > 2s+2.
struct AdversaryOracle {
    std::size_t stage = 0;
    std::optional<int> frozenSide;
    std::size_t budget = 0;
    mutable std::vector<OracleQuery> log;

    bool member(int side, const Word& w) const {
        if (w.size() < 2 || w.back() != 1) return false;
        for (std::size_t n = 0; n + 1 < w.size(); ++n)
            if (w[n] != 0) return false;
        std::size_t t = w.size() - 1;
        if (t <= 2 * stage + 2) return (t % 2 == 1 ? 0 : 1) == side;
        return frozenSide && *frozenSide != side;
    }

    // Logged query; words longer than 2·budget+3 are past the use bound.
    bool query(int side, const Word& w) const {
        if (w.size() > 2 * budget + 3) throw BeyondUse();
        bool a = member(side, w);
        log.push_back({side, w, a});
        return a;
    }

    OpenCode code(int side) const {
        AdversaryOracle copy{stage, frozenSide, 0, {}};
        return rule_code(2, [copy, side](const Word& w) { return copy.member(side, w); }, std::nullopt,
                         side == 0 ? "R0" : "R1");
    }
};

// Δ_s: the committed output entries of a candidate partition under the given oracle and budget.
using Functional = std::function<std::vector<std::size_t>(const AdversaryOracle&, std::size_t budget)>;

struct AdversaryTranscript {
    std::string functional;
    std::string verdict;  // "diagonalized" or "not-total"
    std::size_t stage = 0, k = 0, maxStage = 0;
    int side = 0;
    std::vector<std::size_t> committed;
    std::vector<OracleQuery> queries;
    std::vector<std::size_t> extended;  // output under the final oracle used to find q_1
    std::size_t extendedBudget = 0;
    Word q0, q1;
};

namespace detail {

inline std::vector<std::size_t> run_functional(const Functional& d, AdversaryOracle& o, std::size_t budget) {
    o.budget = budget;
    o.log.clear();
    try {
        return d(o, budget);
    } catch (const BeyondUse&) {
        return {};
    }
}

// 0 < k < s with out(i) = 0 for i < k and out(k) = 1.
inline std::optional<std::size_t> committed_k(const std::vector<std::size_t>& out, std::size_t s) {
    for (std::size_t k = 0; k < out.size() && k < s; ++k) {
        if (out[k] == 0) continue;
        if (out[k] == 1 && k > 0) return k;
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace detail

inline AdversaryTranscript nonuniform_adversary(const Functional& delta, std::size_t maxStage, std::string name = {}) {
    AdversaryTranscript tr;
    tr.functional = std::move(name);
    tr.maxStage = maxStage;
    tr.verdict = "not-total";
    AdversaryOracle o;
    for (std::size_t s = 0; s <= maxStage; ++s) {
        o.stage = s;
        std::vector<std::size_t> out = detail::run_functional(delta, o, s);
        auto k = detail::committed_k(out, s);
        if (!k) continue;
        tr.stage = s;
        tr.k = *k;
        tr.side = *k % 2 == 1 ? 0 : 1;
        tr.committed = out;
        tr.queries = o.log;
        o.frozenSide = tr.side;
        tr.q0 = Word(*k, 0);
        tr.q0.push_back(1);
        // q_1 needs a block of Δ's output opening past 2s+2.
        for (std::size_t b = s; b <= maxStage; ++b) {
            std::vector<std::size_t> ext = detail::run_functional(delta, o, b);
            std::size_t common = std::min(ext.size(), out.size());
            if (!is_ordered(ext) || !std::equal(ext.begin(), ext.begin() + common, out.begin())) continue;
            std::size_t opened = 0;
            for (std::size_t n = 0; n < ext.size(); ++n) {
                if (ext[n] != opened) continue;
                if (n > 2 * s + 2) {
                    tr.extended = ext;
                    tr.extendedBudget = b;
                    tr.q1 = Word(n, 0);
                    tr.q1.push_back(1);
                    tr.verdict = "diagonalized";
                    return tr;
                }
                ++opened;
            }
        }
        return tr;
    }
    return tr;
}

struct ReplayVerdict {
    bool pass = false;
    std::string detail;
};

// Re-runs Δ against the final oracles and checks both witnesses against exact membership.
inline ReplayVerdict replay_transcript(const Functional& delta, const AdversaryTranscript& tr) {
    if (tr.verdict != "diagonalized") return {true, "no diagonalization claimed"};
    AdversaryOracle fin{tr.stage, tr.side, 0, {}};
    std::vector<std::size_t> again = detail::run_functional(delta, fin, tr.stage);
    if (again != tr.committed) return {false, "committed outputs differ on replay"};
    if (fin.log != tr.queries) return {false, "oracle answers differ on replay"};
    std::vector<std::size_t> ext = detail::run_functional(delta, fin, tr.extendedBudget);
    if (ext != tr.extended) return {false, "extended outputs differ on replay"};
    Word p(ext.begin(), ext.end());
    if (!is_ordered(p)) return {false, "output is not an ordered word"};
    // Both witnesses are 2-coarsenings of Δ's output.
    auto coarsens = [&](const Word& q) {
        if (q.size() > p.size()) return false;
        std::size_t last = q.size() - 1;
        for (std::size_t n = 0; n < last; ++n)
            if (p[n] == p[last]) return false;
        return true;
    };
    if (!coarsens(tr.q0) || !coarsens(tr.q1)) return {false, "a witness is not a coarsening of the output"};
    OpenCode Ri = fin.code(tr.side), Rj = fin.code(1 - tr.side);
    if (!cylinder_inside(Ri, tr.q0)) return {false, "q0 is not in R_i"};
    if (!cylinder_inside(Rj, tr.q1)) return {false, "q1 is not in R_{1-i}"};
    if (cylinder_inside(Rj, tr.q0) || cylinder_inside(Ri, tr.q1)) return {false, "a witness lies in both colors"};
    return {true, "q0 and q1 receive opposite colors"};
}

// Named functionals for the adversary.
inline std::map<std::string, Functional> builtin_functionals() {
    using V = std::vector<std::size_t>;
    std::map<std::string, Functional> m;
    auto discrete_after = [](std::size_t zeros, std::size_t len) {
        V v(zeros, 0);
        for (std::size_t b = 1; v.size() < len; ++b) v.push_back(b);
        return v;
    };
    // Least t ≤ 2·budget+2 with 0^t1 listed on the given side.
    auto least_listed = [](const AdversaryOracle& o, int side, std::size_t budget) -> std::optional<std::size_t> {
        for (std::size_t t = 1; t <= 2 * budget + 2; ++t) {
            Word w(t, 0);
            w.push_back(1);
            if (o.query(side, w)) return t;
        }
        return std::nullopt;
    };
    m["builtin:firstblock"] = [=](const AdversaryOracle&, std::size_t b) { return discrete_after(1, b + 2); };
    m["builtin:alternating"] = [](const AdversaryOracle&, std::size_t b) {
        V v;
        for (std::size_t i = 0; v.size() < b + 2; ++i) v.push_back(i % 2 == 0 ? 0 : i / 2 + 1);
        return v;
    };
    m["builtin:never"] = [](const AdversaryOracle&, std::size_t b) { return V(b, 0); };
    m["builtin:silent"] = [](const AdversaryOracle&, std::size_t) { return V{}; };
    m["builtin:late"] = [=](const AdversaryOracle&, std::size_t b) { return discrete_after(10, b + 2); };
    m["builtin:copycat"] = [=](const AdversaryOracle& o, std::size_t b) {
        auto t = least_listed(o, 0, b);
        return t ? discrete_after(*t, b + 2) : V{};
    };
    m["builtin:echo-r1"] = [=](const AdversaryOracle& o, std::size_t b) {
        auto t = least_listed(o, 1, b);
        return t ? discrete_after(*t, b + 2) : V{};
    };
    m["builtin:pairs"] = [](const AdversaryOracle&, std::size_t b) {
        V v{0};
        for (std::size_t i = 1; v.size() < b + 2; ++i) v.push_back((i + 1) / 2);
        return v;
    };
    m["builtin:squares"] = [](const AdversaryOracle&, std::size_t b) {
        V v;
        std::size_t blk = 0;
        for (std::size_t n = 0; v.size() < b + 2; ++n) {
            std::size_t r = 1;
            while ((r + 1) * (r + 1) <= n) ++r;
            if (n >= 1 && r * r == n) ++blk;
            v.push_back(n == 0 ? 0 : blk);
        }
        return v;
    };
    m["builtin:wrong-start"] = [](const AdversaryOracle&, std::size_t b) { return V(b, 1); };
    m["builtin:jump"] = [](const AdversaryOracle&, std::size_t b) {
        V v{0, 2};
        while (v.size() < b) v.push_back(0);
        return v;
    };
    m["builtin:waiter"] = [=](const AdversaryOracle&, std::size_t b) { return b < 50 ? V{} : discrete_after(3, b + 2); };
    m["builtin:beyond-max"] = [=](const AdversaryOracle&, std::size_t b) { return b < 300 ? V{} : discrete_after(1, b); };
    m["builtin:budget-k"] = [=](const AdversaryOracle&, std::size_t b) { return discrete_after(b / 3 + 1, b + 2); };
    m["builtin:query-heavy"] = [=](const AdversaryOracle& o, std::size_t b) {
        std::size_t ones = 0;
        for (std::size_t t = 1; t <= 2 * b + 2; ++t) {
            Word w(t, 0);
            w.push_back(1);
            ones += o.query(0, w) ? 1 : 0;
        }
        return discrete_after(ones + 1, b + 2);
    };
    m["builtin:overreach"] = [=](const AdversaryOracle& o, std::size_t b) {
        Word w(2 * b + 5, 0);
        w.push_back(1);
        o.query(1, w);
        return discrete_after(1, b + 2);
    };
    m["builtin:parity-flip"] = [=](const AdversaryOracle& o, std::size_t b) {
        Word w{0, 1};
        return discrete_after(o.query(0, w) ? 2 : 1, b + 2);
    };
    m["builtin:fibonacci"] = [](const AdversaryOracle&, std::size_t b) {
        V v;
        std::size_t f0 = 1, f1 = 2, blk = 0;
        for (std::size_t n = 0; v.size() < b + 2; ++n) {
            if (n == f0) {
                ++blk;
                std::size_t f2 = f0 + f1;
                f0 = f1;
                f1 = f2;
            }
            v.push_back(blk);
        }
        return v;
    };
    m["builtin:stubborn"] = [=](const AdversaryOracle&, std::size_t b) {
        return b > 100 ? discrete_after(b, b + 4) : V(b, 0);
    };
    m["builtin:finite-blocks"] = [](const AdversaryOracle&, std::size_t b) {
        V v{0, 1, 2};
        while (v.size() < b + 2) v.push_back(0);
        return v;
    };
    return m;
}

// ---------------------------------------------------------------------------------------------
// Finite sets and x_{F,n}

inline Prefix hindman_block_partition(const std::vector<std::size_t>& F, std::size_t n) {
    if (F.empty()) throw std::invalid_argument("hindman_block_partition: F must be nonempty");
    if (!std::is_sorted(F.begin(), F.end()) || std::adjacent_find(F.begin(), F.end()) != F.end())
        throw std::invalid_argument("hindman_block_partition: F must be listed strictly increasing");
    if (F.front() == 0) throw std::invalid_argument("hindman_block_partition: 0 ∉ F is required");
    if (n <= F.back()) throw std::invalid_argument("hindman_block_partition: n must exceed max F");
    Word w(n + 1, 0);
    for (std::size_t f : F) w[f] = 1;
    w[n] = 2;
    return Prefix(w, Tail::Zero);
}

// c(x_{U,n}) for a coloring of shapes.
using ShapeColoring = std::function<int(const std::vector<std::size_t>& U, std::size_t n)>;

inline ShapeColoring shape_coloring(std::function<int(const Word&)> c) {
    return [c](const std::vector<std::size_t>& U, std::size_t n) { return c(hindman_block_partition(U, n).entries); };
}

// Nonempty subsets of F, listed by the bitmask j+1.
inline std::vector<std::vector<std::size_t>> nonempty_subsets(const std::vector<std::size_t>& F) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << F.size()); ++mask) {
        std::vector<std::size_t> U;
        for (std::size_t b = 0; b < F.size(); ++b)
            if (mask >> b & 1) U.push_back(F[b]);
        out.push_back(std::move(U));
    }
    return out;
}

// (F, m, δ) stands for (F, I) with I = {n ≥ m : c(x_{F_j,n}) = δ(j) for all j}.
struct HindmanCondition {
    std::vector<std::size_t> F;
    std::size_t m = 0;
    std::vector<int> delta;
};

inline bool in_I(const HindmanCondition& cond, const ShapeColoring& c, std::size_t n) {
    if (n < cond.m) return false;
    auto subs = nonempty_subsets(cond.F);
    for (std::size_t j = 0; j < subs.size(); ++j)
        if (c(subs[j], n) != cond.delta[j]) return false;
    return true;
}

// The condition property over n ∈ F ∪ (I ∩ [m, searchBound]): m ∈ I and each U has one color past max U.
inline bool condition_holds(const HindmanCondition& cond, const ShapeColoring& c, std::size_t searchBound) {
    auto subs = nonempty_subsets(cond.F);
    if (subs.size() != cond.delta.size() || cond.F.empty() || cond.F.front() == 0) return false;
    if (cond.m <= cond.F.back() || !in_I(cond, c, cond.m)) return false;
    std::vector<std::size_t> ns(cond.F.begin(), cond.F.end());
    for (std::size_t n = cond.m; n <= searchBound; ++n)
        if (in_I(cond, c, n)) ns.push_back(n);
    for (std::size_t j = 0; j < subs.size(); ++j)
        for (std::size_t n : ns)
            if (n > subs[j].back() && c(subs[j], n) != cond.delta[j]) return false;
    return true;
}

// Pigeonhole over n in I ∩ (2, searchBound] for F = {1}.
inline HindmanCondition initial_condition(const ShapeColoring& c, std::size_t searchBound, std::size_t colors = 2) {
    std::vector<std::vector<std::size_t>> byColor(colors);
    for (std::size_t n = 2; n <= searchBound; ++n) {
        int col = c({1}, n);
        if (col < 0 || static_cast<std::size_t>(col) >= colors) throw std::invalid_argument("color out of range");
        byColor[col].push_back(n);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < colors; ++i)
        if (byColor[i].size() > byColor[best].size()) best = i;
    if (byColor[best].empty()) throw NoSolutionFound("initial condition: no n ≤ search bound");
    return {{1}, byColor[best].front(), {static_cast<int>(best)}};
}

// (F ∪ {m}, m', δ'): the most frequent color vector on the new subsets among n ∈ I, m < n ≤ searchBound.
inline HindmanCondition condition_extend(const HindmanCondition& cond, const ShapeColoring& c, std::size_t searchBound) {
    if (!condition_holds(cond, c, searchBound)) throw std::invalid_argument("condition_extend: input is not a condition");
    std::vector<std::size_t> F2 = cond.F;
    F2.push_back(cond.m);
    auto subs2 = nonempty_subsets(F2);
    std::size_t newBit = std::size_t{1} << cond.F.size();
    std::map<std::vector<int>, std::vector<std::size_t>> classes;
    for (std::size_t n = cond.m + 1; n <= searchBound; ++n) {
        if (!in_I(cond, c, n)) continue;
        std::vector<int> v;
        for (std::size_t j = 0; j < subs2.size(); ++j)
            if ((j + 1) & newBit) v.push_back(c(subs2[j], n));
        classes[v].push_back(n);
    }
    const std::vector<std::size_t>* best = nullptr;
    const std::vector<int>* bestKey = nullptr;
    for (const auto& [key, ns] : classes)
        if (!best || ns.size() > best->size()) best = &ns, bestKey = &key;
    if (!best)
        throw NoSolutionFound("condition_extend: no n in I past " + std::to_string(cond.m) + " within search bound " +
                              std::to_string(searchBound));
    HindmanCondition out{F2, best->front(), {}};
    std::size_t fresh = 0;
    for (std::size_t j = 0; j < subs2.size(); ++j)
        out.delta.push_back((j + 1) & newBit ? (*bestKey)[fresh++] : cond.delta[j]);
    if (!condition_holds(out, c, searchBound)) throw std::logic_error("condition_extend: extension failed re-verification");
    return out;
}

// ---------------------------------------------------------------------------------------------
// Colorings of finite sets

using SetColoring = std::function<int(const std::vector<std::size_t>&)>;

// ĉ(σ) = c({i < |σ| : σ(i) = 1}).
inline std::function<int(const Word&)> prop214_transform(SetColoring c) {
    return [c](const Word& s) {
        if (!in_fin(s, 2)) throw std::invalid_argument("prop214_transform: " + format_word(s) + " is not in (ω)^2_fin");
        std::vector<std::size_t> ones;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] == 1) ones.push_back(i);
        return c(ones);
    };
}

// Nonzero started blocks of p; under a declared tail they are complete. They must be ordered:
// max B_i < min B_{i+1}.
inline std::vector<std::vector<std::size_t>> finite_ordered_blocks(const Prefix& p) {
    if (p.tail == Tail::Undeclared) throw std::invalid_argument("finite blocks need a declared tail");
    std::vector<std::vector<std::size_t>> blocks(p.blocks_started());
    for (std::size_t n = 0; n < p.size(); ++n) blocks[p.entries[n]].push_back(n);
    blocks.erase(blocks.begin());
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i - 1].back() >= blocks[i].front())
            throw std::invalid_argument("blocks " + std::to_string(i) + " and " + std::to_string(i + 1) + " overlap");
    return blocks;
}

struct UnionCheck {
    bool monochromatic = true;
    std::vector<std::size_t> first, second;  // block-index sets with different colors
    int color = 0;
};

inline UnionCheck finite_unions_monochromatic(const Prefix& p, const SetColoring& c) {
    auto blocks = finite_ordered_blocks(p);
    UnionCheck out;
    std::optional<int> col;
    std::vector<std::size_t> firstIdx;
    for (std::size_t mask = 1; mask < (std::size_t{1} << blocks.size()); ++mask) {
        std::vector<std::size_t> set, idx;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (mask >> b & 1) {
                idx.push_back(b + 1);
                set.insert(set.end(), blocks[b].begin(), blocks[b].end());
            }
        int v = c(set);
        if (!col) {
            col = v;
            firstIdx = idx;
        } else if (v != *col) {
            out.monochromatic = false;
            out.first = firstIdx;
            out.second = idx;
            return out;
        }
    }
    out.color = col.value_or(0);
    return out;
}

} // namespace drt
