#pragma once

#include "drt/normal_form.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drt {

// c : [ω]^n → 2 given by a finite table plus, per k, a threshold T_k and value v_k: off the table,
// c(k, s⃗) = v_k once s_1 ≥ T_k, and defaultColor otherwise (and for k without a threshold).
// A function may replace the table; the thresholds then promise where it settles.
struct StableColoring {
    std::size_t n = 2;
    std::map<std::vector<std::size_t>, int> table;  // keys (k, s_1, ..., s_{n-1})
    std::map<std::size_t, std::pair<std::size_t, int>> thresholds;
    int defaultColor = 0;
    std::size_t stableFrom = 0;  // every k has settled once s_1 ≥ stableFrom
    std::function<int(std::size_t, const std::vector<std::size_t>&)> fn;

    int operator()(std::size_t k, const std::vector<std::size_t>& s) const {
        if (fn) return fn(k, s);
        std::vector<std::size_t> key{k};
        key.insert(key.end(), s.begin(), s.end());
        if (auto it = table.find(key); it != table.end()) return it->second;
        if (auto it = thresholds.find(k); it != thresholds.end() && !s.empty() && s[0] >= it->second.first)
            return it->second.second;
        return defaultColor;
    }

    std::size_t table_bound() const {
        std::size_t b = 0;
        for (const auto& [key, v] : table)
            for (std::size_t x : key) b = std::max(b, x + 1);
        return b;
    }

    // Largest k whose limit may differ from the default.
    std::size_t support_k() const {
        std::size_t b = 0;
        for (const auto& [key, v] : table) b = std::max(b, key[0]);
        for (const auto& [k, t] : thresholds) b = std::max(b, k);
        return b;
    }
};

inline void validate(const StableColoring& c) {
    if (c.n < 2) throw std::invalid_argument("stable coloring needs n ≥ 2");
    if (c.defaultColor != 0 && c.defaultColor != 1) throw std::invalid_argument("default color must be 0 or 1");
    for (const auto& [key, v] : c.table) {
        if (key.size() != c.n) throw std::invalid_argument("table key has " + std::to_string(key.size()) + " entries, expected n");
        for (std::size_t i = 1; i < key.size(); ++i)
            if (key[i] <= key[i - 1]) throw std::invalid_argument("table key is not strictly increasing");
        if (v != 0 && v != 1) throw std::invalid_argument("table value must be 0 or 1");
    }
    for (const auto& [k, t] : c.thresholds)
        if (t.second != 0 && t.second != 1) throw std::invalid_argument("threshold value must be 0 or 1");
}

// Point far beyond every threshold and table entry for k.
inline std::vector<std::size_t> far_tuple(const StableColoring& c, std::size_t k) {
    std::size_t B = std::max({c.table_bound(), k + 1, c.stableFrom});
    if (auto it = c.thresholds.find(k); it != c.thresholds.end()) B = std::max(B, it->second.first);
    std::vector<std::size_t> s;
    for (std::size_t m = 0; m + 1 < c.n; ++m) s.push_back(B + m);
    return s;
}

// lim_{s_1} ... lim_{s_{n-1}} c(k, s⃗), read off beyond the thresholds.
inline int limit_color(const StableColoring& c, std::size_t k) {
    int expected = c.defaultColor;
    if (auto it = c.thresholds.find(k); it != c.thresholds.end()) expected = it->second.second;
    int v = c(k, far_tuple(c, k));
    if (v != expected)
        throw std::invalid_argument("thresholds inconsistent with values: k=" + std::to_string(k) + " settles at " +
                                    std::to_string(v) + ", presentation promises " + std::to_string(expected));
    return v;
}

// p_k: B_1 = {k}, everything else in B_0.
inline Prefix singleton_partition(std::size_t k) {
    if (k == 0) throw std::invalid_argument("singleton_partition: 0 always lies in block 0");
    Word w(k + 1, 0);
    w[k] = 1;
    return Prefix(w, Tail::Zero);
}

struct ReducedBorelColoring {
    NormalFormCode R0, R1;
};

namespace detail {

inline const NFNode& nf_child(const NFNode& node, std::size_t t, NFNode& scratch) {
    if (t < node.children.size()) return node.children[t];
    scratch = nf_constant(node.fill);
    return scratch;
}

// (Q_m t_m ≤ bound_m) ... p ∈ ℓ(⟨t_0, ..., t_{n-1}⟩) from a node at depth m ≥ 1.
inline bool bounded_eval(const NFNode& node, std::size_t m, std::size_t n, const std::vector<std::size_t>& s,
                         const Prefix& p) {
    if (m == n) return clopen_contains(node.fill, p);
    std::size_t bound = s[m - 1];
    bool exists = m % 2 == 0;
    // Children past the listed ones are all the same constant subtree.
    std::size_t top = std::min(bound, node.children.size());
    NFNode scratch;
    for (std::size_t t = 0; t <= top; ++t) {
        bool v = bounded_eval(nf_child(node, t, scratch), m + 1, n, s, p);
        if (exists && v) return true;
        if (!exists && !v) return false;
    }
    return !exists;
}

inline bool top_witness(const NormalFormCode& N, std::size_t t0, const std::vector<std::size_t>& s, const Prefix& p) {
    NFNode scratch;
    return bounded_eval(nf_child(N.root, t0, scratch), 1, N.depth, s, p);
}

inline std::size_t max_children(const NFNode& n) {
    std::size_t m = n.children.size();
    for (const auto& c : n.children) m = std::max(m, max_children(c));
    return m;
}

} // namespace detail

// c(k, s⃗) = 1 iff some t_0 ≤ s_1 satisfies the bounded ℓ_0 condition and no u_0 < t_0 satisfies
// the ℓ_1 one. s_1 bounds t_0 and t_1; each later s_m bounds t_m.
inline int rdrt_to_d(const ReducedBorelColoring& rc, std::size_t k, const std::vector<std::size_t>& s) {
    std::size_t n = rc.R0.depth;
    if (rc.R1.depth != n || n < 2) throw std::invalid_argument("rdrt_to_d needs two normal-form codes of equal depth ≥ 2");
    if (s.size() != n - 1) throw std::invalid_argument("rdrt_to_d needs n−1 upper arguments");
    if (k == 0) return 0;
    Prefix p = singleton_partition(k);
    bool earlierR1 = false;
    for (std::size_t t0 = 0; t0 <= s[0]; ++t0) {
        if (!earlierR1 && detail::top_witness(rc.R0, t0, s, p)) return 1;
        if (detail::top_witness(rc.R1, t0, s, p)) earlierR1 = true;
        if (earlierR1) return 0;
    }
    return 0;
}

// From this bound on every bounded quantifier sees all distinct children, so c(k, ·) is constant.
inline std::size_t rdrt_threshold(const ReducedBorelColoring& rc) {
    return std::max(detail::max_children(rc.R0.root), detail::max_children(rc.R1.root)) + 1;
}

// The D^n_2 instance of a reduced pair as a stable coloring with computed thresholds.
inline StableColoring rdrt_instance(const ReducedBorelColoring& rc) {
    StableColoring c;
    c.n = rc.R0.depth;
    c.fn = [rc](std::size_t k, const std::vector<std::size_t>& s) { return rdrt_to_d(rc, k, s); };
    std::size_t T = rdrt_threshold(rc);
    c.stableFrom = T;
    std::size_t K = std::max(nf_max_leaf_length(rc.R0), nf_max_leaf_length(rc.R1)) + 1;
    auto settled = [&](std::size_t k) {
        std::vector<std::size_t> s;
        for (std::size_t m = 0; m + 1 < c.n; ++m) s.push_back(std::max(T, k + 1) + m);
        return rdrt_to_d(rc, k, s);
    };
    for (std::size_t k = 1; k <= K; ++k) c.thresholds[k] = {T, settled(k)};
    c.defaultColor = settled(K + 1);
    return c;
}

namespace detail {

// Limit formula ∃t_1 ∀s_1>t_1 ∀t_2≥s_1 ∃s_2>t_2 ... with every variable capped at G plus its level.
// Level 0 holds ⟨k, t_1⟩, level m ⟨s_m, t_{m+1}⟩, the last level s_{n-1}.
inline NFNode limit_node(const StableColoring& c, int color, std::size_t k, std::vector<std::size_t>& s, std::size_t t,
                         std::size_t level, std::size_t G) {
    std::size_t n = c.n;
    NFNode node;
    if (level == n) {
        Word w(k + 1, 0);
        w[k] = 1;
        node.fill = c(k, s) == color ? cyl(w) : empty_set();
        return node;
    }
    node.fill = neutral_fill(level);
    for (std::size_t sm = t + 1; sm <= G + level; ++sm) {
        s.push_back(sm);
        if (level == n - 1) {
            node.children.push_back(limit_node(c, color, k, s, 0, level + 1, G));
        } else {
            for (std::size_t tn = sm; tn < G + level + 1; ++tn)
                node.children.push_back(limit_node(c, color, k, s, tn, level + 1, G));
        }
        s.pop_back();
    }
    return node;
}

} // namespace detail

// R_i = ∪ [0^k 1] over k whose limit color is i, as depth-n normal-form codes. The unlisted
// children of the root stand for every k past the support through the cylinder [0^{K+1}].
inline ReducedBorelColoring d_to_rdrt(const StableColoring& c) {
    validate(c);
    std::size_t K = c.support_k();
    std::size_t G = std::max(c.table_bound(), K + 1);
    for (const auto& [k, t] : c.thresholds) G = std::max(G, t.first);
    ReducedBorelColoring out;
    for (int color = 0; color < 2; ++color) {
        NormalFormCode N;
        N.depth = c.n;
        N.root.fill = c.defaultColor == color ? cyl(Word(K + 1, 0)) : empty_set();
        for (std::size_t k = 1; k <= K; ++k)
            for (std::size_t t1 = k; t1 <= G; ++t1) {
                std::vector<std::size_t> s;
                N.root.children.push_back(detail::limit_node(c, color, k, s, t1, 1, G));
            }
        (color == 0 ? out.R0 : out.R1) = std::move(N);
    }
    return out;
}

// A point whose η-membership differs from that of p_{μ(1)}, among words up to maxLen.
inline std::optional<Word> reducedness_counterexample(const ReducedBorelColoring& rc, std::size_t maxLen) {
    for (std::size_t len = 2; len <= maxLen; ++len)
        for (const Word& w : enumerate_words(2, len)) {
            Prefix p(w, Tail::Zero);
            Prefix q = singleton_partition(first_occurrence(w, 1));
            if (eta_evaluate(rc.R0, p) != eta_evaluate(rc.R0, q) || eta_evaluate(rc.R1, p) != eta_evaluate(rc.R1, q))
                return w;
        }
    return std::nullopt;
}

struct LimitHomogSet {
    std::vector<std::size_t> elements;  // strictly increasing, nonzero
    int color = 0;
    bool cofinite = false;              // every k past the last element also belongs
};

// Majority limit color on [1, window]; once the window passes the support the default class is
// the only infinite one and wins outright.
inline LimitHomogSet d_n2_brute_solver(const StableColoring& c, std::size_t window) {
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    std::size_t K = c.support_k();
    std::vector<int> lim(window + 1, 0);
    std::size_t ones = 0;
    for (std::size_t k = 1; k <= window; ++k) ones += (lim[k] = limit_color(c, k));
    LimitHomogSet L;
    if (window > K) L.color = c.defaultColor;
    else L.color = ones * 2 > window ? 1 : (ones * 2 < window ? 0 : c.defaultColor);
    for (std::size_t k = 1; k <= window; ++k)
        if (lim[k] == L.color) L.elements.push_back(k);
    L.cofinite = L.color == c.defaultColor && window > K;
    for (std::size_t k : L.elements)
        if (limit_color(c, k) != L.color) throw std::logic_error("brute solver produced an inhomogeneous set");
    return L;
}

// Blocks [0,k_0), [k_m, k_{m+1}), ...; the last listed block runs to the end of the window.
inline Prefix solution_forward(const LimitHomogSet& L) {
    if (L.elements.empty()) throw std::invalid_argument("solution_forward: empty limit-homogeneous set");
    if (L.elements.front() == 0) throw std::invalid_argument("solution_forward: elements must be nonzero");
    Word w;
    std::size_t block = 0;
    for (std::size_t k : L.elements) {
        if (k < w.size()) throw std::invalid_argument("solution_forward: elements must increase");
        while (w.size() < k) w.push_back(block);
        ++block;
    }
    w.push_back(block);
    return Prefix(w, L.cofinite ? Tail::Discrete : Tail::Undeclared);
}

// L = {μ^p(m) : m ≥ 1} over the decided blocks.
inline LimitHomogSet solution_backward(const Prefix& p, int color = 0) {
    LimitHomogSet L;
    L.color = color;
    std::vector<std::size_t> mus = p.mu_table();
    for (std::size_t m = 1; m < mus.size(); ++m) L.elements.push_back(mus[m]);
    L.cofinite = p.tail == Tail::Discrete;
    return L;
}

// Brute rDRT solver for reduced pairs: color each p_k, keep the majority class in the window.
struct RdrtSolution {
    Prefix p;
    int color = 0;
};

inline RdrtSolution rdrt_brute_solver(const ReducedBorelColoring& rc, std::size_t window) {
    std::vector<std::size_t> in[2];
    for (std::size_t k = 1; k <= window; ++k) {
        Prefix pk = singleton_partition(k);
        bool a = eta_evaluate(rc.R0, pk), b = eta_evaluate(rc.R1, pk);
        if (a == b) throw std::invalid_argument("R0 and R1 do not split p_" + std::to_string(k));
        in[a ? 0 : 1].push_back(k);
    }
    int color = in[1].size() > in[0].size() ? 1 : 0;
    LimitHomogSet L;
    L.elements = in[color];
    if (L.elements.empty()) throw std::invalid_argument("rdrt_brute_solver: window too small");
    return RdrtSolution{solution_forward(L), color};
}

} // namespace drt
