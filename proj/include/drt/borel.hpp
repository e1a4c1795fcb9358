#pragma once

#include "drt/open_code.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

namespace drt {

enum class ClopenKind { Empty, Full, Cyl, Cocyl };

struct Clopen {
    ClopenKind kind = ClopenKind::Empty;
    Word word;
    bool operator==(const Clopen&) const = default;
};

inline Clopen empty_set() { return {ClopenKind::Empty, {}}; }
inline Clopen full_set() { return {ClopenKind::Full, {}}; }
inline Clopen cyl(Word w) { return {ClopenKind::Cyl, std::move(w)}; }
inline Clopen cocyl(Word w) { return {ClopenKind::Cocyl, std::move(w)}; }

inline Clopen complement(const Clopen& c) {
    switch (c.kind) {
    case ClopenKind::Empty: return full_set();
    case ClopenKind::Full: return empty_set();
    case ClopenKind::Cyl: return cocyl(c.word);
    default: return cyl(c.word);
    }
}

inline std::size_t needed_length(const Clopen& c) {
    return (c.kind == ClopenKind::Cyl || c.kind == ClopenKind::Cocyl) ? c.word.size() : 0;
}

inline bool clopen_contains(const Clopen& c, const Prefix& p) {
    switch (c.kind) {
    case ClopenKind::Empty: return false;
    case ClopenKind::Full: return true;
    case ClopenKind::Cyl: return detail::point_in_cylinder(p, c.word);
    default: return !detail::point_in_cylinder(p, c.word);
    }
}

// Clopen membership for a word long enough to decide it; nullopt when it cannot tell.
inline std::optional<bool> clopen_contains_word(const Clopen& c, const Word& w) {
    switch (c.kind) {
    case ClopenKind::Empty: return false;
    case ClopenKind::Full: return true;
    default: break;
    }
    bool in;
    if (is_prefix(c.word, w)) in = true;
    else if (!comparable(c.word, w)) in = false;
    else return std::nullopt;
    return c.kind == ClopenKind::Cyl ? in : !in;
}

// Finite labelled tree: internal nodes are unions or intersections, leaves are clopen sets.
struct BorelCode {
    enum class Op { Leaf, Union, Intersection };
    Op op = Op::Leaf;
    Clopen leaf;
    std::vector<BorelCode> children;

    bool operator==(const BorelCode&) const = default;
};

inline BorelCode make_leaf(Clopen c) {
    BorelCode b;
    b.leaf = std::move(c);
    return b;
}

inline BorelCode make_union(std::vector<BorelCode> ch) {
    BorelCode b;
    b.op = BorelCode::Op::Union;
    b.children = std::move(ch);
    return b;
}

inline BorelCode make_intersection(std::vector<BorelCode> ch) {
    BorelCode b;
    b.op = BorelCode::Op::Intersection;
    b.children = std::move(ch);
    return b;
}

inline std::size_t node_count(const BorelCode& b) {
    std::size_t n = 1;
    for (const auto& c : b.children) n += node_count(c);
    return n;
}

inline std::size_t height(const BorelCode& b) {
    std::size_t h = 0;
    for (const auto& c : b.children) h = std::max(h, height(c) + 1);
    return h;
}

inline std::size_t max_leaf_length(const BorelCode& b) {
    if (b.op == BorelCode::Op::Leaf) return needed_length(b.leaf);
    std::size_t m = 0;
    for (const auto& c : b.children) m = std::max(m, max_leaf_length(c));
    return m;
}

// Node bits in preorder; bits[0] is the root.
struct EvaluationMap {
    std::vector<std::uint8_t> bits;
    int root() const { return bits.empty() ? 0 : bits[0]; }
};

namespace detail {

inline std::uint8_t eval_into(const BorelCode& b, const Prefix& p, std::vector<std::uint8_t>& bits) {
    std::size_t slot = bits.size();
    bits.push_back(0);
    std::uint8_t v;
    if (b.op == BorelCode::Op::Leaf) {
        v = clopen_contains(b.leaf, p) ? 1 : 0;
    } else {
        bool isUnion = b.op == BorelCode::Op::Union;
        v = isUnion ? 0 : 1;
        for (const auto& c : b.children) {
            std::uint8_t cv = eval_into(c, p, bits);
            v = isUnion ? std::max(v, cv) : std::min(v, cv);
        }
    }
    bits[slot] = v;
    return v;
}

} // namespace detail

inline EvaluationMap borel_evaluate(const BorelCode& b, const Prefix& p) {
    EvaluationMap f;
    try {
        detail::eval_into(b, p, f.bits);
    } catch (const ExtensionRequired&) {
        throw ExtensionRequired(max_leaf_length(b), "prefix does not decide every leaf cylinder");
    }
    return f;
}

inline BorelCode borel_complement(const BorelCode& b) {
    BorelCode r;
    switch (b.op) {
    case BorelCode::Op::Leaf: r.op = BorelCode::Op::Leaf; r.leaf = complement(b.leaf); break;
    case BorelCode::Op::Union: r.op = BorelCode::Op::Intersection; break;
    case BorelCode::Op::Intersection: r.op = BorelCode::Op::Union; break;
    }
    for (const auto& c : b.children) r.children.push_back(borel_complement(c));
    return r;
}

// Numeric trees: a node is its last entry plus its successors. The top level holds the
// children of the empty sequence, which must be exactly one node ⟨m_B⟩.
struct NumNode {
    std::uint64_t label = 0;
    std::vector<NumNode> children;
    bool operator==(const NumNode&) const = default;
};

struct NumericTree {
    std::vector<NumNode> roots;
    bool operator==(const NumericTree&) const = default;
};

inline std::uint64_t leaf_number(const Clopen& c, std::size_t k) {
    switch (c.kind) {
    case ClopenKind::Empty: return 0;
    case ClopenKind::Full: return 1;
    case ClopenKind::Cyl: return 2 * rank_word(c.word, k) + 2;
    default: return 2 * rank_word(c.word, k) + 3;
    }
}

inline Clopen clopen_from_number(std::uint64_t n, std::size_t k) {
    if (n == 0) return empty_set();
    if (n == 1) return full_set();
    Word w = unrank_word((n - 2) / 2, k);
    return n % 2 == 0 ? cyl(w) : cocyl(w);
}

// A childless union is the empty set and a childless intersection the full one; repeated
// sibling leaves are redundant. Both are folded away so every sibling gets its own number.
inline BorelCode canonical(const BorelCode& b) {
    if (b.op == BorelCode::Op::Leaf) return b;
    BorelCode r;
    r.op = b.op;
    for (const auto& c : b.children) {
        BorelCode cc = canonical(c);
        if (cc.op == BorelCode::Op::Leaf &&
            std::find(r.children.begin(), r.children.end(), cc) != r.children.end())
            continue;
        r.children.push_back(std::move(cc));
    }
    if (r.children.empty()) return make_leaf(b.op == BorelCode::Op::Union ? empty_set() : full_set());
    return r;
}

namespace detail {

inline NumNode to_numeric(const BorelCode& b, std::size_t k, std::uint64_t label) {
    NumNode n;
    n.label = label;
    std::set<std::uint64_t> used;
    for (const auto& c : b.children)
        if (c.op == BorelCode::Op::Leaf) used.insert(leaf_number(c.leaf, k));
    for (const auto& c : b.children) {
        if (c.op == BorelCode::Op::Leaf) {
            n.children.push_back(NumNode{leaf_number(c.leaf, k), {}});
            continue;
        }
        std::uint64_t x = c.op == BorelCode::Op::Union ? 0 : 1;
        while (used.count(x)) x += 2;
        used.insert(x);
        n.children.push_back(to_numeric(c, k, x));
    }
    return n;
}

inline BorelCode from_numeric(const NumNode& n, std::size_t k) {
    if (n.children.empty()) return make_leaf(clopen_from_number(n.label, k));
    std::set<std::uint64_t> seen;
    BorelCode b;
    b.op = n.label % 2 == 0 ? BorelCode::Op::Union : BorelCode::Op::Intersection;
    for (const auto& c : n.children) {
        if (!seen.insert(c.label).second)
            throw std::invalid_argument("numeric code: two siblings share last entry " + std::to_string(c.label));
        b.children.push_back(from_numeric(c, k));
    }
    return b;
}

} // namespace detail

inline NumericTree serialize_numeric(const BorelCode& b, std::size_t k) {
    BorelCode c = canonical(b);
    std::uint64_t top = c.op == BorelCode::Op::Leaf ? leaf_number(c.leaf, k)
                      : c.op == BorelCode::Op::Union ? 0 : 1;
    return NumericTree{{detail::to_numeric(c, k, top)}};
}

inline BorelCode parse_numeric(const NumericTree& t, std::size_t k) {
    if (t.roots.size() != 1)
        throw std::invalid_argument("numeric code must have exactly one child of the root, found " +
                                    std::to_string(t.roots.size()));
    return detail::from_numeric(t.roots[0], k);
}

// Union over listed pairs ⟨s,τ_m⟩ of a one-child node whose only child is the leaf [τ_m].
inline BorelCode open_to_borel(const OpenCode& o) {
    if (!o.finite()) throw std::invalid_argument("open_to_borel needs a finite-support code");
    BorelCode root = make_union({});
    auto add = [&](const Word& w) { root.children.push_back(make_union({make_leaf(cyl(w))})); };
    for (const auto& p : o.pairs) add(p.word);
    if (o.rule) {
        for (std::size_t n = o.k; n <= o.support(); ++n)
            for (const Word& w : enumerate_words(o.k, n))
                if (o.rule_lists(w)) add(w);
    }
    return root;
}

// Rows n < tagging.size() of a 0/1 matrix Φ(n,s) that is constant from s = bound on.
struct StabilizingMatrix {
    std::vector<Word> tagging;
    std::size_t bound = 0;
    std::function<int(std::size_t, std::size_t)> phi;
};

// Depth-2 code ∪_t complement(R_t), R_t = ∪{[τ_n] : ∃s ≥ t Φ(n,s)=0}. Columns t > bound
// repeat t = bound, so t ranges over [0, bound].
inline BorelCode jump_lift(const StabilizingMatrix& m, std::size_t checkExtra = 8) {
    std::size_t N = m.tagging.size();
    for (std::size_t n = 0; n < N; ++n) {
        int last = m.phi(n, m.bound);
        for (std::size_t s = m.bound; s <= m.bound + checkExtra; ++s)
            if (m.phi(n, s) != last)
                throw std::invalid_argument("row " + std::to_string(n) + " changes after the stabilization bound (at s=" +
                                            std::to_string(s) + ")");
    }
    BorelCode root = make_union({});
    for (std::size_t t = 0; t <= m.bound; ++t) {
        BorelCode Rt = make_union({});
        for (std::size_t n = 0; n < N; ++n) {
            bool zero = false;
            for (std::size_t s = t; s <= m.bound; ++s)
                if (m.phi(n, s) == 0) zero = true;
            if (zero) Rt.children.push_back(make_leaf(cyl(m.tagging[n])));
        }
        root.children.push_back(borel_complement(Rt));
    }
    return root;
}

} // namespace drt
