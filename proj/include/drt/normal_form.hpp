#pragma once

#include "drt/borel.hpp"

#include <string>
#include <vector>

namespace drt {

// A node of a full-branching tree ω^{<n+1}. Children 0..children.size()-1 are listed; every
// other child is a subtree whose leaves all carry `fill`, so it denotes `fill` itself.
// At depth n the node is a leaf labelled `fill`.
struct NFNode {
    std::vector<NFNode> children;
    Clopen fill;
    bool operator==(const NFNode&) const = default;
};

// Even depths are unions, odd depths intersections.
struct NormalFormCode {
    std::size_t depth = 1;
    NFNode root;
};

inline NFNode nf_constant(Clopen c) { return NFNode{{}, std::move(c)}; }

inline Clopen neutral_fill(std::size_t level) { return level % 2 == 0 ? empty_set() : full_set(); }

namespace detail {

inline bool eta_node(const NFNode& node, std::size_t level, std::size_t depth, const Prefix& p) {
    bool dflt = clopen_contains(node.fill, p);
    if (level == depth) return dflt;
    bool isUnion = level % 2 == 0;
    bool v = dflt;
    for (const auto& c : node.children) {
        bool cv = eta_node(c, level + 1, depth, p);
        v = isUnion ? (v || cv) : (v && cv);
    }
    return v;
}

inline std::size_t nf_max_len(const NFNode& n) {
    std::size_t m = needed_length(n.fill);
    for (const auto& c : n.children) m = std::max(m, nf_max_len(c));
    return m;
}

inline void flatten_same(const BorelCode& b, BorelCode::Op op, std::vector<const BorelCode*>& out) {
    for (const auto& c : b.children) {
        if (c.op == op) flatten_same(c, op, out);
        else out.push_back(&c);
    }
}

// Levels needed below a node placed at a level of the given parity.
inline std::size_t levels_needed(const BorelCode& b, bool unionLevel) {
    if (b.op == BorelCode::Op::Leaf) return 0;
    BorelCode::Op levelOp = unionLevel ? BorelCode::Op::Union : BorelCode::Op::Intersection;
    if (b.op != levelOp) return 1 + levels_needed(b, !unionLevel);
    std::vector<const BorelCode*> kids;
    flatten_same(b, levelOp, kids);
    if (kids.empty()) return 0;
    std::size_t m = 0;
    for (const BorelCode* c : kids) m = std::max(m, levels_needed(*c, !unionLevel));
    return 1 + m;
}

inline NFNode to_nf(const BorelCode& b, std::size_t level, std::size_t depth, std::size_t minimal) {
    if (b.op == BorelCode::Op::Leaf) return nf_constant(b.leaf);
    BorelCode::Op levelOp = level % 2 == 0 ? BorelCode::Op::Union : BorelCode::Op::Intersection;
    std::vector<const BorelCode*> kids;
    if (b.op == levelOp) flatten_same(b, levelOp, kids);
    if (b.op == levelOp && kids.empty())
        return nf_constant(levelOp == BorelCode::Op::Union ? empty_set() : full_set());
    if (level == depth)
        throw std::invalid_argument("normal_form: code needs depth " + std::to_string(minimal));
    NFNode n;
    n.fill = neutral_fill(level);
    if (b.op != levelOp) {
        // Wrap: a single listed child one level down, every other child neutral.
        n.children.push_back(to_nf(b, level + 1, depth, minimal));
        return n;
    }
    for (const BorelCode* c : kids) n.children.push_back(to_nf(*c, level + 1, depth, minimal));
    return n;
}

inline BorelCode nf_to_borel(const NFNode& n, std::size_t level, std::size_t depth) {
    if (level == depth || n.children.empty()) return make_leaf(n.fill);
    std::vector<BorelCode> kids;
    for (const auto& c : n.children) kids.push_back(nf_to_borel(c, level + 1, depth));
    kids.push_back(make_leaf(n.fill));
    return level % 2 == 0 ? make_union(std::move(kids)) : make_intersection(std::move(kids));
}

} // namespace detail

inline std::size_t minimal_normal_depth(const BorelCode& b) {
    return std::max<std::size_t>(1, detail::levels_needed(b, true));
}

// Flattens unions under unions (and intersections under intersections), wraps mismatched
// nodes one level down, and lets neutral defaults stand for the padding copies.
inline NormalFormCode normal_form(const BorelCode& b, std::size_t n) {
    std::size_t minimal = minimal_normal_depth(b);
    if (n < minimal) throw std::invalid_argument("normal_form: code needs depth " + std::to_string(minimal));
    NormalFormCode out;
    out.depth = n;
    out.root = detail::to_nf(b, 0, n, minimal);
    return out;
}

inline bool eta_evaluate(const NormalFormCode& N, const Prefix& p) {
    try {
        return detail::eta_node(N.root, 0, N.depth, p);
    } catch (const ExtensionRequired&) {
        throw ExtensionRequired(detail::nf_max_len(N.root), "prefix does not decide every leaf cylinder");
    }
}

// ℓ(⟨x_0,...,x_{n-1}⟩) for an arbitrary leaf address.
inline Clopen leaf_label(const NormalFormCode& N, const std::vector<std::size_t>& addr) {
    const NFNode* node = &N.root;
    for (std::size_t d = 0; d < addr.size(); ++d) {
        if (addr[d] >= node->children.size()) return node->fill;
        node = &node->children[addr[d]];
    }
    return node->fill;
}

// Explicit Borel tree with one representative for the unlisted children of each node.
inline BorelCode nf_to_borel(const NormalFormCode& N) { return detail::nf_to_borel(N.root, 0, N.depth); }

inline std::size_t nf_max_leaf_length(const NormalFormCode& N) { return detail::nf_max_len(N.root); }

} // namespace drt
