#pragma once

#include "drt/normal_form.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace drt {

// Every word of (ω)^k_fin with length at most L, plus one terminal class for each ordered
// word of length L with fewer than k blocks. A terminal class stands for all points of (ω)^k
// whose k-th block opens after L; codes with leaves no longer than L cannot tell them apart.
struct WordUniverse {
    std::size_t k = 2;
    std::size_t L = 0;
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
    std::vector<std::vector<std::size_t>> next;

    WordUniverse(std::size_t k_, std::size_t L_) : k(k_), L(std::max(L_, k_)) {
        for (std::size_t n = k; n <= L; ++n)
            for (Word& w : enumerate_words(k, n)) {
                index[w] = words.size();
                words.push_back(std::move(w));
            }
        for (Word& w : enumerate_ordered(L, k - 1)) {
            index[w] = words.size();
            words.push_back(std::move(w));
        }
        next.resize(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (words[i].size() == L) continue;
            for (std::size_t v = 0; v < k; ++v) {
                Word e = words[i];
                e.push_back(v);
                next[i].push_back(index.at(e));
            }
        }
    }

    std::size_t size() const { return words.size(); }

    // Element of the universe whose cylinder contains [w], if w is long enough or in (ω)^k_fin.
    std::optional<std::size_t> locate(const Word& w) const {
        Word key = w.size() > L ? take(w, L) : w;
        auto it = index.find(key);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

// An open set at finite scale: the words of the universe whose cylinder lies inside it.
using WordSet = std::vector<bool>;

struct BaireApproximation {
    std::shared_ptr<const WordUniverse> universe;
    WordSet U, V;
    std::vector<WordSet> D;
    // Per child k of the root (listed children, then the default one): U_k, V_k, D_{i,k}.
    std::vector<BaireApproximation> parts;

    // Exported as a rule: a word is listed when its element of the universe lies in s.
    OpenCode as_code(const WordSet& s) const {
        auto u = universe;
        return rule_code(u->k, [u, s](const Word& w) {
            auto at = u->locate(w);
            return at.has_value() && s[*at];
        });
    }

    bool contains(const WordSet& s, const Word& w) const {
        auto at = universe->locate(w);
        return at.has_value() && s[*at];
    }
    OpenCode U_code() const { return as_code(U); }
    OpenCode V_code() const { return as_code(V); }

    bool in_all_D(std::size_t idx) const {
        for (const auto& d : D)
            if (!d[idx]) return false;
        return true;
    }
};

namespace detail {

inline WordSet upward_close(const WordUniverse& u, WordSet s) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (s[i])
            for (std::size_t j : u.next[i]) s[j] = true;
    return s;
}

// Words none of whose extensions (within the universe) lie in s.
inline WordSet avoids(const WordUniverse& u, const WordSet& s) {
    std::vector<bool> hits(u.size(), false);
    for (std::size_t i = u.size(); i-- > 0;) {
        bool h = s[i];
        for (std::size_t j : u.next[i]) h = h || hits[j];
        hits[i] = h;
    }
    WordSet out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = !hits[i];
    return out;
}

// Words all of whose full-length extensions lie in s.
inline WordSet saturated(const WordUniverse& u, const WordSet& s) {
    std::vector<bool> all(u.size(), true);
    for (std::size_t i = u.size(); i-- > 0;) {
        if (u.words[i].size() == u.L) {
            all[i] = s[i];
            continue;
        }
        bool a = true;
        for (std::size_t j : u.next[i]) a = a && all[j];
        all[i] = a;
    }
    return all;
}

// Approximation for the Σ-type set coded at `node` (negated: the complement of an ∩-node).
inline BaireApproximation approximate(const std::shared_ptr<const WordUniverse>& u, const NFNode& node,
                                      std::size_t level, std::size_t depth, bool neg) {
    BaireApproximation out;
    out.universe = u;
    std::size_t N = u->size();
    std::vector<NFNode> kids = node.children;
    kids.push_back(nf_constant(node.fill));

    if (depth - level == 1) {
        WordSet inside(N, false);
        for (const NFNode& c : kids) {
            Clopen C = neg ? complement(c.fill) : c.fill;
            for (std::size_t i = 0; i < N; ++i)
                if (clopen_contains_word(C, u->words[i]) == std::optional<bool>(true)) inside[i] = true;
        }
        out.U = upward_close(*u, inside);
        out.V = avoids(*u, out.U);
        return out;
    }

    out.U.assign(N, false);
    out.V.assign(N, true);
    for (const NFNode& c : kids) {
        BaireApproximation part = approximate(u, c, level + 1, depth, !neg);
        WordSet dense = saturated(*u, part.U);
        for (std::size_t i = 0; i < N; ++i) {
            out.U[i] = out.U[i] || part.V[i];
            out.V[i] = out.V[i] && dense[i];
        }
        for (const auto& d : part.D) out.D.push_back(d);
        WordSet uv(N);
        for (std::size_t i = 0; i < N; ++i) uv[i] = part.U[i] || part.V[i];
        out.D.push_back(uv);
        out.parts.push_back(std::move(part));
    }
    for (std::size_t i = 0; i < N; ++i)
        if (out.U[i] && out.V[i])
            throw std::logic_error("baire_approximation: U and V overlap at " + format_word(u->words[i]));
    return out;
}

} // namespace detail

// Dense-up-to-checkLen means every full-length word lies in the set.
inline std::optional<Word> first_bare(const WordUniverse& u, const WordSet& s) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u.words[i].size() == u.L && !s[i]) return u.words[i];
    return std::nullopt;
}

inline BaireApproximation baire_approximation(const NormalFormCode& N, std::size_t checkLen = 8, std::size_t k = 2) {
    if (N.depth == 0) throw std::invalid_argument("baire_approximation: depth must be at least 1");
    // Terminal classes are only sound when every leaf is decided at length checkLen.
    if (std::size_t need = nf_max_leaf_length(N); need > checkLen)
        throw std::invalid_argument("baire_approximation: checkLen " + std::to_string(checkLen) +
                                    " is below the longest leaf (" + std::to_string(need) + ")");
    auto u = std::make_shared<const WordUniverse>(k, checkLen);
    BaireApproximation a = detail::approximate(u, N.root, 0, N.depth, false);
    WordSet uv(u->size());
    for (std::size_t i = 0; i < u->size(); ++i) uv[i] = a.U[i] || a.V[i];
    if (auto bare = first_bare(*u, uv))
        throw DensityFailure("U and V leave the cylinder [" + format_word(*bare) + "] bare at checkLen " +
                             std::to_string(checkLen));
    return a;
}

} // namespace drt
