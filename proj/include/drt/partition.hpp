#pragma once

#include "drt/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace drt {

// A finite word over ω; entry n names the block that position n belongs to.
using Word = std::vector<std::size_t>;

inline bool is_ordered(const Word& w) {
    std::size_t next = 0;
    for (std::size_t v : w) {
        if (v > next) return false;
        if (v == next) ++next;
    }
    return true;
}

// Number of blocks touched by an ordered word (max entry + 1).
inline std::size_t block_count(const Word& w) {
    std::size_t b = 0;
    for (std::size_t v : w) b = std::max(b, v + 1);
    return b;
}

// Membership in (ω)^k_fin.
inline bool in_fin(const Word& w, std::size_t k) {
    return is_ordered(w) && block_count(w) == k;
}

inline bool is_prefix(const Word& a, const Word& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

inline bool comparable(const Word& a, const Word& b) {
    return is_prefix(a, b) || is_prefix(b, a);
}

inline Word take(const Word& w, std::size_t len) {
    return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(len, w.size())));
}

// μ^w(i) for a word; throws if block i never occurs.
inline std::size_t first_occurrence(const Word& w, std::size_t i) {
    for (std::size_t n = 0; n < w.size(); ++n)
        if (w[n] == i) return n;
    throw std::out_of_range("block " + std::to_string(i) + " does not occur in word");
}

// Length-then-lex comparison used by every search in the library.
inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

namespace detail {

inline void enumerate_rec(Word& cur, std::size_t n, std::size_t maxBlocks, std::size_t used,
                          bool surjective, std::vector<Word>& out) {
    std::size_t pos = cur.size();
    if (pos == n) {
        if (!surjective || used == maxBlocks) out.push_back(cur);
        return;
    }
    if (surjective && maxBlocks - used > n - pos) return;
    std::size_t hi = std::min(used, maxBlocks - 1);
    for (std::size_t v = 0; v <= hi; ++v) {
        cur.push_back(v);
        enumerate_rec(cur, n, maxBlocks, v == used ? used + 1 : used, surjective, out);
        cur.pop_back();
    }
}

} // namespace detail

// Members of (ω)^k_fin of length n, lexicographic.
inline std::vector<Word> enumerate_words(std::size_t k, std::size_t n) {
    std::vector<Word> out;
    if (k == 0) {
        if (n == 0) out.emplace_back();
        return out;
    }
    if (n < k) return out;
    Word cur;
    detail::enumerate_rec(cur, n, k, 0, true, out);
    return out;
}

// Ordered words of length n using at most maxBlocks blocks (basic cylinders of (ω)^k).
inline std::vector<Word> enumerate_ordered(std::size_t n, std::size_t maxBlocks) {
    std::vector<Word> out;
    if (maxBlocks == 0) {
        if (n == 0) out.emplace_back();
        return out;
    }
    Word cur;
    detail::enumerate_rec(cur, n, maxBlocks, 0, false, out);
    return out;
}

inline std::uint64_t stirling2(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::uint64_t>> S(n + 1, std::vector<std::uint64_t>(k + 1, 0));
    S[0][0] = 1;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= std::min(i, k); ++j)
            S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
    return S[n][k];
}

// (s∘t)(n) = s(t(n)).
inline Word compose(const Word& s, const Word& t) {
    if (!is_ordered(t)) throw std::invalid_argument("compose: inner word is not ordered");
    std::size_t h = block_count(t);
    if (s.size() < h) {
        std::ostringstream msg;
        msg << "compose: outer word has length " << s.size() << " but needs entries at indices";
        for (std::size_t i = s.size(); i < h; ++i) msg << ' ' << i;
        throw std::invalid_argument(msg.str());
    }
    Word r(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) r[n] = s[t[n]];
    return r;
}

// All k-coarsenings of t, as σ∘t for σ ∈ (ω)^k_fin of length |blocks of t|.
inline std::vector<Word> coarsenings(const Word& t, std::size_t k) {
    if (!is_ordered(t)) throw std::invalid_argument("coarsenings: word is not ordered");
    std::size_t h = block_count(t);
    std::vector<Word> out;
    if (k > h) return out;
    for (const Word& sigma : enumerate_words(k, h)) out.push_back(compose(sigma, t));
    return out;
}

// σ*(n): σ below |σ|, then shift later positions so each opens its own block.
inline std::size_t star_extension(const Word& s, std::size_t m, std::size_t n) {
    std::size_t S = s.size();
    if (n < S) return s[n];
    return n - (S - m);
}

enum class Tail { Undeclared, Discrete, Zero };

// A finite prefix of a partition of ω plus a rule for what follows it.
// Discrete: each later position opens a new block. Zero: later positions join block 0.
struct Prefix {
    Word entries;
    Tail tail = Tail::Undeclared;

    Prefix() = default;
    Prefix(Word e, Tail t = Tail::Undeclared) : entries(std::move(e)), tail(t) {
        if (!is_ordered(entries)) throw std::invalid_argument("prefix entries are not ordered");
    }

    std::size_t size() const { return entries.size(); }
    std::size_t blocks_started() const { return block_count(entries); }
    bool decides(std::size_t len) const { return len <= entries.size() || tail != Tail::Undeclared; }

    std::size_t at(std::size_t n) const {
        if (n < entries.size()) return entries[n];
        switch (tail) {
        case Tail::Discrete: return blocks_started() + (n - entries.size());
        case Tail::Zero: return 0;
        default: throw ExtensionRequired(n + 1, "position beyond undeclared prefix");
        }
    }

    // p↾len, materialising the tail where needed.
    Word take(std::size_t len) const {
        if (!decides(len)) throw ExtensionRequired(len, "prefix too short");
        Word w = drt::take(entries, len);
        for (std::size_t n = w.size(); n < len; ++n) w.push_back(at(n));
        return w;
    }

    std::vector<std::size_t> mu_table() const {
        std::vector<std::size_t> mu;
        for (std::size_t n = 0; n < entries.size(); ++n)
            if (entries[n] == mu.size()) mu.push_back(n);
        return mu;
    }

    bool operator==(const Prefix&) const = default;
};

inline std::size_t mu(const Prefix& p, std::size_t i) {
    std::size_t bs = p.blocks_started();
    if (i < bs) return first_occurrence(p.entries, i);
    if (p.tail == Tail::Discrete) return p.size() + (i - bs);
    throw ExtensionRequired(p.size() + 1, "block " + std::to_string(i) + " is undetermined");
}

// τ_σ with τ_σ(i) = σ(μ^p(i)), so that τ_σ∘p reproduces σ.
inline Word lift_to_omega(const Word& s, const Prefix& p) {
    std::size_t L = s.size();
    if (!p.decides(L)) throw std::invalid_argument("lift_to_omega: prefix does not reach length of word");
    Word base = p.take(L);
    bool aligned = L == 0 || !p.decides(L + 1) || p.at(L) == block_count(base);
    if (!aligned) throw std::invalid_argument("lift_to_omega: word length is not a block minimum of the prefix");
    std::size_t n = block_count(base);
    Word tau(n, 0);
    std::vector<bool> seen(n, false);
    for (std::size_t j = 0; j < L; ++j) {
        std::size_t b = base[j];
        if (!seen[b]) {
            tau[b] = s[j];
            seen[b] = true;
        } else if (tau[b] != s[j]) {
            throw std::invalid_argument("lift_to_omega: word is not a coarsening of the prefix");
        }
    }
    return tau;
}

inline std::string format_word(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

inline Word parse_word(const std::string& text) {
    Word w;
    if (text.empty()) return w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad word entry '" + item + "'");
        }
        if (used != item.size() || item.empty() || item[0] == '-')
            throw std::invalid_argument("bad word entry '" + item + "'");
        w.push_back(static_cast<std::size_t>(v));
    }
    return w;
}

inline std::string format_prefix(const Prefix& p) {
    std::string out = format_word(p.entries);
    if (p.tail == Tail::Discrete) out += "|discrete";
    if (p.tail == Tail::Zero) out += "|zero";
    return out;
}

inline Prefix parse_prefix(const std::string& text) {
    auto bar = text.find('|');
    Tail tail = Tail::Undeclared;
    if (bar != std::string::npos) {
        std::string policy = text.substr(bar + 1);
        if (policy == "discrete") tail = Tail::Discrete;
        else if (policy == "zero") tail = Tail::Zero;
        else if (policy != "undeclared") throw std::invalid_argument("unknown tail policy '" + policy + "'");
    }
    return Prefix(parse_word(text.substr(0, bar)), tail);
}

// Ordered completions of r more positions that end with exactly k blocks, given b used so far.
inline std::uint64_t completions(std::size_t r, std::size_t b, std::size_t k) {
    std::vector<std::uint64_t> f(k + 2, 0);
    f[k] = 1;
    for (std::size_t step = 0; step < r; ++step) {
        std::vector<std::uint64_t> g(k + 2, 0);
        for (std::size_t c = 0; c <= k; ++c) g[c] = c * f[c] + (c < k ? f[c + 1] : 0);
        f = g;
    }
    return b <= k ? f[b] : 0;
}

// Position of w in the length-then-lex listing τ_0, τ_1, ... of (ω)^k_fin.
inline std::uint64_t rank_word(const Word& w, std::size_t k) {
    if (!in_fin(w, k)) throw std::invalid_argument("rank_word: word is not in (w)^k_fin");
    std::uint64_t r = 0;
    for (std::size_t n = k; n < w.size(); ++n) r += stirling2(n, k);
    std::size_t used = 0;
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        for (std::size_t v = 0; v < w[pos]; ++v)
            r += completions(w.size() - pos - 1, v == used ? used + 1 : used, k);
        if (w[pos] == used) ++used;
    }
    return r;
}

inline Word unrank_word(std::uint64_t m, std::size_t k) {
    if (k == 0) throw std::invalid_argument("unrank_word: k must be positive");
    std::size_t n = k;
    while (true) {
        std::uint64_t c = stirling2(n, k);
        if (m < c) break;
        m -= c;
        ++n;
        if (n > 60) throw std::out_of_range("unrank_word: index too large");
    }
    Word w;
    std::size_t used = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        std::size_t hi = std::min(used, k - 1);
        for (std::size_t v = 0; v <= hi; ++v) {
            std::size_t nu = v == used ? used + 1 : used;
            std::uint64_t c = completions(n - pos - 1, nu, k);
            if (m < c) {
                w.push_back(v);
                used = nu;
                break;
            }
            m -= c;
        }
    }
    return w;
}

} // namespace drt
