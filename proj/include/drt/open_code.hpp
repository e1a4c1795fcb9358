#pragma once

#include "drt/errors.hpp"
#include "drt/partition.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace drt {

struct CodePair {
    std::size_t tag = 0;
    Word word;
    bool operator==(const CodePair&) const = default;
};

// A code for an open subset of (ω)^k: the union of the cylinders [σ] over listed pairs.
// Besides the explicit pairs, a code may carry a rule listing every σ ∈ (ω)^k_fin it accepts
// (with tag 0, in length-then-lex order). A rule with no declared support is generator-backed:
// membership is only semi-decidable and answers may come back unknown.
struct OpenCode {
    std::size_t k = 2;
    std::vector<CodePair> pairs;
    std::function<bool(const Word&)> rule;
    std::optional<std::size_t> rule_support;
    std::string name;

    bool finite() const { return !rule || rule_support.has_value(); }

    // Longest word that can ever be listed, for finite codes.
    std::size_t support() const {
        std::size_t s = 0;
        for (const auto& p : pairs) s = std::max(s, p.word.size());
        if (rule && rule_support) s = std::max(s, *rule_support);
        return s;
    }

    bool rule_lists(const Word& w) const {
        if (!rule) return false;
        if (rule_support && w.size() > *rule_support) return false;
        return in_fin(w, k) && rule(w);
    }
};

struct ClosedCode {
    OpenCode code;
};

inline OpenCode explicit_code(std::size_t k, std::vector<CodePair> pairs) {
    OpenCode c;
    c.k = k;
    c.pairs = std::move(pairs);
    return c;
}

inline OpenCode rule_code(std::size_t k, std::function<bool(const Word&)> rule,
                          std::optional<std::size_t> support = std::nullopt, std::string name = {}) {
    OpenCode c;
    c.k = k;
    c.rule = std::move(rule);
    c.rule_support = support;
    c.name = std::move(name);
    return c;
}

// The whole space (ω)^k: every word of (ω)^k_fin is listed.
inline OpenCode full_code(std::size_t k) {
    return rule_code(k, [](const Word&) { return true; }, std::nullopt, "full");
}

// First listed pair whose word is an initial segment of w, i.e. a witness for [w] ⊆ O.
inline std::optional<CodePair> listed_prefix(const OpenCode& code, const Word& w) {
    for (const auto& p : code.pairs)
        if (is_prefix(p.word, w)) return p;
    if (code.rule) {
        for (std::size_t n = code.k; n <= w.size(); ++n) {
            Word pre = take(w, n);
            if (code.rule_lists(pre)) return CodePair{0, pre};
        }
    }
    return std::nullopt;
}

inline bool cylinder_inside(const OpenCode& code, const Word& w) {
    return listed_prefix(code, w).has_value();
}

enum class Answer { Yes, No, Unknown };

struct Membership {
    Answer answer = Answer::No;
    std::optional<CodePair> witness;
};

namespace detail {

// 1 if p ∈ [w], 0 if not, throws if the prefix cannot tell.
inline bool point_in_cylinder(const Prefix& p, const Word& w) {
    if (p.decides(w.size())) return p.take(w.size()) == w;
    for (std::size_t n = 0; n < p.size(); ++n)
        if (p.entries[n] != w[n]) return false;
    throw ExtensionRequired(w.size(), "prefix too short to compare against cylinder " + format_word(w));
}

} // namespace detail

inline Membership open_member(const OpenCode& code, const Prefix& p, std::size_t budget = 10000) {
    for (const auto& pair : code.pairs)
        if (detail::point_in_cylinder(p, pair.word)) return {Answer::Yes, pair};
    if (!code.rule) return {Answer::No, std::nullopt};

    std::size_t limit = code.rule_support ? *code.rule_support : code.k + budget;
    Word pre;
    for (std::size_t n = 1; n <= limit; ++n) {
        if (!p.decides(n)) {
            if (code.rule_support) throw ExtensionRequired(*code.rule_support, "prefix does not reach code support");
            return {Answer::Unknown, std::nullopt};
        }
        pre.push_back(p.at(n - 1));
        if (n >= code.k && code.rule_lists(pre)) return {Answer::Yes, CodePair{0, pre}};
    }
    if (code.rule_support) return {Answer::No, std::nullopt};
    return {Answer::Unknown, std::nullopt};
}

// p ∈ V iff no listed cylinder contains p.
inline Membership closed_member(const ClosedCode& v, const Prefix& p, std::size_t budget = 10000) {
    Membership m = open_member(v.code, p, budget);
    if (m.answer == Answer::Yes) return {Answer::No, m.witness};
    if (m.answer == Answer::No) return {Answer::Yes, std::nullopt};
    return m;
}

// Calls fn on every word of length len extending t whose entries stay below k and remain ordered.
template <class Fn>
bool for_each_extension(const Word& t, std::size_t len, std::size_t k, Fn&& fn) {
    if (len < t.size()) return true;
    Word cur = t;
    std::size_t used = block_count(t);
    std::function<bool(std::size_t)> rec = [&](std::size_t u) -> bool {
        if (cur.size() == len) return fn(static_cast<const Word&>(cur));
        std::size_t hi = std::min(u, k - 1);
        for (std::size_t v = 0; v <= hi; ++v) {
            cur.push_back(v);
            bool go = rec(v == u ? u + 1 : u);
            cur.pop_back();
            if (!go) return false;
        }
        return true;
    };
    return rec(used);
}

// Does [t] meet O? Searches extensions of t up to maxLen for one that sits inside O.
inline bool meets(const OpenCode& code, const Word& t, std::size_t maxLen) {
    for (const auto& p : code.pairs)
        if (comparable(p.word, t)) return true;
    if (!code.rule) return false;
    for (std::size_t n = t.size(); n <= maxLen; ++n) {
        bool found = false;
        for_each_extension(t, n, code.k, [&](const Word& w) {
            if (cylinder_inside(code, w)) found = true;
            return !found;
        });
        if (found) return true;
    }
    return false;
}

// First ordered word of length len (at most k blocks) whose cylinder misses O within maxLen, if any.
inline std::optional<Word> bare_cylinder(const OpenCode& code, std::size_t len, std::size_t maxLen) {
    for (const Word& t : enumerate_ordered(len, code.k))
        if (!meets(code, t, std::max(maxLen, len))) return t;
    return std::nullopt;
}

// Finite-support view of a closed code: U lists the words incomparable with every pair of V
// (so [τ] lies inside V), Vopen is V's pair list read as an open code for the complement.
struct ClosedSplit {
    OpenCode U;
    OpenCode Vopen;
};

inline ClosedSplit closed_code_baire(const ClosedCode& v) {
    if (!v.code.finite()) throw std::invalid_argument("closed_code_baire needs a finite-support code");
    const OpenCode& c = v.code;
    std::size_t L = c.support();
    std::vector<Word> listed;
    for (const auto& p : c.pairs) listed.push_back(p.word);
    if (c.rule) {
        for (std::size_t n = c.k; n <= L; ++n)
            for (const Word& w : enumerate_words(c.k, n))
                if (c.rule_lists(w)) listed.push_back(w);
    }
    ClosedSplit out;
    out.Vopen.k = c.k;
    for (const Word& w : listed) out.Vopen.pairs.push_back({0, w});
    // Generator-backed: points whose k-th block opens late are only reached by long prefixes.
    out.U = rule_code(
        c.k,
        [listed](const Word& t) {
            for (const Word& s : listed)
                if (comparable(s, t)) return false;
            return true;
        },
        std::nullopt, "incomparable");
    return out;
}

} // namespace drt
