#pragma once

#include "drt/baire.hpp"
#include "drt/normal_form.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drt {

// One density step τ_s^j → τ_s^{j+1} of a staged construction.
struct StageRecord {
    std::size_t stage = 0;
    std::size_t j = 0;
    Word tau;
    Word sigma;
    Word delta;
    Word next;
    std::size_t color = 0;
    std::size_t ms = 0;        // |τ_s|
    std::size_t maxIndex = 0;  // largest μ^δ(δ(n)) read while uncollapsing
};

struct HomogeneityCertificate {
    std::string solver;
    std::string kind;
    std::size_t k = 2;
    Prefix prefix;
    std::size_t color = 0;
    std::size_t decidedBound = 0;
    std::vector<StageRecord> log;
    std::vector<Word> witnesses;
};

// A coloring of (ω)^k_fin: table entries for short words, the default everywhere else.
struct FinColoring {
    std::size_t k = 1;
    std::size_t ell = 2;
    std::size_t support = 0;
    std::map<Word, std::size_t> table;
    std::size_t defaultColor = 0;

    std::size_t operator()(const Word& w) const {
        auto it = table.find(w);
        return it == table.end() ? defaultColor : it->second;
    }
};

// x↾μ^x(b) composed with σ for |σ| = b: the cylinder holding every σ-coarsening of x.
// When block b has not started yet the whole prefix is used.
inline Word pattern_word(const Word& sigma, const Prefix& x) {
    std::size_t b = sigma.size();
    std::size_t started = x.blocks_started();
    std::size_t len;
    if (b < started || x.tail == Tail::Discrete) len = mu(x, b);
    else if (b == started) len = x.size();
    else throw ExtensionRequired(x.size() + 1, "pattern covers " + std::to_string(b) + " blocks but only " +
                                                   std::to_string(started) + " are decided");
    return compose(sigma, x.take(len));
}

struct Verdict {
    bool pass = true;
    std::optional<Word> counterexample;
    std::string detail;
    std::size_t checked = 0;
};

// Runs check on every full pattern σ ∈ (ω)^k_fin of length bound; stops at the first failure.
inline Verdict check_patterns(const Prefix& x, std::size_t k, std::size_t bound,
                              const std::function<std::optional<std::string>(const Word&, const Word&)>& check) {
    Verdict v;
    if (x.tail != Tail::Discrete && bound > x.blocks_started())
        throw ExtensionRequired(x.size() + 1, "bound " + std::to_string(bound) + " exceeds the " +
                                                  std::to_string(x.blocks_started()) + " decided blocks");
    for (const Word& sigma : enumerate_words(k, bound)) {
        Word w = pattern_word(sigma, x);
        ++v.checked;
        if (auto why = check(sigma, w)) {
            v.pass = false;
            v.counterexample = sigma;
            v.detail = *why;
            return v;
        }
    }
    return v;
}

// Every word a finite-support code lists.
inline std::vector<Word> finite_listing(const OpenCode& code) {
    if (!code.finite()) throw Inconclusive("code " + code.name + " is generator-backed; its listing is not finite");
    std::vector<Word> out;
    for (const auto& p : code.pairs) out.push_back(p.word);
    if (code.rule)
        for (std::size_t n = code.k; n <= code.support(); ++n)
            for (const Word& w : enumerate_words(code.k, n))
                if (code.rule_lists(w)) out.push_back(w);
    return out;
}

// Certificates for a 2-coloring {R, complement}: color 0 claims (x)^2 ⊆ R, color 1 claims (x)^2 ∩ R = ∅.
inline Verdict verify_open_certificate(const HomogeneityCertificate& c, const OpenCode& R, std::size_t bound) {
    if (c.color == 0)
        return check_patterns(c.prefix, c.k, bound, [&](const Word&, const Word& w) -> std::optional<std::string> {
            if (cylinder_inside(R, w)) return std::nullopt;
            return "[" + format_word(w) + "] is not inside R";
        });
    std::vector<Word> listed = finite_listing(R);
    return check_patterns(c.prefix, c.k, bound, [&](const Word&, const Word& w) -> std::optional<std::string> {
        for (const Word& s : listed)
            if (comparable(s, w)) return "[" + format_word(w) + "] meets listed cylinder [" + format_word(s) + "]";
        return std::nullopt;
    });
}

// Certificates for a coloring of (ω)^1_fin: the color of q is c(0^{μ^q(1)}).
inline Verdict verify_fin_certificate(const HomogeneityCertificate& c, const FinColoring& col, std::size_t bound) {
    return check_patterns(c.prefix, 2, bound, [&](const Word&, const Word& w) -> std::optional<std::string> {
        std::size_t n = first_occurrence(w, 1);
        std::size_t got = col(Word(n, 0));
        if (got == c.color) return std::nullopt;
        return "block minimum " + std::to_string(n) + " has color " + std::to_string(got);
    });
}

// Every full pattern lands in exactly one color (the certified one, if given) and in D_0..D_{dense-1}.
inline Verdict verify_baire_patterns(const Prefix& y, const BaireColoring& bc, std::size_t bound, std::size_t dense,
                                     const std::function<std::optional<std::size_t>(const Word&)>& expected) {
    return check_patterns(y, bc.k, bound, [&](const Word& sigma, const Word& w) -> std::optional<std::string> {
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < bc.colors.size(); ++i)
            if (cylinder_inside(bc.colors[i], w)) hits.push_back(i);
        if (hits.size() != 1)
            return "[" + format_word(w) + "] lies inside " + std::to_string(hits.size()) + " colors";
        if (auto e = expected(sigma); e && *e != hits[0])
            return "[" + format_word(w) + "] has color " + std::to_string(hits[0]) + ", expected " + std::to_string(*e);
        for (std::size_t n = 0; n < dense && n < bc.dense.size(); ++n)
            if (!cylinder_inside(bc.dense[n], w)) return "[" + format_word(w) + "] is not inside D_" + std::to_string(n);
        return std::nullopt;
    });
}

// Color 0 claims every pattern point (block-0 tail) is in the η-set of N, color 1 that none is.
inline Verdict verify_eta_certificate(const HomogeneityCertificate& c, const NormalFormCode& N, std::size_t bound) {
    bool want = c.color == 0;
    return check_patterns(c.prefix, 2, bound, [&](const Word&, const Word& w) -> std::optional<std::string> {
        if (eta_evaluate(N, Prefix(w, Tail::Zero)) == want) return std::nullopt;
        return "[" + format_word(w) + "] followed by block 0 is " + (want ? "outside" : "inside") + " the coded set";
    });
}

} // namespace drt
