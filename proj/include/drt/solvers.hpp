#pragma once

#include "drt/baire_approx.hpp"
#include "drt/certificate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drt {

// Pigeonhole for colorings of (ω)^1_fin = {0^n : n ≥ 1}: the default color class is cofinite,
// so every n ≥ 1 in it becomes a singleton block and everything else joins B_0.
inline HomogeneityCertificate cdrt2_solver(const FinColoring& c, std::size_t ell) {
    if (c.k != 1) throw std::invalid_argument("cdrt2_solver colors (w)^1_fin");
    if (c.defaultColor >= ell) throw std::invalid_argument("default color out of range");
    HomogeneityCertificate cert;
    cert.solver = "cdrt2";
    cert.kind = "pigeonhole";
    cert.color = c.defaultColor;
    Word z{0};
    std::size_t next = 1;
    for (std::size_t n = 1; n <= c.support; ++n)
        z.push_back(c(Word(n, 0)) == cert.color ? next++ : 0);
    cert.prefix = Prefix(z, Tail::Discrete);
    cert.decidedBound = cert.prefix.blocks_started() + 1;
    return cert;
}

// Forward: O_i = {⟨0, σ⌢(k−1)⟩ : c(σ) = i}. Words up to the support are listed explicitly;
// the default color also lists every longer σ⌢(k−1), so its code is generator-backed.
inline std::vector<OpenCode> cdrt_to_open(const FinColoring& c) {
    std::size_t k = c.k + 1;
    std::vector<OpenCode> out(c.ell);
    for (std::size_t i = 0; i < c.ell; ++i) {
        out[i].k = k;
        out[i].name = "O_" + std::to_string(i);
    }
    for (std::size_t n = c.k; n <= c.support; ++n)
        for (const Word& s : enumerate_words(c.k, n)) {
            Word w = s;
            w.push_back(k - 1);
            out.at(c(s)).pairs.push_back({0, w});
        }
    std::size_t sup = c.support;
    out.at(c.defaultColor).rule = [k, sup](const Word& w) {
        return w.size() > sup + 1 && w.back() == k - 1 && first_occurrence(w, k - 1) == w.size() - 1;
    };
    return out;
}

inline bool lists_exactly(const OpenCode& code, const Word& w) {
    for (const auto& p : code.pairs)
        if (p.word == w) return true;
    return code.rule_lists(w);
}

// Backward: c(σ) is the color of the least listed τ ⪰ σ⌢(k−1), least color first.
inline std::size_t open_to_cdrt_color(const std::vector<OpenCode>& codes, const Word& sigma, std::size_t budget) {
    if (codes.empty()) throw std::invalid_argument("no color codes given");
    std::size_t k = codes[0].k;
    Word base = sigma;
    base.push_back(k - 1);
    std::vector<const OpenCode*> all;
    for (const auto& c : codes) all.push_back(&c);
    std::size_t maxLen = detail::finite_bound(all, base.size());
    std::size_t color = 0;
    auto hit = detail::least_extension(
        base, k, maxLen, budget,
        [&](const Word& w) {
            for (std::size_t i = 0; i < codes.size(); ++i)
                if (lists_exactly(codes[i], w)) { color = i; return true; }
            return false;
        },
        false);
    if (!hit)
        throw Inconclusive("coverage error: no listed extension of [" + format_word(base) + "]" +
                           (maxLen ? " within the support" : " within budget"));
    return color;
}

inline FinColoring open_to_cdrt(const std::vector<OpenCode>& codes, std::size_t support, std::size_t budget = 10000) {
    FinColoring c;
    c.k = codes.at(0).k - 1;
    c.ell = codes.size();
    c.support = support;
    for (std::size_t n = c.k; n <= support; ++n)
        for (const Word& s : enumerate_words(c.k, n)) c.table[s] = open_to_cdrt_color(codes, s, budget);
    c.defaultColor = open_to_cdrt_color(codes, enumerate_words(c.k, support + 1).front(), budget);
    return c;
}

// Reducedness at finite scale: among the extensions of each σ⌢(k−1) up to maxLen, every
// cylinder lying inside some color lies inside the same set of colors. Returns a clashing pair.
inline std::optional<std::pair<Word, Word>> reduced_violation(const std::vector<OpenCode>& codes, std::size_t maxLen) {
    std::size_t k = codes.at(0).k;
    std::map<Word, std::pair<Word, std::vector<std::size_t>>> seen;
    for (std::size_t n = k; n <= maxLen; ++n)
        for (const Word& w : enumerate_words(k, n)) {
            std::vector<std::size_t> in;
            for (std::size_t i = 0; i < codes.size(); ++i)
                if (cylinder_inside(codes[i], w)) in.push_back(i);
            if (in.empty()) continue;
            Word key = take(w, first_occurrence(w, k - 1) + 1);
            auto it = seen.find(key);
            if (it == seen.end()) seen.emplace(key, std::make_pair(w, in));
            else if (it->second.second != in) return std::make_pair(it->second.first, w);
        }
    return std::nullopt;
}

// Case (a) for finite codes: n = 1 + the largest μ^σ(1) listed, so [0^n] misses R and the
// partition {0..n},{n+1},... is homogeneous for the complement. Otherwise case (b): thinned
// words τ_i ⪰ 0^{max(i,|τ_{i−1}|)} inside R, block B_i = {j : τ_i(j) = 1}.
inline HomogeneityCertificate odrt2_solver(const OpenCode& R, std::size_t budget = 10000, std::size_t stages = 5) {
    if (R.k != 2) throw std::invalid_argument("odrt2_solver works on (w)^2");
    HomogeneityCertificate cert;
    cert.solver = "odrt2";
    cert.k = 2;
    if (R.finite()) {
        std::size_t n = 1;
        for (const Word& w : finite_listing(R)) n = std::max(n, first_occurrence(w, 1) + 1);
        cert.kind = "case-a";
        cert.color = 1;
        cert.prefix = Prefix(Word(n + 1, 0), Tail::Discrete);
        cert.decidedBound = stages + 1;
        cert.witnesses.push_back(Word(n, 0));
        return cert;
    }
    cert.kind = "case-b";
    cert.color = 0;
    Word entries;
    for (std::size_t i = 1; i <= stages; ++i) {
        std::size_t L = std::max(i, entries.size());
        auto tau = detail::least_extension(Word(L, 0), 2, 0, budget,
                                           [&](const Word& w) { return cylinder_inside(R, w); }, false);
        if (!tau)
            throw Inconclusive("no cylinder inside R extends 0^" + std::to_string(L) + " within budget " +
                               std::to_string(budget) + ", and emptiness of [0^n] ∩ R cannot be certified");
        entries.resize(tau->size(), 0);
        for (std::size_t j = 0; j < tau->size(); ++j)
            if ((*tau)[j] == 1) entries[j] = i;
        cert.witnesses.push_back(*tau);
    }
    cert.prefix = Prefix(entries, Tail::Undeclared);
    cert.decidedBound = stages + 1;
    return cert;
}

// Reverses the coarsening σ on the new part of δ: new positions copy τ at the least δ-position
// of their δ-block. Checks that compose(σ, result) = δ.
inline Word uncollapse(const Word& tau, const Word& sigma, const Word& delta, std::size_t* maxIndex = nullptr) {
    Word base = compose(sigma, tau);
    if (!is_prefix(base, delta))
        throw std::invalid_argument("uncollapse: [" + format_word(delta) + "] does not extend [" + format_word(base) + "]");
    Word out = tau;
    std::size_t top = 0;
    for (std::size_t n = tau.size(); n < delta.size(); ++n) {
        std::size_t m = first_occurrence(delta, delta[n]);
        if (m >= tau.size()) throw std::logic_error("uncollapse: block of position " + std::to_string(n) + " opens after τ");
        top = std::max(top, m);
        out.push_back(tau[m]);
    }
    if (compose(sigma, out) != delta) throw std::logic_error("uncollapse: σ∘result differs from δ");
    if (maxIndex) *maxIndex = top;
    return out;
}

// Dense-family solver on (ω)^2. Each stage opens a block from a cylinder of R above 0^{|τ_s|},
// then pushes every 2-coarsening into D_0..D_s and uncollapses.
inline HomogeneityCertificate odrt2_dense_solver(const OpenCode& R, const std::vector<OpenCode>& D, std::size_t stages = 5,
                                                 std::size_t budget = 10000) {
    HomogeneityCertificate cert;
    cert.solver = "odrt2-dense";
    cert.kind = "inside";
    cert.k = 2;
    Word tau{0};
    for (std::size_t s = 0; s < stages; ++s) {
        if (s >= 1)
            for (const Word& sigma : enumerate_words(2, s + 1))
                if (!cylinder_inside(R, compose(sigma, tau)))
                    throw std::logic_error("stage invariant broken at stage " + std::to_string(s + 1) + " for σ=" +
                                           format_word(sigma));
        auto gamma = detail::least_extension(Word(tau.size(), 0), 2, 0, budget,
                                             [&](const Word& w) { return cylinder_inside(R, w); });
        if (!gamma)
            throw DensityFailure("R shows no cylinder above [0^" + std::to_string(tau.size()) + "] within budget");
        Word cur = tau;
        for (std::size_t m = tau.size(); m < gamma->size(); ++m) cur.push_back((*gamma)[m] == 1 ? s + 1 : 0);

        std::vector<const OpenCode*> involved;
        for (std::size_t n = 0; n <= s && n < D.size(); ++n) involved.push_back(&D[n]);
        auto inAll = [&](const Word& w) {
            for (const OpenCode* c : involved)
                if (!cylinder_inside(*c, w)) return false;
            return true;
        };
        std::size_t j = 0;
        for (const Word& sigma : enumerate_words(2, s + 2)) {
            Word base = compose(sigma, cur);
            std::size_t maxLen = detail::finite_bound(involved, base.size());
            auto delta = detail::least_extension(base, 2, maxLen, budget, inAll, false);
            if (!delta) {
                std::string culprit = "the intersection of D_0..D_" + std::to_string(s);
                for (std::size_t n = 0; n < involved.size(); ++n)
                    if (!detail::least_extension(base, 2, maxLen, budget,
                                                 [&](const Word& w) { return cylinder_inside(*involved[n], w); }, false)) {
                        culprit = "D_" + std::to_string(n);
                        break;
                    }
                throw DensityFailure(culprit + " shows no cylinder above [" + format_word(base) + "]");
            }
            StageRecord rec;
            rec.stage = s;
            rec.j = j++;
            rec.tau = cur;
            rec.sigma = sigma;
            rec.delta = *delta;
            rec.ms = tau.size();
            rec.next = uncollapse(cur, sigma, *delta, &rec.maxIndex);
            cur = rec.next;
            cert.log.push_back(std::move(rec));
        }
        tau = cur;
    }
    cert.prefix = Prefix(tau, Tail::Undeclared);
    cert.decidedBound = stages + 1;
    return cert;
}

struct BaireDrtResult {
    HomogeneityCertificate cert;
    // Minimal patterns (ending at the first k−1) and the color forced on them.
    std::map<Word, std::size_t> table;
};

// Staged construction of y with (y)^k inside every D_n and the coloring reduced on (y)^k.
// Stage s+1 runs over the S(s+1,k) patterns σ ∈ (ω)^k_fin of length s+1.
inline BaireDrtResult baire_drt_constructor(std::size_t k, const BaireColoring& bc, std::size_t stages = 5) {
    if (k < 2 || bc.k != k) throw std::invalid_argument("baire_drt_constructor: k must be at least 2 and match the coloring");
    BaireDrtResult out;
    out.cert.solver = "baire";
    out.cert.kind = "reduced";
    out.cert.k = k;
    Word tau;
    for (std::size_t n = 0; n + 1 < k; ++n) tau.push_back(n);
    for (std::size_t s = k - 1; s < k - 1 + stages; ++s) {
        std::size_t ms = tau.size();
        Word cur = tau;
        cur.push_back(s);
        std::size_t j = 0;
        for (const Word& sigma : enumerate_words(k, s + 1)) {
            DensityHit hit = density_search(bc, compose(sigma, cur), s + 1);
            StageRecord rec;
            rec.stage = s;
            rec.j = j++;
            rec.tau = cur;
            rec.sigma = sigma;
            rec.delta = hit.delta;
            rec.color = hit.color;
            rec.ms = ms;
            rec.next = uncollapse(cur, sigma, hit.delta, &rec.maxIndex);
            if (rec.maxIndex > ms) throw std::logic_error("uncollapse read past m_s at stage " + std::to_string(s + 1));
            if (first_occurrence(sigma, k - 1) == s) out.table[sigma] = hit.color;
            cur = rec.next;
            out.cert.log.push_back(std::move(rec));
        }
        tau = cur;
    }
    out.cert.prefix = Prefix(tau, Tail::Undeclared);
    out.cert.decidedBound = k - 1 + stages;
    return out;
}

// Color the table forces on a full pattern: look up its minimal prefix.
inline std::optional<std::size_t> table_color(const std::map<Word, std::size_t>& table, const Word& sigma, std::size_t k) {
    auto it = table.find(take(sigma, first_occurrence(sigma, k - 1) + 1));
    if (it == table.end()) return std::nullopt;
    return it->second;
}

struct LiftingResult {
    HomogeneityCertificate cert;
    std::size_t ell = 0;  // case 1 only
    std::size_t validated = 0;
};

// Case 1: V fills some [0^ℓ]; solve on [0^ℓ] against U_k and the D_{i,k}, certifying the complement.
// Case 2: solve on U against the D_i, certifying R. Either way each full pattern is checked with η.
inline LiftingResult lifting_solver(const NormalFormCode& N, std::size_t checkLen = 8, std::size_t stages = 3,
                                    std::size_t budget = 10000) {
    BaireApproximation a = baire_approximation(N, checkLen, 2);
    const WordUniverse& u = *a.universe;
    std::optional<std::size_t> ell;
    for (std::size_t l = 1; l <= u.L && !ell; ++l) {
        bool dense = true;
        for (std::size_t i = 0; i < u.size() && dense; ++i)
            if (u.words[i].size() == u.L && is_prefix(Word(l, 0), u.words[i]) && !a.V[i]) dense = false;
        if (dense) ell = l;
    }
    LiftingResult out;
    OpenCode R;
    std::vector<OpenCode> D;
    if (ell) {
        std::size_t l = *ell;
        R = rule_code(2, [l](const Word& w) { return is_prefix(Word(l, 0), w); }, std::nullopt, "[0^l]");
        for (const auto& part : a.parts) {
            D.push_back(a.as_code(part.U));
            for (const auto& d : part.D) D.push_back(a.as_code(d));
        }
        out.ell = l;
    } else {
        R = a.U_code();
        for (const auto& d : a.D) D.push_back(a.as_code(d));
    }
    try {
        out.cert = odrt2_dense_solver(R, D, stages, budget);
    } catch (const DensityFailure& e) {
        throw Inconclusive(std::string("neither case settles within checkLen: ") + e.what());
    }
    out.cert.solver = "lifting";
    out.cert.kind = ell ? "complement-side" : "R-side";
    out.cert.color = ell ? 1 : 0;
    int want = ell ? 0 : 1;
    for (const Word& sigma : enumerate_words(2, out.cert.decidedBound)) {
        Prefix p(compose(sigma, out.cert.prefix.entries), Tail::Zero);
        if (static_cast<int>(eta_evaluate(N, p)) != want)
            throw std::logic_error("lifting certificate fails at pattern " + format_word(sigma));
        ++out.validated;
    }
    return out;
}

} // namespace drt
