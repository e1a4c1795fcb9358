#pragma once

#include "drt/open_code.hpp"

#include <string>
#include <vector>

namespace drt {

// Colors O_0..O_{l-1} plus dense open sets D_n. D_n for n ≥ dense.size() is the whole space.
struct BaireColoring {
    std::size_t k = 2;
    std::vector<OpenCode> colors;
    std::vector<OpenCode> dense;
    std::size_t budget = 10000;
};

struct DensityHit {
    Word delta;
    std::size_t color = 0;
};

namespace detail {

inline std::size_t finite_bound(const std::vector<const OpenCode*>& codes, std::size_t base) {
    std::size_t b = base;
    for (const OpenCode* c : codes) {
        if (!c->finite()) return 0;
        b = std::max(b, c->support());
    }
    return b;
}

// Least extension δ of t (length-then-lex) accepted by pred, scanning at most budget
// candidates and never beyond maxLen when maxLen > 0. Proper unless strict is false.
template <class Pred>
std::optional<Word> least_extension(const Word& t, std::size_t k, std::size_t maxLen, std::size_t budget,
                                    Pred&& pred, bool strict = true) {
    std::size_t seen = 0;
    for (std::size_t len = t.size() + (strict ? 1 : 0); maxLen == 0 || len <= maxLen; ++len) {
        std::optional<Word> hit;
        bool exhausted = false;
        for_each_extension(t, len, k, [&](const Word& w) {
            if (++seen > budget) { exhausted = true; return false; }
            if (pred(w)) { hit = w; return false; }
            return true;
        });
        if (hit) return hit;
        if (exhausted) return std::nullopt;
    }
    return std::nullopt;
}

} // namespace detail

// Least δ ≻ t with [δ] ⊆ O_i ∩ ⋂_{n<s} D_n; ties between colors go to the least index.
inline DensityHit density_search(const BaireColoring& bc, const Word& t, std::size_t s) {
    if (!in_fin(t, bc.k)) throw std::invalid_argument("density_search: word is not in (w)^k_fin");
    std::vector<const OpenCode*> involved;
    for (const auto& c : bc.colors) involved.push_back(&c);
    for (std::size_t n = 0; n < s && n < bc.dense.size(); ++n) involved.push_back(&bc.dense[n]);
    std::size_t maxLen = detail::finite_bound(involved, t.size() + 1);

    auto inDense = [&](const Word& w) {
        for (std::size_t n = 0; n < s && n < bc.dense.size(); ++n)
            if (!cylinder_inside(bc.dense[n], w)) return false;
        return true;
    };
    DensityHit out;
    auto hit = detail::least_extension(t, bc.k, maxLen, bc.budget, [&](const Word& w) {
        if (!inDense(w)) return false;
        for (std::size_t i = 0; i < bc.colors.size(); ++i)
            if (cylinder_inside(bc.colors[i], w)) { out.color = i; return true; }
        return false;
    });
    if (hit) {
        out.delta = *hit;
        return out;
    }

    // Name the first code that has no extension of t inside it.
    std::size_t diagLen = maxLen ? maxLen : t.size() + 4;
    auto reaches = [&](auto&& pred) {
        return detail::least_extension(t, bc.k, diagLen, bc.budget, pred).has_value();
    };
    std::string culprit = "the intersection of the colors with the dense sets";
    if (!reaches([&](const Word& w) {
            for (const auto& c : bc.colors)
                if (cylinder_inside(c, w)) return true;
            return false;
        })) {
        culprit = "the union of the colors";
    } else {
        for (std::size_t n = 0; n < s && n < bc.dense.size(); ++n) {
            if (!reaches([&](const Word& w) { return cylinder_inside(bc.dense[n], w); })) {
                culprit = "D_" + std::to_string(n);
                break;
            }
        }
    }
    std::string why = maxLen ? "is not dense" : "showed no witness within budget";
    throw DensityFailure(culprit + " " + why + " above cylinder [" + format_word(t) + "]");
}

// Exact re-check of a density_search answer.
inline bool density_hit_valid(const BaireColoring& bc, const Word& t, std::size_t s, const DensityHit& h) {
    if (!(is_prefix(t, h.delta) && h.delta.size() > t.size())) return false;
    if (h.color >= bc.colors.size() || !cylinder_inside(bc.colors[h.color], h.delta)) return false;
    for (std::size_t n = 0; n < s && n < bc.dense.size(); ++n)
        if (!cylinder_inside(bc.dense[n], h.delta)) return false;
    return true;
}

} // namespace drt
