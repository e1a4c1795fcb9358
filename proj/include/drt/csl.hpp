#pragma once

#include "drt/certificate.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drt {

// A coloring of (ω)^k whose value on q is read off q↾μ^q(m), an ordered word with exactly m blocks.
// Such a coloring is m-reduced by construction.
struct PrefixColoring {
    std::size_t k = 3;
    std::size_t m = 2;
    std::size_t ell = 2;
    std::function<std::size_t(const Word&)> color;

    std::size_t operator()(const Word& v) const { return color(v); }

    // q must reach μ^q(m).
    std::size_t of_point(const Word& q) const { return color(take(q, first_occurrence(q, m))); }
};

// Table on words up to the support, default color beyond (and for missing entries).
inline PrefixColoring table_coloring(std::size_t k, std::size_t m, std::size_t ell, std::map<Word, std::size_t> table,
                                     std::size_t support, std::size_t defaultColor) {
    PrefixColoring c;
    c.k = k;
    c.m = m;
    c.ell = ell;
    c.color = [table = std::move(table), support, defaultColor](const Word& v) {
        if (v.size() > support) return defaultColor;
        auto it = table.find(v);
        return it == table.end() ? defaultColor : it->second;
    };
    return c;
}

class NotReduced : public std::runtime_error {
public:
    NotReduced(Word a, Word b)
        : std::runtime_error("coloring is not reduced: " + format_word(a) + " and " + format_word(b) +
                             " agree on the prefix but get different colors"),
          a_(std::move(a)), b_(std::move(b)) {}
    const Word& first() const { return a_; }
    const Word& second() const { return b_; }

private:
    Word a_, b_;
};

// Two words read by c (c.m blocks, length ≤ maxLen) that agree up to their m-th block minimum
// but get different colors.
inline std::optional<std::pair<Word, Word>> reducedness_violation(const PrefixColoring& c, std::size_t m,
                                                                  std::size_t maxLen) {
    std::map<Word, std::pair<Word, std::size_t>> seen;
    for (std::size_t n = c.m; n <= maxLen; ++n)
        for (const Word& v : enumerate_words(c.m, n)) {
            Word key = m < c.m ? take(v, first_occurrence(v, m)) : v;
            std::size_t col = c(v);
            auto it = seen.find(key);
            if (it == seen.end()) seen.emplace(key, std::make_pair(v, col));
            else if (it->second.second != col) return std::make_pair(it->second.first, v);
        }
    return std::nullopt;
}

// Color of q̂ ∈ (ω)^{m+1} is the color of any q with the same μ(m)-prefix; the representative
// appends one fresh block for each of m..c.m−1.
inline PrefixColoring induced_coloring(std::size_t m, const PrefixColoring& c, std::size_t maxLen = 8) {
    if (m < 1 || m > c.m) throw std::invalid_argument("induced_coloring: m must lie in [1, " + std::to_string(c.m) + "]");
    if (auto bad = reducedness_violation(c, m, maxLen)) throw NotReduced(bad->first, bad->second);
    PrefixColoring out;
    out.k = m + 1;
    out.m = m;
    out.ell = c.ell;
    std::size_t top = c.m;
    out.color = [c, m, top](const Word& v) {
        Word q = v;
        for (std::size_t b = m; b < top; ++b) q.push_back(b);
        return c(q);
    };
    return out;
}

struct CslResult {
    Prefix z;
    std::size_t color = 0;
    std::size_t certifiedBlocks = 0;  // patterns whose m-th block opens at a z-block below this are certified
};

// CSL(m,ℓ) as used here: a coarsening z of base keeping base's first m blocks, and a color i
// with c(x↾μ^x(m)) = i for every x ∈ (z)^{m+1} that keeps z's first m blocks.
using CslOracle = std::function<CslResult(std::size_t m, std::size_t ell, const PrefixColoring& c, const Prefix& base)>;

namespace detail {

// Calls fn on every word x↾μ^x(m) with μ^x(m) = μ^z(cb), i.e. every way of folding z-blocks
// m..cb−1 into the first m.
template <class Fn>
bool for_each_fold(const Word& zprefix, std::size_t m, std::size_t cb, Fn&& fn) {
    std::size_t extra = cb - m;
    std::vector<std::size_t> rho(extra, 0);
    while (true) {
        Word v(zprefix.size());
        for (std::size_t u = 0; u < zprefix.size(); ++u) v[u] = zprefix[u] < m ? zprefix[u] : rho[zprefix[u] - m];
        if (!fn(v)) return false;
        std::size_t i = 0;
        while (i < extra && ++rho[i] == m) rho[i++] = 0;
        if (i == extra) return true;
    }
}

} // namespace detail

// Greedy search: walk the base blocks from m on, keep a block as a new z-block when every fold
// it creates has color i, otherwise merge it into block 0. No backtracking.
inline CslResult csl_finite_support_solver(std::size_t m, std::size_t ell, const PrefixColoring& c, const Prefix& base,
                                           std::size_t stages = 5, std::size_t searchBound = 64) {
    if (base.tail != Tail::Discrete) throw std::invalid_argument("csl solver needs a base with a discrete tail");
    for (std::size_t i = 0; i < ell; ++i) {
        std::vector<std::size_t> zb;
        for (std::size_t a = 0; a < m; ++a) zb.push_back(a);
        std::size_t nz = m;
        std::size_t scanned = 0;
        for (std::size_t b = m; b < searchBound && !scanned; ++b) {
            std::size_t L = mu(base, b);
            Word zprefix(L);
            for (std::size_t u = 0; u < L; ++u) zprefix[u] = zb[base.at(u)];
            bool good = detail::for_each_fold(zprefix, m, nz, [&](const Word& v) { return c(v) == i; });
            if (good) {
                zb.push_back(nz++);
                if (nz == m + stages) scanned = b + 1;
            } else {
                zb.push_back(0);
            }
        }
        if (!scanned) continue;
        std::size_t L = std::max(base.size(), mu(base, scanned));
        Word z(L);
        for (std::size_t u = 0; u < L; ++u) {
            std::size_t wb = base.at(u);
            z[u] = wb < scanned ? zb[wb] : nz + (wb - scanned);
        }
        return CslResult{Prefix(z, Tail::Discrete), i, nz};
    }
    throw NoSolutionFound("no color admits " + std::to_string(stages) + " new blocks within the first " +
                          std::to_string(searchBound) + " base blocks");
}

inline CslOracle make_csl_oracle(std::size_t stages = 5, std::size_t searchBound = 64) {
    return [stages, searchBound](std::size_t m, std::size_t ell, const PrefixColoring& c, const Prefix& base) {
        return csl_finite_support_solver(m, ell, c, base, stages, searchBound);
    };
}

// Independent re-check of an oracle answer; throws OracleSoundnessError.
inline void check_csl_result(std::size_t m, const PrefixColoring& c, const Prefix& base, const CslResult& r) {
    std::size_t L = std::max(base.size(), r.z.size());
    std::map<std::size_t, std::size_t> blockOf;
    for (std::size_t u = 0; u < L; ++u) {
        std::size_t wb = base.at(u), zv = r.z.at(u);
        if (wb < m && zv != wb)
            throw OracleSoundnessError("oracle collapsed base block " + std::to_string(wb) + " at position " +
                                       std::to_string(u));
        auto [it, fresh] = blockOf.emplace(wb, zv);
        if (!fresh && it->second != zv)
            throw OracleSoundnessError("oracle output splits base block " + std::to_string(wb));
    }
    for (std::size_t cb = m; cb < r.certifiedBlocks; ++cb) {
        Word zprefix = r.z.take(mu(r.z, cb));
        detail::for_each_fold(zprefix, m, cb, [&](const Word& v) {
            if (c(v) != r.color)
                throw OracleSoundnessError("oracle claims color " + std::to_string(r.color) + " but [" + format_word(v) +
                                           "] has color " + std::to_string(c(v)));
            return true;
        });
    }
}

inline Prefix star_compose(const Word& sigma, std::size_t m, const Prefix& x, std::size_t len) {
    Word w(len);
    for (std::size_t u = 0; u < len; ++u) w[u] = star_extension(sigma, m, x.at(u));
    return Prefix(w, Tail::Discrete);
}

struct ReduceRecord {
    std::size_t s = 0;
    std::size_t j = 0;
    Word sigma;
    Prefix before;  // x_s^j
    Prefix w;       // σ*_{s,j} ∘ x_s^j
    Prefix z;
    std::size_t color = 0;
    std::size_t certifiedLength = 0;
    Prefix after;   // x_s^{j+1}
    std::size_t cases[3] = {0, 0, 0};
};

struct ReduceResult {
    Prefix x;
    PrefixColoring next;  // reads the (m−1)-prefix of coarsenings of x
    std::vector<ReduceRecord> log;
    std::size_t checked = 0;
    std::size_t skipped = 0;
};

// One pass from an m-reduced to an (m−1)-reduced coloring on coarsenings of y.
inline ReduceResult reduce_once(const Prefix& y, const PrefixColoring& c, const CslOracle& oracle, std::size_t stages = 3) {
    std::size_t m = c.m;
    if (!(1 < m && m < c.k)) throw std::invalid_argument("reduce_once needs 1 < m < k");
    if (y.tail != Tail::Discrete) throw std::invalid_argument("reduce_once needs a base with a discrete tail");
    ReduceResult out;
    Prefix x = y;
    std::map<Word, std::pair<std::size_t, std::size_t>> byPattern;  // σ_{s,j} → (color, certified length)
    for (std::size_t s = m; s < m + stages; ++s) {
        std::size_t j = 0;
        for (const Word& sigma : enumerate_words(m, s)) {
            ReduceRecord rec;
            rec.s = s;
            rec.j = j++;
            rec.sigma = sigma;
            rec.before = x;
            std::size_t Lx = std::max(x.size(), mu(x, s));
            rec.w = star_compose(sigma, m, x, Lx);
            CslResult r = oracle(m, c.ell, c, rec.w);
            check_csl_result(m, c, rec.w, r);
            rec.z = r.z;
            rec.color = r.color;
            rec.certifiedLength = mu(r.z, r.certifiedBlocks);

            std::size_t L = std::max(Lx, r.z.size());
            Word next(L);
            for (std::size_t u = 0; u < L; ++u) {
                std::size_t xv = x.at(u), zv = r.z.at(u);
                if (xv < s) {
                    if (zv >= m) throw std::logic_error("uncollapse: case (1) position left the first m blocks");
                    next[u] = xv;
                    ++rec.cases[0];
                } else if (zv < m) {
                    next[u] = x.at(mu(r.z, zv));
                    ++rec.cases[1];
                } else {
                    next[u] = zv + (s - m);
                    ++rec.cases[2];
                }
            }
            rec.after = Prefix(next, Tail::Discrete);
            for (std::size_t u = 0; u < L + 4; ++u)
                if (star_extension(sigma, m, rec.after.at(u)) != r.z.at(u))
                    throw std::logic_error("uncollapse: σ*∘x_s^{j+1} differs from z at position " + std::to_string(u));
            byPattern[sigma] = {r.color, rec.certifiedLength};
            x = rec.after;
            out.log.push_back(std::move(rec));
        }
    }
    out.x = x;

    // Certified patterns: the m-th block of p opens at an x-block below S = m + stages and
    // its position lies inside the region the oracle certified for σ = p's collapse of the first s blocks.
    std::size_t S = m + stages;
    for (std::size_t len = m + 1; len <= S; ++len)
        for (const Word& r : enumerate_words(m + 1, len)) {
            if (first_occurrence(r, m) != len - 1) continue;
            std::size_t s = first_occurrence(r, m - 1) + 1;
            if (s >= S) continue;
            Word sigma = take(r, s);
            auto [col, certLen] = byPattern.at(sigma);
            std::size_t P = mu(x, len - 1);
            if (P >= certLen) {
                ++out.skipped;
                continue;
            }
            Word v = compose(take(r, len - 1), x.take(P));
            if (c(v) != col)
                throw std::logic_error("reduce_once: pattern " + format_word(r) + " has color " + std::to_string(c(v)) +
                                       " but its collapse was certified " + std::to_string(col));
            ++out.checked;
        }

    out.next.k = c.k;
    out.next.m = m - 1;
    out.next.ell = c.ell;
    Prefix xf = x;
    out.next.color = [c, xf, byPattern, m](const Word& v) {
        Word rho = lift_to_omega(v, Prefix(xf));
        Word sigma = rho;
        sigma.push_back(m - 1);
        auto it = byPattern.find(sigma);
        if (it != byPattern.end()) return it->second.first;
        // Outside the reduced region: evaluate one representative.
        std::size_t b = rho.size();
        Word q = compose(sigma, xf.take(mu(xf, b + 1)));
        return c(q);
    };
    return out;
}

// k−2 reductions, then pigeonhole on μ(1): the majority color among the decided block minima.
inline HomogeneityCertificate cdrt_k_driver(std::size_t k, const PrefixColoring& c, const CslOracle& oracle,
                                            std::size_t stages = 3, std::vector<ReduceResult>* passes = nullptr) {
    if (k < 3 || c.k != k || c.m != k - 1) throw std::invalid_argument("cdrt_k_driver needs k ≥ 3 and a (k−1)-prefix coloring");
    Prefix x(Word{0}, Tail::Discrete);
    PrefixColoring cur = c;
    while (cur.m > 1) {
        ReduceResult r = reduce_once(x, cur, oracle, stages);
        x = r.x;
        cur = r.next;
        if (passes) passes->push_back(r);
    }
    std::size_t S = 2 + stages;
    std::vector<std::size_t> count(c.ell, 0), colorOf(S, 0);
    for (std::size_t a = 1; a < S; ++a) {
        colorOf[a] = cur(Word(mu(x, a), 0));
        ++count.at(colorOf[a]);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.ell; ++i)
        if (count[i] > count[best]) best = i;
    std::vector<std::size_t> newIndex(S, 0);
    std::size_t next = 1;
    for (std::size_t a = 1; a < S; ++a)
        if (colorOf[a] == best) newIndex[a] = next++;
    std::size_t L = mu(x, S);
    Word z(L);
    for (std::size_t u = 0; u < L; ++u) z[u] = newIndex[x.at(u)];
    HomogeneityCertificate cert;
    cert.solver = "cdrtk";
    cert.kind = "pigeonhole";
    cert.k = k;
    cert.color = best;
    cert.prefix = Prefix(z, Tail::Undeclared);
    cert.decidedBound = next;
    return cert;
}

// Every full pattern over the decided blocks of a cdrtk certificate gets the certified color.
inline Verdict verify_prefix_certificate(const HomogeneityCertificate& cert, const PrefixColoring& c, std::size_t bound) {
    return check_patterns(cert.prefix, cert.k, bound, [&](const Word&, const Word& w) -> std::optional<std::string> {
        std::size_t got = c.of_point(w);
        if (got == cert.color) return std::nullopt;
        return "[" + format_word(w) + "] has color " + std::to_string(got);
    });
}

} // namespace drt
