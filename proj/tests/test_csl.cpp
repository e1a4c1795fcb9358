#include "drt/csl.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace drt;

namespace {

PrefixColoring by_length_parity(std::size_t k, std::size_t m) {
    PrefixColoring c;
    c.k = k;
    c.m = m;
    c.ell = 2;
    c.color = [](const Word& v) { return v.size() % 2; };
    return c;
}

PrefixColoring constant(std::size_t k, std::size_t m) {
    PrefixColoring c;
    c.k = k;
    c.m = m;
    c.ell = 2;
    c.color = [](const Word&) { return std::size_t(0); };
    return c;
}

// Parity of the number of entries equal to 1: two folds of one extra block disagree.
PrefixColoring ones_parity() {
    PrefixColoring c;
    c.k = 3;
    c.m = 2;
    c.ell = 2;
    c.color = [](const Word& v) { return std::size_t(std::count(v.begin(), v.end(), 1) % 2); };
    return c;
}

} // namespace

TEST(Reducedness, ScanFindsViolation) {
    EXPECT_FALSE(reducedness_violation(by_length_parity(3, 2), 2, 7));
    // Length parity is not 1-reduced: ⟨0,1⟩ and ⟨0,1,1⟩ share μ(1) but not their length.
    EXPECT_TRUE(reducedness_violation(by_length_parity(3, 2), 1, 7));
    PrefixColoring firstBlock = constant(3, 2);
    firstBlock.color = [](const Word& v) { return first_occurrence(v, 1) % 2; };
    EXPECT_FALSE(reducedness_violation(firstBlock, 1, 7));
}

TEST(InducedColoring, Constant) {
    PrefixColoring ind = induced_coloring(1, constant(3, 2));
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(ind(Word(n, 0)), 0u);
}

TEST(InducedColoring, ParityUnfolds) {
    PrefixColoring c = by_length_parity(3, 2);
    PrefixColoring ind = induced_coloring(2, c);
    EXPECT_EQ(ind.k, 3u);
    for (std::size_t n = 2; n <= 7; ++n)
        for (const Word& v : oracle::words(2, n)) EXPECT_EQ(ind(v), n % 2) << format_word(v);
    EXPECT_FALSE(reducedness_violation(ind, 2, 7));
}

TEST(InducedColoring, RejectsUnreducedInput) {
    EXPECT_THROW(induced_coloring(1, by_length_parity(3, 2)), NotReduced);
}

TEST(CslSolver, ConstantKeepsBase) {
    Prefix base({0, 1, 2}, Tail::Discrete);
    CslResult r = csl_finite_support_solver(2, 2, constant(3, 2), base, 4);
    EXPECT_EQ(r.color, 0u);
    EXPECT_EQ(r.z.take(12), base.take(12));
    EXPECT_NO_THROW(check_csl_result(2, constant(3, 2), base, r));
}

TEST(CslSolver, ParitySelectsSameParityMinima) {
    PrefixColoring c = by_length_parity(3, 2);
    Prefix base({0, 1}, Tail::Discrete);
    CslResult r = csl_finite_support_solver(2, 2, c, base, 4);
    EXPECT_NO_THROW(check_csl_result(2, c, base, r));
    for (std::size_t b = 2; b < r.certifiedBlocks; ++b) EXPECT_EQ(mu(r.z, b) % 2, r.color) << b;
    // Independent scan: every 3-block coarsening keeping z's first two blocks, with its third
    // block opening at a certified z-block, gets the certified color.
    std::size_t checked = 0;
    for (std::size_t b = 2; b < r.certifiedBlocks; ++b)
        for (const Word& sigma : oracle::words(3, b + 1)) {
            if (sigma[1] != 1 || first_occurrence(sigma, 2) != b) continue;
            Word v = oracle::compose(take(sigma, b), r.z.take(mu(r.z, b)));
            EXPECT_EQ(c(v), r.color) << format_word(sigma);
            ++checked;
        }
    EXPECT_GT(checked, 4u);
}

TEST(CslSolver, AdversarialColoringHasNoSolution) {
    EXPECT_THROW(csl_finite_support_solver(2, 2, ones_parity(), Prefix({0, 1}, Tail::Discrete), 2, 40), NoSolutionFound);
}

TEST(CslSolver, CheckerRejectsForgedAnswer) {
    PrefixColoring c = by_length_parity(3, 2);
    Prefix base({0, 1}, Tail::Discrete);
    CslResult r = csl_finite_support_solver(2, 2, c, base, 3);
    r.color = 1 - r.color;
    EXPECT_THROW(check_csl_result(2, c, base, r), OracleSoundnessError);
}

TEST(ReduceOnce, ConstantLeavesBaseAlone) {
    Prefix y({0}, Tail::Discrete);
    ReduceResult r = reduce_once(y, constant(3, 2), make_csl_oracle(3), 3);
    EXPECT_EQ(r.x.take(20), y.take(20));
}

TEST(ReduceOnce, ParityBecomesOneReduced) {
    PrefixColoring c = by_length_parity(3, 2);
    const std::size_t stages = 3;
    ReduceResult r = reduce_once(Prefix({0}, Tail::Discrete), c, make_csl_oracle(4), stages);
    EXPECT_GT(r.checked, 0u);

    // Bookkeeping on every logged step.
    for (const ReduceRecord& rec : r.log) {
        for (std::size_t u = 0; u < rec.z.size() + 4; ++u)
            EXPECT_EQ(star_extension(rec.sigma, 2, rec.after.at(u)), rec.z.at(u));
        for (std::size_t u = 0; u < rec.w.size(); ++u)
            EXPECT_EQ(rec.w.at(u), star_extension(rec.sigma, 2, rec.before.at(u)));
    }

    // Exhaustive over decided patterns: equal μ(1)-prefix means equal color, inside the certified region.
    std::map<Word, std::size_t> certLen;
    for (const ReduceRecord& rec : r.log) certLen[rec.sigma] = rec.certifiedLength;
    std::map<Word, std::size_t> colorOf;
    std::size_t S = 2 + stages;
    for (std::size_t len = 3; len <= S; ++len)
        for (const Word& p : oracle::words(3, len)) {
            if (first_occurrence(p, 2) != len - 1) continue;
            std::size_t s = first_occurrence(p, 1) + 1;
            if (s >= S) continue;
            std::size_t P = mu(r.x, len - 1);
            if (P >= certLen.at(take(p, s))) continue;
            Word v = oracle::compose(take(p, len - 1), r.x.take(P));
            Word key = take(v, first_occurrence(v, 1));
            auto [it, fresh] = colorOf.emplace(key, c(v));
            if (!fresh) EXPECT_EQ(it->second, c(v)) << format_word(p);
        }
    EXPECT_FALSE(colorOf.empty());
}

TEST(ReduceOnce, RejectsBadArguments) {
    EXPECT_THROW(reduce_once(Prefix({0}), constant(3, 2), make_csl_oracle()), std::invalid_argument);
    EXPECT_THROW(reduce_once(Prefix({0}, Tail::Discrete), constant(3, 1), make_csl_oracle()), std::invalid_argument);
}

TEST(CdrtK, ConstantColoring) {
    HomogeneityCertificate cert = cdrt_k_driver(3, constant(3, 2), make_csl_oracle(3), 3);
    EXPECT_EQ(cert.color, 0u);
    EXPECT_TRUE(verify_prefix_certificate(cert, constant(3, 2), cert.decidedBound).pass);
}

TEST(CdrtK, ParityOfSecondBlockMinimum) {
    PrefixColoring c = by_length_parity(3, 2);
    HomogeneityCertificate cert = cdrt_k_driver(3, c, make_csl_oracle(4), 3);
    Verdict v = verify_prefix_certificate(cert, c, cert.decidedBound);
    EXPECT_TRUE(v.pass) << v.detail;
    EXPECT_GT(v.checked, 0u);
    // Brute force over the same patterns.
    Word z = cert.prefix.entries;
    for (const Word& sigma : oracle::words(3, cert.decidedBound)) {
        Word x = oracle::compose(sigma, z);
        EXPECT_EQ(first_occurrence(x, 2) % 2, cert.color) << format_word(sigma);
    }
}

TEST(CdrtK, FourBlocksReadingOnlyTheFirstMinimum) {
    PrefixColoring c;
    c.k = 4;
    c.m = 3;
    c.ell = 2;
    c.color = [](const Word& v) { return first_occurrence(v, 1) % 2; };
    std::vector<ReduceResult> passes;
    HomogeneityCertificate cert = cdrt_k_driver(4, c, make_csl_oracle(3), 2, &passes);
    EXPECT_EQ(passes.size(), 2u);
    EXPECT_TRUE(verify_prefix_certificate(cert, c, cert.decidedBound).pass);
}
