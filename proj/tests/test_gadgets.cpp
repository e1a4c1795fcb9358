#include "drt/gadgets.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace drt;

namespace {

std::vector<Word> O_ab(std::size_t a, std::size_t b) {
    std::vector<Word> out;
    for (const Word& w : oracle::words(3, b + 1))
        if (first_occurrence(w, 1) == a && first_occurrence(w, 2) == b) out.push_back(w);
    return out;
}

bool in_range(const InjectionPresentation& g, std::size_t n) {
    for (const auto& [t, v] : g.g)
        if (v == n) return true;
    return false;
}

Prefix from_minima(const std::vector<std::size_t>& mins) {
    Word w;
    for (std::size_t b = 0; b + 1 < mins.size(); ++b)
        while (w.size() < mins[b + 1]) w.push_back(b);
    w.push_back(mins.size() - 1);
    return Prefix(w);
}

ModulusFunction doubling() { return ModulusFunction{{0, 2}, 2}; }

} // namespace

TEST(Prop213, Coloring) {
    EXPECT_EQ(prop213_coloring({0, 1, 2}), 0);
    EXPECT_EQ(prop213_coloring({0, 1, 1, 2}), 1);
    EXPECT_EQ(prop213_coloring({0, 1, 2, 2}), 0);
    EXPECT_THROW(prop213_coloring({0, 1}), std::invalid_argument);
    EXPECT_THROW(prop213_coloring({0, 2, 1}), std::invalid_argument);
}

TEST(Prop213, WitnessesOnDiscretePrefix) {
    Prop213Witnesses w = prop213_witnesses(Prefix({0, 1}, Tail::Discrete), 1);
    EXPECT_EQ(w.N, 4u);
    EXPECT_NE(w.colorX, w.colorY);
    EXPECT_EQ(prop213_coloring(w.x), w.colorX);
    EXPECT_EQ(prop213_coloring(w.y), w.colorY);
}

TEST(Prop213, WitnessesAreCoarseningsWithSplitColors) {
    oracle::Rng rng(60);
    for (int trial = 0; trial < 60; ++trial) {
        // Finite blocks of random sizes, then singletons.
        Word w{0};
        std::size_t blocks = oracle::uniform(rng, 1, 4);
        for (std::size_t b = 1; b <= blocks; ++b)
            for (std::size_t r = oracle::uniform(rng, 1, 3); r > 0; --r) {
                w.push_back(b);
                if (oracle::coin(rng, 0.3)) w.push_back(0);
            }
        Prefix p(w, Tail::Discrete);
        std::size_t i = oracle::uniform(rng, 1, blocks);
        Prop213Witnesses out = prop213_witnesses(p, i);
        Word full = p.take(out.x.size());
        for (const Word* x : {&out.x, &out.y}) {
            ASSERT_TRUE(in_fin(*x, 3));
            // Constant on each block of p.
            for (std::size_t n = 0; n < full.size(); ++n)
                for (std::size_t m = 0; m < n; ++m)
                    if (full[n] == full[m]) EXPECT_EQ((*x)[n], (*x)[m]);
        }
        EXPECT_NE(prop213_coloring(out.x), prop213_coloring(out.y));
    }
}

TEST(Prop213, NeedsAFiniteBlock) {
    EXPECT_THROW(prop213_witnesses(Prefix({0, 1, 2})), std::invalid_argument);
}

TEST(OpenClosed, EmptyInjectionGivesEmptyCode) {
    OpenCode O = open_closed_gadget(InjectionPresentation{{}, 20}, 20);
    for (std::size_t n = 3; n <= 8; ++n)
        for (const Word& w : oracle::words(3, n)) EXPECT_FALSE(cylinder_inside(O, w)) << format_word(w);
}

TEST(OpenClosed, SingleEntryByFormula) {
    InjectionPresentation g{{{7, 5}}, 20};
    OpenCode O = open_closed_gadget(g, 20);
    for (std::size_t b = 2; b <= 10; ++b)
        for (std::size_t a = 1; a < b; ++a) {
            bool expect = a >= 5 && b < 7;
            for (const Word& s : O_ab(a, b)) EXPECT_EQ(cylinder_inside(O, s), expect) << format_word(s);
        }
}

TEST(OpenClosed, BlocksAreWhole) {
    oracle::Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        InjectionPresentation g = gen::injection(rng, 12, 8, 12);
        OpenCode O = open_closed_gadget(g, 12);
        for (std::size_t b = 2; b <= 8; ++b)
            for (std::size_t a = 1; a < b; ++a) {
                std::vector<Word> os = O_ab(a, b);
                bool first = cylinder_inside(O, os.front());
                for (const Word& s : os) EXPECT_EQ(cylinder_inside(O, s), first) << format_word(s);
                bool direct = false;
                for (const auto& [t, u] : g.g) direct = direct || (u <= a && b < t && t <= 12);
                EXPECT_EQ(first, direct);
            }
    }
}

TEST(OpenClosed, RejectsNonInjective) {
    EXPECT_THROW(open_closed_gadget(InjectionPresentation{{{1, 4}, {2, 4}}, 5}, 5), std::invalid_argument);
}

TEST(OpenClosed, DecodeAgreesWithTable) {
    InjectionPresentation g{{{3, 4}}, 40};
    Prefix p = open_closed_partition(g, 40);
    EXPECT_FALSE(open_closed_violation(p, g));
    EXPECT_TRUE(open_closed_decode(p, g, 4));
    EXPECT_FALSE(open_closed_decode(p, g, 2));

    oracle::Rng rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        InjectionPresentation h = gen::injection(rng);
        Prefix q = open_closed_partition(h, 40);
        EXPECT_FALSE(open_closed_violation(q, h));
        for (std::size_t n = 0; n <= 30; ++n) EXPECT_EQ(open_closed_decode(q, h, n), in_range(h, n)) << n;
    }
}

TEST(OpenClosed, DecodeNeedsEnoughTable) {
    InjectionPresentation g{{{3, 4}}, 5};
    EXPECT_THROW(open_closed_decode(Prefix({0, 1}, Tail::Discrete), g, 9), ExtensionRequired);
}

TEST(Modulus, IdentityAlwaysDominates) {
    ModulusFunction id{{}, 1};
    EXPECT_FALSE(modulus_claim2_violation(Prefix({0, 1}, Tail::Discrete), id));
    EXPECT_FALSE(modulus_claim2_violation(from_minima({0, 3, 7, 8}), id));
}

TEST(Modulus, DoublingSpreadVersusDense) {
    EXPECT_FALSE(modulus_claim2_violation(from_minima({0, 1, 2, 4, 8, 16}), doubling()));
    auto bad = modulus_claim2_violation(Prefix({0, 1, 2, 3, 4, 5}), doubling());
    ASSERT_TRUE(bad);
    EXPECT_EQ(*bad, 1u);
}

TEST(Modulus, RejectsNonIncreasingTable) {
    EXPECT_THROW(modulus_gadget(ModulusFunction{{0, 3, 3}, 1}), std::invalid_argument);
    EXPECT_THROW(modulus_gadget(ModulusFunction{{0}, 0}), std::invalid_argument);
}

TEST(Modulus, CodeMatchesInequality) {
    ModulusGadget G = modulus_gadget(doubling());
    for (std::size_t b = 2; b <= 9; ++b)
        for (std::size_t a = 1; a < b; ++a)
            for (const Word& s : O_ab(a, b)) {
                EXPECT_EQ(cylinder_inside(G.R, s), 2 * a <= b) << format_word(s);
                EXPECT_EQ(cylinder_inside(G.Rbar, s), 2 * a > b) << format_word(s);
            }
}

TEST(Modulus, ClaimOneWitness) {
    ModulusGadget G = modulus_gadget(doubling());
    Prefix p = from_minima({0, 3, 4, 5, 9, 12});
    Word x = modulus_claim1_witness(p, doubling());
    EXPECT_TRUE(in_fin(x, 3));
    EXPECT_EQ(first_occurrence(x, 2), 9u);
    EXPECT_TRUE(cylinder_inside(G.R, x));
    EXPECT_THROW(modulus_claim1_witness(from_minima({0, 3, 4}), doubling()), ExtensionRequired);
}

TEST(Modulus, HomogeneousPrefixesDominate) {
    oracle::Rng rng(63);
    ModulusFunction f{{0, 1, 3, 6}, 3};
    std::size_t homogeneous = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::size_t> mins{0};
        for (std::size_t b = oracle::uniform(rng, 2, 6); b > 0; --b)
            mins.push_back(mins.back() + oracle::uniform(rng, 1, 12));
        Prefix p = from_minima(mins);
        bool allPairs = true;
        for (std::size_t x = 1; x < mins.size(); ++x)
            for (std::size_t y = x + 1; y < mins.size(); ++y) allPairs = allPairs && f(mins[x]) <= mins[y];
        EXPECT_EQ(!modulus_violation(p, f).has_value(), allPairs);
        if (!allPairs) continue;
        ++homogeneous;
        EXPECT_FALSE(modulus_claim2_violation(p, f));
    }
    EXPECT_GT(homogeneous, 10u);
}

TEST(Adversary, FirstBlockIsDiagonalizedAtOne) {
    auto fs = builtin_functionals();
    AdversaryTranscript tr = nonuniform_adversary(fs.at("builtin:firstblock"), 50, "builtin:firstblock");
    EXPECT_EQ(tr.verdict, "diagonalized");
    EXPECT_EQ(tr.k, 1u);
    EXPECT_EQ(tr.q0, (Word{0, 1}));
    ReplayVerdict v = replay_transcript(fs.at("builtin:firstblock"), tr);
    EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Adversary, NeverCommittingIsNotTotal) {
    auto fs = builtin_functionals();
    EXPECT_EQ(nonuniform_adversary(fs.at("builtin:never"), 40).verdict, "not-total");
    EXPECT_EQ(nonuniform_adversary(fs.at("builtin:silent"), 40).verdict, "not-total");
}

TEST(Adversary, EveryBuiltinLoses) {
    auto fs = builtin_functionals();
    EXPECT_EQ(fs.size(), 20u);
    for (const auto& [name, d] : fs) {
        AdversaryTranscript tr = nonuniform_adversary(d, 200, name);
        EXPECT_TRUE(tr.verdict == "diagonalized" || tr.verdict == "not-total") << name;
        ReplayVerdict v = replay_transcript(d, tr);
        EXPECT_TRUE(v.pass) << name << ": " << v.detail;
        if (tr.verdict != "diagonalized") continue;
        // Exact membership in the frozen oracles, independent of the transcript's own check.
        AdversaryOracle fin{tr.stage, tr.side, 0, {}};
        EXPECT_TRUE(fin.member(tr.side, tr.q0)) << name;
        EXPECT_FALSE(fin.member(1 - tr.side, tr.q0)) << name;
        EXPECT_TRUE(fin.member(1 - tr.side, tr.q1)) << name;
        EXPECT_FALSE(fin.member(tr.side, tr.q1)) << name;
    }
}

TEST(Adversary, ReplayCatchesForgedWitness) {
    auto fs = builtin_functionals();
    AdversaryTranscript tr = nonuniform_adversary(fs.at("builtin:firstblock"), 50);
    ASSERT_EQ(tr.verdict, "diagonalized");
    AdversaryTranscript forged = tr;
    forged.q1 = tr.q0;
    EXPECT_FALSE(replay_transcript(fs.at("builtin:firstblock"), forged).pass);
    forged = tr;
    forged.committed.push_back(0);
    EXPECT_FALSE(replay_transcript(fs.at("builtin:firstblock"), forged).pass);
}

TEST(Hindman, BlockPartition) {
    EXPECT_EQ(hindman_block_partition({1}, 2).entries, (Word{0, 1, 2}));
    EXPECT_EQ(hindman_block_partition({2, 3}, 5).entries, (Word{0, 0, 1, 1, 0, 2}));
    oracle::Rng rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> F;
        for (std::size_t f = 1; f <= 8; ++f)
            if (oracle::coin(rng)) F.push_back(f);
        if (F.empty()) F.push_back(3);
        std::size_t n = F.back() + oracle::uniform(rng, 1, 4);
        Word w = hindman_block_partition(F, n).entries;
        std::vector<std::size_t> B1;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] == 1) B1.push_back(i);
        EXPECT_EQ(B1, F);
        EXPECT_EQ(first_occurrence(w, 2), n);
    }
    EXPECT_THROW(hindman_block_partition({0, 2}, 3), std::invalid_argument);
    EXPECT_THROW(hindman_block_partition({2}, 2), std::invalid_argument);
    EXPECT_THROW(hindman_block_partition({}, 2), std::invalid_argument);
}

TEST(Hindman, ReducedColoringSeesOnlyTheShape) {
    // Reads μ(1) and μ(2) only.
    auto c = [](const Word& v) { return int((first_occurrence(v, 1) + first_occurrence(v, 2)) % 2); };
    oracle::Rng rng(65);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> F{oracle::uniform(rng, 1, 3)};
        std::size_t n = F[0] + oracle::uniform(rng, 1, 3);
        Word x = hindman_block_partition(F, n).entries;
        Word y = x;
        for (std::size_t r = oracle::uniform(rng, 0, 4); r > 0; --r) y.push_back(oracle::uniform(rng, 0, 2));
        EXPECT_EQ(c(y), c(x));
    }
}

TEST(Hindman, ConstantColoringExtends) {
    ShapeColoring c = [](const std::vector<std::size_t>&, std::size_t) { return 0; };
    HindmanCondition cond = initial_condition(c, 20);
    EXPECT_EQ(cond.m, 2u);
    for (int step = 0; step < 3; ++step) {
        cond = condition_extend(cond, c, 20);
        for (int d : cond.delta) EXPECT_EQ(d, 0);
    }
    EXPECT_EQ(cond.F, (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(Hindman, MoreOnesThanTwosExtends) {
    ShapeColoring c = shape_coloring(prop213_coloring);
    HindmanCondition cond = initial_condition(c, 20);
    HindmanCondition next = condition_extend(cond, c, 20);
    EXPECT_TRUE(condition_holds(next, c, 20));
    auto subs = nonempty_subsets(next.F);
    for (std::size_t j = 0; j < subs.size(); ++j) EXPECT_EQ(next.delta[j], subs[j].size() >= 2 ? 1 : 0);
}

TEST(Hindman, SearchBoundTooSmall) {
    ShapeColoring c = [](const std::vector<std::size_t>&, std::size_t) { return 0; };
    HindmanCondition cond = initial_condition(c, 20);
    EXPECT_THROW(condition_extend(cond, c, cond.m), NoSolutionFound);
    HindmanCondition broken = cond;
    broken.delta = {1};
    EXPECT_THROW(condition_extend(broken, c, 20), std::invalid_argument);
}

TEST(Prop214, Transform) {
    SetColoring parity = [](const std::vector<std::size_t>& s) { return int(s.size() % 2); };
    SetColoring sum = [](const std::vector<std::size_t>& s) {
        std::size_t t = 0;
        for (std::size_t x : s) t += x;
        return int(t % 3);
    };
    auto hat = prop214_transform(parity);
    EXPECT_EQ(hat({0, 1}), parity({1}));
    EXPECT_EQ(prop214_transform(sum)({0, 1, 1}), sum({1, 2}));
    EXPECT_EQ(prop214_transform(sum)({0, 1, 0, 1}), sum({1, 3}));
    EXPECT_THROW(hat({0, 0}), std::invalid_argument);
}

TEST(Prop214, UnionsOfHandBuiltBlocks) {
    SetColoring parity = [](const std::vector<std::size_t>& s) { return int(s.size() % 2); };
    UnionCheck even = finite_unions_monochromatic(Prefix({0, 1, 1, 2, 2}, Tail::Zero), parity);
    EXPECT_TRUE(even.monochromatic);
    EXPECT_EQ(even.color, 0);
    UnionCheck mixed = finite_unions_monochromatic(Prefix({0, 1, 2, 2}, Tail::Zero), parity);
    EXPECT_FALSE(mixed.monochromatic);
    EXPECT_EQ(mixed.first, (std::vector<std::size_t>{1}));
    EXPECT_EQ(mixed.second, (std::vector<std::size_t>{2}));
    EXPECT_THROW(finite_unions_monochromatic(Prefix({0, 1, 2, 1}, Tail::Zero), parity), std::invalid_argument);
}

TEST(Prop214, UnionsMatchBruteForce) {
    oracle::Rng rng(66);
    for (int trial = 0; trial < 100; ++trial) {
        Word w{0};
        std::size_t blocks = oracle::uniform(rng, 1, 4);
        for (std::size_t b = 1; b <= blocks; ++b)
            for (std::size_t r = oracle::uniform(rng, 1, 2); r > 0; --r) w.push_back(b);
        std::size_t q = oracle::uniform(rng, 2, 5);
        SetColoring c = [q](const std::vector<std::size_t>& s) {
            std::size_t t = 0;
            for (std::size_t x : s) t += x * x;
            return int(t % q == 0);
        };
        std::set<int> colors;
        for (std::size_t mask = 1; mask < (std::size_t{1} << blocks); ++mask) {
            std::vector<std::size_t> set;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i] > 0 && (mask >> (w[i] - 1) & 1)) set.push_back(i);
            colors.insert(c(set));
        }
        UnionCheck u = finite_unions_monochromatic(Prefix(w, Tail::Zero), c);
        EXPECT_EQ(u.monochromatic, colors.size() == 1) << format_word(w);
    }
}
