#include "drt/baire.hpp"
#include "drt/baire_approx.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace drt;

namespace {

// [w] ⊆ O by definition: some initial segment of w is listed.
bool inside_brute(const std::vector<Word>& listed, const std::function<bool(const Word&)>& rule, std::size_t k,
                  const Word& w) {
    for (const Word& s : listed)
        if (oracle::starts_with(w, s)) return true;
    if (rule)
        for (std::size_t n = k; n <= w.size(); ++n) {
            Word pre(w.begin(), w.begin() + n);
            if (oracle::distinct(pre) == k && rule(pre)) return true;
        }
    return false;
}

OpenCode random_finite_code(oracle::Rng& rng, std::size_t k, std::size_t maxLen, std::size_t maxPairs) {
    std::vector<CodePair> pairs;
    std::size_t n = oracle::uniform(rng, 0, maxPairs);
    for (std::size_t i = 0; i < n; ++i) pairs.push_back({i, oracle::random_fin(rng, k, maxLen)});
    return explicit_code(k, pairs);
}

std::vector<Word> words_of(const OpenCode& c) {
    std::vector<Word> out;
    for (const auto& p : c.pairs) out.push_back(p.word);
    return out;
}

} // namespace

TEST(OpenMember, Examples) {
    OpenCode c = explicit_code(2, {{0, {0, 1}}});
    auto m = open_member(c, Prefix({0, 1}, Tail::Zero));
    EXPECT_EQ(m.answer, Answer::Yes);
    ASSERT_TRUE(m.witness);
    EXPECT_EQ(m.witness->word, (Word{0, 1}));

    EXPECT_EQ(open_member(explicit_code(2, {}), Prefix({0, 1, 1}, Tail::Zero)).answer, Answer::No);
    EXPECT_EQ(open_member(explicit_code(2, {{0, {0, 0, 1}}}), Prefix({0, 1}, Tail::Zero)).answer, Answer::No);
    // ⟨0,0,1,…⟩ does not extend ⟨0,1⟩, so [⟨0,1⟩] is not the whole space.
    EXPECT_EQ(open_member(c, Prefix({0, 0, 1}, Tail::Zero)).answer, Answer::No);
}

TEST(OpenMember, ShortPrefixNeedsExtension) {
    OpenCode c = explicit_code(2, {{0, {0, 0, 0, 1}}});
    try {
        open_member(c, Prefix({0, 0}));
        FAIL();
    } catch (const ExtensionRequired& e) {
        EXPECT_EQ(e.needed(), 4u);
    }
}

TEST(OpenMember, GeneratorBackedAnswersUnknown) {
    // Second block opens at an even position.
    OpenCode even = rule_code(2, [](const Word& w) { return w.back() == 1 && w.size() % 2 == 0 &&
                                                        first_occurrence(w, 1) == w.size() - 1; });
    EXPECT_EQ(open_member(even, Prefix({0, 1}, Tail::Zero)).answer, Answer::Yes);
    EXPECT_EQ(open_member(even, Prefix({0, 0, 0}), 100).answer, Answer::Unknown);
    EXPECT_EQ(open_member(even, Prefix(Word(50, 0)), 10).answer, Answer::Unknown);
}

TEST(OpenMember, AgreesWithPrefixScanOnRandomCodes) {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t k = oracle::uniform(rng, 1, 3);
        OpenCode c = random_finite_code(rng, k, 5, 4);
        Prefix p = oracle::random_point(rng, k, 6);
        bool want = inside_brute(words_of(c), nullptr, k, p.take(6));
        EXPECT_EQ(open_member(c, p).answer == Answer::Yes, want);
        EXPECT_EQ(closed_member(ClosedCode{c}, p).answer == Answer::Yes, !want);
    }
}

TEST(DensitySearch, FullSpace) {
    BaireColoring bc;
    bc.k = 2;
    bc.colors = {full_code(2)};
    bc.dense = {full_code(2), full_code(2), full_code(2)};
    DensityHit h = density_search(bc, {0, 1}, 3);
    EXPECT_EQ(h.color, 0u);
    EXPECT_EQ(h.delta, (Word{0, 1, 0}));
    EXPECT_TRUE(density_hit_valid(bc, {0, 1}, 3, h));
}

TEST(DensitySearch, LeastExtensionMatchesExhaustiveSearch) {
    auto evenOne = [](const Word& w) { return w.back() == 1 && w.size() % 2 == 0; };
    auto rest = [evenOne](const Word& w) { return !evenOne(w); };
    BaireColoring bc;
    bc.k = 2;
    bc.colors = {rule_code(2, evenOne, 8), rule_code(2, rest, 8)};
    for (const Word& t : {Word{0, 1, 0}, Word{0, 0, 1}, Word{0, 0, 0, 1, 1}}) {
        DensityHit h = density_search(bc, t, 0);
        std::optional<std::pair<Word, std::size_t>> want;
        for (std::size_t len = t.size() + 1; len <= 8 && !want; ++len)
            for (const Word& w : oracle::words(2, len)) {
                if (!oracle::starts_with(w, t)) continue;
                if (inside_brute({}, evenOne, 2, w)) want = {{w, 0}};
                else if (inside_brute({}, rest, 2, w)) want = {{w, 1}};
                if (want) break;
            }
        ASSERT_TRUE(want);
        EXPECT_EQ(h.delta, want->first) << format_word(t);
        EXPECT_EQ(h.color, want->second) << format_word(t);
    }
}

TEST(DensitySearch, NonDenseFamilyIsReported) {
    BaireColoring bc;
    bc.k = 2;
    bc.colors = {full_code(2)};
    bc.dense = {explicit_code(2, {{0, {0, 0, 1}}})};
    try {
        density_search(bc, {0, 1}, 1);
        FAIL();
    } catch (const DensityFailure& e) {
        EXPECT_NE(std::string(e.what()).find("D_0"), std::string::npos) << e.what();
    }
}

TEST(DensitySearch, SoundOnRandomFiniteColorings) {
    oracle::Rng rng(8);
    int hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        BaireColoring bc;
        bc.k = 2;
        // Two colors split by the parity of the second block minimum, cut off at a random support.
        std::size_t sup = oracle::uniform(rng, 3, 7);
        std::size_t shift = oracle::uniform(rng, 0, 1);
        for (std::size_t i = 0; i < 2; ++i)
            bc.colors.push_back(rule_code(2, [i, shift](const Word& w) {
                return (first_occurrence(w, 1) + shift) % 2 == i;
            }, sup));
        bc.dense = {random_finite_code(rng, 2, 5, 3)};
        Word t = oracle::random_fin(rng, 2, 4);
        std::size_t s = oracle::uniform(rng, 0, 1);
        try {
            DensityHit h = density_search(bc, t, s);
            EXPECT_TRUE(density_hit_valid(bc, t, s, h));
            ++hits;
        } catch (const DensityFailure&) {
            // Then no extension up to the support is inside D_0 and a color.
            bool any = false;
            for (std::size_t len = t.size() + 1; len <= sup && !any; ++len)
                for (const Word& w : oracle::words(2, len))
                    if (oracle::starts_with(w, t) && (s == 0 || inside_brute(words_of(bc.dense[0]), nullptr, 2, w)))
                        any = true;
            EXPECT_FALSE(any) << format_word(t);
        }
    }
    EXPECT_GT(hits, 20);
}

TEST(ClosedCodeBaire, EmptyCode) {
    ClosedSplit s = closed_code_baire(ClosedCode{explicit_code(2, {})});
    EXPECT_TRUE(s.Vopen.pairs.empty());
    for (const Word& w : oracle::words(2, 4)) EXPECT_TRUE(cylinder_inside(s.U, w));
}

TEST(ClosedCodeBaire, SingleCylinder) {
    ClosedSplit s = closed_code_baire(ClosedCode{explicit_code(2, {{0, {0, 1}}})});
    EXPECT_FALSE(cylinder_inside(s.U, {0, 1}));
    EXPECT_FALSE(cylinder_inside(s.U, {0, 1, 1}));
    EXPECT_TRUE(cylinder_inside(s.U, {0, 0, 1}));
    EXPECT_TRUE(cylinder_inside(s.Vopen, {0, 1, 0}));
    EXPECT_FALSE(cylinder_inside(s.Vopen, {0, 0, 1}));
}

TEST(ClosedCodeBaire, ExactOnRandomCodes) {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        OpenCode c = random_finite_code(rng, 2, 6, 4);
        ClosedCode V{c};
        ClosedSplit s = closed_code_baire(V);
        for (std::size_t len = 2; len <= 6; ++len)
            for (const Word& w : oracle::words(2, len)) {
                Prefix p(w, Tail::Zero);
                bool inV = !inside_brute(words_of(c), nullptr, 2, p.take(6));
                EXPECT_EQ(closed_member(V, p).answer == Answer::Yes, inV);
                EXPECT_EQ(open_member(s.Vopen, p).answer == Answer::Yes, !inV);
                if (cylinder_inside(s.U, w)) EXPECT_TRUE(inV) << format_word(w);
                // Density of U ∪ Vopen at length 6.
                if (len == 6) EXPECT_TRUE(cylinder_inside(s.U, w) || cylinder_inside(s.Vopen, w));
            }
    }
}

namespace {

NFNode sigma2(std::vector<Clopen> fills) {
    NFNode root;
    root.fill = empty_set();
    for (auto& f : fills) root.children.push_back(nf_constant(f));
    return root;
}

Word zeros_one(std::size_t n) {
    Word w(n, 0);
    w.push_back(1);
    return w;
}


} // namespace

TEST(BaireApproximation, FullEverywhere) {
    NormalFormCode N{2, sigma2({full_set()})};
    BaireApproximation a = baire_approximation(N, 6);
    for (std::size_t i = 0; i < a.universe->size(); ++i) {
        EXPECT_TRUE(a.U[i]);
        EXPECT_FALSE(a.V[i]);
    }
}

TEST(BaireApproximation, EvenRunsOfZeros) {
    NormalFormCode N{2, sigma2({cyl(zeros_one(2)), cyl(zeros_one(4)), cyl(zeros_one(6))})};
    BaireApproximation a = baire_approximation(N, 8);
    const WordUniverse& u = *a.universe;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Word& w = u.words[i];
        bool want = false;
        for (std::size_t n : {2, 4, 6})
            if (oracle::starts_with(w, zeros_one(n))) want = true;
        if (w.size() == u.L) {
            EXPECT_EQ(bool(a.U[i]), want) << format_word(w);
            EXPECT_EQ(bool(a.V[i]), !want) << format_word(w);
        }
        EXPECT_EQ(eta_evaluate(N, oracle::point_for(w)), want) << format_word(w);
    }
}

TEST(BaireApproximation, SortsRandomDepthTwoCodes) {
    oracle::Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        NFNode root;
        root.fill = oracle::coin(rng, 0.2) ? oracle::random_clopen(rng, 2, 4) : empty_set();
        std::size_t n = oracle::uniform(rng, 1, 3);
        for (std::size_t j = 0; j < n; ++j) {
            NFNode child;
            child.fill = oracle::random_clopen(rng, 2, 5);
            std::size_t m = oracle::uniform(rng, 0, 3);
            for (std::size_t r = 0; r < m; ++r) child.children.push_back(nf_constant(oracle::random_clopen(rng, 2, 5)));
            root.children.push_back(child);
        }
        NormalFormCode N{2, root};
        BaireApproximation a = baire_approximation(N, 8);
        const WordUniverse& u = *a.universe;
        for (std::size_t i = 0; i < u.size(); ++i) {
            EXPECT_FALSE(a.U[i] && a.V[i]);
            if (u.words[i].size() != u.L || !a.in_all_D(i)) continue;
            bool eta = eta_evaluate(N, oracle::point_for(u.words[i]));
            if (a.U[i]) EXPECT_TRUE(eta) << format_word(u.words[i]);
            if (a.V[i]) EXPECT_FALSE(eta) << format_word(u.words[i]);
        }
    }
}

TEST(BaireApproximation, ExportedCodesAgreeWithSets) {
    NormalFormCode N{2, sigma2({cyl({0, 0, 1})})};
    BaireApproximation a = baire_approximation(N, 5);
    EXPECT_TRUE(cylinder_inside(a.U_code(), {0, 0, 1, 1, 0}));
    EXPECT_TRUE(cylinder_inside(a.V_code(), {0, 1, 0, 0, 0}));
    EXPECT_FALSE(cylinder_inside(a.U_code(), {0, 1, 0, 0, 0}));
}
