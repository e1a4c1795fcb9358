#include "drt/csl.hpp"
#include "drt/io.hpp"
#include "drt/solvers.hpp"
#include "generators.hpp"

#include <gtest/gtest.h>

using namespace drt;

namespace {

FinColoring random_fin_coloring(oracle::Rng& rng) {
    FinColoring c;
    c.k = 1;
    c.ell = oracle::uniform(rng, 2, 3);
    c.support = oracle::uniform(rng, 0, 6);
    c.defaultColor = oracle::uniform(rng, 0, c.ell - 1);
    for (std::size_t n = 1; n <= c.support; ++n)
        if (oracle::coin(rng, 0.7)) c.table[Word(n, 0)] = oracle::uniform(rng, 0, c.ell - 1);
    return c;
}

OpenCode random_code(oracle::Rng& rng) {
    std::vector<CodePair> pairs;
    for (std::size_t j = oracle::uniform(rng, 0, 4); j > 0; --j) pairs.push_back({j, oracle::random_fin(rng, 2, 6)});
    return explicit_code(2, pairs);
}

} // namespace

TEST(Properties, FinColoringCertificatesVerify) {
    oracle::Rng rng(80);
    for (int trial = 0; trial < 100; ++trial) {
        FinColoring col = random_fin_coloring(rng);
        HomogeneityCertificate c = cdrt2_solver(col, col.ell);
        Verdict v = verify_fin_certificate(c, col, c.decidedBound + 2);
        EXPECT_TRUE(v.pass) << v.detail;
        // Brute force: every 2-pattern of the prefix opens its second block at a minimum of the same color.
        for (const Word& sigma : oracle::words(2, 6)) {
            Word w = oracle::compose(sigma, c.prefix.take(mu(c.prefix, 6)));
            EXPECT_EQ(col(Word(first_occurrence(w, 1), 0)), c.color);
        }
    }
}

TEST(Properties, CdrtBridgeRoundTrip) {
    oracle::Rng rng(81);
    for (int trial = 0; trial < 50; ++trial) {
        FinColoring col = random_fin_coloring(rng);
        std::vector<OpenCode> codes = cdrt_to_open(col);
        EXPECT_FALSE(reduced_violation(codes, 8));
        FinColoring back = open_to_cdrt(codes, col.support + 2);
        for (std::size_t n = 1; n <= col.support + 2; ++n) EXPECT_EQ(back(Word(n, 0)), col(Word(n, 0))) << n;
    }
}

TEST(Properties, OpenToBorelAgreesWithMembership) {
    oracle::Rng rng(82);
    for (int trial = 0; trial < 200; ++trial) {
        OpenCode R = random_code(rng);
        BorelCode b = open_to_borel(R);
        Prefix p = oracle::random_point(rng, 2, 8);
        EXPECT_EQ(borel_evaluate(b, p).root() == 1, open_member(R, p).answer == Answer::Yes);
        EXPECT_EQ(oracle::member(b, p.take(8)), open_member(R, p).answer == Answer::Yes);
    }
}

TEST(Properties, NormalFormBackToBorel) {
    oracle::Rng rng(83);
    for (int trial = 0; trial < 150; ++trial) {
        BorelCode b = oracle::random_borel(rng, 3, 2, 6);
        NormalFormCode N = normal_form(b, minimal_normal_depth(b));
        BorelCode back = nf_to_borel(N);
        for (int j = 0; j < 5; ++j) {
            Prefix p = oracle::random_point(rng, 2, 7);
            EXPECT_EQ(oracle::member(back, p.take(7)), oracle::member(b, p.take(7)));
        }
    }
}

TEST(Properties, SolverCertificatesSurviveSerialization) {
    oracle::Rng rng(84);
    for (int trial = 0; trial < 50; ++trial) {
        OpenCode R = random_code(rng);
        HomogeneityCertificate c = odrt2_solver(R);
        HomogeneityCertificate back = certificate_from_json(json::parse(to_json(c).dump()));
        EXPECT_TRUE(verify_open_certificate(back, R, back.decidedBound).pass);
        // Same input, same bytes.
        EXPECT_EQ(to_json(odrt2_solver(R)).dump(), to_json(c).dump());
    }
}

TEST(Properties, DenseSolverCertificatesVerify) {
    oracle::Rng rng(85);
    int done = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t q = oracle::uniform(rng, 2, 3), r = oracle::uniform(rng, 0, q - 1);
        OpenCode R = rule_code(2, [q, r](const Word& w) {
            std::size_t n = first_occurrence(w, 1);
            return n == w.size() - 1 && n % q == r;
        });
        std::size_t L = oracle::uniform(rng, 2, 6);
        std::vector<OpenCode> D{rule_code(2, [L](const Word& w) { return w.size() >= L; })};
        try {
            HomogeneityCertificate c = odrt2_dense_solver(R, D, 4);
            Verdict v = verify_open_certificate(c, R, c.decidedBound);
            EXPECT_TRUE(v.pass) << v.detail;
            for (const Word& sigma : oracle::words(2, c.decidedBound))
                EXPECT_EQ(first_occurrence(pattern_word(sigma, c.prefix), 1) % q, r);
            ++done;
        } catch (const Inconclusive&) {
        }
    }
    EXPECT_GT(done, 20);
}

TEST(Properties, LiftingCertificatesHoldUnderEta) {
    oracle::Rng rng(86);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        NFNode root;
        root.fill = empty_set();
        for (std::size_t j = oracle::uniform(rng, 1, 3); j > 0; --j) {
            NFNode child;
            child.fill = oracle::random_clopen(rng, 2, 5);
            for (std::size_t r = oracle::uniform(rng, 0, 2); r > 0; --r)
                child.children.push_back(nf_constant(oracle::random_clopen(rng, 2, 5)));
            root.children.push_back(child);
        }
        NormalFormCode N{2, root};
        try {
            LiftingResult r = lifting_solver(N, 8, 3);
            ++certified;
            bool want = r.cert.color == 0;
            for (const Word& sigma : oracle::words(2, r.cert.decidedBound)) {
                Prefix p(oracle::compose(sigma, r.cert.prefix.entries), Tail::Zero);
                EXPECT_EQ(eta_evaluate(N, p), want) << format_word(sigma);
            }
        } catch (const Inconclusive&) {
        }
    }
    EXPECT_GT(certified, 10);
}

TEST(Properties, CdrtKOnLinearColorings) {
    oracle::Rng rng(87);
    int certified = 0;
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t a = oracle::uniform(rng, 0, 3), b = oracle::uniform(rng, 0, 3);
        PrefixColoring c;
        c.k = 3;
        c.m = 2;
        c.ell = 2;
        c.color = [a, b](const Word& v) { return (a * first_occurrence(v, 1) + b * v.size()) % 2; };
        try {
            HomogeneityCertificate cert = cdrt_k_driver(3, c, make_csl_oracle(3), 2);
            Verdict v = verify_prefix_certificate(cert, c, cert.decidedBound);
            EXPECT_TRUE(v.pass) << v.detail;
            for (const Word& sigma : oracle::words(3, cert.decidedBound)) {
                Word w = pattern_word(sigma, cert.prefix);
                EXPECT_EQ(c(take(w, first_occurrence(w, 2))), cert.color);
            }
            ++certified;
        } catch (const NoSolutionFound&) {
        }
    }
    EXPECT_GT(certified, 6);
}

// Limit i goes to R_i, and R_0 comes back as color 1, so the trip swaps the colors.
TEST(Properties, StableColoringsComeBackSwapped) {
    oracle::Rng rng(88);
    for (int trial = 0; trial < 30; ++trial) {
        StableColoring c = gen::stable_coloring(rng, oracle::uniform(rng, 2, 3));
        StableColoring again = rdrt_instance(d_to_rdrt(c));
        for (std::size_t k = 1; k <= 10; ++k) EXPECT_EQ(limit_color(again, k), 1 - limit_color(c, k)) << k;
    }
}
