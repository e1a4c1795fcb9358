#include "drt/io.hpp"
#include "drt/solvers.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace drt;

namespace {

struct Options {
    std::size_t stages = 5;
    std::size_t budget = 10000;
    std::size_t checkLen = 8;
    std::size_t window = 10;
    std::size_t searchBound = 64;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string out;
};

enum Exit { Ok = 0, InputError = 1, InconclusiveExit = 2 };

void emit(const Options& o, const json& j, const std::string& text) {
    std::string body = o.format == "json" ? j.dump(2) + "\n" : text;
    if (o.out.empty()) {
        std::cout << body;
        return;
    }
    std::string tmp = o.out + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw SchemaError(o.out + ": cannot write");
        f << body;
    }
    std::rename(tmp.c_str(), o.out.c_str());
}

std::string lines(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
}

json certificate_json(const HomogeneityCertificate& c, const json& input) {
    json j = to_json(c);
    j["codeHash"] = content_hash(input);
    return j;
}

std::string certificate_text(const HomogeneityCertificate& c) {
    return c.solver + " " + c.kind + " color " + std::to_string(c.color) + " prefix " + format_prefix(c.prefix) +
           " decided " + std::to_string(c.decidedBound) + "\n";
}

// Solver output is re-checked before it is reported as a success.
int finish(const Options& o, const HomogeneityCertificate& c, const json& input, const Verdict& v) {
    if (!v.pass) {
        std::cerr << "internal check failed: " << v.detail << "\n";
        return InputError;
    }
    emit(o, certificate_json(c, input), certificate_text(c));
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual Ramsey toolkit: partition words, coloring codes, homogeneous-partition solvers"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sc) {
        sc->add_option("--stages", o.stages, "stage budget")->check(CLI::PositiveNumber);
        sc->add_option("--budget", o.budget, "enumeration step budget")->check(CLI::PositiveNumber);
        sc->add_option("--check-len", o.checkLen, "finite-scale word length")->check(CLI::PositiveNumber);
        sc->add_option("--search-bound", o.searchBound, "bound for pigeonhole searches")->check(CLI::PositiveNumber);
        sc->add_option("--window", o.window, "window of k values")->check(CLI::PositiveNumber);
        sc->add_option("--seed", o.seed, "seed for randomized inputs");
        sc->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sc->add_option("--out", o.out, "output path");
    };

    std::size_t k = 2, len = 1;
    std::string word, code, coloring, r0, r1, s, cert, prefix, functional, injection, modulus, F;
    std::vector<std::string> dense;
    std::size_t n = 0, bound = 0, sBound = 20, maxStage = 200;

    auto* en = app.add_subcommand("enumerate", "list (w)^k_fin words of a given length");
    en->add_option("--k", k)->required();
    en->add_option("--len", len)->required();
    common(en);

    auto* co = app.add_subcommand("coarsen", "list the k-coarsenings of a word");
    co->add_option("--word", word)->required();
    co->add_option("--k", k)->required();
    common(co);

    auto* so = app.add_subcommand("solve", "run a homogeneous-partition solver");
    so->require_subcommand(1);
    auto* sCdrt2 = so->add_subcommand("cdrt2", "pigeonhole on a coloring of (w)^1_fin");
    sCdrt2->add_option("--coloring", coloring)->required();
    auto* sOdrt2 = so->add_subcommand("odrt2", "open coloring of (w)^2");
    sOdrt2->add_option("--code", code)->required();
    auto* sDense = so->add_subcommand("odrt2-dense", "open coloring with dense sets");
    sDense->add_option("--code", code)->required();
    sDense->add_option("--dense", dense);
    auto* sBaire = so->add_subcommand("baire", "staged construction for a Baire coloring");
    sBaire->add_option("--coloring", coloring)->required();
    auto* sLift = so->add_subcommand("lifting", "case split for a normal-form code");
    sLift->add_option("--code", code)->required();
    auto* sCdrtk = so->add_subcommand("cdrtk", "reductions plus pigeonhole for a reduced coloring");
    sCdrtk->add_option("--coloring", coloring)->required();
    for (auto* sc : {sCdrt2, sOdrt2, sDense, sBaire, sLift, sCdrtk}) common(sc);

    auto* re = app.add_subcommand("reduce", "translate between reduced Borel colorings and stable colorings");
    re->require_subcommand(1);
    auto* rToD = re->add_subcommand("rdrt-to-d", "evaluate c(k, s)");
    rToD->add_option("--r0", r0)->required();
    rToD->add_option("--r1", r1)->required();
    rToD->add_option("--n", n)->required();
    rToD->add_option("--k", k)->required();
    rToD->add_option("--s", s, "s_1,...,s_{n-1}")->required();
    auto* dToR = re->add_subcommand("d-to-rdrt", "build the normal-form pair and solve it");
    dToR->add_option("--coloring", coloring)->required();
    common(rToD);
    common(dToR);

    auto* ad = app.add_subcommand("adversary", "diagonalize against a named functional");
    ad->add_option("--functional", functional)->required();
    ad->add_option("--max-stage", maxStage);
    common(ad);

    auto* ga = app.add_subcommand("gadget", "hardness gadgets");
    ga->require_subcommand(1);
    auto* gOc = ga->add_subcommand("open-closed", "range of an injection from a homogeneous partition");
    gOc->add_option("--injection", injection)->required();
    gOc->add_option("--s-bound", sBound);
    auto* gMod = ga->add_subcommand("modulus", "check both claims on a prefix");
    gMod->add_option("--modulus", modulus)->required();
    gMod->add_option("--prefix", prefix)->required();
    auto* g213 = ga->add_subcommand("prop213", "opposite-colored coarsenings");
    g213->add_option("--prefix", prefix)->required();
    g213->add_option("--block", n);
    auto* gHind = ga->add_subcommand("hindman", "x_{F,n}");
    gHind->add_option("--F", F)->required();
    gHind->add_option("--n", n)->required();
    for (auto* sc : {gOc, gMod, g213, gHind}) common(sc);

    auto* ve = app.add_subcommand("verify", "re-check a certificate against its input");
    ve->add_option("--cert", cert)->required();
    ve->add_option("--code", code)->required();
    ve->add_option("--bound", bound);
    common(ve);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*en) {
            auto ws = enumerate_words(k, len);
            json j = json::array();
            std::vector<std::string> t;
            for (const auto& w : ws) j.push_back(format_word(w)), t.push_back(format_word(w));
            emit(o, j, lines(t));
            return Ok;
        }
        if (*co) {
            Word w = parse_word(word);
            if (!is_ordered(w)) throw SchemaError("--word: not an ordered word");
            json j = json::array();
            std::vector<std::string> t;
            for (const auto& c : coarsenings(w, k)) j.push_back(format_word(c)), t.push_back(format_word(c));
            emit(o, j, lines(t));
            return Ok;
        }
        if (*so) {
            if (*sCdrt2) {
                json in = read_json_file(coloring);
                FinColoring c = fin_coloring_from_json(in);
                auto cert = cdrt2_solver(c, c.ell);
                return finish(o, cert, in, verify_fin_certificate(cert, c, cert.decidedBound));
            }
            if (*sOdrt2) {
                json in = read_json_file(code);
                OpenCode R = open_code_from_json(in);
                auto cert = odrt2_solver(R, o.budget, o.stages);
                return finish(o, cert, in, verify_open_certificate(cert, R, cert.decidedBound));
            }
            if (*sDense) {
                json in = read_json_file(code);
                OpenCode R = open_code_from_json(in);
                std::vector<OpenCode> D;
                json all{{"code", in}, {"dense", json::array()}};
                for (const auto& d : dense) {
                    json dj = read_json_file(d);
                    D.push_back(open_code_from_json(dj, d));
                    all["dense"].push_back(dj);
                }
                auto cert = odrt2_dense_solver(R, D, o.stages, o.budget);
                return finish(o, cert, all, verify_open_certificate(cert, R, cert.decidedBound));
            }
            if (*sBaire) {
                json in = read_json_file(coloring);
                BaireColoring bc = baire_from_json(in);
                auto r = baire_drt_constructor(bc.k, bc, o.stages);
                auto expected = [&](const Word& sigma) { return table_color(r.table, sigma, bc.k); };
                return finish(o, r.cert, in, verify_baire_patterns(r.cert.prefix, bc, r.cert.decidedBound, r.cert.decidedBound, expected));
            }
            if (*sLift) {
                json in = read_json_file(code);
                NormalFormCode N = normal_form_from_json(in);
                auto r = lifting_solver(N, o.checkLen, o.stages, o.budget);
                return finish(o, r.cert, in, verify_eta_certificate(r.cert, N, r.cert.decidedBound));
            }
            if (*sCdrtk) {
                json in = read_json_file(coloring);
                PrefixColoring c = prefix_coloring_from_json(in);
                auto cert = cdrt_k_driver(c.k, c, make_csl_oracle(o.stages, o.searchBound), std::min<std::size_t>(o.stages, 3));
                return finish(o, cert, in, verify_prefix_certificate(cert, c, cert.decidedBound));
            }
        }
        if (*rToD) {
            ReducedBorelColoring rc{normal_form_from_json(read_json_file(r0), r0), normal_form_from_json(read_json_file(r1), r1)};
            if (rc.R0.depth != n || rc.R1.depth != n) throw SchemaError("--n: codes have depth " + std::to_string(rc.R0.depth));
            std::vector<std::size_t> sv = parse_word(s);
            int bit = rdrt_to_d(rc, k, sv);
            StableColoring inst = rdrt_instance(rc);
            json lim = json::object();
            std::string text = "c(" + std::to_string(k) + "," + s + ") = " + std::to_string(bit) + "\nlimits:";
            for (std::size_t kk = 1; kk <= o.window; ++kk) {
                int l = limit_color(inst, kk);
                lim[std::to_string(kk)] = l;
                text += " " + std::to_string(l);
            }
            emit(o, json{{"value", bit}, {"threshold", inst.stableFrom}, {"limits", lim}}, text + "\n");
            return Ok;
        }
        if (*dToR) {
            json in = read_json_file(coloring);
            StableColoring c = stable_from_json(in);
            ReducedBorelColoring rc = d_to_rdrt(c);
            RdrtSolution sol = rdrt_brute_solver(rc, o.window);
            LimitHomogSet L = solution_backward(sol.p, sol.color);
            for (std::size_t x : L.elements)
                if (limit_color(c, x) != L.color) throw std::logic_error("translated solution is not limit-homogeneous");
            json j{{"instance", in}, {"R0", to_json(rc.R0)}, {"R1", to_json(rc.R1)},
                   {"solution", format_prefix(sol.p)}, {"solutionColor", sol.color},
                   {"limitHomogeneous", L.elements}, {"limitColor", L.color}};
            emit(o, j, "solution " + format_prefix(sol.p) + " -> L = {" + tuple_key(L.elements) + "} color " +
                           std::to_string(L.color) + "\n");
            return Ok;
        }
        if (*ad) {
            auto lib = builtin_functionals();
            auto it = lib.find(functional);
            if (it == lib.end()) throw SchemaError("--functional: unknown functional " + functional);
            auto tr = nonuniform_adversary(it->second, maxStage, functional);
            auto rv = replay_transcript(it->second, tr);
            json j = to_json(tr);
            j["replay"] = {{"pass", rv.pass}, {"detail", rv.detail}};
            emit(o, j, functional + ": " + tr.verdict + " (" + rv.detail + ")\n");
            return rv.pass ? Ok : InputError;
        }
        if (*ga) {
            if (*gOc) {
                InjectionPresentation g = injection_from_json(read_json_file(injection));
                OpenCode O = open_closed_gadget(g, sBound);
                Prefix p = open_closed_partition(g, o.window);
                if (auto v = open_closed_violation(p, g))
                    throw std::logic_error("partition meets O at " + std::to_string(v->first) + "," + std::to_string(v->second));
                json range = json::array();
                std::string text = "partition " + format_prefix(p) + "\nrange:";
                std::size_t m = 0;
                for (;; ++m) {
                    try {
                        if (open_closed_decode(p, g, m)) range.push_back(m), text += " " + std::to_string(m);
                    } catch (const ExtensionRequired&) {
                        break;
                    }
                }
                text += "\ndecided below " + std::to_string(m);
                emit(o, json{{"code", O.name}, {"sBound", sBound}, {"partition", format_prefix(p)}, {"range", range}, {"decidedBelow", m}},
                     text + "\n");
                return Ok;
            }
            if (*gMod) {
                ModulusFunction f = modulus_from_json(read_json_file(modulus));
                Prefix p = parse_prefix(prefix);
                json j{{"prefix", prefix}};
                std::string text;
                if (auto v = modulus_violation(p, f)) {
                    j["homogeneous"] = false;
                    j["violation"] = {v->first, v->second};
                    text += "not homogeneous: f(" + std::to_string(v->first) + ") > " + std::to_string(v->second) + "\n";
                } else {
                    j["homogeneous"] = true;
                }
                if (auto n2 = modulus_claim2_violation(p, f)) {
                    j["claim2Violation"] = *n2;
                    text += "claim 2 fails at n = " + std::to_string(*n2) + "\n";
                }
                try {
                    Word w = modulus_claim1_witness(p, f);
                    j["claim1Witness"] = format_word(w);
                    text += "claim 1 witness " + format_word(w) + "\n";
                } catch (const ExtensionRequired& e) {
                    j["claim1Witness"] = nullptr;
                    text += std::string("claim 1: ") + e.what() + "\n";
                }
                emit(o, j, text);
                return j["homogeneous"].get<bool>() ? Ok : InputError;
            }
            if (*g213) {
                auto w = prop213_witnesses(parse_prefix(prefix), n ? std::optional<std::size_t>(n) : std::nullopt);
                emit(o, json{{"x", format_word(w.x)}, {"y", format_word(w.y)}, {"colorX", w.colorX}, {"colorY", w.colorY},
                             {"N", w.N}, {"h", w.h}},
                     "x " + format_word(w.x) + " color " + std::to_string(w.colorX) + "\ny " + format_word(w.y) +
                         " color " + std::to_string(w.colorY) + "\n");
                return Ok;
            }
            if (*gHind) {
                Prefix p = hindman_block_partition(parse_word(F), n);
                emit(o, json{{"partition", format_prefix(p)}}, format_prefix(p) + "\n");
                return Ok;
            }
        }
        if (*ve) {
            json cj = read_json_file(cert);
            json in = read_json_file(code);
            HomogeneityCertificate c = certificate_from_json(cj);
            if (!cj.contains("codeHash") || cj["codeHash"] != content_hash(in)) {
                std::cerr << "stale certificate: content hash does not match " << code << "\n";
                return InputError;
            }
            std::size_t b = bound ? bound : c.decidedBound;
            if (b > c.decidedBound)
                throw ExtensionRequired(c.prefix.size() + 1, "bound " + std::to_string(b) + " exceeds the decided bound " +
                                                                 std::to_string(c.decidedBound));
            Verdict v;
            if (c.solver == "odrt2" || c.solver == "odrt2-dense") {
                json codeJson = in.contains("code") ? in["code"] : in;
                v = verify_open_certificate(c, open_code_from_json(codeJson), b);
            } else if (c.solver == "cdrt2") {
                v = verify_fin_certificate(c, fin_coloring_from_json(in), b);
            } else if (c.solver == "cdrtk") {
                v = verify_prefix_certificate(c, prefix_coloring_from_json(in), b);
            } else if (c.solver == "lifting") {
                v = verify_eta_certificate(c, normal_form_from_json(in), b);
            } else if (c.solver == "baire") {
                BaireColoring bc = baire_from_json(in);
                v = verify_baire_patterns(c.prefix, bc, b, b, [](const Word&) { return std::nullopt; });
            } else {
                throw SchemaError("certificate.solver: unknown solver " + c.solver);
            }
            json j{{"verdict", v.pass ? "PASS" : "FAIL"}, {"checked", v.checked}};
            std::string text = std::string(v.pass ? "PASS" : "FAIL") + " (" + std::to_string(v.checked) + " patterns)";
            if (!v.pass) {
                j["counterexample"] = format_word(*v.counterexample);
                j["detail"] = v.detail;
                text += " counterexample " + format_word(*v.counterexample) + ": " + v.detail;
            }
            emit(o, j, text + "\n");
            return v.pass ? Ok : InputError;
        }
    } catch (const ExtensionRequired& e) {
        std::cerr << "extension required: " << e.what() << "\n";
        return InconclusiveExit;
    } catch (const Inconclusive& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return InconclusiveExit;
    } catch (const DensityFailure& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return InconclusiveExit;
    } catch (const NoSolutionFound& e) {
        std::cerr << "no solution found: " << e.what() << "\n";
        return InconclusiveExit;
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return InputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return InputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    }
    return Ok;
}
