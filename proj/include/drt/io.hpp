#pragma once

#include "drt/baire.hpp"
#include "drt/certificate.hpp"
#include "drt/csl.hpp"
#include "drt/gadgets.hpp"
#include "drt/normal_form.hpp"
#include "drt/reductions.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace drt {

using json = nlohmann::json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + ": missing field \"" + key + "\"");
    return *it;
}

template <class T>
T get_as(const json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline Word word_at(const json& j, const std::string& path) {
    try {
        return parse_word(get_as<std::string>(j, path));
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline Prefix prefix_at(const json& j, const std::string& path) {
    try {
        return parse_prefix(get_as<std::string>(j, path));
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

} // namespace detail

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

// FNV-1a over the canonical dump; object keys are sorted, so equal content hashes equally.
inline std::string content_hash(const json& j) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------------------------
// Open codes. Rules are named: "full", "mu1-mod:M:R" (μ(1) ≡ R mod M), "mu1-ge:N".

inline std::function<bool(const Word&)> named_rule(const std::string& name) {
    if (name == "full") return [](const Word&) { return true; };
    auto parts = [&] {
        std::vector<std::size_t> v;
        std::stringstream ss(name.substr(name.find(':') + 1));
        std::string item;
        while (std::getline(ss, item, ':')) {
            std::size_t used = 0;
            try {
                v.push_back(std::stoul(item, &used));
            } catch (const std::exception&) {
                used = 0;
            }
            if (item.empty() || used != item.size() || item[0] == '-')
                throw SchemaError("rule " + name + ": '" + item + "' is not a number");
        }
        return v;
    };
    if (name.rfind("mu1-mod:", 0) == 0) {
        auto v = parts();
        if (v.size() != 2 || v[0] == 0) throw SchemaError("rule " + name + ": expected mu1-mod:M:R with M > 0");
        std::size_t M = v[0], R = v[1];
        return [M, R](const Word& w) { return first_occurrence(w, 1) % M == R; };
    }
    if (name.rfind("mu1-ge:", 0) == 0) {
        auto v = parts();
        if (v.size() != 1) throw SchemaError("rule " + name + ": expected mu1-ge:N");
        std::size_t N = v[0];
        return [N](const Word& w) { return first_occurrence(w, 1) >= N; };
    }
    throw SchemaError("unknown rule \"" + name + "\"");
}

inline json to_json(const OpenCode& c) {
    json j;
    j["k"] = c.k;
    json pairs = json::array();
    for (const auto& p : c.pairs) pairs.push_back(json::array({p.tag, format_word(p.word)}));
    j["pairs"] = pairs;
    if (c.rule) {
        if (c.name.empty()) throw std::invalid_argument("rule-backed code has no serializable name");
        j["rule"] = c.name;
    }
    if (c.finite()) j["support"] = c.support();
    return j;
}

inline OpenCode open_code_from_json(const json& j, const std::string& path = "code") {
    OpenCode c;
    c.k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    if (c.k < 1) throw SchemaError(path + ".k: must be at least 1");
    if (j.contains("pairs")) {
        const json& ps = j["pairs"];
        if (!ps.is_array()) throw SchemaError(path + ".pairs: expected an array");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            std::string at = path + ".pairs[" + std::to_string(i) + "]";
            if (!ps[i].is_array() || ps[i].size() != 2) throw SchemaError(at + ": expected [tag, word]");
            CodePair p{detail::get_as<std::size_t>(ps[i][0], at + "[0]"), detail::word_at(ps[i][1], at + "[1]")};
            if (!in_fin(p.word, c.k)) throw SchemaError(at + ": word " + format_word(p.word) + " is not in (ω)^k_fin");
            c.pairs.push_back(std::move(p));
        }
    }
    if (j.contains("rule")) {
        c.name = detail::get_as<std::string>(j["rule"], path + ".rule");
        try {
            c.rule = named_rule(c.name);
        } catch (const SchemaError& e) {
            throw SchemaError(path + ".rule: " + e.what());
        }
        if (j.contains("support")) c.rule_support = detail::get_as<std::size_t>(j["support"], path + ".support");
    }
    return c;
}

// ---------------------------------------------------------------------------------------------
// Clopen leaves, Borel codes, normal forms

inline json to_json(const Clopen& c) {
    static const char* names[] = {"empty", "full", "cyl", "cocyl"};
    json j;
    j["leaf"] = names[static_cast<int>(c.kind)];
    if (c.kind == ClopenKind::Cyl || c.kind == ClopenKind::Cocyl) j["word"] = format_word(c.word);
    return j;
}

inline Clopen clopen_from_json(const json& j, const std::string& path) {
    std::string kind = detail::get_as<std::string>(detail::field(j, "leaf", path), path + ".leaf");
    if (kind == "empty") return empty_set();
    if (kind == "full") return full_set();
    if (kind == "cyl" || kind == "cocyl") {
        Word w = detail::word_at(detail::field(j, "word", path), path + ".word");
        if (!is_ordered(w)) throw SchemaError(path + ".word: not an ordered word");
        return kind == "cyl" ? cyl(w) : cocyl(w);
    }
    throw SchemaError(path + ".leaf: unknown kind \"" + kind + "\"");
}

inline json to_json(const BorelCode& b) {
    if (b.op == BorelCode::Op::Leaf) return to_json(b.leaf);
    json j;
    j["op"] = b.op == BorelCode::Op::Union ? "union" : "intersection";
    j["children"] = json::array();
    for (const auto& c : b.children) j["children"].push_back(to_json(c));
    return j;
}

inline BorelCode borel_from_json(const json& j, const std::string& path = "code") {
    if (j.is_object() && j.contains("leaf")) return make_leaf(clopen_from_json(j, path));
    std::string op = detail::get_as<std::string>(detail::field(j, "op", path), path + ".op");
    const json& ch = detail::field(j, "children", path);
    if (!ch.is_array()) throw SchemaError(path + ".children: expected an array");
    std::vector<BorelCode> kids;
    for (std::size_t i = 0; i < ch.size(); ++i)
        kids.push_back(borel_from_json(ch[i], path + ".children[" + std::to_string(i) + "]"));
    if (op == "union") return make_union(std::move(kids));
    if (op == "intersection") return make_intersection(std::move(kids));
    throw SchemaError(path + ".op: unknown operation \"" + op + "\"");
}

inline json to_json(const NFNode& n) {
    json j;
    j["fill"] = to_json(n.fill);
    if (!n.children.empty()) {
        j["children"] = json::array();
        for (const auto& c : n.children) j["children"].push_back(to_json(c));
    }
    return j;
}

inline NFNode nf_node_from_json(const json& j, const std::string& path) {
    NFNode n;
    n.fill = clopen_from_json(detail::field(j, "fill", path), path + ".fill");
    if (j.contains("children")) {
        const json& ch = j["children"];
        if (!ch.is_array()) throw SchemaError(path + ".children: expected an array");
        for (std::size_t i = 0; i < ch.size(); ++i)
            n.children.push_back(nf_node_from_json(ch[i], path + ".children[" + std::to_string(i) + "]"));
    }
    return n;
}

inline std::size_t nf_height(const NFNode& n) {
    std::size_t h = 0;
    for (const auto& c : n.children) h = std::max(h, nf_height(c) + 1);
    return h;
}

inline json to_json(const NormalFormCode& N) { return json{{"depth", N.depth}, {"root", to_json(N.root)}}; }

// Accepts {"depth":n,"root":{...}} directly, or a Borel code brought to normal form at "depth".
inline NormalFormCode normal_form_from_json(const json& j, const std::string& path = "code") {
    std::size_t depth = detail::get_as<std::size_t>(detail::field(j, "depth", path), path + ".depth");
    if (depth < 1) throw SchemaError(path + ".depth: must be at least 1");
    if (j.contains("borel")) {
        try {
            return normal_form(borel_from_json(j["borel"], path + ".borel"), depth);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(path + ": " + e.what());
        }
    }
    NormalFormCode N;
    N.depth = depth;
    N.root = nf_node_from_json(detail::field(j, "root", path), path + ".root");
    if (nf_height(N.root) > depth) throw SchemaError(path + ".root: tree is deeper than the declared depth");
    return N;
}

inline json to_json(const NumNode& n) {
    json j = json::array({n.label});
    for (const auto& c : n.children) j.push_back(to_json(c));
    return j;
}

inline json to_json(const NumericTree& t) {
    json j = json::array();
    for (const auto& r : t.roots) j.push_back(to_json(r));
    return j;
}

inline NumNode num_node_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected [label, children...]");
    NumNode n;
    n.label = detail::get_as<std::uint64_t>(j[0], path + "[0]");
    for (std::size_t i = 1; i < j.size(); ++i) n.children.push_back(num_node_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return n;
}

inline NumericTree numeric_from_json(const json& j, const std::string& path = "tree") {
    if (!j.is_array()) throw SchemaError(path + ": expected an array");
    NumericTree t;
    for (std::size_t i = 0; i < j.size(); ++i) t.roots.push_back(num_node_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return t;
}

// ---------------------------------------------------------------------------------------------
// Colorings

inline json to_json(const FinColoring& c) {
    json t = json::object();
    for (const auto& [w, v] : c.table) t[format_word(w)] = v;
    return json{{"k", c.k}, {"ell", c.ell}, {"support", c.support}, {"table", t}, {"defaultColor", c.defaultColor}};
}

inline FinColoring fin_coloring_from_json(const json& j, const std::string& path = "coloring") {
    FinColoring c;
    c.k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    c.ell = detail::get_as<std::size_t>(detail::field(j, "ell", path), path + ".ell");
    c.support = detail::get_as<std::size_t>(detail::field(j, "support", path), path + ".support");
    c.defaultColor = j.contains("defaultColor") ? detail::get_as<std::size_t>(j["defaultColor"], path + ".defaultColor") : 0;
    if (j.contains("table"))
        for (const auto& [key, v] : j["table"].items()) {
            std::string at = path + ".table[\"" + key + "\"]";
            Word w = detail::word_at(json(key), at);
            if (!in_fin(w, c.k)) throw SchemaError(at + ": word is not in (ω)^k_fin");
            std::size_t col = detail::get_as<std::size_t>(v, at);
            if (col >= c.ell) throw SchemaError(at + ": color out of range");
            c.table[w] = col;
        }
    if (c.defaultColor >= c.ell) throw SchemaError(path + ".defaultColor: color out of range");
    return c;
}

// Prefix colorings are written as tables: {"k","m","ell","support","table","defaultColor"}.
inline PrefixColoring prefix_coloring_from_json(const json& j, const std::string& path = "coloring") {
    std::size_t k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    std::size_t m = j.contains("m") ? detail::get_as<std::size_t>(j["m"], path + ".m") : k - 1;
    std::size_t ell = detail::get_as<std::size_t>(detail::field(j, "ell", path), path + ".ell");
    std::size_t support = detail::get_as<std::size_t>(detail::field(j, "support", path), path + ".support");
    std::size_t dflt = j.contains("defaultColor") ? detail::get_as<std::size_t>(j["defaultColor"], path + ".defaultColor") : 0;
    std::map<Word, std::size_t> table;
    if (j.contains("table"))
        for (const auto& [key, v] : j["table"].items())
            table[detail::word_at(json(key), path + ".table")] = detail::get_as<std::size_t>(v, path + ".table[\"" + key + "\"]");
    return table_coloring(k, m, ell, std::move(table), support, dflt);
}

inline json to_json(const BaireColoring& bc) {
    json j{{"k", bc.k}, {"budget", bc.budget}, {"colors", json::array()}, {"dense", json::array()}};
    for (const auto& c : bc.colors) j["colors"].push_back(to_json(c));
    for (const auto& d : bc.dense) j["dense"].push_back(to_json(d));
    return j;
}

inline BaireColoring baire_from_json(const json& j, const std::string& path = "coloring") {
    BaireColoring bc;
    bc.k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    if (j.contains("budget")) bc.budget = detail::get_as<std::size_t>(j["budget"], path + ".budget");
    const json& cs = detail::field(j, "colors", path);
    for (std::size_t i = 0; i < cs.size(); ++i)
        bc.colors.push_back(open_code_from_json(cs[i], path + ".colors[" + std::to_string(i) + "]"));
    if (j.contains("dense"))
        for (std::size_t i = 0; i < j["dense"].size(); ++i)
            bc.dense.push_back(open_code_from_json(j["dense"][i], path + ".dense[" + std::to_string(i) + "]"));
    return bc;
}

inline std::string tuple_key(const std::vector<std::size_t>& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s;
}

inline json to_json(const StableColoring& c) {
    if (c.fn) throw std::invalid_argument("function-backed stable colorings have no JSON form");
    json table = json::object(), th = json::object();
    for (const auto& [key, v] : c.table) table[tuple_key(key)] = v;
    for (const auto& [k, t] : c.thresholds) th[std::to_string(k)] = json::array({t.first, t.second});
    return json{{"n", c.n}, {"table", table}, {"thresholds", th}, {"defaultColor", c.defaultColor}};
}

inline StableColoring stable_from_json(const json& j, const std::string& path = "coloring") {
    StableColoring c;
    c.n = detail::get_as<std::size_t>(detail::field(j, "n", path), path + ".n");
    c.defaultColor = j.contains("defaultColor") ? detail::get_as<int>(j["defaultColor"], path + ".defaultColor") : 0;
    if (j.contains("table"))
        for (const auto& [key, v] : j["table"].items()) {
            std::string at = path + ".table[\"" + key + "\"]";
            std::vector<std::size_t> t;
            try {
                t = parse_word(key);
            } catch (const std::exception& e) {
                throw SchemaError(at + ": " + e.what());
            }
            c.table[t] = detail::get_as<int>(v, at);
        }
    if (j.contains("thresholds"))
        for (const auto& [key, v] : j["thresholds"].items()) {
            std::string at = path + ".thresholds[\"" + key + "\"]";
            if (!v.is_array() || v.size() != 2) throw SchemaError(at + ": expected [threshold, value]");
            std::size_t k;
            try {
                k = std::stoul(key);
            } catch (const std::exception&) {
                throw SchemaError(at + ": key is not a number");
            }
            c.thresholds[k] = {detail::get_as<std::size_t>(v[0], at + "[0]"), detail::get_as<int>(v[1], at + "[1]")};
        }
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return c;
}

inline json to_json(const InjectionPresentation& g) {
    json t = json::object();
    for (const auto& [a, b] : g.g) t[std::to_string(a)] = b;
    return json{{"bound", g.bound}, {"g", t}};
}

inline InjectionPresentation injection_from_json(const json& j, const std::string& path = "injection") {
    InjectionPresentation g;
    g.bound = detail::get_as<std::size_t>(detail::field(j, "bound", path), path + ".bound");
    for (const auto& [key, v] : detail::field(j, "g", path).items()) {
        std::string at = path + ".g[\"" + key + "\"]";
        std::size_t used = 0, t = 0;
        try {
            t = std::stoul(key, &used);
        } catch (const std::exception&) {
        }
        if (key.empty() || used != key.size() || key[0] == '-') throw SchemaError(at + ": key is not a number");
        g.g[t] = detail::get_as<std::size_t>(v, at);
    }
    try {
        validate(g);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return g;
}

inline ModulusFunction modulus_from_json(const json& j, const std::string& path = "modulus") {
    ModulusFunction f;
    f.table = detail::get_as<std::vector<std::size_t>>(detail::field(j, "table", path), path + ".table");
    if (j.contains("slope")) f.slope = detail::get_as<std::size_t>(j["slope"], path + ".slope");
    try {
        validate(f);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return f;
}

// ---------------------------------------------------------------------------------------------
// Certificates and transcripts

inline json to_json(const StageRecord& r) {
    return json{{"stage", r.stage}, {"j", r.j}, {"tau", format_word(r.tau)}, {"sigma", format_word(r.sigma)},
                {"delta", format_word(r.delta)}, {"next", format_word(r.next)}, {"color", r.color},
                {"ms", r.ms}, {"maxIndex", r.maxIndex}};
}

inline StageRecord stage_from_json(const json& j, const std::string& path) {
    StageRecord r;
    r.stage = detail::get_as<std::size_t>(detail::field(j, "stage", path), path + ".stage");
    r.j = detail::get_as<std::size_t>(detail::field(j, "j", path), path + ".j");
    r.tau = detail::word_at(detail::field(j, "tau", path), path + ".tau");
    r.sigma = detail::word_at(detail::field(j, "sigma", path), path + ".sigma");
    r.delta = detail::word_at(detail::field(j, "delta", path), path + ".delta");
    r.next = detail::word_at(detail::field(j, "next", path), path + ".next");
    r.color = detail::get_as<std::size_t>(detail::field(j, "color", path), path + ".color");
    r.ms = detail::get_as<std::size_t>(detail::field(j, "ms", path), path + ".ms");
    r.maxIndex = detail::get_as<std::size_t>(detail::field(j, "maxIndex", path), path + ".maxIndex");
    return r;
}

inline json to_json(const HomogeneityCertificate& c) {
    json j{{"solver", c.solver}, {"kind", c.kind}, {"k", c.k}, {"prefix", format_prefix(c.prefix)},
           {"color", c.color}, {"decidedBound", c.decidedBound}, {"log", json::array()}, {"witnesses", json::array()}};
    for (const auto& r : c.log) j["log"].push_back(to_json(r));
    for (const auto& w : c.witnesses) j["witnesses"].push_back(format_word(w));
    return j;
}

inline HomogeneityCertificate certificate_from_json(const json& j, const std::string& path = "certificate") {
    HomogeneityCertificate c;
    c.solver = detail::get_as<std::string>(detail::field(j, "solver", path), path + ".solver");
    c.kind = j.contains("kind") ? detail::get_as<std::string>(j["kind"], path + ".kind") : "";
    c.k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    c.prefix = detail::prefix_at(detail::field(j, "prefix", path), path + ".prefix");
    c.color = detail::get_as<std::size_t>(detail::field(j, "color", path), path + ".color");
    c.decidedBound = detail::get_as<std::size_t>(detail::field(j, "decidedBound", path), path + ".decidedBound");
    if (j.contains("log"))
        for (std::size_t i = 0; i < j["log"].size(); ++i)
            c.log.push_back(stage_from_json(j["log"][i], path + ".log[" + std::to_string(i) + "]"));
    if (j.contains("witnesses"))
        for (std::size_t i = 0; i < j["witnesses"].size(); ++i)
            c.witnesses.push_back(detail::word_at(j["witnesses"][i], path + ".witnesses[" + std::to_string(i) + "]"));
    return c;
}

inline json to_json(const AdversaryTranscript& t) {
    json q = json::array();
    for (const auto& x : t.queries) q.push_back(json{{"side", x.side}, {"word", format_word(x.word)}, {"answer", x.answer}});
    return json{{"functional", t.functional}, {"verdict", t.verdict}, {"stage", t.stage}, {"k", t.k},
                {"maxStage", t.maxStage}, {"side", t.side}, {"committed", t.committed}, {"queries", q},
                {"extended", t.extended}, {"extendedBudget", t.extendedBudget}, {"q0", format_word(t.q0)},
                {"q1", format_word(t.q1)}};
}

inline AdversaryTranscript transcript_from_json(const json& j, const std::string& path = "transcript") {
    AdversaryTranscript t;
    t.functional = detail::get_as<std::string>(detail::field(j, "functional", path), path + ".functional");
    t.verdict = detail::get_as<std::string>(detail::field(j, "verdict", path), path + ".verdict");
    t.stage = detail::get_as<std::size_t>(detail::field(j, "stage", path), path + ".stage");
    t.k = detail::get_as<std::size_t>(detail::field(j, "k", path), path + ".k");
    t.maxStage = detail::get_as<std::size_t>(detail::field(j, "maxStage", path), path + ".maxStage");
    t.side = detail::get_as<int>(detail::field(j, "side", path), path + ".side");
    t.committed = detail::get_as<std::vector<std::size_t>>(detail::field(j, "committed", path), path + ".committed");
    const json& qs = detail::field(j, "queries", path);
    if (!qs.is_array()) throw SchemaError(path + ".queries: expected an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
        std::string at = path + ".queries[" + std::to_string(i) + "]";
        t.queries.push_back({detail::get_as<int>(detail::field(qs[i], "side", at), at + ".side"),
                             detail::word_at(detail::field(qs[i], "word", at), at + ".word"),
                             detail::get_as<bool>(detail::field(qs[i], "answer", at), at + ".answer")});
    }
    t.extended = detail::get_as<std::vector<std::size_t>>(detail::field(j, "extended", path), path + ".extended");
    t.extendedBudget = detail::get_as<std::size_t>(detail::field(j, "extendedBudget", path), path + ".extendedBudget");
    std::string q0 = detail::get_as<std::string>(detail::field(j, "q0", path), path + ".q0");
    std::string q1 = detail::get_as<std::string>(detail::field(j, "q1", path), path + ".q1");
    if (!q0.empty()) t.q0 = detail::word_at(json(q0), path + ".q0");
    if (!q1.empty()) t.q1 = detail::word_at(json(q1), path + ".q1");
    return t;
}

} // namespace drt
