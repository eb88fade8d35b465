#include "cmlsat/certificate_json.hpp"

#include <algorithm>

#include "cmlsat/parser.hpp"

namespace cmlsat {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw CertificateError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T get(const json& j, const char* key)
{
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        throw CertificateError(std::string("field '") + key + "': " + e.what());
    }
}

Formula formulaFrom(const json& j)
{
    if (!j.is_string())
        throw CertificateError("formula must be a string");
    try {
        return parseFormula(j.get<std::string>());
    } catch (const ParseError& e) {
        throw CertificateError(std::string("bad formula: ") + e.what());
    }
}

Literal literalFrom(const json& j)
{
    Formula f = formulaFrom(j);
    if (f->kind == NodeKind::Not && isModal(f->lhs))
        return {f->lhs, false};
    if (isModal(f))
        return {f, true};
    throw CertificateError("literal '" + j.get<std::string>() + "' is not a signed modal atom");
}

json literalsToJson(const std::vector<Literal>& ls)
{
    json a = json::array();
    for (const auto& l : ls)
        a.push_back(toString(l));
    return a;
}

std::vector<Literal> literalsFrom(const json& j)
{
    if (!j.is_array())
        throw CertificateError("literal list must be an array");
    std::vector<Literal> out;
    for (const auto& x : j)
        out.push_back(literalFrom(x));
    return out;
}

json formulasToJson(const std::vector<Formula>& fs)
{
    json a = json::array();
    for (Formula f : fs)
        a.push_back(toString(f));
    return a;
}

std::vector<Formula> formulasFrom(const json& j)
{
    if (!j.is_array())
        throw CertificateError("formula list must be an array");
    std::vector<Formula> out;
    for (const auto& x : j)
        out.push_back(formulaFrom(x));
    return out;
}

json varClauseToJson(const VarClause& c)
{
    json a = json::array();
    for (const auto& l : c)
        a.push_back((l.positive ? "a" : "~a") + std::to_string(l.var + 1));
    return a;
}

VarClause varClauseFrom(const json& j)
{
    if (!j.is_array())
        throw CertificateError("premise clause must be an array");
    VarClause c;
    for (const auto& x : j) {
        if (!x.is_string())
            throw CertificateError("premise literal must be a string");
        std::string s = x.get<std::string>();
        bool positive = true;
        std::size_t at = 0;
        if (!s.empty() && s[0] == '~') {
            positive = false;
            at = 1;
        }
        if (s.size() < at + 2 || s[at] != 'a' || !std::all_of(s.begin() + static_cast<long>(at) + 1, s.end(), ::isdigit))
            throw CertificateError("bad premise literal '" + s + "'");
        int var = std::stoi(s.substr(at + 1)) - 1;
        if (var < 0)
            throw CertificateError("bad premise literal '" + s + "'");
        c.push_back({var, positive});
    }
    return c;
}

mpz_class mpzFrom(const json& j)
{
    if (!j.is_string())
        throw CertificateError("integers are encoded as strings");
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0)
        throw CertificateError("bad integer '" + j.get<std::string>() + "'");
    return v;
}

mpq_class mpqFrom(const json& j)
{
    if (!j.is_string())
        throw CertificateError("rationals are encoded as strings");
    mpq_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0)
        throw CertificateError("bad rational '" + j.get<std::string>() + "'");
    v.canonicalize();
    return v;
}

std::vector<int> intsFrom(const json& j, const char* key)
{
    if (!j.contains(key))
        return {};
    return get<std::vector<int>>(j, key);
}

} // namespace

json toJson(const RuleCode& code)
{
    json ops = json::array(), coeffs = json::array();
    for (const auto& op : code.operators)
        ops.push_back(operatorString(op));
    for (const auto& c : code.coeffs)
        coeffs.push_back(c.get_str());
    LogicConfig lc;
    lc.logic = code.logic;
    json j = {{"logic", lc.name()}, {"scheme", schemeName(code.scheme)}, {"signs", code.signs}, {"operators", ops}};
    if (isArithmetic(code.scheme)) {
        j["coeffs"] = coeffs;
        j["bound"] = code.bound.get_str();
    }
    return j;
}

RuleCode ruleCodeFromJson(const json& j)
{
    RuleCode code;
    try {
        code.logic = LogicConfig::fromName(get<std::string>(j, "logic")).logic;
        code.scheme = schemeFromName(get<std::string>(j, "scheme"));
        for (const auto& op : get<std::vector<std::string>>(j, "operators"))
            code.operators.push_back(parseOperator(op));
    } catch (const std::invalid_argument& e) {
        throw CertificateError(e.what());
    } catch (const ConfigError& e) {
        throw CertificateError(e.what());
    } catch (const ParseError& e) {
        throw CertificateError(e.what());
    }
    code.signs = get<std::vector<bool>>(j, "signs");
    if (isArithmetic(code.scheme)) {
        const json& cs = field(j, "coeffs");
        if (!cs.is_array())
            throw CertificateError("coeffs must be an array");
        for (const auto& c : cs)
            code.coeffs.push_back(mpzFrom(c));
        code.bound = mpzFrom(field(j, "bound"));
    }
    if (code.operators.size() != code.signs.size() || (!code.coeffs.empty() && code.coeffs.size() != code.signs.size()))
        throw CertificateError("rule code arrays differ in length");
    return code;
}

json toJson(const RuleMatching& m) { return {{"code", toJson(m.code)}, {"substitution", formulasToJson(m.substitution)}}; }

RuleMatching matchingFromJson(const json& j)
{
    RuleMatching m;
    m.code = ruleCodeFromJson(field(j, "code"));
    m.substitution = formulasFrom(field(j, "substitution"));
    if (m.substitution.size() != m.code.arity())
        throw CertificateError("substitution does not match the rule arity");
    return m;
}

json toJson(const ShallowTableau& tb)
{
    json nodes = json::array(), edges = json::array();
    for (const auto& n : tb.nodes) {
        json x = {{"label", literalsToJson(n.label.literals)}};
        if (n.arithmetic)
            x["patternArguments"] = formulasToJson(n.patternArguments);
        nodes.push_back(std::move(x));
    }
    for (const auto& e : tb.edges) {
        json x = {{"parent", e.parent}, {"child", e.child}, {"demand", toString(e.demand)}};
        if (e.pattern) {
            x["pattern"] = *e.pattern;
        } else {
            x["clause"] = literalsToJson(e.clause);
            if (e.matching)
                x["matching"] = toJson(*e.matching);
            x["gamma"] = varClauseToJson(e.gamma);
        }
        edges.push_back(std::move(x));
    }
    return {{"formula", toString(tb.formula)}, {"root", tb.root}, {"nodes", nodes}, {"edges", edges}};
}

ShallowTableau tableauFromJson(const json& j)
{
    ShallowTableau tb;
    tb.formula = formulaFrom(field(j, "formula"));
    tb.root = get<int>(j, "root");
    for (const auto& n : field(j, "nodes")) {
        TableauNode node;
        node.label.literals = literalsFrom(field(n, "label"));
        if (n.contains("patternArguments")) {
            node.arithmetic = true;
            node.patternArguments = formulasFrom(n.at("patternArguments"));
        }
        tb.nodes.push_back(std::move(node));
    }
    for (const auto& x : field(j, "edges")) {
        TableauEdge e;
        e.parent = get<int>(x, "parent");
        e.child = get<int>(x, "child");
        e.demand = formulaFrom(field(x, "demand"));
        if (x.contains("pattern")) {
            e.pattern = get<std::uint64_t>(x, "pattern");
        } else {
            e.clause = literalsFrom(field(x, "clause"));
            if (x.contains("matching"))
                e.matching = matchingFromJson(x.at("matching"));
            e.gamma = varClauseFrom(field(x, "gamma"));
        }
        tb.edges.push_back(std::move(e));
    }
    return tb;
}

json toJson(const ModelWitness& mw)
{
    json states = json::array();
    for (const auto& st : mw.states) {
        json s = {{"atoms", st.atoms}};
        switch (mw.kind) {
        case FrameKind::Kripke:
            s["successors"] = st.successors;
            break;
        case FrameKind::Multigraph: {
            json w = json::array();
            for (const auto& [t, m] : st.weights)
                w.push_back({t, m.get_str()});
            s["weights"] = w;
            break;
        }
        case FrameKind::Distribution: {
            json p = json::array();
            for (const auto& [t, q] : st.probabilities)
                p.push_back({t, q.get_str()});
            s["probabilities"] = p;
            break;
        }
        case FrameKind::Neighbourhood:
            s["support"] = st.support;
            s["neighbourhoods"] = st.neighbourhoods;
            break;
        case FrameKind::Game:
            s["strategies"] = st.game.strategies;
            s["outcomes"] = st.game.outcomes;
            break;
        }
        states.push_back(std::move(s));
    }
    json j = {{"frame", frameName(mw.kind)}, {"root", mw.root}, {"states", states}};
    if (mw.kind == FrameKind::Neighbourhood)
        j["upwardClosed"] = mw.upwardClosed;
    if (mw.kind == FrameKind::Game)
        j["agents"] = mw.agents;
    return j;
}

ModelWitness modelFromJson(const json& j)
{
    ModelWitness mw;
    try {
        mw.kind = frameFromName(get<std::string>(j, "frame"));
    } catch (const ModelError& e) {
        throw CertificateError(e.what());
    }
    mw.root = get<int>(j, "root");
    if (j.contains("upwardClosed"))
        mw.upwardClosed = get<bool>(j, "upwardClosed");
    if (j.contains("agents"))
        mw.agents = get<int>(j, "agents");
    const json& states = field(j, "states");
    if (!states.is_array())
        throw CertificateError("states must be an array");
    for (const auto& s : states) {
        WitnessState st;
        st.atoms = get<std::vector<std::string>>(s, "atoms");
        st.successors = intsFrom(s, "successors");
        st.support = intsFrom(s, "support");
        if (s.contains("neighbourhoods"))
            st.neighbourhoods = get<std::vector<std::vector<int>>>(s, "neighbourhoods");
        if (s.contains("weights"))
            for (const auto& w : s.at("weights")) {
                if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer())
                    throw CertificateError("weight entries are [state, \"weight\"] pairs");
                st.weights.emplace_back(w[0].get<int>(), mpzFrom(w[1]));
            }
        if (s.contains("probabilities"))
            for (const auto& p : s.at("probabilities")) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer())
                    throw CertificateError("probability entries are [state, \"p\"] pairs");
                st.probabilities.emplace_back(p[0].get<int>(), mpqFrom(p[1]));
            }
        st.game.strategies = intsFrom(s, "strategies");
        st.game.outcomes = intsFrom(s, "outcomes");
        mw.states.push_back(std::move(st));
    }
    return mw;
}

json toJson(const ShallowProof& pf)
{
    json clauses = json::array();
    for (const auto& cp : pf.clauses) {
        json c = {{"clause", literalsToJson(cp.clause)}};
        if (cp.tautology)
            c["tautology"] = true;
        if (cp.rule)
            c["rule"] = toJson(*cp.rule);
        json prem = json::array();
        for (const auto& p : cp.premises)
            prem.push_back(toJson(p));
        c["premises"] = prem;
        clauses.push_back(std::move(c));
    }
    return {{"goal", toString(pf.goal)}, {"clauses", clauses}};
}

ShallowProof proofFromJson(const json& j)
{
    ShallowProof pf;
    pf.goal = formulaFrom(field(j, "goal"));
    const json& clauses = field(j, "clauses");
    if (!clauses.is_array())
        throw CertificateError("clauses must be an array");
    for (const auto& c : clauses) {
        ClauseProof cp;
        cp.clause = literalsFrom(field(c, "clause"));
        if (c.contains("tautology"))
            cp.tautology = get<bool>(c, "tautology");
        if (c.contains("rule"))
            cp.rule = matchingFromJson(c.at("rule"));
        for (const auto& p : field(c, "premises"))
            cp.premises.push_back(proofFromJson(p));
        pf.clauses.push_back(std::move(cp));
    }
    return pf;
}

std::string certificateKind(const Certificate& c)
{
    switch (c.index()) {
    case 0:
        return "tableau";
    case 1:
        return "model";
    default:
        return "proof";
    }
}

json toJson(const CertificateDocument& doc)
{
    json payload = std::visit([](const auto& c) { return toJson(c); }, doc.certificate);
    return {{"kind", certificateKind(doc.certificate)},
            {"version", kVersion},
            {"logic", doc.config.name()},
            {"formula", toString(doc.formula)},
            {"payload", payload}};
}

CertificateDocument documentFromJson(const json& j)
{
    if (get<int>(j, "version") != kVersion)
        throw CertificateError("unsupported certificate version");
    CertificateDocument doc;
    try {
        doc.config = LogicConfig::fromName(get<std::string>(j, "logic"));
    } catch (const ConfigError& e) {
        throw CertificateError(e.what());
    }
    doc.formula = formulaFrom(field(j, "formula"));
    std::string kind = get<std::string>(j, "kind");
    const json& payload = field(j, "payload");
    try {
        if (kind == "tableau")
            doc.certificate = tableauFromJson(payload);
        else if (kind == "model")
            doc.certificate = modelFromJson(payload);
        else if (kind == "proof")
            doc.certificate = proofFromJson(payload);
        else
            throw CertificateError("unknown certificate kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw CertificateError(std::string("malformed payload: ") + e.what());
    }
    return doc;
}

std::optional<std::string> checkCertificate(const CertificateDocument& doc)
{
    try {
        checkLegal(doc.formula, doc.config);
    } catch (const ConfigError& e) {
        return std::string(e.what());
    }
    try {
        if (const auto* tb = std::get_if<ShallowTableau>(&doc.certificate)) {
            if (tb->formula != doc.formula)
                return std::string("tableau is for a different formula");
            return validateTableau(*tb, doc.formula, doc.config);
        }
        if (const auto* mw = std::get_if<ModelWitness>(&doc.certificate)) {
            if (auto bad = witnessInvariantViolation(*mw, doc.config))
                return bad;
            if (!modelCheck(*mw, mw->root, doc.formula))
                return std::string("formula is false at the root state");
            return std::nullopt;
        }
        const auto& pf = std::get<ShallowProof>(doc.certificate);
        ProofCheck r = checkProof(pf, doc.formula, doc.config);
        if (!r.ok)
            return r.path + ": " + r.reason;
        return std::nullopt;
    } catch (const ModelError& e) {
        return std::string(e.what());
    } catch (const std::logic_error& e) {
        return std::string(e.what());
    }
}

} // namespace cmlsat
