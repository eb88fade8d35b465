#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmlsat/certificate_json.hpp"
#include "cmlsat/certificates.hpp"
#include "cmlsat/oracle.hpp"
#include "cmlsat/parser.hpp"
#include "cmlsat/solver.hpp"
#include "selftest.hpp"

namespace cmlsat::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::string logic;
    std::optional<long> coeffBound;
    std::optional<int> carrier;
    bool oracleCheck = false;
    std::string cert;
    std::string format = "human";
    std::string batch;
    std::string formula;
    std::string config;
    std::size_t samples = 1000;
    std::size_t pairs = 200;
    std::uint64_t seed = 1;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    out << text;
}

LogicConfig buildConfig(const Options& o)
{
    LogicConfig cfg;
    std::string path = o.config;
    if (path.empty())
        if (const char* env = std::getenv("CMLSAT_CONFIG"))
            path = env;
    std::optional<int> agents;
    if (!path.empty()) {
        json j;
        try {
            j = json::parse(readFile(path));
        } catch (const json::exception& e) {
            throw UsageError("bad config file '" + path + "': " + e.what());
        }
        try {
            if (j.contains("logic"))
                cfg = LogicConfig::fromName(j.at("logic").get<std::string>());
            if (j.contains("agents"))
                agents = j.at("agents").get<int>();
            if (j.contains("coeffBound"))
                cfg.coeffBound = j.at("coeffBound").get<long>();
            if (j.contains("weightBound"))
                cfg.weightBound = j.at("weightBound").get<int>();
            if (j.contains("oracle")) {
                const json& b = j.at("oracle");
                cfg.oracle.carrier = b.value("carrier", cfg.oracle.carrier);
                cfg.oracle.multiplicity = b.value("multiplicity", cfg.oracle.multiplicity);
                cfg.oracle.denominator = b.value("denominator", cfg.oracle.denominator);
                cfg.oracle.strategies = b.value("strategies", cfg.oracle.strategies);
                cfg.oracle.elementCap = b.value("elementCap", cfg.oracle.elementCap);
            }
        } catch (const json::exception& e) {
            throw UsageError("bad config file '" + path + "': " + e.what());
        }
    }
    if (!o.logic.empty()) {
        LogicConfig named = LogicConfig::fromName(o.logic);
        cfg.logic = named.logic;
        cfg.agents = named.agents;
        if (o.logic.find(':') == std::string::npos && agents)
            cfg.agents = *agents;
    } else if (agents) {
        cfg.agents = *agents;
    }
    if (cfg.agents < 1 || cfg.agents > 16)
        throw ConfigError("agent count must be between 1 and 16");
    if (o.coeffBound) {
        if (*o.coeffBound < 1)
            throw UsageError("--coeff-bound must be positive");
        cfg.coeffBound = *o.coeffBound;
    }
    if (o.carrier)
        cfg.oracle.carrier = *o.carrier;
    return cfg;
}

json statsJson(const Verdict& v, Formula f)
{
    return {{"modalDepth", depth(f)},
            {"recursionDepth", traceDepth(v.trace)},
            {"maxLevel", v.stats.maxLevel},
            {"nodes", v.stats.nodes},
            {"memoHits", v.stats.memoHits},
            {"matchingsExplored", v.stats.matchingsExplored},
            {"lpCalls", v.stats.lpCalls}};
}

struct Outcome {
    json report;
    int exit = Error;
};

Outcome runOne(const std::string& command, const std::string& text, const LogicConfig& cfg, const Options& o, bool writeCert)
{
    Outcome out;
    Formula input = parse(text, cfg);
    const bool prove = command == "prove";
    Formula query = prove ? negate(input) : input;
    Verdict v = satisfiable(query, cfg);
    json& r = out.report;
    r["command"] = command;
    r["logic"] = cfg.name();
    r["formula"] = toString(input);
    if (prove)
        r["verdict"] = v.satisfiable ? "invalid" : "valid";
    else
        r["verdict"] = v.satisfiable ? "sat" : "unsat";
    r["caveat"] = v.caveat ? json(*v.caveat) : json(nullptr);
    r["stats"] = statsJson(v, query);
    out.exit = (prove ? !v.satisfiable : v.satisfiable) ? Sat : Unsat;

    if (o.oracleCheck) {
        BruteForceStats bs;
        std::optional<ModelWitness> m;
        std::string failure;
        try {
            m = bruteForceSat(query, cfg, &bs);
        } catch (const std::length_error& e) {
            failure = e.what();
        }
        bool contradiction = m && !v.satisfiable;
        r["oracle"] = {{"modelFound", m.has_value()}, {"contradiction", contradiction}, {"elements", bs.elements}};
        if (!failure.empty())
            r["oracle"]["error"] = failure;
        if (contradiction)
            out.exit = Error;
    }

    if (writeCert && !o.cert.empty()) {
        CertificateDocument doc;
        doc.config = cfg;
        if (!v.satisfiable) {
            Formula goal = negate(query);
            doc.formula = goal;
            doc.certificate = extractProof(v.trace, goal);
        } else {
            doc.formula = query;
            ShallowTableau tb = extractTableau(v.trace);
            doc.certificate = tb;
            if (command == "model") {
                ModelResult mr = tableauToModel(tb, cfg);
                if (mr.model)
                    doc.certificate = *mr.model;
                else
                    r["certificateNote"] = mr.note;
            }
        }
        writeFile(o.cert, toJson(doc).dump(2) + "\n");
        r["certificate"] = {{"path", o.cert}, {"kind", certificateKind(doc.certificate)}};
    }
    if (command == "model" && v.satisfiable && o.cert.empty()) {
        ModelResult mr = tableauToModel(extractTableau(v.trace), cfg);
        if (mr.model)
            r["model"] = toJson(*mr.model);
        else
            r["modelNote"] = mr.note;
    }
    if (v.caveat && out.exit != Error)
        out.exit = Caveat;
    return out;
}

std::string human(const json& r)
{
    std::ostringstream s;
    if (r.contains("error")) {
        s << "error: " << r["error"].get<std::string>() << "\n";
        return s.str();
    }
    std::string verdict = r["verdict"].get<std::string>();
    std::string shown = verdict == "sat" ? "SAT" : verdict == "unsat" ? "UNSAT" : verdict == "valid" ? "VALID" : "NOT VALID";
    s << shown << "\n";
    if (!r["caveat"].is_null())
        s << "caveat: " << r["caveat"].get<std::string>() << "\n";
    const json& st = r["stats"];
    s << "modal depth " << st["modalDepth"] << ", recursion depth " << st["recursionDepth"] << ", nodes " << st["nodes"]
      << ", memo hits " << st["memoHits"] << ", matchings " << st["matchingsExplored"] << ", lp calls " << st["lpCalls"] << "\n";
    if (r.contains("oracle"))
        s << "oracle: " << (r["oracle"]["modelFound"].get<bool>() ? "model found" : "no model within bounds")
          << (r["oracle"]["contradiction"].get<bool>() ? " (CONTRADICTS VERDICT)" : "") << "\n";
    if (r.contains("model"))
        s << r["model"].dump(2) << "\n";
    if (r.contains("modelNote"))
        s << "no model: " << r["modelNote"].get<std::string>() << "\n";
    if (r.contains("certificate"))
        s << "certificate written to " << r["certificate"]["path"].get<std::string>() << "\n";
    return s.str();
}

void emit(std::ostream& out, const Options& o, const json& r, bool line)
{
    if (o.format == "json")
        out << (line ? r.dump() : r.dump(2)) << "\n";
    else
        out << human(r);
}

std::vector<std::string> batchLines(const std::string& path)
{
    std::vector<std::string> lines;
    std::istringstream in(readFile(path));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        auto e = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(b, e - b + 1));
    }
    return lines;
}

int runFormulaCommand(const Options& o, const LogicConfig& cfg, std::ostream& out, std::ostream& err)
{
    if (o.batch.empty() == o.formula.empty())
        throw UsageError("give exactly one of a formula or --batch");
    if (o.formula.size()) {
        Outcome r = runOne(o.command, o.formula, cfg, o, true);
        emit(out, o, r.report, false);
        return r.exit;
    }
    if (!o.cert.empty())
        throw UsageError("--cert cannot be combined with --batch");
    int worst = Sat;
    std::size_t index = 0;
    for (const std::string& line : batchLines(o.batch)) {
        json r;
        int code;
        try {
            Outcome oc = runOne(o.command, line, cfg, o, false);
            r = std::move(oc.report);
            code = oc.exit;
        } catch (const std::exception& e) {
            r = {{"error", e.what()}, {"input", line}};
            code = Error;
            err << "line " << index << ": " << e.what() << "\n";
        }
        json indexed = {{"index", index}};
        indexed.update(r);
        if (o.format == "json")
            out << indexed.dump() << "\n";
        else
            out << index << ": " << human(r);
        if (code == Error)
            worst = Error;
        else if (code == Caveat && worst != Error)
            worst = Caveat;
        ++index;
    }
    return worst;
}

int runCheckCert(const Options& o, std::ostream& out)
{
    if (o.cert.empty())
        throw UsageError("check-cert needs --cert FILE");
    json j;
    try {
        j = json::parse(readFile(o.cert));
    } catch (const json::exception& e) {
        throw CertificateError(std::string("certificate is not JSON: ") + e.what());
    }
    CertificateDocument doc = documentFromJson(j);
    json r = {{"command", "check-cert"}, {"certificate", o.cert}, {"kind", certificateKind(doc.certificate)},
              {"logic", doc.config.name()}, {"formula", toString(doc.formula)}};
    std::optional<std::string> problem;
    if (!o.formula.empty()) {
        Formula expected = parse(o.formula, doc.config);
        // certificates about the negation (refutations, countermodels) also concern the formula
        if (doc.formula == expected)
            r["about"] = "formula";
        else if (doc.formula == negate(expected))
            r["about"] = "negation";
        else
            problem = "certificate is for " + toString(doc.formula) + ", not " + toString(expected);
    }
    if (!problem)
        problem = checkCertificate(doc);
    r["valid"] = !problem;
    r["reason"] = problem ? json(*problem) : json(nullptr);
    if (o.format == "json")
        out << r.dump(2) << "\n";
    else
        out << (problem ? "INVALID: " + *problem : std::string("VALID")) << "\n";
    return problem ? Unsat : Sat;
}

int runSelftest(const Options& o, const LogicConfig& cfg, std::ostream& out)
{
    bool ok = true;
    json rep = selftest::report(cfg, o.seed, o.samples, cfg.arithmetic() ? o.pairs : 0, ok);
    if (o.format == "json") {
        out << rep.dump(2) << "\n";
    } else {
        out << rep["logic"].get<std::string>() << ": " << rep["soundness"]["checked"] << " codes checked for one-step soundness on "
            << rep["backend"].get<std::string>() << ", " << rep["soundness"]["failures"].size() << " failures\n";
        for (const auto& f : rep["soundness"]["failures"])
            out << "  " << f.get<std::string>() << "\n";
        if (rep.contains("closure")) {
            out << "  " << rep["closure"]["checked"] << " resolvent pairs, " << rep["closure"]["subsumed"] << " subsumed, "
                << rep["closure"]["sumCodeAdmissible"] << " by the summed code\n";
            for (const auto& f : rep["closure"]["failures"])
                out << "  " << f.get<std::string>() << "\n";
        }
        out << (ok ? "OK" : "FAILED") << "\n";
    }
    return ok ? Sat : Unsat;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Satisfiability and provability for rank-1 coalgebraic modal logics", "cmlsat"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cmlsat 0.1.0");

    auto common = [&](CLI::App* sub, bool formula) {
        sub->add_option("--logic", o.logic, "E, M, K, KD, COAL:n, GML, MAJ or PML (default K)");
        sub->add_option("--coeff-bound", o.coeffBound, "coefficient bound for arithmetic rule search");
        sub->add_option("--config", o.config, "JSON config file (default: $CMLSAT_CONFIG)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"human", "json"}));
        if (formula) {
            sub->add_option("formula", o.formula, "formula text");
            sub->add_option("--batch", o.batch, "file with one formula per line, # comments");
            sub->add_flag("--oracle-check", o.oracleCheck, "cross-check the verdict with the bounded semantic oracle");
            sub->add_option("--carrier", o.carrier, "oracle carrier bound");
        }
    };
    CLI::App* solve = app.add_subcommand("solve", "decide satisfiability");
    common(solve, true);
    solve->add_option("--cert", o.cert, "write a tableau (SAT) or proof of the negation (UNSAT)");
    CLI::App* prove = app.add_subcommand("prove", "decide validity");
    common(prove, true);
    prove->add_option("--cert", o.cert, "write a proof (valid) or tableau of the negation");
    CLI::App* model = app.add_subcommand("model", "decide satisfiability and construct a model");
    common(model, true);
    model->add_option("--cert", o.cert, "write the model certificate");
    CLI::App* check = app.add_subcommand("check-cert", "validate a certificate");
    common(check, false);
    check->add_option("--cert", o.cert, "certificate file")->required();
    check->add_option("formula", o.formula, "formula the certificate must be about");
    CLI::App* self = app.add_subcommand("selftest-rules", "check sampled rules for one-step soundness and resolution closure");
    common(self, false);
    self->add_option("--samples", o.samples, "number of rule codes");
    self->add_option("--pairs", o.pairs, "number of resolution pairs (arithmetic logics)");
    self->add_option("--seed", o.seed, "sampling seed");
    self->add_option("--carrier", o.carrier, "oracle carrier bound");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Sat;
    } catch (const CLI::CallForVersion&) {
        out << "cmlsat 0.1.0\n";
        return Sat;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Error;
    }
    for (CLI::App* sub : app.get_subcommands())
        o.command = sub->get_name();

    try {
        LogicConfig cfg = buildConfig(o);
        if (o.command == "check-cert")
            return runCheckCert(o, out);
        if (o.command == "selftest-rules")
            return runSelftest(o, cfg, out);
        return runFormulaCommand(o, cfg, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const CertificateError& e) {
        err << "certificate error: " << e.what() << "\n";
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
    }
    return Error;
}

} // namespace cmlsat::cli
