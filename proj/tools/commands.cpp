#include "commands.hpp"

#include <charconv>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crdu/verify.hpp"
#include "model_file.hpp"

namespace crdu {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::string model;
    std::string other;
    std::string act;
    std::string event;
    std::string properties = "supermodular,balanced,exact,AN,AA,RAA,DS,SRA,NSC";
    std::string suite;
    std::string h = "power:0.5";
    std::string out;
    std::size_t trials = 0;
    std::size_t g_states = 2;
    std::size_t h_states = 2;
    std::uint64_t seed = 42;
    bool json = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

std::string event_text(const SpacePtr& space, Mask m) { return "{" + mask_key(*space, m) + "}"; }

Json header(const std::string& command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

void emit(const Options& o, std::ostream& out, const Json& j, const std::string& text) {
    if (o.json)
        out << j.dump(2) << "\n";
    else
        out << text;
}

Json act_json(const Act& x) {
    Json j = Json::object();
    for (std::size_t i = 0; i < x.size(); ++i) j[x.space()->label(i)] = x[i];
    return j;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const Options& o, std::ostream& out) {
    ModelFile f = load_model(o.model);
    const ModelSpec& m = f.model;
    std::vector<std::pair<std::string, Act>> acts;
    if (!o.act.empty())
        acts.emplace_back(o.act, f.act(o.act));
    else
        acts = f.acts;
    if (acts.empty()) throw UsageError("the model file has no acts; pass --act or add an 'acts' section");
    Json j = header("eval");
    j["kind"] = m.kind_name();
    Json arr = Json::array();
    std::ostringstream text;
    for (const auto& [name, x] : acts) {
        const double v = value(m, x);
        const double ce = certainty_equivalent(m, x);
        Json e;
        e["act"] = name;
        e["value"] = v;
        e["certainty_equivalent"] = ce;
        text << name << ": value " << num(v) << ", certainty equivalent " << num(ce) << "\n";
        if (m.kind() != ModelSpec::Kind::MEU && m.kind() != ModelSpec::Kind::Entropic) {
            const bool linear = m.kind() == ModelSpec::Kind::Dual;
            const auto& u = m.utility();
            Act ux = linear ? x : x.map([&](double t) { return u(t); });
            Json terms = Json::array();
            for (const auto& t : choquet_decomposition(ux, m.weights())) {
                Json tj;
                tj["utility"] = t.payoff;
                tj["level_set"] = mask_key(*m.space(), t.level_set);
                tj["weight"] = t.weight;
                terms.push_back(tj);
                text << "  u = " << num(t.payoff) << " on " << event_text(m.space(), t.level_set) << " weight "
                     << num(t.weight) << "\n";
            }
            e["decomposition"] = terms;
        }
        arr.push_back(e);
    }
    j["results"] = arr;
    emit(o, out, j, text.str());
    return kExitPass;
}

// ---------------------------------------------------------------- check

struct Row {
    std::string property;
    bool holds;
    std::string witness;
};

std::string witness_of(const ModelSpec& m, const Check& c) {
    std::string w;
    for (Mask a : c.witness) w += (w.empty() ? "" : " ") + event_text(m.space(), a);
    if (!c.detail.empty()) w += (w.empty() ? "" : ": ") + c.detail;
    return w;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_check(const Options& o, std::ostream& out) {
    static const std::vector<std::string> known{"supermodular", "submodular", "additive", "balanced", "exact",
                                                "conforming",   "consistent", "AN",       "AA",       "RAA",
                                                "DS",           "SRA",        "NSC",      "family"};
    auto props = split(o.properties);
    if (props.empty()) throw UsageError("no properties requested");
    for (const auto& p : props)
        if (std::find(known.begin(), known.end(), p) == known.end()) {
            std::string list;
            for (const auto& k : known) list += (list.empty() ? "" : ",") + k;
            throw UsageError("unknown property '" + p + "' (known: " + list + ")");
        }
    ModelFile f = load_model(o.model);
    const ModelSpec& m = f.model;
    const Capacity& nu = m.capacity();
    std::optional<AttitudeReport> rep;
    auto report = [&]() -> const AttitudeReport& {
        if (!rep) rep = attitude_report(m);
        return *rep;
    };
    std::vector<Row> rows;
    for (const auto& p : props) {
        Check c;
        if (p == "supermodular") c = supermodularity(nu);
        else if (p == "submodular") c = submodularity(nu);
        else if (p == "additive") c = additivity(nu);
        else if (p == "balanced") c = is_balanced(nu) ? Check::pass() : Check::fail({}, "empty core");
        else if (p == "exact") c = exactness(nu);
        else if (p == "conforming") c = risk_conformity(nu, m.partition(), m.reference());
        else if (p == "consistent") c = p_consistency(nu, m.reference());
        else {
            const auto& r = report();
            const Flag& fl = p == "AN" ? r.an : p == "AA" ? r.aa : p == "RAA" ? r.raa : p == "DS" ? r.ds
                           : p == "SRA" ? r.sra : p == "NSC" ? r.nsc : r.family;
            rows.push_back({p, fl.holds, fl.witness});
            continue;
        }
        rows.push_back({p, c.holds, c.holds ? std::string{} : witness_of(m, c)});
    }
    bool all = true;
    Json j = header("check");
    Json arr = Json::array();
    std::ostringstream text;
    for (const auto& r : rows) {
        all = all && r.holds;
        Json rj;
        rj["property"] = r.property;
        rj["holds"] = r.holds;
        rj["witness"] = r.witness;
        arr.push_back(rj);
        text << std::left << std::setw(14) << r.property << (r.holds ? "pass" : "fail");
        if (!r.witness.empty()) text << "  " << r.witness;
        text << "\n";
    }
    j["properties"] = arr;
    j["all_hold"] = all;
    emit(o, out, j, text.str());
    return all ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- core

int cmd_core(const Options& o, std::ostream& out) {
    ModelFile f = load_model(o.model);
    const ModelSpec& m = f.model;
    const Capacity& nu = m.capacity();
    auto verts = core_vertices(nu);
    Json j = header("core");
    std::ostringstream text;
    Json vj = Json::array();
    text << "core vertices: " << verts.size() << "\n";
    for (const auto& v : verts) {
        Json w = Json::object();
        text << " ";
        for (std::size_t i = 0; i < v.size(); ++i) {
            w[m.space()->label(i)] = v.weight(i);
            text << " " << m.space()->label(i) << "=" << num(v.weight(i));
        }
        text << "\n";
        vj.push_back(w);
    }
    j["vertices"] = vj;
    j["balanced"] = !verts.empty();
    Check ex = exactness(nu);
    j["exact"] = ex.holds;
    text << "balanced: " << (verts.empty() ? "false" : "true") << "\nexact: " << (ex.holds ? "true" : "false");
    if (!ex.holds) text << "  " << witness_of(m, ex);
    text << "\n";
    if (!o.act.empty() && !verts.empty()) {
        const Act& x = f.act(o.act);
        RobustValue rv = robust_value(m.utility(), m.distortion(), nu, x);
        const double c = choquet(x.map([&](double t) { return m.utility()(t); }), compose(m.distortion(), nu));
        j["robust_value"] = rv.value;
        j["robust_value_exact"] = rv.exact;
        j["choquet"] = c;
        text << "robust value " << num(rv.value) << (rv.exact ? "" : " (upper bound)") << ", Choquet " << num(c) << "\n";
    }
    emit(o, out, j, text.str());
    return kExitPass;
}

// ---------------------------------------------------------------- match

int cmd_match(const Options& o, std::ostream& out) {
    ModelFile f = load_model(o.model);
    const ModelSpec& m = f.model;
    const SpacePtr& space = m.space();
    std::vector<Mask> events;
    if (!o.event.empty()) {
        try {
            events.push_back(parse_mask_key(*space, o.event));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    } else {
        for (Mask a = 0; a <= space->full_mask(); ++a) events.push_back(a);
    }
    Json j = header("match");
    Json arr = Json::array();
    std::ostringstream text;
    for (Mask a : events) {
        const double mp = matching_probability(m, Event(space, a));
        const bool risky = m.partition().measurable(a);
        Json e;
        e["event"] = mask_key(*space, a);
        e["matching_probability"] = mp;
        e["risky"] = risky;
        if (risky) e["probability"] = m.reference().probability(a);
        arr.push_back(e);
        text << std::left << std::setw(20) << event_text(space, a) << num(mp);
        if (risky) text << "  (risky, P = " << num(m.reference().probability(a)) << ")";
        text << "\n";
    }
    j["events"] = arr;
    emit(o, out, j, text.str());
    return kExitPass;
}

// ---------------------------------------------------------------- family

int cmd_family(const Options& o, std::ostream& out) {
    ModelFile f = load_model(o.model);
    const ModelSpec& m = f.model;
    Check pc = p_consistency(m.capacity(), m.reference());
    if (!pc) {
        Json j = header("family");
        j["p_consistent"] = false;
        j["witness"] = witness_of(m, pc);
        emit(o, out, j, "capacity not P-consistent at " + witness_of(m, pc) + "; the distortion family is undefined\n");
        return kExitFail;
    }
    std::vector<std::pair<std::string, Act>> acts;
    if (!o.act.empty())
        acts.emplace_back(o.act, f.act(o.act));
    else
        acts = f.acts;
    Json j = header("family");
    j["p_consistent"] = true;
    std::ostringstream text;
    Check a = family_property_a(m);
    j["property_a"] = a.holds;
    text << "property (a): " << (a.holds ? "pass" : "fail " + witness_of(m, a)) << "\n";
    bool all = a.holds;
    Json arr = Json::array();
    for (const auto& [name, x] : acts) {
        auto e = derive_distortion_family(m, x);
        Json ej;
        ej["act"] = name;
        Json lv = Json::array();
        text << name << ":";
        for (std::size_t i = 0; i < e.levels.size(); ++i) {
            lv.push_back({e.levels[i], e.values[i]});
            text << " g(" << num(e.levels[i]) << ")=" << num(e.values[i]);
        }
        text << "\n";
        ej["levels"] = lv;
        const double fv = family_representation_value(m, x), v = value(m, x);
        Check c = family_property_c_indicators(m, x);
        ej["family_value"] = fv;
        ej["value"] = v;
        ej["property_c"] = c.holds;
        ej["ambiguity_averse"] = family_entry_ambiguity_averse(m, e);
        all = all && c.holds;
        text << "  family value " << num(fv) << ", value " << num(v) << ", property (c) "
             << (c.holds ? "pass" : "fail") << "\n";
        arr.push_back(ej);
    }
    j["acts"] = arr;
    emit(o, out, j, text.str());
    return all ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const Options& o, std::ostream& out) {
    if (o.other.empty()) throw UsageError("compare needs --other PATH (the candidate more ambiguity averse model)");
    ModelFile f1 = load_model(o.model);
    ModelFile f2 = load_model(o.other);
    ComparativeResult c = comparative_full(f1.model, f2.model);
    const std::size_t pairs = o.trials ? o.trials : 1000;
    EpCheck ep = comparative_sampled_check(f1.model, f2.model, pairs, o.seed);
    Json j = header("compare");
    j["more_ambiguity_averse"] = c.holds;
    j["behavioral"] = c.behavioral;
    j["witness"] = c.witness;
    j["sampled_pairs"] = ep.pairs;
    j["sampled_passed"] = ep.passed;
    if (ep.witness_x) {
        j["sampled_witness"] = {{"X", act_json(*ep.witness_x)}, {"Y", act_json(*ep.witness_y)}};
    }
    std::ostringstream text;
    text << "second model more ambiguity averse: " << (c.holds ? "true" : "false") << "\n";
    text << "behavioral binary-act check: " << (c.behavioral ? "pass" : "fail") << "\n";
    if (!c.witness.empty()) text << "witness: " << c.witness << "\n";
    text << "sampled pairs: " << ep.passed << "/" << ep.pairs << "\n";
    if (ep.witness_x) text << "sampled witness: X = " << ep.witness_x->to_string() << ", Y = " << ep.witness_y->to_string() << "\n";
    emit(o, out, j, text.str());
    return c.holds && ep.holds() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out) {
    static const std::map<std::string, std::size_t> defaults{{"maxmin", 100}, {"main", 50},  {"comam", 20},
                                                             {"family", 20},  {"latt", 200}, {"counterexample", 1},
                                                             {"dv", 20}};
    auto it = defaults.find(o.suite);
    if (it == defaults.end()) {
        std::string list;
        for (const auto& s : suite_names()) list += (list.empty() ? "" : ", ") + s;
        throw UsageError("unknown theorem id '" + o.suite + "' (known: " + list + ")");
    }
    SuiteResult r = run_suite(o.suite, o.trials ? o.trials : it->second, o.seed);
    Json j = header("verify");
    j["suite"] = r.name;
    j["trials"] = r.trials;
    j["passed"] = r.passed;
    j["first_failure"] = r.first_failure;
    j["lines"] = r.lines;
    std::ostringstream text;
    text << r.name << ": " << r.passed << "/" << r.trials << "\n";
    for (const auto& l : r.lines) text << "  " << l << "\n";
    if (!r.first_failure.empty()) text << "first failure: " << r.first_failure << "\n";
    emit(o, out, j, text.str());
    return r.ok() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- counterexample

int cmd_counterexample(const Options& o, std::ostream& out) {
    DistortionFunction h = parse_distortion(o.h);
    SpacePtr space = product_space(o.g_states, o.h_states);
    ProbabilityMeasure p = ProbabilityMeasure::uniform(space);
    Counterexample ce = construct_counterexample(o.g_states, o.h_states, p, h);
    ModelSpec m = ModelSpec::crdu(UtilityFunction::exponential(1.0).normalized(), ce.g, ce.nu, ce.g_partition, p);
    ModelFile f{m, {}, ce.h_partition};
    const Mask a0 = ce.h_partition.blocks()[0];
    const double sum = ce.nu(a0) + ce.nu(space->full_mask() & ~a0);
    if (!o.out.empty()) write_model(f, o.out);
    Json j = header("counterexample");
    j["states"] = space->labels();
    j["A0"] = mask_key(*space, a0);
    j["nu_A0_plus_complement"] = sum;
    if (!o.out.empty()) j["out"] = o.out;
    std::ostringstream text;
    std::ostringstream s6;
    s6 << std::fixed << std::setprecision(6) << sum;
    text << "nu(A0) + nu(A0^c) = " << s6.str() << " with A0 = " << event_text(space, a0) << "\n";
    if (o.out.empty())
        text << save_model(f);
    else
        text << "written to " << o.out << "\n";
    emit(o, out, j, text.str());
    return kExitPass;
}

// ---------------------------------------------------------------- audit

int cmd_audit(const Options& o, std::ostream& out) {
    ModelFile f = load_model(o.model);
    AuditReport rep = axiom_audit(f.model, o.trials ? o.trials : 1000, o.seed);
    Json j = header("audit");
    Json arr = Json::array();
    std::ostringstream text;
    bool all = true;
    for (const auto& a : rep.axioms) {
        all = all && a.ok();
        Json aj;
        aj["axiom"] = a.name;
        aj["trials"] = a.trials;
        aj["passed"] = a.passed;
        aj["skipped"] = a.skipped;
        aj["note"] = a.note;
        aj["witness"] = a.witness;
        arr.push_back(aj);
        text << std::left << std::setw(5) << a.name;
        if (a.skipped)
            text << "skipped (" << a.note << ")";
        else
            text << a.passed << "/" << a.trials;
        if (!a.witness.empty()) text << "  first counterexample: " << a.witness;
        text << "\n";
    }
    for (const auto& n : rep.notes) text << "note: " << n << "\n";
    j["axioms"] = arr;
    j["notes"] = rep.notes;
    emit(o, out, j, text.str());
    return all ? kExitPass : kExitFail;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Choquet rank-dependent utility toolkit", "crdu"};
    app.require_subcommand(1);
    Options o;

    auto model = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--model", o.model, "model file (JSON)");
        if (required) opt->required();
    };
    auto flags = [&](CLI::App* c) {
        c->add_flag("--json", o.json, "machine-readable output");
        c->add_option("--out", o.out, "output path");
    };

    auto* eval = app.add_subcommand("eval", "value, certainty equivalent and Choquet decomposition of acts");
    model(eval, true);
    eval->add_option("--act", o.act, "act name (all acts when omitted)");
    flags(eval);

    auto* check = app.add_subcommand("check", "capacity and attitude properties with witnesses");
    model(check, true);
    check->add_option("--properties,properties", o.properties, "comma-separated property list");
    flags(check);

    auto* core = app.add_subcommand("core", "core vertices, balancedness, exactness and robust value");
    model(core, true);
    core->add_option("--act", o.act, "act for the robust value");
    flags(core);

    auto* match = app.add_subcommand("match", "matching probabilities of events");
    model(match, true);
    match->add_option("--event", o.event, "comma-joined labels (all events when omitted)");
    flags(match);

    auto* family = app.add_subcommand("family", "distortion families of acts");
    model(family, true);
    family->add_option("--act", o.act, "act name (all acts when omitted)");
    flags(family);

    auto* compare = app.add_subcommand("compare", "is the --other model more ambiguity averse than --model?");
    model(compare, true);
    compare->add_option("--other", o.other, "second model file")->required();
    compare->add_option("--trials", o.trials, "sampled act pairs (default 1000)");
    compare->add_option("--seed", o.seed, "random seed");
    flags(compare);

    auto* verify = app.add_subcommand("verify", "randomized verification suite");
    verify->add_option("suite", o.suite, "maxmin | main | comam | family | latt | counterexample | dv")->required();
    verify->add_option("--trials", o.trials, "number of trials");
    verify->add_option("--seed", o.seed, "random seed");
    flags(verify);

    auto* cex = app.add_subcommand("counterexample", "write the product-space counterexample model");
    cex->add_option("--g-states", o.g_states, "blocks of the risk partition");
    cex->add_option("--h-states", o.h_states, "blocks of the independent partition");
    cex->add_option("--h-spec", o.h, "strictly concave distortion, e.g. power:0.5");
    flags(cex);

    auto* audit = app.add_subcommand("audit", "representation-level axiom audit");
    model(audit, true);
    audit->add_option("--trials", o.trials, "samples per axiom (default 1000)");
    audit->add_option("--seed", o.seed, "random seed");
    flags(audit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*eval) return cmd_eval(o, out);
        if (*check) return cmd_check(o, out);
        if (*core) return cmd_core(o, out);
        if (*match) return cmd_match(o, out);
        if (*family) return cmd_family(o, out);
        if (*compare) return cmd_compare(o, out);
        if (*verify) return cmd_verify(o, out);
        if (*cex) return cmd_counterexample(o, out);
        if (*audit) return cmd_audit(o, out);
    } catch (const ModelFileError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace crdu
