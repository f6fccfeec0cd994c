#include "model_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace crdu {

using Json = nlohmann::ordered_json;

const Act& ModelFile::act(const std::string& name) const {
    for (const auto& [n, a] : acts)
        if (n == name) return a;
    std::string known;
    for (const auto& [n, a] : acts) known += (known.empty() ? "" : ", ") + n;
    throw DomainError("unknown act '" + name + "' (available: " + (known.empty() ? "none" : known) + ")");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset; ++i)
        if (text[i] == '\n') ++line;
    return line;
}

class Reader {
public:
    Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    // Line of `"key"` inside the object opened by `"section"`, else of the
    // section itself, else 1.
    std::size_t locate(const std::string& section, const std::string& key = {}) const {
        std::size_t s = text_.find("\"" + section + "\"");
        if (s == std::string::npos) return 1;
        if (key.empty()) return line_at(text_, s);
        std::size_t k = text_.find("\"" + key + "\"", s + section.size() + 2);
        return line_at(text_, k == std::string::npos ? s : k);
    }

    [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
        throw ModelFileError(source_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail_at(const std::string& section, const std::string& msg, const std::string& key = {}) const {
        fail(locate(section, key), msg);
    }

    const Json& require(const Json& obj, const std::string& field, const std::string& where) const {
        if (!obj.contains(field)) fail_at(where, "missing field '" + field + "'");
        return obj.at(field);
    }

    double number(const Json& v, const std::string& section, const std::string& what, const std::string& key = {}) const {
        if (!v.is_number()) fail_at(section, what + " must be a number", key);
        return v.get<double>();
    }

    // Runs f, turning library validation errors into located errors.
    template <class F>
    auto guarded(const std::string& section, F&& f, const std::string& key = {}) const {
        try {
            return f();
        } catch (const Error& e) {
            fail_at(section, e.what(), key);
        } catch (const Json::exception& e) {
            fail_at(section, e.what(), key);
        }
    }

private:
    const std::string& text_;
    std::string source_;
};

std::vector<Point> read_points(const Reader& rd, const Json& v, const std::string& section) {
    if (!v.is_array()) rd.fail_at(section, "points must be a list of [x, y] pairs");
    std::vector<Point> pts;
    for (const auto& p : v) {
        if (!p.is_array() || p.size() != 2) rd.fail_at(section, "points must be a list of [x, y] pairs");
        pts.emplace_back(rd.number(p[0], section, "point coordinate"), rd.number(p[1], section, "point coordinate"));
    }
    return pts;
}

DistortionFunction read_distortion(const Reader& rd, const Json& v, const std::string& section) {
    return rd.guarded(section, [&] {
        if (v.is_string()) return parse_distortion(v.get<std::string>());
        if (!v.is_object()) throw DomainError("distortion must be an object or a string");
        const std::string type = rd.require(v, "type", section).get<std::string>();
        if (type == "identity") return DistortionFunction::identity();
        if (type == "power") return DistortionFunction::power(rd.number(rd.require(v, "gamma", section), section, "gamma"));
        if (type == "pwl") return DistortionFunction::piecewise_linear(read_points(rd, rd.require(v, "points", section), section));
        throw DomainError("unknown distortion type '" + type + "'");
    });
}

UtilityFunction read_utility(const Reader& rd, const Json& v, const std::string& section) {
    if (!v.is_object()) rd.fail_at(section, "utility must be an object");
    return rd.guarded(section, [&] {
        const std::string type = rd.require(v, "type", section).get<std::string>();
        auto opt = [&](const char* f, double def) { return v.contains(f) ? rd.number(v.at(f), section, f) : def; };
        UtilityFunction u = UtilityFunction::identity();
        if (type == "identity")
            u = UtilityFunction::identity(opt("lo", -kInf), opt("hi", kInf));
        else if (type == "power")
            u = UtilityFunction::power(rd.number(rd.require(v, "gamma", section), section, "gamma"), opt("lo", 0.0),
                                       opt("hi", kInf));
        else if (type == "exponential")
            u = UtilityFunction::exponential(rd.number(rd.require(v, "beta", section), section, "beta"),
                                             opt("lo", -kInf), opt("hi", kInf));
        else if (type == "pwl")
            u = UtilityFunction::piecewise_linear(read_points(rd, rd.require(v, "points", section), section));
        else
            throw DomainError("unknown utility type '" + type + "'");
        if (v.contains("scale") || v.contains("offset")) u = u.affine(opt("scale", 1.0), opt("offset", 0.0));
        if (v.contains("normalize") && v.at("normalize").get<bool>()) u = u.normalized();
        return u;
    });
}

ProbabilityMeasure read_measure(const Reader& rd, const SpacePtr& space, const Json& v, const std::string& section) {
    if (!v.is_object()) rd.fail_at(section, "a measure maps state labels to probabilities");
    std::vector<double> w(space->size(), 0.0);
    std::vector<bool> seen(space->size(), false);
    for (const auto& [label, x] : v.items()) {
        auto idx = space->index_of(label);
        if (!idx) rd.fail_at(section, "unknown state '" + label + "'", label);
        w[*idx] = rd.number(x, section, "probability", label);
        seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) rd.fail_at(section, "missing probability for state '" + space->label(i) + "'");
    return rd.guarded(section, [&] { return ProbabilityMeasure(space, w); });
}

RiskPartition read_partition(const Reader& rd, const SpacePtr& space, const Json& v, const std::string& section) {
    if (!v.is_array()) rd.fail_at(section, "a partition is a list of label lists");
    std::vector<Mask> blocks;
    for (const auto& b : v) {
        if (!b.is_array()) rd.fail_at(section, "a partition is a list of label lists");
        Mask m = 0;
        for (const auto& l : b) {
            auto idx = space->index_of(l.get<std::string>());
            if (!idx) rd.fail_at(section, "unknown state '" + l.get<std::string>() + "'");
            m |= Mask{1} << *idx;
        }
        blocks.push_back(m);
    }
    return rd.guarded(section, [&] { return RiskPartition(space, blocks); });
}

Capacity read_capacity(const Reader& rd, const SpacePtr& space, const Json& v) {
    const std::string section = "capacity";
    if (!v.is_object()) rd.fail_at(section, "capacity maps subset keys to values");
    const Mask full = space->full_mask();
    std::vector<double> table(space->event_count(), 0.0);
    table[full] = 1.0;
    std::map<Mask, std::string> written;
    for (const auto& [key, x] : v.items()) {
        Mask m = 0;
        if (key != "{}") m = rd.guarded(section, [&] { return parse_mask_key(*space, key); }, key);
        if (written.count(m)) rd.fail_at(section, "subset '" + key + "' given twice (also as '" + written[m] + "')", key);
        written[m] = key;
        table[m] = rd.number(x, section, "capacity value", key);
        if (m == 0 && std::abs(table[m]) > kEventTolerance)
            rd.fail_at(section, "capacity not grounded: nu(empty) = " + std::to_string(table[m]), key);
        if (m == full && std::abs(table[m] - 1.0) > kEventTolerance)
            rd.fail_at(section, "capacity not normalized: nu(full) = " + std::to_string(table[m]), key);
    }
    for (Mask m = 1; m < full; ++m)
        if (!written.count(m)) rd.fail_at(section, "incomplete capacity table: missing subset '" + mask_key(*space, m) + "'");
    // Locate the first monotonicity violation at the larger event's key.
    for (Mask a = 0; a < full; ++a)
        for (std::size_t i = 0; i < space->size(); ++i) {
            Mask b = a | (Mask{1} << i);
            if (b != a && table[a] > table[b] + kEventTolerance) {
                std::string kb = written.count(b) ? written[b] : std::string{};
                rd.fail_at(section, "capacity not monotone: nu{" + mask_key(*space, a) + "} > nu{" + mask_key(*space, b) + "}", kb);
            }
        }
    return rd.guarded(section, [&] { return Capacity(space, table); });
}

Json write_utility(const UtilityFunction& u) {
    Json j;
    switch (u.kind()) {
    case UtilityFunction::Kind::Identity: j["type"] = "identity"; break;
    case UtilityFunction::Kind::Power:
        j["type"] = "power";
        j["gamma"] = u.parameter();
        break;
    case UtilityFunction::Kind::Exponential:
        j["type"] = "exponential";
        j["beta"] = u.parameter();
        break;
    case UtilityFunction::Kind::PiecewiseLinear: {
        j["type"] = "pwl";
        Json pts = Json::array();
        for (const auto& [x, y] : u.points()) pts.push_back({x, y});
        j["points"] = pts;
        break;
    }
    }
    if (u.kind() != UtilityFunction::Kind::PiecewiseLinear) {
        if (std::isfinite(u.lo())) j["lo"] = u.lo();
        if (std::isfinite(u.hi())) j["hi"] = u.hi();
    }
    j["scale"] = u.scale();
    j["offset"] = u.offset();
    return j;
}

Json write_distortion(const DistortionFunction& g) {
    Json j;
    switch (g.kind()) {
    case DistortionFunction::Kind::Identity: j["type"] = "identity"; break;
    case DistortionFunction::Kind::Power:
        j["type"] = "power";
        j["gamma"] = g.gamma();
        break;
    case DistortionFunction::Kind::PiecewiseLinear: {
        j["type"] = "pwl";
        Json pts = Json::array();
        for (const auto& [x, y] : g.points()) pts.push_back({x, y});
        j["points"] = pts;
        break;
    }
    }
    return j;
}

Json write_measure(const ProbabilityMeasure& p) {
    Json j = Json::object();
    for (std::size_t i = 0; i < p.size(); ++i) j[p.space()->label(i)] = p.weight(i);
    return j;
}

Json write_partition(const RiskPartition& part) {
    Json j = Json::array();
    for (Mask b : part.blocks()) {
        Json block = Json::array();
        for (std::size_t i = 0; i < part.space()->size(); ++i)
            if (mask_contains(b, i)) block.push_back(part.space()->label(i));
        j.push_back(block);
    }
    return j;
}

} // namespace

namespace {

ModelFile parse_impl(const std::string& text, const std::string& source) {
    Reader rd(text, source);
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        rd.fail(line_at(text, e.byte == 0 ? 0 : e.byte - 1), std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) rd.fail(1, "a model file is a JSON object");
    if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion)
        rd.fail_at("schema_version", "unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");

    const Json& states = rd.require(doc, "states", "states");
    if (!states.is_array()) rd.fail_at("states", "states must be a list of labels");
    std::vector<std::string> labels;
    for (const auto& s : states) {
        if (!s.is_string()) rd.fail_at("states", "state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    SpacePtr space = rd.guarded("states", [&] { return StateSpace::make(labels); });

    const ModelSpec::Kind kind =
        doc.contains("kind") ? rd.guarded("kind", [&] { return parse_kind(doc.at("kind").get<std::string>()); })
                             : ModelSpec::Kind::CRDU;
    auto measure = [&](const char* f) { return read_measure(rd, space, rd.require(doc, f, f), f); };
    auto partition = [&] {
        return doc.contains("risk_partition") ? read_partition(rd, space, doc.at("risk_partition"), "risk_partition")
                                              : RiskPartition::trivial(space);
    };
    auto utility = [&] { return read_utility(rd, rd.require(doc, "utility", "utility"), "utility"); };
    auto distortion = [&] { return read_distortion(rd, rd.require(doc, "distortion", "distortion"), "distortion"); };
    auto capacity = [&] { return read_capacity(rd, space, rd.require(doc, "capacity", "capacity")); };

    std::optional<ModelSpec> model;
    switch (kind) {
    case ModelSpec::Kind::CRDU: {
        auto u = utility();
        auto g = distortion();
        auto nu = capacity();
        auto part = partition();
        auto p = measure("reference");
        model = rd.guarded("capacity", [&] { return ModelSpec::crdu(u, g, nu, part, p); });
        break;
    }
    case ModelSpec::Kind::CEU: {
        auto u = utility();
        auto nu = capacity();
        auto part = partition();
        auto p = measure("reference");
        model = rd.guarded("capacity", [&] { return ModelSpec::ceu(u, nu, part, p); });
        break;
    }
    case ModelSpec::Kind::RDU: {
        auto u = utility();
        auto g = distortion();
        auto p = measure("reference");
        model = rd.guarded("utility", [&] { return ModelSpec::rdu(u, g, p); });
        break;
    }
    case ModelSpec::Kind::Dual: {
        auto g = distortion();
        auto nu = capacity();
        auto part = partition();
        auto p = measure("reference");
        model = rd.guarded("capacity", [&] { return ModelSpec::dual(g, nu, part, p); });
        break;
    }
    case ModelSpec::Kind::MEU: {
        auto u = utility();
        const Json& pr = rd.require(doc, "priors", "priors");
        if (!pr.is_array() || pr.empty()) rd.fail_at("priors", "priors must be a nonempty list of measures");
        std::vector<ProbabilityMeasure> priors;
        for (const auto& q : pr) priors.push_back(read_measure(rd, space, q, "priors"));
        std::optional<RiskPartition> part;
        std::optional<ProbabilityMeasure> p;
        if (doc.contains("reference")) {
            p = measure("reference");
            part = partition();
        }
        model = rd.guarded("priors", [&] { return ModelSpec::meu(u, priors, part, p); });
        break;
    }
    case ModelSpec::Kind::Entropic: {
        double beta = rd.number(rd.require(doc, "beta", "beta"), "beta", "beta");
        auto p = measure("reference");
        model = rd.guarded("beta", [&] { return ModelSpec::entropic(beta, p); });
        break;
    }
    }

    ModelFile out{std::move(*model), {}, std::nullopt};
    if (doc.contains("h_partition")) out.h_partition = read_partition(rd, space, doc.at("h_partition"), "h_partition");
    if (doc.contains("acts")) {
        const Json& acts = doc.at("acts");
        if (!acts.is_object()) rd.fail_at("acts", "acts map names to state payoffs");
        for (const auto& [name, pay] : acts.items()) {
            if (!pay.is_object()) rd.fail_at("acts", "act '" + name + "' must map state labels to payoffs", name);
            std::vector<double> v(space->size(), 0.0);
            std::vector<bool> seen(space->size(), false);
            for (const auto& [label, x] : pay.items()) {
                auto idx = space->index_of(label);
                if (!idx) rd.fail_at("acts", "act '" + name + "': unknown state '" + label + "'", name);
                v[*idx] = rd.number(x, "acts", "payoff", name);
                seen[*idx] = true;
            }
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (!seen[i]) rd.fail_at("acts", "act '" + name + "' misses state '" + space->label(i) + "'", name);
            out.acts.emplace_back(name, Act(space, std::move(v)));
        }
    }
    return out;
}

} // namespace

ModelFile parse_model(const std::string& text, const std::string& source) {
    try {
        return parse_impl(text, source);
    } catch (const Json::exception& e) {
        throw ModelFileError(source + ":1: " + e.what());
    }
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError(path + ":0: cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path);
}

std::string save_model(const ModelFile& file) {
    const ModelSpec& m = file.model;
    const SpacePtr& space = m.space();
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = m.kind_name();
    j["states"] = space->labels();
    if (m.has_reference()) j["reference"] = write_measure(m.reference());
    if (m.kind() != ModelSpec::Kind::RDU && m.kind() != ModelSpec::Kind::Entropic &&
        (m.kind() != ModelSpec::Kind::MEU || m.has_reference()))
        j["risk_partition"] = write_partition(m.partition());
    if (file.h_partition) j["h_partition"] = write_partition(*file.h_partition);
    if (m.kind() != ModelSpec::Kind::Dual && m.kind() != ModelSpec::Kind::Entropic) j["utility"] = write_utility(m.utility());
    if (m.kind() == ModelSpec::Kind::CRDU || m.kind() == ModelSpec::Kind::RDU || m.kind() == ModelSpec::Kind::Dual)
        j["distortion"] = write_distortion(m.distortion());
    if (m.has_capacity()) {
        Json cap = Json::object();
        const Mask full = space->full_mask();
        for (Mask a = 1; a < full; ++a) cap[mask_key(*space, a)] = m.capacity()(a);
        j["capacity"] = cap;
    }
    if (m.kind() == ModelSpec::Kind::MEU) {
        Json pr = Json::array();
        for (const auto& q : m.priors()) pr.push_back(write_measure(q));
        j["priors"] = pr;
    }
    if (m.kind() == ModelSpec::Kind::Entropic) j["beta"] = m.beta();
    if (!file.acts.empty()) {
        Json acts = Json::object();
        for (const auto& [name, x] : file.acts) {
            Json pay = Json::object();
            for (std::size_t i = 0; i < x.size(); ++i) pay[space->label(i)] = x[i];
            acts[name] = pay;
        }
        j["acts"] = acts;
    }
    return j.dump(2) + "\n";
}

void write_model(const ModelFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ModelFileError(path + ":0: cannot write file");
    out << save_model(file);
}

} // namespace crdu
