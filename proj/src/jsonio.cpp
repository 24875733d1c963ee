#include "helson/jsonio.hpp"

#include <cmath>

namespace helson {

using nlohmann::json;

namespace {

[[noreturn]] void badSpec(const std::string& what) { throw DomainError("spec JSON: " + what); }

Complex complexFromJson(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    badSpec("complex values are a number or [re,im]");
}

json complexToJson(Complex c) { return json::array({c.real(), c.imag()}); }

OneVarSequence oneVarFromJson(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "delta") return OneVarSequence::delta();
        if (name == "hilbert") return OneVarSequence::hilbert();
        if (name == "appendix") return OneVarSequence::appendix();
        badSpec("unknown one-variable sequence '" + name + "'");
    }
    if (j.is_array()) {
        std::vector<double> coeffs;
        for (const auto& v : j) {
            if (!v.is_number()) badSpec("coefficient lists hold numbers");
            coeffs.push_back(v.get<double>());
        }
        return OneVarSequence::coefficients(std::move(coeffs));
    }
    badSpec("one-variable sequences are a name or a coefficient array");
}

json oneVarToJson(const OneVarSequence& s) {
    switch (s.kind()) {
        case OneVarSequence::Kind::Delta: return "delta";
        case OneVarSequence::Kind::Hilbert: return "hilbert";
        case OneVarSequence::Kind::Appendix: return "appendix";
        case OneVarSequence::Kind::Coefficients: return json(s.storedCoefficients());
    }
    return "delta";
}

} // namespace

Point pointFromJson(const json& j) {
    if (!j.is_object()) badSpec("point must be an object");
    if (j.contains("bohr")) {
        if (!j["bohr"].is_number()) badSpec("bohr exponent must be a number");
        return Point::bohrPoint(j["bohr"].get<double>());
    }
    if (j.contains("explicit")) {
        if (!j["explicit"].is_array()) badSpec("explicit coordinates must be an array");
        std::vector<Point::Coordinate> coords;
        for (const auto& pair : j["explicit"]) {
            if (!pair.is_array() || pair.size() != 2) badSpec("explicit entries are [position, value]");
            coords.push_back({pair[0].get<std::uint32_t>(), pair[1].get<double>()});
        }
        return Point::explicitPoint(std::move(coords));
    }
    badSpec("point needs 'explicit' or 'bohr'");
}

json pointToJson(const Point& p) {
    json j = json::object();
    if (p.isBohr()) {
        j["bohr"] = p.bohrExponent();
        return j;
    }
    json coords = json::array();
    for (const auto& c : p.coordinates()) coords.push_back(json::array({c.position, c.value}));
    j["explicit"] = std::move(coords);
    return j;
}

DiscreteMeasure discreteMeasureFromJson(const json& j) {
    if (!j.contains("atoms") || !j["atoms"].is_array()) badSpec("discrete measure needs 'atoms'");
    std::vector<DiscreteMeasure::Atom> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.contains("w") || !a["w"].is_number()) badSpec("atom needs numeric weight 'w'");
        if (!a.contains("point")) badSpec("atom needs 'point'");
        atoms.push_back({a["w"].get<double>(), pointFromJson(a["point"])});
    }
    return DiscreteMeasure(std::move(atoms));
}

HelsonFormSpec formSpecFromJson(const json& j) {
    if (!j.contains("terms") || !j["terms"].is_array()) badSpec("form spec needs 'terms'");
    std::vector<HelsonFormSpec::Term> terms;
    for (const auto& t : j["terms"]) {
        FactorizableOp op;
        if (t.contains("scalar")) op.scalar = complexFromJson(t["scalar"]);
        if (t.contains("directions")) {
            if (!t["directions"].is_array()) badSpec("'directions' must be an array");
            for (const auto& d : t["directions"]) {
                if (d.is_string()) {
                    if (d.get<std::string>() != "dirichlet")
                        badSpec("unknown direction '" + d.get<std::string>() + "'");
                    op.directions.push_back(Direction::tangentLog());
                    continue;
                }
                if (!d.is_array()) badSpec("direction must be [[j,re,im],...] or \"dirichlet\"");
                std::vector<Direction::Component> comps;
                for (const auto& c : d) {
                    if (!c.is_array() || c.size() != 3) badSpec("direction entries are [j,re,im]");
                    comps.push_back({c[0].get<std::uint32_t>(),
                                     Complex(c[1].get<double>(), c[2].get<double>())});
                }
                op.directions.push_back(Direction::finite(std::move(comps)));
            }
        }
        if (!t.contains("point")) badSpec("form term needs 'point'");
        terms.push_back({std::move(op), pointFromJson(t["point"])});
    }
    return HelsonFormSpec(std::move(terms));
}

json formSpecToJson(const HelsonFormSpec& spec) {
    json terms = json::array();
    for (const auto& t : spec.terms()) {
        json term = json::object();
        term["scalar"] = complexToJson(t.op.scalar);
        json dirs = json::array();
        for (const auto& d : t.op.directions) {
            if (d.isTangentLog()) {
                dirs.push_back("dirichlet");
                continue;
            }
            json comps = json::array();
            for (const auto& c : d.components())
                comps.push_back(json::array({c.position, c.value.real(), c.value.imag()}));
            dirs.push_back(std::move(comps));
        }
        term["directions"] = std::move(dirs);
        term["point"] = pointToJson(t.point);
        terms.push_back(std::move(term));
    }
    return json{{"type", "form"}, {"terms", std::move(terms)}};
}

MomentSequence momentSequenceFromJson(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        badSpec("moment sequence needs a string 'type'");
    const std::string type = j["type"].get<std::string>();

    if (type == "discrete") return MomentSequence::discrete(discreteMeasureFromJson(j));

    if (type == "halfline") {
        if (!j.contains("density")) badSpec("halfline needs 'density'");
        const json& d = j["density"];
        if (d.is_string()) {
            const std::string name = d.get<std::string>();
            if (name == "lebesgue") return MomentSequence::halfLine(HalfLineDensity::lebesgue());
            if (name == "appendix") return MomentSequence::halfLine(HalfLineDensity::appendix());
            if (name == "inverse-square")
                return MomentSequence::halfLine(HalfLineDensity::inverseSquareAboveOne());
            badSpec("unknown density '" + name + "'");
        }
        if (d.is_object() && d.contains("poly")) {
            const json& p = d["poly"];
            if (!p.contains("interval") || !p["interval"].is_array() || p["interval"].size() != 2)
                badSpec("poly density needs 'interval':[a,b]");
            const double a = p["interval"][0].get<double>();
            double b;
            if (p["interval"][1].is_string() && p["interval"][1].get<std::string>() == "inf")
                b = std::numeric_limits<double>::infinity();
            else
                b = p["interval"][1].get<double>();
            std::vector<double> coeffs;
            if (p.contains("coeffs"))
                for (const auto& c : p["coeffs"]) coeffs.push_back(c.get<double>());
            return MomentSequence::halfLine(HalfLineDensity::weightedPolynomial(a, b, std::move(coeffs)));
        }
        badSpec("density is a name or {'poly':{...}}");
    }

    if (type == "multiplicative") {
        if (!j.contains("primes") || !j["primes"].is_object()) badSpec("multiplicative needs 'primes'");
        std::map<std::uint32_t, OneVarSequence> factors;
        for (const auto& [key, value] : j["primes"].items()) {
            const unsigned long pos = std::stoul(key);
            factors.emplace(static_cast<std::uint32_t>(pos), oneVarFromJson(value));
        }
        return MomentSequence::multiplicative(std::move(factors));
    }

    if (type == "closed") {
        if (!j.contains("name") || !j["name"].is_string()) badSpec("closed needs 'name'");
        const std::string name = j["name"].get<std::string>();
        if (name == "multiplicative-hilbert")
            return MomentSequence::closedForm(MomentSequence::ClosedFormName::MultiplicativeHilbert);
        if (name == "power-of-two-hilbert")
            return MomentSequence::closedForm(MomentSequence::ClosedFormName::PowerOfTwoHilbert);
        badSpec("unknown closed form '" + name + "'");
    }

    if (type == "form") return momentSequenceFromForm(formSpecFromJson(j));

    badSpec("unknown type '" + type + "'");
}

json momentSequenceToJson(const MomentSequence& seq) {
    switch (seq.kind()) {
        case MomentSequence::Kind::Discrete: {
            json atoms = json::array();
            for (const auto& a : seq.discreteMeasure().atoms())
                atoms.push_back(json{{"w", a.weight}, {"point", pointToJson(a.point)}});
            return json{{"type", "discrete"}, {"atoms", std::move(atoms)}};
        }
        case MomentSequence::Kind::HalfLine: {
            const HalfLineDensity& d = seq.halfLineDensity();
            switch (d.kind()) {
                case HalfLineDensity::Kind::Lebesgue:
                    return json{{"type", "halfline"}, {"density", "lebesgue"}};
                case HalfLineDensity::Kind::Appendix:
                    return json{{"type", "halfline"}, {"density", "appendix"}};
                case HalfLineDensity::Kind::InverseSquareAboveOne:
                    return json{{"type", "halfline"}, {"density", "inverse-square"}};
                case HalfLineDensity::Kind::WeightedPolynomial: {
                    json interval = json::array();
                    interval.push_back(d.lower());
                    if (std::isfinite(d.upper()))
                        interval.push_back(d.upper());
                    else
                        interval.push_back("inf");
                    return json{{"type", "halfline"},
                                {"density",
                                 json{{"poly", json{{"interval", std::move(interval)},
                                                    {"coeffs", d.coefficients()}}}}}};
                }
            }
            badSpec("unreachable halfline kind");
        }
        case MomentSequence::Kind::Multiplicative: {
            json primes = json::object();
            for (const auto& [pos, s] : seq.multiplicativeFactors())
                primes[std::to_string(pos)] = oneVarToJson(s);
            return json{{"type", "multiplicative"}, {"primes", std::move(primes)}};
        }
        case MomentSequence::Kind::ClosedForm:
            return json{{"type", "closed"},
                        {"name", seq.closedFormName() ==
                                         MomentSequence::ClosedFormName::MultiplicativeHilbert
                                     ? "multiplicative-hilbert"
                                     : "power-of-two-hilbert"}};
        case MomentSequence::Kind::Custom:
            return json{{"type", "custom"}, {"label", seq.customLabel()}};
    }
    badSpec("unreachable sequence kind");
}

json diagnosticReportToJson(const DiagnosticReport& report) {
    return json{{"test", report.testName},
                {"sup", report.supremumValue},
                {"witness", report.witness},
                {"verdict", verdictName(report.verdict)}};
}

json normalizeSpecJson(const json& j) {
    if (j.is_object() && j.contains("type") && j["type"] == "form")
        return formSpecToJson(formSpecFromJson(j));
    return momentSequenceToJson(momentSequenceFromJson(j));
}

} // namespace helson
