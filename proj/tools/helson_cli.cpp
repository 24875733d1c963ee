// Command-line front end: parse JSON specs, dispatch to the library, emit
// CSV/JSON. Exit codes: 0 success, 1 user/config error, 2 numerical failure
// (divergence, non-convergence, or flags escalated by --strict).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "helson/diagnostics.hpp"
#include "helson/experiments.hpp"
#include "helson/finiterank.hpp"
#include "helson/jsonio.hpp"
#include "helson/matrix.hpp"
#include "helson/spectral.hpp"

namespace {

using nlohmann::json;

std::string formatDouble(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Accepts "closed:<name>" shorthand, inline JSON, or a file path.
json loadSpecJson(const std::string& spec) {
    if (spec.rfind("closed:", 0) == 0)
        return json{{"type", "closed"}, {"name", spec.substr(7)}};
    if (!spec.empty() && spec.front() == '{') return json::parse(spec);
    std::ifstream in(spec);
    if (!in) throw helson::DomainError("cannot open spec file '" + spec + "'");
    json j;
    in >> j;
    return j;
}

void writeOutput(const std::string& outPath, const std::string& content) {
    if (outPath.empty()) {
        std::cout << content;
        return;
    }
    const std::string tmp = outPath + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw helson::DomainError("cannot open output file '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, outPath);
}

helson::SGrid parseGrid(const std::string& text) {
    helson::SGrid grid;
    if (text.empty()) return grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw helson::DomainError("grid options look like key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "max")
            grid.maxDistance = std::stod(value);
        else if (key == "decades")
            grid.decades = std::stoi(value);
        else if (key == "per")
            grid.pointsPerDecade = std::stoi(value);
        else
            throw helson::DomainError("unknown grid option '" + key + "'");
    }
    return grid;
}

std::vector<std::uint64_t> parseSizes(const std::string& text) {
    std::vector<std::uint64_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(std::stoull(item));
    return sizes;
}

helson::MultiIndex parseKappa(const std::string& text) {
    std::vector<helson::MultiIndex::Entry> entries;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw helson::DomainError("kappa entries look like position:exponent");
        entries.push_back({static_cast<std::uint32_t>(std::stoul(item.substr(0, colon))),
                           static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)))});
    }
    return helson::MultiIndex::fromEntries(std::move(entries));
}

int runDiagnose(const json& specJson, std::uint64_t N, const helson::SGrid& grid,
                const std::string& outPath, bool strict) {
    using helson::MomentSequence;
    const MomentSequence seq = helson::momentSequenceFromJson(specJson);

    json reports = json::array();
    bool inconclusive = false;
    auto push = [&](const helson::DiagnosticReport& r) {
        reports.push_back(helson::diagnosticReportToJson(r));
        inconclusive = inconclusive || r.verdict == helson::Verdict::Inconclusive;
    };

    if (seq.kind() == MomentSequence::Kind::HalfLine &&
        seq.halfLineDensity().kind() != helson::HalfLineDensity::Kind::Appendix)
        push(helson::halflineWindow(seq.halfLineDensity(), grid));
    if (seq.kind() == MomentSequence::Kind::Discrete && !seq.discreteMeasure().hasBohrAtom())
        push(helson::windowMulti(seq.discreteMeasure(), grid));
    push(helson::helsonDecay(seq, N));

    json out = json{{"spec", helson::normalizeSpecJson(specJson)}, {"reports", reports}};
    writeOutput(outPath, out.dump(2) + "\n");
    return (strict && inconclusive) ? 2 : 0;
}

int dispatch(const std::string& command, const std::string& spec, std::uint64_t n,
             std::uint64_t size, const std::string& sizesText, std::uint64_t offset,
             std::uint64_t degreeCap, const std::string& gridText, const std::string& kappaText,
             const std::string& pointText, const std::string& name, const std::string& outPath,
             bool strict) {
    using namespace helson;

    if (command == "alpha") {
        const MomentSequence seq = momentSequenceFromJson(loadSpecJson(spec));
        writeOutput(outPath, formatDouble(alpha(seq, n)) + "\n");
        return 0;
    }

    if (command == "build") {
        const MomentSequence seq = momentSequenceFromJson(loadSpecJson(spec));
        const TruncatedMatrix m = buildHelson(seq, size, offset);
        writeOutput(outPath, matrixToCsv(m.data(), m.dimension(), m.dimension()));
        return 0;
    }

    if (command == "spectrum") {
        const MomentSequence seq = momentSequenceFromJson(loadSpecJson(spec));
        const TruncatedMatrix m = buildHelson(seq, size, offset);
        if (m.dimension() > 4096)
            throw DomainError("spectrum: full spectra are limited to dimension 4096");
        const SpectralResult res = eigDense(m);
        writeOutput(outPath, res.toCsv());
        return 0;
    }

    if (command == "diagnose")
        return runDiagnose(loadSpecJson(spec), n == 0 ? (1ULL << 16) : n, parseGrid(gridText),
                           outPath, strict);

    if (command == "rank") {
        const HelsonFormSpec form = formSpecFromJson(loadSpecJson(spec));
        const RankResult r = formRank(form, degreeCap == 0 ? 16 : degreeCap);
        writeOutput(outPath, std::to_string(r.rank) + "\n");
        if (!r.stabilized) {
            std::cerr << "warning: rank not stabilized across cap doublings (caps up to "
                      << r.finalCap << ")\n";
            if (strict) return 2;
        }
        return 0;
    }

    if (command == "symbol") {
        const HelsonFormSpec form = formSpecFromJson(loadSpecJson(spec));
        Complex value;
        if (!kappaText.empty())
            value = symbolTaylor(form, parseKappa(kappaText));
        else if (!pointText.empty())
            value = symbolEval(form, pointFromJson(json::parse(pointText)));
        else
            throw DomainError("symbol: provide --kappa or --point");
        writeOutput(outPath, formatDouble(value.real()) + "," + formatDouble(value.imag()) + "\n");
        return 0;
    }

    if (command == "gram") {
        const MomentSequence seq = momentSequenceFromJson(loadSpecJson(spec));
        const GramDualResult g = gramDual(seq.discreteMeasure());
        json out;
        out["spec"] = normalizeSpecJson(loadSpecJson(spec));
        out["dimension"] = g.dimension;
        json rows = json::array();
        for (std::size_t i = 0; i < g.dimension; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < g.dimension; ++j) row.push_back(g.gram[i * g.dimension + j]);
            rows.push_back(std::move(row));
        }
        out["gram"] = std::move(rows);
        out["eigenvalues"] = g.spectrum.eigenvalues;
        writeOutput(outPath, out.dump(2) + "\n");
        return 0;
    }

    if (command == "experiment") {
        json out;
        if (name == "mult-hilbert") {
            const auto sizes = sizesText.empty() ? std::vector<std::uint64_t>{64, 256, 1024}
                                                 : parseSizes(sizesText);
            const MultHilbertStudy study = multHilbertStudy(sizes);
            out["experiment"] = "mult-hilbert";
            out["target_spectrum"] = json{{"interval", json::array({0.0, M_PI})}};
            json per = json::array();
            for (const auto& s : study.perSize)
                per.push_back(json{{"dimension", s.dimension},
                                   {"lambda_min", s.lambdaMin},
                                   {"lambda_max", s.lambdaMax},
                                   {"full_spectrum", s.fullSpectrum}});
            out["per_size"] = std::move(per);
            out["all_below_pi"] = study.allBelowPi;
            out["all_above_minus_tol"] = study.allAboveMinusTol;
            out["monotone_max"] = study.monotoneMax;
            if (study.extrapolated) out["extrapolated_limit"] = *study.extrapolated;
            writeOutput(outPath, out.dump(2) + "\n");
            return (strict && !(study.allBelowPi && study.allAboveMinusTol && study.monotoneMax))
                       ? 2
                       : 0;
        }
        if (name == "counterexample") {
            const std::uint32_t N = n == 0 ? 3 : static_cast<std::uint32_t>(n);
            const helson::SGrid grid = parseGrid(gridText);
            std::vector<double> sValues;
            for (double delta : grid.distances()) {
                const double s = 1.0 - delta;
                if (s > 0.0 && s < 1.0) sValues.push_back(s);
            }
            const XNormReport x = counterexampleXnorm(N, sValues);
            const RatioReport ratio = counterexampleRatio(N);
            const TensorCheckReport tensor = counterexampleTensorCheck(8);
            out["experiment"] = "counterexample";
            out["coordinates"] = N;
            out["xnorm"] = json{{"sup", x.supValue},
                                {"best_s", x.bestS},
                                {"best_depth", x.bestD},
                                {"factor_at_best_s", x.factorAtBestS},
                                {"target", 1.0}};
            json schedule = json::array();
            for (const auto& p : ratio.schedule)
                schedule.push_back(json{{"size", p.size}, {"lambda_max", p.lambdaMax}});
            out["ratio"] = json{{"lambda_hat", ratio.lambdaHat},
                                {"hankel_schedule", schedule},
                                {"estimate", ratio.estimate},
                                {"target", ratio.target},
                                {"hankel_norm_target", M_PI / 2.0}};
            out["tensor_check"] = json{{"cap", tensor.cap},
                                       {"lambda_1d", tensor.lambda1d},
                                       {"lambda_2d", tensor.lambda2d},
                                       {"lambda_1d_squared", tensor.lambda1dSquared}};
            writeOutput(outPath, out.dump(2) + "\n");
            return 0;
        }
        throw DomainError("unknown experiment '" + name + "' (mult-hilbert, counterexample)");
    }

    throw DomainError("unknown command '" + command + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Helson matrix toolkit: moments, truncations, spectra, diagnostics, forms"};
    app.require_subcommand(1);

    std::string spec, gridText, kappaText, pointText, sizesText, name, outPath;
    std::uint64_t n = 0, size = 0, offset = 1, degreeCap = 0;
    bool strict = false;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--spec", spec, "spec JSON (inline, file path, or closed:<name>)");
        cmd->add_option("--n", n, "integer index / coordinate count");
        cmd->add_option("--size", size, "largest integer index N of the truncation");
        cmd->add_option("--sizes", sizesText, "comma-separated truncation sizes");
        cmd->add_option("--offset", offset, "first integer index (1 or 2)")->check(CLI::Range(1, 2));
        cmd->add_option("--degree-cap", degreeCap, "starting monomial cap for rank stabilization");
        cmd->add_option("--grid", gridText, "grid options: max=..,decades=..,per=..");
        cmd->add_option("--kappa", kappaText, "multi-index as position:exponent,...");
        cmd->add_option("--point", pointText, "point JSON for symbol evaluation");
        cmd->add_option("--name", name, "experiment name");
        cmd->add_option("--out", outPath, "output file (written atomically); default stdout");
        cmd->add_flag("--strict", strict, "escalate inconclusive/unstabilized results to exit 2");
    };

    for (const char* cmd :
         {"alpha", "build", "spectrum", "diagnose", "rank", "symbol", "gram", "experiment"})
        addCommon(app.add_subcommand(cmd));

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        return dispatch(command, spec, n, size, sizesText, offset, degreeCap, gridText, kappaText,
                        pointText, name, outPath, strict);
    } catch (const helson::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const helson::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
