#include "modcm/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "modcm/bounds.hpp"
#include "modcm/common.hpp"
#include "modcm/density.hpp"
#include "modcm/ffcurves.hpp"
#include "modcm/gimage.hpp"
#include "modcm/numfield.hpp"
#include "modcm/util.hpp"

namespace modcm::cli {

using json = nlohmann::ordered_json;
using numfield::FieldDescriptor;
using numfield::OKElement;
using numfield::OKPair;

namespace {

json bound_json(const bounds::BoundResult& b) {
    return json{{"e", b.e},
                {"f", b.f},
                {"r", b.r},
                {"exact", b.exact_str()},
                {"decimal", b.decimal()},
                {"note", "bound depends only on f and r; e is carried but unused"}};
}

json scan_report_json(const gimage::ScanReport& rep) {
    return json{{"id", rep.curve_id},
                {"flags",
                 {{"square", rep.flags.square},
                  {"nonsquare", rep.flags.nonsquare},
                  {"exceptional", rep.flags.exceptional}}},
                {"certified", rep.certified},
                {"samples_used", rep.samples_used},
                {"L", rep.L}};
}

json density_report_json(const density::DensityReport& rep) {
    json j;
    j["field"] = rep.field.text();
    j["X"] = rep.X.get_str();
    j["mode"] = rep.mode;
    j["quantity"] = "residue_criterion_density";
    j["countA"] = rep.countA;
    j["countB"] = rep.countB;
    j["pair_total"] = rep.pair_total.get_str();
    if (rep.delta_zero_pairs) {
        j["delta_zero_pairs"] = *rep.delta_zero_pairs;
        j["EX_size"] = *rep.ex_size;
    } else {
        j["delta_zero_pairs"] = nullptr;
        j["EX_size"] = nullptr;
    }
    j["empirical_density"] = rep.empirical_density;
    if (rep.mode == "exact") {
        j["empirical_exact"] =
            rep.empirical_exact.get_num().get_str() + "/" + rep.empirical_exact.get_den().get_str();
    }
    j["theoretical"] = bound_json(rep.theoretical);
    json per_prime = json::array();
    for (size_t i = 0; i < rep.per_prime.size(); ++i) {
        json e;
        e["prime_index"] = i;
        e["density"] = rep.per_prime[i];
        if (i < rep.per_prime_exact.size())
            e["exact"] = rep.per_prime_exact[i].get_num().get_str() + "/" + rep.per_prime_exact[i].get_den().get_str();
        per_prime.push_back(e);
    }
    j["per_prime"] = per_prime;
    if (rep.mc) {
        j["mc"] = {{"samples", rep.mc->samples},
                   {"passes", rep.mc->passes},
                   {"seed", rep.mc->seed},
                   {"ci95", {rep.mc->ci.lo, rep.mc->ci.hi}}};
    }
    return j;
}

OKElement parse_coords(const FieldDescriptor& d, const std::string& text) {
    std::vector<int64_t> coords;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int64_t v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            throw bad_input("malformed coordinate list: " + text);
        }
        if (pos != tok.size()) throw bad_input("malformed coordinate list: " + text);
        coords.push_back(v);
    }
    if (coords.empty() || coords.size() > static_cast<size_t>(d.degree()))
        throw bad_input("coordinate list has wrong length: " + text);
    coords.resize(static_cast<size_t>(d.degree()), 0);
    return numfield::ok_make(d, std::move(coords));
}

struct Sink {
    std::ostream* os;
    std::ofstream file;

    explicit Sink(std::ostream& fallback, const std::string& path) {
        if (path.empty()) {
            os = &fallback;
        } else {
            file.open(path);
            if (!file) throw bad_input("cannot open output file: " + path);
            os = &file;
        }
    }
};

void emit(std::ostream& os, const json& j) { os << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

int cmd_bound(const std::string& field, const std::string& efr, int64_t degree, const std::string& out_path,
              const std::string& format, std::ostream& out) {
    int given = (!field.empty()) + (!efr.empty()) + (degree != 0);
    if (given != 1) throw bad_input("bound: give exactly one of --field, --efr, --degree");

    bounds::BoundResult b{0, 0, 0, mpq_class(0)};
    json config{{"command", "bound"}, {"seed", nullptr}};
    if (!field.empty()) {
        FieldDescriptor d = numfield::parse_descriptor(field);
        b = bounds::lower_bound(numfield::splitting_of_5(d));
        config["field"] = d.text();
    } else if (!efr.empty()) {
        unsigned e = 0, f = 0, r = 0;
        char sep1 = 0, sep2 = 0;
        std::stringstream ss(efr);
        if (!(ss >> e >> sep1 >> f >> sep2 >> r) || sep1 != ',' || sep2 != ',' || !ss.eof())
            throw bad_input("bound: --efr expects e,f,r");
        b = bounds::lower_bound(numfield::SplittingData{e, f, r});
        config["efr"] = efr;
    } else {
        if (degree < 0) throw bad_input("bound: degree must be positive");
        b = bounds::generic_bound(static_cast<uint32_t>(degree));
        config["degree"] = degree;
    }

    Sink sink(out, out_path);
    if (format == "table") {
        *sink.os << "(e,f,r) = (" << b.e << "," << b.f << "," << b.r << ")  bound = " << b.exact_str() << " = "
                 << b.decimal() << "\n";
        return 0;
    }
    json j;
    j["config"] = config;
    j.update(bound_json(b));
    emit(*sink.os, j);
    return 0;
}

int cmd_census(int64_t f, const std::string& out_path, const std::string& format, std::ostream& out) {
    if (f < 1 || f > static_cast<int64_t>(ffcurves::kCensusMaxDegree))
        throw bad_input("census: --f must lie in [1,5] (cap)");
    ffcurves::CensusResult c = ffcurves::census(static_cast<uint32_t>(f));
    Sink sink(out, out_path);
    if (format == "table") {
        *sink.os << "q=" << c.q << " total=" << c.total << " singular=" << c.singular
                 << " supersingular=" << c.supersingular << " ordinary=" << c.ordinary << "\n";
        return 0;
    }
    json j;
    j["config"] = {{"command", "census"}, {"f", f}, {"seed", nullptr}};
    j["q"] = c.q;
    j["total"] = c.total;
    j["singular"] = c.singular;
    j["supersingular"] = c.supersingular;
    j["ordinary"] = c.ordinary;
    emit(*sink.os, j);
    return 0;
}

int cmd_density(const std::string& field, const std::string& x_text, const std::string& mode, uint64_t samples,
                uint64_t seed, const std::string& out_path, std::ostream& out) {
    FieldDescriptor d = numfield::parse_descriptor(field);
    mpq_class X = util::parse_decimal(x_text);
    density::DensityReport rep;
    if (mode == "exact") {
        rep = density::ordinary_density_exact(d, X);
    } else if (mode == "mc") {
        rep = density::montecarlo_density(d, X, samples, seed);
    } else {
        throw bad_input("density: --mode must be exact or mc");
    }
    Sink sink(out, out_path);
    json j;
    j["config"] = {{"command", "density"}, {"field", d.text()}, {"X", x_text},       {"mode", mode},
                   {"samples", samples},   {"seed", seed}};
    j.update(density_report_json(rep));
    emit(*sink.os, j);
    return 0;
}

int cmd_image_scan(const std::string& input, int64_t L, const std::string& out_path, std::ostream& out) {
    std::istream* in = nullptr;
    std::ifstream file;
    std::istringstream empty;
    if (input == "-") {
        in = &std::cin;
    } else {
        file.open(input);
        if (!file) throw bad_input("cannot open batch file: " + input);
        in = &file;
    }

    Sink sink(out, out_path);
    std::string line;
    while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ';')) parts.push_back(tok);
        if (parts.size() != 5) throw bad_input("batch row must be field;Ax;Ay;Bx;By: " + line);
        FieldDescriptor d = numfield::parse_descriptor(parts[0]);
        OKElement A = parse_coords(d, parts[1] + "," + parts[2]);
        OKElement B = parse_coords(d, parts[3] + "," + parts[4]);
        gimage::ScanReport rep = gimage::certify_sl2(d, OKPair{A, B}, L);
        *sink.os << scan_report_json(rep).dump() << "\n";
    }
    return 0;
}

int cmd_dg_find(const std::string& field, const std::string& a_text, const std::string& b_text, int64_t Lmax,
                const std::string& out_path, std::ostream& out) {
    FieldDescriptor d = numfield::parse_descriptor(field);
    OKPair pair{parse_coords(d, a_text), parse_coords(d, b_text)};
    auto result = gimage::dg_find(d, pair, Lmax);

    Sink sink(out, out_path);
    json j;
    j["config"] = {{"command", "dg-find"}, {"field", d.text()}, {"A", a_text}, {"B", b_text},
                   {"Lmax", Lmax},         {"seed", nullptr}};
    j["found"] = result.has_value();
    if (result) {
        j["l"] = *result;
        json samples = json::array();
        auto images = numfield::split_images_mod(d, *result);
        for (uint32_t idx = 0; idx < images.size(); ++idx) {
            gimage::FrobSample s = gimage::frob_trace(d, pair, *result, idx);
            samples.push_back(json{{"l", s.l}, {"prime_index", s.prime_index}, {"a", s.a}, {"N", s.N}});
        }
        j["samples"] = samples;
    } else {
        j["l"] = nullptr;
    }
    emit(*sink.os, j);
    return 0;
}

int cmd_threshold(double eps, int64_t scan_max, const std::string& out_path, std::ostream& out) {
    bounds::ThresholdReport rep = bounds::threshold(eps, scan_max);
    Sink sink(out, out_path);
    json j;
    j["config"] = {{"command", "threshold"}, {"eps", eps}, {"scan_max", scan_max}, {"seed", nullptr}};
    j["N"] = rep.N;
    j["monotone_from"] = rep.monotone_from;
    j["envelope_at_N"] = rep.envelope_at_N;
    emit(*sink.os, j);
    return 0;
}

int cmd_report(int64_t nmax, const std::string& out_path, const std::string& format, std::ostream& out) {
    struct QuadRow {
        int64_t m;
        const char* label;
    };
    const QuadRow quad_rows[] = {{1, "split"}, {2, "inert"}, {5, "ramified"}};

    json quadratic = json::array();
    for (const auto& row : quad_rows) {
        FieldDescriptor d = numfield::make_quadratic(row.m);
        bounds::BoundResult b = bounds::lower_bound(numfield::splitting_of_5(d));
        quadratic.push_back(json{{"field", d.text()},
                                 {"case", row.label},
                                 {"e", b.e},
                                 {"f", b.f},
                                 {"r", b.r},
                                 {"exact", b.exact_str()},
                                 {"decimal", b.decimal()}});
    }

    json generic = json::array();
    for (uint32_t deg : {2u, 4u, 6u, 8u}) {
        bounds::BoundResult b = bounds::generic_bound(deg);
        generic.push_back(json{{"degree", deg}, {"exact", b.exact_str()}, {"decimal", b.decimal()}});
    }

    json cyclo = json::array();
    for (int64_t n = 3; n <= nmax; ++n) {
        if (n % 4 == 2 || n % 5 == 0) continue;
        FieldDescriptor d = numfield::make_cyclotomic(n);
        bounds::BoundResult b = bounds::lower_bound(numfield::splitting_of_5(d));
        cyclo.push_back(json{{"n", n},
                             {"degree", d.degree()},
                             {"e", b.e},
                             {"f", b.f},
                             {"r", b.r},
                             {"exact", b.exact_str()},
                             {"decimal", b.decimal()}});
    }

    Sink sink(out, out_path);
    if (format == "table") {
        std::ostream& os = *sink.os;
        os << "Lower bounds on the modular proportion\n";
        os << "\nImaginary quadratic fields:\n";
        for (const auto& r : quadratic)
            os << "  " << std::left << std::setw(12) << r["field"].get<std::string>() << std::setw(10)
               << r["case"].get<std::string>() << "(" << r["e"] << "," << r["f"] << "," << r["r"] << ")  "
               << std::setw(12) << r["exact"].get<std::string>() << " = " << r["decimal"].get<std::string>() << "\n";
        os << "\nGeneric bound by field degree:\n";
        for (const auto& r : generic)
            os << "  degree " << r["degree"] << ": " << r["exact"].get<std::string>() << " = "
               << r["decimal"].get<std::string>() << "\n";
        os << "\nCyclotomic fields Q(zeta_n), n <= " << nmax << ":\n";
        for (const auto& r : cyclo)
            os << "  n=" << std::left << std::setw(4) << r["n"].get<int64_t>() << "(" << r["e"] << "," << r["f"]
               << "," << r["r"] << ")  " << r["exact"].get<std::string>() << " = " << r["decimal"].get<std::string>()
               << "\n";
        return 0;
    }
    json j;
    j["config"] = {{"command", "report"}, {"nmax", nmax}, {"seed", nullptr}};
    j["quadratic"] = quadratic;
    j["generic"] = generic;
    j["cyclotomic"] = cyclo;
    emit(*sink.os, j);
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"modcm: exact lower bounds on the proportion of modular elliptic curves over CM fields, "
                 "with finite-field censuses and Galois-image scans backing every ingredient"};
    app.require_subcommand(1);

    std::string field, efr, out_path, format = "json";
    int64_t degree = 0;

    auto* bound = app.add_subcommand("bound", "evaluate the lower bound (1 - 1/5^f)^(2r)");
    bound->add_option("--field", field, "field descriptor, Q(sqrt-<m>) or Q(zeta<n>)");
    bound->add_option("--efr", efr, "explicit splitting shape e,f,r");
    bound->add_option("--degree", degree, "generic bound (4/5)^(2*degree) for an even degree");
    bound->add_option("--out", out_path, "write output to a file");
    bound->add_option("--format", format, "json or table");

    int64_t census_f = 1;
    auto* census = app.add_subcommand("census", "classify all coefficient pairs over F_{5^f}");
    census->add_option("--f", census_f, "extension degree, 1..5")->required();
    census->add_option("--out", out_path, "write output to a file");
    census->add_option("--format", format, "json or table");

    std::string x_text = "2", mode = "exact";
    uint64_t samples = 100000, seed = 0;
    auto* dens = app.add_subcommand("density", "residue-criterion density over the coefficient boxes");
    dens->add_option("--field", field, "imaginary quadratic descriptor")->required();
    dens->add_option("--X", x_text, "box parameter (boxes have radii X^4 and X^6)")->required();
    dens->add_option("--mode", mode, "exact or mc");
    dens->add_option("--samples", samples, "Monte Carlo sample count (>= 1000)");
    dens->add_option("--seed", seed, "Monte Carlo seed");
    dens->add_option("--out", out_path, "write output to a file");

    std::string input = "-";
    int64_t L = 1000;
    auto* scan = app.add_subcommand("image-scan", "certify mod-5 image contains SL2(F5), batch CSV");
    scan->add_option("--input", input, "CSV file of rows field;Ax;Ay;Bx;By, or - for stdin");
    scan->add_option("--L", L, "prime scan bound");
    scan->add_option("--out", out_path, "write output to a file");

    std::string a_text, b_text;
    int64_t lmax = 1000;
    auto* dg = app.add_subcommand("dg-find", "smallest decomposed generic prime for a curve");
    dg->add_option("--field", field, "field descriptor")->required();
    dg->add_option("--A", a_text, "A coordinates in the integral basis, comma separated")->required();
    dg->add_option("--B", b_text, "B coordinates in the integral basis, comma separated")->required();
    dg->add_option("--Lmax", lmax, "prime scan bound");
    dg->add_option("--out", out_path, "write output to a file");

    double eps = 0.5;
    int64_t scan_max = 100000;
    auto* thr = app.add_subcommand("threshold", "minimal N with envelope(n) >= 1-eps beyond N");
    thr->add_option("--eps", eps, "target gap in (0,1)")->required();
    thr->add_option("--scan-max", scan_max, "scan bound");
    thr->add_option("--out", out_path, "write output to a file");

    int64_t nmax = 50;
    auto* rep = app.add_subcommand("report", "bound table: quadratic cases, generic degrees, cyclotomic n <= nmax");
    rep->add_option("--nmax", nmax, "cyclotomic table bound");
    rep->add_option("--out", out_path, "write output to a file");
    rep->add_option("--format", format, "json or table");

    try {
        std::vector<const char*> argv;
        argv.push_back("modcm");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(bound)) return cmd_bound(field, efr, degree, out_path, format, out);
        if (app.got_subcommand(census)) return cmd_census(census_f, out_path, format, out);
        if (app.got_subcommand(dens)) return cmd_density(field, x_text, mode, samples, seed, out_path, out);
        if (app.got_subcommand(scan)) return cmd_image_scan(input, L, out_path, out);
        if (app.got_subcommand(dg)) return cmd_dg_find(field, a_text, b_text, lmax, out_path, out);
        if (app.got_subcommand(thr)) return cmd_threshold(eps, scan_max, out_path, out);
        if (app.got_subcommand(rep)) return cmd_report(nmax, out_path, format, out);
    } catch (const bad_input& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const cap_exceeded& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace modcm::cli
