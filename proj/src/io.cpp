#include "ifslab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ifslab/error.hpp"
#include "ifslab/tail.hpp"

namespace ifslab {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) bad("bad number \"" + s + "\"");
        return v;
    } catch (const std::logic_error&) {
        bad("bad number \"" + s + "\"");
    }
}

Json space_to_json(const SeedSpace& s) {
    if (const auto* d = std::get_if<Disk>(&s.shape()))
        return {{"kind", "disk"}, {"center", complex_to_json(d->center)}, {"radius", d->radius}};
    const auto& r = std::get<Rectangle>(s.shape());
    return {{"kind", "rectangle"}, {"lower_left", complex_to_json(r.lower_left)}, {"upper_right", complex_to_json(r.upper_right)}};
}

SeedSpace space_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "disk")
        return SeedSpace(Disk{j.contains("center") ? complex_from_json(j.at("center")) : Complex{}, number(field(j, "radius"), "radius")});
    if (kind == "rectangle")
        return SeedSpace(Rectangle{complex_from_json(field(j, "lower_left")), complex_from_json(field(j, "upper_right"))});
    bad("unknown space kind \"" + kind + "\"");
}

Json generator_to_json(const Generator& g) {
    if (const auto* s = std::get_if<Similarity>(&g))
        return {{"kind", "similarity"}, {"a", complex_to_json(s->a)}, {"b", complex_to_json(s->b)}};
    Json coeffs = Json::array();
    for (const Complex c : std::get<Polynomial>(g).coeffs) coeffs.push_back(complex_to_json(c));
    return {{"kind", "polynomial"}, {"coeffs", coeffs}};
}

Generator generator_from_json(const Json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "similarity") return Similarity{complex_from_json(field(j, "a")), complex_from_json(field(j, "b"))};
    if (kind == "polynomial") {
        const Json& c = field(j, "coeffs");
        if (!c.is_array() || c.empty()) bad("polynomial coeffs must be a nonempty array");
        Polynomial p;
        for (const auto& x : c) p.coeffs.push_back(complex_from_json(x));
        return p;
    }
    bad("unknown generator kind \"" + kind + "\"");
}

Json tail_to_json(const TailModel& t) {
    if (const auto* p = std::get_if<PowerLogTail>(&t))
        return {{"kind", "power_log"}, {"start", p->start}, {"scale", p->scale}, {"power", p->power}, {"log_power", p->log_power}};
    if (const auto* g = std::get_if<GeometricTail>(&t))
        return {{"kind", "geometric"}, {"start", g->start}, {"scale", g->scale}, {"q", g->q}};
    return nullptr;
}

TailModel tail_from_json(const Json& j) {
    if (j.is_null()) return NoTail{};
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "none") return NoTail{};
    if (kind == "power_log")
        return PowerLogTail{count(field(j, "start"), "start"), number(field(j, "scale"), "scale"), number(field(j, "power"), "power"),
                            j.contains("log_power") ? number(j.at("log_power"), "log_power") : 0.0};
    if (kind == "geometric")
        return GeometricTail{count(field(j, "start"), "start"), number(field(j, "scale"), "scale"), number(field(j, "q"), "q")};
    bad("unknown tail kind \"" + kind + "\"");
}

Json records_counts(const std::map<RegularityClass, std::size_t>& counts) {
    Json j = Json::object();
    for (const auto& [c, n] : counts) j[std::string(to_string(c))] = n;
    return j;
}

} // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad("complex numbers are [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json bracket_to_json(const Bracket& b) {
    if (b.is_infinite()) return {{"infinite", true}};
    return {{"lo", b.lo()}, {"hi", b.hi()}};
}

Bracket bracket_from_json(const Json& j) {
    if (j.is_object() && j.value("infinite", false)) return Bracket::infinite();
    return Bracket::of(number(field(j, "lo"), "lo"), number(field(j, "hi"), "hi"));
}

Json system_to_json(const SystemSpec& spec) {
    Json gens = Json::array();
    for (const auto& g : spec.generators) gens.push_back(generator_to_json(g));
    return {{"schema", kSchema}, {"space", space_to_json(spec.space)}, {"generators", gens}, {"tail", tail_to_json(spec.tail)},
            {"osc", spec.osc_declared}};
}

SystemSpec system_from_json(const Json& j) {
    try {
        SystemSpec spec;
        spec.space = space_from_json(field(j, "space"));
        const Json& gens = field(j, "generators");
        if (!gens.is_array()) bad("generators must be an array");
        for (const auto& g : gens) spec.generators.push_back(generator_from_json(g));
        if (j.contains("tail")) spec.tail = tail_from_json(j.at("tail"));
        spec.osc_declared = j.value("osc", true);
        return spec;
    } catch (const Json::exception& e) {
        bad(std::string("system spec: ") + e.what());
    }
}

Json family_to_json(const FamilySpec& family) {
    if (const auto* v = std::get_if<ExampleV>(&family))
        return {{"schema", kSchema}, {"kind", "example_v"}, {"a", v->a}, {"a3", v->a3}, {"z1", complex_to_json(v->z1)},
                {"z2", complex_to_json(v->z2)}, {"z3", complex_to_json(v->z3)}, {"r", v->r}};
    if (const auto* s = std::get_if<ScalingFamily>(&family)) {
        Json scaled = s->scales_all() ? Json("all") : Json(s->scaled);
        return {{"schema", kSchema},
                {"kind", "scaling"},
                {"base", system_to_json(s->base)},
                {"center", complex_to_json(s->center)},
                {"scaled", scaled},
                {"domain", {{"lo", complex_to_json(s->domain.lo)}, {"hi", complex_to_json(s->domain.hi)}}}};
    }
    Json entries = Json::array();
    for (const auto& [g, spec] : std::get<GridFamily>(family).entries)
        entries.push_back({{"gamma", complex_to_json(g)}, {"system", system_to_json(spec)}});
    return {{"schema", kSchema}, {"kind", "grid"}, {"entries", entries}};
}

FamilySpec family_from_json(const Json& j) {
    try {
        const std::string kind = field(j, "kind").get<std::string>();
        if (kind == "example_v") {
            ExampleV v;
            v.a = j.value("a", v.a);
            v.a3 = j.value("a3", v.a3);
            if (j.contains("z1")) v.z1 = complex_from_json(j.at("z1"));
            if (j.contains("z2")) v.z2 = complex_from_json(j.at("z2"));
            if (j.contains("z3")) v.z3 = complex_from_json(j.at("z3"));
            v.r = j.value("r", v.r);
            return v;
        }
        if (kind == "scaling") {
            ScalingFamily s;
            s.base = system_from_json(field(j, "base"));
            s.center = complex_from_json(field(j, "center"));
            const Json scaled = j.value("scaled", Json("all"));
            if (scaled.is_array()) {
                for (const auto& l : scaled) s.scaled.push_back(count(l, "scaled letter"));
                if (s.scaled.empty()) bad("scaled letter list is empty; use \"all\"");
            } else if (scaled != "all") {
                bad("scaled must be \"all\" or a list of letters");
            }
            if (j.contains("domain"))
                s.domain = {complex_from_json(field(j.at("domain"), "lo")), complex_from_json(field(j.at("domain"), "hi"))};
            return s;
        }
        if (kind == "grid") {
            GridFamily g;
            for (const auto& e : field(j, "entries")) g.entries.emplace_back(complex_from_json(field(e, "gamma")), system_from_json(field(e, "system")));
            return g;
        }
        bad("unknown family kind \"" + kind + "\"");
    } catch (const Json::exception& e) {
        bad(std::string("family spec: ") + e.what());
    }
}

std::vector<Complex> grid_from_json(const Json& j) {
    const Json& pts = j.is_array() ? j : field(j, "points");
    if (!pts.is_array()) bad("grid points must be an array");
    std::vector<Complex> out;
    for (const auto& p : pts) out.push_back(complex_from_json(p));
    return out;
}

Json grid_to_json(const std::vector<Complex>& grid) {
    Json pts = Json::array();
    for (const Complex g : grid) pts.push_back(complex_to_json(g));
    return {{"schema", kSchema}, {"points", pts}};
}

ParameterMesh mesh_from_json(const Json& j) {
    ParameterMesh m;
    for (const auto& x : field(j, "re")) m.re.push_back(number(x, "re"));
    for (const auto& x : field(j, "im")) m.im.push_back(number(x, "im"));
    return m;
}

Json mesh_to_json(const ParameterMesh& mesh) { return {{"schema", kSchema}, {"re", mesh.re}, {"im", mesh.im}}; }

Json regularity_to_json(const RegularityReport& r) {
    return {{"schema", kSchema}, {"theta", bracket_to_json(r.theta)}, {"pressure_at_theta", bracket_to_json(r.pressure_at_theta)},
            {"class", std::string(to_string(r.regularity))}, {"evidence", r.evidence}};
}

Json dimension_to_json(const DimensionResult& r) {
    return {{"schema", kSchema}, {"h", bracket_to_json(r.h)}, {"method", std::string(to_string(r.method))},
            {"iterations", r.iterations}, {"note", r.note}};
}

Json locus_to_json(const std::vector<Polyline>& locus) {
    Json lines = Json::array();
    for (const auto& line : locus) {
        Json pts = Json::array();
        for (const auto& v : line) pts.push_back({{"gamma", complex_to_json(v.gamma)}, {"pressure", bracket_to_json(v.pressure)}});
        lines.push_back(pts);
    }
    return lines;
}

Json verdict_to_json(const FamilyVerdict& v) {
    Json j = {{"schema", kSchema},
              {"type", std::string(to_string(v.type))},
              {"counts", records_counts(v.counts)},
              {"h_constant", v.h_constant},
              {"h_value", v.h_value ? bracket_to_json(*v.h_value) : Json(nullptr)},
              {"cr_locus", locus_to_json(v.cr_locus)},
              {"reason", v.reason}};
    return j;
}

Json lambda_to_json(const LambdaReport& r) {
    Json pw = Json::array(), dev = Json::array();
    for (const auto& b : r.pointwise_distances) pw.push_back(bracket_to_json(b));
    for (const double d : r.log_norm_deviation) dev.push_back(d);
    return {{"schema", kSchema},
            {"verdict", std::string(to_string(r.verdict))},
            {"witness_c", r.witness_c ? Json(*r.witness_c) : Json(nullptr)},
            {"letters_checked", r.letters_checked},
            {"pointwise_distances", pw},
            {"log_norm_deviation", dev},
            {"reason", r.reason}};
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    os << "gamma_re,gamma_im,theta_lo,theta_hi,p_theta_lo,p_theta_hi,class,h_lo,h_hi\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        os << fmt(r.gamma.real()) << ',' << fmt(r.gamma.imag()) << ',';
        if (r.error) {
            os << "nan,nan,nan,nan,ERROR,nan,nan\n";
            continue;
        }
        const bool pinf = r.pressure_at_theta.is_infinite();
        os << fmt(r.theta.lo()) << ',' << fmt(r.theta.hi()) << ',' << fmt(pinf ? inf : r.pressure_at_theta.lo()) << ','
           << fmt(pinf ? inf : r.pressure_at_theta.hi()) << ',' << short_name(r.regularity) << ',' << fmt(r.h.lo()) << ','
           << fmt(r.h.hi()) << '\n';
    }
    return os.str();
}

std::vector<SweepRecord> sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) bad("empty sweep file");
    if (line != "gamma_re,gamma_im,theta_lo,theta_hi,p_theta_lo,p_theta_hi,class,h_lo,h_hi") bad("unexpected sweep CSV header");
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        if (cells.size() != 9) bad("sweep CSV rows have 9 columns");
        SweepRecord r;
        r.gamma = {parse_double(cells[0]), parse_double(cells[1])};
        if (cells[6] == "ERROR") {
            r.error = "error recorded in sweep file";
            out.push_back(r);
            continue;
        }
        r.theta = Bracket::of(parse_double(cells[2]), parse_double(cells[3]));
        const double plo = parse_double(cells[4]), phi = parse_double(cells[5]);
        r.pressure_at_theta = std::isinf(plo) && plo > 0 ? Bracket::infinite() : Bracket::of(plo, phi);
        const auto cls = parse_regularity_class(cells[6]);
        if (!cls) bad("unknown class \"" + cells[6] + "\"");
        r.regularity = *cls;
        r.h = Bracket::of(parse_double(cells[7]), parse_double(cells[8]));
        out.push_back(r);
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        bad(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<SystemSpec> read_sequence(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::ranges::sort(files);
    std::vector<SystemSpec> out;
    for (const auto& f : files) out.push_back(system_from_json(read_json(f)));
    return out;
}

std::vector<std::string> write_corpus(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::string> written;
    auto put = [&](const std::string& rel, const Json& j) {
        const auto p = dir / rel;
        if (p.has_parent_path()) {
            std::filesystem::create_directories(p.parent_path(), ec);
            if (ec) throw Error(ErrorCode::IoError, "cannot create " + p.parent_path().string() + ": " + ec.message());
        }
        write_text(p, dump(j));
        written.push_back(rel);
    };

    const SystemSpec cantor{SeedSpace(Rectangle{{0.0, -0.1}, {1.0, 0.1}}), {Similarity{1.0 / 3, 0.0}, Similarity{1.0 / 3, 2.0 / 3}}};
    put("cantor.json", system_to_json(cantor));
    put("two_ratio.json", system_to_json({SeedSpace(Disk{}), {Similarity{0.5, 0.5}, Similarity{0.25, -0.5}}}));
    put("two_quadratics.json", system_to_json({SeedSpace(Disk{}), {Polynomial{{0.5, 0.3, 0.05}}, Polynomial{{-0.5, 0.3, -0.05}}}}));

    const ExampleV ev;
    put("exampleV_gamma0.json", system_to_json(instantiate_spec(ev, 0.0)));
    put("exampleV_gamma0.05.json", system_to_json(instantiate_spec(ev, 0.05)));
    put("exampleV_gamma0.1.json", system_to_json(instantiate_spec(ev, 0.1)));
    put("exampleV_family.json", family_to_json(ev));
    std::vector<Complex> disk{0.0};
    for (int k = 0; k < 8; ++k) disk.push_back(std::polar(0.08, k * M_PI / 4));
    put("exampleV_disk_grid.json", grid_to_json(disk));
    put("exampleV_mesh.json", mesh_to_json({{-0.1, -0.05, 0.0, 0.05, 0.1}, {-0.1, -0.05, 0.0, 0.05, 0.1}}));

    // critically regular base scaled on its two explicit letters
    ScalingFamily phase;
    phase.base = instantiate_spec(ev, 0.0);
    phase.center = 0.0;
    phase.scaled = {1, 2};
    phase.domain = {{0.0, 0.0}, {1.2, 0.0}};
    put("scaling_family.json", family_to_json(phase));
    std::vector<Complex> path;
    for (int k = 1; k <= 23; ++k) path.emplace_back(k * 0.05, 0.0);
    put("scaling_grid.json", grid_to_json(path));
    put("scaling_mesh.json", mesh_to_json({{0.8, 0.85, 0.9, 0.95, 1.02, 1.07}, {0.0}}));

    // strongly regular base for lambda sequences: explicit ratios 0.01, tail sum 1
    const double kappa = 1.0 / tail_sum(PowerLogTail{3, 1.0, 1.0, 2.0}, 1.0, 3).mid();
    const auto fsr = [&](PowerLogTail tail) {
        return SystemSpec{SeedSpace(Disk{}), {Similarity{0.01, 0.5}, Similarity{0.01, -0.5}}, tail};
    };
    const SystemSpec limit = fsr(PowerLogTail{3, kappa, 1.0, 2.0});
    ScalingFamily all;
    all.base = limit;
    all.center = 0.0;
    put("scaling_sequence_limit.json", system_to_json(limit));
    for (int n = 1; n <= 12; ++n) {
        char name[64];
        std::snprintf(name, sizeof name, "scaling_sequence/s%02d.json", n);
        put(name, system_to_json(instantiate_spec(all, 1.0 - std::ldexp(1.0, -n))));
    }
    // letter ratios c_i^(1 + e) for e = 2^-k
    put("tail_drift_limit.json", system_to_json(limit));
    for (int k = 10; k <= 20; k += 2) {
        const double e = std::ldexp(1.0, -k);
        char name[64];
        std::snprintf(name, sizeof name, "tail_drift/e%02d.json", k);
        put(name, system_to_json(fsr(PowerLogTail{3, std::pow(kappa, 1 + e), 1 + e, 2 * (1 + e)})));
    }

    // tail power interpolated from 2 to 3
    GridFamily interp;
    std::vector<Complex> ugrid;
    for (int k = 0; k <= 4; ++k) {
        const double u = 0.25 * k;
        interp.entries.emplace_back(u, SystemSpec{SeedSpace(Disk{}), {Similarity{0.2, 0.5}, Similarity{0.2, -0.5}},
                                                  PowerLogTail{3, 0.05, 2.0 + u, 0.0}});
        ugrid.emplace_back(u);
    }
    put("power_interpolation_family.json", family_to_json(interp));
    put("power_interpolation_grid.json", grid_to_json(ugrid));
    return written;
}

} // namespace ifslab
