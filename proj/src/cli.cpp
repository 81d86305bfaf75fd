#include "ifslab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "ifslab/dimension.hpp"
#include "ifslab/family.hpp"
#include "ifslab/io.hpp"
#include "ifslab/parallel.hpp"
#include "ifslab/pressure.hpp"
#include "ifslab/render.hpp"
#include "ifslab/topology.hpp"
#include "ifslab/transfer_operator.hpp"

namespace ifslab {

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::UndeterminedSign: return 3;
    case ErrorCode::BudgetExceeded:
    case ErrorCode::NoConvergence:
    case ErrorCode::ThetaNotConstant: return 1;
    default: return 2;
    }
}

namespace {

struct Output {
    std::ostream& out;
    std::string path;
    void emit(const std::string& text) const {
        if (path.empty()) out << text;
        else write_text(path, text);
    }
    void emit(const Json& j) const { emit(dump(j)); }
};

ValidatedSystem load_system(const std::string& path) { return validated(system_from_json(read_json(path))); }

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical laboratory for conformal iterated function systems", "ifslab"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores; IFSLAB_THREADS is the default)");

    std::string system_path, out_path, family_path, grid_path, mesh_path, sweep_path, limit_path, sequence_dir;
    double t = 1.0, tol = 0.0;
    std::size_t letters = 10'000, grid = kDefaultOperatorGrid, width = 1024, height = 1024, iters = 1'000'000;
    std::optional<std::size_t> burn_in;
    int max_iter = kDefaultOperatorIterations;
    std::uint64_t seed = 42;
    std::vector<std::size_t> subsystem;

    auto with_out = [&](CLI::App* c, const char* what = "Output file (default stdout)") { c->add_option("--out", out_path, what); };
    auto with_tol = [&](CLI::App* c) { c->add_option("--tol", tol, "Target bracket width"); };

    auto* pressure_cmd = app.add_subcommand("pressure", "Pressure bracket P(t)");
    pressure_cmd->add_option("--system", system_path, "System JSON")->required();
    pressure_cmd->add_option("--t", t, "Exponent")->required();
    with_tol(pressure_cmd);
    with_out(pressure_cmd);

    auto* classify_cmd = app.add_subcommand("classify", "Finiteness parameter and regularity class");
    classify_cmd->add_option("--system", system_path, "System JSON")->required();
    with_tol(classify_cmd);
    with_out(classify_cmd);

    auto* dimension_cmd = app.add_subcommand("dimension", "Hausdorff dimension via the Bowen root");
    dimension_cmd->add_option("--system", system_path, "System JSON")->required();
    dimension_cmd->add_option("--letters", subsystem, "Finite subsystem letters (1-based)")->delimiter(',');
    with_tol(dimension_cmd);
    with_out(dimension_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a family over a parameter grid (CSV)");
    sweep_cmd->add_option("--family", family_path, "Family JSON")->required();
    sweep_cmd->add_option("--grid", grid_path, "Grid JSON")->required();
    with_tol(sweep_cmd);
    with_out(sweep_cmd);

    auto* type_cmd = app.add_subcommand("family-type", "Family type from a sweep CSV");
    type_cmd->add_option("--sweep", sweep_path, "Sweep CSV")->required();
    type_cmd->add_option("--family", family_path, "Family JSON, for the locus");
    type_cmd->add_option("--mesh", mesh_path, "Mesh JSON, for the locus");
    with_tol(type_cmd);
    with_out(type_cmd);

    auto* locus_cmd = app.add_subcommand("cr-locus", "Critically regular locus on a parameter mesh");
    locus_cmd->add_option("--family", family_path, "Family JSON")->required();
    locus_cmd->add_option("--mesh", mesh_path, "Mesh JSON")->required();
    with_tol(locus_cmd);
    with_out(locus_cmd);

    auto* lambda_cmd = app.add_subcommand("lambda-check", "Lambda-topology convergence of a sequence");
    lambda_cmd->add_option("--limit", limit_path, "Limit system JSON")->required();
    lambda_cmd->add_option("--sequence", sequence_dir, "Directory of system JSON files, in name order")->required();
    lambda_cmd->add_option("--letters", letters, "Letters checked");
    with_out(lambda_cmd);

    auto* op_cmd = app.add_subcommand("pressure-op", "Pressure from the discretised transfer operator");
    op_cmd->add_option("--system", system_path, "System JSON")->required();
    op_cmd->add_option("--t", t, "Exponent")->required();
    op_cmd->add_option("--grid", grid, "Lattice points per axis");
    op_cmd->add_option("--max-iter", max_iter, "Power iteration cap");
    with_tol(op_cmd);
    with_out(op_cmd);

    auto* render_cmd = app.add_subcommand("render", "Chaos-game image of the limit set (PPM)");
    render_cmd->add_option("--system", system_path, "System JSON")->required();
    render_cmd->add_option("--iters", iters, "Orbit length");
    render_cmd->add_option("--seed", seed, "RNG seed");
    render_cmd->add_option("--burn-in", burn_in, "Discarded initial iterates");
    render_cmd->add_option("--width", width, "Image width");
    render_cmd->add_option("--height", height, "Image height");
    render_cmd->add_option("--out", out_path, "PPM file")->required();

    auto* examples_cmd = app.add_subcommand("examples", "Write the bundled example corpus");
    examples_cmd->add_option("--out", out_path, "Target directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (threads > 0) set_thread_count(threads);
    auto tol_or = [&](double d) { return tol > 0.0 ? tol : d; };
    const Output o{out, out_path};

    try {
        if (pressure_cmd->parsed()) {
            const auto sys = load_system(system_path);
            const Bracket p = pressure(sys, t, tol_or(1e-9));
            o.emit(Json{{"schema", kSchema}, {"t", t}, {"pressure", bracket_to_json(p)}});
            return 0;
        }
        if (classify_cmd->parsed()) {
            const auto r = classify(load_system(system_path), tol_or(1e-7));
            o.emit(regularity_to_json(r));
            return r.regularity == RegularityClass::Undetermined ? 3 : 0;
        }
        if (dimension_cmd->parsed()) {
            const auto sys = load_system(system_path);
            try {
                const auto r = subsystem.empty() ? bowen_dimension(sys, tol_or(1e-9))
                                                 : finite_subsystem_dimension(sys, subsystem, tol_or(1e-9));
                o.emit(dimension_to_json(r));
                return 0;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UndeterminedSign || !e.partial()) throw;
                o.emit(Json{{"schema", kSchema}, {"h", bracket_to_json(*e.partial())}, {"method", "Undetermined"}, {"note", e.what()}});
                return 3;
            }
        }
        if (sweep_cmd->parsed()) {
            const auto records = sweep(family_from_json(read_json(family_path)), grid_from_json(read_json(grid_path)), tol_or(1e-7));
            o.emit(sweep_to_csv(records));
            return 0;
        }
        if (type_cmd->parsed()) {
            const auto records = sweep_from_csv(read_text(sweep_path));
            FamilyVerdict v = classify_family(records, tol_or(1e-7));
            if (!family_path.empty() != !mesh_path.empty())
                throw Error(ErrorCode::MalformedSpec, "--family and --mesh go together");
            if (!family_path.empty())
                v.cr_locus = cr_locus(family_from_json(read_json(family_path)), mesh_from_json(read_json(mesh_path)), tol_or(1e-7));
            Json j = verdict_to_json(v);
            const ThetaConstancy tc = theta_local_constancy_check(records);
            j["theta_constant"] = tc.constant;
            j["theta_violation"] = tc.violation ? Json::array({tc.violation->first, tc.violation->second}) : Json(nullptr);
            Json flags = Json::array();
            if (std::ranges::count_if(records, [](const SweepRecord& r) { return !r.error; }) >= 5)
                for (const auto& f : smoothness_probe(records, tol_or(1e-7)))
                    flags.push_back({{"index", f.index}, {"gamma", complex_to_json(f.gamma)}, {"reason", f.reason}});
            j["smoothness_flags"] = flags;
            o.emit(j);
            return v.type == FamilyType::Undetermined ? 3 : 0;
        }
        if (locus_cmd->parsed()) {
            const auto locus = cr_locus(family_from_json(read_json(family_path)), mesh_from_json(read_json(mesh_path)), tol_or(1e-7));
            o.emit(Json{{"schema", kSchema}, {"cr_locus", locus_to_json(locus)}});
            return 0;
        }
        if (lambda_cmd->parsed()) {
            std::vector<ValidatedSystem> seq;
            for (const auto& s : read_sequence(sequence_dir)) seq.push_back(validated(s));
            const auto r = lambda_convergence_check(seq, load_system(limit_path), letters);
            o.emit(lambda_to_json(r));
            return r.verdict == LambdaVerdict::Inconclusive ? 3 : 0;
        }
        if (op_cmd->parsed()) {
            const Bracket p = pressure_via_operator(load_system(system_path), t, grid, tol_or(kDefaultOperatorTol), max_iter);
            o.emit(Json{{"schema", kSchema}, {"t", t}, {"grid", grid}, {"pressure", bracket_to_json(p)}});
            return 0;
        }
        if (render_cmd->parsed()) {
            const auto sys = load_system(system_path);
            const std::size_t burn = burn_in.value_or(default_burn_in(sys));
            const auto cloud = chaos_game(sys, iters, seed, burn);
            write_image(cloud, width, height, out_path);
            out << dump(Json{{"schema", kSchema},
                             {"image", out_path},
                             {"points", cloud.points.size()},
                             {"burn_in", burn},
                             {"seed", seed},
                             {"letters", cloud.letters},
                             {"truncated", cloud.truncated},
                             {"weight_exponent", cloud.weight_exponent ? Json(*cloud.weight_exponent) : Json(nullptr)}});
            return 0;
        }
        if (examples_cmd->parsed()) {
            const auto files = write_corpus(out_path);
            out << dump(Json{{"schema", kSchema}, {"directory", out_path}, {"files", files}});
            return 0;
        }
    } catch (const Error& e) {
        Json j{{"schema", kSchema}, {"error", std::string(to_string(e.code()))}, {"message", e.what()}};
        if (e.partial()) j["partial"] = bracket_to_json(*e.partial());
        err << dump(j);
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << dump(Json{{"schema", kSchema}, {"error", "Internal"}, {"message", e.what()}});
        return 1;
    }
    return 2;
}

} // namespace ifslab
