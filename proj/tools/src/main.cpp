#include "newtonosc_cli/commands.hpp"
#include "newtonosc_cli/schema.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace newtonosc;
using namespace newtonosc::cli;

namespace {

struct Globals {
    std::size_t threads = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;  // empty: the subcommand's natural format
};

void add_phase(CLI::App* cmd, PhaseInput& in) {
    cmd->add_option("--phase", in.text, "Polynomial phase S(x,y), or F = S_xy with --mixed")->required();
    cmd->add_flag("--mixed", in.mixed, "Treat --phase as the mixed derivative F");
    cmd->add_option("--rho", in.rho, "Cutoff radius in (0, 1]")->capture_default_str();
}

std::vector<double> parse_lambdas(const std::string& spec) {
    // "lo:hi" means 2^lo .. 2^hi; otherwise a comma separated list.
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        return SweepConfig::powers_of_two(std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1)));
    }
    std::vector<double> out;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stod(item));
    return out;
}

// Round-trips the document through text and its schema.
std::string check(const json& doc) {
    std::string text = doc.dump(2);
    const std::vector<std::string> problems = validate_document(json::parse(text));
    if (!problems.empty()) throw Error("SchemaError", "output fails its schema: " + problems.front());
    return text;
}

void emit(const json& doc, std::ostream& out) { out << check(doc) << '\n'; }

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidArgument("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::ofstream open_side_file(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot open " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillatory integral operators with polynomial phases"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--threads", g.threads, "Worker threads (falls back to NEWTONOSC_THREADS)");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output path (stdout when omitted)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    PhaseInput phase;
    std::optional<std::string> order;
    auto* analyze = app.add_subcommand("analyze", "Newton polygon, decay rates, branches, degeneracy");
    add_phase(analyze, phase);
    analyze->add_option("--order", order, "Puiseux truncation order K (default 4 deg + 8)");

    std::vector<double> norm_lambdas;
    NormOptions norm_opts;
    auto* norm = app.add_subcommand("norm", "Operator norm estimates");
    add_phase(norm, phase);
    norm->add_option("--lambda", norm_lambdas, "Frequencies")->required()->delimiter(',');
    norm->add_option("--tol", norm_opts.tol)->capture_default_str();
    norm->add_option("--max-iter", norm_opts.max_iter)->capture_default_str();

    SweepConfig sweep_cfg;
    std::string sweep_lambdas = "4:11";
    std::vector<double> fit_window;
    std::string plot_path, samples_path;
    auto* sweep = app.add_subcommand("sweep", "Lambda sweep, decay fit and verdict");
    add_phase(sweep, phase);
    sweep->add_option("--lambdas", sweep_lambdas, "lo:hi for 2^lo..2^hi, or a comma list")->capture_default_str();
    sweep->add_option("--tol-slope", sweep_cfg.tol_slope)->capture_default_str();
    sweep->add_option("--fit-window", fit_window, "lo,hi lambda range used by the fit")->delimiter(',')->expected(2);
    sweep->add_option("--emit-plot-data", plot_path, "Write log2 lambda, log2 norm, predicted line as CSV");
    sweep->add_option("--samples-csv", samples_path, "Also write the samples as CSV");
    sweep->add_option("--tol", sweep_cfg.norm.tol)->capture_default_str();
    sweep->add_option("--max-iter", sweep_cfg.norm.max_iter)->capture_default_str();

    double block_lambda = 256.0;
    BlockOptions block_opts;
    auto* blocks = app.add_subcommand("blocks", "Dyadic block estimates");
    add_phase(blocks, phase);
    blocks->add_option("--lambda", block_lambda)->capture_default_str();
    blocks->add_option("--D", block_opts.D, "Gap width constant")->capture_default_str();
    blocks->add_option("--j-max", block_opts.j_max)->capture_default_str();
    blocks->add_option("--ratio-cap", block_opts.ratio_cap)->capture_default_str();

    ExponentProfile profile;
    int trials = 1000, density = 8;
    auto* dyad = app.add_subcommand("dyadpol", "Lower-bound set for dyadically pinned polynomials");
    dyad->add_option("--r", profile.r, "Exponents r_1..r_N")->required()->delimiter(',');
    dyad->add_option("--C", profile.C)->capture_default_str();
    dyad->add_option("--trials", trials)->capture_default_str();
    dyad->add_option("--density", density, "Samples per octave")->capture_default_str();

    SelftestOptions self_opts;
    auto* selftest = app.add_subcommand("selftest", "Built-in consistency checks");
    selftest->add_option("--mutate", self_opts.mutate)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        json err{{"schema", kSchema}, {"error", {{"kind", "UsageError"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 2;
    }

    try {
        if (g.threads > 0) set_thread_count(g.threads);
        Provenance prov{app.get_subcommands().front()->get_name(), thread_count(), g.seed};
        Output out(g.out);

        if (analyze->parsed()) {
            emit(run_analyze(phase, order, prov), out.stream());
        } else if (norm->parsed()) {
            norm_opts.seed = g.seed;
            const NormRun r = run_norm(phase, norm_lambdas, norm_opts, prov);
            if (g.format == "json") {
                emit(r.doc, out.stream());
            } else {
                check(r.doc);
                write_csv_provenance(out.stream(), prov);
                write_norm_csv(out.stream(), r.samples);
            }
        } else if (sweep->parsed()) {
            sweep_cfg.lambdas = parse_lambdas(sweep_lambdas);
            sweep_cfg.seed = g.seed;
            if (fit_window.size() == 2) sweep_cfg.fit_window = std::pair{fit_window[0], fit_window[1]};
            const SweepRun r = run_sweep(phase, sweep_cfg, prov);
            if (g.format == "csv") {
                check(r.doc);
                write_csv_provenance(out.stream(), prov);
                write_norm_csv(out.stream(), r.report.samples);
            } else {
                emit(r.doc, out.stream());
            }
            if (!samples_path.empty()) {
                auto f = open_side_file(samples_path);
                write_csv_provenance(f, prov);
                write_norm_csv(f, r.report.samples);
            }
            if (!plot_path.empty()) {
                auto f = open_side_file(plot_path);
                write_csv_provenance(f, prov);
                write_plot_csv(f, r.report.plot);
            }
        } else if (blocks->parsed()) {
            block_opts.seed = g.seed;
            const BlocksRun r = run_blocks(phase, block_lambda, block_opts, prov);
            if (g.format == "json") {
                emit(r.doc, out.stream());
            } else {
                check(r.doc);
                write_csv_provenance(out.stream(), prov);
                write_blocks_csv(out.stream(), r.report.blocks);
            }
            return r.report.pass ? 0 : 1;
        } else if (dyad->parsed()) {
            const DyadpolRun r = run_dyadpol(profile, trials, density, prov);
            emit(r.doc, out.stream());
            return r.pass ? 0 : 1;
        } else if (selftest->parsed()) {
            const SelftestRun r = run_selftest(self_opts, prov);
            emit(r.doc, out.stream());
            if (!r.pass) {
                std::cerr << "selftest failed: " << r.first_failure << '\n';
                return 1;
            }
        }
    } catch (const Error& e) {
        std::cerr << error_json(e).dump() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        json err{{"schema", kSchema}, {"error", {{"kind", "InternalError"}, {"message", e.what()}}}};
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 0;
}
