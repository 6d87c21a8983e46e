// forumsim: agent-based simulator of opinionated forum discussions plus
// the statistics/fitting pipeline, usable on simulated and real logs.

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "forumsim/engine.hpp"
#include "forumsim/ingest.hpp"
#include "forumsim/pipeline.hpp"
#include "forumsim/sweep.hpp"
#include "forumsim/tables.hpp"

namespace fs = std::filesystem;
using namespace forumsim;

namespace {

constexpr const char* kVersion = "forumsim 0.1.0";

struct CommonOpts {
    std::string out_dir = "out";
    double bin_ratio = kDefaultBinRatio;
    double tail_threshold = 20.0;
    std::uint64_t shuffle_seed = 1;
    int workers = 0;  // 0 = all hardware threads
};

void apply_config_file(ModelParams& params, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    // config files share the sweep-plan key=value syntax, minus axes
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string stripped = strip(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = strip(stripped.substr(0, eq));
        const std::string value = strip(stripped.substr(eq + 1));
        if (key == "agent_mix" || key == "source_mix") {
            std::array<double, 3> mix{};
            std::stringstream ss(value);
            std::string item;
            for (int i = 0; i < 3; ++i) {
                if (!std::getline(ss, item, ','))
                    throw std::invalid_argument(key + " needs 3 comma-separated values");
                mix[static_cast<std::size_t>(i)] = std::stod(strip(item));
            }
            (key == "agent_mix" ? params.agent_mix : params.source_mix) = mix;
        } else {
            set_model_param(params, key, std::stod(value));
        }
    }
}

void write_manifest(const std::string& dir, const RunStamp& stamp,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(fs::path(dir) / "manifest.txt");
    if (!out) throw TableError("cannot write manifest in " + dir);
    out << "# run=" << stamp.run_id << "\tseed=" << stamp.seed << "\n";
    for (const auto& [k, v] : entries) out << k << '\t' << v << "\n";
}

std::vector<std::pair<std::string, std::string>> param_entries(const ModelParams& p) {
    auto num = [](double v) { return format_number(v); };
    return {
        {"population", std::to_string(p.population)},
        {"agent_mix", num(p.agent_mix[0]) + "," + num(p.agent_mix[1]) + "," + num(p.agent_mix[2])},
        {"source_mix",
         num(p.source_mix[0]) + "," + num(p.source_mix[1]) + "," + num(p.source_mix[2])},
        {"n_threads", std::to_string(p.n_threads)},
        {"p_s", num(p.p_s)},
        {"p_c", num(p.p_c)},
        {"p_r", num(p.p_r)},
        {"f_star", num(p.f_star)},
        {"x_n", num(p.x_n)},
        {"seed", std::to_string(p.seed)},
    };
}

int cmd_simulate(const ModelParams& params, const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    params.validate();
    const SimulationOutput sim = run_simulation(params, opts.workers);
    const RunStamp stamp{run_id_for_params(params), params.seed};

    fs::create_directories(opts.out_dir);
    {
        std::ofstream out(fs::path(opts.out_dir) / "records.tsv");
        if (!out) throw TableError("cannot write records.tsv in " + opts.out_dir);
        write_records(out, stamp, sim.records);
    }

    AnalysisOptions aopts;
    aopts.bin_ratio = opts.bin_ratio;
    aopts.tail_threshold = opts.tail_threshold;
    aopts.shuffle_seed = opts.shuffle_seed;
    std::vector<std::pair<std::string, std::string>> manifest = param_entries(params);
    if (sim.total_posts > 0) {
        const AnalysisResult analysis = analyze_records(sim.records, aopts);
        write_analysis(opts.out_dir, stamp, analysis);
    } else {
        // nothing to analyze; still emit an (empty-totals) metrics table
        std::ofstream out(fs::path(opts.out_dir) / "metrics.tsv");
        const std::vector<std::pair<std::string, double>> rows = {{"total_posts", 0.0}};
        write_named_values(out, stamp, rows);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.emplace_back("command", "simulate");
    manifest.emplace_back("version", kVersion);
    manifest.emplace_back("workers", std::to_string(opts.workers));
    manifest.emplace_back("total_posts", std::to_string(sim.total_posts));
    manifest.emplace_back("active_threads", std::to_string(sim.n_active_threads));
    manifest.emplace_back("active_agents", std::to_string(sim.n_active_agents));
    manifest.emplace_back("quarrel_fraction", format_number(sim.quarrel_fraction));
    manifest.emplace_back("wall_seconds", format_number(wall));
    write_manifest(opts.out_dir, stamp, manifest);
    std::cout << "simulate: " << sim.total_posts << " posts, " << sim.n_active_threads
              << " active threads, " << sim.n_active_agents << " active agents, quarrel fraction "
              << format_number(sim.quarrel_fraction) << "\n"
              << "outputs in " << opts.out_dir << "\n";
    return 0;
}

int cmd_analyze(const std::string& input, char delimiter, const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadOptions lopts;
    lopts.delimiter = delimiter;
    LoadReport report;
    const std::vector<ForumRecord> records = load_log(input, lopts, &report);
    if (records.empty()) throw IngestError("log '" + input + "' contains no rows");

    AnalysisOptions aopts;
    aopts.bin_ratio = opts.bin_ratio;
    aopts.tail_threshold = opts.tail_threshold;
    aopts.shuffle_seed = opts.shuffle_seed;
    const RunStamp stamp{run_id_for_records(records, aopts), aopts.shuffle_seed};
    const AnalysisResult analysis = analyze_records(records, aopts);
    write_analysis(opts.out_dir, stamp, analysis);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts.out_dir, stamp,
                   {{"command", "analyze"},
                    {"version", kVersion},
                    {"input", input},
                    {"rows", std::to_string(report.n_rows)},
                    {"threads", std::to_string(report.n_threads)},
                    {"users", std::to_string(report.n_users)},
                    {"quarrel_share_abab", format_number(analysis.quarrel_share_abab)},
                    {"wall_seconds", format_number(wall)}});
    std::cout << "analyze: " << report.n_rows << " rows, " << report.n_threads << " threads, "
              << report.n_users << " users, ABAB quarrel share "
              << format_number(analysis.quarrel_share_abab) << "\n"
              << "outputs in " << opts.out_dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& plan_path, const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepPlan plan = parse_sweep_plan_file(plan_path);
    const SweepReport report = run_sweep(plan, opts.workers);
    const RunStamp stamp{run_id_for_params(plan.baseline), plan.baseline.seed};
    fs::create_directories(opts.out_dir);
    {
        std::ofstream out(fs::path(opts.out_dir) / "sweep_report.tsv");
        if (!out) throw TableError("cannot write sweep_report.tsv in " + opts.out_dir);
        write_sweep_report(out, stamp, report);
    }
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        std::ofstream out(fs::path(opts.out_dir) / ("cell_" + std::to_string(i) + "_eL.tsv"));
        write_sweep_curve(out, stamp, report.cells[i]);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts.out_dir, stamp,
                   {{"command", "sweep"},
                    {"version", kVersion},
                    {"plan", plan_path},
                    {"cells", std::to_string(report.cells.size())},
                    {"replicates", std::to_string(report.replicates)},
                    {"wall_seconds", format_number(wall)}});
    std::cout << "sweep: " << report.cells.size() << " cells x " << report.replicates
              << " replicates\noutputs in " << opts.out_dir << "\n";
    return 0;
}

int cmd_fit(const std::string& input, const std::string& model, double xmin, double xmax,
            double b_fixed) {
    const Table table = read_table_file(input);
    std::vector<std::pair<std::string, double>> rows;
    if (model == "power") {
        const Histogram hist = histogram_from_table(table);
        const FitResult f = fit_power_law(hist, xmin, xmax);
        rows = {{"gamma", f.gamma},
                {"gamma_mle", f.mle_gamma},
                {"amplitude", f.amplitude},
                {"residual", f.residual},
                {"x_min", f.x_min},
                {"x_max", f.x_max},
                {"n_points", static_cast<double>(f.n_points)}};
    } else {
        const int cx = 0, cy = 1;
        std::vector<CurvePoint> pts;
        for (const auto& row : table.rows) {
            const double x = row[cx];
            if (xmin > 0 && x < xmin) continue;
            if (xmax > 0 && x > xmax) continue;
            pts.push_back({x, row[cy], 1});
        }
        if (pts.size() < 3) throw StatsError("fit: fewer than 3 points in range");
        if (model == "shifted-power") {
            const FitResult f = fit_u_of_l(pts);
            rows = {{"A", f.A}, {"b", f.b}, {"delta", f.delta}, {"residual", f.residual}};
        } else if (model == "log" || model == "shifted-log") {
            const double b = model == "log" ? 0.0 : b_fixed;
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (const CurvePoint& p : pts) {
                const double lx = std::log(p.x + b);
                sx += lx;
                sy += p.y;
                sxx += lx * lx;
                sxy += lx * p.y;
            }
            const double n = static_cast<double>(pts.size());
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            const double intercept = (sy - slope * sx) / n;
            rows = {{"A", intercept}, {"B", slope}};
            if (model == "shifted-log") rows.emplace_back("b", b);
        } else {
            throw std::invalid_argument("unknown fit model '" + model + "'");
        }
    }
    for (const auto& [k, v] : rows) std::cout << k << '\t' << format_number(v) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - opinionated-forum discussion simulator and statistics"};
    app.require_subcommand(1);

    ModelParams params;  // built-in defaults are the baseline parameter set
    CommonOpts opts;
    std::string config_path, input_path, plan_path;
    std::string delimiter = "tab";
    std::string fit_model = "power";
    double fit_xmin = 0.0, fit_xmax = 0.0, fit_b = 8.6;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-o,--out", opts.out_dir, "output directory");
        cmd->add_option("--bin-ratio", opts.bin_ratio, "log-bin ratio (> 1)");
        cmd->add_option("--tail-threshold", opts.tail_threshold,
                        "x_min for the L and U tail fits");
        cmd->add_option("--shuffle-seed", opts.shuffle_seed, "seed for the shuffled baseline");
        cmd->add_option("-w,--workers", opts.workers, "worker threads (0 = all cores)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run the model and analyze its output");
    sim->add_option("-c,--config", config_path, "key=value parameter file");
    sim->add_option("--population", params.population);
    sim->add_option("--n-threads", params.n_threads, "number of threads to simulate");
    sim->add_option("--p-s", params.p_s);
    sim->add_option("--p-c", params.p_c);
    sim->add_option("--p-r", params.p_r);
    sim->add_option("--f-star", params.f_star);
    sim->add_option("--x-n", params.x_n);
    sim->add_option("-s,--seed", params.seed);
    add_common(sim);

    CLI::App* ana = app.add_subcommand("analyze", "compute all statistics from a post log");
    ana->add_option("-i,--input", input_path, "records file")->required();
    ana->add_option("--delimiter", delimiter, "tab or comma");
    add_common(ana);

    CLI::App* swp = app.add_subcommand("sweep", "run a parameter grid from a plan file");
    swp->add_option("-p,--plan", plan_path, "plan file")->required();
    add_common(swp);

    CLI::App* fit = app.add_subcommand("fit", "fit a functional form to an emitted table");
    fit->add_option("-i,--input", input_path, "table file")->required();
    fit->add_option("-m,--model", fit_model, "power | shifted-power | log | shifted-log");
    fit->add_option("--xmin", fit_xmin, "lower fit bound (0 = open)");
    fit->add_option("--xmax", fit_xmax, "upper fit bound (0 = open)");
    fit->add_option("-b", fit_b, "fixed shift for shifted-log");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            // precedence: flags > config file > built-in defaults
            if (!config_path.empty()) {
                ModelParams from_file;  // defaults
                apply_config_file(from_file, config_path);
                ModelParams merged = from_file;
                for (const auto& [name, opt] :
                     std::initializer_list<std::pair<const char*, double ModelParams::*>>{
                         {"--p-s", &ModelParams::p_s},
                         {"--p-c", &ModelParams::p_c},
                         {"--p-r", &ModelParams::p_r},
                         {"--f-star", &ModelParams::f_star},
                         {"--x-n", &ModelParams::x_n}})
                    if (sim->count(name)) merged.*opt = params.*opt;
                if (sim->count("--population")) merged.population = params.population;
                if (sim->count("--n-threads")) merged.n_threads = params.n_threads;
                if (sim->count("--seed")) merged.seed = params.seed;
                params = merged;
            }
            return cmd_simulate(params, opts);
        }
        if (ana->parsed()) {
            char d = '\t';
            if (delimiter == "comma") d = ',';
            else if (delimiter != "tab")
                throw std::invalid_argument("--delimiter must be 'tab' or 'comma'");
            return cmd_analyze(input_path, d, opts);
        }
        if (swp->parsed()) return cmd_sweep(plan_path, opts);
        if (fit->parsed()) return cmd_fit(input_path, fit_model, fit_xmin, fit_xmax, fit_b);
    } catch (const IngestError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const TableError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const StatsError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const SweepError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
