// gadepth: data complexity analysis for binary tabular datasets.
//
// Subcommands:
//   generate   synthesize epistatic genotype datasets (penetrance models)
//   depth      size-limit sweep of GA feature selection -> depth curve/report
//   classical  the classical complexity-measure suite
//   report     re-render report and plot from a stored depth curve CSV
//
// Exit codes: 0 success, 2 validation error, 1 runtime failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gadepth/classical.hpp"
#include "gadepth/dataset.hpp"
#include "gadepth/depth.hpp"
#include "gadepth/manifest.hpp"
#include "gadepth/svg_plot.hpp"
#include "gadepth/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

int default_workers() {
    if (const char* env = std::getenv("GADEPTH_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// "1..9", "1..99:2", or a comma list
std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    const auto range_at = text.find("..");
    if (range_at != std::string::npos) {
        int stride = 1;
        std::string rest = text.substr(range_at + 2);
        const auto stride_at = rest.find(':');
        if (stride_at != std::string::npos) {
            stride = std::stoi(rest.substr(stride_at + 1));
            rest = rest.substr(0, stride_at);
        }
        const int lo = std::stoi(text.substr(0, range_at));
        const int hi = std::stoi(rest);
        if (stride < 1 || lo < 1 || hi < lo)
            throw gadepth::ValidationError("--sizes: bad range \"" + text + "\"");
        for (int s = lo; s <= hi; s += stride) out.push_back(s);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw gadepth::ValidationError("--sizes: empty grid");
    return out;
}

std::vector<double> parse_maf(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

char delimiter_for(const std::string& name, const std::string& path) {
    if (name == "comma") return ',';
    if (name == "tab") return '\t';
    if (name == "auto") {
        std::ifstream in(path);
        std::string header;
        std::getline(in, header);
        return header.find('\t') != std::string::npos ? '\t' : ',';
    }
    if (name.size() == 1) return name[0];
    throw gadepth::ValidationError("--delimiter: use comma, tab or auto");
}

// flags override config-file values; config echo goes to the manifest
class ConfigLayer {
public:
    ConfigLayer(CLI::App* cmd, std::string config_path)
        : cmd_(cmd), values_(json::object()) {
        if (!config_path.empty()) values_ = gadepth::load_config_json(config_path);
    }

    std::string get_input(const std::string& positional) {
        if (!positional.empty()) {
            echo_["input"] = positional;
            return positional;
        }
        if (values_.contains("input")) {
            const std::string v = values_["input"].get<std::string>();
            echo_["input"] = v;
            return v;
        }
        throw gadepth::ValidationError("missing input file (positional argument or \"input\" in --config)");
    }

    template <typename T>
    T get(const std::string& flag, T cli_value) {
        if (cmd_->count("--" + flag) > 0) {
            echo_[flag] = cli_value;
            return cli_value;
        }
        if (values_.contains(flag)) {
            const T v = values_[flag].get<T>();
            echo_[flag] = v;
            return v;
        }
        echo_[flag] = cli_value;
        return cli_value;
    }

    const json& echo() const { return echo_; }

private:
    CLI::App* cmd_;
    json values_;
    json echo_;
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int run_generate(CLI::App* cmd, const std::string& config_path, const std::string& model_name,
                 const std::string& maf_text, double h2, std::size_t cases, std::size_t controls,
                 std::size_t features, const std::string& maf_range_text, std::uint64_t seed,
                 const std::string& out, bool suite) {
    ConfigLayer cfg(cmd, config_path);
    const std::string model = cfg.get<std::string>("model", model_name);
    const std::string maf_s = cfg.get<std::string>("maf", maf_text);
    const double target_h2 = cfg.get<double>("h2", h2);
    const std::size_t n_cases = cfg.get<std::size_t>("cases", cases);
    const std::size_t n_controls = cfg.get<std::size_t>("controls", controls);
    const std::size_t total = cfg.get<std::size_t>("features", features);
    const std::string maf_range_s = cfg.get<std::string>("maf-range", maf_range_text);
    const std::uint64_t the_seed = cfg.get<std::uint64_t>("seed", seed);
    const std::string out_path = cfg.get<std::string>("output", out);
    const bool emit_suite = cfg.get<bool>("suite", suite);

    Timer timer;
    gadepth::RunManifest manifest;
    manifest.command = "generate";
    manifest.config = cfg.echo();
    manifest.seed = the_seed;
    manifest.version = kVersion;

    if (emit_suite) {
        fs::create_directories(out_path);
        manifest.write_atomic((fs::path(out_path) / "manifest.json").string());
        json index = json::array();
        for (const auto& entry : gadepth::paper_suite(the_seed)) {
            const fs::path data_path = fs::path(out_path) / (entry.name + ".tsv");
            gadepth::save_dataset(entry.dataset.data, data_path.string(), "class", '\t');
            std::ofstream m(fs::path(out_path) / (entry.name + ".manifest.json"));
            m << gadepth::generation_manifest_json(entry.dataset) << "\n";
            index.push_back(entry.name);
        }
        std::ofstream idx(fs::path(out_path) / "index.json");
        idx << index.dump(2) << "\n";
        manifest.wall_seconds = timer.seconds();
        manifest.write_atomic((fs::path(out_path) / "manifest.json").string());
        std::cout << out_path << "\n";
        return 0;
    }

    if (!(target_h2 > 0.0 && target_h2 < 1.0))
        throw gadepth::ValidationError("--h2 must be in (0, 1)");
    const auto maf = parse_maf(maf_s);
    const auto range = parse_maf(maf_range_s);
    if (range.size() != 2)
        throw gadepth::ValidationError("--maf-range needs two values \"lo,hi\"");

    gadepth::GenSpec spec;
    if (model == "xor2") {
        if (maf.size() != 2) throw gadepth::ValidationError("--maf: xor2 needs two values");
        spec.models = {gadepth::make_xor_model(2, maf, target_h2)};
    } else if (model == "xor3") {
        if (maf.size() != 3) throw gadepth::ValidationError("--maf: xor3 needs three values");
        spec.models = {gadepth::make_xor_model(3, maf, target_h2)};
    } else if (model == "het2") {
        if (maf.size() != 2) throw gadepth::ValidationError("--maf: het2 needs two values");
        spec.models = {gadepth::make_xor_model(2, maf, target_h2),
                       gadepth::make_xor_model(2, maf, target_h2)};
    } else {
        throw gadepth::ValidationError("--model: use xor2, xor3 or het2");
    }
    spec.n_cases = n_cases;
    spec.n_controls = n_controls;
    spec.total_features = total;
    spec.irrelevant_maf_range = {range[0], range[1]};
    spec.seed = the_seed;

    const std::string manifest_path =
        (fs::path(out_path).parent_path() /
         (fs::path(out_path).stem().string() + ".manifest.json"))
            .string();
    manifest.write_atomic(manifest_path);

    const gadepth::GeneratedDataset generated = gadepth::generate(spec);
    gadepth::save_dataset(generated.data, out_path, "class", '\t');
    {
        std::ofstream m(manifest_path + ".model.json");
        m << gadepth::generation_manifest_json(generated) << "\n";
    }
    manifest.input_hashes[out_path] = std::to_string(gadepth::fnv1a_file(out_path));
    manifest.wall_seconds = timer.seconds();
    manifest.write_atomic(manifest_path);
    std::cout << out_path << "\n";
    return 0;
}

gadepth::Dataset load_input(const std::string& input, const std::string& label_column,
                            const std::string& delimiter, const std::string& positive_label) {
    return gadepth::load_dataset(input, label_column, delimiter_for(delimiter, input),
                                 positive_label);
}

int run_depth(CLI::App* cmd, const std::string& config_path, const std::string& input,
              const std::string& label_column, const std::string& delimiter,
              const std::string& positive_label, const std::string& sizes_text, int replicates,
              const std::string& fitness, const std::string& fitness_mode, int folds, int pop,
              int gens, double mutation, double crossover, int tournament, int elitism,
              std::uint64_t seed, int workers, const std::string& out_dir, bool plot,
              bool progress) {
    ConfigLayer cfg(cmd, config_path);
    const std::string in_path = cfg.get_input(input);
    const std::string label = cfg.get<std::string>("label-column", label_column);
    const std::string delim = cfg.get<std::string>("delimiter", delimiter);
    const std::string positive = cfg.get<std::string>("positive-label", positive_label);
    const std::string sizes_s = cfg.get<std::string>("sizes", sizes_text);

    gadepth::SweepConfig sweep;
    sweep.size_limits = parse_sizes(sizes_s);
    sweep.replicates = cfg.get<int>("replicates", replicates);
    sweep.evaluator = gadepth::evaluator_from_string(cfg.get<std::string>("fitness", fitness));
    const std::string mode = cfg.get<std::string>("fitness-mode", fitness_mode);
    if (mode == "holdout") sweep.fitness_mode = gadepth::FitnessMode::holdout;
    else if (mode != "cv")
        throw gadepth::ValidationError("--fitness-mode: use cv or holdout");
    sweep.cv_folds = cfg.get<int>("folds", folds);
    sweep.ga.population_size = cfg.get<int>("pop", pop);
    sweep.ga.generations = cfg.get<int>("gens", gens);
    sweep.ga.mutation_rate = cfg.get<double>("mutation-rate", mutation);
    sweep.ga.crossover_rate = cfg.get<double>("crossover-rate", crossover);
    sweep.ga.tournament_size = cfg.get<int>("tournament", tournament);
    sweep.ga.elitism_count = cfg.get<int>("elitism", elitism);
    sweep.base_seed = cfg.get<std::uint64_t>("seed", seed);
    sweep.workers = cfg.get<int>("workers", workers);
    const std::string out_path = cfg.get<std::string>("out-dir", out_dir);
    const bool want_plot = cfg.get<bool>("plot", plot);

    Timer timer;
    const gadepth::Dataset data = load_input(in_path, label, delim, positive);

    fs::create_directories(out_path);
    gadepth::RunManifest manifest;
    manifest.command = "depth";
    manifest.config = cfg.echo();
    manifest.input_hashes[in_path] = std::to_string(gadepth::fnv1a_file(in_path));
    manifest.seed = sweep.base_seed;
    manifest.version = kVersion;
    const std::string manifest_path = (fs::path(out_path) / "manifest.json").string();
    manifest.write_atomic(manifest_path);

    const gadepth::Partition partition = gadepth::split_partition(data, sweep.base_seed);
    gadepth::ProgressSink sink;
    if (progress) {
        sink = [](int done, int total) {
            std::cerr << "\r" << done << "/" << total << " cells" << std::flush;
            if (done == total) std::cerr << "\n";
        };
    }
    const gadepth::DepthCurve curve = gadepth::run_sweep(data, partition, sweep, sink);

    gadepth::write_curve_csv(curve, (fs::path(out_path) / "depth_curve.csv").string());
    {
        std::ofstream rep(fs::path(out_path) / "depth_report.json");
        rep << gadepth::report_to_json(gadepth::build_report(curve)) << "\n";
    }
    if (want_plot)
        gadepth::write_depth_plot_svg(curve, (fs::path(out_path) / "depth_plot.svg").string(),
                                      fs::path(in_path).filename().string());

    manifest.wall_seconds = timer.seconds();
    manifest.write_atomic(manifest_path);
    std::cout << out_path << "\n";
    return 0;
}

int run_classical(CLI::App* cmd, const std::string& config_path, const std::string& input,
                  const std::string& label_column, const std::string& delimiter,
                  const std::string& positive_label, std::uint64_t seed,
                  const std::string& out_dir) {
    ConfigLayer cfg(cmd, config_path);
    const std::string in_path = cfg.get_input(input);
    const std::string label = cfg.get<std::string>("label-column", label_column);
    const std::string delim = cfg.get<std::string>("delimiter", delimiter);
    const std::string positive = cfg.get<std::string>("positive-label", positive_label);
    const std::uint64_t the_seed = cfg.get<std::uint64_t>("seed", seed);
    const std::string out_path = cfg.get<std::string>("out-dir", out_dir);

    Timer timer;
    const gadepth::Dataset data = load_input(in_path, label, delim, positive);

    fs::create_directories(out_path);
    gadepth::RunManifest manifest;
    manifest.command = "classical";
    manifest.config = cfg.echo();
    manifest.input_hashes[in_path] = std::to_string(gadepth::fnv1a_file(in_path));
    manifest.seed = the_seed;
    manifest.version = kVersion;
    const std::string manifest_path = (fs::path(out_path) / "manifest.json").string();
    manifest.write_atomic(manifest_path);

    gadepth::ClassicalConfig ccfg;
    ccfg.seed = the_seed;
    const gadepth::ClassicalReport report = gadepth::full_report(data, ccfg);
    {
        std::ofstream j(fs::path(out_path) / "classical_report.json");
        j << gadepth::classical_report_to_json(report) << "\n";
    }
    {
        std::ofstream c(fs::path(out_path) / "classical_report.csv");
        c << gadepth::classical_report_to_csv(report);
    }
    manifest.wall_seconds = timer.seconds();
    manifest.write_atomic(manifest_path);
    std::cout << out_path << "\n";
    return 0;
}

int run_report(CLI::App* cmd, const std::string& config_path, const std::string& input,
               const std::string& out_dir, bool plot) {
    ConfigLayer cfg(cmd, config_path);
    const std::string in_path = cfg.get_input(input);
    const std::string out_path = cfg.get<std::string>("out-dir", out_dir);
    const bool want_plot = cfg.get<bool>("plot", plot);

    Timer timer;
    const gadepth::DepthCurve curve = gadepth::read_curve_csv(in_path);

    fs::create_directories(out_path);
    gadepth::RunManifest manifest;
    manifest.command = "report";
    manifest.config = cfg.echo();
    manifest.input_hashes[in_path] = std::to_string(gadepth::fnv1a_file(in_path));
    manifest.version = kVersion;
    const std::string manifest_path = (fs::path(out_path) / "manifest.json").string();
    manifest.write_atomic(manifest_path);

    {
        std::ofstream rep(fs::path(out_path) / "depth_report.json");
        rep << gadepth::report_to_json(gadepth::build_report(curve)) << "\n";
    }
    if (want_plot)
        gadepth::write_depth_plot_svg(curve, (fs::path(out_path) / "depth_plot.svg").string(),
                                      fs::path(in_path).filename().string());
    manifest.wall_seconds = timer.seconds();
    manifest.write_atomic(manifest_path);
    std::cout << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data complexity analysis via size-limited GA feature selection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize an epistatic genotype dataset");
    std::string g_config, g_model = "xor2", g_maf = "0.5,0.5", g_range = "0.05,0.5";
    std::string g_out = "dataset.tsv";
    double g_h2 = 0.4;
    std::size_t g_cases = 400, g_controls = 400, g_features = 20;
    std::uint64_t g_seed = 0;
    bool g_suite = false;
    gen->add_option("--config", g_config, "JSON config file (flags override)");
    gen->add_option("--model", g_model, "penetrance model: xor2, xor3 or het2");
    gen->add_option("--maf", g_maf, "per-locus minor allele frequencies, comma separated");
    gen->add_option("--h2", g_h2, "target heritability in (0,1)");
    gen->add_option("--cases", g_cases, "number of case rows");
    gen->add_option("--controls", g_controls, "number of control rows");
    gen->add_option("--features", g_features, "total feature count incl. functional loci");
    gen->add_option("--maf-range", g_range, "irrelevant-feature MAF range \"lo,hi\"");
    gen->add_option("--seed", g_seed, "master seed");
    gen->add_option("-o,--output", g_out, "output TSV path (or directory with --suite)");
    gen->add_flag("--suite", g_suite, "emit the full synthetic validation grid");

    // depth
    auto* dep = app.add_subcommand("depth", "run the size-limit sweep and extract the report");
    std::string d_config, d_input, d_label = "class", d_delim = "auto", d_positive;
    std::string d_sizes = "1..10", d_fitness = "nonlinear", d_mode = "cv", d_out = "depth_out";
    int d_replicates = 50, d_folds = 5, d_pop = 500, d_gens = 50, d_tournament = 6, d_elitism = 1;
    double d_mutation = 0.2, d_crossover = 0.8;
    std::uint64_t d_seed = 0;
    int d_workers = default_workers();
    bool d_plot = false, d_progress = false;
    dep->add_option("--config", d_config, "JSON config file (flags override)");
    dep->add_option("input", d_input, "dataset file (csv/tsv with header)");
    dep->add_option("--label-column", d_label, "label column name");
    dep->add_option("--delimiter", d_delim, "comma, tab or auto");
    dep->add_option("--positive-label", d_positive, "raw label treated as class 1");
    dep->add_option("--sizes", d_sizes, "size-limit grid: a..b, a..b:stride, or list");
    dep->add_option("--replicates", d_replicates, "GA runs per size limit");
    dep->add_option("--fitness", d_fitness, "linear or nonlinear");
    dep->add_option("--fitness-mode", d_mode, "cv (train+test k-fold) or holdout");
    dep->add_option("--folds", d_folds, "cross-validation fold count");
    dep->add_option("--pop", d_pop, "GA population size");
    dep->add_option("--gens", d_gens, "GA generations");
    dep->add_option("--mutation-rate", d_mutation, "GA mutation rate");
    dep->add_option("--crossover-rate", d_crossover, "GA crossover rate");
    dep->add_option("--tournament", d_tournament, "tournament size");
    dep->add_option("--elitism", d_elitism, "elite genomes carried unchanged");
    dep->add_option("--seed", d_seed, "master seed");
    dep->add_option("--workers", d_workers, "concurrent sweep cells (env GADEPTH_WORKERS)");
    dep->add_option("--out-dir", d_out, "output directory");
    dep->add_flag("--plot", d_plot, "also write depth_plot.svg");
    dep->add_flag("--progress", d_progress, "print sweep progress to stderr");

    // classical
    auto* cls = app.add_subcommand("classical", "classical complexity measures and score");
    std::string c_config, c_input, c_label = "class", c_delim = "auto", c_positive;
    std::string c_out = "classical_out";
    std::uint64_t c_seed = 0;
    cls->add_option("--config", c_config, "JSON config file (flags override)");
    cls->add_option("input", c_input, "dataset file (csv/tsv with header)");
    cls->add_option("--label-column", c_label, "label column name");
    cls->add_option("--delimiter", c_delim, "comma, tab or auto");
    cls->add_option("--positive-label", c_positive, "raw label treated as class 1");
    cls->add_option("--seed", c_seed, "seed for the stochastic measures");
    cls->add_option("--out-dir", c_out, "output directory");

    // report
    auto* rep = app.add_subcommand("report", "recompute report/plot from a depth curve CSV");
    std::string r_config, r_input, r_out = "report_out";
    bool r_plot = true;
    rep->add_option("--config", r_config, "JSON config file (flags override)");
    rep->add_option("input", r_input, "depth curve CSV");
    rep->add_option("--out-dir", r_out, "output directory");
    rep->add_flag("--plot,!--no-plot", r_plot, "write depth_plot.svg (default on)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_generate(gen, g_config, g_model, g_maf, g_h2, g_cases, g_controls,
                                g_features, g_range, g_seed, g_out, g_suite);
        if (dep->parsed())
            return run_depth(dep, d_config, d_input, d_label, d_delim, d_positive, d_sizes,
                             d_replicates, d_fitness, d_mode, d_folds, d_pop, d_gens, d_mutation,
                             d_crossover, d_tournament, d_elitism, d_seed, d_workers, d_out,
                             d_plot, d_progress);
        if (cls->parsed())
            return run_classical(cls, c_config, c_input, c_label, c_delim, c_positive, c_seed,
                                 c_out);
        if (rep->parsed()) return run_report(rep, r_config, r_input, r_out, r_plot);
    } catch (const gadepth::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
