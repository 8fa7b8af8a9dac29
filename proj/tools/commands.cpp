#include "commands.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pushpull/interpreter.hpp"
#include "pushpull/learning.hpp"
#include "pushpull/objective.hpp"
#include "pushpull/solomon.hpp"
#include "pushpull/solution_io.hpp"
#include "pushpull/term.hpp"
#include "pushpull/validate.hpp"

#ifndef PUSHPULL_DEFAULT_EOPT
#define PUSHPULL_DEFAULT_EOPT ""
#endif

namespace pushpull::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

bool has_glob(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

struct Dataset {
    std::vector<fs::path> files;
    std::vector<std::unique_ptr<Instance>> instances;

    std::vector<const Instance*> pointers() const {
        std::vector<const Instance*> out;
        for (const auto& p : instances) out.push_back(p.get());
        return out;
    }
};

Instance load_instance(const fs::path& file) {
    try {
        return load_solomon(file);
    } catch (const ParseFileError& e) {
        throw DataError(file.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(file.string() + ": " + e.what());
    }
}

Dataset load_dataset(const std::vector<std::string>& specs, Mode mode, const std::string& eopt_file) {
    Dataset ds;
    ds.files = expand_dataset(specs);
    if (ds.files.empty()) throw UsageError("empty dataset: --data matched no files");
    for (const auto& f : ds.files) ds.instances.push_back(std::make_unique<Instance>(load_instance(f)));
    if (mode == Mode::trucks) {
        std::string path = eopt_file.empty() ? PUSHPULL_DEFAULT_EOPT : eopt_file;
        if (path.empty()) throw UsageError("trucks mode needs --eopt-file");
        if (!fs::exists(path)) throw DataError("target table not found: " + path);
        TargetTable table;
        try {
            table = load_target_table(path);
        } catch (const ParseFileError& e) {
            throw DataError(path + ": " + e.what());
        }
        for (auto& inst : ds.instances) {
            auto it = table.find(inst->id());
            if (it == table.end()) throw DataError("no target route count for " + inst->id() + " in " + path);
            inst->set_target_routes(it->second);
        }
    }
    return ds;
}

Mode mode_option(const std::string& text) {
    try {
        return parse_mode(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

TermPtr term_option(const std::string& text, const std::string& file) {
    if (!text.empty() && !file.empty()) throw UsageError("give either --term or --term-file, not both");
    if (text.empty() && file.empty()) throw UsageError("a term is required (--term or --term-file)");
    if (!text.empty()) return parse_term(text);
    if (!fs::exists(file)) throw DataError("term file not found: " + file);
    auto terms = load_term_file(file);
    if (terms.empty()) throw DataError("term file holds no term: " + file);
    return terms.front();
}

// Writes the report to --out when given, else to the command's stream.
void emit(const std::string& report, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << report;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw DataError("cannot write " + out_path);
    f << report;
}

// Runs `count` tasks on up to `jobs` threads.
template <class F>
void parallel_for(int count, int jobs, F&& task) {
    jobs = std::clamp(jobs, 1, std::max(1, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i; (i = next++) < count;) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---- solve --------------------------------------------------------------

struct SolveOptions {
    std::vector<std::string> data;
    std::string term, term_file, mode = "travel", eopt_file, out, format = "csv", solutions;
    std::uint64_t seed = 1;
    int jobs = 1;
    int runs = 1;
};

struct SolveRow {
    std::string instance;
    int run = 0;
    int routes = 0;
    double travel = 0;
    double value = 0;
    std::uint64_t insertions = 0;
    int unassigned = 0;
    int violations = 0;
    double seconds = 0;
    std::string solution_json;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
    const Mode mode = mode_option(o.mode);
    const TermPtr term = term_option(o.term, o.term_file);
    if (term->sort() != Sort::build) throw UsageError("solve needs a Build term, got " + print_term(*term));
    if (o.runs < 1) throw UsageError("--runs must be at least 1");
    const Dataset ds = load_dataset(o.data, mode, o.eopt_file);
    const std::string canonical = print_term(*term);
    const auto key = hash_text(canonical);
    const int n = static_cast<int>(ds.instances.size());

    std::vector<SolveRow> rows(static_cast<std::size_t>(n * o.runs));
    parallel_for(n * o.runs, o.jobs, [&](int task) {
        const int j = task / o.runs;
        const int r = task % o.runs;
        const Instance& inst = *ds.instances[static_cast<std::size_t>(j)];
        EvalContext ctx(derive_seed(o.seed, {key, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(j)}), mode);
        const auto rep = pushpull::run(*term, inst, ctx);
        const auto b = evaluate(rep.solution, ctx);
        SolveRow& row = rows[static_cast<std::size_t>(task)];
        row.instance = inst.id();
        row.run = r;
        row.routes = b.routes;
        row.travel = b.travel;
        row.value = b.value;
        row.insertions = rep.insertions;
        row.unassigned = b.unassigned;
        row.violations = static_cast<int>(validate(rep.solution).size());
        row.seconds = rep.wall_time;
        if (!o.solutions.empty() && r == 0)
            row.solution_json = solution_to_json(rep.solution, ctx, RunMeta{canonical, o.seed, rep.insertions});
    });

    double routes = 0, travel = 0, value = 0, insertions = 0, seconds = 0;
    int violations = 0, unassigned = 0;
    for (const auto& row : rows) {
        routes += row.routes;
        travel += row.travel;
        value += row.value;
        insertions += static_cast<double>(row.insertions);
        seconds += row.seconds;
        violations += row.violations;
        unassigned += row.unassigned;
    }
    const double count = static_cast<double>(rows.size());
    routes /= count, travel /= count, value /= count, insertions /= count;

    if (!o.solutions.empty()) {
        fs::create_directories(o.solutions);
        for (const auto& row : rows) {
            if (row.run != 0) continue;
            std::ofstream f(fs::path(o.solutions) / (row.instance + ".json"), std::ios::binary);
            if (!f) throw DataError("cannot write into " + o.solutions);
            f << row.solution_json << '\n';
        }
    }

    std::ostringstream report;
    if (o.format == "json") {
        json doc;
        doc["version"] = std::string(kVersion);
        doc["command"] = "solve";
        doc["seed"] = o.seed;
        doc["mode"] = std::string(to_string(mode));
        doc["term"] = canonical;
        doc["runs"] = o.runs;
        doc["results"] = json::array();
        for (const auto& row : rows) {
            doc["results"].push_back({{"instance", row.instance},
                                      {"run", row.run},
                                      {"routes", row.routes},
                                      {"travel", row.travel},
                                      {"value", row.value},
                                      {"insertions", row.insertions},
                                      {"unassigned", row.unassigned},
                                      {"violations", row.violations}});
        }
        doc["mean"] = {{"routes", routes}, {"travel", travel}, {"value", value}, {"insertions", insertions}};
        report << doc.dump(2) << '\n';
    } else {
        report << "# pushpull " << kVersion << " solve seed=" << o.seed << " mode=" << to_string(mode)
               << " runs=" << o.runs << " term=" << canonical << '\n';
        report << "instance,run,routes,travel,value,insertions,unassigned,violations\n";
        for (const auto& row : rows) {
            report << row.instance << ',' << row.run << ',' << row.routes << ',' << fmt(row.travel) << ','
                   << fmt(row.value) << ',' << row.insertions << ',' << row.unassigned << ',' << row.violations
                   << '\n';
        }
        report << "MEAN,," << fmt(routes) << ',' << fmt(travel) << ',' << fmt(value) << ',' << fmt(insertions, 1)
               << ',' << unassigned << ',' << violations << '\n';
    }
    emit(report.str(), o.out, out);

    err << n << " instances x " << o.runs << " runs: value " << fmt(value, 1) << ", routes " << fmt(routes, 2)
        << ", insertions " << fmt(insertions, 0) << ", " << fmt(seconds, 2) << "s\n";
    if (violations > 0) {
        err << "error: " << violations << " constraint violations in emitted solutions\n";
        return kValidationFailure;
    }
    return kOk;
}

// ---- learn --------------------------------------------------------------

struct LearnOptions {
    std::vector<std::string> data;
    std::string mode = "travel", eopt_file, out, format = "csv", preset = "al2", history, library;
    std::uint64_t seed = 1;
    int jobs = 1;
    int runs = -1;
    int iterations = -1;
    int pool = -1;
    int excellent = -1;
    double goal = -1;
    double cap = -1;
    int repeats = 1;
};

struct RepeatRow {
    int repeat = 0;
    std::uint64_t seed = 0;
    LearningResult result;
    std::uint64_t spent = 0;
    double seconds = 0;
};

int cmd_learn(const LearnOptions& o, std::ostream& out, std::ostream& err) {
    const Mode mode = mode_option(o.mode);
    LearningConfig cfg;
    try {
        cfg = learning_preset(o.preset);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (o.pool >= 0) cfg.pool_size = o.pool;
    if (o.excellent >= 0) cfg.set_excellent(o.excellent);
    if (o.iterations >= 0) cfg.iterations = o.iterations;
    if (o.goal >= 0) cfg.complexity_goal = o.goal;
    if (o.runs >= 0) cfg.runs_per_eval = o.runs;
    if (o.cap >= 0) cfg.insertion_cap = o.cap;
    if (o.repeats < 1) throw UsageError("--repeats must be at least 1");
    try {
        cfg.check();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("invalid learning configuration: ") + e.what());
    }
    const Dataset ds = load_dataset(o.data, mode, o.eopt_file);

    std::vector<RepeatRow> rows;
    for (int l = 0; l < o.repeats; ++l) {
        RepeatRow row;
        row.repeat = l;
        row.seed = l == 0 ? o.seed : derive_seed(o.seed, {static_cast<std::uint64_t>(l)});
        LearningConfig c = cfg;
        c.seed = row.seed;
        Evaluator ev(ds.pointers(), mode, row.seed, o.jobs);
        const auto t0 = std::chrono::steady_clock::now();
        row.result = learning_run(c, ev);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.spent = ev.insertions_spent();
        err << "repeat " << l << ": value " << fmt(row.result.best_eval.value, 1) << " (initial best score "
            << fmt(row.result.initial_best_score, 1) << "), " << fmt(row.seconds, 1) << "s  "
            << print_term(*row.result.best) << '\n';
        rows.push_back(std::move(row));
    }

    std::vector<double> values, sigmas;
    for (const auto& r : rows) {
        values.push_back(r.result.best_eval.value);
        sigmas.push_back(r.result.best_eval.sigma);
    }
    const auto stats = aggregate_stats(values, sigmas);
    const auto best = std::min_element(rows.begin(), rows.end(), [](const RepeatRow& a, const RepeatRow& b) {
        return a.result.best_eval.value < b.result.best_eval.value;
    });
    const std::string best_text = print_term(*best->result.best);

    if (!o.history.empty()) {
        std::ofstream h(o.history, std::ios::binary);
        if (!h) throw DataError("cannot write " + o.history);
        h << "repeat,round,iteration,best_value,best_score,insertions,best_term\n";
        for (const auto& r : rows) {
            for (const auto& e : r.result.history) {
                h << r.repeat << ',' << e.round << ',' << e.iteration << ',' << fmt(e.best_value) << ','
                  << fmt(e.best_score) << ',' << fmt(e.insertions, 1) << ',' << csv_quote(e.best_term) << '\n';
            }
        }
    }
    if (!o.library.empty()) {
        append_term_library(o.library, *best->result.best,
                            "value=" + fmt(best->result.best_eval.value, 1) + " mode=" + std::string(to_string(mode)) +
                                " goal=" + fmt(cfg.complexity_goal, 0) + " seed=" + std::to_string(best->seed));
    }

    std::ostringstream report;
    if (o.format == "json") {
        json doc;
        doc["version"] = std::string(kVersion);
        doc["command"] = "learn";
        doc["seed"] = o.seed;
        doc["mode"] = std::string(to_string(mode));
        doc["preset"] = o.preset;
        doc["config"] = {{"pool", cfg.pool_size},
                         {"mutation_parents", cfg.mutation_parents},
                         {"mutations_per_parent", cfg.mutations_per_parent},
                         {"crossover_parents", cfg.crossover_parents},
                         {"iterations", cfg.iterations},
                         {"complexity_goal", cfg.complexity_goal},
                         {"insertion_cap", cfg.insertion_cap},
                         {"runs_per_eval", cfg.runs_per_eval},
                         {"diet_bound", cfg.diet_bound}};
        doc["instances"] = static_cast<int>(ds.instances.size());
        doc["repeats"] = json::array();
        for (const auto& r : rows) {
            doc["repeats"].push_back({{"repeat", r.repeat},
                                      {"seed", r.seed},
                                      {"value", r.result.best_eval.value},
                                      {"sigma", r.result.best_eval.sigma},
                                      {"score", r.result.best_score},
                                      {"initial_score", r.result.initial_best_score},
                                      {"initial_term", print_term(*r.result.initial_best)},
                                      {"term_insertions", r.result.best_eval.insertions},
                                      {"insertions_spent", r.spent},
                                      {"term", print_term(*r.result.best)}});
        }
        doc["E(v)"] = stats.mean;
        doc["sigma(v)"] = stats.deviation;
        doc["E(sigma)"] = stats.mean_sigma;
        doc["best_term"] = best_text;
        report << doc.dump(2) << '\n';
    } else {
        report << "# pushpull " << kVersion << " learn seed=" << o.seed << " mode=" << to_string(mode)
               << " preset=" << o.preset << " M=" << cfg.pool_size << " Km=" << cfg.mutation_parents
               << " Kc=" << cfg.crossover_parents << " N=" << cfg.iterations << " goal=" << fmt(cfg.complexity_goal, 0) << " cap=" << fmt(cfg.insertion_cap, 0)
               << " runs=" << cfg.runs_per_eval << " repeats=" << o.repeats
               << " instances=" << ds.instances.size() << '\n';
        report << "repeat,seed,value,sigma,score,initial_score,term_insertions,insertions_spent,term\n";
        for (const auto& r : rows) {
            report << r.repeat << ',' << r.seed << ',' << fmt(r.result.best_eval.value) << ','
                   << fmt(r.result.best_eval.sigma) << ',' << fmt(r.result.best_score) << ','
                   << fmt(r.result.initial_best_score) << ',' << fmt(r.result.best_eval.insertions, 1) << ','
                   << r.spent << ',' << csv_quote(print_term(*r.result.best)) << '\n';
        }
        report << "# E(v)=" << fmt(stats.mean) << " sigma(v)=" << fmt(stats.deviation)
               << " E(sigma)=" << fmt(stats.mean_sigma) << '\n';
        report << "# best_term=" << best_text << '\n';
    }
    emit(report.str(), o.out, out);
    err << "E(v) " << fmt(stats.mean, 1) << "  sigma(v) " << fmt(stats.deviation, 1) << "  E(sigma) "
        << fmt(stats.mean_sigma, 1) << '\n';
    return kOk;
}

// ---- estimate -----------------------------------------------------------

struct EstimateOptions {
    std::string positional, term, term_file, format = "csv", out;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out, std::ostream&) {
    std::vector<TermPtr> terms;
    const int given = !o.positional.empty() + !o.term.empty() + !o.term_file.empty();
    if (given != 1) throw UsageError("estimate takes exactly one of TERM, --term or --term-file");
    if (!o.term_file.empty()) {
        if (!fs::exists(o.term_file)) throw DataError("term file not found: " + o.term_file);
        terms = load_term_file(o.term_file);
    } else {
        terms.push_back(parse_term(o.positional.empty() ? o.term : o.positional));
    }
    std::ostringstream report;
    if (o.format == "json") {
        json doc = json::array();
        for (const auto& t : terms)
            doc.push_back({{"term", print_term(*t)}, {"complexity", estimate_complexity(*t)}});
        report << doc.dump(2) << '\n';
    } else {
        report << "term,complexity\n";
        for (const auto& t : terms) report << csv_quote(print_term(*t)) << ',' << fmt(estimate_complexity(*t), 0) << '\n';
    }
    emit(report.str(), o.out, out);
    return kOk;
}

// ---- validate -----------------------------------------------------------

struct ValidateOptions {
    std::string solution, instance, format = "csv", out;
};

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
    if (!fs::exists(o.solution)) throw DataError("solution file not found: " + o.solution);
    if (!fs::exists(o.instance)) throw DataError("instance file not found: " + o.instance);
    std::ifstream f(o.solution, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    SolutionDocument doc;
    try {
        doc = parse_solution_json(buf.str());
    } catch (const SolutionFormatError& e) {
        throw DataError(o.solution + ": " + e.what());
    }
    const Instance inst = load_instance(o.instance);
    if (!doc.instance.empty() && doc.instance != inst.id())
        throw DataError("solution is for instance " + doc.instance + ", not " + inst.id());
    const auto violations = validate(inst, doc.plan);

    std::ostringstream report;
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& v : violations)
            arr.push_back({{"kind", std::string(to_string(v.kind))},
                           {"route", v.route},
                           {"customer", v.customer},
                           {"message", v.message}});
        json d;
        d["version"] = std::string(kVersion);
        d["instance"] = inst.id();
        d["violations"] = arr;
        report << d.dump(2) << '\n';
    } else {
        report << "kind,route,customer,message\n";
        for (const auto& v : violations)
            report << to_string(v.kind) << ',' << v.route << ',' << v.customer << ',' << csv_quote(v.message) << '\n';
    }
    emit(report.str(), o.out, out);
    if (violations.empty()) {
        err << inst.id() << ": feasible\n";
        return kOk;
    }
    err << inst.id() << ": " << violations.size() << " violations\n";
    return kValidationFailure;
}

}  // namespace

std::vector<fs::path> expand_dataset(const std::vector<std::string>& specs) {
    std::vector<fs::path> files;
    for (const auto& spec : specs) {
        if (has_glob(spec)) {
            glob_t g{};
            if (::glob(spec.c_str(), 0, nullptr, &g) == 0) {
                for (std::size_t i = 0; i < g.gl_pathc; ++i) {
                    fs::path p = g.gl_pathv[i];
                    if (fs::is_regular_file(p)) files.push_back(p);
                }
            }
            ::globfree(&g);
        } else if (fs::is_directory(spec)) {
            for (const auto& e : fs::directory_iterator(spec))
                if (e.is_regular_file()) files.push_back(e.path());
        } else if (fs::exists(spec)) {
            files.emplace_back(spec);
        } else {
            throw DataError("no such file: " + spec);
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"VRPTW heuristic workbench: run, learn, estimate and validate terms", "pushpull"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "run a Build term on a dataset");
    solve->add_option("--data", so.data, "instance files, directories or globs")->required();
    solve->add_option("--term", so.term, "term text");
    solve->add_option("--term-file", so.term_file, "file whose first term is run");
    solve->add_option("--mode", so.mode, "objective: travel|trucks")->check(CLI::IsMember({"travel", "trucks"}));
    solve->add_option("--eopt-file", so.eopt_file, "target route counts for trucks mode");
    solve->add_option("--seed", so.seed, "base seed");
    solve->add_option("--jobs", so.jobs, "worker threads")->check(CLI::PositiveNumber);
    solve->add_option("--runs", so.runs, "runs per instance")->check(CLI::PositiveNumber);
    solve->add_option("--out", so.out, "report file (default stdout)");
    solve->add_option("--format", so.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--solutions", so.solutions, "directory for run-0 solutions as JSON");

    LearnOptions lo;
    auto* learn = app.add_subcommand("learn", "learn a Build term on a dataset");
    learn->add_option("--data", lo.data, "instance files, directories or globs")->required();
    learn->add_option("--mode", lo.mode, "objective: travel|trucks")->check(CLI::IsMember({"travel", "trucks"}));
    learn->add_option("--eopt-file", lo.eopt_file, "target route counts for trucks mode");
    learn->add_option("--preset", lo.preset, "al2|am2|ag2|ai2|ap0|ap1|ap2");
    learn->add_option("--seed", lo.seed, "base seed");
    learn->add_option("--jobs", lo.jobs, "worker threads")->check(CLI::PositiveNumber);
    learn->add_option("--runs", lo.runs, "runs per evaluation")->check(CLI::PositiveNumber);
    learn->add_option("--iterations", lo.iterations, "learning iterations N")->check(CLI::NonNegativeNumber);
    learn->add_option("--pool", lo.pool, "pool size M")->check(CLI::PositiveNumber);
    learn->add_option("--excellent", lo.excellent, "number of excellent terms K")->check(CLI::PositiveNumber);
    learn->add_option("--complexity-goal", lo.goal, "insertions per run")->check(CLI::PositiveNumber);
    learn->add_option("--insertion-cap", lo.cap, "stop optimizing at this multiple of the goal (0: never)")
        ->check(CLI::NonNegativeNumber);
    learn->add_option("--repeats", lo.repeats, "independent learning runs L")->check(CLI::PositiveNumber);
    learn->add_option("--out", lo.out, "report file (default stdout)");
    learn->add_option("--format", lo.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    learn->add_option("--history", lo.history, "per-iteration history CSV");
    learn->add_option("--library", lo.library, "term library to append the best term to");

    EstimateOptions eo;
    auto* estimate = app.add_subcommand("estimate", "estimated insertions of a term");
    estimate->add_option("TERM", eo.positional, "term text");
    estimate->add_option("--term", eo.term, "term text");
    estimate->add_option("--term-file", eo.term_file, "one term per line");
    estimate->add_option("--format", eo.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    estimate->add_option("--out", eo.out, "report file (default stdout)");

    ValidateOptions vo;
    auto* val = app.add_subcommand("validate", "check an exported solution against its instance");
    val->add_option("--solution", vo.solution, "solution JSON")->required();
    val->add_option("--data", vo.instance, "instance file")->required();
    val->add_option("--format", vo.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    val->add_option("--out", vo.out, "report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) return cmd_solve(so, out, err);
        if (*learn) return cmd_learn(lo, out, err);
        if (*estimate) return cmd_estimate(eo, out, err);
        return cmd_validate(vo, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "term parse error " << e.what() << '\n';
        return kUsage;
    } catch (const TermError& e) {
        err << "term error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const ParseFileError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"pushpull"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pushpull::cli
