#include "pushpull/learning.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "pushpull/interpreter.hpp"
#include "pushpull/invent.hpp"

namespace pushpull {

// ---- evaluation -----------------------------------------------------------

Evaluator::Evaluator(std::vector<const Instance*> dataset, Mode mode, std::uint64_t seed, int jobs)
    : dataset_(std::move(dataset)), mode_(mode), seed_(seed), jobs_(std::max(1, jobs)) {
    PUSHPULL_EXPECTS(!dataset_.empty(), "evaluation needs at least one instance");
}

void Evaluator::run_once(const Term& t, std::uint64_t key, int r, Cached& out) {
    const std::size_t n = dataset_.size();
    std::vector<double> values(n);
    std::vector<std::uint64_t> counts(n);
    auto work = [&](std::size_t j) {
        EvalContext ctx(derive_seed(seed_, {key, static_cast<std::uint64_t>(r), j}), mode_);
        ctx.insertion_limit = insertion_limit_;
        const auto report = run(t, *dataset_[j], ctx);
        values[j] = report.value;
        counts[j] = report.insertions;
    };
    const auto jobs = static_cast<std::size_t>(jobs_);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t j = 0; j < n; ++j) work(j);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(jobs, n); ++w)
            pool.emplace_back([&, w] {
                for (std::size_t j = w; j < n; j += jobs) work(j);
            });
        for (auto& th : pool) th.join();
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    spent_ += total;
    out.values.push_back(mean);
    out.insertions.push_back(static_cast<double>(total) / static_cast<double>(n));
}

void Evaluator::set_insertion_limit(std::uint64_t limit) {
    if (limit == insertion_limit_) return;
    insertion_limit_ = limit;
    cache_.clear();
}

Evaluation Evaluator::evaluate(const Term& t, int runs) {
    PUSHPULL_EXPECTS(runs >= 1, "at least one run is needed");
    const std::string text = print_term(t);
    const std::uint64_t key = hash_text(text);
    Cached& cached = cache_[text];
    while (static_cast<int>(cached.values.size()) < runs) run_once(t, key, static_cast<int>(cached.values.size()), cached);

    Evaluation e;
    e.run_values.assign(cached.values.begin(), cached.values.begin() + runs);
    double sum = 0, sq = 0, ins = 0;
    e.worst = e.run_values.front();
    for (int r = 0; r < runs; ++r) {
        sum += e.run_values[r];
        sq += e.run_values[r] * e.run_values[r];
        ins += cached.insertions[r];
        e.worst = std::max(e.worst, e.run_values[r]);
    }
    e.value = sum / runs;
    e.sigma = std::sqrt(std::max(0.0, sq / runs - e.value * e.value));
    e.insertions = ins / runs;
    return e;
}

Evaluation evaluate_term(const Term& t, std::span<const Instance* const> dataset, Mode mode, std::uint64_t seed,
                         int runs) {
    Evaluator ev(std::vector<const Instance*>(dataset.begin(), dataset.end()), mode, seed);
    return ev.evaluate(t, runs);
}

double rerank_score(const Evaluation& e) noexcept { return (e.worst + e.value) / 2.0; }

std::vector<RankedTerm> rank_pool(std::span<const TermPtr> pool, Evaluator& ev, int k, int runs, int keep) {
    PUSHPULL_EXPECTS(k >= 1 && k <= static_cast<int>(pool.size()), "need 1 <= K <= pool size");
    std::vector<std::pair<double, std::size_t>> single;
    for (std::size_t i = 0; i < pool.size(); ++i) single.emplace_back(ev.evaluate(*pool[i], 1).value, i);
    std::stable_sort(single.begin(), single.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<std::size_t> chosen;
    for (int i = 0; i < k; ++i) chosen.push_back(single[static_cast<std::size_t>(i)].second);
    if (keep >= 0 && std::find(chosen.begin(), chosen.end(), static_cast<std::size_t>(keep)) == chosen.end())
        chosen.push_back(static_cast<std::size_t>(keep));

    std::vector<RankedTerm> out;
    for (std::size_t i : chosen) {
        auto e = ev.evaluate(*pool[i], runs);
        const double s = rerank_score(e);
        out.push_back(RankedTerm{pool[i], std::move(e), s});
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedTerm& x, const RankedTerm& y) { return x.score < y.score; });
    if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
    return out;
}

// ---- configuration --------------------------------------------------------

void LearningConfig::check() const {
    if (pool_size < 1 || mutation_parents < 0 || crossover_parents < 0 || excellent() < 1)
        throw std::invalid_argument("need M >= 1 and K >= 1");
    if (iterations < 1) throw std::invalid_argument("need N >= 1");
    if (runs_per_eval < 1) throw std::invalid_argument("need at least one run per evaluation");
    if (complexity_goal < 1000) throw std::invalid_argument("complexity goal must be at least 1000");
    if (diet_bound < 1) throw std::invalid_argument("diet bound must be at least 1");
    if (insertion_cap != 0 && insertion_cap < 1)
        throw std::invalid_argument("insertion cap must be 0 (off) or at least 1 times the goal");
    if (excellent() > pool_size) throw std::invalid_argument("K must not exceed M");
    if (inventions() < 0)
        throw std::invalid_argument("pool too small: need M >= 1 + " + std::to_string(mutations()) + " + " +
                                    std::to_string(crossovers()) + " (1 + mutations + crossovers), got M = " +
                                    std::to_string(pool_size));
}

LearningConfig learning_preset(std::string_view name) {
    LearningConfig c;
    auto shape = [&](int m, int km, int per, int kc) {
        c.pool_size = m;
        c.mutation_parents = km;
        c.mutations_per_parent = per;
        c.crossover_parents = kc;
    };
    if (name == "al2") shape(16, 3, 3, 3);
    else if (name == "am2") shape(16, 4, 3, 2);
    else if (name == "ag2") shape(16, 1, 1, 5);
    else if (name == "ai2") shape(16, 2, 3, 2);
    else if (name == "ap0") shape(10, 2, 3, 2);
    else if (name == "ap1") shape(35, 6, 3, 5);
    else if (name == "ap2") shape(24, 5, 3, 4);
    else throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    return c;
}

std::vector<std::string> learning_preset_names() { return {"al2", "am2", "ag2", "ai2", "ap0", "ap1", "ap2"}; }

// ---- learning loop --------------------------------------------------------

std::vector<TermPtr> random_pool(const LearningConfig& cfg, Rng& rng, int size) {
    std::vector<TermPtr> pool;
    for (int i = 0; i < size; ++i) pool.push_back(diet(invent(Sort::build, cfg.complexity_goal, rng), cfg.diet_bound));
    return pool;
}

std::vector<TermPtr> learning_iteration(std::span<const RankedTerm> ranked, const LearningConfig& cfg, Rng& rng) {
    PUSHPULL_EXPECTS(!ranked.empty(), "learning iteration needs a ranked pool");
    const MutationSettings ms{cfg.complexity_goal, cfg.diet_bound};
    std::vector<TermPtr> next{ranked.front().term};

    const auto parents = static_cast<std::size_t>(cfg.mutation_parents);
    for (std::size_t p = 0; p < parents; ++p) {
        const RankedTerm& r = ranked[std::min(p, ranked.size() - 1)];
        const bool too_small = r.eval.insertions < cfg.complexity_goal;
        for (int j = 0; j < cfg.mutations_per_parent; ++j) next.push_back(mutate(r.term, 1 + j % 3, too_small, rng, ms));
    }
    const auto crossing = std::min(static_cast<std::size_t>(cfg.crossover_parents), ranked.size());
    for (std::size_t a = 0; a < crossing; ++a)
        for (std::size_t b = a + 1; b < crossing; ++b) next.push_back(crossover(ranked[a].term, ranked[b].term, rng, ms));
    while (static_cast<int>(next.size()) < cfg.pool_size)
        next.push_back(diet(invent(Sort::build, cfg.complexity_goal, rng), cfg.diet_bound));
    next.resize(static_cast<std::size_t>(cfg.pool_size));
    return next;
}

namespace {

// Runs `iterations` learning iterations from `pool`; the first member of
// `pool` is treated as the elite. Returns the final ranking.
std::vector<RankedTerm> run_phase(std::vector<TermPtr> pool, int iterations, int round, const LearningConfig& cfg,
                                  Evaluator& ev, Rng& rng, std::vector<HistoryEntry>& history) {
    auto record = [&](int it, const std::vector<RankedTerm>& ranked) {
        const auto& best = ranked.front();
        history.push_back(HistoryEntry{round, it, best.score, best.eval.value, best.eval.insertions, print_term(*best.term)});
    };
    auto ranked = rank_pool(pool, ev, cfg.excellent(), cfg.runs_per_eval, 0);
    record(0, ranked);
    for (int it = 1; it <= iterations; ++it) {
        pool = learning_iteration(ranked, cfg, rng);
        ranked = rank_pool(pool, ev, cfg.excellent(), cfg.runs_per_eval, 0);
        record(it, ranked);
    }
    return ranked;
}

}  // namespace

LearningResult learning_run(const LearningConfig& cfg, Evaluator& ev) {
    cfg.check();
    ev.set_insertion_limit(cfg.insertion_cap > 0 ? static_cast<std::uint64_t>(cfg.insertion_cap * cfg.complexity_goal) : 0);
    Rng rng(derive_seed(cfg.seed, {0x6c6561726eULL}));
    LearningResult result;

    auto initial = random_pool(cfg, rng, cfg.pool_size);
    {
        const auto ranked0 = rank_pool(initial, ev, cfg.excellent(), cfg.runs_per_eval);
        result.initial_best = ranked0.front().term;
        result.initial_best_score = ranked0.front().score;
        // Start the phase with the elite first.
        auto it = std::find(initial.begin(), initial.end(), result.initial_best);
        std::rotate(initial.begin(), it, it + 1);
    }

    std::vector<RankedTerm> final_ranked;
    if (cfg.iterations < 24) {
        final_ranked = run_phase(std::move(initial), cfg.iterations, 0, cfg, ev, rng, result.history);
    } else {
        const int rounds = cfg.iterations / 12;
        std::vector<TermPtr> winners;
        for (int r = 0; r < rounds; ++r) {
            std::vector<TermPtr> pool = r == 0 ? std::move(initial) : random_pool(cfg, rng, cfg.pool_size);
            if (r > 0) {
                const auto ranked0 = rank_pool(pool, ev, cfg.excellent(), cfg.runs_per_eval);
                auto it = std::find(pool.begin(), pool.end(), ranked0.front().term);
                std::rotate(pool.begin(), it, it + 1);
            }
            const auto ranked = run_phase(std::move(pool), 10, r, cfg, ev, rng, result.history);
            winners.push_back(ranked.front().term);
        }
        std::vector<TermPtr> pool = winners;
        if (static_cast<int>(pool.size()) > cfg.pool_size) pool.resize(static_cast<std::size_t>(cfg.pool_size));
        auto extra = random_pool(cfg, rng, cfg.pool_size - static_cast<int>(pool.size()));
        pool.insert(pool.end(), extra.begin(), extra.end());
        const auto ranked0 = rank_pool(pool, ev, cfg.excellent(), cfg.runs_per_eval);
        auto it = std::find(pool.begin(), pool.end(), ranked0.front().term);
        std::rotate(pool.begin(), it, it + 1);
        final_ranked = run_phase(std::move(pool), cfg.iterations - 10 * rounds, rounds, cfg, ev, rng, result.history);
    }
    result.best = final_ranked.front().term;
    result.best_eval = final_ranked.front().eval;
    result.best_score = final_ranked.front().score;
    return result;
}

// ---- statistics and output --------------------------------------------------

TermStats aggregate_stats(std::span<const double> values, std::span<const double> sigmas) {
    PUSHPULL_EXPECTS(!values.empty(), "statistics need at least one value");
    TermStats s;
    s.values.assign(values.begin(), values.end());
    s.sigmas.assign(sigmas.begin(), sigmas.end());
    const double n = static_cast<double>(values.size());
    double sum = 0, sq = 0;
    for (double v : values) {
        sum += v;
        sq += v * v;
    }
    s.mean = sum / n;
    s.deviation = std::sqrt(std::max(0.0, sq / n - s.mean * s.mean));
    if (!sigmas.empty()) s.mean_sigma = std::accumulate(sigmas.begin(), sigmas.end(), 0.0) / static_cast<double>(sigmas.size());
    return s;
}

void write_history_csv(std::ostream& out, std::span<const HistoryEntry> history) {
    out << "round,iteration,best_value,best_score,insertions,best_term\n";
    for (const auto& h : history) {
        out << h.round << ',' << h.iteration << ',' << h.best_value << ',' << h.best_score << ',' << h.insertions << ",\""
            << h.best_term << "\"\n";
    }
}

void append_term_library(const std::string& path, const Term& t, const std::string& comment) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open term library " + path);
    out << print_term(t);
    if (!comment.empty()) out << "  # " << comment;
    out << '\n';
}

}  // namespace pushpull
