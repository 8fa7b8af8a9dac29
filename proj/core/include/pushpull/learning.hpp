#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "pushpull/common.hpp"
#include "pushpull/context.hpp"
#include "pushpull/instance.hpp"
#include "pushpull/term.hpp"

namespace pushpull {

// ---- mutation and crossover -------------------------------------------

struct MutationSettings {
    double goal = 50000;  // complexity goal, in insertions
    int diet_bound = 30;  // maximum term size
};

/// Probability of ignoring the grow/shrink guidance.
inline constexpr double kIgnoreGuidance = 0.10;

/// Mutation at level 1 (shallow: same structure, small integer steps),
/// 2 (same root class, large jumps, sub-terms may be re-invented) or
/// 3 (deep: whole sub-terms may be substituted). `too_small` asks for a
/// costlier term. Guided results are pulled back into the complexity window
/// (a few redraws, then `fit_complexity`); 10% of the draws ignore the
/// grow/shrink guidance but are fitted all the same. The result has the sort of `t` and
/// at most `diet_bound` nodes.
TermPtr mutate(const TermPtr& t, int level, bool too_small, Rng& rng, const MutationSettings& ms);

/// THEN-node mutation with explicit draws y in [0, 100/level) and y2 in
/// [0, 100). Children are mutated recursively with `rng`.
TermPtr mutate_then(const TermPtr& x, bool grow, int level, int y, int y2, Rng& rng, const MutationSettings& ms);

/// Structural midpoint of two terms of the same sort: integers meet at the
/// rounded midpoint, same classes cross field by field, and different
/// classes take one parent's class and fill its slots from compatible
/// sub-terms of the other. The result is re-fitted to the complexity goal.
/// Throws ContractViolation on a sort mismatch.
TermPtr crossover(const TermPtr& a, const TermPtr& b, Rng& rng, const MutationSettings& ms);

// ---- evaluation ---------------------------------------------------------

struct Evaluation {
    std::vector<double> run_values;  // dataset mean per run
    double value = 0;                // mean of run_values
    double sigma = 0;                // deviation of run_values
    double worst = 0;
    double insertions = 0;           // mean per instance and run

    int runs() const noexcept { return static_cast<int>(run_values.size()); }
};

/// Runs terms on a dataset. Run r of a term on instance j uses the seed
/// derive_seed(seed, {hash(canonical text), r, j}), so results depend only
/// on (seed, term, r, j) and are cached by canonical text.
class Evaluator {
  public:
    Evaluator(std::vector<const Instance*> dataset, Mode mode, std::uint64_t seed, int jobs = 1);

    /// Evaluation over runs 0..runs-1 (reusing cached runs).
    Evaluation evaluate(const Term& t, int runs);

    const std::vector<const Instance*>& dataset() const noexcept { return dataset_; }
    Mode mode() const noexcept { return mode_; }
    std::uint64_t seed() const noexcept { return seed_; }
    /// Caps every later run (see EvalContext::insertion_limit); clears the
    /// cache when the cap changes.
    void set_insertion_limit(std::uint64_t limit);
    std::uint64_t insertion_limit() const noexcept { return insertion_limit_; }

    /// Insertions spent by all runs so far (cache hits excluded).
    std::uint64_t insertions_spent() const noexcept { return spent_; }

  private:
    struct Cached {
        std::vector<double> values;
        std::vector<double> insertions;
    };
    void run_once(const Term& t, std::uint64_t key, int r, Cached& out);

    std::vector<const Instance*> dataset_;
    Mode mode_;
    std::uint64_t seed_;
    int jobs_;
    std::uint64_t spent_ = 0;
    std::uint64_t insertion_limit_ = 0;
    std::map<std::string, Cached> cache_;
};

/// Convenience wrapper: mean and deviation of `runs` runs.
Evaluation evaluate_term(const Term& t, std::span<const Instance* const> dataset, Mode mode, std::uint64_t seed,
                         int runs);

/// Re-ranking score: average of the worst and the mean run.
double rerank_score(const Evaluation& e) noexcept;

struct RankedTerm {
    TermPtr term;
    Evaluation eval;
    double score = 0;
};

/// Sorts the pool on one run, re-scores the best `k` (plus `keep`, when
/// given, so the elite is always compared on its full score) over `runs`
/// runs, and returns them ordered by rerank_score.
std::vector<RankedTerm> rank_pool(std::span<const TermPtr> pool, Evaluator& ev, int k, int runs, int keep = -1);

// ---- learning loop ------------------------------------------------------

struct LearningConfig {
    int pool_size = 16;           // M
    int mutation_parents = 3;     // excellent terms that get mutated
    int mutations_per_parent = 3; // levels 1, 2, 3 in turn
    int crossover_parents = 3;    // excellent terms crossed pairwise
    int iterations = 20;          // N
    double complexity_goal = 50000;
    int runs_per_eval = 10;
    /// Runs stop optimizing at this multiple of the goal (0: never). The
    /// estimate undercounts some shapes (FORALL runs its optimizer on every
    /// leaf), and one runaway term would otherwise dominate a learning run.
    double insertion_cap = 20;
    int diet_bound = 30;
    std::uint64_t seed = 1;

    /// K, the number of excellent terms.
    int excellent() const noexcept { return std::max(mutation_parents, crossover_parents); }
    int mutations() const noexcept { return mutation_parents * mutations_per_parent; }
    int crossovers() const noexcept { return crossover_parents * (crossover_parents - 1) / 2; }
    int inventions() const noexcept { return pool_size - 1 - mutations() - crossovers(); }
    /// Sets K for both mutation and crossover, the default shape.
    void set_excellent(int k) noexcept { mutation_parents = crossover_parents = k; }
    /// Throws std::invalid_argument naming the violated inequality.
    void check() const;
};

/// Named presets: al2, am2, ag2, ai2, ap0, ap1, ap2.
LearningConfig learning_preset(std::string_view name);
std::vector<std::string> learning_preset_names();

struct HistoryEntry {
    int round = 0;      // 0-based; the final phase after rounds is round R
    int iteration = 0;  // 0 = the starting pool
    double best_score = 0;
    double best_value = 0;
    double insertions = 0;
    std::string best_term;
};

struct LearningResult {
    TermPtr best;
    Evaluation best_eval;
    double best_score = 0;
    TermPtr initial_best;
    double initial_best_score = 0;
    std::vector<HistoryEntry> history;
};

/// Next pool: the elite, mutations of the best `mutation_parents`,
/// pairwise crossovers of the best `crossover_parents`, and inventions.
std::vector<TermPtr> learning_iteration(std::span<const RankedTerm> ranked, const LearningConfig& cfg, Rng& rng);

/// Random starting pool of Build terms at the complexity goal.
std::vector<TermPtr> random_pool(const LearningConfig& cfg, Rng& rng, int size);

/// Full learning run: one phase when N < 24, else R = N/12 rounds of 10
/// iterations and a final phase of N - 10R iterations seeded with the
/// round winners.
LearningResult learning_run(const LearningConfig& cfg, Evaluator& ev);

// ---- statistics and output ----------------------------------------------

struct TermStats {
    std::vector<double> values;
    std::vector<double> sigmas;
    double mean = 0;        // E(v)
    double deviation = 0;   // sigma(v)
    double mean_sigma = 0;  // E(sigma)
};

/// E(v) = mean(v), sigma(v) = sqrt(mean(v^2) - E(v)^2), E(sigma) = mean(sigma_i).
TermStats aggregate_stats(std::span<const double> values, std::span<const double> sigmas);

/// CSV with header round,iteration,best_value,best_score,insertions,best_term.
void write_history_csv(std::ostream& out, std::span<const HistoryEntry> history);

/// Appends "term # comment" to a term library file.
void append_term_library(const std::string& path, const Term& t, const std::string& comment);

}  // namespace pushpull
