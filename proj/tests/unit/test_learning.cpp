#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "pushpull/invent.hpp"
#include "pushpull/primitives.hpp"
#include "pushpull/learning.hpp"
#include "pushpull/term.hpp"
#include "test_support.hpp"

using namespace pushpull;
using namespace testsupport;

namespace {

// Same operators at the same places; integers may differ.
bool same_shape(const Term& a, const Term& b) {
    if (a.op() != b.op() || a.children().size() != b.children().size()) return false;
    for (std::size_t k = 0; k < a.children().size(); ++k)
        if (!same_shape(a.child(k), b.child(k))) return false;
    return true;
}

bool contains_then(const Term& t) {
    if (t.op() == Op::then) return true;
    for (const auto& c : t.children())
        if (contains_then(*c)) return true;
    return false;
}

struct SmallDataset {
    std::vector<Instance> instances;
    std::vector<const Instance*> ptrs;
    explicit SmallDataset(int count, int customers = 12) {
        Rng rng(99);
        for (int k = 0; k < count; ++k) instances.push_back(random_instance(rng, RandomSpec{customers, 6, 40, 600, true}));
        for (const auto& i : instances) ptrs.push_back(&i);
    }
};

}  // namespace

TEST_SUITE("learning") {
    TEST_CASE("aggregate statistics on hand-computed fixtures") {
        const double v[] = {2, 4, 4, 4, 5, 5, 7, 9};
        const double s[] = {1, 2, 3};
        const auto st = aggregate_stats(v, s);
        CHECK(st.mean == 5.0);
        CHECK(st.deviation == 2.0);
        CHECK(st.mean_sigma == 2.0);

        const double one[] = {22703.5};
        const double one_sigma[] = {41.25};
        const auto single = aggregate_stats(one, one_sigma);
        CHECK(single.mean == 22703.5);
        CHECK(single.deviation == 0.0);
        CHECK(single.mean_sigma == 41.25);

        const double pair[] = {10, 20};
        const double none[] = {0, 0};
        const auto p = aggregate_stats(pair, none);
        CHECK(p.mean == 15.0);
        CHECK(p.deviation == 5.0);
        CHECK(p.mean_sigma == 0.0);
    }

    TEST_CASE("rerank score is the average of worst and mean") {
        Evaluation e;
        e.run_values = {10, 20, 30};
        e.value = 20;
        e.worst = 30;
        CHECK(rerank_score(e) == 25.0);
    }

    TEST_CASE("presets and pool decomposition") {
        struct Expect {
            const char* name;
            int m, km, per, kc;
        };
        for (const auto& x : {Expect{"al2", 16, 3, 3, 3}, Expect{"am2", 16, 4, 3, 2}, Expect{"ag2", 16, 1, 1, 5},
                              Expect{"ai2", 16, 2, 3, 2}, Expect{"ap0", 10, 2, 3, 2}, Expect{"ap1", 35, 6, 3, 5},
                              Expect{"ap2", 24, 5, 3, 4}}) {
            CAPTURE(x.name);
            const auto c = learning_preset(x.name);
            CHECK(c.pool_size == x.m);
            CHECK(c.mutation_parents == x.km);
            CHECK(c.mutations_per_parent == x.per);
            CHECK(c.crossover_parents == x.kc);
            CHECK(1 + c.mutations() + c.crossovers() + c.inventions() == c.pool_size);
            CHECK(c.inventions() >= 0);
            CHECK_NOTHROW(c.check());
        }
        const auto al2 = learning_preset("al2");
        CHECK(al2.mutations() == 9);
        CHECK(al2.crossovers() == 3);
        CHECK(al2.inventions() == 3);
        CHECK(learning_preset_names().size() == 7);
        CHECK_THROWS_AS(learning_preset("zz9"), std::invalid_argument);

        LearningConfig bad = al2;
        bad.pool_size = 12;  // 1 + 9 + 3 = 13 > 12
        CHECK_THROWS_WITH_AS(bad.check(), doctest::Contains("M >= 1 + 9 + 3"), std::invalid_argument);
        bad = al2;
        bad.set_excellent(4);  // 1 + 12 + 6 = 19 > 16
        CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    }

    TEST_CASE("mutate_then follows the listing") {
        Rng rng(61);
        const MutationSettings ms{50000, 30};
        const auto x = parse_term("THEN(CHAIN(10,1),LNS(5,3,INSERT(2)))");
        const Term& optim = x->child(0);
        const Term& post = x->child(1);

        // growing
        auto t = mutate_then(x, true, 1, 5, 50, rng, ms);  // y < 10: THEN(x, new optimizer)
        REQUIRE(t->op() == Op::then);
        CHECK(t->child(0) == *x);
        t = mutate_then(x, true, 2, 15, 50, rng, ms);  // y < 20: THEN(optim, LOOP(k, post))
        CHECK(t->child(0) == optim);
        REQUIRE(t->child(1).op() == Op::loop);
        CHECK(t->child(1).arg(0) >= 3);
        CHECK(t->child(1).arg(0) <= 10);
        CHECK(t->child(1).child(0) == post);
        t = mutate_then(x, true, 3, 25, 50, rng, ms);  // y < 30: THEN(LOOP(k, optim), post)
        REQUIRE(t->child(0).op() == Op::loop);
        CHECK(t->child(0).child(0) == optim);
        CHECK(t->child(1) == post);
        t = mutate_then(x, false, 1, 95, 0, rng, ms);  // y > 90 grows even when asked to shrink
        CHECK(t->op() == Op::then);

        // shrinking
        CHECK(*mutate_then(x, false, 3, 40, 50, rng, ms) == optim);
        CHECK(*mutate_then(x, false, 3, 60, 50, rng, ms) == post);
        CHECK(*mutate_then(x, false, 2, 5, 50, rng, ms) == optim);
        CHECK(*mutate_then(x, false, 2, 15, 50, rng, ms) == post);
        CHECK(*mutate_then(x, true, 2, 15, 10, rng, ms) == post);  // y2 <= 20 overrides growth
        t = mutate_then(x, false, 2, 30, 50, rng, ms);
        CHECK(t->op() == Op::then);
        t = mutate_then(x, false, 1, 5, 50, rng, ms);  // level 1 never drops a branch
        CHECK(t->op() == Op::then);
        CHECK(same_shape(*t, *x));
    }

    TEST_CASE("mutation keeps the sort and the size bound") {
        Rng rng(62);
        const MutationSettings ms{50000, 30};
        int in_window = 0, total = 0;
        for (int k = 0; k < 300; ++k) {
            const auto t = invent(Sort::build, 50000, rng);
            for (int level = 1; level <= 3; ++level) {
                const auto m = mutate(t, level, k % 2 == 0, rng, ms);
                CHECK(m->sort() == Sort::build);
                CHECK(m->size() <= 30);
                CHECK(*parse_term(print_term(*m)) == *m);
                ++total;
                in_window += within_goal(estimate_complexity(*m), 50000);
                if (level == 1 && !contains_then(*t) && t->size() <= 30) CHECK(same_shape(*m, *t));
            }
            const auto o = invent(Sort::optimize, 20000, rng);
            const auto mo = mutate(o, 1 + k % 3, true, rng, MutationSettings{20000, 30});
            CHECK(mo->sort() == Sort::optimize);
        }
        MESSAGE(in_window << " of " << total << " mutations inside the goal window");
        CHECK(in_window >= total * 8 / 10);
    }

    TEST_CASE("mutation is deterministic for a seed") {
        const auto t = parse_term("DO(LDS(3,2,100),LOOP(6,CHAIN(25,2)))");
        const MutationSettings ms{50000, 30};
        Rng a(7), b(7);
        for (int k = 0; k < 20; ++k) CHECK(*mutate(t, 1 + k % 3, k % 2, a, ms) == *mutate(t, 1 + k % 3, k % 2, b, ms));
    }

    TEST_CASE("crossover") {
        Rng rng(63);
        const MutationSettings ms{25000, 30};
        // same class: integer midpoints
        const auto mid = crossover(parse_term("CHAIN(10,1)"), parse_term("CHAIN(20,2)"), rng, ms);
        CHECK(print_term(*mid) == "CHAIN(15,2)");
        const auto lds = crossover(parse_term("LDS(1,2,100)"), parse_term("LDS(3,4,300)"), rng, MutationSettings{8000, 30});
        CHECK(print_term(*lds) == "LDS(2,3,200)");
        const auto dos = crossover(parse_term("DO(INSERT(1),CHAIN(10,1))"), parse_term("DO(INSERT(3),CHAIN(20,1))"), rng, ms);
        CHECK(print_term(*dos) == "DO(INSERT(2),CHAIN(15,1))");

        CHECK_THROWS_AS(crossover(parse_term("INSERT(1)"), parse_term("CHAIN(1,1)"), rng, ms), ContractViolation);

        const MutationSettings wide{50000, 30};
        for (int k = 0; k < 300; ++k) {
            const auto a = invent(Sort::build, 50000, rng);
            const auto b = invent(Sort::build, 50000, rng);
            const auto c = crossover(a, b, rng, wide);
            CHECK(c->sort() == Sort::build);
            CHECK(c->size() <= 30);
            CHECK(*parse_term(print_term(*c)) == *c);
        }
        const auto self = parse_term("DO(LDS(3,1,100),LOOP(5,LNS(10,4,INSERT(2))))");
        CHECK(*crossover(self, self, rng, MutationSettings{estimate_complexity(*self), 30}) == *self);
    }

    TEST_CASE("evaluator is deterministic, cached and thread-count independent") {
        SmallDataset ds(3);
        const auto t = parse_term("DO(INSERT(1),LNS(4,3,INSERT(2)))");
        Evaluator a(ds.ptrs, Mode::travel, 5, 1), b(ds.ptrs, Mode::travel, 5, 3);
        const auto ea = a.evaluate(*t, 4);
        const auto spent = a.insertions_spent();
        const auto again = a.evaluate(*t, 4);
        CHECK(a.insertions_spent() == spent);
        CHECK(again.run_values == ea.run_values);
        const auto eb = b.evaluate(*t, 4);
        CHECK(eb.run_values == ea.run_values);
        CHECK(ea.runs() == 4);

        double mean = 0, sq = 0, worst = -kInfinity;
        for (double v : ea.run_values) mean += v, sq += v * v, worst = std::max(worst, v);
        mean /= 4;
        CHECK(ea.value == doctest::Approx(mean));
        CHECK(ea.sigma == doctest::Approx(std::sqrt(std::max(0.0, sq / 4 - mean * mean))));
        CHECK(ea.worst == worst);
        CHECK(ea.insertions > 0);

        // extending the number of runs reuses the first ones
        const auto e6 = a.evaluate(*t, 6);
        for (int r = 0; r < 4; ++r) CHECK(e6.run_values[static_cast<std::size_t>(r)] == ea.run_values[static_cast<std::size_t>(r)]);

        Evaluator other_seed(ds.ptrs, Mode::travel, 6, 1);
        CHECK(other_seed.evaluate(*t, 4).run_values != ea.run_values);
    }

    TEST_CASE("rank_pool rescoring") {
        SmallDataset ds(2);
        Evaluator ev(ds.ptrs, Mode::travel, 3, 1);
        std::vector<TermPtr> pool{parse_term("INSERT(0)"), parse_term("INSERT(3)"), parse_term("DO(INSERT(3),CHAIN(20,2))"),
                                  parse_term("DO(LDS(3,2,100),LNS(6,4,INSERT(3)))"), parse_term("INSERT(1)")};
        const auto ranked = rank_pool(pool, ev, 2, 3);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked[0].score <= ranked[1].score);
        for (const auto& r : ranked) {
            CHECK(r.eval.runs() == 3);
            CHECK(r.score == doctest::Approx((r.eval.worst + r.eval.value) / 2));
        }
        // the best single run decides who gets rescored
        std::vector<double> single;
        for (const auto& t : pool) single.push_back(ev.evaluate(*t, 1).value);
        std::vector<std::size_t> order(pool.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return single[x] < single[y]; });
        for (const auto& r : ranked) CHECK((r.term == pool[order[0]] || r.term == pool[order[1]]));

        // `keep` competes on its full score
        const std::size_t worst = order.back();
        const auto with_keep = rank_pool(pool, ev, 2, 3, static_cast<int>(worst));
        CHECK(with_keep.size() == 2);
        CHECK(with_keep[0].score <= with_keep[1].score);
    }

    TEST_CASE("one learning iteration builds a pool of the right shape") {
        SmallDataset ds(2);
        Evaluator ev(ds.ptrs, Mode::travel, 8, 1);
        LearningConfig cfg = learning_preset("ap0");
        cfg.complexity_goal = 3000;
        cfg.runs_per_eval = 2;
        Rng rng(64);
        const auto pool = random_pool(cfg, rng, cfg.pool_size);
        REQUIRE(static_cast<int>(pool.size()) == cfg.pool_size);
        for (const auto& t : pool) CHECK(within_goal(estimate_complexity(*t), 3000));
        const auto ranked = rank_pool(pool, ev, cfg.excellent(), cfg.runs_per_eval);
        const auto next = learning_iteration(ranked, cfg, rng);
        CHECK(static_cast<int>(next.size()) == cfg.pool_size);
        CHECK(next.front() == ranked.front().term);
        for (const auto& t : next) {
            CHECK(t->sort() == Sort::build);
            CHECK(t->size() <= cfg.diet_bound);
        }
    }

    TEST_CASE("learning run: elite never lost within a phase") {
        SmallDataset ds(2);
        Evaluator ev(ds.ptrs, Mode::travel, 9, 1);
        LearningConfig cfg = learning_preset("ap0");
        cfg.iterations = 4;
        cfg.complexity_goal = 3000;
        cfg.runs_per_eval = 2;
        const auto res = learning_run(cfg, ev);
        REQUIRE(res.best);
        REQUIRE(res.initial_best);
        CHECK(res.history.size() == 5);
        CHECK(res.history.front().best_score == doctest::Approx(res.initial_best_score));
        for (std::size_t i = 1; i < res.history.size(); ++i)
            CHECK(res.history[i].best_score <= res.history[i - 1].best_score + 1e-9);
        CHECK(res.best_score <= res.initial_best_score + 1e-9);
        CHECK(res.best_eval.runs() == 2);

        std::ostringstream csv;
        write_history_csv(csv, res.history);
        const std::string text = csv.str();
        CHECK(text.rfind("round,iteration,best_value,best_score,insertions,best_term\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 6);
    }

    TEST_CASE("long learning runs split into rounds and a final phase") {
        SmallDataset ds(1, 8);
        Evaluator ev(ds.ptrs, Mode::travel, 10, 1);
        LearningConfig cfg = learning_preset("ap0");
        cfg.iterations = 25;
        cfg.complexity_goal = 1000;
        cfg.runs_per_eval = 1;
        const auto res = learning_run(cfg, ev);
        // R = 2 rounds of 10 iterations, then 5 more: each phase also logs its start
        int per_round[3] = {0, 0, 0};
        for (const auto& h : res.history) {
            REQUIRE(h.round >= 0);
            REQUIRE(h.round <= 2);
            ++per_round[h.round];
        }
        CHECK(per_round[0] == 11);
        CHECK(per_round[1] == 11);
        CHECK(per_round[2] == 6);
    }
}
