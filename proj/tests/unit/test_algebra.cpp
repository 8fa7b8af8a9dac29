#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "pushpull/insert_build.hpp"
#include "pushpull/interpreter.hpp"
#include "pushpull/invent.hpp"
#include "pushpull/objective.hpp"
#include "pushpull/term.hpp"
#include "pushpull/validate.hpp"
#include "test_support.hpp"

using namespace pushpull;
using namespace testsupport;

namespace {

double est(const char* text) { return estimate_complexity(*parse_term(text)); }

bool well_sorted(const Term& t) {
    const auto& sig = signature(t.op());
    if (t.ints().size() != sig.ints.size() || t.children().size() != sig.children.size()) return false;
    for (std::size_t k = 0; k < sig.ints.size(); ++k)
        if (t.arg(k) < sig.ints[k].lo || t.arg(k) > sig.ints[k].hi) return false;
    for (std::size_t k = 0; k < sig.children.size(); ++k) {
        if (t.child(k).sort() != sig.children[k] || !well_sorted(t.child(k))) return false;
    }
    if (t.op() == Op::forall && t.child(0).op() != Op::lds) return false;
    return true;
}

TermPtr then_chain(int parts) {
    std::vector<TermPtr> xs;
    for (int k = 0; k < parts; ++k) xs.push_back(make_chain(k + 1, 1));
    return make_then(xs);
}

}  // namespace

TEST_SUITE("algebra") {
    TEST_CASE("parser accepts the grammar") {
        const auto t = parse_term("DO(LDS(3,3,100),CHAIN(80,2))");
        CHECK(t->op() == Op::do_);
        CHECK(t->sort() == Sort::build);
        CHECK(t->child(0).op() == Op::lds);
        CHECK(t->child(0).ints() == std::vector<int>{3, 3, 100});
        CHECK(t->child(1).op() == Op::chain);
        CHECK(print_term(*parse_term("INSERT(3)")) == "INSERT(3)");
        CHECK(print_term(*parse_term("  DO( INSERT(2) ,\tCHAIN(80,2) ) ")) == "DO(INSERT(2),CHAIN(80,2))");
        CHECK(print_term(*parse_term("FORALL(LDS(0,4,100),LOOP(3,TREE(5,2)))")) ==
              "FORALL(LDS(0,4,100),LOOP(3,TREE(5,2,2)))");
    }

    TEST_CASE("THEN is variadic in text and binary in the tree") {
        const auto t = parse_term("THEN(CHAIN(1,1),CHAIN(2,1),CHAIN(3,1))");
        CHECK(t->op() == Op::then);
        CHECK(t->children().size() == 2);
        CHECK(t->child(0).op() == Op::chain);
        CHECK(t->child(1).op() == Op::then);
        CHECK(print_term(*t) == "THEN(CHAIN(1,1),CHAIN(2,1),CHAIN(3,1))");
        CHECK(*parse_term("THEN(CHAIN(1,1),THEN(CHAIN(2,1),CHAIN(3,1)))") == *t);
        // a left-nested THEN stays nested
        CHECK(print_term(*parse_term("THEN(THEN(CHAIN(1,1),CHAIN(2,1)),CHAIN(3,1))")) ==
              "THEN(THEN(CHAIN(1,1),CHAIN(2,1)),CHAIN(3,1))");
    }

    TEST_CASE("parser rejects malformed and ill-sorted terms") {
        // sort and arity errors carry the position of the offending sub-term
        CHECK_THROWS_WITH_AS(parse_term("FORALL(CHAIN(1,1),INSERT(0))"), doctest::Contains("position 7"), ParseError);
        CHECK_THROWS_WITH_AS(parse_term("FORALL(INSERT(1),CHAIN(1,1))"), doctest::Contains("LDS"), ParseError);
        CHECK_THROWS_AS(parse_term("DO(CHAIN(1,1),INSERT(0))"), ParseError);
        CHECK_THROWS_AS(parse_term("LNS(3,4,CHAIN(1,1))"), ParseError);
        CHECK_THROWS_WITH_AS(parse_term("INSERT(5)"), doctest::Contains("[0, 4]"), ParseError);
        CHECK_THROWS_AS(parse_term("CHAIN(3,3)"), ParseError);
        CHECK_THROWS_AS(parse_term("INSERT(1,2)"), ParseError);
        CHECK_THROWS_AS(parse_term("DO(INSERT(1))"), ParseError);
        CHECK_THROWS_AS(parse_term("THEN(CHAIN(1,1))"), ParseError);
        CHECK_THROWS_AS(make_forall(make_insert(1), make_chain(1, 1)), TermError);
        CHECK_THROWS_AS(make_term(Op::insert, {7}), TermError);
        CHECK_THROWS_AS(make_do(make_chain(1, 1), make_chain(1, 1)), TermError);
        CHECK_THROWS_AS(parse_term(""), ParseError);
        CHECK_THROWS_AS(parse_term("FOO(1)"), ParseError);
        CHECK_THROWS_AS(parse_term("INSERT(1"), ParseError);
        CHECK_THROWS_AS(parse_term("INSERT(1)x"), ParseError);
        CHECK_THROWS_AS(parse_term("INSERT(-1)"), ParseError);
        CHECK_THROWS_AS(parse_term("INSERT(99999999999999)"), ParseError);
        try {
            parse_term("DO(INSERT(2),)");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() == 13);
        }
    }

    TEST_CASE("term files skip comments and report line positions") {
        const auto terms = parse_term_file("# library\nINSERT(3)  # greedy\n\nDO(INSERT(0),CHAIN(5,1))\n");
        REQUIRE(terms.size() == 2);
        CHECK(print_term(*terms[1]) == "DO(INSERT(0),CHAIN(5,1))");
        CHECK_THROWS_AS(parse_term_file("INSERT(3)\nINSERT(\n"), ParseError);
        const auto shipped = load_term_file((data_dir() / "terms.txt").string());
        CHECK(shipped.size() >= 15);
        for (const auto& t : shipped) CHECK(t->sort() == Sort::build);
    }

    TEST_CASE("complexity formulas are exact") {
        for (int i = 0; i <= 4; ++i) CHECK(estimate_complexity(*make_insert(i)) == 1000);
        CHECK(est("INSERT(2)") == 1000);
        CHECK(est("LDS(4,3,7)") == 48000);
        CHECK(est("LDS(3,3,100)") == 8000);
        CHECK(est("LDS(0,0,0)") == 1000);
        CHECK(est("LDS(4,0,0)") == 6000);
        CHECK(est("CHAIN(80,2)") == 120000);
        CHECK(est("CHAIN(0,1)") == 0);
        CHECK(est("TREE(5,2,0)") == 3000);
        CHECK(est("TREE(40,2,2)") == 96000);
        CHECK(est("LNS(10,4,LDS(4,4,1000))") == 10 * 96000 / 100);
        CHECK(est("LNS(3,7,INSERT(1))") == 30);
        CHECK(est("DO(INSERT(2),CHAIN(80,2))") == 121000);
        CHECK(est("FORALL(LDS(0,4,100),LOOP(3,TREE(5,2)))") == 16000 + 3 * 12000);
        CHECK(est("THEN(CHAIN(1,1),CHAIN(2,1),CHAIN(3,1))") == 9000);
        CHECK(est("LOOP(3,CHAIN(20,2))") == 90000);
        CHECK(est("LOOP(2,TREE(40,2,2))") == 192000);
    }

    TEST_CASE("diet") {
        const auto small = parse_term("DO(INSERT(2),CHAIN(80,2))");
        CHECK(diet(small, 30) == small);

        const auto long_then = make_do(make_insert(1), then_chain(50));
        REQUIRE(long_then->size() == 101);
        const auto cut = diet(long_then, 20);
        CHECK(cut->size() <= 20);
        CHECK(cut->sort() == Sort::build);
        CHECK(well_sorted(*cut));
        CHECK(*parse_term(print_term(*cut)) == *cut);

        Rng rng(51);
        for (int k = 0; k < 500; ++k) {
            const auto t = invent_free(k % 2 ? Sort::build : Sort::optimize, rng);
            for (int bound : {1, 3, 7, 15, 30}) {
                const auto d = diet(t, bound);
                CHECK(d->sort() == t->sort());
                CHECK(well_sorted(*d));
                if (t->size() <= bound) CHECK(d == t);
                else CHECK(d->size() <= std::max(bound, 1));
            }
        }
    }

    TEST_CASE("printing and parsing round-trip invented terms") {
        Rng rng(52);
        for (int k = 0; k < 1000; ++k) {
            const auto t = invent_free(k % 3 ? Sort::build : Sort::optimize, rng);
            CHECK(well_sorted(*t));
            const auto text = print_term(*t);
            const auto back = parse_term(text);
            CHECK(*back == *t);
            CHECK(print_term(*back) == text);
        }
    }

    TEST_CASE("invented terms land in the complexity window") {
        Rng rng(53);
        int inside = 0;
        for (int k = 0; k < 1000; ++k) {
            const auto t = invent(Sort::build, 50000, rng);
            CHECK(well_sorted(*t));
            CHECK(t->sort() == Sort::build);
            const double c = estimate_complexity(*t);
            if (c >= 25000 && c <= 75000) ++inside;
        }
        CHECK(inside == 1000);

        // at goal 1000 the first build step is a greedy leaf, and CHAIN or
        // TREE can only appear inside an LNS rebuild, where they cost 1/100
        std::function<bool(const Term&)> cheap_outside_lns = [&](const Term& t) {
            if (t.op() == Op::chain || t.op() == Op::tree) return false;
            if (t.op() == Op::lns) return true;
            for (const auto& c : t.children())
                if (!cheap_outside_lns(*c)) return false;
            return true;
        };
        for (int k = 0; k < 500; ++k) {
            const auto t = invent(Sort::build, 1000, rng);
            const Term* head = t.get();
            while (head->op() == Op::do_ || head->op() == Op::forall) head = &head->child(0);
            CHECK((head->op() == Op::insert || (head->op() == Op::lds && head->arg(1) == 0)));
            CHECK(cheap_outside_lns(*t));
        }
        for (double goal : {1000.0, 5000.0, 200000.0}) {
            for (int k = 0; k < 200; ++k) {
                const auto b = invent(Sort::build, goal, rng);
                const auto o = invent(Sort::optimize, goal, rng);
                CHECK(within_goal(estimate_complexity(*b), goal));
                CHECK(within_goal(estimate_complexity(*o), goal));
                CHECK(o->sort() == Sort::optimize);
            }
        }
        CHECK(within_goal(estimate_complexity(*invent_direct(Sort::build, 50000)), 50000));
        CHECK(within_goal(estimate_complexity(*invent_direct(Sort::optimize, 50000)), 50000));
    }

    TEST_CASE("fit_complexity re-solves a count parameter") {
        const auto t = parse_term("DO(INSERT(3),LOOP(100,CHAIN(20,2)))");
        const auto fitted = fit_complexity(t, 50000);
        CHECK(within_goal(estimate_complexity(*fitted), 50000));
        CHECK(fitted->op() == Op::do_);
        const auto leaf = parse_term("INSERT(3)");
        CHECK(fit_complexity(leaf, 50000) == leaf);
        CHECK(!within_goal(1000, 50000));
        CHECK(within_goal(25000, 50000));
        CHECK(within_goal(75000, 50000));
    }

    TEST_CASE("running Build terms gives feasible complete solutions") {
        const auto inst = load_solomon(solomon_file("R104"));
        for (const char* text : {"INSERT(0)", "LDS(3,2,100)", "DO(INSERT(2),CHAIN(10,2))",
                                 "FORALL(LDS(1,2,1000),TREE(3,1,1))", "DO(LDS(3,1,100),LNS(10,4,INSERT(1)))",
                                 "DO(INSERT(3),THEN(LOOP(3,CHAIN(4,1)),LNS(5,2,LDS(2,1,50))))"}) {
            CAPTURE(text);
            EvalContext ctx(3);
            const auto rep = pushpull::run(*parse_term(text), inst, ctx);
            CHECK(validate(rep.solution).empty());
            CHECK(rep.solution.unassigned_count() == 0);
            CHECK(rep.value == doctest::Approx(objective(rep.solution, ctx)));
            CHECK(rep.insertions == ctx.insertions);
        }
    }

    TEST_CASE("the same seed gives the same run") {
        const auto inst = load_solomon(solomon_file("R102"));
        const auto t = parse_term("DO(LDS(3,1,100),LOOP(3,LNS(8,3,INSERT(2))))");
        EvalContext a(17), b(17), c(18);
        const auto ra = pushpull::run(*t, inst, a);
        const auto rb = pushpull::run(*t, inst, b);
        CHECK(ra.solution == rb.solution);
        CHECK(ra.insertions == rb.insertions);
        (void)pushpull::run(*t, inst, c);
    }

    TEST_CASE("Optimize terms need a base and never worsen it") {
        const auto inst = load_solomon(solomon_file("R106"));
        EvalContext ctx(4);
        const auto opt = parse_term("CHAIN(5,1)");
        CHECK_THROWS_AS(pushpull::run(*opt, inst, ctx), ContractViolation);

        Rng rng(54);
        for (int k = 0; k < 25; ++k) {
            EvalContext c(100 + k);
            const Solution base = insert_build(inst, c, k % 5);
            std::vector<StepEvent> steps;
            std::vector<std::string> ops;
            c.on_step = [&](const StepEvent& e) {
                steps.push_back(e);
                ops.emplace_back(e.op);
            };
            const auto t = invent(Sort::optimize, 3000, rng);
            CAPTURE(print_term(*t));
            Solution sol = base;
            const double before = objective(sol, c);
            // LOOP history, one entry per iteration
            std::vector<double> history{before};
            if (t->op() == Op::loop) {
                for (int i = 0; i < t->arg(0); ++i) {
                    optimize(t->child(0), sol, c);
                    history.push_back(objective(sol, c));
                }
            } else {
                optimize(*t, sol, c);
                history.push_back(objective(sol, c));
            }
            for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-7);
            for (std::size_t i = 0; i < steps.size(); ++i) {
                if (ops[i] == "ilo") continue;  // inside rebuilds, partial solutions
                CHECK(steps[i].after <= steps[i].before + 1e-7);
            }
            CHECK(validate(sol).empty());
        }
    }
}
