#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pushpull/insert_build.hpp"
#include "pushpull/local_opt.hpp"
#include "pushpull/primitives.hpp"
#include "pushpull/validate.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace pushpull;
using namespace testsupport;

namespace {

Plan normalized(Plan p) {
    p.erase(std::remove_if(p.begin(), p.end(), [](const auto& r) { return r.empty(); }), p.end());
    std::sort(p.begin(), p.end());
    return p;
}

double tour_length(const Instance& inst, const std::vector<int>& order) { return sequence_length(inst, order); }

}  // namespace

TEST_SUITE("local-opt") {
    TEST_CASE("best chain transfer equals relocation enumeration") {
        Rng rng(31);
        int mismatches = 0, instances = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{2 + static_cast<int>(rng.index(5)), 3, 30, 400, trial % 2 == 0});
            const Solution sol = random_solution(inst, rng, 0.9);
            if (sol.route_count() < 2) continue;
            ++instances;
            for (int max_chain = 1; max_chain <= 3; ++max_chain) {
                const auto oracle = enumerate_relocations(inst, sol.plan(), max_chain);
                const auto move = best_chain_transfer(sol, max_chain);
                if (!std::isfinite(oracle.delta)) {
                    if (move) ++mismatches;
                    continue;
                }
                if (!move || std::abs(move->delta - oracle.delta) > 1e-9) {
                    ++mismatches;
                    continue;
                }
                Solution applied = sol;
                const auto out = chain_transfer(applied, move->from, move->first, move->last, move->to, move->anchor);
                CHECK(out.applied == (move->delta < -kEpsilon));
                if (out.applied) {
                    CHECK(applied.total_length() - sol.total_length() == doctest::Approx(move->delta));
                    CHECK(validate(applied).empty());
                } else {
                    CHECK(applied == sol);
                }
            }
        }
        CHECK(instances >= 100);
        CHECK(mismatches == 0);
    }

    TEST_CASE("node transfer applies exactly the improving feasible relocations") {
        Rng rng(32);
        int mismatches = 0, moves = 0;
        for (int trial = 0; trial < 150; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{2 + static_cast<int>(rng.index(5)), 3, 30, 400, trial % 3 != 0});
            const Solution sol = random_solution(inst, rng, 0.9);
            const Plan plan = sol.plan();
            for (int r = 0; r < sol.route_slots(); ++r) {
                for (int y : plan[static_cast<std::size_t>(r)]) {
                    for (int to = 0; to < sol.route_slots(); ++to) {
                        if (to == r) continue;
                        for (int anchor = -1; anchor < sol.route(to).size(); ++anchor) {
                            Plan next = plan;
                            auto& src = next[static_cast<std::size_t>(r)];
                            src.erase(std::find(src.begin(), src.end(), y));
                            auto& dst = next[static_cast<std::size_t>(to)];
                            dst.insert(dst.begin() + (anchor + 1), y);
                            const bool ok = sequence_feasible(inst, src) && sequence_feasible(inst, dst);
                            const double d = plan_length(inst, next) - plan_length(inst, plan);
                            const bool expect = ok && d < -kEpsilon;

                            Solution trial_sol = sol;
                            const auto out = node_transfer(trial_sol, y, to, anchor);
                            ++moves;
                            if (out.applied != expect) {
                                ++mismatches;
                                continue;
                            }
                            if (expect) {
                                if (normalized(trial_sol.plan()) != normalized(next)) ++mismatches;
                                CHECK(out.delta == doctest::Approx(d));
                            } else if (!(trial_sol == sol)) {
                                ++mismatches;
                            }
                        }
                    }
                }
            }
        }
        CHECK(moves > 1000);
        CHECK(mismatches == 0);
    }

    TEST_CASE("two-edge exchange matches its definition") {
        Rng rng(33);
        int mismatches = 0;
        for (int trial = 0; trial < 150; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{6, 3, 40, 400, trial % 2 == 0});
            const Solution sol = random_solution(inst, rng, 0.95);
            if (sol.route_count() < 2) continue;
            const Plan plan = sol.plan();
            for (int a = 0; a < sol.route_slots(); ++a) {
                for (int b = 0; b < sol.route_slots(); ++b) {
                    if (a == b) continue;
                    const auto& ra = plan[static_cast<std::size_t>(a)];
                    const auto& rb = plan[static_cast<std::size_t>(b)];
                    for (int ca = 0; ca <= static_cast<int>(ra.size()); ++ca) {
                        for (int cb = 0; cb <= static_cast<int>(rb.size()); ++cb) {
                            Plan next = plan;
                            std::vector<int> na(ra.begin(), ra.begin() + ca);
                            na.insert(na.end(), rb.begin() + cb, rb.end());
                            std::vector<int> nb(rb.begin(), rb.begin() + cb);
                            nb.insert(nb.end(), ra.begin() + ca, ra.end());
                            next[static_cast<std::size_t>(a)] = na;
                            next[static_cast<std::size_t>(b)] = nb;
                            const double d = plan_length(inst, next) - plan_length(inst, plan);
                            const bool expect = sequence_feasible(inst, na) && sequence_feasible(inst, nb) && d < -kEpsilon;
                            Solution s = sol;
                            const auto out = two_opt_exchange(s, a, ca, b, cb);
                            if (out.applied != expect) ++mismatches;
                            else if (expect && normalized(s.plan()) != normalized(next)) ++mismatches;
                            else if (!expect && !(s == sol)) ++mismatches;
                        }
                    }
                }
            }
        }
        CHECK(mismatches == 0);
    }

    TEST_CASE("3-opt reaches the optimal 5-city tour in at least 90% of cases") {
        Rng rng(34);
        int optimal = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{5, 1, 100, 10000, false});
            std::vector<int> order{1, 2, 3, 4, 5};
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
            Solution sol(inst);
            sol.open_route(order);
            intra_route_3opt(sol, 0);
            CHECK(validate(sol).empty());

            std::vector<int> perm{1, 2, 3, 4, 5};
            double best = kInfinity;
            do best = std::min(best, tour_length(inst, perm));
            while (std::next_permutation(perm.begin(), perm.end()));
            CHECK(sol.total_length() >= best - 1e-9);
            if (sol.total_length() <= best + 1e-6) ++optimal;
        }
        MESSAGE("optimal in " << optimal << " of " << trials);
        CHECK(optimal >= trials * 9 / 10);
    }

    TEST_CASE("3-opt never breaks windows") {
        Rng rng(35);
        for (int trial = 0; trial < 200; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{6, 2});
            Solution sol = random_solution(inst, rng, 1.0);
            for (int r = 0; r < sol.route_slots(); ++r) {
                const double before = sol.total_length();
                const auto out = intra_route_3opt(sol, r);
                CHECK(sol.total_length() <= before + 1e-9);
                CHECK(out.delta == doctest::Approx(sol.total_length() - before));
                CHECK(validate(sol).empty());
            }
        }
    }

    TEST_CASE("greedy route optimization only shortens") {
        Rng rng(36);
        for (int trial = 0; trial < 200; ++trial) {
            const auto inst = random_instance(rng, RandomSpec{6, 3, 40, 400, trial % 2 == 0});
            Solution sol = random_solution(inst, rng, 1.0);
            if (sol.route_count() == 0) continue;
            const double before = sol.total_length();
            const int customers = inst.customers() - sol.unassigned_count();
            const auto out = greedy_route_optimization(sol, static_cast<int>(rng.index(static_cast<std::size_t>(sol.route_slots()))));
            CHECK(sol.total_length() <= before + 1e-9);
            CHECK(out.delta == doctest::Approx(sol.total_length() - before));
            CHECK(inst.customers() - sol.unassigned_count() == customers);
            CHECK(validate(sol).empty());
        }
    }

    TEST_CASE("improve_around keeps feasibility and never lengthens") {
        Rng rng(37);
        for (int level = 0; level <= 4; ++level) {
            for (int trial = 0; trial < 60; ++trial) {
                const auto inst = random_instance(rng, RandomSpec{6, 3, 30, 400, trial % 2 == 0});
                Solution sol = random_solution(inst, rng, 1.0);
                for (int u = 1; u <= inst.customers(); ++u) {
                    if (!sol.assigned(u)) continue;
                    const double before = sol.total_length();
                    EvalContext ctx(0);
                    improve_around(sol, u, level, ctx);
                    CHECK(sol.total_length() <= before + 1e-9);
                    CHECK(validate(sol).empty());
                }
            }
        }
    }

    TEST_CASE("insertion order is by due date then id") {
        std::vector<NodeData> nodes{{{0, 0}, 0, 0, 0, 100}, {{1, 0}, 1, 0, 0, 50}, {{2, 0}, 1, 0, 0, 20}, {{3, 0}, 1, 0, 0, 50}};
        const Instance inst("order", nodes, 10, 2);
        CHECK(insertion_order(inst, {1, 2, 3}) == std::vector<int>{2, 1, 3});
    }

    TEST_CASE("INSERT levels build feasible solutions on R1 instances") {
        for (const auto& id : {"R101", "R105", "R109"}) {
            const auto inst = load_solomon(solomon_file(id));
            for (int level = 0; level <= 4; ++level) {
                EvalContext ctx(0);
                const auto sol = insert_build(inst, ctx, level);
                CHECK(validate(sol).empty());
                CHECK(sol.unassigned_count() == 0);
                CHECK(ctx.insertions >= 300);
                CHECK(ctx.insertions <= 3000);
            }
        }
    }
}
