#include <doctest.h>

#include <xcore/propagate.hpp>

#include "oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace xcore;

TEST_CASE("DomainStore prunes, trails and restores")
{
    InstanceBuilder b("store");
    b.add_var("x", Domain({1, 3, 5, 7}));
    b.add_var("y", Domain({0, 1}));
    Instance inst = b.build();
    DomainStore store(inst);

    CHECK(store.n_vars() == 2);
    CHECK(store.size(0) == 4);
    CHECK(store.min(0) == 1);
    CHECK(store.max(0) == 7);
    CHECK(store.contains(0, 5));
    CHECK(! store.contains(0, 2));

    CHECK(store.remove(0, 2) == DomainStore::Prune::NoChange);
    CHECK(store.remove(0, 5) == DomainStore::Prune::Changed);
    CHECK(store.values(0) == std::vector<Value>{1, 3, 7});

    store.push_level();
    CHECK(store.tighten_lo(0, 3) == DomainStore::Prune::Changed);
    CHECK(store.tighten_hi(0, 6) == DomainStore::Prune::Changed);
    CHECK(store.values(0) == std::vector<Value>{3});
    CHECK(store.fixed(0));
    CHECK(store.value(0) == 3);

    store.push_level();
    CHECK(store.assign(1, 1) == DomainStore::Prune::Changed);
    CHECK(store.all_fixed());
    CHECK(store.assignment() == Assignment{3, 1});
    CHECK(store.remove(1, 1) == DomainStore::Prune::Empty);

    store.undo_level();
    CHECK(store.size(1) == 2);
    CHECK(store.values(0) == std::vector<Value>{3});
    store.undo_level();
    CHECK(store.values(0) == std::vector<Value>{1, 3, 7});

    store.take_touched();
    store.remove(0, 1);
    store.remove(0, 3);
    auto touched = store.take_touched();
    CHECK(touched == std::vector<int>{0});
    CHECK(store.take_touched().empty());
}

TEST_CASE("assign to an absent value empties the domain")
{
    InstanceBuilder b("absent");
    b.add_var("x", Domain({1, 2}));
    Instance inst = b.build();
    DomainStore store(inst);
    CHECK(store.assign(0, 9) == DomainStore::Prune::Empty);
}

TEST_CASE("propagators are sound and hit the completeness floor")
{
    std::mt19937_64 rng(4242);
    for (const auto & form : oracle::case_forms())
    {
        CAPTURE(form);
        for (int trial = 0; trial < 20; ++trial)
        {
            auto rc = oracle::random_case(form, rng);
            Instance inst = oracle::case_instance(rc);

            // supported values straight from the definition
            std::vector<std::set<Value>> keep(rc.vars.size());
            bool satisfiable = false;
            oracle::for_each_assignment(rc.vars, [&](const Assignment & a)
            {
                if (! oracle::reference_check(rc.constraint, a))
                    return;
                satisfiable = true;
                for (size_t i = 0; i < a.size(); ++i)
                    keep[i].insert(a[i]);
            });

            DomainStore store(inst);
            auto res = propagate_one(rc.constraint, store, 7);

            if (satisfiable)
            {
                CHECK(res.kind != PropagationResult::Kind::Inconsistent);
                for (size_t i = 0; i < keep.size(); ++i)
                    for (Value v : keep[i])
                        CHECK(store.contains(static_cast<int>(i), v));
            }
            else if (res.kind == PropagationResult::Kind::Inconsistent)
            {
                CHECK(res.failed_constraint == 7);
            }

            // completeness floor: on a total assignment the propagator and
            // the checker must agree
            DomainStore fixed(inst);
            int sampled = 0;
            oracle::for_each_assignment(rc.vars, [&](const Assignment & a)
            {
                if (++sampled > 12)
                    return;
                fixed.push_level();
                bool wiped = false;
                for (size_t i = 0; i < a.size(); ++i)
                    if (fixed.assign(static_cast<int>(i), a[i]) == DomainStore::Prune::Empty)
                        wiped = true;
                REQUIRE(! wiped);
                auto r = fixed.all_fixed() ? propagate_one(rc.constraint, fixed, 0)
                                           : PropagationResult::fixpoint();
                bool rejected = r.kind == PropagationResult::Kind::Inconsistent;
                CHECK(rejected == ! check_constraint(rc.constraint, a));
                fixed.undo_level();
            });
        }
    }
}

TEST_CASE("fixpoint chains prunings across constraints")
{
    InstanceBuilder b("chain");
    int x = b.add_var("x", Domain({0, 1, 2}));
    int y = b.add_var("y", Domain({0, 1, 2}));
    b.post(Constraint{CSum{{x, y}, {1, 1}, Cmp::Eq, ValOrVar::of_value(4)}});
    Instance inst = b.build();
    DomainStore store(inst);
    std::vector<Constraint> cs{inst.constraints[0].constraint};
    auto res = fixpoint(cs, store);
    CHECK(res.kind == PropagationResult::Kind::Fixpoint);
    CHECK(store.value(x) == 2);
    CHECK(store.value(y) == 2);

    InstanceBuilder c("cascade");
    int a0 = c.add_var("a0", Domain({0}));
    int a1 = c.add_var("a1", Domain({0, 1}));
    int a2 = c.add_var("a2", Domain({0, 1, 2}));
    c.post(Constraint{CAllDifferent{{a0, a1, a2}, {}}});
    Instance inst2 = c.build();
    DomainStore store2(inst2);
    std::vector<Constraint> cs2{inst2.constraints[0].constraint};
    auto res2 = fixpoint(cs2, store2);
    CHECK(res2.kind == PropagationResult::Kind::Fixpoint);
    CHECK(store2.value(a1) == 1);
    CHECK(store2.value(a2) == 2);
    auto touched = res2.touched;
    std::sort(touched.begin(), touched.end());
    CHECK(touched == std::vector<int>{a1, a2});
}

TEST_CASE("fixpoint reports the failing constraint")
{
    InstanceBuilder b("fail");
    int x = b.add_var("x", Domain({0}));
    int y = b.add_var("y", Domain({1}));
    b.post(Constraint{CSum{{x, y}, {1, 1}, Cmp::Eq, ValOrVar::of_value(9)}});
    b.post(Constraint{CAllEqual{{x, y}}});
    Instance inst = b.build();
    DomainStore store(inst);
    std::vector<Constraint> cs;
    for (const auto & pc : inst.constraints)
        cs.push_back(pc.constraint);
    auto res = fixpoint(cs, store);
    REQUIRE(res.kind == PropagationResult::Kind::Inconsistent);
    CHECK(res.failed_constraint == 0);  // FIFO order: the sum fails first
}

TEST_CASE("propagation undoes cleanly across levels")
{
    InstanceBuilder b("undo");
    int x = b.add_var("x", Domain({0, 1, 2, 3}));
    int y = b.add_var("y", Domain({0, 1, 2, 3}));
    b.post(Constraint{CIntension{ex_lt(ex_var(x), ex_var(y))}});
    Instance inst = b.build();
    DomainStore store(inst);
    std::vector<Constraint> cs{inst.constraints[0].constraint};

    REQUIRE(fixpoint(cs, store).kind == PropagationResult::Kind::Fixpoint);
    auto x_after = store.values(x);
    auto y_after = store.values(y);

    store.push_level();
    store.assign(x, x_after.back());
    fixpoint(cs, store, {0});
    store.undo_level();
    CHECK(store.values(x) == x_after);
    CHECK(store.values(y) == y_after);
}

TEST_CASE("instantiation propagator pins or fails")
{
    InstanceBuilder b("inst");
    int x = b.add_var("x", Domain({0, 1, 2}));
    int y = b.add_var("y", Domain({0, 1, 2}));
    b.post(Constraint{CInstantiation{{x, y}, {2, 0}}});
    Instance inst = b.build();
    DomainStore store(inst);
    auto res = propagate_one(inst.constraints[0].constraint, store, 3);
    CHECK(res.kind == PropagationResult::Kind::Changed);
    CHECK(store.assignment() == Assignment{2, 0});

    DomainStore store2(inst);
    Constraint off{CInstantiation{{x, y}, {2, 9}}};
    CHECK(propagate_one(off, store2, 3).kind == PropagationResult::Kind::Inconsistent);
}

TEST_CASE("the strength report names every form once")
{
    auto report = propagator_strength_report();
    CHECK(report.size() == 25);
    std::set<std::string> forms;
    for (const auto & e : report)
    {
        CHECK(! e.strength.empty());
        forms.insert(e.form);
    }
    CHECK(forms.size() == 25);
    CHECK(forms.count("allDifferent") == 1);
    CHECK(forms.count("slide") == 1);
}
