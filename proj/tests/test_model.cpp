#include <catch2/catch_amalgamated.hpp>

#include "denorm/denorm.hpp"
#include "fixtures.hpp"

using namespace denorm;
using denorm_test::make_row;
using denorm_test::tpcc_root;

TEST_CASE("root fixture validates cleanly") {
    REQUIRE(validate(tpcc_root()).empty());
}

TEST_CASE("dangling reference is reported") {
    DataModel m = tpcc_root();
    m.references.push_back({"O", "c_o_ID", "District", "d_ID", 1});
    auto violations = validate(m);
    REQUIRE_FALSE(violations.empty());
    bool found = false;
    for (const auto& v : violations)
        if (v.message.find("dangling reference") != std::string::npos) found = true;
    REQUIRE(found);
}

TEST_CASE("reference to a removed row is reported") {
    DataModel m = tpcc_root();
    m.concepts.erase(m.concepts.begin());  // drops W; C->W now dangles
    auto violations = validate(m);
    REQUIRE_FALSE(violations.empty());
}

TEST_CASE("cyclic nesting is reported") {
    // A row named X that transitively contains a nested row named X.
    Row inner = make_row("X", 1, {{"x_id", 8}, {"x_a", 4}});
    Row middle = make_row("Y", 2, {{"y_id", 8}});
    KeyValue nested_inner;
    nested_inner.name = "X";
    nested_inner.nested = std::make_shared<const Row>(inner);
    middle.keys.push_back(nested_inner);
    Row outer = make_row("X", 1, {{"x_id", 8}, {"x_a", 4}});
    KeyValue nested_middle;
    nested_middle.name = "Y";
    nested_middle.nested = std::make_shared<const Row>(middle);
    outer.keys.push_back(nested_middle);

    DataModel m;
    m.concepts.push_back({"C0", {outer}});
    auto violations = validate(m);
    bool found = false;
    for (const auto& v : violations)
        if (v.message.find("cyclic nesting") != std::string::npos) found = true;
    REQUIRE(found);
}

TEST_CASE("missing and non-atomic primary keys are reported") {
    Row no_pk = make_row("A", 1, {{"a_id", 8}, {"a_k", 4}});
    no_pk.primary_key = "ghost";
    DataModel m;
    m.concepts.push_back({"C0", {no_pk}});
    REQUIRE_FALSE(validate(m).empty());

    DataModel m2;
    Row r = make_row("B", 1, {{"b_id", 8}});
    KeyValue complex_key;
    complex_key.name = "nested";
    complex_key.nested = std::make_shared<const Row>(make_row("N", 2, {{"n_id", 8}}));
    r.keys.push_back(complex_key);
    r.primary_key = "nested";
    m2.concepts.push_back({"C0", {r}});
    bool found = false;
    for (const auto& v : validate(m2))
        if (v.message.find("not atomic") != std::string::npos) found = true;
    REQUIRE(found);
}

TEST_CASE("duplicate key and row names are reported") {
    DataModel m = tpcc_root();
    m.concepts[0].rows[0].keys.push_back(m.concepts[0].rows[0].keys[1]);
    REQUIRE_FALSE(validate(m).empty());

    DataModel m2 = tpcc_root();
    m2.concepts[0].rows.push_back(m2.concepts[0].rows[0]);
    REQUIRE_FALSE(validate(m2).empty());
}

TEST_CASE("empty concept is reported") {
    DataModel m = tpcc_root();
    m.concepts.push_back({"Empty", {}});
    REQUIRE_FALSE(validate(m).empty());
}

TEST_CASE("key closures see through nesting") {
    DataModel m30 = merge(tpcc_root(), {"O", "c_o_ID", "C", "c_ID", 2},
                          MergeDirection::NestSourceIntoTarget);
    const Row* host = m30.find_row("C");
    REQUIRE(host != nullptr);

    auto atomic = atomic_closure(*host);
    REQUIRE(atomic.count("o_carrier_id") == 1);
    REQUIRE(atomic.count("c_o_ID") == 0);  // removed by the merge

    auto covered = covered_keys(*host);
    REQUIRE(covered.count("c_o_ID") == 1);  // but still served by the nesting
}
