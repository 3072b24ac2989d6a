#include <catch2/catch_amalgamated.hpp>

#include "denorm/denorm.hpp"
#include "fixtures.hpp"

using namespace denorm;
using denorm_test::make_row;
using denorm_test::tpcc_root;

TEST_CASE("normalized root renders as a comma list") {
    REQUIRE(signature(tpcc_root()) == "W,C,O");
}

TEST_CASE("single row model renders as its name") {
    DataModel m;
    m.concepts.push_back({"C0", {make_row("A", 1, {{"a_id", 8}, {"a_k", 4}})}});
    REQUIRE(signature(m) == "A");
}

TEST_CASE("chained merges render nested braces") {
    DataModel m = merge(tpcc_root(), {"C", "w_c_ID", "W", "w_ID", 30000},
                        MergeDirection::NestTargetIntoSource);  // C{W}
    REQUIRE(signature(m) == "C{W},O");
    m = merge(m, {"O", "c_o_ID", "C", "c_ID", 2}, MergeDirection::NestTargetIntoSource);
    REQUIRE(signature(m) == "O{C{W}}");
}

TEST_CASE("rows collate by declaration order then fragment number") {
    DataModel m = split(tpcc_root(), "O", "o_carrier_id");
    REQUIRE(signature(m) == "W,C,O1,O2");
    m = split(m, "C", "w_c_ID");
    REQUIRE(signature(m) == "W,C1,C2,O1,O2");
}

TEST_CASE("nested rows inside one host collate the same way") {
    DataModel m = split(tpcc_root(), "C", "balance");
    m = split(m, "C2", "c_last");
    REQUIRE(signature(m) == "W,C1,C2,C3,O");
    // Both references now anchor at C3, so W and O merge into that fragment.
    m = merge(m, {"C3", "w_c_ID", "W", "w_ID", 30000}, MergeDirection::NestTargetIntoSource);
    m = merge(m, {"O", "c_o_ID", "C3", "c_ID", 2}, MergeDirection::NestSourceIntoTarget);
    REQUIRE(signature(m) == "C1,C2,C3{W,O}");
}

TEST_CASE("equal structure means equal signature") {
    DataModel a = tpcc_root();
    DataModel b = tpcc_root();
    b.name = "other";
    REQUIRE(signature(a) == signature(b));
}
