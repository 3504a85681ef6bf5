#include "filterlab/error.hpp"
#include "filterlab/oracle.hpp"

#include <doctest.h>

using namespace filterlab::oracle;

TEST_SUITE("oracle")
{
    TEST_CASE("block family measure by hand")
    {
        const Fraction one = measure({1});
        CHECK(one.count == 1);
        CHECK(one.exponent == 1);
        const Fraction two = measure({2});
        CHECK(two.count == 3);
        CHECK(two.exponent == 2);
        const Fraction mixed = measure({1, 2});
        CHECK(mixed.count == 3);
        CHECK(mixed.exponent == 3);
        const Fraction none = measure({});
        CHECK(none.count == 1);
        CHECK(none.exponent == 0);
        // (2^3 - 1)^2 of 2^6.
        CHECK(measure({3, 3}).count == 49);
    }

    TEST_CASE("periodic instances")
    {
        PeriodicInstance inst;
        inst.n = 4;
        inst.blocks = {{0, 1}, {2, 3}};
        inst.generators = {{true, false, true, false}};
        CHECK(valid_instance(inst));
        CHECK(is_pseudointersection(inst, {true, false, true, false}));
        CHECK(is_pseudointersection(inst, {true, false, false, false}));
        CHECK_FALSE(is_pseudointersection(inst, {false, true, false, false}));
        CHECK_FALSE(is_pseudointersection(inst, {false, false, false, false}));
        CHECK(pseudointersections(inst).size() == 3);

        inst.generators.push_back({false, true, false, false});
        CHECK_FALSE(valid_instance(inst)); // the pair misses block 0
    }

    TEST_CASE("direct C_n scan")
    {
        // Blocks [0], [1,2], [3,4,5], then the tail.
        const std::vector<std::uint64_t> sizes{1, 2, 3};
        CHECK(cn({false, true, false}, false, false, 0, sizes));
        CHECK_FALSE(cn({false, true, true}, false, false, 0, sizes));
        CHECK_FALSE(cn({false, true, true, true, true, true}, false, false, 0, sizes));
        CHECK_FALSE(cn({false, true, true, true, true, true}, false, false, 2, sizes));
        CHECK(cn({true, false}, false, false, 1, sizes));
        CHECK_FALSE(cn({true, false}, false, false, 0, sizes));
        CHECK_FALSE(cn({}, true, false, 5, sizes));
    }
}
