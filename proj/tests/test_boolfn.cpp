#include <random>

#include <doctest.h>

#include "nnrepr/boolfn.hpp"
#include "nnrepr/error.hpp"
#include "oracles.hpp"

using nnrepr::BitVector;
using nnrepr::FunctionSpec;
using nnrepr::evaluate;
using nnrepr::truth_table;

TEST_SUITE("boolfn") {
    TEST_CASE("evaluate follows each function's bit order") {
        CHECK(evaluate(FunctionSpec::odd_max_bit(3), BitVector{1, 0, 1}));
        CHECK_FALSE(evaluate(FunctionSpec::odd_max_bit(3), BitVector{0, 1, 1}));
        CHECK(evaluate(FunctionSpec::equality(2), BitVector{1, 0, 1, 0}));
        CHECK_FALSE(evaluate(FunctionSpec::equality(2), BitVector{1, 0, 0, 1}));
        // X = (0,1) is 2 and Y = (1,0) is 1 with X_1 least significant.
        CHECK(evaluate(FunctionSpec::comparison(2), BitVector{0, 1, 1, 0}));
        CHECK_FALSE(evaluate(FunctionSpec::comparison(2), BitVector{1, 0, 0, 1}));
        CHECK(evaluate(FunctionSpec::linear_threshold({1, 1}, 2), BitVector{1, 1}));
        CHECK(evaluate(FunctionSpec::exact_threshold({2, 3, 5}, 5), BitVector{1, 1, 0}));
    }

    TEST_CASE("evaluate rejects a wrong input width") {
        try {
            evaluate(FunctionSpec::equality(2), BitVector{1, 0, 1});
            FAIL("expected an error");
        } catch (const nnrepr::Error& e) {
            CHECK(e.kind() == nnrepr::ErrorKind::invalid_input);
        }
    }

    TEST_CASE("factories enforce invariants") {
        CHECK_THROWS_AS(FunctionSpec::table("011"), nnrepr::Error);
        CHECK_THROWS_AS(FunctionSpec::table("01x0"), nnrepr::Error);
        CHECK_THROWS_AS(FunctionSpec::equality(0), nnrepr::Error);
        CHECK_THROWS_AS(FunctionSpec::linear_threshold({}, 0), nnrepr::Error);
        CHECK(FunctionSpec::comparison(3).arity() == 6);
        CHECK(FunctionSpec::table("01101001").arity() == 3);
    }

    TEST_CASE("truth tables") {
        CHECK(truth_table(FunctionSpec::linear_threshold({1, 1}, 2)).to_bit_string() == "0001");
        CHECK(truth_table(FunctionSpec::table("0110")).to_bit_string() == "0110");
        CHECK(truth_table(FunctionSpec::odd_max_bit(2)).to_bit_string() == "0011");
        CHECK(truth_table(FunctionSpec::table("0110")).to_hex() == "6");
        CHECK(truth_table(FunctionSpec::table("01")).to_hex() == "4");
        CHECK(truth_table(FunctionSpec::table("0000000111111111")).to_hex() == "01ff");
    }

    TEST_CASE("truth table honours the arity cap") {
        try {
            truth_table(FunctionSpec::equality(3), 1, 5);
            FAIL("expected an error");
        } catch (const nnrepr::Error& e) {
            CHECK(e.kind() == nnrepr::ErrorKind::resource_limit);
        }
    }

    TEST_CASE("truth table does not depend on the worker count") {
        auto spec = FunctionSpec::comparison(6);
        auto one = truth_table(spec, 1);
        for (unsigned workers : {2u, 3u, 8u, 64u}) CHECK(truth_table(spec, workers) == one);
    }

    TEST_CASE("property: EQ and COMP agree with integer comparison up to arity 20") {
        for (std::size_t n = 1; n <= 10; ++n) {
            auto eq = truth_table(FunctionSpec::equality(n));
            auto comp = truth_table(FunctionSpec::comparison(n));
            std::uint64_t mismatches = 0;
            for (std::uint64_t k = 0; k < eq.size(); ++k) {
                auto [x, y] = oracle::halves_as_integers(oracle::bits_msb_first(k, 2 * n));
                mismatches += eq.get(k) != (x == y);
                mismatches += comp.get(k) != (x >= y);
            }
            CHECK_MESSAGE(mismatches == 0, "n = " << n);
        }
    }

    TEST_CASE("property: OMB is the parity of the first set position, and matches its weighted sum") {
        for (std::size_t n = 1; n <= 14; ++n) {
            auto table = truth_table(FunctionSpec::odd_max_bit(n));
            CHECK_FALSE(table.get(0));
            std::uint64_t mismatches = 0;
            for (std::uint64_t k = 1; k < table.size(); ++k) {
                auto x = oracle::bits_msb_first(k, n);
                std::size_t first = 0;
                while (x[first] == 0) ++first;
                mismatches += table.get(k) != ((first + 1) % 2 == 1);
                mismatches += table.get(k) != static_cast<bool>(oracle::omb_value(x));
            }
            CHECK_MESSAGE(mismatches == 0, "n = " << n);
        }
    }

    TEST_CASE("property: LT and ELT match direct evaluation") {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::int64_t> weight(-16, 16);
        for (int t = 0; t < 50; ++t) {
            std::vector<std::int64_t> w(8);
            for (auto& v : w) v = weight(rng);
            std::int64_t b = weight(rng);
            auto lt = truth_table(FunctionSpec::linear_threshold(w, b));
            auto elt = truth_table(FunctionSpec::exact_threshold(w, b));
            for (std::uint64_t k = 0; k < lt.size(); ++k) {
                auto x = oracle::bits_msb_first(k, 8);
                REQUIRE(lt.get(k) == static_cast<bool>(oracle::lt_value(w, b, x)));
                REQUIRE(elt.get(k) == static_cast<bool>(oracle::elt_value(w, b, x)));
            }
        }
    }
}
