#include <random>

#include <doctest.h>

#include "nnrepr/constructions.hpp"
#include "nnrepr/error.hpp"
#include "oracles.hpp"

using nnrepr::AnchorSet;
using nnrepr::BitVector;
using nnrepr::Label;
using nnrepr::Rational;
using nnrepr::RationalVector;

namespace {

Rational q(long long num, long long den) { return Rational(nnrepr::BigInt(num), nnrepr::BigInt(den)); }

std::uint64_t ceil_log2(std::uint64_t v) {
    std::uint64_t k = 0;
    while ((std::uint64_t{1} << k) < v) ++k;
    return k;
}

nnrepr::ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const nnrepr::Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return nnrepr::ErrorKind::structural;
}

// All 2^arity outputs of the spec, computed by the oracle definitions.
std::vector<int> oracle_outputs(const nnrepr::FunctionSpec& spec) {
    using nnrepr::FunctionKind;
    return oracle::tabulate(spec.arity(), [&](const std::vector<int>& x) -> int {
        switch (spec.kind) {
            case FunctionKind::lt: return oracle::lt_value(spec.weights, spec.bias, x);
            case FunctionKind::elt: return oracle::elt_value(spec.weights, spec.bias, x);
            case FunctionKind::eq: {
                auto [a, b] = oracle::halves_as_integers(x);
                return a == b;
            }
            case FunctionKind::comp: {
                auto [a, b] = oracle::halves_as_integers(x);
                return a >= b;
            }
            case FunctionKind::omb: return oracle::omb_value(x);
            case FunctionKind::table: return 0;
        }
        return 0;
    });
}

}  // namespace

TEST_SUITE("constructions") {
    TEST_CASE("LT examples") {
        auto or_set = nnrepr::construct_lt({1, 1}, 1);
        CHECK(or_set.anchors == nnrepr::RationalMatrix{{q(1, 2), q(1, 2)}, {0, 0}});
        CHECK(or_set.labels == std::vector<Label>{Label::pos, Label::neg});
        CHECK(or_set.meta.params->scales == RationalVector{q(1, 4)});
        CHECK(or_set.meta.params->base_point == RationalVector{q(1, 4), q(1, 4)});

        auto and_set = nnrepr::construct_lt({1, 1}, 2);
        CHECK(and_set.anchors == nnrepr::RationalMatrix{{1, 1}, {q(1, 2), q(1, 2)}});
        CHECK(and_set.meta.params->base_point == RationalVector{q(3, 4), q(3, 4)});

        auto id = nnrepr::construct_lt({1}, 1);
        CHECK(id.anchors == nnrepr::RationalMatrix{{1}, {0}});
        CHECK(id.meta.params->scales == RationalVector{q(1, 2)});

        CHECK(kind_of([] { nnrepr::construct_lt({0, 0}, 1); }) == nnrepr::ErrorKind::degenerate_function);
    }

    TEST_CASE("ELT examples") {
        auto eq2 = nnrepr::construct_elt({1, -1}, 0);
        CHECK(eq2.anchors == nnrepr::RationalMatrix{{0, 0}, {q(-1, 2), q(1, 2)}, {q(1, 2), q(-1, 2)}});
        CHECK(eq2.labels == std::vector<Label>{Label::pos, Label::neg, Label::neg});
        CHECK(eq2.meta.params->scales == RationalVector{q(1, 2)});

        auto single = nnrepr::construct_elt({2}, 2);
        CHECK(single.anchors == nnrepr::RationalMatrix{{1}, {q(1, 2)}, {q(3, 2)}});

        CHECK(kind_of([] { nnrepr::construct_elt({1, 1}, 3); }) == nnrepr::ErrorKind::constant_function);
        CHECK(kind_of([] { nnrepr::construct_elt({0, 0}, 0); }) == nnrepr::ErrorKind::degenerate_function);
    }

    TEST_CASE("binary hyperplane points") {
        CHECK(nnrepr::find_hyperplane_binary_point({1, -1}, 0) == BitVector{0, 0});
        CHECK(nnrepr::find_hyperplane_binary_point({2, 3, 5}, 5) == BitVector{0, 0, 1});
        CHECK_FALSE(nnrepr::find_hyperplane_binary_point({1, 1}, 3).has_value());
        CHECK(kind_of([] { nnrepr::find_hyperplane_binary_point(std::vector<std::int64_t>(49, 1), 3); }) ==
              nnrepr::ErrorKind::resource_limit);
    }

    TEST_CASE("property: hyperplane search returns the lexicographically smallest solution") {
        std::mt19937_64 rng(13);
        std::uniform_int_distribution<std::int64_t> weight(-6, 6);
        for (int t = 0; t < 300; ++t) {
            const std::size_t n = 1 + t % 12;
            std::vector<std::int64_t> w(n);
            for (auto& v : w) v = weight(rng);
            std::int64_t b = std::uniform_int_distribution<std::int64_t>(-10, 10)(rng);
            auto expected = oracle::smallest_binary_solution(w, b);
            auto got = nnrepr::find_hyperplane_binary_point(w, b);
            REQUIRE(got.has_value() == expected.has_value());
            if (got) CHECK(std::vector<int>(got->begin(), got->end()) == *expected);
        }
    }

    TEST_CASE("EQ examples") {
        auto id1 = nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::identity, 1));
        CHECK(id1.anchors == nnrepr::RationalMatrix{{q(1, 2), q(1, 2)}, {1, 0}, {0, 1}});
        CHECK(id1.labels == std::vector<Label>{Label::pos, Label::neg, Label::neg});
        CHECK(id1.resolution().bits == 2);

        nnrepr::EqMatrix row = nnrepr::validated(nnrepr::EqMatrix{{{1, 2}}});
        auto set = nnrepr::construct_eq(row);
        CHECK(set.size() == 3);
        CHECK(set.meta.params->scales == RationalVector{q(1, 10)});
        CHECK(set.anchors[1] == RationalVector{q(3, 5), q(7, 10), q(2, 5), q(3, 10)});
        CHECK(oracle::represents(set, oracle_outputs(nnrepr::FunctionSpec::equality(2))));

        auto id10 = nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::identity, 10));
        CHECK(id10.size() == 21);
        CHECK(id10.resolution().bits == 2);
    }

    TEST_CASE("EQ error paths") {
        nnrepr::EqMatrix refuted = nnrepr::validated(nnrepr::EqMatrix{{{1, 1}}});
        CHECK(kind_of([&] { nnrepr::construct_eq(refuted); }) == nnrepr::ErrorKind::invalid_matrix);
        CHECK(kind_of([&] { nnrepr::construct_eq(refuted, true); }) == nnrepr::ErrorKind::invalid_matrix);

        nnrepr::EqMatrix unchecked{{{1, 2}}};
        CHECK(kind_of([&] { nnrepr::construct_eq(unchecked); }) == nnrepr::ErrorKind::invalid_matrix);
        CHECK(nnrepr::construct_eq(unchecked, true).size() == 3);

        nnrepr::EqMatrix zero_row{{{1, 0}, {0, 0}}};
        CHECK(kind_of([&] { nnrepr::construct_eq(zero_row, true); }) == nnrepr::ErrorKind::invalid_matrix);
        CHECK(kind_of([&] { nnrepr::construct_eq(nnrepr::EqMatrix{}, true); }) == nnrepr::ErrorKind::invalid_input);
    }

    TEST_CASE("COMP examples") {
        auto c1 = nnrepr::construct_comp(1);
        CHECK(c1.anchors == nnrepr::RationalMatrix{{1, 0}, {q(-1, 4), q(5, 4)}});
        CHECK(c1.labels == std::vector<Label>{Label::pos, Label::neg});

        auto c2 = nnrepr::construct_comp(2);
        CHECK(c2.size() == 4);
        CHECK(c2.meta.params->scales == RationalVector{q(1, 2), q(5, 8), q(3, 4), q(7, 8)});
        CHECK(oracle::represents(c2, oracle_outputs(nnrepr::FunctionSpec::comparison(2))));

        CHECK(nnrepr::construct_comp(10).size() == 20);
        CHECK(nnrepr::construct_comp(10).resolution().bits <= 6);
        CHECK(nnrepr::construct_comp(4).resolution().bits == 5);
        CHECK(kind_of([] { nnrepr::construct_comp(0); }) == nnrepr::ErrorKind::invalid_input);
    }

    TEST_CASE("OMB examples") {
        auto o2 = nnrepr::construct_omb(2, true);
        CHECK(o2.anchors == nnrepr::RationalMatrix{{1, 0}, {0, q(1, 2)}});
        CHECK(o2.labels == std::vector<Label>{Label::pos, Label::neg});
        CHECK(oracle::represents(o2, oracle_outputs(nnrepr::FunctionSpec::odd_max_bit(2))));

        auto o3 = nnrepr::construct_omb(3);
        CHECK(o3.anchors == nnrepr::RationalMatrix{{1, 0, 0}, {0, q(2, 3), 0}, {0, 0, q(1, 3)}, {0, 0, 0}});
        CHECK(o3.labels == std::vector<Label>{Label::pos, Label::neg, Label::pos, Label::neg});

        CHECK(kind_of([] { nnrepr::construct_omb(3, true); }) == nnrepr::ErrorKind::invalid_flag);
        CHECK(kind_of([] { nnrepr::construct_omb(0); }) == nnrepr::ErrorKind::invalid_input);
    }

    TEST_CASE("constant representation") {
        auto one = nnrepr::construct_constant(3, true);
        CHECK(one.size() == 1);
        CHECK(one.labels.front() == Label::pos);
        CHECK(oracle::represents(one, std::vector<int>(8, 1)));
        CHECK(oracle::represents(nnrepr::construct_constant(2, false), std::vector<int>(4, 0)));
    }

    TEST_CASE("property: ELT anchors are collinear with X* as the exact midpoint") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<std::int64_t> weight(-16, 16);
        int built = 0;
        while (built < 40) {
            std::vector<std::int64_t> w(6);
            for (auto& v : w) v = weight(rng);
            std::int64_t b = std::uniform_int_distribution<std::int64_t>(-20, 20)(rng);
            if (!nnrepr::find_hyperplane_binary_point(w, b) || std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; })) {
                continue;
            }
            ++built;
            auto set = nnrepr::construct_elt(w, b);
            const auto& a0 = set.anchors[0];
            const auto& a1 = set.anchors[1];
            const auto& a2 = set.anchors[2];
            Rational dot;
            for (std::size_t j = 0; j < w.size(); ++j) {
                CHECK(a1[j] + a2[j] == a0[j] + a0[j]);
                // a1 - a0 is a fixed multiple of w
                CHECK((a0[j] - a1[j]) == set.meta.params->scales[0] * Rational(w[j]));
                dot += Rational(w[j]) * a0[j];
            }
            CHECK(dot == Rational(b));
            CHECK(oracle::represents(set, oracle_outputs(nnrepr::FunctionSpec::exact_threshold(w, b))));
        }
    }

    TEST_CASE("property: LT base point lies half a unit below the threshold") {
        std::mt19937_64 rng(19);
        std::uniform_int_distribution<std::int64_t> weight(-16, 16);
        for (int t = 0; t < 40; ++t) {
            std::vector<std::int64_t> w(6);
            for (auto& v : w) v = weight(rng);
            if (std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; })) continue;
            std::int64_t b = std::uniform_int_distribution<std::int64_t>(-40, 40)(rng);
            auto set = nnrepr::construct_lt(w, b);
            Rational dot;
            for (std::size_t j = 0; j < w.size(); ++j) dot += Rational(w[j]) * set.meta.params->base_point[j];
            CHECK(dot == Rational(b) - q(1, 2));
            CHECK(set.meta.params->scales[0].sign() > 0);
            CHECK(oracle::represents(set, oracle_outputs(nnrepr::FunctionSpec::linear_threshold(w, b))));
        }
    }

    TEST_CASE("property: COMP scales strictly increase") {
        for (std::size_t n = 1; n <= 64; ++n) {
            const auto c = nnrepr::construct_comp(n).meta.params->scales;
            REQUIRE(c.size() == 2 * n);
            CHECK(c.front().sign() > 0);
            for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i - 1] < c[i]);
        }
    }

    TEST_CASE("property: OMB diagonal strictly decreases and stays positive") {
        for (std::size_t n = 1; n <= 64; ++n) {
            auto set = nnrepr::construct_omb(n);
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(set.anchors[i][i].sign() > 0);
                if (i > 0) CHECK(set.anchors[i][i] < set.anchors[i - 1][i - 1]);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) CHECK(set.anchors[i][j].is_zero());
                }
            }
        }
    }

    TEST_CASE("property: resolution bounds and sizes up to n = 64") {
        for (std::size_t n = 1; n <= 64; ++n) {
            auto eq = nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::identity, n));
            CHECK(eq.size() == 2 * n + 1);
            CHECK(eq.resolution().bits == 2);

            auto comp = nnrepr::construct_comp(n);
            CHECK(comp.size() == 2 * n);
            CHECK(comp.resolution().bits <= ceil_log2(n) + 3);

            auto omb = nnrepr::construct_omb(n);
            CHECK(omb.size() == n + 1);
            CHECK(omb.resolution().bits <= ceil_log2(n + 1));
            if (n % 2 == 0) CHECK(nnrepr::construct_omb(n, true).size() == n);
        }
    }

    TEST_CASE("property: the single power-of-two row needs linear resolution") {
        for (std::size_t n : {4u, 8u, 12u}) {
            auto set = nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::pow2_row, n));
            CHECK(set.size() == 3);
            CHECK(set.resolution().bits >= n - 2);
        }
    }

    TEST_CASE("property: naive nearest-anchor evaluation reproduces each function") {
        for (std::size_t n = 1; n <= 4; ++n) {
            CHECK(oracle::represents(nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::identity, n)),
                                     oracle_outputs(nnrepr::FunctionSpec::equality(n))));
            CHECK(oracle::represents(nnrepr::construct_eq(nnrepr::builtin_matrix(nnrepr::EqFamily::pow2_row, n)),
                                     oracle_outputs(nnrepr::FunctionSpec::equality(n))));
            CHECK(oracle::represents(nnrepr::construct_comp(n), oracle_outputs(nnrepr::FunctionSpec::comparison(n))));
        }
        for (std::size_t n = 1; n <= 8; ++n) {
            CHECK(oracle::represents(nnrepr::construct_omb(n), oracle_outputs(nnrepr::FunctionSpec::odd_max_bit(n))));
            if (n % 2 == 0) {
                CHECK(oracle::represents(nnrepr::construct_omb(n, true), oracle_outputs(nnrepr::FunctionSpec::odd_max_bit(n))));
            }
        }
    }

    TEST_CASE("constructions record the function they represent") {
        CHECK(nnrepr::construct_comp(3).meta.function == nnrepr::FunctionSpec::comparison(3));
        CHECK(nnrepr::construct_omb(5).meta.function == nnrepr::FunctionSpec::odd_max_bit(5));
        CHECK(nnrepr::construct_lt({1, 2}, 2).meta.function == nnrepr::FunctionSpec::linear_threshold({1, 2}, 2));
        CHECK(nnrepr::construct_comp(3).meta.construction == "comp");
    }
}
