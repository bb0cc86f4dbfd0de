#include <array>
#include <cmath>
#include <sstream>

#include "dicut/csp.hpp"
#include "doctest.h"

using namespace dicut;

namespace {

ConstraintDistribution dicut_point_mass() {
    std::vector<Rational> probs(4, Rational(0));
    probs[1] = Rational(1);  // (0, 1), the only satisfying assignment
    return ConstraintDistribution::satisfying(Predicate::dicut(), probs);
}

std::vector<FamilyMember> dicut_family() {
    return {{Predicate::dicut(), dicut_point_mass(), 1.0}};
}

}  // namespace

TEST_CASE("predicate truth tables") {
    const Predicate dicut = Predicate::dicut();
    CHECK(dicut.eval({0, 1}));
    CHECK_FALSE(dicut.eval({1, 1}));
    CHECK_FALSE(dicut.eval({0, 0}));
    CHECK_FALSE(dicut.eval({1, 0}));
    const Predicate cut = Predicate::cut();
    CHECK(cut.eval({0, 1}));
    CHECK(cut.eval({1, 0}));
    CHECK_FALSE(cut.eval({0, 0}));
    CHECK_THROWS(Predicate(2, 2, {0, 1, 0}));  // wrong table size
}

TEST_CASE("val_at on single constraints") {
    const CspInstance one_dicut(2, {Predicate::dicut()}, {{0, {0, 1}}});
    CHECK(val_at(one_dicut, {0, 1}) == Rational(1));
    CHECK(val_at(one_dicut, {1, 1}) == Rational(0));

    const CspInstance two(3, {Predicate::dicut()}, {{0, {0, 1}}, {0, {1, 2}}});
    CHECK(val_at(two, {0, 1, 1}) == Rational(1, 2));

    const CspInstance empty(2, {Predicate::dicut()}, {});
    CHECK_THROWS(val_at(empty, {0, 1}));
}

TEST_CASE("brute-force value") {
    SUBCASE("directed triangle as a DICUT instance has value 1/3") {
        const CspInstance tri(3, {Predicate::dicut()},
                              {{0, {0, 1}}, {0, {1, 2}}, {0, {2, 0}}});
        CHECK(brute_force_val(tri) == Rational(1, 3));
    }
    SUBCASE("constant-1 predicate is always satisfied") {
        const CspInstance inst(3, {Predicate::const_one(2, 2)}, {{0, {0, 1}}, {0, {2, 1}}});
        CHECK(brute_force_val(inst) == Rational(1));
    }
    SUBCASE("a single CUT edge is satisfiable") {
        const CspInstance inst(2, {Predicate::cut()}, {{0, {0, 1}}});
        CHECK(brute_force_val(inst) == Rational(1));
    }
    SUBCASE("enumeration limit") {
        const CspInstance inst(2, {Predicate::cut()}, {{0, {0, 1}}});
        CHECK_THROWS(brute_force_val(inst, 2));
    }
}

TEST_CASE("one-wise validation is exact") {
    SUBCASE("uniform over CUT's satisfying set is one-wise") {
        const ConstraintDistribution d = ConstraintDistribution::uniform_onewise(Predicate::cut());
        CHECK(d.is_onewise());
    }
    SUBCASE("DICUT admits no one-wise satisfying distribution") {
        CHECK_THROWS(ConstraintDistribution::uniform_onewise(Predicate::dicut()));
        std::vector<Rational> probs(4, Rational(0));
        probs[1] = Rational(1);
        CHECK_THROWS(ConstraintDistribution::onewise(Predicate::dicut(), probs));
        CHECK_NOTHROW(ConstraintDistribution::satisfying(Predicate::dicut(), probs));
    }
    SUBCASE("any marginal slip fails the strict constructor") {
        // on CUT's satisfying set {01, 10}: weights 1/2 +- 1/10^6
        std::vector<Rational> probs(4, Rational(0));
        probs[1] = Rational(500001, 1000000);
        probs[2] = Rational(499999, 1000000);
        CHECK_THROWS(ConstraintDistribution::onewise(Predicate::cut(), probs));
        CHECK_NOTHROW(ConstraintDistribution::satisfying(Predicate::cut(), probs));
    }
    SUBCASE("support outside the satisfying set is rejected outright") {
        std::vector<Rational> probs(4, Rational(1, 4));
        CHECK_THROWS(ConstraintDistribution::satisfying(Predicate::dicut(), probs));
    }
    SUBCASE("probabilities must sum to exactly one") {
        std::vector<Rational> probs(4, Rational(0));
        probs[1] = Rational(999999, 1000000);
        CHECK_THROWS(ConstraintDistribution::satisfying(Predicate::dicut(), probs));
    }
}

TEST_CASE("rho_min oracle") {
    CHECK(rho_min({Predicate::dicut()}, 100) == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(rho_min({Predicate::cut()}, 100) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rho_min({Predicate::const_one(2, 2)}, 100) == doctest::Approx(1.0));
    CHECK_THROWS(rho_min({Predicate::dicut()}, 5));  // grid too coarse

    SUBCASE("mixing in the constant-1 predicate never lowers the inner max") {
        const std::vector<Predicate> base{Predicate::dicut()};
        const std::vector<Predicate> mixed{Predicate::dicut(), Predicate::const_one(2, 2)};
        const double alone = rho_inner_max(base, {1.0}, 50);
        for (double w : {0.1, 0.4, 0.9})
            CHECK(rho_inner_max(mixed, {1.0 - w, w}, 50) >= alone - 1e-12);
    }
    SUBCASE("mixed signatures are rejected") {
        CHECK_THROWS(rho_inner_max({Predicate::dicut(), Predicate::const_one(3, 2)}, {0.5, 0.5},
                                   50));
    }
}

TEST_CASE("rmd stream shapes and determinism") {
    const RmdStream s = sample_rmd_stream(dicut_family(), 4, 1, 1, 7);
    CHECK(s.symbols.size() == 1);
    CHECK(s.x_star.size() == 4);
    CHECK(s.symbols[0].vars.size() == 2);
    CHECK(s.symbols[0].vars[0] != s.symbols[0].vars[1]);

    const RmdStream again = sample_rmd_stream(dicut_family(), 4, 1, 1, 7);
    CHECK(again.x_star == s.x_star);
    CHECK(again.symbols[0].vars == s.symbols[0].vars);
    CHECK(again.symbols[0].shift == s.symbols[0].shift);

    CHECK_THROWS(sample_rmd_stream(dicut_family(), 4, 2, 3, 7));  // t > stream length
    CHECK_THROWS(sample_rmd_stream({}, 4, 2, 0, 7));
}

TEST_CASE("yes streams satisfy every kept constraint at x*") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const RmdStream s = sample_rmd_stream(dicut_family(), 10, 5, 5, derive_seed(1, 1, seed));
        const CspInstance inst = clean(s);
        if (inst.size() == 0) continue;
        CHECK(val_at(inst, s.x_star) == Rational(1));
        CHECK(brute_force_val(inst) == Rational(1));
    }
}

TEST_CASE("clean keeps exactly the zero-shift symbols, in order") {
    RmdStream s;
    s.n = 4;
    s.predicates = {Predicate::dicut()};
    s.symbols = {{0, {0, 1}, {1, 0}}, {0, {2, 3}, {0, 0}}, {0, {1, 2}, {0, 1}}};
    const CspInstance inst = clean(s);
    CHECK(inst.size() == 1);
    CHECK(inst.constraints()[0].vars == std::vector<std::uint32_t>{2, 3});

    s.symbols[1].shift = {1, 1};
    CHECK(clean(s).size() == 0);
}

TEST_CASE("no streams have uniform shifts") {
    // chi-square over the 4 shift values at significance 0.001 (df = 3)
    constexpr std::uint64_t kSamples = 100000 / 4;  // 4 shifts per stream
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t total = 0;
    for (std::uint64_t seed = 0; seed < kSamples; ++seed) {
        const RmdStream s = sample_rmd_stream(dicut_family(), 8, 4, 0, derive_seed(2, 2, seed));
        for (const RmdSymbol& sym : s.symbols) {
            counts[sym.shift[0] * 2 + sym.shift[1]]++;
            total++;
        }
    }
    const double expected = static_cast<double>(total) / 4.0;
    double stat = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    CHECK(stat < 16.266);  // 0.999 quantile of chi-square with 3 df
}

TEST_CASE("no-stream retention rate is about q^-k") {
    constexpr std::uint64_t kSamples = 400, kSymbols = 100;
    std::uint64_t kept = 0;
    for (std::uint64_t seed = 0; seed < kSamples; ++seed)
        kept += clean(sample_rmd_stream(dicut_family(), 12, kSymbols, 0, derive_seed(3, 3, seed)))
                    .size();
    const double expected = static_cast<double>(kSamples * kSymbols) / 4.0;
    const double se = std::sqrt(static_cast<double>(kSamples * kSymbols) * 0.25 * 0.75);
    CHECK(std::abs(static_cast<double>(kept) - expected) <= 3.0 * se);
}

TEST_CASE("tuples are uniform over distinct pairs") {
    // n=4: 12 ordered pairs, each should appear with frequency 1/12
    constexpr std::uint64_t kSamples = 60000;
    std::array<std::array<std::uint64_t, 4>, 4> counts{};
    for (std::uint64_t seed = 0; seed < kSamples; ++seed) {
        const RmdStream s = sample_rmd_stream(dicut_family(), 4, 1, 0, derive_seed(4, 4, seed));
        counts[s.symbols[0].vars[0]][s.symbols[0].vars[1]]++;
    }
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) {
                CHECK(counts[a][b] == 0);
            } else {
                CHECK(std::abs(static_cast<double>(counts[a][b]) / kSamples - 1.0 / 12.0) <=
                      0.01);
            }
        }
}

TEST_CASE("instance and stream files round trip") {
    const CspInstance inst(4, {Predicate::dicut()}, {{0, {0, 1}}, {0, {3, 2}}});
    std::stringstream buf;
    inst.write(buf);
    CHECK(buf.str().rfind("2 2 4 2\n", 0) == 0);
    const CspInstance back = CspInstance::read(buf, {Predicate::dicut()});
    CHECK(back.size() == 2);
    CHECK(back.constraints()[1].vars == std::vector<std::uint32_t>{3, 2});

    const RmdStream s = sample_rmd_stream(dicut_family(), 6, 3, 3, 11);
    std::stringstream sbuf;
    s.write(sbuf);
    const RmdStream sback = RmdStream::read(sbuf, {Predicate::dicut()});
    CHECK(sback.n == s.n);
    REQUIRE(sback.symbols.size() == s.symbols.size());
    for (std::size_t i = 0; i < s.symbols.size(); ++i) {
        CHECK(sback.symbols[i].vars == s.symbols[i].vars);
        CHECK(sback.symbols[i].shift == s.symbols[i].shift);
    }

    const Predicate p = Predicate::cut();
    std::stringstream pbuf;
    p.write(pbuf);
    const Predicate pback = Predicate::read(pbuf);
    CHECK(pback.table() == p.table());
}

TEST_CASE("constraint tuples must be distinct and in range") {
    CHECK_THROWS(CspInstance(3, {Predicate::dicut()}, {{0, {1, 1}}}));
    CHECK_THROWS(CspInstance(3, {Predicate::dicut()}, {{0, {0, 3}}}));
    CHECK_THROWS(CspInstance(3, {Predicate::dicut()}, {{1, {0, 1}}}));
}
