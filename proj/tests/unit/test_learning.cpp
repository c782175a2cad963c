#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nedet/learning.hpp"
#include "support.hpp"

using namespace nedet;
using nedet::testing::code_of;
using nedet::testing::u;
using nedet::testing::vec;

namespace {

MembershipTable teacher_table(std::set<Address> field)
{
    return MembershipTable(std::move(field), TeacherMode{0.0});
}

}  // namespace

TEST(TeacherUpdate, CountsPresenceAcrossCycles)
{
    auto table = teacher_table({u(1), u(2)});
    BandMap bands;
    teacher_update(table, bands, vec({{u(1), 0.5}, {u(2), 0.5}}), true);
    teacher_update(table, bands, vec({{u(1), 0.5}, {u(2), 0.5}}), true);
    teacher_update(table, bands, vec({{u(1), 0.5}}), true);
    teacher_update(table, bands, vec({{u(1), 0.5}, {u(2), 0.5}}), true);
    EXPECT_EQ(table.cycles(), 4u);
    EXPECT_EQ(membership(table, u(1)).w, 1.0);
    EXPECT_TRUE(membership(table, u(1)).in_concept);
    EXPECT_EQ(membership(table, u(2)).w, 0.75);
    EXPECT_FALSE(membership(table, u(2)).in_concept);
}

TEST(TeacherUpdate, WithoutTeacherIsNoOp)
{
    auto table = teacher_table({u(1)});
    BandMap bands;
    teacher_update(table, bands, vec({{u(1), 0.5}}), true);
    const auto table_before = table;
    const auto bands_before = bands;
    teacher_update(table, bands, vec({{u(1), 0.9}}), false);
    EXPECT_EQ(table, table_before);
    EXPECT_EQ(bands, bands_before);
}

TEST(TeacherUpdate, RejectsSelfLearningTable)
{
    MembershipTable table({u(1)}, SelfLearningMode{});
    BandMap bands;
    EXPECT_EQ(code_of([&] { teacher_update(table, bands, vec({{u(1), 0.5}}), true); }),
              ErrorCode::WrongLearningMode);
    auto teacher = teacher_table({u(1)});
    EXPECT_EQ(code_of([&] { self_update(teacher, bands, vec({{u(1), 0.5}})); }),
              ErrorCode::WrongLearningMode);
}

TEST(TeacherUpdate, IgnoresAddressesOutsideField)
{
    auto table = teacher_table({u(1)});
    BandMap bands;
    teacher_update(table, bands, vec({{u(1), 0.5}, {u(5), 0.5}}), true);
    EXPECT_FALSE(table.in_field(u(5)));
    EXPECT_FALSE(bands.contains(u(5)));
}

TEST(Membership, Examples)
{
    const auto teacher = MembershipTable::from_counts({{u(1), 7}}, 7, TeacherMode{});
    EXPECT_EQ(membership(teacher, u(1)).w, 1.0);
    EXPECT_TRUE(membership(teacher, u(1)).in_concept);

    const auto self = MembershipTable::from_counts({{u(1), 49}, {u(2), 25}}, 100, SelfLearningMode{0.5, 0.7});
    EXPECT_EQ(membership(self, u(1)).w, 0.7);
    EXPECT_TRUE(membership(self, u(1)).in_concept);
    EXPECT_EQ(membership(self, u(2)).w, 0.5);
    EXPECT_FALSE(membership(self, u(2)).in_concept);
}

TEST(Membership, DeltaRelaxesTeacherMode)
{
    const auto table = MembershipTable::from_counts({{u(1), 9}, {u(2), 8}}, 10, TeacherMode{0.1});
    EXPECT_TRUE(membership(table, u(1)).in_concept);
    EXPECT_FALSE(membership(table, u(2)).in_concept);
}

TEST(Membership, NeedsCycles)
{
    const auto table = teacher_table({u(1)});
    EXPECT_EQ(code_of([&] { membership(table, u(1)); }), ErrorCode::ZeroCycles);
    EXPECT_EQ(code_of([&] { extract_concept(table); }), ErrorCode::ZeroCycles);
}

TEST(ExtractConcept, TeacherFilter)
{
    const auto table = MembershipTable::from_counts({{u(1), 4}, {u(2), 3}, {u(3), 4}}, 4, TeacherMode{});
    EXPECT_EQ(extract_concept(table), (std::set<Address>{u(1), u(3)}));
}

TEST(ExtractConcept, SelfLearningBoundary)
{
    const auto table =
        MembershipTable::from_counts({{u(1), 49}, {u(2), 48}}, 100, SelfLearningMode{0.5, 0.7});
    EXPECT_EQ(extract_concept(table), (std::set<Address>{u(1)}));
    EXPECT_NEAR(membership(table, u(2)).w, 0.6928, 1e-4);
}

TEST(ExtractConcept, NoOccurrencesGivesEmptySet)
{
    const auto table = MembershipTable::from_counts({{u(1), 0}, {u(2), 0}}, 5, TeacherMode{});
    EXPECT_TRUE(extract_concept(table).empty());
    const auto self = MembershipTable::from_counts({{u(1), 0}}, 5, SelfLearningMode{});
    EXPECT_TRUE(extract_concept(self).empty());
}

TEST(ExtractConcept, SelfLearningMatchesClosedForm)
{
    // in_concept <=> l/k >= q^(1/c), checked in exact integer arithmetic for
    // c = 1/2 (q^2) and c = 1/4 (q^4) with q = 7/10.
    for (std::uint64_t k = 1; k <= 200; ++k) {
        for (std::uint64_t l = 0; l <= k; ++l) {
            const auto half = MembershipTable::from_counts({{u(1), l}}, k, SelfLearningMode{0.5, 0.7});
            EXPECT_EQ(membership(half, u(1)).in_concept, l > 0 && 100 * l >= 49 * k) << l << "/" << k;
            const auto quarter = MembershipTable::from_counts({{u(1), l}}, k, SelfLearningMode{0.25, 0.7});
            EXPECT_EQ(membership(quarter, u(1)).in_concept, l > 0 && 10000 * l >= 2401 * k)
                << l << "/" << k;
        }
    }
}

TEST(ExtractConcept, TeacherGivesIntersection)
{
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<Address> field;
        for (std::uint32_t a = 0; a < 12; ++a) field.insert(u(a));
        auto table = teacher_table(field);
        BandMap bands;
        std::set<Address> common = field;
        for (int cycle = 0; cycle < 8; ++cycle) {
            std::vector<std::pair<Address, Level>> pairs;
            std::set<Address> present;
            for (const Address& a : field) {
                if (coin(rng) != 0) {
                    pairs.emplace_back(a, Level(0.5));
                    present.insert(a);
                }
            }
            std::set<Address> next;
            for (const Address& a : common) {
                if (present.contains(a)) next.insert(a);
            }
            common = next;
            teacher_update(table, bands, build_vector(pairs), true);
        }
        EXPECT_EQ(extract_concept(table), common);
    }
}

TEST(Counters, NeverDecrease)
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> coin(0, 1);
    auto table = teacher_table({u(1), u(2), u(3)});
    BandMap bands;
    std::uint64_t k = 0;
    std::map<Address, std::uint64_t> l{{u(1), 0}, {u(2), 0}, {u(3), 0}};
    for (int cycle = 0; cycle < 100; ++cycle) {
        std::vector<std::pair<Address, Level>> pairs;
        for (std::uint32_t a = 1; a <= 3; ++a) {
            if (coin(rng)) pairs.emplace_back(u(a), Level(0.3));
        }
        teacher_update(table, bands, build_vector(pairs), coin(rng) == 1);
        EXPECT_GE(table.cycles(), k);
        k = table.cycles();
        for (auto& [a, count] : l) {
            EXPECT_GE(table.occurrences(a), count);
            count = table.occurrences(a);
        }
    }
}

TEST(UpdateBand, Examples)
{
    EXPECT_EQ(update_band(std::nullopt, Level(0.6)), (LevelBand{0.6, 0.6, 0.6, 1}));

    const auto widened = update_band(LevelBand{0.4, 0.5, 0.6, 2}, Level(0.8));
    EXPECT_EQ(widened.min, 0.4);
    EXPECT_DOUBLE_EQ(widened.opt, 0.6);
    EXPECT_EQ(widened.max, 0.8);
    EXPECT_EQ(widened.count, 3u);

    const auto interior = update_band(LevelBand{0.4, 0.5, 0.6, 2}, Level(0.5));
    EXPECT_EQ(interior.min, 0.4);
    EXPECT_EQ(interior.max, 0.6);
}

TEST(UpdateBand, OptStaysInsideBand)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> level(0.001, 1.0);
    std::optional<LevelBand> band;
    for (int i = 0; i < 5000; ++i) {
        band = update_band(band, Level(level(rng)));
        EXPECT_LE(band->min, band->opt);
        EXPECT_LE(band->opt, band->max);
    }
}

TEST(ObserveLevels, SkipsLevelsBelowEpsilon)
{
    auto table = teacher_table({u(1), u(2)});
    BandMap bands;
    CorridorParams params;
    params.epsilon_level = 0.01;
    teacher_update(table, bands, vec({{u(1), 0.5}, {u(2), 0.005}}), true, params);
    EXPECT_TRUE(bands.contains(u(1)));
    EXPECT_FALSE(bands.contains(u(2)));
    EXPECT_EQ(table.occurrences(u(2)), 1u);
}

TEST(Thresholds, TargetAboveMinimumSum)
{
    BandMap bands{{u(1), {0.7, 1.0, 1.0, 2}}, {u(2), {0.8, 1.0, 1.0, 2}}};
    const auto t = recompute_thresholds(bands, {u(1), u(2)}, CorridorParams{0.9, 1e-6});
    EXPECT_NEAR(t.g_star, 1.8, 1e-11);
    EXPECT_NEAR(t.g0, 0.3, 1e-11);
    EXPECT_EQ(t.g0 + (0.7 + 0.8), t.g_star);
}

TEST(Thresholds, ConstantLevels)
{
    BandMap bands{{u(1), {0.5, 0.5, 0.5, 1}}, {u(2), {0.5, 0.5, 0.5, 1}}};
    const auto t = recompute_thresholds(bands, {u(1), u(2)}, CorridorParams{1.0, 1e-6});
    EXPECT_EQ(t.g_star, 1.0);
    EXPECT_EQ(t.g0, 0.0);
}

TEST(Thresholds, TargetBelowMinimumSumRaisesThresholdToIt)
{
    // theta * sum(opt) = 0.9 < sum(min) = 2: g0 clamps to 0 and g* sits at
    // sum(min), so the minimum levels still fire and nothing less does.
    BandMap bands{{u(1), {1.0, 0.5, 1.0, 1}}, {u(2), {1.0, 0.5, 1.0, 1}}};
    const auto t = recompute_thresholds(bands, {u(1), u(2)}, CorridorParams{0.9, 1e-6});
    EXPECT_EQ(t.g0, 0.0);
    EXPECT_EQ(t.g_star, 2.0);
}

TEST(Thresholds, Errors)
{
    BandMap bands{{u(1), {0.5, 0.5, 0.5, 1}}};
    EXPECT_EQ(code_of([&] { recompute_thresholds(bands, {}, {}); }), ErrorCode::EmptyConcept);
    EXPECT_EQ(code_of([&] { recompute_thresholds(bands, {u(1), u(2)}, {}); }), ErrorCode::MissingBand);
}

TEST(Thresholds, CorridorHoldsOnRandomBands)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> level(0.01, 1.0);
    std::uniform_real_distribution<double> theta(0.05, 1.0);
    std::uniform_int_distribution<int> size(1, 15);
    for (int trial = 0; trial < 2000; ++trial) {
        BandMap bands;
        std::set<Address> concept_set;
        const int n = size(rng);
        for (int i = 0; i < n; ++i) {
            std::optional<LevelBand> band;
            for (int j = 0; j < 4; ++j) band = update_band(band, Level(level(rng)));
            bands[u(i)] = *band;
            concept_set.insert(u(i));
        }
        const CorridorParams params{theta(rng), 1e-6};
        const auto t = recompute_thresholds(bands, concept_set, params);
        EXPECT_EQ(t, recompute_thresholds(bands, concept_set, params));
        double sum_min = 0.0;
        for (const Address& a : concept_set) sum_min += bands[a].min;
        EXPECT_GE(t.g0, 0.0);
        EXPECT_GE(t.g0 + sum_min, t.g_star);
        for (const Address& drop : concept_set) {
            double partial = 0.0;
            for (const Address& a : concept_set) {
                if (a != drop) partial += bands[a].min;
            }
            EXPECT_LT(t.g0 + partial, t.g_star);
        }
    }
}

TEST(Ceiling, AddsMaximaToThreshold)
{
    BandMap bands{{u(1), {0.2, 0.5, 0.75, 3}}, {u(2), {0.25, 0.5, 0.5, 3}}};
    EXPECT_EQ(corridor_ceiling(bands, {u(1), u(2)}, 1.0), 2.25);
}

TEST(Validate, LearningParameters)
{
    EXPECT_NO_THROW(validate(LearningMode{TeacherMode{0.0}}));
    EXPECT_EQ(code_of([] { validate(LearningMode{TeacherMode{1.0}}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { validate(LearningMode{SelfLearningMode{0.0, 0.7}}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { validate(LearningMode{SelfLearningMode{0.5, 1.0}}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { validate(CorridorParams{0.0, 1e-6}); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(code_of([] { validate(CorridorParams{1.5, 1e-6}); }), ErrorCode::InvalidConfig);
}
