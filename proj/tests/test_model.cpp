#include <doctest.h>

#include <random>

#include "npfp/model.hpp"
#include "npfp/presets.hpp"
#include "test_support.hpp"

using namespace npfp;
using npfp::testing::fixed;

namespace {

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
    for (const auto& x : v)
        if (x.kind == k) return true;
    return false;
}

// A single task whose size-1 entries match `tables`.
Task task_for(const BatchWcetTables& tables) {
    Task t;
    t.id = 1;
    t.priority = 1;
    t.period = Duration::ms(1000);
    t.deadline = t.period;
    t.coarse.attention = fixed(tables.coarse.front());
    for (auto w : kFineLevels) t.fine.attention[level_index(w)] = fixed(tables.fine[level_index(w)].front());
    return t;
}

// Straight transcription of the table inequalities, written without looking at validate_tables.
bool tables_ok(const Task& task, const BatchWcetTables& t) {
    if (t.coarse.empty()) return false;
    if (t.coarse[0] != coarse_wcet(task.coarse)) return false;
    for (std::size_t n = 1; n <= t.coarse.size(); ++n) {
        if (t.coarse[n - 1].count() < 0) return false;
        if (t.coarse[n - 1].count() > static_cast<std::int64_t>(n) * t.coarse[0].count()) return false;
    }
    for (std::size_t w = 0; w < 3; ++w) {
        const auto& row = t.fine[w];
        if (row.empty()) return false;
        if (row[0] != fine_wcet(task.fine, kFineLevels[w])) return false;
        for (std::size_t n = 1; n <= row.size(); ++n) {
            if (row[n - 1].count() < 0) return false;
            if (row[n - 1].count() > static_cast<std::int64_t>(n) * row[0].count()) return false;
            if (n >= 2 && row[n - 1] < row[n - 2]) return false;
            if (w >= 1 && n <= t.fine[w - 1].size() && t.fine[w - 1][n - 1] > row[n - 1]) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("coarse WCET is the sum of its three components") {
    const auto server = *platform_preset("server");
    CHECK(coarse_wcet(server.coarse) == Duration::us(79300));
    CHECK(format_ms(coarse_wcet(server.coarse)) == "79.3");

    const auto orin = *platform_preset("orin");
    CHECK(coarse_wcet(orin.coarse) == Duration::us(139700));

    CHECK(coarse_wcet(CoarseProfile{}) == Duration{});

    const auto tx2 = *platform_preset("tx2");
    CHECK(coarse_wcet(tx2.coarse) == Duration::us(777500));
}

TEST_CASE("fine WCET per workload level") {
    const auto server = *platform_preset("server");
    CHECK(fine_wcet(server.fine, WorkloadLevel::L) == Duration::ms(61));
    CHECK(fine_wcet(server.fine, WorkloadLevel::Zero) == Duration{});
    CHECK(fine_mean(server.fine, WorkloadLevel::Zero) == Duration{});

    const auto tx2 = *platform_preset("tx2");
    CHECK(fine_wcet(tx2.fine, WorkloadLevel::S) == Duration::ms(1185));
    CHECK(fine_wcet(tx2.fine, WorkloadLevel::L) == Duration::ms(1516));
}

TEST_CASE("WCET composition over random profiles") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> us(0, 2'000'000);
    for (int i = 0; i < 500; ++i) {
        CoarseProfile c;
        c.patch_split.wcet = Duration::us(us(rng));
        c.attention.wcet = Duration::us(us(rng));
        c.hardness.wcet = Duration::us(us(rng));
        c.patch_split.mean = Duration::us(us(rng));
        c.attention.mean = Duration::us(us(rng));
        c.hardness.mean = Duration::us(us(rng));
        CHECK(coarse_wcet(c).count() ==
              c.patch_split.wcet.count() + c.attention.wcet.count() + c.hardness.wcet.count());
        CHECK(coarse_mean(c).count() ==
              c.patch_split.mean.count() + c.attention.mean.count() + c.hardness.mean.count());

        FineProfile f;
        for (std::size_t k = 0; k < 3; ++k) {
            f.selective_split[k] = {Duration::us(us(rng)), Duration::us(us(rng))};
            f.attention[k] = {Duration::us(us(rng)), Duration::us(us(rng))};
        }
        for (auto w : kFineLevels) {
            const auto k = level_index(w);
            CHECK(fine_wcet(f, w).count() == f.selective_split[k].wcet.count() + f.attention[k].wcet.count());
            CHECK(fine_mean(f, w).count() == f.selective_split[k].mean.count() + f.attention[k].mean.count());
        }
    }
}

TEST_CASE("millisecond conversion is exact to the microsecond") {
    CHECK(Duration::from_ms(0.3) == Duration::us(300));
    CHECK(Duration::from_ms(1.5) == Duration::us(1500));
    CHECK(Duration::from_ms(777.5) == Duration::us(777500));
    CHECK(format_ms(Duration::ms(1555)) == "1555");
    CHECK(format_ms(Duration::us(2293500)) == "2293.5");
    CHECK(format_ms(Duration::us(1)) == "0.001");
}

TEST_CASE("batching property on the coarse table") {
    Task t;
    t.id = 1;
    t.priority = 1;
    t.period = Duration::ms(1000);
    t.deadline = t.period;
    t.coarse = platform_preset("server")->coarse;
    t.fine = platform_preset("server")->fine;
    std::vector<Task> tasks{t};

    BatchWcetTables tables;
    tables.coarse = {Duration::us(79300), Duration::ms(120)};
    for (auto w : kFineLevels) tables.fine[level_index(w)] = {fine_wcet(t.fine, w)};

    SUBCASE("120 ms for two fits under 2 x 79.3") {
        CHECK(validate_tables(tasks, tables).empty());
    }
    SUBCASE("200 ms for two is rejected") {
        tables.coarse[1] = Duration::ms(200);
        const auto v = validate_tables(tasks, tables);
        CHECK(has_kind(v, ViolationKind::CoarseBatching));
    }
    SUBCASE("fine(L,1) equal to the task's fine WCET is consistent") {
        CHECK(tables.fine[2].front() == Duration::ms(61));
        CHECK_FALSE(has_kind(validate_tables(tasks, tables), ViolationKind::FineSizeOne));
        tables.fine[2].front() = Duration::ms(60);
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::FineSizeOne));
    }
}

TEST_CASE("task-level invariants are reported") {
    auto tasks = npfp::testing::preset_tasks("server", {100, 200});
    auto tables = synthesize_batch_tables(tasks, default_batch_rule());
    REQUIRE(validate_tables(tasks, tables).empty());

    SUBCASE("duplicate priority") {
        tasks[1].priority = tasks[0].priority;
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::DuplicatePriority));
    }
    SUBCASE("deadline differs from period") {
        tasks[0].deadline = Duration::ms(50);
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::DeadlineNotPeriod));
    }
    SUBCASE("mean above WCET") {
        tasks[0].coarse.attention.mean = Duration::ms(60);
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::MeanAboveWcet));
    }
    SUBCASE("attention WCET must grow with the level") {
        tasks[0].fine.attention[0].wcet = Duration::ms(70);
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::ProfileLevelOrder));
    }
    SUBCASE("patch counts must agree") {
        tasks[1].coarse.patch_count = 100;
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::PatchCountMismatch));
    }
    SUBCASE("hardness distribution must sum to one") {
        tasks[0].hardness.level_dist = {0.5, 0.5, 0.5};
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::BadHardness));
    }
    SUBCASE("empty fine row") {
        tables.fine[1].clear();
        CHECK(has_kind(validate_tables(tasks, tables), ViolationKind::EmptyTable));
    }
}

TEST_CASE("synthesized tables for every preset are valid") {
    for (auto name : platform_names()) {
        auto tasks = npfp::testing::preset_tasks(name, {1000, 2000, 3000, 4000});
        const auto tables = synthesize_batch_tables(tasks, default_batch_rule());
        CAPTURE(name);
        CHECK(tables.synthetic);
        CHECK(tables.coarse_max() == 4);
        CHECK(validate_tables(tasks, tables).empty());
        // 40% marginal cost per extra fine item: two items cost 1.4 singles.
        const Duration f1 = tables.fine_batch(WorkloadLevel::M, 1);
        CHECK(tables.fine_batch(WorkloadLevel::M, 2).count() == f1.count() + std::llround(0.4 * f1.count()));
    }
}

TEST_CASE("validate_tables agrees with an independent checker on random tables") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> ms(1, 100);
    std::uniform_int_distribution<int> size(1, 5);
    std::uniform_int_distribution<int> coin(0, 9);
    int valid = 0, invalid = 0;
    for (int iter = 0; iter < 3000; ++iter) {
        BatchWcetTables t;
        const int nc = size(rng);
        const Duration c1 = Duration::ms(ms(rng));
        t.coarse.push_back(c1);
        for (int n = 2; n <= nc; ++n) {
            // Mostly within the n * c1 bound, occasionally above it.
            std::uniform_int_distribution<std::int64_t> v(c1.count(), c1.count() * n + (coin(rng) == 0 ? 5000 : 0));
            t.coarse.push_back(Duration::us(v(rng)));
        }
        std::int64_t base = 0;
        for (std::size_t w = 0; w < 3; ++w) {
            base += ms(rng) * 1000 - (coin(rng) == 0 ? 60000 : 0);
            const std::int64_t f1 = std::max<std::int64_t>(base, 1000);
            const int nf = size(rng);
            std::int64_t prev = f1;
            t.fine[w].push_back(Duration::us(f1));
            for (int n = 2; n <= nf; ++n) {
                std::uniform_int_distribution<std::int64_t> step(-2000, f1);
                prev = std::max<std::int64_t>(0, prev + step(rng));
                t.fine[w].push_back(Duration::us(prev));
            }
        }
        Task task = task_for(t);
        if (coin(rng) == 0) task.coarse.hardness = fixed(Duration::us(1));
        // Keep the profile itself valid; only the tables are under test here.
        std::sort(task.fine.attention.begin(), task.fine.attention.end(),
                  [](const MeanWcet& a, const MeanWcet& b) { return a.wcet < b.wcet; });

        const std::vector<Task> tasks{task};
        const bool expected = tables_ok(task, t);
        (expected ? valid : invalid)++;
        CHECK(validate_tables(tasks, t).empty() == expected);
    }
    // Both outcomes must actually be exercised.
    CHECK(valid > 100);
    CHECK(invalid > 100);
}
