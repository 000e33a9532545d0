#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subcount/counterexample.hpp"
#include "subcount/lrp.hpp"

namespace subcount {

struct InstanceResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::string id;
    int checked = 0;
    bool pass = false;
    double wall_seconds = 0;
    std::vector<InstanceResult> instances;
};

std::string verification_report_json(const VerificationReport& r);

struct CorpusEntry {
    std::string name;
    CounterexamplePair pair;
};

// Every doubled-pattern pair over the connected unattributed patterns of
// 3..5 nodes (29 of them; the triangle entry is the C6 / 2C3 pair), then the
// three path pairs (2,1,6), (2,2,12), (3,1,8).
std::vector<CorpusEntry> counterexample_corpus();

// Doubled pairs: counts (0, 2) and 2-WL until-stable indistinguishable.
VerificationReport verify_thm2(int threads);
// k-WL at T=0 distinguishes every corpus pair whose pattern has <= k nodes,
// k in {3, 4}.
VerificationReport verify_thm4(std::int64_t tuple_budget, int threads);
// Path pairs: counts 0 vs 2m, equal color multisets through T iterations.
VerificationReport verify_thm5(int threads);
// 100 random message-passing parameter draws agree on every corpus pair.
VerificationReport verify_thm1_empirical(std::uint64_t seed, int threads);
// Star closed form equals the generic containment counter on random graphs,
// plain and attributed.
VerificationReport verify_star_cc(std::uint64_t seed, int threads);
// Any regressor reading refinement colors is a per-class-constant predictor;
// on counterexample-augmented triangle data the induced lower bound on
// normalized MSE is strictly positive.
VerificationReport verify_wl_bound(std::uint64_t seed, int threads);

std::vector<VerificationReport> verify_all(std::uint64_t seed,
                                           std::int64_t tuple_budget,
                                           int threads);

struct SeedRun {
    std::uint64_t seed = 0;
    double test_mse = 0;
    double normalized_mse = 0;
    int best_epoch = -1;
};

struct ExperimentReport {
    std::string id;      // "<row>-<scale>"
    std::string row;     // lrp-er-triangle, ...
    std::string family;  // er | rr
    std::string task;    // triangle | 3star
    std::string scale;   // desk | paper
    int graph_count = 0;
    double variance = 0;
    double reference = 0;  // published value this row is compared against
    std::vector<SeedRun> runs;
    double best_normalized = 0;
    double median_normalized = 0;
    double wall_seconds = 0;
};

std::string experiment_report_json(const ExperimentReport& r);

// Five seeded trainings on the row's generated dataset; desk scale is 1000
// graphs, paper scale 5000.
ExperimentReport reproduce_row(const std::string& row, const std::string& scale,
                               std::uint64_t seed, int threads);

// Merge serialized reports into one CSV (stable columns, rows sorted by id)
// plus a combined JSON document. Duplicate ids raise DuplicateId.
struct MergedReports {
    std::string csv;
    std::string json;
};
MergedReports merge_reports(const std::vector<std::string>& report_jsons);

}  // namespace subcount
