#ifndef DFC_HARNESS_EXPERIMENTS_HPP
#define DFC_HARNESS_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dfc/harness/distribution.hpp"
#include "dfc/harness/report.hpp"

namespace dfc::harness {

/**
 * Path of k catalogs, each n keys from the distribution; q uniform queries
 * over the key range, each one path_search from the first catalog to the last.
 * Group: n. Fields per query:
 *   trial, sum_log2_delta, per_k (sum_log2_delta / k), finger_steps,
 *   entry_steps, max_delta, steps_per_edge_bound (max over edges of
 *   finger_steps / (1 + log2 delta)).
 * With `identical` set every catalog is a copy of the first.
 */
struct DiscrepancyParams {
    Distribution dist;
    std::size_t k = 64;
    std::vector<std::size_t> n_list{4096};
    std::size_t queries = 1000;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    bool identical = false;
    unsigned threads = 1;
};

/// Group: n. Fields per trial: count, h_n, ratio (count / h_n).
struct MaximaParams {
    Distribution dist;
    std::vector<std::size_t> n_list{1024};
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

/**
 * For each n a set of n points is built and then `ops` rounds are run, each
 * one insert, one NN query at a uniform location in the unit square, one NN
 * query on the boundary of [-1,2]^2 (outside the data), and one delete of a
 * random point. Group: n. Fields per round:
 *   insert_ns, delete_ns, query_ns, candidates, outside_query_ns, outside_candidates.
 * Candidates are staircase sizes summed over the four quadrants. The *_ns
 * fields are wall-clock times and vary between runs.
 */
struct NnScalingParams {
    Distribution dist;
    std::vector<std::size_t> n_list{1024, 4096, 16384, 65536};
    std::size_t ops = 1000;
    std::uint64_t seed = 1;
};

ExperimentReport experiment_discrepancy_sum(const DiscrepancyParams& params);
ExperimentReport experiment_maxima_count(const MaximaParams& params);
ExperimentReport experiment_nn_scaling(const NnScalingParams& params);

/// Runs fn(0..count-1) on up to `threads` workers and returns the results in index order.
std::vector<std::vector<Record>> run_trials(std::size_t count, unsigned threads,
                                            const std::function<std::vector<Record>(std::size_t)>& fn);

}  // namespace dfc::harness

#endif
