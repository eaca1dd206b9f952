#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cmjudge::stats {

// 1-based fractional ranks; tied values receive the mean of the ranks they
// span. Input entries must be finite.
std::vector<double> ranks_with_ties(const std::vector<double> &values);

// Spearman rank correlation with tie correction: Pearson correlation of the
// fractional rank vectors. Throws UndefinedCorrelationError when either input
// is constant, DomainError on length mismatch or n < 2.
double spearman(const std::vector<double> &x, const std::vector<double> &y);

// Kendall tau-b with tie-corrected denominator
//   (C - D) / sqrt((n0 - n1)(n0 - n2)),   n0 = n(n-1)/2.
// Computed in O(n log n) via merge-sort inversion counting, not pair
// enumeration. Same error contract as spearman.
double kendall_tau_b(const std::vector<double> &x, const std::vector<double> &y);

// Population standard deviation (divisor n). Length >= 1.
double population_std(const std::vector<double> &values);

// Mean of |x_i - x_j| over all unordered pairs i < j. Length >= 2.
double pairwise_mad(const std::vector<double> &values);

// Plain Pearson correlation; exposed because spearman is defined through it.
double pearson(const std::vector<double> &x, const std::vector<double> &y);

// One rater's scores for one dimension, keyed by message id.
struct RaterScores {
    std::string rater_id;
    std::vector<std::pair<std::string, double>> scores; // (message_id, score)
};

// Symmetric matrix of pairwise Spearman coefficients over co-annotated
// messages, unit diagonal. Rater order in the result follows the input order.
// Throws DomainError naming the rater pair when two raters share fewer than
// two messages.
struct InterRaterMatrix {
    std::vector<std::string> rater_ids;
    std::vector<std::vector<double>> coefficients;
};

InterRaterMatrix inter_rater_matrix(const std::vector<RaterScores> &raters);

} // namespace cmjudge::stats
