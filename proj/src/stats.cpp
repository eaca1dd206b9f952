#include "cmjudge/stats.hpp"

#include "cmjudge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace cmjudge::stats {

namespace {

void require_finite(const std::vector<double> &v, const char *name) {
    for (double d : v)
        if (!std::isfinite(d))
            throw DomainError(std::string(name) + " contains a non-finite entry");
}

void require_pair(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size())
        throw DomainError("score vectors differ in length");
    if (x.size() < 2)
        throw DomainError("score vectors need at least two entries");
    require_finite(x, "x");
    require_finite(y, "y");
}

// Sum of t*(t-1)/2 over runs of equal values in a sorted vector.
double tie_pairs(std::vector<double> sorted) {
    double total = 0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        double t = static_cast<double>(j - i);
        total += t * (t - 1) / 2.0;
        i = j;
    }
    return total;
}

// Counts strict inversions (a[i] > a[j] for i < j) with a merge sort.
long long count_inversions(std::vector<double> &a, std::vector<double> &scratch, size_t lo,
                           size_t hi) {
    if (hi - lo < 2)
        return 0;
    size_t mid = lo + (hi - lo) / 2;
    long long inv = count_inversions(a, scratch, lo, mid) + count_inversions(a, scratch, mid, hi);
    size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            inv += static_cast<long long>(mid - i);
            scratch[k++] = a[j++];
        } else {
            scratch[k++] = a[i++];
        }
    }
    while (i < mid)
        scratch[k++] = a[i++];
    while (j < hi)
        scratch[k++] = a[j++];
    std::copy(scratch.begin() + static_cast<long>(lo), scratch.begin() + static_cast<long>(hi),
              a.begin() + static_cast<long>(lo));
    return inv;
}

} // namespace

std::vector<double> ranks_with_ties(const std::vector<double> &values) {
    require_finite(values, "values");
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && values[order[j]] == values[order[i]])
            ++j;
        // positions i..j-1 (0-based) share the mean of 1-based ranks i+1..j
        double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (size_t k = i; k < j; ++k)
            ranks[order[k]] = mean_rank;
        i = j;
    }
    return ranks;
}

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
    require_pair(x, y);
    const size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw UndefinedCorrelationError("correlation undefined for a constant vector");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double> &x, const std::vector<double> &y) {
    require_pair(x, y);
    return pearson(ranks_with_ties(x), ranks_with_ties(y));
}

double kendall_tau_b(const std::vector<double> &x, const std::vector<double> &y) {
    require_pair(x, y);
    const size_t n = x.size();

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (x[a] != x[b])
            return x[a] < x[b];
        return y[a] < y[b];
    });

    // Joint ties: runs equal in both x and y.
    double n3 = 0;
    {
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j < n && x[order[j]] == x[order[i]] && y[order[j]] == y[order[i]])
                ++j;
            double t = static_cast<double>(j - i);
            n3 += t * (t - 1) / 2.0;
            i = j;
        }
    }

    std::vector<double> xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    double n1 = tie_pairs(xs);
    std::vector<double> ys_sorted = ys;
    std::sort(ys_sorted.begin(), ys_sorted.end());
    double n2 = tie_pairs(ys_sorted);

    // With x ascending and y ascending within x-ties, strict y-inversions are
    // exactly the discordant pairs.
    std::vector<double> scratch(n);
    double discordant = static_cast<double>(count_inversions(ys, scratch, 0, n));

    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1) / 2.0;
    const double denom = (n0 - n1) * (n0 - n2);
    if (denom <= 0.0)
        throw UndefinedCorrelationError("correlation undefined for a constant vector");

    double concordant = n0 - n1 - n2 + n3 - discordant;
    return (concordant - discordant) / std::sqrt(denom);
}

double population_std(const std::vector<double> &values) {
    if (values.empty())
        throw DomainError("population_std of an empty vector");
    require_finite(values, "values");
    double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) {
        double d = v - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(values.size()));
}

double pairwise_mad(const std::vector<double> &values) {
    if (values.size() < 2)
        throw DomainError("pairwise_mad needs at least two entries");
    require_finite(values, "values");
    double total = 0;
    size_t pairs = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        for (size_t j = i + 1; j < values.size(); ++j) {
            total += std::fabs(values[i] - values[j]);
            ++pairs;
        }
    }
    return total / static_cast<double>(pairs);
}

InterRaterMatrix inter_rater_matrix(const std::vector<RaterScores> &raters) {
    if (raters.size() < 2)
        throw DomainError("inter_rater_matrix needs at least two raters");

    const size_t r = raters.size();
    std::vector<std::map<std::string, double>> by_message(r);
    for (size_t i = 0; i < r; ++i)
        for (const auto &[id, score] : raters[i].scores)
            by_message[i][id] = score;

    InterRaterMatrix result;
    result.rater_ids.reserve(r);
    for (const auto &rater : raters)
        result.rater_ids.push_back(rater.rater_id);
    result.coefficients.assign(r, std::vector<double>(r, 1.0));

    for (size_t i = 0; i < r; ++i) {
        for (size_t j = i + 1; j < r; ++j) {
            std::vector<double> a, b;
            for (const auto &[id, score] : by_message[i]) {
                auto it = by_message[j].find(id);
                if (it != by_message[j].end()) {
                    a.push_back(score);
                    b.push_back(it->second);
                }
            }
            if (a.size() < 2)
                throw DomainError("raters " + raters[i].rater_id + " and " + raters[j].rater_id +
                                  " share fewer than two annotated messages");
            double rho = spearman(a, b);
            result.coefficients[i][j] = rho;
            result.coefficients[j][i] = rho;
        }
    }
    return result;
}

} // namespace cmjudge::stats
