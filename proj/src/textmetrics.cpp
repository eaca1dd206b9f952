#include "cmjudge/textmetrics.hpp"

#include "cmjudge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace cmjudge::textmetrics {

namespace {

bool is_punct(unsigned char c) {
    return std::ispunct(c) != 0;
}

} // namespace

TokenSequence tokenize(const std::string &text) {
    TokenSequence tokens;
    std::string current;
    bool current_is_punct = false;

    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };

    for (unsigned char ch : text) {
        if (std::isspace(ch)) {
            flush();
            continue;
        }
        unsigned char lowered = static_cast<unsigned char>(std::tolower(ch));
        bool punct = is_punct(lowered);
        if (!current.empty() && punct != current_is_punct)
            flush();
        current_is_punct = punct;
        current.push_back(static_cast<char>(lowered));
    }
    flush();
    return tokens;
}

NGramProfile ngram_counts(const TokenSequence &tokens, int n) {
    NGramProfile counts;
    if (n < 1 || tokens.size() < static_cast<size_t>(n))
        return counts;
    for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (size_t j = 1; j < static_cast<size_t>(n); ++j) {
            key.push_back('\x1f');
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

double bleu(const TokenSequence &candidate, const TokenSequence &reference, int max_n) {
    if (max_n < 1)
        throw DomainError("bleu requires max_n >= 1");
    if (candidate.empty())
        return 0.0;

    const int effective_n = std::min<int>(max_n, static_cast<int>(candidate.size()));
    double log_sum = 0.0;
    for (int n = 1; n <= effective_n; ++n) {
        NGramProfile cand = ngram_counts(candidate, n);
        NGramProfile ref = ngram_counts(reference, n);
        long total = static_cast<long>(candidate.size()) - n + 1;
        long matched = 0;
        for (const auto &[gram, count] : cand) {
            auto it = ref.find(gram);
            if (it != ref.end())
                matched += std::min(count, it->second);
        }
        double p;
        if (matched > 0) {
            p = static_cast<double>(matched) / static_cast<double>(total);
        } else if (n == 1) {
            return 0.0;
        } else {
            p = 1.0 / static_cast<double>(total + 1); // add-one smoothing
        }
        log_sum += std::log(p);
    }

    double bp = 1.0;
    if (candidate.size() < reference.size())
        bp = std::exp(1.0 - static_cast<double>(reference.size()) /
                                static_cast<double>(candidate.size()));
    return bp * std::exp(log_sum / effective_n);
}

double bleu_corpus(const std::vector<TokenSequence> &candidates,
                   const std::vector<TokenSequence> &references, int max_n) {
    if (max_n < 1)
        throw DomainError("bleu requires max_n >= 1");
    if (candidates.size() != references.size())
        throw DomainError("bleu_corpus lists differ in length");
    if (candidates.empty())
        throw DomainError("bleu_corpus over an empty corpus");

    std::vector<long> matched(static_cast<size_t>(max_n), 0);
    std::vector<long> total(static_cast<size_t>(max_n), 0);
    long cand_len = 0, ref_len = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        cand_len += static_cast<long>(candidates[i].size());
        ref_len += static_cast<long>(references[i].size());
        for (int n = 1; n <= max_n; ++n) {
            if (candidates[i].size() < static_cast<size_t>(n))
                continue;
            NGramProfile cand = ngram_counts(candidates[i], n);
            NGramProfile ref = ngram_counts(references[i], n);
            total[static_cast<size_t>(n - 1)] +=
                static_cast<long>(candidates[i].size()) - n + 1;
            for (const auto &[gram, count] : cand) {
                auto it = ref.find(gram);
                if (it != ref.end())
                    matched[static_cast<size_t>(n - 1)] += std::min(count, it->second);
            }
        }
    }

    double log_sum = 0.0;
    int used = 0;
    for (int n = 1; n <= max_n; ++n) {
        long t = total[static_cast<size_t>(n - 1)];
        if (t == 0)
            continue;
        long m = matched[static_cast<size_t>(n - 1)];
        if (m == 0)
            return 0.0;
        log_sum += std::log(static_cast<double>(m) / static_cast<double>(t));
        ++used;
    }
    if (used == 0 || cand_len == 0)
        return 0.0;
    double bp = cand_len < ref_len
                    ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len))
                    : 1.0;
    return bp * std::exp(log_sum / used);
}

size_t lcs_length(const TokenSequence &a, const TokenSequence &b) {
    if (a.empty() || b.empty())
        return 0;
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_l(const TokenSequence &candidate, const TokenSequence &reference) {
    if (candidate.empty() || reference.empty())
        return {};
    double l = static_cast<double>(lcs_length(candidate, reference));
    if (l == 0.0)
        return {};
    RougeScore s;
    s.precision = l / static_cast<double>(candidate.size());
    s.recall = l / static_cast<double>(reference.size());
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

SynonymTable load_synonym_table(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open synonym table: " + path);
    SynonymTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("expected word<TAB>syn1,syn2,...", line_no);
        std::string word = line.substr(0, tab);
        std::vector<std::string> syns;
        std::stringstream rest(line.substr(tab + 1));
        std::string syn;
        while (std::getline(rest, syn, ','))
            if (!syn.empty())
                syns.push_back(syn);
        table[word] = std::move(syns);
    }
    return table;
}

namespace {

struct AlignedPair {
    size_t c_pos;
    size_t r_pos;
};

// (matches, crossings) with lexicographic preference: more matches, then
// fewer crossings.
struct MatchQuality {
    int matches = 0;
    int crossings = 0;
    bool better_than(const MatchQuality &other) const {
        if (matches != other.matches)
            return matches > other.matches;
        return crossings < other.crossings;
    }
};

// Exact maximum-cardinality, minimum-crossing matching over candidate
// positions (in order) against a set of reference positions, via DP on
// (candidate index, used-reference bitmask). Feasible while the reference
// side fits in a bitmask word.
class ExactStageMatcher {
  public:
    ExactStageMatcher(const std::vector<size_t> &cand, const std::vector<size_t> &ref,
                      const std::vector<std::vector<bool>> &allowed)
        : cand_(cand), ref_(ref), allowed_(allowed) {}

    std::vector<AlignedPair> solve() {
        search(0, 0);
        // Reconstruct by replaying the memoized decisions.
        std::vector<AlignedPair> pairs;
        size_t i = 0;
        std::uint32_t mask = 0;
        while (i < cand_.size()) {
            MatchQuality here = lookup(i, mask);
            MatchQuality skip = lookup(i + 1, mask);
            bool took = false;
            for (size_t r = 0; r < ref_.size() && !took; ++r) {
                if (!allowed_[i][r] || (mask & (1u << r)))
                    continue;
                MatchQuality rest = lookup(i + 1, mask | (1u << r));
                MatchQuality total{rest.matches + 1, rest.crossings + crossings_with_prefix(mask, r)};
                if (total.matches == here.matches && total.crossings == here.crossings) {
                    pairs.push_back({cand_[i], ref_[r]});
                    mask |= 1u << r;
                    took = true;
                }
            }
            if (!took && !(skip.matches == here.matches && skip.crossings == here.crossings))
                break; // should not happen; guard against inconsistent memo
            ++i;
        }
        return pairs;
    }

  private:
    int crossings_with_prefix(std::uint32_t mask, size_t r) const {
        // Earlier candidate positions matched to reference positions above r
        // each cross the new pair.
        std::uint32_t above = mask >> (r + 1);
        return static_cast<int>(__builtin_popcount(above));
    }

    MatchQuality lookup(size_t i, std::uint32_t mask) {
        if (i >= cand_.size())
            return {};
        return search(i, mask);
    }

    MatchQuality search(size_t i, std::uint32_t mask) {
        if (i >= cand_.size())
            return {};
        std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | mask;
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;

        MatchQuality best = search(i + 1, mask); // leave candidate i unmatched
        for (size_t r = 0; r < ref_.size(); ++r) {
            if (!allowed_[i][r] || (mask & (1u << r)))
                continue;
            MatchQuality rest = search(i + 1, mask | (1u << r));
            MatchQuality total{rest.matches + 1, rest.crossings + crossings_with_prefix(mask, r)};
            if (total.better_than(best))
                best = total;
        }
        memo_.emplace(key, best);
        return best;
    }

    const std::vector<size_t> &cand_;
    const std::vector<size_t> &ref_;
    const std::vector<std::vector<bool>> &allowed_;
    std::unordered_map<std::uint64_t, MatchQuality> memo_;
};

// Fallback for long references: match candidates left to right to the
// nearest free compatible reference position (leftmost on ties).
std::vector<AlignedPair> greedy_stage_match(const std::vector<size_t> &cand,
                                            const std::vector<size_t> &ref,
                                            const std::vector<std::vector<bool>> &allowed) {
    std::vector<AlignedPair> pairs;
    std::vector<bool> used(ref.size(), false);
    for (size_t i = 0; i < cand.size(); ++i) {
        long best = -1;
        size_t best_dist = 0;
        for (size_t r = 0; r < ref.size(); ++r) {
            if (used[r] || !allowed[i][r])
                continue;
            size_t dist = cand[i] > ref[r] ? cand[i] - ref[r] : ref[r] - cand[i];
            if (best < 0 || dist < best_dist) {
                best = static_cast<long>(r);
                best_dist = dist;
            }
        }
        if (best >= 0) {
            used[static_cast<size_t>(best)] = true;
            pairs.push_back({cand[i], ref[static_cast<size_t>(best)]});
        }
    }
    return pairs;
}

constexpr size_t kExactMatchLimit = 20; // bitmask width bound for the exact DP

// One alignment stage over the still-unmatched positions.
void run_stage(const TokenSequence &candidate, const TokenSequence &reference,
               const std::function<bool(const std::string &, const std::string &)> &compatible,
               std::vector<bool> &cand_used, std::vector<bool> &ref_used,
               std::vector<AlignedPair> &alignment) {
    std::vector<size_t> cand_free, ref_free;
    for (size_t i = 0; i < candidate.size(); ++i)
        if (!cand_used[i])
            cand_free.push_back(i);
    for (size_t j = 0; j < reference.size(); ++j)
        if (!ref_used[j])
            ref_free.push_back(j);
    if (cand_free.empty() || ref_free.empty())
        return;

    std::vector<std::vector<bool>> allowed(cand_free.size(),
                                           std::vector<bool>(ref_free.size(), false));
    bool any = false;
    for (size_t i = 0; i < cand_free.size(); ++i) {
        for (size_t j = 0; j < ref_free.size(); ++j) {
            if (compatible(candidate[cand_free[i]], reference[ref_free[j]])) {
                allowed[i][j] = true;
                any = true;
            }
        }
    }
    if (!any)
        return;

    std::vector<AlignedPair> pairs;
    if (ref_free.size() <= kExactMatchLimit) {
        ExactStageMatcher matcher(cand_free, ref_free, allowed);
        pairs = matcher.solve();
    } else {
        pairs = greedy_stage_match(cand_free, ref_free, allowed);
    }
    for (const auto &p : pairs) {
        cand_used[p.c_pos] = true;
        ref_used[p.r_pos] = true;
        alignment.push_back(p);
    }
}

} // namespace

double meteor(const TokenSequence &candidate, const TokenSequence &reference,
              const SynonymTable &synonyms) {
    if (candidate.empty() || reference.empty())
        return 0.0;

    std::vector<bool> cand_used(candidate.size(), false), ref_used(reference.size(), false);
    std::vector<AlignedPair> alignment;

    // Stage 1: exact surface match.
    run_stage(
        candidate, reference, [](const std::string &a, const std::string &b) { return a == b; },
        cand_used, ref_used, alignment);

    // Stage 2: Porter stem match.
    std::vector<std::string> cand_stems(candidate.size()), ref_stems(reference.size());
    for (size_t i = 0; i < candidate.size(); ++i)
        cand_stems[i] = porter_stem(candidate[i]);
    for (size_t j = 0; j < reference.size(); ++j)
        ref_stems[j] = porter_stem(reference[j]);
    {
        std::unordered_map<std::string, std::string> stem_of;
        for (size_t i = 0; i < candidate.size(); ++i)
            stem_of[candidate[i]] = cand_stems[i];
        for (size_t j = 0; j < reference.size(); ++j)
            stem_of[reference[j]] = ref_stems[j];
        run_stage(
            candidate, reference,
            [&](const std::string &a, const std::string &b) {
                return stem_of.at(a) == stem_of.at(b);
            },
            cand_used, ref_used, alignment);
    }

    // Stage 3: synonym match (either direction).
    if (!synonyms.empty()) {
        auto is_syn = [&](const std::string &a, const std::string &b) {
            auto it = synonyms.find(a);
            if (it != synonyms.end() &&
                std::find(it->second.begin(), it->second.end(), b) != it->second.end())
                return true;
            it = synonyms.find(b);
            return it != synonyms.end() &&
                   std::find(it->second.begin(), it->second.end(), a) != it->second.end();
        };
        run_stage(candidate, reference, is_syn, cand_used, ref_used, alignment);
    }

    const double m = static_cast<double>(alignment.size());
    if (m == 0.0)
        return 0.0;

    double precision = m / static_cast<double>(candidate.size());
    double recall = m / static_cast<double>(reference.size());
    double fmean = 10.0 * precision * recall / (recall + 9.0 * precision);

    std::sort(alignment.begin(), alignment.end(),
              [](const AlignedPair &a, const AlignedPair &b) { return a.c_pos < b.c_pos; });
    int chunks = 0;
    for (size_t i = 0; i < alignment.size(); ++i) {
        if (i == 0 || alignment[i].c_pos != alignment[i - 1].c_pos + 1 ||
            alignment[i].r_pos != alignment[i - 1].r_pos + 1)
            ++chunks;
    }
    double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
    return fmean * (1.0 - penalty);
}

namespace {

using TfIdfVector = std::unordered_map<std::string, double>;

double cosine_sparse(const TfIdfVector &a, const TfIdfVector &b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto &[k, v] : a) {
        na += v * v;
        auto it = b.find(k);
        if (it != b.end())
            dot += v * it->second;
    }
    for (const auto &[k, v] : b)
        nb += v * v;
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace

std::vector<double> cider(const std::vector<TokenSequence> &candidates,
                          const std::vector<TokenSequence> &references) {
    if (candidates.size() != references.size())
        throw DomainError("cider lists differ in length");
    if (candidates.empty())
        throw DomainError("cider over an empty corpus");

    const double n_docs = static_cast<double>(references.size());
    constexpr int kMaxOrder = 4;

    // Document frequencies over the reference side, per n-gram order.
    std::vector<std::unordered_map<std::string, int>> df(kMaxOrder);
    for (const auto &ref : references) {
        for (int n = 1; n <= kMaxOrder; ++n) {
            NGramProfile counts = ngram_counts(ref, n);
            for (const auto &[gram, count] : counts)
                ++df[static_cast<size_t>(n - 1)][gram];
        }
    }

    auto idf = [&](int n, const std::string &gram) {
        const auto &table = df[static_cast<size_t>(n - 1)];
        auto it = table.find(gram);
        int d = it == table.end() ? 0 : it->second;
        return std::log(n_docs / (1.0 + static_cast<double>(d)));
    };

    auto weighted = [&](const TokenSequence &tokens, int n) {
        TfIdfVector vec;
        for (const auto &[gram, count] : ngram_counts(tokens, n))
            vec[gram] = static_cast<double>(count) * idf(n, gram);
        return vec;
    };

    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        double total = 0.0;
        for (int n = 1; n <= kMaxOrder; ++n)
            total += cosine_sparse(weighted(candidates[i], n), weighted(references[i], n));
        scores.push_back(total / kMaxOrder);
    }
    return scores;
}

} // namespace cmjudge::textmetrics
