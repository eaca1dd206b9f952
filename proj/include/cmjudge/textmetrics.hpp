#pragma once

#include <map>
#include <string>
#include <vector>

namespace cmjudge::textmetrics {

// Whitespace-free unicode tokens, in order.
using TokenSequence = std::vector<std::string>;

// Lower-cases, splits on whitespace, and detaches each maximal punctuation
// run as its own token ("Fix NPE, again" -> [fix, npe, ",", again]).
TokenSequence tokenize(const std::string &text);

// Term counts for n-grams of one order; keys are tokens joined by '\x1f'.
using NGramProfile = std::map<std::string, int>;

NGramProfile ngram_counts(const TokenSequence &tokens, int n);

// Standard Porter stemming. Tokens that are not ASCII-lowercase alphabetic
// pass through unchanged.
std::string porter_stem(const std::string &token);

// Sentence-level BLEU: clipped modified n-gram precisions with uniform
// weights over n = 1..min(max_n, |candidate|), brevity penalty
// exp(1 - |r|/|c|) when the candidate is shorter, and add-one smoothing for
// orders >= 2 whose raw match count is zero. Empty candidate scores 0.
double bleu(const TokenSequence &candidate, const TokenSequence &reference, int max_n = 4);

// Corpus-level BLEU over parallel lists: clipped counts pooled across pairs
// before the geometric mean (no smoothing).
double bleu_corpus(const std::vector<TokenSequence> &candidates,
                   const std::vector<TokenSequence> &references, int max_n = 4);

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// ROUGE-L from the longest common subsequence: precision L/|c|, recall
// L/|r|, F1 their harmonic mean (all zeros when L = 0 or either side is
// empty).
RougeScore rouge_l(const TokenSequence &candidate, const TokenSequence &reference);

size_t lcs_length(const TokenSequence &a, const TokenSequence &b);

// word -> alternatives, both directions consulted during matching.
using SynonymTable = std::map<std::string, std::vector<std::string>>;

// Loads `word<TAB>syn1,syn2,...` lines.
SynonymTable load_synonym_table(const std::string &path);

// METEOR with the original constants: staged unigram alignment (exact, then
// Porter stems, then synonyms), Fmean = 10PR/(R+9P), fragmentation penalty
// 0.5*(chunks/matches)^3. Zero matches scores 0.
double meteor(const TokenSequence &candidate, const TokenSequence &reference,
              const SynonymTable &synonyms = {});

// CIDEr over a parallel corpus: for n = 1..4 the cosine between TF-IDF
// n-gram vectors (TF = in-message count, IDF = log(N / (1 + df)) with df
// counted over the references), averaged over n. Plain variant: no x10
// scaling and no length penalty.
std::vector<double> cider(const std::vector<TokenSequence> &candidates,
                          const std::vector<TokenSequence> &references);

// Identifies the metric variant in report output.
inline constexpr const char *kCiderVariant = "cider-plain";

} // namespace cmjudge::textmetrics
