#pragma once

#include "cmjudge/textmetrics.hpp"

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cmjudge::semmetrics {

// Fixed-length real vector; all entries finite.
struct EmbeddingVector {
    std::vector<double> values;

    size_t dim() const { return values.size(); }
};

// One embedding row per token.
struct TokenEmbeddingMatrix {
    textmetrics::TokenSequence tokens;
    std::vector<EmbeddingVector> rows;
};

// dot(u,v) / (|u||v|). Throws DomainError on dimension mismatch or a zero
// vector.
double cosine(const EmbeddingVector &u, const EmbeddingVector &v);

// Sentence-level similarity: cosine of the two sentence embeddings.
double sbert_score(const EmbeddingVector &candidate, const EmbeddingVector &reference);

struct BertScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Greedy token matching: precision averages each candidate token's best
// cosine against the reference (weighted by idf when supplied, default
// weight 1), recall mirrors it from the reference side, f1 is the harmonic
// mean. No baseline rescaling.
BertScore bertscore(const TokenEmbeddingMatrix &candidate, const TokenEmbeddingMatrix &reference,
                    const std::map<std::string, double> *idf = nullptr);

enum class Granularity { sentence, token };

std::string to_string(Granularity g);

// Source of embeddings. Implementations must preserve input order.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed_sentences(const std::vector<std::string> &texts) = 0;
    virtual std::vector<TokenEmbeddingMatrix>
    embed_tokens(const std::vector<std::string> &texts) = 0;
};

using EmbeddingBatch =
    std::variant<std::vector<EmbeddingVector>, std::vector<TokenEmbeddingMatrix>>;

// Order-preserving fetch at the requested granularity.
EmbeddingBatch fetch_embeddings(EmbeddingProvider &provider, const std::vector<std::string> &texts,
                                Granularity granularity);

// POSTs {"texts": [...], "granularity": "..."} to the configured URL and
// expects {"vectors": [[...]]} or {"matrices": [{"tokens": [...], "rows":
// [[...]]}]}.
std::unique_ptr<EmbeddingProvider> make_http_provider(const std::string &url,
                                                      int timeout_seconds = 60);

// Reads one JSON file per text from a directory; files are named
// sha256(granularity + "\n" + text) + ".json" and hold the single-entry
// response payload. Missing entries raise CapabilityError naming the hash.
std::unique_ptr<EmbeddingProvider> make_file_store_provider(const std::string &directory);

// The file name (without extension) used by the file store for a text.
std::string file_store_key(const std::string &text, Granularity granularity);

} // namespace cmjudge::semmetrics
