#include "cmjudge/semmetrics.hpp"

#include "cmjudge/errors.hpp"
#include "cmjudge/hash.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace cmjudge::semmetrics {

using nlohmann::json;

double cosine(const EmbeddingVector &u, const EmbeddingVector &v) {
    if (u.dim() != v.dim())
        throw DomainError("cosine over vectors of different dimension");
    if (u.dim() == 0)
        throw DomainError("cosine over empty vectors");
    double dot = 0, nu = 0, nv = 0;
    for (size_t i = 0; i < u.values.size(); ++i) {
        if (!std::isfinite(u.values[i]) || !std::isfinite(v.values[i]))
            throw DomainError("cosine over a non-finite vector");
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0)
        throw DomainError("cosine over a zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double sbert_score(const EmbeddingVector &candidate, const EmbeddingVector &reference) {
    return cosine(candidate, reference);
}

namespace {

void check_matrix(const TokenEmbeddingMatrix &m, const char *side) {
    if (m.rows.empty() || m.rows.size() != m.tokens.size())
        throw DomainError(std::string(side) + " matrix rows and tokens must align and be non-empty");
    for (const auto &row : m.rows)
        if (row.dim() != m.rows.front().dim())
            throw DomainError(std::string(side) + " matrix rows differ in dimension");
}

double side_score(const TokenEmbeddingMatrix &from, const TokenEmbeddingMatrix &to,
                  const std::map<std::string, double> *idf) {
    double weighted_sum = 0, weight_total = 0;
    for (size_t i = 0; i < from.rows.size(); ++i) {
        double best = -1.0;
        for (const auto &row : to.rows)
            best = std::max(best, cosine(from.rows[i], row));
        double w = 1.0;
        if (idf) {
            auto it = idf->find(from.tokens[i]);
            w = it == idf->end() ? 1.0 : it->second;
        }
        weighted_sum += w * best;
        weight_total += w;
    }
    if (weight_total == 0.0)
        throw DomainError("bertscore weights sum to zero");
    return weighted_sum / weight_total;
}

} // namespace

BertScore bertscore(const TokenEmbeddingMatrix &candidate, const TokenEmbeddingMatrix &reference,
                    const std::map<std::string, double> *idf) {
    check_matrix(candidate, "candidate");
    check_matrix(reference, "reference");
    if (candidate.rows.front().dim() != reference.rows.front().dim())
        throw DomainError("bertscore matrices differ in embedding dimension");

    BertScore s;
    s.precision = side_score(candidate, reference, idf);
    s.recall = side_score(reference, candidate, idf);
    double denom = s.precision + s.recall;
    s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
    return s;
}

std::string to_string(Granularity g) {
    return g == Granularity::sentence ? "sentence" : "token";
}

EmbeddingBatch fetch_embeddings(EmbeddingProvider &provider, const std::vector<std::string> &texts,
                                Granularity granularity) {
    if (granularity == Granularity::sentence)
        return provider.embed_sentences(texts);
    return provider.embed_tokens(texts);
}

std::string file_store_key(const std::string &text, Granularity granularity) {
    return sha256_hex(to_string(granularity) + "\n" + text);
}

namespace {

EmbeddingVector vector_from_json(const json &arr) {
    if (!arr.is_array())
        throw CapabilityError("embedding payload entry is not an array");
    EmbeddingVector v;
    v.values.reserve(arr.size());
    for (const auto &x : arr) {
        double d = x.get<double>();
        if (!std::isfinite(d))
            throw CapabilityError("embedding payload contains a non-finite value");
        v.values.push_back(d);
    }
    return v;
}

TokenEmbeddingMatrix matrix_from_json(const json &obj) {
    TokenEmbeddingMatrix m;
    for (const auto &t : obj.at("tokens"))
        m.tokens.push_back(t.get<std::string>());
    for (const auto &row : obj.at("rows"))
        m.rows.push_back(vector_from_json(row));
    if (m.tokens.size() != m.rows.size())
        throw CapabilityError("embedding matrix tokens and rows differ in length");
    return m;
}

class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    HttpEmbeddingProvider(std::string url, int timeout_seconds) : timeout_(timeout_seconds) {
        // Split scheme://host[:port] from the request path.
        auto scheme_end = url.find("://");
        auto path_start =
            scheme_end == std::string::npos ? url.find('/') : url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = url;
            path_ = "/";
        } else {
            base_ = url.substr(0, path_start);
            path_ = url.substr(path_start);
        }
    }

    std::vector<EmbeddingVector> embed_sentences(const std::vector<std::string> &texts) override {
        if (texts.empty())
            return {};
        json resp = post(texts, Granularity::sentence);
        auto it = resp.find("vectors");
        if (it == resp.end() || !it->is_array() || it->size() != texts.size())
            throw CapabilityError("provider response lacks a parallel 'vectors' array");
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto &v : *it)
            out.push_back(vector_from_json(v));
        return out;
    }

    std::vector<TokenEmbeddingMatrix> embed_tokens(const std::vector<std::string> &texts) override {
        if (texts.empty())
            return {};
        json resp = post(texts, Granularity::token);
        auto it = resp.find("matrices");
        if (it == resp.end() || !it->is_array() || it->size() != texts.size())
            throw CapabilityError("provider response lacks a parallel 'matrices' array");
        std::vector<TokenEmbeddingMatrix> out;
        out.reserve(texts.size());
        for (const auto &m : *it)
            out.push_back(matrix_from_json(m));
        return out;
    }

  private:
    json post(const std::vector<std::string> &texts, Granularity g) {
        json body;
        body["texts"] = texts;
        body["granularity"] = to_string(g);

        httplib::Client client(base_);
        client.set_connection_timeout(timeout_, 0);
        client.set_read_timeout(timeout_, 0);
        auto res = client.Post(path_, body.dump(), "application/json");
        if (!res)
            throw TransportError("embedding provider unreachable: " + base_, 1);
        if (res->status < 200 || res->status >= 300)
            throw EndpointError(res->body.substr(0, 200), res->status);
        try {
            return json::parse(res->body);
        } catch (const json::exception &e) {
            throw CapabilityError(std::string("provider returned invalid JSON: ") + e.what());
        }
    }

    std::string base_;
    std::string path_;
    int timeout_;
};

class FileStoreEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit FileStoreEmbeddingProvider(std::string dir) : dir_(std::move(dir)) {}

    std::vector<EmbeddingVector> embed_sentences(const std::vector<std::string> &texts) override {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto &text : texts) {
            json payload = load(text, Granularity::sentence);
            auto it = payload.find("vectors");
            if (it == payload.end() || !it->is_array() || it->empty())
                throw CapabilityError("store entry has no 'vectors' payload");
            out.push_back(vector_from_json(it->front()));
        }
        return out;
    }

    std::vector<TokenEmbeddingMatrix> embed_tokens(const std::vector<std::string> &texts) override {
        std::vector<TokenEmbeddingMatrix> out;
        out.reserve(texts.size());
        for (const auto &text : texts) {
            json payload = load(text, Granularity::token);
            auto it = payload.find("matrices");
            if (it == payload.end() || !it->is_array() || it->empty())
                throw CapabilityError("store entry has no 'matrices' payload");
            out.push_back(matrix_from_json(it->front()));
        }
        return out;
    }

  private:
    json load(const std::string &text, Granularity g) {
        std::string key = file_store_key(text, g);
        std::filesystem::path path = std::filesystem::path(dir_) / (key + ".json");
        std::ifstream in(path);
        if (!in)
            throw CapabilityError("no stored embedding for text hash " + key);
        try {
            return json::parse(in);
        } catch (const json::exception &e) {
            throw CapabilityError("store entry " + key + " is invalid JSON: " + e.what());
        }
    }

    std::string dir_;
};

} // namespace

std::unique_ptr<EmbeddingProvider> make_http_provider(const std::string &url,
                                                      int timeout_seconds) {
    return std::make_unique<HttpEmbeddingProvider>(url, timeout_seconds);
}

std::unique_ptr<EmbeddingProvider> make_file_store_provider(const std::string &directory) {
    return std::make_unique<FileStoreEmbeddingProvider>(directory);
}

} // namespace cmjudge::semmetrics
