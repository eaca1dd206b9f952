#include "cmjudge/corpus.hpp"

#include "cmjudge/errors.hpp"
#include "cmjudge/hash.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace cmjudge::corpus {

using nlohmann::json;

std::string to_string(Language lang) {
    switch (lang) {
    case Language::python:
        return "python";
    case Language::java:
        return "java";
    case Language::other:
        return "other";
    }
    return "other";
}

Language language_from_string(const std::string &s) {
    if (s == "python")
        return Language::python;
    if (s == "java")
        return Language::java;
    if (s == "other")
        return Language::other;
    throw DomainError("unknown language: " + s);
}

std::string to_string(AuthorKind kind) {
    return kind == AuthorKind::human ? "human" : "llm";
}

AuthorKind author_kind_from_string(const std::string &s) {
    if (s == "human")
        return AuthorKind::human;
    if (s == "llm")
        return AuthorKind::llm;
    throw DomainError("unknown author_kind: " + s);
}

const CommitRecord *Corpus::find_commit(const std::string &id) const {
    for (const auto &c : commits)
        if (c.id == id)
            return &c;
    return nullptr;
}

const MessageRecord *Corpus::find_message(const std::string &id) const {
    for (const auto &m : messages)
        if (m.id == id)
            return &m;
    return nullptr;
}

namespace {

std::string require_string(const json &obj, const char *field, long line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string())
        throw ParseError(std::string("missing or non-string field '") + field + "'", line);
    return it->get<std::string>();
}

int require_int(const json &obj, const char *field, long line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_integer())
        throw ParseError(std::string("missing or non-integer field '") + field + "'", line);
    return it->get<int>();
}

CommitRecord parse_commit(const json &obj, long line) {
    CommitRecord c;
    c.id = require_string(obj, "id", line);
    c.language = language_from_string(require_string(obj, "language", line));
    c.diff = require_string(obj, "diff", line);
    if (c.id.empty())
        throw ParseError("commit id is empty", line);
    if (c.diff.empty())
        throw ParseError("commit '" + c.id + "' has an empty diff", line);
    if (auto it = obj.find("repo_ref"); it != obj.end() && !it->is_null())
        c.repo_ref = it->get<std::string>();
    if (auto it = obj.find("messages"); it != obj.end()) {
        if (!it->is_array())
            throw ParseError("field 'messages' is not an array", line);
        for (const auto &m : *it)
            c.messages.push_back(m.get<std::string>());
    }
    return c;
}

MessageRecord parse_message(const json &obj, long line) {
    MessageRecord m;
    m.id = require_string(obj, "id", line);
    m.commit_id = require_string(obj, "commit_id", line);
    m.text = require_string(obj, "text", line);
    m.author_kind = author_kind_from_string(require_string(obj, "author_kind", line));
    if (m.id.empty())
        throw ParseError("message id is empty", line);
    if (m.text.empty())
        throw ParseError("message '" + m.id + "' has empty text", line);
    if (auto it = obj.find("generator"); it != obj.end() && !it->is_null())
        m.generator = it->get<std::string>();
    if (auto it = obj.find("variant_index"); it != obj.end())
        m.variant_index = require_int(obj, "variant_index", line);
    if (m.variant_index < 0)
        throw ParseError("message '" + m.id + "' has negative variant_index", line);
    if (m.author_kind == AuthorKind::human && m.generator)
        throw ParseError("human-authored message '" + m.id + "' carries a generator", line);
    return m;
}

AnnotationRecord parse_annotation(const json &obj, long line) {
    AnnotationRecord a;
    a.message_id = require_string(obj, "message_id", line);
    a.rater_id = require_string(obj, "rater_id", line);
    a.what = require_int(obj, "what", line);
    a.why = require_int(obj, "why", line);
    if (a.what < 0 || a.what > 4 || a.why < 0 || a.why > 4)
        throw ParseError("annotation for '" + a.message_id + "' is off the 0..4 scale", line);
    return a;
}

void check_integrity(const Corpus &corpus) {
    std::set<std::string> commit_ids;
    std::vector<std::string> duplicate_ids;
    for (const auto &c : corpus.commits)
        if (!commit_ids.insert(c.id).second)
            duplicate_ids.push_back(c.id);
    if (!duplicate_ids.empty())
        throw IntegrityError("duplicate commit ids", duplicate_ids);

    std::set<std::string> message_ids;
    for (const auto &m : corpus.messages)
        if (!message_ids.insert(m.id).second)
            duplicate_ids.push_back(m.id);
    if (!duplicate_ids.empty())
        throw IntegrityError("duplicate message ids", duplicate_ids);

    std::vector<std::string> dangling;
    for (const auto &m : corpus.messages)
        if (!commit_ids.count(m.commit_id))
            dangling.push_back(m.commit_id);
    if (!dangling.empty())
        throw IntegrityError("messages reference unknown commits", dangling);

    for (const auto &a : corpus.annotations)
        if (!message_ids.count(a.message_id))
            dangling.push_back(a.message_id);
    if (!dangling.empty())
        throw IntegrityError("annotations reference unknown messages", dangling);

    std::set<std::pair<std::string, std::string>> seen_pairs;
    std::vector<std::string> dup_pairs;
    for (const auto &a : corpus.annotations)
        if (!seen_pairs.insert({a.message_id, a.rater_id}).second)
            dup_pairs.push_back(a.message_id + "/" + a.rater_id);
    if (!dup_pairs.empty())
        throw IntegrityError("duplicate (message_id, rater_id) annotations", dup_pairs);

    // commit.messages back-references must also resolve
    for (const auto &c : corpus.commits)
        for (const auto &mid : c.messages)
            if (!message_ids.count(mid))
                dangling.push_back(mid);
    if (!dangling.empty())
        throw IntegrityError("commits reference unknown messages", dangling);
}

} // namespace

Corpus load_corpus(std::istream &in) {
    Corpus corpus;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception &e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object())
            throw ParseError("record is not an object", line_no);
        std::string kind = require_string(obj, "kind", line_no);
        try {
            if (kind == "commit")
                corpus.commits.push_back(parse_commit(obj, line_no));
            else if (kind == "message")
                corpus.messages.push_back(parse_message(obj, line_no));
            else if (kind == "annotation")
                corpus.annotations.push_back(parse_annotation(obj, line_no));
            else
                throw ParseError("unknown record kind '" + kind + "'", line_no);
        } catch (const DomainError &e) {
            throw ParseError(e.what(), line_no);
        }
    }
    check_integrity(corpus);
    return corpus;
}

Corpus load_corpus_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open corpus file: " + path);
    return load_corpus(in);
}

namespace {

json commit_to_json(const CommitRecord &c) {
    json obj;
    obj["kind"] = "commit";
    obj["id"] = c.id;
    obj["language"] = to_string(c.language);
    obj["diff"] = c.diff;
    if (c.repo_ref)
        obj["repo_ref"] = *c.repo_ref;
    obj["messages"] = c.messages;
    return obj;
}

json message_to_json(const MessageRecord &m) {
    json obj;
    obj["kind"] = "message";
    obj["id"] = m.id;
    obj["commit_id"] = m.commit_id;
    obj["text"] = m.text;
    obj["author_kind"] = to_string(m.author_kind);
    if (m.generator)
        obj["generator"] = *m.generator;
    obj["variant_index"] = m.variant_index;
    return obj;
}

json annotation_to_json(const AnnotationRecord &a) {
    json obj;
    obj["kind"] = "annotation";
    obj["message_id"] = a.message_id;
    obj["rater_id"] = a.rater_id;
    obj["what"] = a.what;
    obj["why"] = a.why;
    return obj;
}

} // namespace

void save_corpus(const Corpus &corpus, std::ostream &out) {
    // nlohmann::json objects keep keys sorted, so dump() is byte-stable.
    auto commits = corpus.commits;
    std::sort(commits.begin(), commits.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
    auto messages = corpus.messages;
    std::sort(messages.begin(), messages.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
    auto annotations = corpus.annotations;
    std::sort(annotations.begin(), annotations.end(), [](const auto &a, const auto &b) {
        return std::tie(a.message_id, a.rater_id) < std::tie(b.message_id, b.rater_id);
    });

    for (const auto &a : annotations)
        out << annotation_to_json(a).dump() << '\n';
    for (const auto &c : commits)
        out << commit_to_json(c).dump() << '\n';
    for (const auto &m : messages)
        out << message_to_json(m).dump() << '\n';
}

void save_corpus_file(const Corpus &corpus, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open corpus file for writing: " + path);
    save_corpus(corpus, out);
}

std::string corpus_hash(const Corpus &corpus) {
    std::ostringstream out;
    save_corpus(corpus, out);
    return sha256_hex(out.str());
}

const std::vector<SanitizeRule> &default_sanitize_rules() {
    static const std::vector<SanitizeRule> rules = {
        {"commitbench-issue-token", "<I>"},
        {"url", R"(https?://[^\s]+)"},
        {"email", R"([A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,})"},
        {"parenthesized-issue", R"(\(#[0-9]+\))"},
        {"issue-number", R"(#[0-9]+)"},
        {"github-issue", R"(\bGH-[0-9]+\b)"},
        {"jira-key", R"(\b[A-Z]+-[0-9]+\b)"},
    };
    return rules;
}

std::string sanitize_message(const std::string &text) {
    return sanitize_message(text, default_sanitize_rules());
}

std::string sanitize_message(const std::string &text, const std::vector<SanitizeRule> &rules) {
    std::string out = text;
    for (const auto &rule : rules) {
        std::regex re(rule.pattern);
        out = std::regex_replace(out, re, " ");
    }
    // Collapse whitespace runs and trim.
    std::string collapsed;
    collapsed.reserve(out.size());
    bool in_space = true; // swallow leading whitespace
    for (unsigned char ch : out) {
        if (std::isspace(ch)) {
            in_space = true;
        } else {
            if (in_space && !collapsed.empty())
                collapsed.push_back(' ');
            in_space = false;
            collapsed.push_back(static_cast<char>(ch));
        }
    }
    return collapsed;
}

bool is_revert(const std::string &text) {
    size_t i = 0;
    auto is_quote = [](unsigned char c) { return c == '"' || c == '\'' || c == '`'; };
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) ||
                               is_quote(static_cast<unsigned char>(text[i]))))
        ++i;
    size_t j = i;
    while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j])))
        ++j;
    std::string token = text.substr(i, j - i);
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return token == "revert";
}

ScorePair aggregate_annotations(const std::vector<AnnotationRecord> &records) {
    if (records.empty())
        throw DomainError("cannot aggregate an empty annotation list");
    const std::string &mid = records.front().message_id;
    double what = 0, why = 0;
    for (const auto &r : records) {
        if (r.message_id != mid)
            throw IntegrityError("annotations mix message ids", {mid, r.message_id});
        what += r.what;
        why += r.why;
    }
    double n = static_cast<double>(records.size());
    return {what / n, why / n};
}

std::vector<std::pair<std::string, ScorePair>> aggregate_all(const Corpus &corpus) {
    std::map<std::string, std::vector<AnnotationRecord>> grouped;
    for (const auto &a : corpus.annotations)
        grouped[a.message_id].push_back(a);
    std::vector<std::pair<std::string, ScorePair>> result;
    result.reserve(grouped.size());
    for (const auto &[id, records] : grouped)
        result.emplace_back(id, aggregate_annotations(records));
    return result;
}

} // namespace cmjudge::corpus
