#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cmjudge::corpus {

enum class Language { python, java, other };

std::string to_string(Language lang);
Language language_from_string(const std::string &s);

enum class AuthorKind { human, llm };

std::string to_string(AuthorKind kind);
AuthorKind author_kind_from_string(const std::string &s);

// One code change: the unified diff plus bookkeeping.
struct CommitRecord {
    std::string id;
    Language language = Language::other;
    std::string diff;
    std::optional<std::string> repo_ref;
    std::vector<std::string> messages; // MessageRecord ids
};

// One commit message with author provenance.
struct MessageRecord {
    std::string id;
    std::string commit_id;
    std::string text;
    AuthorKind author_kind = AuthorKind::human;
    std::optional<std::string> generator; // model name when author_kind == llm
    int variant_index = 0;                // 0 = original, 1..k = paraphrases
};

// One rater's scores for one message.
struct AnnotationRecord {
    std::string message_id;
    std::string rater_id;
    int what = 0; // 0..4
    int why = 0;  // 0..4
};

// Averaged (What, Why) scores; both components in [0, 4].
struct ScorePair {
    double what = 0.0;
    double why = 0.0;
};

struct Corpus {
    std::vector<CommitRecord> commits;
    std::vector<MessageRecord> messages;
    std::vector<AnnotationRecord> annotations;

    const CommitRecord *find_commit(const std::string &id) const;
    const MessageRecord *find_message(const std::string &id) const;
};

// Parses line-delimited records (kind in {commit, message, annotation}) and
// checks every referential invariant. Malformed lines raise ParseError with
// the line number; dangling references raise IntegrityError listing the ids.
// Records come back in input order.
Corpus load_corpus(std::istream &in);
Corpus load_corpus_file(const std::string &path);

// Emits records sorted by (kind, id) with alphabetically ordered fields, so
// equal corpora serialize to identical bytes.
void save_corpus(const Corpus &corpus, std::ostream &out);
void save_corpus_file(const Corpus &corpus, const std::string &path);

// SHA-256 of the canonical (save_corpus) serialization.
std::string corpus_hash(const Corpus &corpus);

// One removal rule applied by sanitize_message, in order.
struct SanitizeRule {
    std::string name;
    std::string pattern; // ECMAScript regex
};

const std::vector<SanitizeRule> &default_sanitize_rules();

// Strips issue tags, URLs and email addresses, then collapses whitespace runs
// to single spaces and trims. Idempotent; never increases length.
std::string sanitize_message(const std::string &text);
std::string sanitize_message(const std::string &text, const std::vector<SanitizeRule> &rules);

// True iff the message begins with the token "revert" (case-insensitive)
// after leading whitespace and quotation marks.
bool is_revert(const std::string &text);

// Arithmetic mean of the given annotations, which must be non-empty and share
// one message_id.
ScorePair aggregate_annotations(const std::vector<AnnotationRecord> &records);

// Mean (What, Why) per message over all annotations, keyed by message id.
std::vector<std::pair<std::string, ScorePair>> aggregate_all(const Corpus &corpus);

} // namespace cmjudge::corpus
