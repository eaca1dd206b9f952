// Porter stemming algorithm, original 1980 rule tables.

#include "cmjudge/textmetrics.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace cmjudge::textmetrics {

namespace {

// Works on a mutable buffer; k is the index of the last letter of the word,
// j the end of the stem set by the most recent ends() call.
struct Stemmer {
    std::string b;
    int k = 0;
    int j = 0;

    bool cons(int i) const {
        switch (b[static_cast<size_t>(i)]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !cons(i - 1);
        default:
            return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j]: [C](VC)^m[V].
    int m() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j)
                return n;
            if (!cons(i))
                break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j)
                    return n;
                if (cons(i))
                    break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j)
                    return n;
                if (!cons(i))
                    break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j; ++i)
            if (!cons(i))
                return true;
        return false;
    }

    bool doublec(int i) const {
        if (i < 1)
            return false;
        if (b[static_cast<size_t>(i)] != b[static_cast<size_t>(i - 1)])
            return false;
        return cons(i);
    }

    // consonant - vowel - consonant ending at i, last consonant not w/x/y.
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2))
            return false;
        char ch = b[static_cast<size_t>(i)];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char *s) {
        int len = static_cast<int>(std::strlen(s));
        if (len > k + 1)
            return false;
        if (std::memcmp(b.data() + (k - len + 1), s, static_cast<size_t>(len)) != 0)
            return false;
        j = k - len;
        return true;
    }

    void setto(const char *s) {
        int len = static_cast<int>(std::strlen(s));
        b.replace(static_cast<size_t>(j + 1), static_cast<size_t>(k - j), s);
        k = j + len;
    }

    void replace_if_measure(const char *s) {
        if (m() > 0)
            setto(s);
    }

    void step1ab() {
        if (b[static_cast<size_t>(k)] == 's') {
            if (ends("sses"))
                k -= 2;
            else if (ends("ies"))
                setto("i");
            else if (b[static_cast<size_t>(k - 1)] != 's')
                --k;
        }
        if (ends("eed")) {
            if (m() > 0)
                --k;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k = j;
            if (ends("at"))
                setto("ate");
            else if (ends("bl"))
                setto("ble");
            else if (ends("iz"))
                setto("ize");
            else if (doublec(k)) {
                char ch = b[static_cast<size_t>(k)];
                if (ch != 'l' && ch != 's' && ch != 'z')
                    --k;
            } else {
                j = k;
                if (m() == 1 && cvc(k))
                    setto("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem())
            b[static_cast<size_t>(k)] = 'i';
    }

    // First matching suffix ends the step whether or not the measure
    // condition lets the replacement fire.
    void map_suffixes(const std::pair<const char *, const char *> *rules, size_t count) {
        for (size_t i = 0; i < count; ++i) {
            if (ends(rules[i].first)) {
                replace_if_measure(rules[i].second);
                return;
            }
        }
    }

    void step2() {
        static const std::pair<const char *, const char *> rules[] = {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
        };
        map_suffixes(rules, std::size(rules));
    }

    void step3() {
        static const std::pair<const char *, const char *> rules[] = {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        };
        map_suffixes(rules, std::size(rules));
    }

    void step4() {
        static const char *suffixes[] = {
            "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
            "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
        };
        for (const char *s : suffixes) {
            if (!ends(s))
                continue;
            if (std::strcmp(s, "ion") == 0) {
                if (j < 0 || (b[static_cast<size_t>(j)] != 's' && b[static_cast<size_t>(j)] != 't'))
                    return;
            }
            if (m() > 1)
                k = j;
            return;
        }
    }

    void step5() {
        j = k;
        if (b[static_cast<size_t>(k)] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k - 1)))
                --k;
        }
        if (b[static_cast<size_t>(k)] == 'l' && doublec(k) && m() > 1)
            --k;
    }

    std::string run() {
        if (k <= 1)
            return b; // length <= 2: leave unchanged
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        return b.substr(0, static_cast<size_t>(k + 1));
    }
};

} // namespace

std::string porter_stem(const std::string &token) {
    if (token.empty())
        return token;
    for (char c : token)
        if (c < 'a' || c > 'z')
            return token;
    Stemmer st;
    st.b = token;
    st.k = static_cast<int>(token.size()) - 1;
    return st.run();
}

} // namespace cmjudge::textmetrics
