#include "satd/textprep.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace satd {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c >= 'a' && c <= 'z') {
      cur.push_back(static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

// Working state for one stemming pass. b[0..k] is the word; j marks the end
// of the stem a candidate suffix was removed from. The buffer is never
// shrunk while the steps run (only k moves), so the double-l measure in
// step 5 can still see a final 'e' removed moments earlier ("gazelle"),
// matching the reference implementation byte for byte.
struct PorterState {
  std::string b;
  int k = 0;
  int j = 0;

  bool cons(int i) const {
    char c = b[static_cast<std::size_t>(i)];
    switch (c) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of vowel-consonant sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(int i) const {
    if (i < 1) return false;
    if (b[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i - 1)])
      return false;
    return cons(i);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y;
  // used to restore a final -e after stripping (hop-ing -> hope).
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char c = b[static_cast<std::size_t>(i)];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) {
    int len = static_cast<int>(s.size());
    if (len > k + 1) return false;
    if (b.compare(static_cast<std::size_t>(k - len + 1), s.size(), s) != 0)
      return false;
    j = k - len;
    return true;
  }

  void set_to(std::string_view s) {
    std::size_t need = static_cast<std::size_t>(j + 1) + s.size();
    if (b.size() < need) b.resize(need);
    for (std::size_t i = 0; i < s.size(); ++i)
      b[static_cast<std::size_t>(j + 1) + i] = s[i];
    k = j + static_cast<int>(s.size());
  }

  void replace_if_stem(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void step1ab() {
    if (b[static_cast<std::size_t>(k)] == 's') {
      if (ends("sses")) {
        k -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (b[static_cast<std::size_t>(k - 1)] != 's') {
        --k;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k = j;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (doublec(k)) {
        char c = b[static_cast<std::size_t>(k)];
        if (c != 'l' && c != 's' && c != 'z') --k;
      } else if (m() == 1 && cvc(k)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b[static_cast<std::size_t>(k)] = 'i';
  }

  void step2() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 21>
        pairs{{{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
               {"anci", "ance"},   {"izer", "ize"},    {"bli", "ble"},
               {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
               {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
               {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
               {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
               {"iviti", "ive"},   {"biliti", "ble"},  {"logi", "log"}}};
    for (auto [suf, rep] : pairs) {
      if (ends(suf)) {
        replace_if_stem(rep);
        return;
      }
    }
  }

  void step3() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 7>
        pairs{{{"icate", "ic"}, {"ative", ""},  {"alize", "al"},
               {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""},
               {"ness", ""}}};
    for (auto [suf, rep] : pairs) {
      if (ends(suf)) {
        replace_if_stem(rep);
        return;
      }
    }
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> sufs{
        "al",    "ance", "ence", "er",  "ic",  "able", "ible",
        "ant",   "ement", "ment", "ent", "ion", "ou",   "ism",
        "ate",   "iti",  "ous",  "ive", "ize"};
    for (std::string_view suf : sufs) {
      if (!ends(suf)) continue;
      if (suf == "ion") {
        char c = j >= 0 ? b[static_cast<std::size_t>(j)] : '\0';
        if (c != 's' && c != 't') continue;
      }
      if (m() > 1) k = j;
      return;
    }
  }

  void step5() {
    j = k;
    if (b[static_cast<std::size_t>(k)] == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
    }
    // j still marks the entry-time end, so this measure may include an 'e'
    // dropped just above: reference behavior
    if (b[static_cast<std::size_t>(k)] == 'l' && doublec(k) && m() > 1) --k;
  }
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  PorterState s;
  s.b.assign(word);
  s.k = static_cast<int>(word.size()) - 1;
  s.step1ab();
  s.step1c();
  s.step2();
  s.step3();
  s.step4();
  s.step5();
  s.b.resize(static_cast<std::size_t>(s.k + 1));
  return std::move(s.b);
}

std::vector<std::string> preprocess(std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  for (std::string& t : tokens) t = porter_stem(t);
  return tokens;
}

StopWordList::StopWordList(std::vector<std::string> words) {
  for (std::string& w : words) words_.insert(std::move(w));
}

namespace {

std::vector<std::string> read_word_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t");
    std::string w = line.substr(a, b - a + 1);
    if (w.empty() || w[0] == '#') continue;
    for (char& c : w)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words.push_back(std::move(w));
  }
  return words;
}

constexpr std::string_view kDefaultStopWords[] = {
    "a",          "about",    "above",   "after",    "again",     "against",
    "all",        "am",       "an",      "and",      "any",       "are",
    "as",         "at",       "be",      "because",  "been",      "before",
    "being",      "below",    "between", "both",     "but",       "by",
    "can",        "cannot",   "could",   "did",      "do",        "does",
    "doing",      "down",     "during",  "each",     "few",       "for",
    "from",       "further",  "had",     "has",      "have",      "having",
    "he",         "her",      "here",    "hers",     "herself",   "him",
    "himself",    "his",      "how",     "i",        "if",        "in",
    "into",       "is",       "it",      "its",      "itself",    "just",
    "me",         "more",     "most",    "my",       "myself",    "no",
    "nor",        "not",      "now",     "of",       "off",       "on",
    "once",       "only",     "or",      "other",    "our",       "ours",
    "ourselves",  "out",      "over",    "own",      "same",      "she",
    "should",     "so",       "some",    "such",     "than",      "that",
    "the",        "their",    "theirs",  "them",     "themselves", "then",
    "there",      "these",    "they",    "this",     "those",     "through",
    "to",         "too",      "under",   "until",    "up",        "very",
    "was",        "we",       "were",    "what",     "when",      "where",
    "which",      "while",    "who",     "whom",     "why",       "will",
    "with",       "would",    "you",     "your",     "yours",     "yourself",
    "yourselves"};

}  // namespace

const StopWordList& StopWordList::defaults() {
  static const StopWordList list = [] {
    std::vector<std::string> words;
    words.reserve(std::size(kDefaultStopWords));
    for (std::string_view w : kDefaultStopWords) words.emplace_back(w);
    return StopWordList(std::move(words));
  }();
  return list;
}

StopWordList StopWordList::load(const std::string& path) {
  return StopWordList(read_word_lines(path));
}

bool StopWordList::contains(std::string_view raw_token) const {
  return words_.find(std::string(raw_token)) != words_.end();
}

std::vector<std::string> preprocess_for_learning(std::string_view text,
                                                 const StopWordList& stops) {
  std::vector<std::string> out;
  for (std::string& t : tokenize(text)) {
    if (stops.contains(t)) continue;
    out.push_back(porter_stem(t));
  }
  return out;
}

std::string sanitize_utf8(std::string_view bytes) {
  static constexpr std::string_view replacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    unsigned char c = static_cast<unsigned char>(bytes[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1Fu;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0Fu;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07u;
    } else {
      out.append(replacement);
      ++i;
      continue;
    }
    bool ok = i + len <= bytes.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80)
        ok = false;
      else
        cp = (cp << 6) | (cc & 0x3Fu);
    }
    if (ok) {
      // reject overlong encodings, surrogates and out-of-range code points
      if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
          (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF))
        ok = false;
    }
    if (ok) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out.append(replacement);
      ++i;
    }
  }
  return out;
}

}  // namespace satd
