#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "audioeval/errors.hpp"
#include "audioeval/util.hpp"

namespace audioeval::metrics {

// ===========================================================================
// Text normalization
// ===========================================================================

struct NormalizedText {
  std::vector<std::string> tokens;
  bool operator==(const NormalizedText&) const = default;
};

namespace detail {

// Decodes UTF-8 into codepoints; bytes of invalid sequences pass through
// one-by-one so normalization never throws on dirty model output.
inline std::vector<uint32_t> decode_utf8(std::string_view s) {
  std::vector<uint32_t> cps;
  cps.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    uint32_t cp = c;
    size_t extra = 0;
    if (c >= 0xf0)
      extra = 3, cp = c & 0x07;
    else if (c >= 0xe0)
      extra = 2, cp = c & 0x0f;
    else if (c >= 0xc0)
      extra = 1, cp = c & 0x1f;
    if (extra > 0 && i + extra < s.size()) {
      bool ok = true;
      uint32_t acc = cp;
      for (size_t k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xc0) != 0x80) {
          ok = false;
          break;
        }
        acc = (acc << 6) | (cc & 0x3f);
      }
      if (ok) {
        cps.push_back(acc);
        i += extra + 1;
        continue;
      }
    }
    cps.push_back(c);
    ++i;
  }
  return cps;
}

inline void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

inline bool is_space_cp(uint32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0xa0 || cp == 0x2028 || cp == 0x2029 ||
         (cp >= 0x2000 && cp <= 0x200a) || cp == 0x3000;
}

// ASCII punctuation plus the common Unicode punctuation blocks seen in
// transcripts (curly quotes, dashes, ellipsis, CJK stops, fullwidth marks).
inline bool is_punct_cp(uint32_t cp) {
  if (cp < 0x80) {
    static constexpr std::string_view kAscii = "!\"#%&'()*,-./:;?@[\\]_{}";
    return kAscii.find(static_cast<char>(cp)) != std::string_view::npos;
  }
  switch (cp) {
    case 0xa1: case 0xa7: case 0xab: case 0xb6: case 0xb7: case 0xbb: case 0xbf:
    case 0x3001: case 0x3002: case 0x3008: case 0x3009: case 0x300a: case 0x300b:
    case 0x300c: case 0x300d: case 0xff01: case 0xff02: case 0xff08: case 0xff09:
    case 0xff0c: case 0xff0e: case 0xff1a: case 0xff1b: case 0xff1f:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205e);
  }
}

inline bool is_word_cp(uint32_t cp) { return !is_space_cp(cp) && !is_punct_cp(cp); }

}  // namespace detail

// Lowercases (ASCII range), strips punctuation except intra-word apostrophes,
// splits on whitespace. "don't STOP" -> [don't, stop].
inline NormalizedText normalize_text(std::string_view raw) {
  auto cps = detail::decode_utf8(raw);
  NormalizedText out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      out.tokens.push_back(token);
      token.clear();
    }
  };
  for (size_t i = 0; i < cps.size(); ++i) {
    uint32_t cp = cps[i];
    if (detail::is_space_cp(cp)) {
      flush();
    } else if (detail::is_punct_cp(cp)) {
      bool apostrophe = cp == '\'' || cp == 0x2019;
      if (apostrophe && !token.empty() && i + 1 < cps.size() &&
          detail::is_word_cp(cps[i + 1])) {
        token.push_back('\'');  // curly apostrophes normalize to ASCII
      }
      // otherwise dropped
    } else {
      if (cp < 0x80) cp = static_cast<uint32_t>(std::tolower(static_cast<int>(cp)));
      detail::append_utf8(token, cp);
    }
  }
  flush();
  return out;
}

// ===========================================================================
// Word alignment (Levenshtein with deterministic traceback)
// ===========================================================================

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

struct AlignmentOp {
  EditOp kind;
  // Index into ref/hyp token lists; -1 when the op does not touch that side.
  int ref_index = -1;
  int hyp_index = -1;
};

struct Alignment {
  std::vector<AlignmentOp> ops;
  size_t matches = 0;
  size_t substitutions = 0;
  size_t insertions = 0;
  size_t deletions = 0;
  size_t cost() const { return substitutions + insertions + deletions; }
};

// Word-level edit distance, cost only. Two-row DP.
inline size_t edit_distance(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
  const size_t m = a.size(), n = b.size();
  std::vector<size_t> prev(n + 1), cur(n + 1);
  for (size_t j = 0; j <= n; ++j) prev[j] = j;
  for (size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= n; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// Optimal word alignment. Equal-cost ties resolve match > substitute >
// delete > insert during the backward traceback, so output is deterministic.
inline Alignment align(const NormalizedText& ref, const NormalizedText& hyp) {
  const auto& r = ref.tokens;
  const auto& h = hyp.tokens;
  const size_t m = r.size(), n = h.size();
  std::vector<std::vector<size_t>> dp(m + 1, std::vector<size_t>(n + 1));
  for (size_t i = 0; i <= m; ++i) dp[i][0] = i;
  for (size_t j = 0; j <= n; ++j) dp[0][j] = j;
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j) {
      size_t sub = dp[i - 1][j - 1] + (r[i - 1] == h[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }

  Alignment out;
  size_t i = m, j = n;
  std::vector<AlignmentOp> rev;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && r[i - 1] == h[j - 1] && dp[i - 1][j - 1] == dp[i][j]) {
      rev.push_back({EditOp::kMatch, int(i - 1), int(j - 1)});
      --i, --j;
    } else if (i > 0 && j > 0 && dp[i - 1][j - 1] + 1 == dp[i][j]) {
      rev.push_back({EditOp::kSubstitute, int(i - 1), int(j - 1)});
      --i, --j;
    } else if (i > 0 && dp[i - 1][j] + 1 == dp[i][j]) {
      rev.push_back({EditOp::kDelete, int(i - 1), -1});
      --i;
    } else {
      rev.push_back({EditOp::kInsert, -1, int(j - 1)});
      --j;
    }
  }
  out.ops.assign(rev.rbegin(), rev.rend());
  for (const auto& op : out.ops) {
    switch (op.kind) {
      case EditOp::kMatch: ++out.matches; break;
      case EditOp::kSubstitute: ++out.substitutions; break;
      case EditOp::kInsert: ++out.insertions; break;
      case EditOp::kDelete: ++out.deletions; break;
    }
  }
  return out;
}

// WER = (S + D + I) / |ref|. Empty references are a per-sample error, not 0.
inline double wer(const NormalizedText& ref, const NormalizedText& hyp) {
  if (ref.tokens.empty()) throw EmptyReferenceError();
  Alignment a = align(ref, hyp);
  return static_cast<double>(a.cost()) / static_cast<double>(ref.tokens.size());
}

// ===========================================================================
// Speaker-tagged transcripts
//
// Grammar: a transcript is whitespace-separated items; "<spk:LABEL>" switches
// the current speaker label, every other item is a word carrying the current
// label. Text before the first tag gets label "spk0".
// ===========================================================================

struct TaggedWord {
  std::string token;
  std::string speaker;
  bool operator==(const TaggedWord&) const = default;
};

struct SpeakerTaggedTranscript {
  std::vector<TaggedWord> words;
  bool operator==(const SpeakerTaggedTranscript&) const = default;

  std::vector<std::string> tokens() const {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(w.token);
    return out;
  }
};

// Parses the tag grammar. When `normalize` is set (the default, and what the
// scorers use), each word runs through normalize_text; words that normalize
// away (punctuation-only) are dropped.
inline SpeakerTaggedTranscript parse_speaker_tagged(std::string_view text,
                                                    bool normalize = true) {
  SpeakerTaggedTranscript out;
  std::string current = "spk0";
  for (auto& item : util::split_whitespace(text)) {
    std::string word = item;
    if (item.rfind("<spk:", 0) == 0) {
      auto close = item.find('>');
      if (close != std::string::npos) {
        std::string label = item.substr(5, close - 5);
        if (!label.empty()) current = label;
        word = item.substr(close + 1);  // tolerate "<spk:A>hello"
        if (word.empty()) continue;
      }
    }
    if (normalize) {
      for (auto& tok : normalize_text(word).tokens)
        out.words.push_back({tok, current});
    } else {
      out.words.push_back({word, current});
    }
  }
  return out;
}

inline std::string serialize_speaker_tagged(const SpeakerTaggedTranscript& t) {
  std::string out;
  std::string current;
  bool first = true;
  for (const auto& w : t.words) {
    if (!first) out.push_back(' ');
    if (w.speaker != current) {
      out += "<spk:" + w.speaker + "> ";
      current = w.speaker;
    }
    out += w.token;
    first = false;
  }
  return out;
}

// ===========================================================================
// Minimum-cost assignment (Hungarian algorithm, O(n^3), square matrix)
// ===========================================================================

struct AssignmentResult {
  double total_cost = 0.0;
  std::vector<size_t> row_to_col;
};

inline AssignmentResult solve_assignment_min(
    const std::vector<std::vector<double>>& cost) {
  const size_t n = cost.size();
  if (n == 0) return {};
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      size_t i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  AssignmentResult res;
  res.row_to_col.assign(n, 0);
  for (size_t j = 1; j <= n; ++j) {
    res.row_to_col[p[j] - 1] = j - 1;
    res.total_cost += cost[p[j] - 1][j - 1];
  }
  return res;
}

// ===========================================================================
// WDER
// ===========================================================================

struct WderResult {
  double value = 0.0;
  size_t aligned_pairs = 0;
  size_t disagreements = 0;
  std::map<std::string, std::string> speaker_map;  // hyp label -> ref label
};

namespace detail {

struct LabeledPairs {
  std::vector<std::string> ref_labels;  // distinct, order of appearance
  std::vector<std::string> hyp_labels;
  // agree[h][r] = aligned pairs carrying hyp label h and ref label r
  std::vector<std::vector<size_t>> agree;
  size_t total = 0;
};

inline LabeledPairs collect_aligned_pairs(const SpeakerTaggedTranscript& ref,
                                          const SpeakerTaggedTranscript& hyp) {
  LabeledPairs lp;
  auto index_of = [](std::vector<std::string>& labels, const std::string& l) {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return i;
    labels.push_back(l);
    return labels.size() - 1;
  };
  NormalizedText rt{ref.tokens()}, ht{hyp.tokens()};
  Alignment a = align(rt, ht);
  std::vector<std::pair<size_t, size_t>> pairs;
  for (const auto& op : a.ops)
    if (op.kind == EditOp::kMatch || op.kind == EditOp::kSubstitute)
      pairs.emplace_back(op.ref_index, op.hyp_index);
  for (auto [ri, hi] : pairs) {
    size_t r = index_of(lp.ref_labels, ref.words[ri].speaker);
    size_t h = index_of(lp.hyp_labels, hyp.words[hi].speaker);
    if (lp.agree.size() < lp.hyp_labels.size())
      lp.agree.resize(lp.hyp_labels.size());
    for (auto& row : lp.agree) row.resize(lp.ref_labels.size(), 0);
    ++lp.agree[h][r];
  }
  lp.total = pairs.size();
  return lp;
}

inline WderResult wder_from_agreement(const LabeledPairs& lp,
                                      size_t best_agree,
                                      const std::vector<size_t>& hyp_to_ref) {
  WderResult res;
  res.aligned_pairs = lp.total;
  res.disagreements = lp.total - best_agree;
  res.value = static_cast<double>(res.disagreements) / static_cast<double>(lp.total);
  for (size_t h = 0; h < lp.hyp_labels.size(); ++h) {
    size_t r = hyp_to_ref[h];
    if (r < lp.ref_labels.size())
      res.speaker_map[lp.hyp_labels[h]] = lp.ref_labels[r];
  }
  return res;
}

}  // namespace detail

// Disagreement fraction over aligned pairs under a caller-supplied
// hyp->ref label map. Hyp labels missing from the map never agree.
inline double wder_with_map(const SpeakerTaggedTranscript& ref,
                            const SpeakerTaggedTranscript& hyp,
                            const std::map<std::string, std::string>& speaker_map) {
  auto lp = detail::collect_aligned_pairs(ref, hyp);
  if (lp.total == 0) throw NoAlignedPairsError();
  size_t agree = 0;
  for (size_t h = 0; h < lp.hyp_labels.size(); ++h) {
    auto it = speaker_map.find(lp.hyp_labels[h]);
    if (it == speaker_map.end()) continue;
    for (size_t r = 0; r < lp.ref_labels.size(); ++r)
      if (lp.ref_labels[r] == it->second) agree += lp.agree[h][r];
  }
  return static_cast<double>(lp.total - agree) / static_cast<double>(lp.total);
}

// Exhaustive minimization over label bijections (reference route; use for
// small label sets and as the oracle for the assignment route).
inline WderResult wder_exhaustive(const SpeakerTaggedTranscript& ref,
                                  const SpeakerTaggedTranscript& hyp) {
  auto lp = detail::collect_aligned_pairs(ref, hyp);
  if (lp.total == 0) throw NoAlignedPairsError();
  size_t n = std::max(lp.ref_labels.size(), lp.hyp_labels.size());
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  size_t best = 0;
  std::vector<size_t> best_perm = perm;
  do {
    size_t agree = 0;
    for (size_t h = 0; h < lp.hyp_labels.size(); ++h) {
      size_t r = perm[h];
      if (r < lp.ref_labels.size()) agree += lp.agree[h][r];
    }
    if (agree > best) {
      best = agree;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return detail::wder_from_agreement(lp, best, best_perm);
}

// Assignment-solver route for larger label sets.
inline WderResult wder_assignment(const SpeakerTaggedTranscript& ref,
                                  const SpeakerTaggedTranscript& hyp) {
  auto lp = detail::collect_aligned_pairs(ref, hyp);
  if (lp.total == 0) throw NoAlignedPairsError();
  size_t n = std::max(lp.ref_labels.size(), lp.hyp_labels.size());
  // Maximize agreement == minimize (total - agree); pad with zero agreement.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (size_t h = 0; h < n; ++h)
    for (size_t r = 0; r < n; ++r) {
      size_t agr = (h < lp.hyp_labels.size() && r < lp.ref_labels.size())
                       ? lp.agree[h][r]
                       : 0;
      cost[h][r] = -static_cast<double>(agr);
    }
  auto sol = solve_assignment_min(cost);
  size_t best = static_cast<size_t>(-sol.total_cost + 0.5);
  return detail::wder_from_agreement(lp, best, sol.row_to_col);
}

inline WderResult wder(const SpeakerTaggedTranscript& ref,
                       const SpeakerTaggedTranscript& hyp) {
  auto lp = detail::collect_aligned_pairs(ref, hyp);
  if (lp.total == 0) throw NoAlignedPairsError();
  size_t n = std::max(lp.ref_labels.size(), lp.hyp_labels.size());
  return n <= 8 ? wder_exhaustive(ref, hyp) : wder_assignment(ref, hyp);
}

// ===========================================================================
// cpWER
// ===========================================================================

namespace detail {

using SpeakerGroups = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline SpeakerGroups group_by_speaker(const SpeakerTaggedTranscript& t) {
  SpeakerGroups groups;
  for (const auto& w : t.words) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == w.speaker; });
    if (it == groups.end()) {
      groups.push_back({w.speaker, {w.token}});
    } else {
      it->second.push_back(w.token);
    }
  }
  return groups;
}

struct CpWerMatrix {
  std::vector<std::vector<double>> cost;  // rows: hyp (padded), cols: ref (padded)
  size_t ref_words = 0;
  size_t n = 0;
};

inline CpWerMatrix cpwer_matrix(const SpeakerTaggedTranscript& ref,
                                const SpeakerTaggedTranscript& hyp) {
  auto rg = group_by_speaker(ref);
  auto hg = group_by_speaker(hyp);
  CpWerMatrix m;
  for (const auto& g : rg) m.ref_words += g.second.size();
  if (rg.empty() || m.ref_words == 0) throw EmptyReferenceError();
  m.n = std::max(rg.size(), hg.size());
  static const std::vector<std::string> kEmpty;
  m.cost.assign(m.n, std::vector<double>(m.n, 0.0));
  for (size_t h = 0; h < m.n; ++h)
    for (size_t r = 0; r < m.n; ++r) {
      const auto& hw = h < hg.size() ? hg[h].second : kEmpty;
      const auto& rw = r < rg.size() ? rg[r].second : kEmpty;
      m.cost[h][r] = static_cast<double>(edit_distance(rw, hw));
    }
  return m;
}

}  // namespace detail

// Brute-force over all speaker permutations.
inline double cpwer_exhaustive(const SpeakerTaggedTranscript& ref,
                               const SpeakerTaggedTranscript& hyp) {
  auto m = detail::cpwer_matrix(ref, hyp);
  std::vector<size_t> perm(m.n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    for (size_t h = 0; h < m.n; ++h) total += m.cost[h][perm[h]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(m.ref_words);
}

// Optimal-assignment route on the pairwise edit-distance matrix.
inline double cpwer_assignment(const SpeakerTaggedTranscript& ref,
                               const SpeakerTaggedTranscript& hyp) {
  auto m = detail::cpwer_matrix(ref, hyp);
  return solve_assignment_min(m.cost).total_cost / static_cast<double>(m.ref_words);
}

inline double cpwer(const SpeakerTaggedTranscript& ref,
                    const SpeakerTaggedTranscript& hyp) {
  auto m = detail::cpwer_matrix(ref, hyp);
  double best;
  if (m.n <= 8) {
    std::vector<size_t> perm(m.n);
    std::iota(perm.begin(), perm.end(), 0);
    best = std::numeric_limits<double>::infinity();
    do {
      double total = 0;
      for (size_t h = 0; h < m.n; ++h) total += m.cost[h][perm[h]];
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    best = solve_assignment_min(m.cost).total_cost;
  }
  return best / static_cast<double>(m.ref_words);
}

// ===========================================================================
// Structured match
// ===========================================================================

enum class Canonicalizer { kVerbatim, kWhitespaceCaseFold };

inline int structured_match_score(std::string_view ref, std::string_view hyp,
                                  Canonicalizer c) {
  if (c == Canonicalizer::kVerbatim) return ref == hyp ? 1 : 0;
  auto canon = [](std::string_view s) {
    return util::to_lower_ascii(util::collapse_whitespace(s));
  };
  return canon(ref) == canon(hyp) ? 1 : 0;
}

// ===========================================================================
// Judge verdict parsing
// ===========================================================================

namespace detail {

inline std::string last_nonempty_line(std::string_view reply) {
  std::string best;
  std::string cur;
  for (char c : reply) {
    if (c == '\n') {
      std::string t = util::trim(cur);
      if (!t.empty()) best = t;
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::string t = util::trim(cur);
  if (!t.empty()) best = t;
  return best;
}

}  // namespace detail

// Binary judge: final line must be a bare 0 or 1. Returns 0 or 100.
inline double parse_binary_verdict(std::string_view reply) {
  std::string line = detail::last_nonempty_line(reply);
  if (line == "0") return 0.0;
  if (line == "1") return 100.0;
  throw JudgeParseError("expected bare final 0/1, got: \"" + line + "\"");
}

// Detailed judge: final line "Rating: k" with k in 0..5. Returns 20*k.
inline double parse_detailed_verdict(std::string_view reply) {
  std::string line = detail::last_nonempty_line(reply);
  constexpr std::string_view kPrefix = "Rating:";
  if (line.rfind(kPrefix, 0) == 0) {
    std::string rest = util::trim(line.substr(kPrefix.size()));
    if (rest.size() == 1 && rest[0] >= '0' && rest[0] <= '5')
      return 20.0 * (rest[0] - '0');
  }
  throw JudgeParseError("expected final line \"Rating: <0-5>\", got: \"" + line + "\"");
}

// ===========================================================================
// Efficiency metrics
// ===========================================================================

struct EfficiencyRecord {
  double total_audio_s = 0.0;
  double wall_clock_s = 0.0;
  long long samples_processed = 0;
};

// Real-time factor: wall clock over processed audio duration. Lower is better.
inline double rtf(const EfficiencyRecord& e) {
  if (e.total_audio_s <= 0.0) throw ZeroAudioError();
  return e.wall_clock_s / e.total_audio_s;
}

inline double samples_per_second(const EfficiencyRecord& e) {
  if (e.wall_clock_s <= 0.0) throw ZeroWallClockError();
  return static_cast<double>(e.samples_processed) / e.wall_clock_s;
}

struct ScenarioRuntimes {
  double sequential = 0.0;  // sum over datasets
  double parallel = 0.0;    // max over datasets
};

inline ScenarioRuntimes scenario_runtimes(const std::vector<double>& per_dataset_wall) {
  if (per_dataset_wall.empty()) throw EmptyListError();
  ScenarioRuntimes s;
  for (double w : per_dataset_wall) {
    s.sequential += w;
    s.parallel = std::max(s.parallel, w);
  }
  return s;
}

// ===========================================================================
// Metric registry
// ===========================================================================

enum class Scale { kFraction, kPercent };

inline std::string scale_name(Scale s) {
  return s == Scale::kFraction ? "fraction" : "percent";
}

struct MetricValue {
  std::string metric_name;
  double value = 0.0;
  Scale scale = Scale::kFraction;
  long long sample_count = 1;
};

enum class MetricKind {
  kWer,
  kWder,
  kCpWer,
  kMatchVerbatim,
  kMatchFold,
  kJudgeBinary,
  kJudgeDetailed,
};

struct MetricDescriptor {
  std::string name;
  MetricKind kind;
  Scale scale;
  bool needs_judge;
  const char* reference_requirement;  // human-readable, used in errors
};

inline const std::vector<MetricDescriptor>& metric_registry() {
  static const std::vector<MetricDescriptor> kRegistry = {
      {"wer", MetricKind::kWer, Scale::kFraction, false, "plain_text"},
      {"wder", MetricKind::kWder, Scale::kFraction, false, "speaker_tagged"},
      {"cpwer", MetricKind::kCpWer, Scale::kFraction, false, "speaker_tagged"},
      {"match_verbatim", MetricKind::kMatchVerbatim, Scale::kPercent, false,
       "plain_text or structured"},
      {"match_fold", MetricKind::kMatchFold, Scale::kPercent, false,
       "plain_text or structured"},
      {"llm_judge_binary", MetricKind::kJudgeBinary, Scale::kPercent, true, "any"},
      {"llm_judge_detailed", MetricKind::kJudgeDetailed, Scale::kPercent, true, "any"},
  };
  return kRegistry;
}

inline const MetricDescriptor* find_metric(std::string_view name) {
  for (const auto& d : metric_registry())
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace audioeval::metrics
