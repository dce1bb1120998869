#include "freepd/words.hpp"

#include <algorithm>
#include <sstream>

#include "freepd/error.hpp"

namespace freepd {

namespace {

void push_reduced(std::vector<int>& out, int letter) {
    if (letter == 0) {
        throw InputError("word letters must be nonzero");
    }
    if (!out.empty() && out.back() == -letter) {
        out.pop_back();
    } else {
        out.push_back(letter);
    }
}

} // namespace

Word::Word(std::initializer_list<int> letters) {
    for (int x : letters) {
        push_reduced(letters_, x);
    }
}

Word::Word(std::span<const int> letters) {
    for (int x : letters) {
        push_reduced(letters_, x);
    }
}

Word Word::inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
        w.letters_.push_back(-*it);
    }
    return w;
}

Word Word::prefix(std::size_t n) const {
    Word w;
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, letters_.size())));
    return w;
}

std::string Word::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Word& w) {
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) {
        os << (i ? "," : "") << w[i];
    }
    return os << ']';
}

Word mul(const Word& s, const Word& t) {
    std::vector<int> out = s.letters();
    for (int x : t.letters()) {
        push_reduced(out, x);
    }
    return Word(out);
}

Word common_beginning(const Word& s, const Word& t) {
    std::size_t n = 0;
    while (n < s.size() && n < t.size() && s[n] == t[n]) {
        ++n;
    }
    return s.prefix(n);
}

Word common_beginning(std::span<const Word> words) {
    if (words.empty()) {
        throw InputError("common_beginning of an empty list");
    }
    Word cb = words.front();
    for (const Word& w : words.subspan(1)) {
        cb = common_beginning(cb, w);
    }
    return cb;
}

GroupContext::GroupContext(int m) : m_(m) {
    if (m < 1) {
        throw InputError("number of generators must be positive");
    }
    for (int i = 1; i <= m; ++i) {
        order_.push_back(i);
        order_.push_back(-i);
    }
    rank_.resize(order_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) {
        rank_[slot(order_[r])] = static_cast<int>(r);
    }
}

GroupContext::GroupContext(int m, std::vector<int> letter_order) : m_(m), order_(std::move(letter_order)) {
    if (m < 1) {
        throw InputError("number of generators must be positive");
    }
    if (order_.size() != 2 * static_cast<std::size_t>(m)) {
        throw InputError("letter order must list exactly 2m letters");
    }
    rank_.assign(order_.size(), -1);
    for (std::size_t r = 0; r < order_.size(); ++r) {
        int x = order_[r];
        if (x == 0 || x > m || x < -m) {
            throw InputError("letter order contains an invalid letter " + std::to_string(x));
        }
        if (rank_[slot(x)] != -1) {
            throw InputError("letter order repeats letter " + std::to_string(x));
        }
        rank_[slot(x)] = static_cast<int>(r);
    }
}

int GroupContext::rank(int letter) const {
    if (letter == 0 || letter > m_ || letter < -m_) {
        throw InputError("letter " + std::to_string(letter) + " outside F_" + std::to_string(m_));
    }
    return rank_[slot(letter)];
}

bool GroupContext::contains(const Word& w) const {
    return std::all_of(w.letters().begin(), w.letters().end(), [this](int x) { return x != 0 && x <= m_ && x >= -m_; });
}

std::strong_ordering lex_compare(const Word& s, const Word& t, const GroupContext& ctx) {
    if (s.size() != t.size()) {
        return s.size() <=> t.size();
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != t[i]) {
            return ctx.rank(s[i]) <=> ctx.rank(t[i]);
        }
    }
    return std::strong_ordering::equal;
}

Word class_rep(const Word& w, const GroupContext& ctx) {
    Word inv = w.inverse();
    return lex_less(inv, w, ctx) ? inv : w;
}

std::strong_ordering class_compare(const Word& s, const Word& t, const GroupContext& ctx) {
    return lex_compare(class_rep(s, ctx), class_rep(t, ctx), ctx);
}

namespace {

// Odometer over reduced words of a fixed length in lexicographic order.
// Position i may not hold the inverse of position i-1.

int smallest_after(const GroupContext& ctx, int prev, int min_rank) {
    const auto& order = ctx.letter_order();
    for (std::size_t r = static_cast<std::size_t>(min_rank); r < order.size(); ++r) {
        if (prev == 0 || order[r] != -prev) {
            return order[r];
        }
    }
    return 0;
}

int largest_before(const GroupContext& ctx, int prev, int max_rank) {
    const auto& order = ctx.letter_order();
    for (int r = max_rank; r >= 0; --r) {
        if (prev == 0 || order[static_cast<std::size_t>(r)] != -prev) {
            return order[static_cast<std::size_t>(r)];
        }
    }
    return 0;
}

void fill_min(const GroupContext& ctx, std::vector<int>& w, std::size_t from) {
    for (std::size_t j = from; j < w.size(); ++j) {
        w[j] = smallest_after(ctx, j ? w[j - 1] : 0, 0);
    }
}

void fill_max(const GroupContext& ctx, std::vector<int>& w, std::size_t from) {
    const int top = static_cast<int>(ctx.letter_order().size()) - 1;
    for (std::size_t j = from; j < w.size(); ++j) {
        w[j] = largest_before(ctx, j ? w[j - 1] : 0, top);
    }
}

std::vector<int> first_word(const GroupContext& ctx, std::size_t n) {
    std::vector<int> w(n);
    fill_min(ctx, w, 0);
    return w;
}

std::vector<int> last_word(const GroupContext& ctx, std::size_t n) {
    std::vector<int> w(n);
    fill_max(ctx, w, 0);
    return w;
}

bool next_same_length(const GroupContext& ctx, std::vector<int>& w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        int x = smallest_after(ctx, i ? w[i - 1] : 0, ctx.rank(w[i]) + 1);
        if (x != 0) {
            w[i] = x;
            fill_min(ctx, w, i + 1);
            return true;
        }
    }
    return false;
}

bool prev_same_length(const GroupContext& ctx, std::vector<int>& w) {
    for (std::size_t i = w.size(); i-- > 0;) {
        int x = largest_before(ctx, i ? w[i - 1] : 0, ctx.rank(w[i]) - 1);
        if (x != 0) {
            w[i] = x;
            fill_max(ctx, w, i + 1);
            return true;
        }
    }
    return false;
}

bool is_class_min(const std::vector<int>& w, const GroupContext& ctx) {
    Word word(w);
    return !lex_less(word.inverse(), word, ctx);
}

} // namespace

ClassCursor::ClassCursor(const GroupContext& ctx, const Word& w) : ctx_(ctx), rep_(class_rep(w, ctx)) {
    if (!ctx.contains(w)) {
        throw InputError("word " + w.str() + " outside F_" + std::to_string(ctx.generators()));
    }
}

ClassCursor ClassCursor::first_of_length(const GroupContext& ctx, std::size_t n) {
    // The first word of a length starts with the smallest letter, its inverse
    // with a larger one, so it is always a class minimum.
    return ClassCursor(ctx, Word(first_word(ctx, n)));
}

ClassCursor ClassCursor::last_of_length(const GroupContext& ctx, std::size_t n) {
    return *class_predecessor(first_of_length(ctx, n + 1));
}

bool ClassCursor::covers(const Word& w) const {
    return class_compare(w, rep_, ctx_) != std::strong_ordering::greater;
}

ClassCursor class_successor(const ClassCursor& nu) {
    const GroupContext& ctx = nu.context();
    std::vector<int> w = nu.rep().letters();
    for (;;) {
        if (!next_same_length(ctx, w)) {
            w = first_word(ctx, w.size() + 1);
        }
        if (is_class_min(w, ctx)) {
            return ClassCursor(ctx, Word(w));
        }
    }
}

std::optional<ClassCursor> class_predecessor(const ClassCursor& nu) {
    const GroupContext& ctx = nu.context();
    std::vector<int> w = nu.rep().letters();
    if (w.empty()) {
        return std::nullopt;
    }
    for (;;) {
        if (!prev_same_length(ctx, w)) {
            w = last_word(ctx, w.size() - 1);
        }
        if (is_class_min(w, ctx)) {
            return ClassCursor(ctx, Word(w));
        }
    }
}

std::vector<ClassCursor> classes_up_to(const GroupContext& ctx, std::size_t n) {
    std::vector<ClassCursor> out{ClassCursor::unit(ctx)};
    for (;;) {
        ClassCursor next = class_successor(out.back());
        if (next.length() > n) {
            return out;
        }
        out.push_back(std::move(next));
    }
}

std::optional<std::size_t> ball_size(int m, std::size_t n, std::size_t cap) {
    const std::size_t branching = 2 * static_cast<std::size_t>(m) - 1;
    std::size_t total = 1;
    std::size_t layer = 2 * static_cast<std::size_t>(m);
    for (std::size_t len = 1; len <= n; ++len) {
        if (layer > cap || total + layer > cap) {
            return std::nullopt;
        }
        total += layer;
        // saturate instead of overflowing
        layer = layer > cap / branching ? cap + 1 : layer * branching;
    }
    if (total > cap) {
        return std::nullopt;
    }
    return total;
}

std::vector<Word> sphere(const GroupContext& ctx, std::size_t n, std::size_t cap) {
    if (!ball_size(ctx.generators(), n, cap)) {
        throw InputError("ball of radius " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap) + " words");
    }
    std::vector<Word> out;
    std::vector<int> w = first_word(ctx, n);
    do {
        out.emplace_back(w);
    } while (next_same_length(ctx, w));
    return out;
}

std::vector<Word> ball(const GroupContext& ctx, std::size_t n, std::size_t cap) {
    auto size = ball_size(ctx.generators(), n, cap);
    if (!size) {
        throw InputError("ball of radius " + std::to_string(n) + " exceeds the cap of " + std::to_string(cap) + " words");
    }
    std::vector<Word> out;
    out.reserve(*size);
    for (std::size_t len = 0; len <= n; ++len) {
        std::vector<int> w = first_word(ctx, len);
        do {
            out.emplace_back(w);
        } while (next_same_length(ctx, w));
    }
    return out;
}

} // namespace freepd
