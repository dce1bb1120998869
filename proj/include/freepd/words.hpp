#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace freepd {

/// Reduced word in the free group F_m.
///
/// Letters are signed generator indices: +i is a_i and -i is a_i^{-1}.
/// Construction always reduces, so a Word never contains an adjacent pair
/// (x, -x).  The empty word is the unit e.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> letters);
    explicit Word(std::span<const int> letters);
    explicit Word(const std::vector<int>& letters) : Word(std::span<const int>(letters)) {}

    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    int operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<int>& letters() const noexcept { return letters_; }

    Word inverse() const;

    /// Longest prefix of length `n` (n <= size()).
    Word prefix(std::size_t n) const;

    std::string str() const;

    friend bool operator==(const Word&, const Word&) = default;
    /// Storage order (plain lexicographic on the signed integers). It is a
    /// total order usable as a map key; it is NOT the group's lexicographic
    /// order, see lex_compare.
    friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

private:
    std::vector<int> letters_;
};

std::ostream& operator<<(std::ostream& os, const Word& w);

/// Reduced product s * t.
Word mul(const Word& s, const Word& t);
inline Word operator*(const Word& s, const Word& t) { return mul(s, t); }

/// Longest common prefix CB(w_1, ..., w_p). Throws InputError on an empty list.
Word common_beginning(std::span<const Word> words);
Word common_beginning(const Word& s, const Word& t);

/// Number of generators and the order of the 2m letters that fixes a
/// lexicographic order on F_m.
class GroupContext {
public:
    /// Default letter order a_1 < a_1^{-1} < a_2 < a_2^{-1} < ...
    explicit GroupContext(int m);
    /// `letter_order` lists all 2m signed letters from smallest to largest.
    GroupContext(int m, std::vector<int> letter_order);

    int generators() const noexcept { return m_; }
    const std::vector<int>& letter_order() const noexcept { return order_; }
    int rank(int letter) const;
    bool contains(const Word& w) const;

    friend bool operator==(const GroupContext& a, const GroupContext& b) {
        return a.m_ == b.m_ && a.order_ == b.order_;
    }

private:
    static std::size_t slot(int letter) { return 2 * (static_cast<std::size_t>(letter > 0 ? letter : -letter) - 1) + (letter < 0 ? 1 : 0); }

    int m_;
    std::vector<int> order_;
    std::vector<int> rank_;
};

/// Lexicographic order: shorter words first; equal lengths are decided by the
/// first letter after their common beginning.
std::strong_ordering lex_compare(const Word& s, const Word& t, const GroupContext& ctx);

inline bool lex_less(const Word& s, const Word& t, const GroupContext& ctx) {
    return lex_compare(s, t, ctx) == std::strong_ordering::less;
}

/// The smaller of w and w^{-1}.
Word class_rep(const Word& w, const GroupContext& ctx);

/// Compare the classes {s, s^-1} and {t, t^-1}.
std::strong_ordering class_compare(const Word& s, const Word& t, const GroupContext& ctx);

/// Position in the ordered quotient F / {s ~ s^{-1}}.
class ClassCursor {
public:
    /// The class containing `w`; the representative is normalized.
    ClassCursor(const GroupContext& ctx, const Word& w);

    /// The class {e}.
    static ClassCursor unit(const GroupContext& ctx) { return ClassCursor(ctx, Word{}); }
    /// First class whose words have length `n`.
    static ClassCursor first_of_length(const GroupContext& ctx, std::size_t n);
    /// Last class of S_n.
    static ClassCursor last_of_length(const GroupContext& ctx, std::size_t n);

    const Word& rep() const noexcept { return rep_; }
    const GroupContext& context() const noexcept { return ctx_; }
    std::size_t length() const noexcept { return rep_.size(); }
    bool is_unit() const noexcept { return rep_.empty(); }

    /// Does the class of `w` come at or before this one?
    bool covers(const Word& w) const;

    friend bool operator==(const ClassCursor& a, const ClassCursor& b) { return a.rep_ == b.rep_; }
    friend std::strong_ordering operator<=>(const ClassCursor& a, const ClassCursor& b) {
        return lex_compare(a.rep_, b.rep_, a.ctx_);
    }

private:
    GroupContext ctx_;
    Word rep_;
};

ClassCursor class_successor(const ClassCursor& nu);
/// Predecessor; nullopt for {e}.
std::optional<ClassCursor> class_predecessor(const ClassCursor& nu);

/// All classes {e} = nu_0 < nu_1 < ... up to and including the last class of S_n.
std::vector<ClassCursor> classes_up_to(const GroupContext& ctx, std::size_t n);

/// Size of S_n, or nullopt if it exceeds `cap`.
std::optional<std::size_t> ball_size(int m, std::size_t n, std::size_t cap);

inline constexpr std::size_t kDefaultBallCap = 200000;

/// S_n sorted by the lexicographic order of `ctx`. Throws InputError when the
/// ball holds more than `cap` words.
std::vector<Word> ball(const GroupContext& ctx, std::size_t n, std::size_t cap = kDefaultBallCap);

/// Words of length exactly n, sorted.
std::vector<Word> sphere(const GroupContext& ctx, std::size_t n, std::size_t cap = kDefaultBallCap);

} // namespace freepd
