#include <cctype>
#include <functional>
#include <map>

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"

namespace mucalc {

bool is_keyword(std::string_view s) { return s == "tt" || s == "ff" || s == "mu" || s == "nu"; }

bool is_identifier(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return !is_keyword(s);
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view t) : text_(t) {}

    Formula run() {
        Formula f = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected input");
        return f;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    std::string peek_word() {
        skip();
        std::size_t e = pos_;
        if (e < text_.size() && text_[e] >= 'a' && text_[e] <= 'z') {
            while (e < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_'))
                ++e;
        }
        return std::string(text_.substr(pos_, e - pos_));
    }

    std::string ident() {
        std::string w = peek_word();
        if (w.empty()) fail("expected identifier");
        if (is_keyword(w)) fail("keyword '" + w + "' used as identifier");
        pos_ += w.size();
        return w;
    }

    Formula expr() {
        Formula f = conjunction();
        while (eat("|")) f = disj(f, conjunction());
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (eat("&")) f = conj(f, unary());
        return f;
    }

    Formula unary() {
        skip();
        if (eat("!")) {
            std::string w = peek_word();
            if (!w.empty() && !is_keyword(w)) {
                pos_ += w.size();
                return nprop(w);
            }
            return neg(unary());
        }
        if (eat("<>")) return dia(unary());
        if (eat("[]")) return box(unary());
        std::string w = peek_word();
        if (w == "mu" || w == "nu") {
            pos_ += 2;
            std::string v = ident();
            if (!eat(".")) fail("expected '.' after bound variable");
            Formula body = expr();
            return binder(w == "mu" ? Kind::Mu : Kind::Nu, v, body);
        }
        return atom();
    }

    Formula atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (eat("(")) {
            Formula f = expr();
            if (!eat(")")) fail("expected ')'");
            return f;
        }
        std::string w = peek_word();
        if (w == "tt") {
            pos_ += 2;
            return top();
        }
        if (w == "ff") {
            pos_ += 2;
            return bot();
        }
        if (w.empty()) fail(std::string("unexpected character '") + text_[pos_] + "'");
        return prop(ident());
    }
};

// Throws if a bound variable occurs under an odd number of negations.
void check_polarity(const Formula& f, std::map<std::string, bool>& bound, bool odd) {
    switch (f->kind) {
        case Kind::Prop:
        case Kind::NegProp: {
            auto it = bound.find(f->name);
            bool here = odd != (f->kind == Kind::NegProp);
            if (it != bound.end() && it->second != here) throw NegativeBoundVariable(f->name);
            return;
        }
        case Kind::Neg: check_polarity(f->left, bound, !odd); return;
        case Kind::Mu:
        case Kind::Nu: {
            auto it = bound.find(f->name);
            std::optional<bool> saved;
            if (it != bound.end()) saved = it->second;
            bound[f->name] = odd;
            check_polarity(f->left, bound, odd);
            if (saved) bound[f->name] = *saved;
            else bound.erase(f->name);
            return;
        }
        default:
            if (f->left) check_polarity(f->left, bound, odd);
            if (f->right) check_polarity(f->right, bound, odd);
    }
}

// Precedence levels: 1 for '|', 2 for '&', 3 for unary operators and atoms.
void print(const Formula& f, int level, bool rightmost, std::string& out) {
    auto paren = [&](int prec, bool binder_like, auto&& body) {
        bool need = prec < level || (binder_like && !rightmost);
        if (need) out += '(';
        body(need ? true : rightmost);
        if (need) out += ')';
    };
    switch (f->kind) {
        case Kind::Top: out += "tt"; return;
        case Kind::Bot: out += "ff"; return;
        case Kind::Prop: out += f->name; return;
        case Kind::NegProp: out += "!" + f->name; return;
        case Kind::Neg:
            out += "!";
            if (f->left->kind == Kind::Prop) {
                out += "(" + f->left->name + ")";
            } else {
                print(f->left, 3, rightmost, out);
            }
            return;
        case Kind::Dia:
        case Kind::Box:
            out += f->kind == Kind::Dia ? "<>" : "[]";
            print(f->left, 3, rightmost, out);
            return;
        case Kind::Or:
            paren(1, false, [&](bool rm) {
                print(f->left, 1, false, out);
                out += " | ";
                print(f->right, 2, rm, out);
            });
            return;
        case Kind::And:
            paren(2, false, [&](bool rm) {
                print(f->left, 2, false, out);
                out += " & ";
                print(f->right, 3, rm, out);
            });
            return;
        case Kind::Mu:
        case Kind::Nu:
            paren(3, true, [&](bool) {
                out += f->kind == Kind::Mu ? "mu " : "nu ";
                out += f->name + ". ";
                print(f->left, 0, true, out);
            });
            return;
    }
}

}  // namespace

Formula parse(std::string_view text) {
    Parser p(text);
    Formula f = p.run();
    std::map<std::string, bool> bound;
    check_polarity(f, bound, false);
    return f;
}

std::string to_string(const Formula& f) {
    std::string out;
    print(f, 0, true, out);
    return out;
}

std::string fragment_name(Fragment f) {
    switch (f) {
        case Fragment::M: return "M";
        case Fragment::W: return "W";
        case Fragment::D: return "D";
        case Fragment::B: return "B";
        case Fragment::C: return "C";
        case Fragment::F: return "F";
        case Fragment::A: return "A";
        case Fragment::U: return "U";
    }
    return "?";
}

std::optional<Fragment> fragment_from_name(std::string_view s) {
    static const std::map<std::string, Fragment, std::less<>> names = {
        {"M", Fragment::M}, {"W", Fragment::W}, {"D", Fragment::D}, {"B", Fragment::B},
        {"C", Fragment::C}, {"F", Fragment::F}, {"A", Fragment::A}, {"U", Fragment::U}};
    auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

}  // namespace mucalc
