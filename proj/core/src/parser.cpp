#include "cmlsat/parser.hpp"

#include <cctype>

namespace cmlsat {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Formula parseAll()
    {
        Formula f = parseIff();
        skip();
        if (pos_ != s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

    ModalOperator parseLoneOperator()
    {
        skip();
        ModalOperator op;
        if (!tryOperator(op)) {
            if (pos_ < s_.size() && std::islower(static_cast<unsigned char>(s_[pos_])))
                op = ModalOperator::atom(identifier());
            else
                fail("expected an operator");
        }
        skip();
        if (pos_ != s_.size())
            fail("trailing input after operator");
        return op;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool peek(std::string_view tok)
    {
        skip();
        return s_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok)
    {
        if (!peek(tok))
            return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok)
    {
        if (!accept(tok))
            fail("expected '" + std::string(tok) + "'");
    }

    Formula parseIff()
    {
        Formula f = parseImp();
        while (accept("<->"))
            f = iff(f, parseImp());
        return f;
    }

    Formula parseImp()
    {
        Formula f = parseOr();
        if (accept("->"))
            return implies(f, parseImp());
        return f;
    }

    Formula parseOr()
    {
        Formula f = parseAnd();
        while (accept("|"))
            f = disj(f, parseAnd());
        return f;
    }

    Formula parseAnd()
    {
        Formula f = parseUnary();
        while (accept("&"))
            f = conj(f, parseUnary());
        return f;
    }

    unsigned long number()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        if (pos_ - start > 9)
            fail("number too large");
        return std::stoul(std::string(s_.substr(start, pos_ - start)));
    }

    mpz_class bigNumber()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return mpz_class(std::string(s_.substr(start, pos_ - start)));
    }

    std::string identifier()
    {
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    bool keywordAhead(char c)
    {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c)
            return false;
        if (pos_ + 1 < s_.size()) {
            char n = s_[pos_ + 1];
            if (std::isalnum(static_cast<unsigned char>(n)) || n == '_')
                return false;
        }
        return true;
    }

    bool tryOperator(ModalOperator& op)
    {
        skip();
        if (accept("[]")) {
            op = ModalOperator::box();
            return true;
        }
        if (peek("[C")) {
            pos_ += 2;
            std::uint32_t members = 0;
            skip();
            if (!peek("]")) {
                do {
                    std::size_t at = pos_;
                    unsigned long a = number();
                    if (a < 1 || a > 32) {
                        pos_ = at;
                        fail("agent index out of range");
                    }
                    members |= 1u << (a - 1);
                } while (accept(","));
            }
            expect("]");
            op = ModalOperator::coalitionOf(members);
            return true;
        }
        if (peek("<") && !peek("<->")) {
            ++pos_;
            unsigned long k = number();
            expect(">");
            op = ModalOperator::graded(k);
            return true;
        }
        if (keywordAhead('W')) {
            ++pos_;
            op = ModalOperator::majority();
            return true;
        }
        if (peek("L{")) {
            std::size_t at = pos_;
            pos_ += 2;
            mpz_class num = bigNumber();
            mpz_class den = 1;
            if (accept("/")) {
                den = bigNumber();
                if (den == 0) {
                    pos_ = at;
                    fail("zero denominator");
                }
            }
            expect("}");
            mpq_class p(num, den);
            p.canonicalize();
            if (p < 0 || p > 1) {
                pos_ = at;
                fail("probability outside [0,1]");
            }
            op = ModalOperator::probability(p);
            return true;
        }
        return false;
    }

    Formula parseUnary()
    {
        skip();
        if (accept("~"))
            return neg(parseUnary());
        ModalOperator op;
        if (tryOperator(op))
            return modal(op, parseUnary());
        if (keywordAhead('M')) {
            ++pos_;
            return neg(modal(ModalOperator::majority(), neg(parseUnary())));
        }
        return parsePrimary();
    }

    Formula parsePrimary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        if (accept("(")) {
            Formula f = parseIff();
            expect(")");
            return f;
        }
        if (std::islower(static_cast<unsigned char>(s_[pos_]))) {
            std::string id = identifier();
            if (id == "false")
                return bottom();
            if (id == "true")
                return top();
            return atom(id);
        }
        fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

Formula parseFormula(std::string_view text) { return Parser(text).parseAll(); }

Formula parse(std::string_view text, const LogicConfig& cfg)
{
    Formula f = parseFormula(text);
    checkLegal(f, cfg);
    return f;
}

ModalOperator parseOperator(std::string_view text) { return Parser(text).parseLoneOperator(); }

} // namespace cmlsat
