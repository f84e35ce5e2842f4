#include "bareprover/tptp.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace bare {

namespace {

struct Token {
  enum Kind { name, variable, quoted, punct, end } kind = end;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, current_.line, current_.column);
  }

  void expect(std::string_view punct) {
    if (current_.kind != Token::punct || current_.text != punct) {
      fail("expected '" + std::string(punct) + "', found " + describe(current_));
    }
    advance();
  }

  bool accept(std::string_view punct) {
    if (current_.kind == Token::punct && current_.text == punct) {
      advance();
      return true;
    }
    return false;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Token::end) return "end of input";
    return "'" + t.text + "'";
  }

 private:
  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) bump();
        if (pos_ + 1 >= text_.size()) throw ParseError("unterminated comment", line_, column_);
        bump();
        bump();
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space();
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    auto word_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '$' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      bump();
      while (pos_ < text_.size() && word_char(text_[pos_])) bump();
      current_.text = std::string(text_.substr(start, pos_ - start));
      current_.kind = std::isupper(static_cast<unsigned char>(c)) ? Token::variable : Token::name;
      return;
    }
    if (c == '\'') {
      bump();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '\'') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) bump();
        s += text_[pos_];
        bump();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted name", current_.line, current_.column);
      bump();
      current_.kind = Token::quoted;
      current_.text = std::move(s);
      return;
    }
    if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      bump();
      bump();
      current_.kind = Token::punct;
      current_.text = "!=";
      return;
    }
    if (std::string_view("(),.|~=").find(c) != std::string_view::npos) {
      bump();
      current_.kind = Token::punct;
      current_.text = std::string(1, c);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(Lexer& lex, Signature& sig) : lex_(lex), sig_(sig) {}

  Clause disjunction() {
    vars_.clear();
    Clause c;
    items(c);
    c.num_vars = static_cast<VarIndex>(vars_.size());
    return c;
  }

 private:
  void items(Clause& c) {
    do {
      if (lex_.accept("(")) {
        items(c);
        lex_.expect(")");
      } else if (auto l = literal()) {
        c.literals.push_back(std::move(*l));
      }
    } while (lex_.accept("|"));
  }

  // Returns nullopt for `$false`, which contributes no literal.
  std::optional<Literal> literal() {
    bool negated = false;
    while (lex_.accept("~")) negated = !negated;
    if (lex_.accept("(")) {
      auto l = literal();
      lex_.expect(")");
      if (l) l->positive = l->positive != negated;
      return l;
    }
    const Token& t = lex_.peek();
    if (t.kind == Token::name && t.text == "$false") {
      lex_.take();
      if (negated) lex_.fail("negated $false is not supported");
      return std::nullopt;
    }
    if (t.kind == Token::variable) return equation_rest(term(), negated);
    Token head = name_token();
    std::vector<Term> args = arguments();
    if (lex_.peek().kind == Token::punct && (lex_.peek().text == "=" || lex_.peek().text == "!=")) {
      return equation_rest(application(head, std::move(args)), negated);
    }
    SymbolId id = intern(head, static_cast<std::uint32_t>(args.size()), SymbolKind::predicate);
    return Literal{!negated, Term::apply(id, std::move(args))};
  }

  Literal equation_rest(Term lhs, bool negated) {
    bool positive;
    if (lex_.accept("=")) {
      positive = true;
    } else if (lex_.accept("!=")) {
      positive = false;
    } else {
      lex_.fail("expected '=' or '!=' after term, found " + Lexer::describe(lex_.peek()));
    }
    Term rhs = term();
    return Literal::equation(positive != negated, std::move(lhs), std::move(rhs));
  }

  Token name_token() {
    const Token& t = lex_.peek();
    if (t.kind != Token::name && t.kind != Token::quoted) {
      lex_.fail("expected a symbol, found " + Lexer::describe(t));
    }
    return lex_.take();
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (lex_.accept("(")) {
      do {
        args.push_back(term());
      } while (lex_.accept(","));
      lex_.expect(")");
    }
    return args;
  }

  Term term() {
    const Token& t = lex_.peek();
    if (t.kind == Token::variable) {
      std::string name = lex_.take().text;
      auto [it, inserted] = vars_.emplace(name, static_cast<VarIndex>(vars_.size()));
      return Term::variable(it->second);
    }
    Token head = name_token();
    return application(head, arguments());
  }

  Term application(const Token& head, std::vector<Term> args) {
    SymbolId id = intern(head, static_cast<std::uint32_t>(args.size()), SymbolKind::function);
    return Term::apply(id, std::move(args));
  }

  SymbolId intern(const Token& head, std::uint32_t arity, SymbolKind kind) {
    if (head.text == "=") throw ParseError("'=' is not a symbol name", head.line, head.column);
    try {
      return sig_.intern(head.text, arity, kind);
    } catch (const ArityMismatch& e) {
      throw ParseError(std::string("arity mismatch: ") + e.what(), head.line, head.column);
    }
  }

  Lexer& lex_;
  Signature& sig_;
  std::map<std::string, VarIndex> vars_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void parse_into(std::string_view text, const std::filesystem::path& base_dir, Problem& p,
                int include_depth) {
  Lexer lex(text);
  Parser parser(lex, *p.signature);
  while (lex.peek().kind != Token::end) {
    Token kw = lex.take();
    if (kw.kind == Token::name && kw.text == "include") {
      lex.expect("(");
      Token file = lex.take();
      if (file.kind != Token::quoted) throw ParseError("expected quoted file name", file.line, file.column);
      lex.expect(")");
      lex.expect(".");
      if (base_dir.empty()) throw ParseError("include without a base directory", kw.line, kw.column);
      if (include_depth > 16) throw ParseError("include nesting too deep", kw.line, kw.column);
      auto path = base_dir / file.text;
      parse_into(read_file(path), path.parent_path(), p, include_depth + 1);
      continue;
    }
    if (kw.kind != Token::name || kw.text != "cnf") {
      if (kw.kind == Token::name && (kw.text == "fof" || kw.text == "tff" || kw.text == "thf")) {
        throw ParseError("only cnf statements are supported", kw.line, kw.column);
      }
      throw ParseError("expected 'cnf', found " + Lexer::describe(kw), kw.line, kw.column);
    }
    lex.expect("(");
    Token name = lex.take();
    if (name.kind != Token::name && name.kind != Token::quoted) {
      throw ParseError("expected clause name", name.line, name.column);
    }
    lex.expect(",");
    Token role = lex.take();
    Role r;
    if (role.text == "axiom" || role.text == "hypothesis") {
      r = Role::axiom;
    } else if (role.text == "negated_conjecture") {
      r = Role::negated_conjecture;
    } else {
      throw ParseError("unsupported role '" + role.text + "'", role.line, role.column);
    }
    lex.expect(",");
    Clause c = parser.disjunction();
    lex.expect(")");
    lex.expect(".");
    c.role = r;
    c.from.rule = Rule::input;
    c.from.name = name.text;
    c.id = static_cast<ClauseId>(p.clauses.size() + 1);
    c.age = c.id;
    p.clauses.push_back(std::move(c));
  }
}

void print_term(const Signature& sig, const Term& t, std::string& out) {
  if (t.is_variable()) {
    out += 'X';
    out += std::to_string(t.var());
    return;
  }
  out += sig[t.head()].name;
  if (t.args().empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i > 0) out += ',';
    print_term(sig, t.arg(i), out);
  }
  out += ')';
}

}  // namespace

Problem parse_problem(std::string_view text, const std::filesystem::path& base_dir) {
  Problem p;
  parse_into(text, base_dir, p, 0);
  if (p.clauses.empty()) throw ParseError("problem has no clauses", 1, 1);
  return p;
}

Problem parse_problem_file(const std::filesystem::path& path) {
  return parse_problem(read_file(path), path.parent_path());
}

Clause parse_clause(std::string_view formula, Signature& sig) {
  Lexer lex(formula);
  Parser parser(lex, sig);
  Clause c = parser.disjunction();
  if (lex.peek().kind != Token::end) lex.fail("trailing input " + Lexer::describe(lex.peek()));
  return c;
}

std::string to_tptp(const Signature& sig, const Term& t) {
  std::string out;
  print_term(sig, t, out);
  return out;
}

std::string to_tptp(const Signature& sig, const Literal& l) {
  std::string out;
  if (l.is_equation()) {
    print_term(sig, l.lhs(), out);
    out += l.positive ? " = " : " != ";
    print_term(sig, l.rhs(), out);
    return out;
  }
  if (!l.positive) out += '~';
  print_term(sig, l.atom, out);
  return out;
}

std::string to_tptp(const Signature& sig, const Clause& c) {
  if (c.empty()) return "$false";
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i > 0) out += " | ";
    out += to_tptp(sig, c.literals[i]);
  }
  return out;
}

std::string to_tptp_statement(const Signature& sig, const Clause& c) {
  std::string name = c.from.name.empty() ? "c" + std::to_string(c.id) : c.from.name;
  std::string role = c.role == Role::negated_conjecture ? "negated_conjecture" : "axiom";
  return "cnf(" + name + ", " + role + ", (" + to_tptp(sig, c) + ")).";
}

std::string to_tptp(const Problem& p) {
  std::string out;
  for (const Clause& c : p.clauses) {
    out += to_tptp_statement(*p.signature, c);
    out += '\n';
  }
  return out;
}

}  // namespace bare
