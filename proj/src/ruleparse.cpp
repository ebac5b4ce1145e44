#include "softprove/ruleparse.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "softprove/errors.hpp"

namespace softprove {

namespace {

constexpr std::size_t kMaxFractionDigits = 6;

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options)
      : src_(src), options_(options), origin_(options.origin) {}

  RuleDocument document() {
    RuleDocument doc;
    std::vector<DocumentError::Diagnostic> diags;
    for (;;) {
      skip_space();
      if (at_end()) break;
      const SourceSpan start = here();
      try {
        if (at_goal_decl()) {
          auto goals = goal_decl();
          doc.goal_decls.insert(doc.goal_decls.end(), goals.begin(), goals.end());
        } else {
          Rule rule = clause();
          rule.id = options_.id_prefix + std::to_string(doc.rules.size() + 1);
          doc.source_spans[rule.id] = start;
          doc.rules.push_back(std::move(rule));
        }
      } catch (const SyntaxError& e) {
        diags.push_back({e.line(), e.column(), e.what()});
        recover();
      } catch (const ArityError& e) {
        diags.push_back({e.line(), e.column(), e.what()});
        recover();
      } catch (const ScoreRangeError& e) {
        diags.push_back({e.line(), e.column(), e.what()});
        recover();
      }
    }
    if (!diags.empty()) throw DocumentError(std::move(diags));
    return doc;
  }

  Rule single_clause() {
    skip_space();
    if (at_end()) fail("clause");
    Rule rule = clause();
    rule.id = options_.id_prefix + "1";
    skip_space();
    if (!at_end()) fail("end of input after a single clause");
    return rule;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  SourceSpan here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(line_, col_, expected);
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        comment();
      } else {
        break;
      }
    }
  }

  void comment() {
    const std::size_t begin = pos_;
    while (!at_end() && peek() != '\n') advance();
    std::string_view text = src_.substr(begin, pos_ - begin);
    if (text.starts_with("%@")) pragma(text.substr(2));
  }

  void pragma(std::string_view body) {
    std::istringstream in{std::string(body)};
    std::string word, arg;
    in >> word >> arg;
    if (word == "principle") {
      origin_ = RuleOrigin::principle();
    } else if (word == "srl") {
      origin_ = RuleOrigin::srl_fact();
    } else if (word == "fact" && !arg.empty()) {
      origin_ = RuleOrigin::generated(arg);
    }
  }

  void expect(char c, const char* what) {
    skip_space();
    if (peek() != c) fail(what);
    advance();
  }

  std::string identifier() {
    skip_space();
    const std::size_t begin = pos_;
    while (!at_end() && ident_char(peek())) advance();
    return std::string(src_.substr(begin, pos_ - begin));
  }

  bool at_goal_decl() const {
    if (src_.substr(pos_, 4) != "goal") return false;
    std::size_t i = pos_ + 4;
    if (i < src_.size() && ident_char(src_[i])) return false;
    while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
    return src_.substr(i, 2) == "<-";
  }

  std::vector<GoalSpec> goal_decl() {
    identifier();  // "goal"
    skip_space();
    advance();  // '<'
    advance();  // '-'
    std::vector<GoalSpec> goals;
    goals.push_back(make_goal(atom()));
    for (;;) {
      skip_space();
      if (peek() == '|') {
        advance();
        goals.push_back(make_goal(atom()));
      } else if (peek() == '.') {
        advance();
        return goals;
      } else {
        fail("'|' or '.'");
      }
    }
  }

  Rule clause() {
    Rule rule;
    rule.origin = origin_;
    rule.head = atom();
    skip_space();
    if (peek() == ':' && peek(1) == '-') {
      advance();
      advance();
      rule.body.push_back(atom());
      for (;;) {
        skip_space();
        if (peek() != ',') break;
        advance();
        rule.body.push_back(atom());
      }
    }
    expect('.', rule.body.empty() ? "':-' or '.'" : "',' or '.'");
    skip_space();
    if (peek() == '=') {
      advance();
      rule.score = score();
    } else {
      rule.score = 1.0;
    }
    return rule;
  }

  Atom atom() {
    skip_space();
    const SourceSpan start = here();
    std::string name = identifier();
    if (name.empty() || !is_symbol(name)) {
      line_ = start.line;
      col_ = start.column;
      fail("predicate symbol");
    }
    Atom out{std::move(name), {}};
    expect('(', "'('");
    out.args.push_back(term());
    for (;;) {
      skip_space();
      if (peek() == ',') {
        advance();
        out.args.push_back(term());
      } else if (peek() == ')') {
        advance();
        break;
      } else {
        fail("',' or ')'");
      }
    }
    if (out.args.size() > kMaxArity) throw ArityError(start.line, start.column, out.args.size());
    return out;
  }

  Term term() {
    skip_space();
    const SourceSpan start = here();
    std::string name = identifier();
    if (is_variable_name(name)) return Term::variable(std::move(name));
    if (is_symbol(name)) return Term::constant(std::move(name));
    line_ = start.line;
    col_ = start.column;
    fail("variable or constant");
  }

  double score() {
    skip_space();
    const SourceSpan start = here();
    const std::size_t begin = pos_;
    if (peek() == '-' || peek() == '+') advance();
    std::size_t int_digits = 0, frac_digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      advance();
      ++int_digits;
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        advance();
        ++frac_digits;
      }
    }
    if (int_digits == 0) {
      line_ = start.line;
      col_ = start.column;
      fail("decimal score");
    }
    if (frac_digits > kMaxFractionDigits) fail("at most 6 fractional digits in score");
    std::string_view text = src_.substr(begin, pos_ - begin);
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), value);
    if (!valid_score(value)) throw ScoreRangeError(value, start.line, start.column);
    return value;
  }

  // Skip past the end of the malformed clause: the next '.' that ends a
  // clause, plus an optional `= <score>` suffix.
  void recover() {
    while (!at_end()) {
      char c = peek();
      if (c == '%') {
        comment();
        continue;
      }
      advance();
      if (c == '.' && !std::isdigit(static_cast<unsigned char>(peek()))) break;
    }
    std::size_t save_pos = pos_, save_line = line_, save_col = col_;
    skip_space();
    if (peek() == '=') {
      advance();
      skip_space();
      while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                           peek() == '-' || peek() == '+'))
        advance();
    } else {
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
    }
  }

  std::string_view src_;
  const ParseOptions& options_;
  RuleOrigin origin_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string pragma_for(const RuleOrigin& origin) {
  switch (origin.kind) {
    case RuleOrigin::Kind::SrlFact: return "%@ srl";
    case RuleOrigin::Kind::GeneratedFact: return "%@ fact " + origin.fact_id;
    case RuleOrigin::Kind::Principle:
    case RuleOrigin::Kind::GoalDecl: break;
  }
  return "%@ principle";
}

}  // namespace

bool structurally_equal(const RuleDocument& a, const RuleDocument& b) {
  return a.rules == b.rules && a.goal_decls == b.goal_decls;
}

Rule parse_rule(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).single_clause();
}

RuleDocument parse_kb(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).document();
}

std::string serialize(const RuleDocument& doc) {
  std::string out;
  if (!doc.goal_decls.empty()) {
    out += "goal <- ";
    for (std::size_t i = 0; i < doc.goal_decls.size(); ++i) {
      if (i) out += " | ";
      out += to_string(doc.goal_decls[i].goal_atom);
    }
    out += ".\n";
  }
  RuleOrigin current = RuleOrigin::principle();
  for (const Rule& rule : doc.rules) {
    RuleOrigin origin = rule.origin;
    if (origin.kind == RuleOrigin::Kind::GoalDecl) origin = RuleOrigin::principle();
    if (!(origin == current)) {
      out += pragma_for(origin);
      out += '\n';
      current = origin;
    }
    out += to_string(rule);
    out += '\n';
  }
  return out;
}

RuleDocument load_rule_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str(), options);
}

KnowledgeBase to_knowledge_base(const RuleDocument& doc) {
  KnowledgeBase kb;
  kb.add_all(doc.rules);
  kb.add_goals(doc.goal_decls);
  return kb;
}

}  // namespace softprove
