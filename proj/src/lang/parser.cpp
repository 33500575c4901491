#include "envnav/lang/parser.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace envnav::lang {

namespace {

enum class Tok : std::uint8_t {
  Ident, Number, String,
  LParen, RParen, LBrace, RBrace, Comma, Semicolon, Colon, Assign,
  Star, Plus, Minus, Slash,
  Lt, Le, Gt, Ge, EqEq, NotEq,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier / string contents / number spelling
  double number = 0.0;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Number: return "number " + t.text;
    case Tok::String: return "string";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  Lexer(std::string_view src, std::shared_ptr<const std::string> file, Diagnostics& diags)
      : src_(src), file_(std::move(file)), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.end_line = line_;
        t.end_column = col_;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (is_ident_start(c)) {
        std::size_t b = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(b, pos_ - b));
      } else if (c >= '0' && c <= '9') {
        lex_number(t);
      } else if (c == '"') {
        if (!lex_string(t)) continue;
      } else {
        if (!lex_punct(t)) continue;
      }
      t.end_line = line_;
      t.end_column = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '.'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void error_here(std::string msg) {
    diags_.push_back({Severity::Error, SourceSpan{file_, line_, col_, line_, col_ + 1}, std::move(msg)});
  }

  void lex_number(Token& t) {
    std::size_t b = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
    };
    digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && src_[pos_ + 1] >= '0' && src_[pos_ + 1] <= '9') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int sl = line_, sc = col_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
        digits();
      } else {
        pos_ = save;
        line_ = sl;
        col_ = sc;
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(b, pos_ - b));
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc{} || !std::isfinite(t.number)) {
      diags_.push_back({Severity::Error, SourceSpan{file_, t.line, t.column, line_, col_},
                        "numeric literal out of range: " + t.text});
    }
  }

  bool lex_string(Token& t) {
    advance();  // opening quote
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        advance();
        char e = src_[pos_];
        if (e == 'n') value += '\n';
        else if (e == 't') value += '\t';
        else value += e;
        advance();
        continue;
      }
      value += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size() || src_[pos_] != '"') {
      diags_.push_back({Severity::Error, SourceSpan{file_, t.line, t.column, line_, col_}, "unterminated string"});
      return false;
    }
    advance();
    t.kind = Tok::String;
    t.text = std::move(value);
    return true;
  }

  bool lex_punct(Token& t) {
    char c = src_[pos_];
    char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto one = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
      return true;
    };
    auto two = [&](Tok k) {
      t.kind = k;
      t.text = std::string(src_.substr(pos_, 2));
      advance();
      advance();
      return true;
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case ',': return one(Tok::Comma);
      case ';': return one(Tok::Semicolon);
      case ':': return one(Tok::Colon);
      case '*': return one(Tok::Star);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '/': return one(Tok::Slash);
      case '<': return n == '=' ? two(Tok::Le) : one(Tok::Lt);
      case '>': return n == '=' ? two(Tok::Ge) : one(Tok::Gt);
      case '=': return n == '=' ? two(Tok::EqEq) : one(Tok::Assign);
      case '!':
        if (n == '=') return two(Tok::NotEq);
        break;
      default: break;
    }
    error_here(std::string("unexpected character '") + c + "'");
    advance();
    return false;
  }

  std::string_view src_;
  std::shared_ptr<const std::string> file_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>> kReserved = {
    "AND", "OR", "IMPLIES", "NOT", "IF", "THEN", "ELSE", "true", "false", "MAXIMUM", "MINIMUM", "SUM", "AVERAGE",
};

const std::set<std::string, std::less<>> kTopLevel = {
    "step", "sensor", "rule", "function", "metric", "timeroutine", "characteristic", "template", "instance",
};

struct SyntaxError {
  SourceSpan span;
  std::string message;
};

const std::map<std::string, int, std::less<>> kWeekdays = {
    {"Monday", 1}, {"Tuesday", 2}, {"Wednesday", 3}, {"Thursday", 4},
    {"Friday", 5}, {"Saturday", 6}, {"Sunday", 7},
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::shared_ptr<const std::string> file, Diagnostics& diags)
      : toks_(std::move(toks)), file_(std::move(file)), diags_(diags) {}

  Specification run() {
    Specification spec;
    while (peek().kind != Tok::End) {
      std::size_t start = pos_;
      try {
        statement(spec);
      } catch (const SyntaxError& e) {
        diags_.push_back({Severity::Error, e.span, e.message});
        recover(start);
      }
    }
    return spec;
  }

 private:
  // ---- token helpers ----
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  SourceSpan span_of_tok(const Token& t) const { return {file_, t.line, t.column, t.end_line, t.end_column}; }
  SourceSpan span_from(const Token& first) const {
    const Token& last = toks_[pos_ > 0 ? pos_ - 1 : 0];
    return {file_, first.line, first.column, last.end_line, last.end_column};
  }

  [[noreturn]] void fail(const Token& t, std::string msg) const { throw SyntaxError{span_of_tok(t), std::move(msg)}; }

  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    return take();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail(peek(), "expected '" + std::string(w) + "', found " + describe(peek()));
    take();
  }
  std::string name(std::string_view what) {
    const Token& t = expect(Tok::Ident, what);
    if (kReserved.count(t.text)) fail(t, "'" + t.text + "' is a reserved word");
    return t.text;
  }

  // Skip the rest of a broken statement: balanced braces from its start, or up
  // to the next top-level keyword at column 1.
  void recover(std::size_t start) {
    pos_ = start;
    int depth = 0;
    bool first = true;
    while (!at(Tok::End)) {
      const Token& t = peek();
      if (!first && t.kind == Tok::Ident && t.column == 1 && kTopLevel.count(t.text)) return;
      first = false;
      take();
      if (t.kind == Tok::LBrace) ++depth;
      if (t.kind == Tok::RBrace && --depth <= 0) return;
      if (t.kind == Tok::Semicolon && depth == 0) return;
    }
  }

  // ---- statements ----
  void statement(Specification& spec) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected a declaration, found " + describe(t));
    if (t.text == "step") {
      take();
      const Token& n = expect(Tok::Number, "grid step in seconds");
      if (n.number <= 0 || n.number != std::floor(n.number)) fail(n, "grid step must be a positive integer");
      expect(Tok::Semicolon, "';'");
      if (spec.step) fail(t, "duplicate 'step' declaration");
      spec.step = static_cast<Seconds>(n.number);
    } else if (t.text == "sensor") {
      spec.sensors.push_back(sensor());
    } else if (t.text == "template") {
      spec.templates.push_back(template_def());
    } else if (t.text == "instance") {
      spec.instances.push_back(instance());
    } else if (auto a = artifact()) {
      spec.artifacts.push_back(std::move(*a));
    } else {
      fail(t, "expected a declaration, found " + describe(t));
    }
  }

  SensorDecl sensor() {
    const Token& first = take();
    SensorDecl s;
    s.id = name("sensor id");
    const Token& k = expect(Tok::Ident, "'numeric' or 'logic'");
    auto kind = parse_kind(k.text);
    if (!kind) fail(k, "expected 'numeric' or 'logic', found " + describe(k));
    s.kind = *kind;
    while (at_word("label") || at_word("unit")) {
      bool label = take().text == "label";
      const Token& v = expect(Tok::String, "string");
      (label ? s.label : s.unit) = v.text;
    }
    expect(Tok::Semicolon, "';'");
    s.span = span_from(first);
    return s;
  }

  std::optional<ArtifactDef> artifact() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) return std::nullopt;
    if (t.text == "rule") return rule_like<RuleDef>();
    if (t.text == "function") return rule_like<FunctionDef>();
    if (t.text == "metric") return metric();
    if (t.text == "timeroutine") return time_routine();
    if (t.text == "characteristic") return characteristic();
    return std::nullopt;
  }

  std::vector<std::string> name_list(Tok close) {
    std::vector<std::string> out;
    if (at(close)) return out;
    out.push_back(name("identifier"));
    while (at(Tok::Comma)) {
      take();
      out.push_back(name("identifier"));
    }
    return out;
  }

  template <class Def>
  Def rule_like() {
    const Token& first = take();
    Def d;
    d.name = name("name");
    expect_word("context");
    expect(Tok::LParen, "'('");
    d.context = name_list(Tok::RParen);
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    d.body = expression();
    if (!at(Tok::RBrace)) fail(peek(), "expected '}' after expression, found " + describe(peek()));
    take();
    d.span = span_from(first);
    return d;
  }

  MetricDef metric() {
    const Token& first = take();
    MetricDef m;
    m.name = name("metric name");
    expect_word("context");
    expect(Tok::LParen, "'('");
    m.context = name("context reference");
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    const Token& b = expect(Tok::Ident, "base aggregate");
    static const std::map<std::string, MetricBase, std::less<>> bases = {
        {"AVERAGE", MetricBase::Average}, {"SUM", MetricBase::Sum},       {"MAXIMUM", MetricBase::Maximum},
        {"MINIMUM", MetricBase::Minimum}, {"STDDEV", MetricBase::StdDev}, {"QUANTILE", MetricBase::Quantile},
    };
    auto bit = bases.find(b.text);
    if (bit == bases.end()) fail(b, "unknown base aggregate " + describe(b));
    m.base = bit->second;
    if (at(Tok::LParen)) {
      take();
      if (!at(Tok::RParen)) {
        m.params.push_back(signed_number());
        while (at(Tok::Comma)) {
          take();
          m.params.push_back(signed_number());
        }
      }
      expect(Tok::RParen, "')'");
    }
    if (m.params.size() != parameter_count(m.base)) {
      fail(b, std::string(spelling(m.base)) + " takes " + std::to_string(parameter_count(m.base)) +
                  " parameter(s), got " + std::to_string(m.params.size()));
    }
    const Token& f = expect(Tok::Ident, "time filter");
    static const std::map<std::string, TimeFilter, std::less<>> filters = {
        {"PerHour", TimeFilter::PerHour},   {"PerDay", TimeFilter::PerDay},
        {"PerWeek", TimeFilter::PerWeek},   {"PerMonth", TimeFilter::PerMonth},
        {"PerQuarter", TimeFilter::PerQuarter}, {"PerYear", TimeFilter::PerYear},
    };
    auto fit = filters.find(f.text);
    if (fit == filters.end()) fail(f, "unknown time filter " + describe(f));
    m.filter = fit->second;
    expect(Tok::RBrace, "'}'");
    m.span = span_from(first);
    return m;
  }

  int field_value(CalendarField field) {
    const Token& t = peek();
    if (field == CalendarField::DayOfWeek && t.kind == Tok::Ident) {
      auto it = kWeekdays.find(t.text);
      if (it == kWeekdays.end()) fail(t, "unknown weekday " + describe(t));
      take();
      return it->second;
    }
    const Token& n = expect(Tok::Number, "calendar value");
    if (n.number != std::floor(n.number) || n.number < 0 || n.number > 1e6) {
      fail(n, "calendar value must be a non-negative integer");
    }
    return static_cast<int>(n.number);
  }

  FieldPattern pattern(CalendarField field) {
    FieldPattern p;
    if (at(Tok::Star)) {
      take();
      return p;
    }
    p.wildcard = false;
    while (true) {
      FieldRange r;
      r.lo = r.hi = field_value(field);
      if (at(Tok::Minus)) {
        take();
        r.hi = field_value(field);
      }
      p.items.push_back(r);
      if (!at(Tok::Comma)) break;
      take();
    }
    return p;
  }

  TimeRoutineDef time_routine() {
    const Token& first = take();
    TimeRoutineDef tr;
    tr.name = name("time routine name");
    expect(Tok::LBrace, "'{'");
    static const std::map<std::string, CalendarField, std::less<>> fields = {
        {"year", CalendarField::Year}, {"month", CalendarField::Month},   {"day", CalendarField::Day},
        {"dayofweek", CalendarField::DayOfWeek}, {"hour", CalendarField::Hour},
        {"minute", CalendarField::Minute}, {"second", CalendarField::Second},
    };
    while (!at(Tok::RBrace)) {
      const Token& kw = expect(Tok::Ident, "calendar field, 'include' or 'exclude'");
      if (kw.text == "include" || kw.text == "exclude") {
        auto names = name_list(Tok::Semicolon);
        if (names.empty()) fail(kw, "'" + kw.text + "' needs at least one routine name");
        auto& dst = kw.text == "include" ? tr.includes : tr.excludes;
        dst.insert(dst.end(), names.begin(), names.end());
      } else {
        auto it = fields.find(kw.text);
        if (it == fields.end()) fail(kw, "unknown calendar field " + describe(kw));
        if (tr.field(it->second)) fail(kw, "field '" + kw.text + "' given twice");
        tr.field(it->second) = pattern(it->second);
      }
      expect(Tok::Semicolon, "';'");
    }
    take();
    tr.span = span_from(first);
    return tr;
  }

  double signed_number() {
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    const Token& n = expect(Tok::Number, "number");
    return neg ? -n.number : n.number;
  }

  std::vector<Point> points() {
    std::vector<Point> pts;
    if (at(Tok::Semicolon)) return pts;
    while (true) {
      expect(Tok::LParen, "'('");
      Point p;
      p.x = signed_number();
      expect(Tok::Comma, "','");
      p.y = signed_number();
      expect(Tok::RParen, "')'");
      pts.push_back(p);
      if (!at(Tok::Comma)) break;
      take();
    }
    return pts;
  }

  CharacteristicDef characteristic() {
    const Token& first = take();
    CharacteristicDef c;
    c.name = name("characteristic name");
    expect_word("x");
    expect(Tok::LParen, "'('");
    c.x_ref = name("x reference");
    expect(Tok::RParen, "')'");
    expect_word("y");
    expect(Tok::LParen, "'('");
    c.y_ref = name("y reference");
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    bool seen_lower = false, seen_upper = false;
    while (!at(Tok::RBrace)) {
      const Token& kw = expect(Tok::Ident, "'lower' or 'upper'");
      if (kw.text == "lower") {
        if (seen_lower) fail(kw, "'lower' given twice");
        seen_lower = true;
        c.lower = points();
      } else if (kw.text == "upper") {
        if (seen_upper) fail(kw, "'upper' given twice");
        seen_upper = true;
        c.upper = points();
      } else {
        fail(kw, "expected 'lower' or 'upper', found " + describe(kw));
      }
      expect(Tok::Semicolon, "';'");
    }
    take();
    c.span = span_from(first);
    return c;
  }

  TemplateDef template_def() {
    const Token& first = take();
    TemplateDef t;
    t.name = name("template name");
    expect(Tok::LParen, "'('");
    while (!at(Tok::RParen)) {
      Placeholder p;
      p.name = name("placeholder");
      expect(Tok::Colon, "':'");
      const Token& k = expect(Tok::Ident, "'numeric' or 'logic'");
      auto kind = parse_kind(k.text);
      if (!kind) fail(k, "expected 'numeric' or 'logic', found " + describe(k));
      p.kind = *kind;
      t.params.push_back(p);
      if (!at(Tok::Comma)) break;
      take();
    }
    expect(Tok::RParen, "')'");
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      auto a = artifact();
      if (!a) fail(peek(), "expected an artifact definition in template body, found " + describe(peek()));
      t.body.push_back(std::move(*a));
    }
    take();
    t.span = span_from(first);
    return t;
  }

  TemplateInstance instance() {
    const Token& first = take();
    TemplateInstance inst;
    inst.template_name = name("template name");
    expect(Tok::LParen, "'('");
    while (!at(Tok::RParen)) {
      std::string ph = name("placeholder");
      expect(Tok::Assign, "'='");
      std::string sensor = name("sensor id");
      inst.bindings.emplace_back(std::move(ph), std::move(sensor));
      if (!at(Tok::Comma)) break;
      take();
    }
    expect(Tok::RParen, "')'");
    expect_word("prefix");
    inst.prefix = expect(Tok::String, "prefix string").text;
    expect(Tok::Semicolon, "';'");
    inst.span = span_from(first);
    return inst;
  }

  // ---- expressions ----
  bool starts_operand() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
      case Tok::LParen: return true;
      case Tok::Minus: return peek(1).kind == Tok::Number;
      case Tok::Ident:
        return t.text == "NOT" || t.text == "IF" || t.text == "true" || t.text == "false" ||
               !kReserved.count(t.text) || t.text == "MAXIMUM" || t.text == "MINIMUM" || t.text == "SUM" ||
               t.text == "AVERAGE";
      default: return false;
    }
  }

  void require_operand(const Token& op) {
    if (!starts_operand()) fail(op, "operator '" + op.text + "' is missing its right operand");
  }

  ExprPtr expression() {
    if (at_word("IF")) {
      const Token& first = take();
      if (!starts_operand()) fail(first, "IF is missing its condition");
      ExprPtr cond = expression();
      const Token& th = peek();
      expect_word("THEN");
      if (!starts_operand()) fail(th, "THEN is missing its branch");
      ExprPtr then_b = expression();
      ExprPtr else_b;
      if (at_word("ELSE")) {
        const Token& el = take();
        if (!starts_operand()) fail(el, "ELSE is missing its branch");
        else_b = expression();
      }
      return make_expr(IfThenElse{cond, then_b, else_b}, span_from(first));
    }
    return implies();
  }

  ExprPtr implies() {
    const Token& first = peek();
    ExprPtr lhs = or_expr();
    if (at_word("IMPLIES")) {
      const Token& op = take();
      require_operand(op);
      if (at_word("IF")) fail(peek(), "an IF expression used as an operand must be parenthesized");
      ExprPtr rhs = implies();
      return make_expr(Binary{BinaryOp::Implies, lhs, rhs}, span_from(first));
    }
    return lhs;
  }

  template <class Next>
  ExprPtr left_assoc(Next next, const std::map<std::string, BinaryOp, std::less<>>& ops, bool word_ops) {
    const Token& first = peek();
    ExprPtr lhs = (this->*next)();
    while (true) {
      const Token& t = peek();
      bool candidate = word_ops ? t.kind == Tok::Ident : (t.kind != Tok::Ident && t.kind != Tok::End);
      if (!candidate) break;
      auto it = ops.find(t.text);
      if (it == ops.end()) break;
      const Token& op = take();
      require_operand(op);
      if (at_word("IF")) fail(peek(), "an IF expression used as an operand must be parenthesized");
      ExprPtr rhs = (this->*next)();
      lhs = make_expr(Binary{it->second, lhs, rhs}, span_from(first));
    }
    return lhs;
  }

  ExprPtr or_expr() { return left_assoc(&Parser::and_expr, {{"OR", BinaryOp::Or}}, true); }
  ExprPtr and_expr() { return left_assoc(&Parser::cmp_expr, {{"AND", BinaryOp::And}}, true); }
  ExprPtr cmp_expr() {
    static const std::map<std::string, BinaryOp, std::less<>> ops = {
        {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},
        {">=", BinaryOp::Ge}, {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne},
    };
    return left_assoc(&Parser::add_expr, ops, false);
  }
  ExprPtr add_expr() { return left_assoc(&Parser::mul_expr, {{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}, false); }
  ExprPtr mul_expr() { return left_assoc(&Parser::unary, {{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}}, false); }

  ExprPtr unary() {
    if (at_word("NOT")) {
      const Token& op = take();
      require_operand(op);
      if (at_word("IF")) fail(peek(), "an IF expression used as an operand must be parenthesized");
      ExprPtr operand = unary();
      return make_expr(Unary{UnaryOp::Not, operand}, span_from(op));
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      return make_expr(NumberLit{t.number}, span_of_tok(t));
    }
    if (t.kind == Tok::Minus && peek(1).kind == Tok::Number) {
      take();
      const Token& n = take();
      return make_expr(NumberLit{-n.number}, span_from(t));
    }
    if (t.kind == Tok::LParen) {
      take();
      if (!starts_operand()) fail(peek(), "expected expression after '(', found " + describe(peek()));
      ExprPtr inner = expression();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        take();
        return make_expr(BoolLit{t.text == "true"}, span_of_tok(t));
      }
      static const std::map<std::string, LibraryFn, std::less<>> fns = {
          {"MAXIMUM", LibraryFn::Maximum}, {"MINIMUM", LibraryFn::Minimum},
          {"SUM", LibraryFn::Sum},         {"AVERAGE", LibraryFn::Average},
      };
      if (auto it = fns.find(t.text); it != fns.end()) {
        take();
        expect(Tok::LParen, "'(' after " + t.text);
        Call call{it->second, {}};
        if (at(Tok::RParen)) fail(t, t.text + " requires at least one argument");
        while (true) {
          if (!starts_operand()) fail(peek(), "expected argument, found " + describe(peek()));
          call.args.push_back(expression());
          if (!at(Tok::Comma)) break;
          take();
        }
        expect(Tok::RParen, "')'");
        return make_expr(std::move(call), span_from(t));
      }
      if (t.text == "IF") fail(t, "an IF expression used as an operand must be parenthesized");
      if (kReserved.count(t.text)) fail(t, "unexpected " + describe(t));
      take();
      return make_expr(Ref{t.text}, span_of_tok(t));
    }
    fail(t, "expected expression, found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::shared_ptr<const std::string> file_;
  Diagnostics& diags_;
};

void check_duplicates(const Specification& spec, Diagnostics& diags) {
  std::map<std::string, SourceSpan> seen;
  auto visit = [&](const std::string& n, const SourceSpan& sp, std::string_view what) {
    auto [it, fresh] = seen.emplace(n, sp);
    if (!fresh) {
      diags.push_back({Severity::Error, sp,
                       "duplicate name '" + n + "' (" + std::string(what) + "); first declared at line " +
                           std::to_string(it->second.line)});
    }
  };
  for (const auto& s : spec.sensors) visit(s.id, s.span, "sensor");
  for (const auto& a : spec.artifacts) visit(name_of(a), span_of(a), spelling(kind_of(a)));
  for (const auto& t : spec.templates) {
    visit(t.name, t.span, "template");
    std::map<std::string, int> local;
    for (const auto& p : t.params) {
      if (local[p.name]++) diags.push_back({Severity::Error, t.span, "duplicate placeholder '" + p.name + "'"});
    }
    for (const auto& a : t.body) {
      if (local[name_of(a)]++) {
        diags.push_back({Severity::Error, span_of(a), "duplicate name '" + name_of(a) + "' in template body"});
      }
    }
  }
}

}  // namespace

ParseResult parse_spec(std::string_view text, std::string file) {
  auto file_ptr = std::make_shared<const std::string>(std::move(file));
  ParseResult result;
  Lexer lexer(text, file_ptr, result.diagnostics);
  std::vector<Token> toks = lexer.run();
  Parser parser(std::move(toks), file_ptr, result.diagnostics);
  Specification spec = parser.run();
  if (!has_errors(result.diagnostics)) check_duplicates(spec, result.diagnostics);
  if (!has_errors(result.diagnostics)) result.spec = std::move(spec);
  return result;
}

}  // namespace envnav::lang
