#include "repnet/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <vector>

namespace repnet {

namespace {

// Cursor over a single logical line, with 1-based column reporting.
class LineCursor {
 public:
  LineCursor(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!consume(c)) fail(std::string("expected '") + c + "' " + what);
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::optional<std::string> try_ident() {
    skip_ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) return std::nullopt;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string ident(const char* what) {
    auto id = try_ident();
    if (!id) fail(std::string("expected identifier ") + what);
    return *id;
  }

  std::optional<double> try_number() {
    skip_ws();
    if (pos_ >= s_.size()) return std::nullopt;
    const char c = s_[pos_];
    const bool starts = std::isdigit(static_cast<unsigned char>(c)) ||
                        ((c == '-' || c == '+' || c == '.') && pos_ + 1 < s_.size() &&
                         (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
                          s_[pos_ + 1] == '.'));
    if (!starts) return std::nullopt;
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) return std::nullopt;
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::size_t uint_value(const char* what) {
    auto v = try_number();
    if (!v || *v < 0 || *v != static_cast<std::size_t>(*v))
      fail(std::string("expected non-negative integer ") + what);
    return static_cast<std::size_t>(*v);
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, pos_ + 1, msg); }
  [[noreturn]] void fail_at(std::size_t col, const std::string& msg) {
    throw ParseError(line_, col, msg);
  }

  std::size_t col() {
    skip_ws();
    return pos_ + 1;
  }
  std::string_view rest() { return s_.substr(pos_); }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

class ExprParser {
 public:
  ExprParser(LineCursor& cur, const Presentation& p) : cur_(cur), p_(p) {}

  // expr := term ('*' term)* ; the leftmost term is applied last.
  RelExprPtr expr() {
    std::vector<RelExprPtr> terms{term()};
    while (cur_.consume('*')) terms.push_back(term());
    RelExprPtr e = terms.back();
    for (std::size_t i = terms.size() - 1; i-- > 0;) e = expr::compose(terms[i], e);
    return e;
  }

 private:
  // 'x' and the other keywords are reserved, so a standalone identifier "x"
  // after an atom is always the product operator.
  RelExprPtr term() {
    RelExprPtr e = atom();
    while (true) {
      LineCursor save = cur_;
      auto id = cur_.try_ident();
      if (id && *id == "x") {
        e = expr::product(e, atom());
        continue;
      }
      cur_ = save;
      break;
    }
    return e;
  }

  RelExprPtr atom() {
    RelExprPtr e = prim();
    while (cur_.consume('+')) e = expr::sum(e, prim());
    return e;
  }

  RelExprPtr prim() {
    if (auto num = cur_.try_number()) return expr::scale(*num, prim());
    if (cur_.consume('(')) {
      RelExprPtr e = expr();
      cur_.expect(')', "to close group");
      return e;
    }
    const std::size_t col = cur_.col();
    auto id = cur_.try_ident();
    if (!id) cur_.fail("expected generator, id, inv(...), place(...) or number");
    if (*id == "id") {
      std::size_t k = 1;
      if (cur_.consume('^')) k = cur_.uint_value("after id^");
      return expr::id(k);
    }
    if (*id == "inv") {
      cur_.expect('(', "after inv");
      std::string g = cur_.ident("inside inv()");
      cur_.expect(')', "to close inv()");
      check_generator(g, col);
      return expr::inv(g);
    }
    if (*id == "place") {
      cur_.expect('(', "after place");
      std::string g = cur_.ident("inside place()");
      check_generator(g, col);
      cur_.expect(',', "in place()");
      const std::size_t i = cur_.uint_value("strand position");
      cur_.expect(',', "in place()");
      const std::size_t m = cur_.uint_value("strand count");
      cur_.expect(')', "to close place()");
      return expr::place(g, i, m);
    }
    if (p_.scalars.count(*id)) return expr::scale_sym(*id, prim());
    check_generator(*id, col);
    return expr::gen(*id);
  }

  void check_generator(const std::string& g, std::size_t col) {
    if (!p_.find_generator(g)) cur_.fail_at(col, "undeclared symbol " + g);
  }

  LineCursor& cur_;
  const Presentation& p_;
};

}  // namespace

Presentation parse_presentation(std::string_view text) {
  Presentation p;
  p.name = "custom";
  bool saw_structure = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);

    LineCursor cur(raw, line_no);
    if (cur.at_end()) continue;
    const std::string keyword = cur.ident("at start of line");

    if (keyword == "name") {
      p.name = cur.ident("after name");
    } else if (keyword == "structure") {
      const std::string k = cur.ident("after structure");
      if (k == "group") p.kind = StructureKind::group;
      else if (k == "algebra") p.kind = StructureKind::associative_algebra;
      else if (k == "lie") p.kind = StructureKind::lie_algebra;
      else if (k == "custom") p.kind = StructureKind::custom;
      else cur.fail("unknown structure kind " + k);
      saw_structure = true;
    } else if (keyword == "semantics") {
      const std::string s = cur.ident("after semantics");
      if (s == "concat") p.semantics = ProductSemantics::concat;
      else if (s == "tensor") p.semantics = ProductSemantics::tensor;
      else cur.fail("unknown semantics " + s);
    } else if (keyword == "scalar") {
      const std::string sname = cur.ident("after scalar");
      if (sname == "id" || sname == "inv" || sname == "place" || sname == "x")
        cur.fail("'" + sname + "' is a reserved word");
      cur.expect('=', "after scalar name");
      auto v = cur.try_number();
      if (!v) cur.fail("expected scalar value");
      p.scalars[sname] = *v;
    } else if (keyword == "generator") {
      GeneratorDecl g;
      g.name = cur.ident("after generator");
      if (g.name == "id" || g.name == "inv" || g.name == "place" || g.name == "x")
        cur.fail("'" + g.name + "' is a reserved word");
      const std::string kw = cur.ident("(expected 'arity')");
      if (kw != "arity") cur.fail("expected 'arity'");
      g.in_blocks = cur.uint_value("input block count");
      cur.expect('-', "in arity");
      cur.expect('>', "in arity");
      g.out_blocks = cur.uint_value("output block count");
      if (auto flag = cur.try_ident()) {
        if (*flag != "invertible") cur.fail("unexpected token " + *flag);
        g.invertible = true;
        g.inverse_name = g.name + "_inv";
      }
      p.generators.push_back(std::move(g));
    } else if (keyword == "relation") {
      // Optional label: everything before a ':' that precedes the first '='.
      std::string_view rest = cur.rest();
      std::string label;
      const std::size_t colon = rest.find(':');
      const std::size_t equals = rest.find('=');
      if (colon != std::string_view::npos &&
          (equals == std::string_view::npos || colon < equals)) {
        label = std::string(rest.substr(0, colon));
        while (!label.empty() && (label.back() == ' ' || label.back() == '\t'))
          label.pop_back();
        std::size_t lead = 0;
        while (lead < label.size() && (label[lead] == ' ' || label[lead] == '\t')) ++lead;
        label = label.substr(lead);
        cur.advance(colon + 1);
      }
      ExprParser ep(cur, p);
      RelExprPtr lhs = ep.expr();
      cur.expect('=', "between relation sides");
      RelExprPtr rhs = ep.expr();
      if (!cur.at_end()) cur.fail("trailing input after relation");
      if (label.empty()) label = "relation " + std::to_string(p.relations.size() + 1);
      p.relations.push_back({std::move(label), std::move(lhs), std::move(rhs)});
    } else {
      cur.fail("unknown directive " + keyword);
    }
  }

  if (!saw_structure) throw ParseError(1, 1, "missing 'structure' line");
  validate(p);
  return p;
}

}  // namespace repnet
