#include "ttk/text.hpp"

#include <cctype>
#include <cstring>
#include <sstream>

#include "ttk/stdlib.hpp"

namespace ttk {

namespace {

struct Token {
  enum class Kind : uint8_t { Ident, Nat, Punct, End } kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

struct Lexer {
  std::string src;
  size_t pos = 0;
  int line = 1;
  int col = 1;
  Token cur;

  explicit Lexer(std::string s) : src(std::move(s)) { advance(); }

  void bump(char c) {
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    pos++;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump(c);
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_ws();
    cur.line = line;
    cur.col = col;
    cur.text.clear();
    if (pos >= src.size()) {
      cur.kind = Token::Kind::End;
      cur.text = "<eof>";
      return;
    }
    char c = src[pos];
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < src.size() &&
             (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
              src[pos] == '\'')) {
        cur.text += src[pos];
        bump(src[pos]);
      }
      cur.kind = Token::Kind::Ident;
      return;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) {
        cur.text += src[pos];
        bump(src[pos]);
      }
      cur.kind = Token::Kind::Nat;
      return;
    }
    // Multi-char punctuation first.
    static const char* long_puncts[] = {"->", "|-", "/\\", ":="};
    for (const char* p : long_puncts) {
      size_t n = strlen(p);
      if (src.compare(pos, n, p) == 0) {
        cur.text = p;
        for (size_t i = 0; i < n; ++i) bump(src[pos]);
        cur.kind = Token::Kind::Punct;
        return;
      }
    }
    cur.text = std::string(1, c);
    bump(c);
    cur.kind = Token::Kind::Punct;
  }
};

struct Parser {
  Lexer lex;
  ParsedFile file;

  explicit Parser(std::string src) : lex(std::move(src)) {}

  [[noreturn]] void fail(const std::string& expected) {
    throw SyntaxError(lex.cur.line, lex.cur.col, expected, lex.cur.text);
  }

  bool at(const std::string& text) const { return lex.cur.text == text; }
  bool at_ident() const { return lex.cur.kind == Token::Kind::Ident; }

  void expect(const std::string& text) {
    if (!at(text)) fail("'" + text + "'");
    lex.advance();
  }

  std::string ident(const std::string& what) {
    if (!at_ident()) fail(what);
    std::string s = lex.cur.text;
    lex.advance();
    return s;
  }

  int nat() {
    if (lex.cur.kind != Token::Kind::Nat) fail("a number");
    int n = std::stoi(lex.cur.text);
    lex.advance();
    return n;
  }

  Sort sort() {
    int line = lex.cur.line;
    std::string kind = ident("a sort (tm, ty or ctx)");
    int level = nat();
    if (kind == "tm") return make_tm(level);
    if (kind == "ty") return make_ty(level);
    if (kind == "ctx") return make_ctx(level);
    throw UnknownSort(line, kind);
  }

  Term term(const Theory& th, const std::vector<std::pair<std::string, Sort>>& vars) {
    int line = lex.cur.line, col = lex.cur.col;
    std::string name = ident("a term");
    std::vector<Term> args;
    bool applied = false;
    if (at("(")) {
      applied = true;
      lex.advance();
      if (!at(")")) {
        args.push_back(term(th, vars));
        while (at(",")) {
          lex.advance();
          args.push_back(term(th, vars));
        }
      }
      expect(")");
    }
    if (!applied) {
      for (const auto& [v, s] : vars)
        if (v == name) return Term::var(name, s);
    }
    const FunSymbol* sym = th.fun(name);
    if (!sym) {
      if (!applied)
        throw SyntaxError(line, col, "a variable or declared symbol", name);
      throw SyntaxError(line, col, "a declared function symbol", name);
    }
    try {
      return Term::app(*sym, std::move(args));
    } catch (const KernelError& e) {
      throw SyntaxError(line, col, std::string("well-sorted arguments (") + e.what() + ")",
                        name);
    }
  }

  Atom atom(const Theory& th, const std::vector<std::pair<std::string, Sort>>& vars) {
    int line = lex.cur.line, col = lex.cur.col;
    if (at_ident() && th.pred(lex.cur.text)) {
      std::string name = ident("a predicate");
      const PredSymbol* p = th.pred(name);
      std::vector<Term> args;
      expect("(");
      if (!at(")")) {
        args.push_back(term(th, vars));
        while (at(",")) {
          lex.advance();
          args.push_back(term(th, vars));
        }
      }
      expect(")");
      if (args.size() != p->arg_sorts.size())
        throw SyntaxError(line, col, "matching predicate arity", name);
      for (size_t i = 0; i < args.size(); ++i)
        if (args[i].sort() != p->arg_sorts[i])
          throw SyntaxError(line, col, "well-sorted predicate arguments", name);
      return Atom::predicate(name, std::move(args));
    }
    Term lhs = term(th, vars);
    if (at("def")) {
      lex.advance();
      return Atom::defined(lhs);
    }
    expect("=");
    Term rhs = term(th, vars);
    if (lhs.sort() != rhs.sort())
      throw SyntaxError(line, col, "equation sides of equal sort", "=");
    return Atom::eq(lhs, rhs);
  }

  Formula formula(const Theory& th, const std::vector<std::pair<std::string, Sort>>& vars) {
    if (at("true")) {
      lex.advance();
      return Formula::top();
    }
    Formula f;
    f.atoms.push_back(atom(th, vars));
    while (at("/\\")) {
      lex.advance();
      f.atoms.push_back(atom(th, vars));
    }
    return f;
  }

  std::vector<std::pair<std::string, Sort>> var_list() {
    std::vector<std::pair<std::string, Sort>> vars;
    expect("[");
    if (!at("]")) {
      while (true) {
        int line = lex.cur.line;
        std::string v = ident("a variable");
        expect(":");
        Sort s = sort();
        for (const auto& [n, srt] : vars)
          if (n == v) throw DuplicateName(line, v);
        vars.emplace_back(v, s);
        if (at(",")) {
          lex.advance();
          continue;
        }
        break;
      }
    }
    expect("]");
    return vars;
  }

  void theory_block() {
    TheoryBlock block;
    expect("theory");
    block.theory.name = ident("a theory name");
    expect("{");
    while (!at("}")) {
      int line = lex.cur.line;
      if (at("import")) {
        lex.advance();
        std::string ns = ident("stdlib");
        if (ns != "stdlib") fail("'stdlib'");
        expect(".");
        std::string name = ident("a stdlib theory name");
        expect(";");
        NamedArtifact art = stdlib_theory(name);
        block.imports.push_back(name);
        for (const auto& f : art.theory->fun_symbols) {
          if (block.theory.fun(f.name)) {
            if (!block.imported_symbols.count(f.name))
              throw DuplicateName(line, f.name);
            continue;  // same symbol via overlapping imports
          }
          block.theory.add_fun(f);
          block.imported_symbols.insert(f.name);
        }
        for (const auto& p : art.theory->pred_symbols) {
          if (block.theory.pred(p.name)) {
            if (!block.imported_symbols.count(p.name)) throw DuplicateName(line, p.name);
            continue;
          }
          block.theory.add_pred(p);
          block.imported_symbols.insert(p.name);
        }
        for (const auto& ax : art.theory->axioms) {
          if (block.theory.axiom(ax.name)) {
            if (!block.imported_axioms.count(ax.name)) throw DuplicateName(line, ax.name);
            continue;
          }
          block.theory.axioms.push_back(ax);
          block.imported_axioms.insert(ax.name);
        }
        continue;
      }
      if (at("fun")) {
        lex.advance();
        std::string name = ident("a symbol name");
        if (block.theory.fun(name) || block.theory.pred(name))
          throw DuplicateName(line, name);
        expect(":");
        std::vector<Sort> args;
        Sort result;
        if (at("->")) {  // fun f : -> SORT ;
          lex.advance();
          result = sort();
        } else {
          Sort first = sort();
          if (at(";")) {  // fun c : SORT ;  (constant shorthand)
            result = first;
          } else {
            args.push_back(first);
            while (at("*")) {
              lex.advance();
              args.push_back(sort());
            }
            expect("->");
            result = sort();
          }
        }
        expect(";");
        FunSymbol f;
        f.name = name;
        f.arg_sorts = std::move(args);
        f.result_sort = result;
        block.theory.add_fun(std::move(f));
        continue;
      }
      if (at("pred")) {
        lex.advance();
        std::string name = ident("a predicate name");
        if (block.theory.fun(name) || block.theory.pred(name))
          throw DuplicateName(line, name);
        expect(":");
        std::vector<Sort> args;
        if (!at(";")) {
          args.push_back(sort());
          while (at("*")) {
            lex.advance();
            args.push_back(sort());
          }
        }
        expect(";");
        PredSymbol p;
        p.name = name;
        p.arg_sorts = std::move(args);
        block.theory.add_pred(std::move(p));
        continue;
      }
      if (at("axiom") || at("goal")) {
        bool is_goal = at("goal");
        lex.advance();
        std::string name = ident("an axiom name");
        if (!is_goal && block.theory.axiom(name)) throw DuplicateName(line, name);
        if (is_goal && block.goal(name)) throw DuplicateName(line, name);
        Sequent s;
        s.vars = var_list();
        expect(":");
        s.lhs = formula(block.theory, s.vars);
        expect("|-");
        s.rhs = formula(block.theory, s.vars);
        expect(";");
        if (is_goal)
          block.goals.emplace_back(name, std::move(s));
        else
          block.theory.add_axiom(name, std::move(s));
        continue;
      }
      if (at("telescope")) {
        lex.advance();
        std::string name = ident("a telescope name");
        if (block.telescope(name)) throw DuplicateName(line, name);
        expect("=");
        expect("[");
        Telescope tel;
        if (!at("]")) {
          while (true) {
            int eline = lex.cur.line, ecol = lex.cur.col;
            std::string v = ident("a telescope variable");
            std::optional<Sort> declared;
            if (at(":")) {
              lex.advance();
              declared = sort();
            }
            expect(":=");
            Term assigned = term(block.theory, tel.var_list());
            Sort vs;
            if (declared) {
              vs = *declared;
              if (!has_boundary(vs) || boundary_sort(vs) != assigned.sort())
                throw SyntaxError(eline, ecol,
                                  "a variable sort whose boundary matches the term", v);
            } else {
              // Infer: the unique tm/ty sort with this boundary sort.
              Sort b = assigned.sort();
              bool tm_ok = b.kind == SortKind::Ctx && b.level >= 1;  // (ty,n) boundary of (tm,n)
              bool ty_ok = b.kind == SortKind::Ctx;                  // (ctx,n) boundary of (ty,n)
              if (tm_ok && ty_ok)
                throw SyntaxError(eline, ecol,
                                  "an explicit sort (ambiguous telescope entry)", v);
              if (ty_ok)
                vs = make_ty(b.level);
              else if (tm_ok)
                vs = make_tm(ty_level(b));
              else
                throw SyntaxError(eline, ecol, "an assignable boundary sort", v);
            }
            tel.entries.push_back(TelescopeEntry{v, vs, assigned});
            if (at(";")) {
              lex.advance();
              continue;
            }
            break;
          }
        }
        expect("]");
        expect(";");
        block.telescopes.emplace_back(name, std::move(tel));
        continue;
      }
      fail("an item (fun, pred, axiom, goal, telescope, import)");
    }
    expect("}");
    for (const auto& t : file.theories)
      if (t.theory.name == block.theory.name)
        throw DuplicateName(lex.cur.line, block.theory.name);
    restore_stdlib_flags(block.theory);
    file.theories.push_back(std::move(block));
  }

  // Textual files carry no metadata flags; symbols and axioms that coincide
  // with the stdlib base (or its substitution machinery) get them back.
  static void restore_stdlib_flags(Theory& th) {
    static const NamedArtifact base = stdlib_theory("base");
    for (auto& f : th.fun_symbols) {
      if (const FunSymbol* b = base.theory->fun(f.name))
        f.from_base = b->arg_sorts == f.arg_sorts && b->result_sort == f.result_sort;
      for (const char* m : {"wk_ty", "wk_tm", "var", "subst_ty", "subst_tm", "comp"})
        if (f.name.rfind(m, 0) == 0 &&
            f.name.find_first_not_of("0123456789", strlen(m)) == std::string::npos)
          f.structural = true;
    }
    for (auto& p : th.pred_symbols)
      if (base.theory->pred(p.name)) p.from_base = true;
    for (auto& ax : th.axioms) {
      const NamedAxiom* b = base.theory->axiom(ax.name);
      if (b && b->sequent == ax.sequent) ax.from_base = true;
    }
  }

  void morphism_block() {
    expect("morphism");
    TheoryMorphism m;
    int line = lex.cur.line;
    m.name = ident("a morphism name");
    if (file.morphism(m.name)) throw DuplicateName(line, m.name);
    expect(":");
    std::string src = ident("a source theory");
    expect("->");
    std::string dst = ident("a target theory");
    const TheoryBlock* sb = file.theory(src);
    const TheoryBlock* db = file.theory(dst);
    if (!sb) fail("a previously declared theory (" + src + ")");
    if (!db) fail("a previously declared theory (" + dst + ")");
    m.source = sb->theory;
    m.target = db->theory;
    expect("{");
    while (!at("}")) {
      expect("map");
      int mline = lex.cur.line, mcol = lex.cur.col;
      std::string name = ident("a source symbol");
      std::vector<std::string> params;
      expect("(");
      if (!at(")")) {
        params.push_back(ident("a parameter"));
        while (at(",")) {
          lex.advance();
          params.push_back(ident("a parameter"));
        }
      }
      expect(")");
      expect("=");
      if (const FunSymbol* f = m.source.fun(name)) {
        if (params.size() != f->arity())
          throw SyntaxError(mline, mcol, "matching parameter count", name);
        std::vector<std::pair<std::string, Sort>> vars;
        for (size_t i = 0; i < params.size(); ++i)
          vars.emplace_back(params[i], f->arg_sorts[i]);
        Term body = term(m.target, vars);
        if (body.sort() != f->result_sort)
          throw SyntaxError(mline, mcol, "an image of the declared result sort", name);
        m.fun_map[name] = FunImage{params, body};
      } else if (const PredSymbol* p = m.source.pred(name)) {
        if (params.size() != p->arg_sorts.size())
          throw SyntaxError(mline, mcol, "matching parameter count", name);
        std::vector<std::pair<std::string, Sort>> vars;
        for (size_t i = 0; i < params.size(); ++i)
          vars.emplace_back(params[i], p->arg_sorts[i]);
        Formula body = formula(m.target, vars);
        m.pred_map[name] = PredImage{params, body};
      } else {
        throw SyntaxError(mline, mcol, "a symbol of the source theory", name);
      }
      expect(";");
    }
    expect("}");
    ValidationReport vr = validate_morphism(m);
    if (!vr.ok())
      throw SyntaxError(line, 1,
                        "a total sort-preserving morphism (" + vr.issues[0].code + " " +
                            vr.issues[0].position + ")",
                        m.name);
    for (const auto& ax : m.source.axioms) m.obligation_status[ax.name] = {};
    file.morphisms.push_back(std::move(m));
  }

  ParsedFile run() {
    while (lex.cur.kind != Token::Kind::End) {
      if (at("theory"))
        theory_block();
      else if (at("morphism"))
        morphism_block();
      else
        fail("'theory' or 'morphism'");
    }
    return std::move(file);
  }
};

}  // namespace

ParsedFile parse_theory_file(const std::string& text) { return Parser(text).run(); }

Term parse_term(const std::string& text, const Theory& theory,
                const std::vector<std::pair<std::string, Sort>>& vars) {
  Parser p(text);
  Term t = p.term(theory, vars);
  if (p.lex.cur.kind != Token::Kind::End) p.fail("end of input");
  return t;
}

std::string print_sort(Sort s) { return show_sort(s); }

std::string print_term(const Term& t) {
  if (t.is_var()) return t.head();
  if (t.args().empty()) return t.head();
  std::string out = t.head() + "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    out += print_term(t.args()[i]);
  }
  return out + ")";
}

namespace {

std::string print_atom(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Eq: return print_term(a.lhs) + " = " + print_term(a.rhs);
    case Atom::Kind::Defined: return print_term(a.lhs) + " def";
    case Atom::Kind::Pred: {
      std::string out = a.pred + "(";
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        out += print_term(a.args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace

std::string print_formula(const Formula& f) {
  if (f.is_top()) return "true";
  std::string out;
  for (size_t i = 0; i < f.atoms.size(); ++i) {
    if (i) out += " /\\ ";
    out += print_atom(f.atoms[i]);
  }
  return out;
}

namespace {

std::string print_sequent_body(const Sequent& s) {
  std::string out = "[";
  for (size_t i = 0; i < s.vars.size(); ++i) {
    if (i) out += ", ";
    out += s.vars[i].first + " : " + print_sort(s.vars[i].second);
  }
  out += "] : " + print_formula(s.lhs) + " |- " + print_formula(s.rhs);
  return out;
}

}  // namespace

std::string print_theory_file(const ParsedFile& file) {
  std::ostringstream out;
  bool first = true;
  for (const auto& block : file.theories) {
    if (!first) out << "\n";
    first = false;
    out << "theory " << block.theory.name << " {\n";
    for (const auto& imp : block.imports) out << "  import stdlib." << imp << " ;\n";
    for (const auto& f : block.theory.fun_symbols) {
      if (block.imported_symbols.count(f.name)) continue;
      out << "  fun " << f.name << " : ";
      if (f.arg_sorts.empty()) {
        out << print_sort(f.result_sort);
      } else {
        for (size_t i = 0; i < f.arg_sorts.size(); ++i) {
          if (i) out << " * ";
          out << print_sort(f.arg_sorts[i]);
        }
        out << " -> " << print_sort(f.result_sort);
      }
      out << " ;\n";
    }
    for (const auto& p : block.theory.pred_symbols) {
      if (block.imported_symbols.count(p.name)) continue;
      out << "  pred " << p.name << " : ";
      for (size_t i = 0; i < p.arg_sorts.size(); ++i) {
        if (i) out << " * ";
        out << print_sort(p.arg_sorts[i]);
      }
      out << " ;\n";
    }
    for (const auto& ax : block.theory.axioms) {
      if (block.imported_axioms.count(ax.name)) continue;
      out << "  axiom " << ax.name << " " << print_sequent_body(ax.sequent) << " ;\n";
    }
    for (const auto& [name, tel] : block.telescopes) {
      out << "  telescope " << name << " = [ ";
      for (size_t i = 0; i < tel.entries.size(); ++i) {
        if (i) out << " ; ";
        out << tel.entries[i].var << " : " << print_sort(tel.entries[i].sort) << " := "
            << print_term(tel.entries[i].assigned);
      }
      out << " ] ;\n";
    }
    for (const auto& [name, g] : block.goals)
      out << "  goal " << name << " " << print_sequent_body(g) << " ;\n";
    out << "}\n";
  }
  for (const auto& m : file.morphisms) {
    out << "\nmorphism " << m.name << " : " << m.source.name << " -> " << m.target.name
        << " {\n";
    for (const auto& [name, img] : m.fun_map) {
      out << "  map " << name << " (";
      for (size_t i = 0; i < img.params.size(); ++i) {
        if (i) out << ", ";
        out << img.params[i];
      }
      out << ") = " << print_term(img.body) << " ;\n";
    }
    for (const auto& [name, img] : m.pred_map) {
      out << "  map " << name << " (";
      for (size_t i = 0; i < img.params.size(); ++i) {
        if (i) out << ", ";
        out << img.params[i];
      }
      out << ") = " << print_formula(img.body) << " ;\n";
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace ttk
