#include "a4/parser.hpp"

#include <cctype>
#include <unordered_set>

#include "a4/type_resolver.hpp"

namespace a4 {

namespace {

bool is_primitive_word(std::string_view w) {
  static const std::unordered_set<std::string_view> prims = {
      "int", "long", "short", "byte", "char", "boolean", "float", "double", "void"};
  return prims.count(w) > 0;
}

bool is_modifier_word(std::string_view w) {
  static const std::unordered_set<std::string_view> mods = {
      "public", "private", "protected", "static", "final", "abstract",
      "synchronized", "native", "transient", "volatile", "strictfp", "default"};
  return mods.count(w) > 0;
}

struct BinOp {
  std::string_view text;
  int prec;
};

int binary_precedence(std::string_view t) {
  if (t == "*" || t == "/" || t == "%") return 10;
  if (t == "+" || t == "-") return 9;
  if (t == "<<" || t == ">>" || t == ">>>") return 8;
  if (t == "<" || t == ">" || t == "<=" || t == ">=" || t == "instanceof") return 7;
  if (t == "==" || t == "!=") return 6;
  if (t == "&") return 5;
  if (t == "^") return 4;
  if (t == "|") return 3;
  if (t == "&&") return 2;
  if (t == "||") return 1;
  return 0;
}

bool is_assign_op(std::string_view t) {
  return t == "=" || t == "+=" || t == "-=" || t == "*=" || t == "/=" ||
         t == "%=" || t == "&=" || t == "|=" || t == "^=" || t == "<<=" ||
         t == ">>=" || t == ">>>=";
}

class Parser {
 public:
  explicit Parser(std::string source) {
    result_.ast = Ast(std::move(source));
    tokens_ = tokenize(result_.ast.source());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!tokens_[i].is_trivia()) sig_.push_back(i);
    }
  }

  ParseResult run() {
    NodeId root = parse_compilation_unit();
    result_.ast.set_root(root);
    annotate_unresolved_types(result_.ast, result_.diagnostics);
    result_.completeness =
        result_.diagnostics.empty() ? Completeness::Full : Completeness::Partial;
    return std::move(result_);
  }

 private:
  ParseResult result_;
  TokenStream tokens_;
  std::vector<std::size_t> sig_;
  std::size_t pos_ = 0;

  Ast& ast() { return result_.ast; }

  // ---- token access -------------------------------------------------

  bool at_end() const { return pos_ >= sig_.size(); }

  const Token& tok(std::size_t p) const {
    static const Token eof{TokenKind::Punctuation, "", {0, 0}};
    return p < sig_.size() ? tokens_[sig_[p]] : eof;
  }
  const Token& cur() const { return tok(pos_); }
  const Token& peek(std::size_t ahead = 1) const { return tok(pos_ + ahead); }

  bool is(std::string_view text) const { return cur().text == text; }
  bool is_kind(TokenKind k) const { return !at_end() && cur().kind == k; }

  void advance() { ++pos_; }

  bool accept(std::string_view text) {
    if (is(text)) {
      advance();
      return true;
    }
    return false;
  }

  std::size_t save() const { return pos_; }
  void restore(std::size_t p) { pos_ = p; }

  std::size_t begin_offset(std::size_t p) const {
    return p < sig_.size() ? tok(p).span.begin
                           : (tokens_.empty() ? 0 : tokens_.back().span.end);
  }
  // End offset of the last consumed significant token.
  std::size_t prev_end() const {
    if (pos_ == 0) return 0;
    return tok(pos_ - 1).span.end;
  }

  void diag(ByteSpan span, std::string message) {
    result_.diagnostics.push_back(Diagnostic{span, std::move(message)});
  }

  // ---- recovery -----------------------------------------------------

  // Skips tokens with balanced (), [], {} until a stop token at depth 0 or
  // a closer that would unbalance. Consumes a trailing ';' stop. Returns an
  // OpaqueExpr over the skipped region, or kInvalidNode if nothing was
  // consumable.
  NodeId opaque_capture(const std::unordered_set<std::string_view>& stops,
                        std::string_view what) {
    std::size_t start = pos_;
    int depth = 0;
    bool consumed_any = false;
    while (!at_end()) {
      const std::string& t = cur().text;
      if (depth == 0 && stops.count(t)) {
        if (t == ";") {
          advance();
          consumed_any = true;
        }
        break;
      }
      if (t == "(" || t == "[" || t == "{") {
        ++depth;
      } else if (t == ")" || t == "]" || t == "}") {
        if (depth == 0) break;
        --depth;
      }
      advance();
      consumed_any = true;
    }
    if (!consumed_any) return kInvalidNode;
    ByteSpan span{begin_offset(start), prev_end()};
    NodeId n = ast().make(NodeKind::OpaqueExpr, span);
    diag(span, std::string("skipped ") + std::string(what));
    return n;
  }

  // Statement-shaped capture: ends at a depth-0 ';' or right after a
  // balanced top-level '{...}' body. A `do` body continues through the
  // trailing `while (...);`.
  NodeId opaque_statement_capture(std::string_view what) {
    std::size_t start = pos_;
    bool is_do = is("do");
    int depth = 0;
    bool consumed_any = false;
    while (!at_end()) {
      const std::string& t = cur().text;
      if (depth == 0 && t == ";") {
        advance();
        consumed_any = true;
        break;
      }
      if (t == "(" || t == "[" || t == "{") {
        ++depth;
      } else if (t == ")" || t == "]" || t == "}") {
        if (depth == 0) break;
        --depth;
        if (depth == 0 && t == "}") {
          advance();
          consumed_any = true;
          if (is_do && is("while")) continue;
          break;
        }
      }
      advance();
      consumed_any = true;
    }
    if (!consumed_any) return kInvalidNode;
    ByteSpan span{begin_offset(start), prev_end()};
    NodeId n = ast().make(NodeKind::OpaqueExpr, span);
    diag(span, std::string("skipped ") + std::string(what));
    return n;
  }

  // ---- types --------------------------------------------------------

  // Consumes a type reference; returns its erased text ("java.util.List",
  // "int[]") or empty on failure (position restored).
  std::string try_type_ref() {
    std::size_t mark = save();
    std::string text;
    if (is_kind(TokenKind::Keyword) && is_primitive_word(cur().text)) {
      text = cur().text;
      advance();
    } else if (is_kind(TokenKind::Identifier)) {
      text = cur().text;
      advance();
      while (is(".") && peek().kind == TokenKind::Identifier) {
        advance();
        text += "." + cur().text;
        advance();
      }
    } else {
      restore(mark);
      return "";
    }
    if (is("<") && !skip_type_arguments()) {
      // comparison, not generics; keep the bare name
    }
    while (is("[") && peek().text == "]") {
      advance();
      advance();
      text += "[]";
    }
    return text;
  }

  // Consumes <...> including nested arguments; angle depth is tracked over
  // the shift tokens. Fails (restores) when the brackets cannot close.
  bool skip_type_arguments() {
    std::size_t mark = save();
    if (!accept("<")) return false;
    int depth = 1;
    while (!at_end() && depth > 0) {
      const std::string& t = cur().text;
      if (t == "<") {
        ++depth;
      } else if (t == ">") {
        --depth;
      } else if (t == ">>") {
        depth -= 2;
      } else if (t == ">>>") {
        depth -= 3;
      } else if (t == ";" || t == ")" || t == "{" || t == "}" || t == "=") {
        restore(mark);
        return false;
      }
      advance();
    }
    if (depth > 0 || depth < 0) {
      // ran out, or a shift token over-closed: treat as not-generics
      if (depth > 0) {
        restore(mark);
        return false;
      }
    }
    return depth == 0;
  }

  bool looks_like_type(const std::string& text) const {
    if (text.empty()) return false;
    if (is_primitive_word(text)) return true;
    if (text.find('.') != std::string::npos) return true;
    if (text.size() >= 2 && text.substr(text.size() - 2) == "[]") return true;
    return std::isupper(static_cast<unsigned char>(text[0])) != 0;
  }

  // ---- compilation unit ---------------------------------------------

  NodeId parse_compilation_unit() {
    NodeId unit = ast().make(NodeKind::CompilationUnit,
                             {0, ast().source().size()});
    // package declaration is kept as an attribute, not a node
    if (is("package")) {
      advance();
      std::string pkg;
      while (is_kind(TokenKind::Identifier)) {
        pkg += cur().text;
        advance();
        if (is(".")) {
          pkg += '.';
          advance();
        } else {
          break;
        }
      }
      accept(";");
      ast().node(unit).name = pkg;
    }
    while (!at_end()) {
      if (is("import")) {
        NodeId imp = parse_import();
        if (imp != kInvalidNode) {
          ast().add_child(unit, imp);
          continue;
        }
      }
      if (is("class") || is("interface") || is("enum") ||
          is_modifier_word(cur().text) || is("@")) {
        std::size_t before = pos_;
        NodeId decl = parse_type_decl();
        if (decl != kInvalidNode) {
          ast().add_child(unit, decl);
          continue;
        }
        restore(before);
      }
      NodeId opaque = opaque_capture({";", "}"}, "top-level construct");
      if (opaque != kInvalidNode) {
        ast().add_child(unit, opaque);
      } else {
        advance();  // lone closer; drop it
      }
    }
    return unit;
  }

  NodeId parse_import() {
    std::size_t start = pos_;
    advance();  // import
    bool is_static = accept("static");
    std::string path;
    while (is_kind(TokenKind::Identifier) || is("*")) {
      path += cur().text;
      advance();
      if (is(".")) {
        path += '.';
        advance();
      } else {
        break;
      }
    }
    accept(";");
    if (path.empty()) {
      restore(start);
      return kInvalidNode;
    }
    NodeId n = ast().make(NodeKind::ImportDecl, {begin_offset(start), prev_end()});
    ast().node(n).name = path;
    ast().node(n).is_static = is_static;
    return n;
  }

  // ---- declarations -------------------------------------------------

  // Consumes modifiers and annotations. Marker annotations are swallowed;
  // annotations with arguments become opaque children on `attach_to` later
  // (returned in `opaques`).
  void parse_modifiers(std::vector<NodeId>& opaques, bool* saw_static = nullptr) {
    while (!at_end()) {
      if (is_kind(TokenKind::Keyword) && is_modifier_word(cur().text)) {
        if (saw_static && cur().text == "static") *saw_static = true;
        advance();
        continue;
      }
      if (is("@")) {
        std::size_t start = pos_;
        advance();
        while (is_kind(TokenKind::Identifier)) {
          advance();
          if (!accept(".")) break;
        }
        if (is("(")) {
          // annotation with arguments: capture it whole
          advance();
          int depth = 1;
          while (!at_end() && depth > 0) {
            if (is("(")) ++depth;
            if (is(")")) --depth;
            advance();
          }
          ByteSpan span{begin_offset(start), prev_end()};
          NodeId n = ast().make(NodeKind::OpaqueExpr, span);
          diag(span, "skipped annotation with arguments");
          opaques.push_back(n);
        }
        continue;
      }
      break;
    }
  }

  NodeId parse_type_decl() {
    std::size_t start = pos_;
    std::vector<NodeId> opaques;
    parse_modifiers(opaques);
    std::string decl_word;
    if (is("class") || is("interface") || is("enum")) {
      decl_word = cur().text;
      advance();
    } else {
      return kInvalidNode;
    }
    if (!is_kind(TokenKind::Identifier)) return kInvalidNode;
    NodeId decl = ast().make(NodeKind::ClassDecl, {begin_offset(start), 0});
    ast().node(decl).name = cur().text;
    ast().node(decl).name_span = cur().span;
    ast().node(decl).op = decl_word;
    advance();
    for (NodeId o : opaques) ast().add_child(decl, o);
    if (is("<")) {
      std::size_t gstart = pos_;
      if (skip_type_arguments()) {
        ByteSpan span{begin_offset(gstart), prev_end()};
        NodeId n = ast().make(NodeKind::OpaqueExpr, span);
        diag(span, "skipped type parameter declaration");
        ast().add_child(decl, n);
      }
    }
    // extends / implements clause: type names only
    while (is("extends") || is("implements") || is(",")) {
      advance();
      try_type_ref();
    }
    if (!accept("{")) {
      opaque_capture({";", "{"}, "malformed type header");
      accept("{");
    }
    parse_class_body(decl);
    ast().node(decl).span.end = prev_end();
    return decl;
  }

  void parse_class_body(NodeId decl) {
    while (!at_end() && !is("}")) {
      std::size_t before = pos_;
      NodeId member = parse_member(ast().node(decl).name);
      if (member != kInvalidNode) {
        ast().add_child(decl, member);
        continue;
      }
      restore(before);
      NodeId opaque = opaque_capture({";", "}"}, "class member");
      if (opaque != kInvalidNode) {
        ast().add_child(decl, opaque);
      } else if (!is("}")) {
        advance();
      }
    }
    accept("}");
  }

  NodeId parse_member(const std::string& class_name) {
    std::size_t start = pos_;
    if (accept(";")) {
      NodeId n = ast().make(NodeKind::ExprStmt, {begin_offset(start), prev_end()});
      return n;
    }
    std::vector<NodeId> opaques;
    bool saw_static = false;
    parse_modifiers(&opaques != nullptr ? opaques : opaques, &saw_static);
    if (is("class") || is("interface") || is("enum")) {
      restore(start);
      return parse_type_decl();
    }
    if (is("{")) {
      // initializer block
      NodeId block = parse_block();
      if (block == kInvalidNode) return kInvalidNode;
      ast().node(block).span.begin = begin_offset(start);
      for (NodeId o : opaques) ast().add_child(block, o);
      return block;
    }
    NodeId generic_opaque = kInvalidNode;
    if (is("<")) {
      std::size_t gstart = pos_;
      if (!skip_type_arguments()) return kInvalidNode;
      ByteSpan span{begin_offset(gstart), prev_end()};
      generic_opaque = ast().make(NodeKind::OpaqueExpr, span);
      diag(span, "skipped method type parameters");
    }
    // constructor
    if (is_kind(TokenKind::Identifier) && cur().text == class_name &&
        peek().text == "(") {
      return parse_method_rest(start, "", opaques, generic_opaque);
    }
    std::string type = try_type_ref();
    if (type.empty()) return kInvalidNode;
    if (!is_kind(TokenKind::Identifier)) return kInvalidNode;
    if (peek().text == "(") {
      return parse_method_rest(start, type, opaques, generic_opaque);
    }
    // field declaration
    NodeId field = parse_declarators(NodeKind::FieldDecl, start, type);
    if (field == kInvalidNode) return kInvalidNode;
    for (NodeId o : opaques) ast().add_child(field, o);
    if (generic_opaque != kInvalidNode) ast().add_child(field, generic_opaque);
    ast().node(field).is_static = saw_static;
    return field;
  }

  NodeId parse_method_rest(std::size_t start, const std::string& return_type,
                           const std::vector<NodeId>& opaques,
                           NodeId generic_opaque) {
    NodeId method = ast().make(NodeKind::MethodDecl, {begin_offset(start), 0});
    ast().node(method).name = cur().text;
    ast().node(method).name_span = cur().span;
    ast().node(method).declared_type = return_type;
    advance();
    for (NodeId o : opaques) ast().add_child(method, o);
    if (generic_opaque != kInvalidNode) ast().add_child(method, generic_opaque);
    std::size_t paren_start = begin_offset(pos_);
    accept("(");
    if (!is(")")) {
      while (!at_end()) {
        NodeId param = parse_parameter();
        if (param != kInvalidNode) ast().add_child(method, param);
        if (accept(",")) continue;
        break;
      }
    }
    if (!accept(")")) {
      opaque_capture({")"}, "parameter list");
      accept(")");
    }
    ast().node(method).header_span = ByteSpan{paren_start, prev_end()};
    if (is("throws")) {
      advance();
      while (true) {
        if (try_type_ref().empty()) break;
        if (!accept(",")) break;
      }
    }
    if (is("{")) {
      NodeId body = parse_block();
      if (body != kInvalidNode) ast().add_child(method, body);
    } else {
      accept(";");  // abstract / interface method
    }
    ast().node(method).span.end = prev_end();
    return method;
  }

  NodeId parse_parameter() {
    std::size_t start = pos_;
    std::vector<NodeId> annots;
    parse_modifiers(annots);
    std::string type = try_type_ref();
    if (type.empty()) {
      restore(start);
      return kInvalidNode;
    }
    // varargs: lexed as three '.' tokens
    while (is(".") && peek().text == "." && peek(2).text == ".") {
      advance();
      advance();
      advance();
      type += "[]";
    }
    if (!is_kind(TokenKind::Identifier)) {
      restore(start);
      return kInvalidNode;
    }
    NodeId param = ast().make(NodeKind::LocalVarDecl, {begin_offset(start), 0});
    ast().node(param).name = cur().text;
    ast().node(param).name_span = cur().span;
    ast().node(param).declared_type = type;
    advance();
    while (is("[") && peek().text == "]") {
      advance();
      advance();
      ast().node(param).declared_type += "[]";
    }
    ast().node(param).span.end = prev_end();
    for (NodeId a : annots) ast().add_child(param, a);
    return param;
  }

  // Shared by fields and locals: `T a = e1, b = e2;`
  NodeId parse_declarators(NodeKind kind, std::size_t start,
                           const std::string& type) {
    if (!is_kind(TokenKind::Identifier)) return kInvalidNode;
    NodeId decl = ast().make(kind, {begin_offset(start), 0});
    ast().node(decl).declared_type = type;
    ast().node(decl).name = cur().text;
    ast().node(decl).name_span = cur().span;
    advance();
    while (is("[") && peek().text == "]") {
      advance();
      advance();
      ast().node(decl).declared_type += "[]";
    }
    bool first = true;
    while (true) {
      if (accept("=")) {
        NodeId init = parse_expr_bounded({",", ";"});
        if (init != kInvalidNode) ast().add_child(decl, init);
      }
      if (accept(",")) {
        if (!is_kind(TokenKind::Identifier)) break;
        ast().node(decl).extra_names.push_back(cur().text);
        advance();
        first = false;
        continue;
      }
      break;
    }
    (void)first;
    if (!accept(";")) {
      // missing semicolon: stop at whatever ended the declarators
    }
    ast().node(decl).span.end = prev_end();
    return decl;
  }

  // ---- statements ---------------------------------------------------

  NodeId parse_block() {
    std::size_t start = pos_;
    if (!accept("{")) return kInvalidNode;
    NodeId block = ast().make(NodeKind::Block, {begin_offset(start), 0});
    while (!at_end() && !is("}")) {
      std::size_t before = pos_;
      NodeId stmt = parse_statement();
      if (stmt != kInvalidNode && pos_ > before) {
        ast().add_child(block, stmt);
        continue;
      }
      restore(before);
      NodeId opaque = opaque_capture({";", "}"}, "statement");
      if (opaque != kInvalidNode) {
        ast().add_child(block, opaque);
      } else if (!is("}")) {
        advance();
      }
    }
    accept("}");
    ast().node(block).span.end = prev_end();
    return block;
  }

  NodeId parse_statement() {
    std::size_t start = pos_;
    if (is("{")) return parse_block();
    if (accept(";")) {
      return ast().make(NodeKind::ExprStmt, {begin_offset(start), prev_end()});
    }
    if (is("if")) return parse_if();
    if (is("while")) return parse_while();
    if (is("for")) return parse_for();
    if (is("try")) return parse_try();
    if (is("return")) return parse_return();
    if (is("throw") || is("break") || is("continue") || is("assert")) {
      return opaque_capture({";"}, "unsupported statement");
    }
    if (is("switch") || is("do") || is("synchronized")) {
      return opaque_statement_capture("unsupported statement");
    }
    // local variable declaration?
    {
      std::size_t mark = save();
      while (is("final") || (is("@") && peek().kind == TokenKind::Identifier)) {
        if (is("final")) {
          advance();
        } else {
          advance();
          advance();
          if (is("(")) {  // annotated local with args: bail to opaque path
            restore(mark);
            break;
          }
        }
      }
      std::string type = try_type_ref();
      if (!type.empty() && is_kind(TokenKind::Identifier)) {
        const std::string& after = peek().text;
        if (after == "=" || after == ";" || after == ",") {
          NodeId decl = parse_declarators(NodeKind::LocalVarDecl, mark, type);
          if (decl != kInvalidNode) return decl;
        }
      }
      restore(mark);
    }
    // expression statement
    NodeId expr = parse_expr_bounded({";"});
    if (expr == kInvalidNode) return kInvalidNode;
    accept(";");
    NodeId stmt = ast().make(NodeKind::ExprStmt, {begin_offset(start), prev_end()});
    ast().add_child(stmt, expr);
    return stmt;
  }

  NodeId parse_if() {
    std::size_t start = pos_;
    advance();  // if
    NodeId stmt = ast().make(NodeKind::IfStmt, {begin_offset(start), 0});
    std::size_t paren_start = begin_offset(pos_);
    accept("(");
    NodeId cond = parse_expr_bounded({")"});
    accept(")");
    ast().node(stmt).header_span = ByteSpan{paren_start, prev_end()};
    if (cond != kInvalidNode) ast().add_child(stmt, cond);
    NodeId then_branch = parse_statement();
    if (then_branch != kInvalidNode) ast().add_child(stmt, then_branch);
    if (accept("else")) {
      NodeId else_branch = parse_statement();
      if (else_branch != kInvalidNode) ast().add_child(stmt, else_branch);
    }
    ast().node(stmt).span.end = prev_end();
    return stmt;
  }

  NodeId parse_while() {
    std::size_t start = pos_;
    advance();  // while
    NodeId stmt = ast().make(NodeKind::WhileStmt, {begin_offset(start), 0});
    std::size_t paren_start = begin_offset(pos_);
    accept("(");
    NodeId cond = parse_expr_bounded({")"});
    accept(")");
    ast().node(stmt).header_span = ByteSpan{paren_start, prev_end()};
    if (cond != kInvalidNode) ast().add_child(stmt, cond);
    NodeId body = parse_statement();
    if (body != kInvalidNode) ast().add_child(stmt, body);
    ast().node(stmt).span.end = prev_end();
    return stmt;
  }

  NodeId parse_for() {
    std::size_t start = pos_;
    advance();  // for
    NodeId stmt = ast().make(NodeKind::ForStmt, {begin_offset(start), 0});
    std::size_t paren_start = begin_offset(pos_);
    accept("(");
    // enhanced for: `Type name : iterable`
    {
      std::size_t mark = save();
      accept("final");
      std::string type = try_type_ref();
      if (!type.empty() && is_kind(TokenKind::Identifier) && peek().text == ":") {
        ast().node(stmt).is_enhanced_for = true;
        ast().node(stmt).name = cur().text;
        ast().node(stmt).name_span = cur().span;
        ast().node(stmt).declared_type = type;
        advance();  // name
        advance();  // :
        NodeId iterable = parse_expr_bounded({")"});
        accept(")");
        ast().node(stmt).header_span = ByteSpan{paren_start, prev_end()};
        if (iterable != kInvalidNode) ast().add_child(stmt, iterable);
        NodeId body = parse_statement();
        if (body != kInvalidNode) ast().add_child(stmt, body);
        ast().node(stmt).span.end = prev_end();
        return stmt;
      }
      restore(mark);
    }
    // classic for
    if (!is(";")) {
      std::size_t mark = save();
      accept("final");
      std::string type = try_type_ref();
      bool parsed_decl = false;
      if (!type.empty() && is_kind(TokenKind::Identifier)) {
        const std::string& after = peek().text;
        if (after == "=" || after == "," || after == ";") {
          NodeId decl = parse_declarators(NodeKind::LocalVarDecl, mark, type);
          if (decl != kInvalidNode) {
            ast().add_child(stmt, decl);
            parsed_decl = true;
          }
        }
      }
      if (!parsed_decl) {
        restore(mark);
        NodeId init = parse_expr_bounded({";", ")"});
        if (init != kInvalidNode) ast().add_child(stmt, init);
        accept(";");
      }
    } else {
      advance();
    }
    if (!is(";") && !is(")")) {
      NodeId cond = parse_expr_bounded({";", ")"});
      if (cond != kInvalidNode) ast().add_child(stmt, cond);
    }
    accept(";");
    while (!is(")") && !at_end()) {
      NodeId update = parse_expr_bounded({",", ")"});
      if (update != kInvalidNode) ast().add_child(stmt, update);
      if (!accept(",")) break;
    }
    accept(")");
    ast().node(stmt).header_span = ByteSpan{paren_start, prev_end()};
    NodeId body = parse_statement();
    if (body != kInvalidNode) ast().add_child(stmt, body);
    ast().node(stmt).span.end = prev_end();
    return stmt;
  }

  NodeId parse_try() {
    std::size_t start = pos_;
    advance();  // try
    NodeId stmt = ast().make(NodeKind::TryStmt, {begin_offset(start), 0});
    if (is("(")) {
      // try-with-resources is outside the subset
      std::size_t rstart = pos_;
      advance();
      int depth = 1;
      while (!at_end() && depth > 0) {
        if (is("(")) ++depth;
        if (is(")")) --depth;
        advance();
      }
      ByteSpan span{begin_offset(rstart), prev_end()};
      NodeId res = ast().make(NodeKind::OpaqueExpr, span);
      diag(span, "skipped try-with-resources header");
      ast().add_child(stmt, res);
      ast().node(stmt).header_span = span;
    }
    NodeId body = parse_block();
    if (body != kInvalidNode) {
      ast().node(body).op = "try";
      ast().add_child(stmt, body);
    }
    while (is("catch")) {
      advance();
      accept("(");
      std::size_t pstart = pos_;
      std::string type = try_type_ref();
      while (accept("|")) try_type_ref();
      std::string pname;
      ByteSpan pspan{begin_offset(pstart), 0};
      if (is_kind(TokenKind::Identifier)) {
        pname = cur().text;
        pspan.end = cur().span.end;
        advance();
      }
      accept(")");
      NodeId cblock = parse_block();
      if (cblock == kInvalidNode) break;
      ast().node(cblock).op = "catch";
      if (!pname.empty()) {
        NodeId param = ast().make(NodeKind::LocalVarDecl, pspan);
        ast().node(param).name = pname;
        ast().node(param).declared_type = type;
        // parameter scopes to the catch block: insert ahead of statements
        ast().node(cblock).children.insert(ast().node(cblock).children.begin(),
                                           param);
        ast().node(param).parent = cblock;
        ast().node(stmt).extra_names.push_back(pname);
      }
      ast().add_child(stmt, cblock);
    }
    if (accept("finally")) {
      NodeId fblock = parse_block();
      if (fblock != kInvalidNode) {
        ast().node(fblock).op = "finally";
        ast().add_child(stmt, fblock);
      }
    }
    ast().node(stmt).span.end = prev_end();
    return stmt;
  }

  NodeId parse_return() {
    std::size_t start = pos_;
    advance();  // return
    NodeId stmt = ast().make(NodeKind::ReturnStmt, {begin_offset(start), 0});
    if (!is(";")) {
      NodeId value = parse_expr_bounded({";"});
      if (value != kInvalidNode) ast().add_child(stmt, value);
    }
    accept(";");
    ast().node(stmt).span.end = prev_end();
    return stmt;
  }

  // ---- expressions --------------------------------------------------

  // Parses an expression that must end on one of `stops` at depth 0; on any
  // trouble the whole region is re-captured as OpaqueExpr.
  NodeId parse_expr_bounded(const std::unordered_set<std::string_view>& stops) {
    std::size_t mark = save();
    NodeId expr = parse_expr();
    if (expr != kInvalidNode && (at_end() || stops.count(cur().text))) {
      return expr;
    }
    restore(mark);
    return opaque_capture(stops, "expression");
  }

  NodeId parse_expr() { return parse_assignment(); }

  NodeId parse_assignment() {
    NodeId lhs = parse_ternary();
    if (lhs == kInvalidNode) return kInvalidNode;
    if (!at_end() && is_assign_op(cur().text)) {
      std::string op = cur().text;
      advance();
      NodeId rhs = parse_assignment();
      if (rhs == kInvalidNode) return kInvalidNode;
      NodeId n = ast().make(
          NodeKind::BinaryExpr,
          {ast().node(lhs).span.begin, ast().node(rhs).span.end});
      ast().node(n).op = op;
      ast().add_child(n, lhs);
      ast().add_child(n, rhs);
      return n;
    }
    return lhs;
  }

  NodeId parse_ternary() {
    NodeId cond = parse_binary(1);
    if (cond == kInvalidNode) return kInvalidNode;
    if (accept("?")) {
      NodeId then_val = parse_expr();
      if (then_val == kInvalidNode || !accept(":")) return kInvalidNode;
      NodeId else_val = parse_ternary();
      if (else_val == kInvalidNode) return kInvalidNode;
      NodeId n = ast().make(
          NodeKind::BinaryExpr,
          {ast().node(cond).span.begin, ast().node(else_val).span.end});
      ast().node(n).op = "?:";
      ast().add_child(n, cond);
      ast().add_child(n, then_val);
      ast().add_child(n, else_val);
      return n;
    }
    return cond;
  }

  NodeId parse_binary(int min_prec) {
    NodeId lhs = parse_unary();
    if (lhs == kInvalidNode) return kInvalidNode;
    while (!at_end()) {
      int prec = binary_precedence(cur().text);
      if (prec == 0 || prec < min_prec) break;
      std::string op = cur().text;
      advance();
      NodeId rhs;
      if (op == "instanceof") {
        std::size_t tstart = pos_;
        std::string type = try_type_ref();
        if (type.empty()) return kInvalidNode;
        rhs = ast().make(NodeKind::Name, {begin_offset(tstart), prev_end()});
        ast().node(rhs).name = type;
      } else {
        rhs = parse_binary(prec + 1);
        if (rhs == kInvalidNode) return kInvalidNode;
      }
      NodeId n = ast().make(
          NodeKind::BinaryExpr,
          {ast().node(lhs).span.begin, ast().node(rhs).span.end});
      ast().node(n).op = op;
      ast().add_child(n, lhs);
      ast().add_child(n, rhs);
      lhs = n;
    }
    return lhs;
  }

  NodeId parse_unary() {
    if (is("!") || is("~") || is("+") || is("-") || is("++") || is("--")) {
      std::size_t start = pos_;
      std::string op = cur().text;
      advance();
      NodeId operand = parse_unary();
      if (operand == kInvalidNode) return kInvalidNode;
      NodeId n = ast().make(NodeKind::UnaryExpr,
                            {begin_offset(start), ast().node(operand).span.end});
      ast().node(n).op = op;
      ast().add_child(n, operand);
      return n;
    }
    NodeId base;
    if (is("(")) {
      base = parse_cast_or_paren();
    } else {
      base = parse_primary();
    }
    if (base == kInvalidNode) return kInvalidNode;
    return parse_postfix_ops(base);
  }

  NodeId parse_cast_or_paren() {
    std::size_t mark = save();
    std::size_t open_start = begin_offset(pos_);
    advance();  // (
    std::string type = try_type_ref();
    if (!type.empty() && is(")")) {
      const Token& next = peek();
      bool operand_follows =
          next.kind == TokenKind::Identifier || next.kind == TokenKind::Literal ||
          next.text == "(" || next.text == "!" || next.text == "~" ||
          next.text == "new" || next.text == "this" || next.text == "super";
      if (operand_follows && looks_like_type(type)) {
        advance();  // )
        NodeId operand = parse_unary();
        if (operand != kInvalidNode) {
          NodeId n = ast().make(NodeKind::Cast,
                                {open_start, ast().node(operand).span.end});
          ast().node(n).declared_type = type;
          ast().add_child(n, operand);
          return n;
        }
      }
    }
    restore(mark);
    advance();  // (
    NodeId inner = parse_expr();
    if (inner == kInvalidNode || !is(")")) {
      restore(mark);
      return kInvalidNode;
    }
    std::size_t close_end = cur().span.end;
    advance();  // )
    ast().node(inner).span = ByteSpan{open_start, close_end};
    return inner;
  }

  NodeId parse_postfix_ops(NodeId base) {
    while (!at_end()) {
      if (is(".") && (peek().kind == TokenKind::Identifier ||
                      peek().text == "class" || peek().text == "this")) {
        advance();
        std::string member = cur().text;
        ByteSpan member_span = cur().span;
        advance();
        if (is("(")) {
          NodeId call = ast().make(NodeKind::MethodInvocation,
                                   {ast().node(base).span.begin, 0});
          ast().node(call).name = member;
          ast().node(call).name_span = member_span;
          ast().node(call).has_receiver = true;
          ast().add_child(call, base);
          if (!parse_arguments(call)) return kInvalidNode;
          ast().node(call).span.end = prev_end();
          base = call;
        } else {
          NodeId access = ast().make(
              NodeKind::FieldAccess, {ast().node(base).span.begin, member_span.end});
          ast().node(access).name = member;
          ast().node(access).name_span = member_span;
          ast().add_child(access, base);
          base = access;
        }
        continue;
      }
      if (is("[")) {
        advance();
        NodeId index = parse_expr();
        if (index == kInvalidNode || !accept("]")) return kInvalidNode;
        NodeId access = ast().make(NodeKind::ArrayAccess,
                                   {ast().node(base).span.begin, prev_end()});
        ast().add_child(access, base);
        ast().add_child(access, index);
        base = access;
        continue;
      }
      if (is("++") || is("--")) {
        NodeId n = ast().make(NodeKind::UnaryExpr,
                              {ast().node(base).span.begin, cur().span.end});
        ast().node(n).op = cur().text;
        ast().node(n).name = "postfix";
        advance();
        ast().add_child(n, base);
        base = n;
        continue;
      }
      break;
    }
    return base;
  }

  NodeId parse_primary() {
    if (at_end()) return kInvalidNode;
    const Token& t = cur();
    if (t.kind == TokenKind::Literal) {
      NodeId n = ast().make(NodeKind::Literal, t.span);
      ast().node(n).name = t.text;
      advance();
      return n;
    }
    if (t.kind == TokenKind::Identifier) {
      if (peek().text == "(") {
        NodeId call = ast().make(NodeKind::MethodInvocation, {t.span.begin, 0});
        ast().node(call).name = t.text;
        ast().node(call).name_span = t.span;
        advance();
        if (!parse_arguments(call)) return kInvalidNode;
        ast().node(call).span.end = prev_end();
        return call;
      }
      NodeId n = ast().make(NodeKind::Name, t.span);
      ast().node(n).name = t.text;
      advance();
      return n;
    }
    if (t.text == "this" || t.text == "super") {
      NodeId n = ast().make(NodeKind::Name, t.span);
      ast().node(n).name = t.text;
      advance();
      return n;
    }
    if (t.kind == TokenKind::Keyword && is_primitive_word(t.text)) {
      NodeId n = ast().make(NodeKind::Name, t.span);
      ast().node(n).name = t.text;
      advance();
      return n;
    }
    if (t.text == "new") return parse_creation();
    if (t.text == "{") return parse_array_initializer();
    return kInvalidNode;
  }

  NodeId parse_creation() {
    std::size_t start = pos_;
    advance();  // new
    std::string type = try_type_ref();
    if (type.empty()) return kInvalidNode;
    if (is("(")) {
      NodeId creation =
          ast().make(NodeKind::ObjectCreation, {begin_offset(start), 0});
      ast().node(creation).declared_type = type;
      ast().node(creation).name = type;
      if (!parse_arguments(creation)) return kInvalidNode;
      if (is("{")) return kInvalidNode;  // anonymous class body
      ast().node(creation).span.end = prev_end();
      return creation;
    }
    if (is("[")) {
      NodeId creation =
          ast().make(NodeKind::ObjectCreation, {begin_offset(start), 0});
      std::string dims;
      while (accept("[")) {
        dims += "[]";
        if (!is("]")) {
          NodeId len = parse_expr();
          if (len == kInvalidNode) return kInvalidNode;
          ast().add_child(creation, len);
        }
        if (!accept("]")) return kInvalidNode;
      }
      ast().node(creation).declared_type = type + dims;
      ast().node(creation).name = type;
      if (is("{")) {
        NodeId init = parse_array_initializer();
        if (init == kInvalidNode) return kInvalidNode;
        ast().add_child(creation, init);
      }
      ast().node(creation).span.end = prev_end();
      return creation;
    }
    return kInvalidNode;
  }

  // `{ e1, e2, ... }`, possibly nested; modeled as an untyped creation.
  NodeId parse_array_initializer() {
    std::size_t start = pos_;
    if (!accept("{")) return kInvalidNode;
    NodeId init = ast().make(NodeKind::ObjectCreation, {begin_offset(start), 0});
    ast().node(init).name = "{}";
    while (!at_end() && !is("}")) {
      NodeId elem =
          is("{") ? parse_array_initializer() : parse_expr_bounded({",", "}"});
      if (elem == kInvalidNode) break;
      ast().add_child(init, elem);
      if (!accept(",")) break;
    }
    if (!accept("}")) return kInvalidNode;
    ast().node(init).span.end = prev_end();
    return init;
  }

  // Parses `(...)` argument lists onto `call`; arguments that do not parse
  // cleanly fall back to opaque capture.
  bool parse_arguments(NodeId call) {
    std::size_t open_start = begin_offset(pos_);
    if (!accept("(")) return false;
    if (!is(")")) {
      while (!at_end()) {
        NodeId arg = parse_argument();
        if (arg != kInvalidNode) ast().add_child(call, arg);
        if (accept(",")) continue;
        break;
      }
    }
    if (!accept(")")) return false;
    ast().node(call).header_span = ByteSpan{open_start, prev_end()};
    return true;
  }

  NodeId parse_argument() {
    std::size_t mark = save();
    NodeId expr = parse_expr();
    if (expr != kInvalidNode && (is(",") || is(")"))) return expr;
    restore(mark);
    return opaque_capture({",", ")"}, "argument expression");
  }
};

}  // namespace

ParseResult parse(std::string source) {
  return Parser(std::move(source)).run();
}

}  // namespace a4
