#include "a4/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "a4/diff.hpp"
#include "a4/parser.hpp"
#include "a4/token.hpp"

namespace a4 {

namespace {

using nlohmann::json;

constexpr const char* kWrapPrefix = "class P {\nvoid p() {\n";
constexpr const char* kWrapSuffix = "\n}\n}\n";

std::set<int> slice_neighbors(const SlicedGraph& g, int node) {
  std::set<int> out;
  for (const DfgEdge& e : g.base.edges) {
    if (!g.kept.count(e.def_node) || !g.kept.count(e.use_node)) continue;
    if (e.def_node == node) out.insert(e.use_node);
    if (e.use_node == node) out.insert(e.def_node);
  }
  return out;
}

double multiset_jaccard(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {  // both sorted
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

std::string effective_type(const DfgLabel& label) {
  return label.decl_type_qualified.empty() ? label.decl_type
                                           : label.decl_type_qualified;
}

// --- token-level edit computation ---------------------------------------

struct Tok {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Tok> significant_tokens(const std::string& text) {
  std::vector<Tok> out;
  for (const Token& t : tokenize(text)) {
    if (!t.is_trivia()) out.push_back({t.text, t.span.begin, t.span.end});
  }
  return out;
}

// LCS alignment over token texts; paired changes become renames, leftover
// insertions are merged per run and anchored at the next retained token.
std::vector<TokenEdit> token_edits(const std::vector<Tok>& a,
                                   const std::vector<Tok>& b,
                                   std::size_t a_len) {
  std::vector<std::string> at, bt;
  for (const Tok& t : a) at.push_back(t.text);
  for (const Tok& t : b) bt.push_back(t.text);
  std::vector<SeqOp> ops = lcs_align(at, bt);

  std::vector<TokenEdit> edits;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].tag == ' ') {
      ++k;
      continue;
    }
    std::vector<std::size_t> dels, ins;
    while (k < ops.size() && ops[k].tag != ' ') {
      if (ops[k].tag == '-') dels.push_back(ops[k].a_index);
      if (ops[k].tag == '+') ins.push_back(ops[k].b_index);
      ++k;
    }
    std::size_t paired = std::min(dels.size(), ins.size());
    for (std::size_t i = 0; i < paired; ++i) {
      edits.push_back(
          {TokenEdit::Kind::Rename, a[dels[i]].begin, b[ins[i]].text});
    }
    for (std::size_t i = paired; i < dels.size(); ++i) {
      edits.push_back(
          {TokenEdit::Kind::DeleteToken, a[dels[i]].begin, a[dels[i]].text});
    }
    if (ins.size() > paired) {
      std::vector<std::string> texts;
      for (std::size_t i = paired; i < ins.size(); ++i) {
        texts.push_back(b[ins[i]].text);
      }
      // anchor: the next before-side token after this run, else text end
      std::size_t anchor = a_len;
      if (k < ops.size() && ops[k].a_index != SeqOp::npos) {
        anchor = a[ops[k].a_index].begin;
      }
      edits.push_back(
          {TokenEdit::Kind::InsertToken, anchor, join_tokens(texts)});
    }
  }
  return edits;
}

std::vector<TokenEdit> token_edits_for_texts(const std::string& before,
                                             const std::string& after) {
  if (before == after) return {};
  return token_edits(significant_tokens(before), significant_tokens(after),
                     before.size());
}

// --- focal-call shape ----------------------------------------------------

struct CallShape {
  std::shared_ptr<ParseResult> parsed;  // owns the spans below
  ByteSpan name{};
  ByteSpan call{};    // receiver (if any) through closing parenthesis
  ByteSpan header{};  // parenthesized argument region
  std::optional<ByteSpan> receiver;
  std::vector<ByteSpan> args;
  std::vector<std::string> arg_texts;
};

// Re-parses a normalized statement and locates the named invocation; all
// spans are relative to the statement text.
std::optional<CallShape> call_shape(const std::string& stmt_text,
                                    const std::string& name,
                                    std::size_t argc) {
  CallShape shape;
  std::size_t base = std::string(kWrapPrefix).size();
  shape.parsed = std::make_shared<ParseResult>(
      parse(kWrapPrefix + stmt_text + kWrapSuffix));
  const Ast& ast = shape.parsed->ast;

  NodeId call = kInvalidNode;
  ast.walk([&](NodeId id, const AstNode& n) {
    if (call != kInvalidNode) return;
    if (n.kind == NodeKind::MethodInvocation && n.name == name &&
        invocation_arg_count(ast, id) == argc) {
      call = id;
    }
  });
  if (call == kInvalidNode) return std::nullopt;

  auto rel = [base](ByteSpan s) { return ByteSpan{s.begin - base, s.end - base}; };
  const AstNode& cn = ast.node(call);
  shape.name = rel(cn.name_span);
  shape.header = rel(cn.header_span);
  std::size_t call_begin = cn.name_span.begin;
  NodeId recv = invocation_receiver(ast, call);
  if (recv != kInvalidNode) {
    shape.receiver = rel(ast.node(recv).span);
    call_begin = ast.node(recv).span.begin;
  }
  shape.call = ByteSpan{call_begin - base, cn.header_span.end - base};
  for (std::size_t i = 0; i < argc; ++i) {
    NodeId arg = invocation_arg(ast, call, i);
    shape.args.push_back(rel(ast.node(arg).span));
    shape.arg_texts.push_back(std::string(ast.text_of(arg)));
  }
  return shape;
}

std::string span_text(const std::string& text, ByteSpan s) {
  return text.substr(s.begin, s.end - s.begin);
}

// Edits turning the before focal statement into the after one: receiver and
// name renames, argument alignment by common prefix/suffix, and token edits
// for any change outside the call itself.
std::vector<TokenEdit> focal_edits(const std::string& before_text,
                                   const CallShape& b,
                                   const std::string& after_text,
                                   const CallShape& a) {
  std::vector<TokenEdit> edits;

  if (b.receiver && a.receiver) {
    std::string br = span_text(before_text, *b.receiver);
    std::string ar = span_text(after_text, *a.receiver);
    if (br != ar) {
      edits.push_back({TokenEdit::Kind::Rename, b.receiver->begin, ar});
    }
  }
  std::string bn = span_text(before_text, b.name);
  std::string an = span_text(after_text, a.name);
  if (bn != an) {
    edits.push_back({TokenEdit::Kind::Rename, b.name.begin, an});
  }

  std::size_t n = b.args.size(), m = a.args.size();
  std::size_t prefix = 0;
  while (prefix < n && prefix < m && b.arg_texts[prefix] == a.arg_texts[prefix]) {
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix &&
         b.arg_texts[n - 1 - suffix] == a.arg_texts[m - 1 - suffix]) {
    ++suffix;
  }
  std::size_t bi = prefix, ai = prefix;
  std::size_t bend = n - suffix, aend = m - suffix;
  while (bi < bend && ai < aend) {
    if (b.arg_texts[bi] != a.arg_texts[ai]) {
      edits.push_back({TokenEdit::Kind::ReplaceArgument, b.args[bi].begin,
                       a.arg_texts[ai]});
    }
    ++bi;
    ++ai;
  }
  for (; bi < bend; ++bi) {
    edits.push_back(
        {TokenEdit::Kind::DeleteToken, b.args[bi].begin, b.arg_texts[bi]});
  }
  if (ai < aend) {
    std::vector<std::string> inserted(a.arg_texts.begin() + ai,
                                      a.arg_texts.begin() + aend);
    std::string joined;
    for (std::size_t i = 0; i < inserted.size(); ++i) {
      if (i) joined += ", ";
      joined += inserted[i];
    }
    if (bend < n) {
      // interior insertion: before the first common-suffix argument
      edits.push_back(
          {TokenEdit::Kind::InsertToken, b.args[bend].begin, joined + ", "});
    } else if (n == 0) {
      edits.push_back(
          {TokenEdit::Kind::InsertToken, b.header.end - 1, joined});
    } else {
      edits.push_back(
          {TokenEdit::Kind::InsertToken, b.header.end - 1, ", " + joined});
    }
  }

  // changes outside the call region, aligned with a placeholder standing in
  // for the call so insertions land on the correct side
  auto outside = [](const std::string& text,
                    ByteSpan call) -> std::vector<Tok> {
    std::vector<Tok> out;
    bool placed = false;
    for (const Token& t : tokenize(text)) {
      if (t.is_trivia()) continue;
      if (t.span.begin >= call.begin && t.span.end <= call.end) {
        if (!placed) {
          out.push_back({"\x01" "call" "\x01", call.begin, call.end});
          placed = true;
        }
        continue;
      }
      out.push_back({t.text, t.span.begin, t.span.end});
    }
    return out;
  };
  std::vector<TokenEdit> rest = token_edits(outside(before_text, b.call),
                                            outside(after_text, a.call),
                                            before_text.size());
  edits.insert(edits.end(), rest.begin(), rest.end());

  std::stable_sort(edits.begin(), edits.end(),
                   [](const TokenEdit& x, const TokenEdit& y) {
                     return x.at < y.at;
                   });
  return edits;
}

// --- pattern graph construction ------------------------------------------

PatternGraph build_pattern_graph(const std::string& snippet) {
  PatternGraph pg;
  pg.parsed = std::make_shared<ParseResult>(
      parse(kWrapPrefix + snippet + kWrapSuffix));
  const Ast& ast = pg.parsed->ast;
  std::vector<NodeId> methods = ast.collect(NodeKind::MethodDecl);
  if (methods.empty()) {
    throw MalformedPatternStoreError("snippet did not parse as statements");
  }
  TypeResolver resolver(ast);
  pg.graph = build_dfg(ast, methods.front(), &resolver);
  return pg;
}

void mark_focal(PatternGraph& pg, int focal) {
  pg.focal = focal;
  for (DfgNode& n : pg.graph.nodes) {
    n.is_focal = n.id == focal;
    n.position_sign = n.id < focal ? -1 : (n.id == focal ? 0 : 1);
  }
}

// First invocation (textual order) matching name+argc whose statement is a
// graph node; fills focal/focal_call.
bool locate_call(PatternGraph& pg, const std::string& name, std::size_t argc) {
  const Ast& ast = pg.parsed->ast;
  std::vector<NodeId> calls = ast.collect(NodeKind::MethodInvocation);
  for (NodeId c : calls) {
    if (ast.node(c).name != name) continue;
    if (invocation_arg_count(ast, c) != argc) continue;
    int node = dfg_node_containing(pg.graph, ast, c);
    if (node < 0) continue;
    pg.focal_call = c;
    mark_focal(pg, node);
    return true;
  }
  return false;
}

// The migrated call inside a known after-pattern node: prefer the declared
// replacement, then the original name, then any invocation in the node.
void locate_after_call(PatternGraph& pg, int node, const ApiDeclaration* api) {
  const Ast& ast = pg.parsed->ast;
  std::vector<NodeId> calls = ast.collect(NodeKind::MethodInvocation);
  std::vector<NodeId> in_node;
  for (NodeId c : calls) {
    if (dfg_node_containing(pg.graph, ast, c) == node) in_node.push_back(c);
  }
  mark_focal(pg, node);
  pg.focal_call = kInvalidNode;
  if (in_node.empty()) return;
  if (api && api->replacement) {
    for (NodeId c : in_node) {
      if (ast.node(c).name == api->replacement->method &&
          invocation_arg_count(ast, c) == api->replacement->param_types.size()) {
        pg.focal_call = c;
        return;
      }
    }
    for (NodeId c : in_node) {
      if (ast.node(c).name == api->replacement->method) {
        pg.focal_call = c;
        return;
      }
    }
  }
  if (api) {
    for (NodeId c : in_node) {
      if (ast.node(c).name == api->method) {
        pg.focal_call = c;
        return;
      }
    }
  }
  pg.focal_call = in_node.front();
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += "\n";
    out += lines[i];
  }
  return out;
}

}  // namespace

PrunedSlices prune_identical(const MigrationExample& example) {
  const SlicedGraph& b = example.before_slice;
  const SlicedGraph& a = *example.after_slice;

  PrunedSlices out;
  std::set<int> used_after;
  for (int bi : b.kept) {
    for (int ai : a.kept) {
      if (used_after.count(ai)) continue;
      if (b.base.nodes[bi].text == a.base.nodes[ai].text) {
        out.identity[bi] = ai;
        used_after.insert(ai);
        break;
      }
    }
  }
  std::set<int> image;
  for (const auto& [bi, ai] : out.identity) image.insert(ai);

  std::set<int> pruned_before, pruned_after;
  for (const auto& [bi, ai] : out.identity) {
    if (bi == b.focal || ai == a.focal) continue;
    bool surrounded = true;
    for (int nb : slice_neighbors(b, bi)) {
      if (!out.identity.count(nb)) surrounded = false;
    }
    for (int na : slice_neighbors(a, ai)) {
      if (!image.count(na)) surrounded = false;
    }
    if (surrounded) {
      pruned_before.insert(bi);
      pruned_after.insert(ai);
    }
  }
  for (int bi : b.kept) {
    if (!pruned_before.count(bi)) out.before_kept.push_back(bi);
  }
  for (int ai : a.kept) {
    if (!pruned_after.count(ai)) out.after_kept.push_back(ai);
  }
  return out;
}

double node_similarity(const DfgNode& a, const DfgNode& b) {
  double score = 0.0;
  if (a.label.kind == b.label.kind) score += 0.4;
  score += 0.3 * multiset_jaccard(a.ident_tokens, b.ident_tokens);
  if (effective_type(a.label) == effective_type(b.label)) score += 0.2;
  if (a.position_sign == b.position_sign) score += 0.1;
  return score;
}

MigrationMapping learn_mapping(const MigrationExample& example,
                               double threshold) {
  if (example.call_removed()) {
    const SlicedGraph& b = example.before_slice;
    if (b.kept.empty()) throw EmptyPatternError(example.id);
    std::vector<std::string> lines;
    for (int bi : b.kept) lines.push_back(b.base.nodes[bi].text);
    MigrationMapping m =
        materialize_pattern(example.api_key, example.api, example.source_id,
                            join_lines(lines), "", {}, {}, true);
    m.example_id = example.id;
    return m;
  }

  PrunedSlices pruned = prune_identical(example);
  if (pruned.before_kept.empty() || pruned.after_kept.empty()) {
    throw EmptyPatternError(example.id);
  }
  const SlicedGraph& bs = example.before_slice;
  const SlicedGraph& as = *example.after_slice;

  std::map<int, int> bidx, aidx;  // slice node id -> snippet index
  for (std::size_t i = 0; i < pruned.before_kept.size(); ++i) {
    bidx[pruned.before_kept[i]] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < pruned.after_kept.size(); ++i) {
    aidx[pruned.after_kept[i]] = static_cast<int>(i);
  }

  // forced focal pairing, then greedy best-first above the threshold
  struct Cand {
    double sim;
    int b, a;
  };
  std::vector<Cand> cands;
  for (int b : pruned.before_kept) {
    if (b == bs.focal) continue;
    for (int a : pruned.after_kept) {
      if (a == as.focal) continue;
      double s = node_similarity(bs.base.nodes[b], as.base.nodes[a]);
      if (s >= threshold) cands.push_back({s, b, a});
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& x, const Cand& y) { return x.sim > y.sim; });
  std::vector<std::pair<int, int>> pairs{{bs.focal, as.focal}};
  std::set<int> bused{bs.focal}, aused{as.focal};
  for (const Cand& c : cands) {
    if (bused.count(c.b) || aused.count(c.a)) continue;
    pairs.push_back({c.b, c.a});
    bused.insert(c.b);
    aused.insert(c.a);
  }
  std::sort(pairs.begin(), pairs.end());

  std::string before_name = example.before_parsed->ast.node(example.before_focal).name;
  std::size_t before_argc =
      invocation_arg_count(example.before_parsed->ast, example.before_focal);
  std::string after_name = example.after_parsed->ast.node(example.after_focal).name;
  std::size_t after_argc =
      invocation_arg_count(example.after_parsed->ast, example.after_focal);

  std::vector<NodePairing> pairings;
  for (const auto& [b, a] : pairs) {
    NodePairing p;
    p.before_id = bidx.at(b);
    p.after_id = aidx.at(a);
    const std::string& btext = bs.base.nodes[b].text;
    const std::string& atext = as.base.nodes[a].text;
    if (b == bs.focal) {
      auto bshape = call_shape(btext, before_name, before_argc);
      auto ashape = call_shape(atext, after_name, after_argc);
      if (bshape && ashape) {
        p.edits = focal_edits(btext, *bshape, atext, *ashape);
      } else {
        p.edits = token_edits_for_texts(btext, atext);
      }
    } else {
      p.edits = token_edits_for_texts(btext, atext);
    }
    pairings.push_back(std::move(p));
  }

  std::vector<NewNode> new_nodes;
  for (int a : pruned.after_kept) {
    if (aused.count(a)) continue;
    const DfgNode& an = as.base.nodes[a];
    NewNode nn;
    nn.after_id = aidx.at(a);
    nn.text = an.text;
    if (!an.defines.empty()) nn.defines_name = *an.defines.begin();
    nn.defines_type = effective_type(an.label);
    new_nodes.push_back(std::move(nn));
  }
  std::sort(new_nodes.begin(), new_nodes.end(),
            [](const NewNode& x, const NewNode& y) {
              return x.after_id < y.after_id;
            });

  std::vector<std::string> before_lines, after_lines;
  for (int b : pruned.before_kept) before_lines.push_back(bs.base.nodes[b].text);
  for (int a : pruned.after_kept) after_lines.push_back(as.base.nodes[a].text);

  MigrationMapping m = materialize_pattern(
      example.api_key, example.api, example.source_id, join_lines(before_lines),
      join_lines(after_lines), std::move(pairings), std::move(new_nodes), false);
  m.example_id = example.id;
  return m;
}

std::vector<MigrationMapping> learn_patterns(
    const std::vector<MigrationExample>& examples, double threshold,
    MinerLog* log) {
  std::vector<MigrationMapping> out;
  for (const MigrationExample& ex : examples) {
    try {
      out.push_back(learn_mapping(ex, threshold));
    } catch (const EmptyPatternError&) {
      if (log) log->push_back({ex.source_id, ex.file_path, 0, "EmptyPattern"});
    }
  }
  return out;
}

MigrationMapping materialize_pattern(const std::string& api_key,
                                     const ApiDeclaration* api,
                                     const std::string& source_id,
                                     const std::string& before_snippet,
                                     const std::string& after_snippet,
                                     std::vector<NodePairing> pairings,
                                     std::vector<NewNode> new_nodes,
                                     bool removes_call) {
  MigrationMapping m;
  m.api_key = api_key;
  m.api = api;
  m.source_id = source_id;
  m.before_snippet = before_snippet;
  m.after_snippet = after_snippet;
  m.pairings = std::move(pairings);
  m.new_nodes = std::move(new_nodes);
  m.removes_call = removes_call;

  m.before = build_pattern_graph(before_snippet);
  m.after = build_pattern_graph(after_snippet);

  int before_count = static_cast<int>(m.before.graph.nodes.size());
  int after_count = static_cast<int>(m.after.graph.nodes.size());
  if (before_count == 0) {
    throw MalformedPatternStoreError("empty before snippet");
  }
  for (const NodePairing& p : m.pairings) {
    if (p.before_id < 0 || p.before_id >= before_count || p.after_id < 0 ||
        p.after_id >= after_count) {
      throw MalformedPatternStoreError("pairing index out of range");
    }
  }
  for (const NewNode& nn : m.new_nodes) {
    if (nn.after_id < 0 || nn.after_id >= after_count) {
      throw MalformedPatternStoreError("new-node index out of range");
    }
  }

  if (!api || !locate_call(m.before, api->method, api->param_types.size())) {
    throw MalformedPatternStoreError(
        "before snippet does not contain the api call " + api_key);
  }

  if (removes_call) {
    m.after.focal = -1;
  } else {
    const NodePairing* focal_pairing = nullptr;
    for (const NodePairing& p : m.pairings) {
      if (p.before_id == m.before.focal) focal_pairing = &p;
    }
    if (!focal_pairing) {
      throw MalformedPatternStoreError("focal statement is unpaired");
    }
    locate_after_call(m.after, focal_pairing->after_id, api);
  }

  for (NodePairing& p : m.pairings) {
    p.similarity = node_similarity(m.before.graph.nodes[p.before_id],
                                   m.after.graph.nodes[p.after_id]);
  }
  return m;
}

namespace {

const char* edit_kind_name(TokenEdit::Kind k) {
  switch (k) {
    case TokenEdit::Kind::Rename: return "rename";
    case TokenEdit::Kind::InsertToken: return "insert-token";
    case TokenEdit::Kind::DeleteToken: return "delete-token";
    case TokenEdit::Kind::ReplaceArgument: return "replace-argument";
  }
  return "rename";
}

TokenEdit::Kind edit_kind_from(const std::string& name) {
  if (name == "rename") return TokenEdit::Kind::Rename;
  if (name == "insert-token") return TokenEdit::Kind::InsertToken;
  if (name == "delete-token") return TokenEdit::Kind::DeleteToken;
  if (name == "replace-argument") return TokenEdit::Kind::ReplaceArgument;
  throw MalformedPatternStoreError("unknown edit kind: " + name);
}

}  // namespace

std::string serialize_patterns(const std::vector<MigrationMapping>& patterns) {
  json root = json::array();
  for (const MigrationMapping& m : patterns) {
    json jp;
    jp["api"] = m.api_key;
    jp["sourceId"] = m.source_id;
    jp["beforeSnippet"] = m.before_snippet;
    jp["afterSnippet"] = m.after_snippet;
    jp["removesCall"] = m.removes_call;
    jp["pairings"] = json::array();
    for (const NodePairing& p : m.pairings) {
      json jpair;
      jpair["beforeIdx"] = p.before_id;
      jpair["afterIdx"] = p.after_id;
      jpair["edits"] = json::array();
      for (const TokenEdit& e : p.edits) {
        jpair["edits"].push_back({{"kind", edit_kind_name(e.kind)},
                                  {"at", e.at},
                                  {"text", e.text}});
      }
      jp["pairings"].push_back(std::move(jpair));
    }
    jp["newNodes"] = json::array();
    for (const NewNode& nn : m.new_nodes) {
      json jn;
      jn["afterIdx"] = nn.after_id;
      jn["text"] = nn.text;
      if (nn.defines_name.empty()) {
        jn["defines"] = nullptr;
      } else {
        jn["defines"] = {{"name", nn.defines_name}, {"type", nn.defines_type}};
      }
      jp["newNodes"].push_back(std::move(jn));
    }
    root.push_back(std::move(jp));
  }
  return root.dump(2) + "\n";
}

std::vector<MigrationMapping> parse_patterns_json(const std::string& text,
                                                  const ApiCatalog& catalog) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedPatternStoreError(e.what());
  }
  if (!root.is_array()) {
    throw MalformedPatternStoreError("top-level value must be an array");
  }

  std::vector<MigrationMapping> out;
  for (std::size_t idx = 0; idx < root.size(); ++idx) {
    const json& jp = root[idx];
    if (!jp.is_object()) {
      throw MalformedPatternStoreError("pattern entry must be an object");
    }
    auto require = [&](const char* key, json::value_t type) -> const json& {
      auto it = jp.find(key);
      if (it == jp.end() || it->type() != type) {
        throw MalformedPatternStoreError(std::string("missing or mistyped ") +
                                         key);
      }
      return *it;
    };
    std::string api_key = require("api", json::value_t::string);
    const ApiDeclaration* api = catalog.find_by_key(api_key);
    if (!api) {
      throw MalformedPatternStoreError("api not in catalog: " + api_key);
    }
    std::string source_id = require("sourceId", json::value_t::string);
    std::string before_snippet = require("beforeSnippet", json::value_t::string);
    std::string after_snippet = require("afterSnippet", json::value_t::string);
    bool removes_call = require("removesCall", json::value_t::boolean);

    std::vector<NodePairing> pairings;
    for (const json& jpair : require("pairings", json::value_t::array)) {
      if (!jpair.is_object() || !jpair.contains("beforeIdx") ||
          !jpair.contains("afterIdx") || !jpair.contains("edits") ||
          !jpair["edits"].is_array()) {
        throw MalformedPatternStoreError("malformed pairing entry");
      }
      NodePairing p;
      p.before_id = jpair["beforeIdx"].get<int>();
      p.after_id = jpair["afterIdx"].get<int>();
      for (const json& je : jpair["edits"]) {
        if (!je.is_object() || !je.contains("kind") || !je.contains("at") ||
            !je.contains("text")) {
          throw MalformedPatternStoreError("malformed edit entry");
        }
        p.edits.push_back({edit_kind_from(je["kind"].get<std::string>()),
                           je["at"].get<std::size_t>(),
                           je["text"].get<std::string>()});
      }
      pairings.push_back(std::move(p));
    }

    std::vector<NewNode> new_nodes;
    for (const json& jn : require("newNodes", json::value_t::array)) {
      if (!jn.is_object() || !jn.contains("afterIdx") || !jn.contains("text")) {
        throw MalformedPatternStoreError("malformed newNodes entry");
      }
      NewNode nn;
      nn.after_id = jn["afterIdx"].get<int>();
      nn.text = jn["text"].get<std::string>();
      if (jn.contains("defines") && jn["defines"].is_object()) {
        nn.defines_name = jn["defines"].value("name", "");
        nn.defines_type = jn["defines"].value("type", "");
      }
      new_nodes.push_back(std::move(nn));
    }

    MigrationMapping m =
        materialize_pattern(api_key, api, source_id, before_snippet,
                            after_snippet, std::move(pairings),
                            std::move(new_nodes), removes_call);
    m.pattern_id = source_id + "#" + std::to_string(idx);
    out.push_back(std::move(m));
  }
  return out;
}

void save_patterns(const std::string& path,
                   const std::vector<MigrationMapping>& patterns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write pattern store: " + path);
  }
  out << serialize_patterns(patterns);
  if (!out) {
    throw std::runtime_error("cannot write pattern store: " + path);
  }
}

std::vector<MigrationMapping> load_patterns(const std::string& path,
                                            const ApiCatalog& catalog) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MalformedPatternStoreError("cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_patterns_json(buf.str(), catalog);
}

std::map<std::string, std::string> pattern_variable_types(
    const MigrationMapping& mapping) {
  std::map<std::string, std::string> types;
  for (const DfgNode& n : mapping.before.graph.nodes) {
    std::string t = effective_type(n.label);
    if (t.empty()) continue;
    for (const std::string& name : n.defines) types.emplace(name, t);
  }
  if (mapping.api && mapping.before.focal_call != kInvalidNode) {
    const Ast& ast = mapping.before.parsed->ast;
    NodeId call = mapping.before.focal_call;
    NodeId recv = invocation_receiver(ast, call);
    if (recv != kInvalidNode && ast.node(recv).kind == NodeKind::Name) {
      types[ast.node(recv).name] = mapping.api->owner;
    }
    std::size_t argc = invocation_arg_count(ast, call);
    for (std::size_t i = 0;
         i < argc && i < mapping.api->param_types.size(); ++i) {
      NodeId arg = invocation_arg(ast, call, i);
      if (ast.node(arg).kind == NodeKind::Name) {
        types.emplace(ast.node(arg).name, mapping.api->param_types[i]);
      }
    }
  }
  for (const NewNode& nn : mapping.new_nodes) {
    if (!nn.defines_name.empty() && !nn.defines_type.empty()) {
      types[nn.defines_name] = nn.defines_type;
    }
  }
  return types;
}

}  // namespace a4
