#include "a4/migrator.hpp"

#include <algorithm>

#include "a4/diff.hpp"
#include "a4/parser.hpp"
#include "a4/token.hpp"

namespace a4 {

namespace {

std::string effective_type(const DfgLabel& label) {
  return label.decl_type_qualified.empty() ? label.decl_type
                                           : label.decl_type_qualified;
}

std::string example_ref(const MigrationMapping& m) {
  return m.example_id.empty() ? m.source_id : m.example_id;
}

// Identifier-wise rewrite of a normalized snippet; non-identifier tokens
// and unmapped names pass through.
std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& names) {
  std::vector<std::string> toks;
  for (const Token& t : tokenize(text)) {
    if (t.is_trivia()) continue;
    if (t.kind == TokenKind::Identifier) {
      auto it = names.find(t.text);
      toks.push_back(it != names.end() ? it->second : t.text);
    } else {
      toks.push_back(t.text);
    }
  }
  return join_tokens(toks);
}

struct Tok {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool identifier = false;
};

std::vector<Tok> significant_tokens(std::string_view text, std::size_t shift) {
  std::vector<Tok> out;
  for (const Token& t : tokenize(text)) {
    if (t.is_trivia()) continue;
    out.push_back({t.text, t.span.begin + shift, t.span.end + shift,
                   t.kind == TokenKind::Identifier});
  }
  return out;
}

// Alignment of a pattern statement's tokens onto a target statement's
// tokens; pattern identifiers are compared through the name map.
struct TokenAlignment {
  std::vector<Tok> pattern;
  std::vector<Tok> target;
  std::vector<int> pattern_to_target;  // -1 when unaligned
};

TokenAlignment align_tokens(const std::string& pattern_text,
                            std::string_view target_text,
                            std::size_t target_shift,
                            const std::map<std::string, std::string>& names) {
  TokenAlignment al;
  al.pattern = significant_tokens(pattern_text, 0);
  al.target = significant_tokens(target_text, target_shift);
  std::vector<std::string> pkeys, tkeys;
  for (const Tok& t : al.pattern) {
    if (t.identifier) {
      auto it = names.find(t.text);
      pkeys.push_back(it != names.end() ? it->second : t.text);
    } else {
      pkeys.push_back(t.text);
    }
  }
  for (const Tok& t : al.target) tkeys.push_back(t.text);
  al.pattern_to_target.assign(al.pattern.size(), -1);
  for (const SeqOp& op : lcs_align(pkeys, tkeys)) {
    if (op.tag == ' ') {
      al.pattern_to_target[op.a_index] = static_cast<int>(op.b_index);
    }
  }
  return al;
}

// Spans of the pattern's focal call relative to its statement text.
struct CallSpans {
  ByteSpan name{};
  ByteSpan header{};
  std::optional<ByteSpan> receiver;
  std::vector<ByteSpan> args;
};

CallSpans call_spans(const Ast& ast, NodeId call, std::size_t base) {
  CallSpans cs;
  auto rel = [base](ByteSpan s) {
    return ByteSpan{s.begin - base, s.end - base};
  };
  const AstNode& n = ast.node(call);
  cs.name = rel(n.name_span);
  cs.header = rel(n.header_span);
  NodeId recv = invocation_receiver(ast, call);
  if (recv != kInvalidNode) cs.receiver = rel(ast.node(recv).span);
  std::size_t argc = invocation_arg_count(ast, call);
  for (std::size_t i = 0; i < argc; ++i) {
    cs.args.push_back(rel(ast.node(invocation_arg(ast, call, i)).span));
  }
  return cs;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Applied: return "Applied";
    case Verdict::Guidance: return "Guidance";
    case Verdict::Unsupported: return "Unsupported";
  }
  return "Guidance";
}

std::vector<std::map<int, int>> enumerate_embeddings(const EmbeddingProblem& p) {
  std::vector<std::map<int, int>> results;
  std::map<int, int> assign;
  std::set<int> used;

  std::function<void(std::size_t)> descend = [&](std::size_t i) {
    if (i == p.pattern_nodes.size()) {
      results.push_back(assign);
      return;
    }
    int pn = p.pattern_nodes[i];
    for (int tn : p.target_nodes) {
      if (used.count(tn)) continue;
      if (p.compatible && !p.compatible(pn, tn)) continue;
      bool edges_ok = true;
      for (const auto& [u, v] : p.pattern_edges) {
        int mu = u == pn ? tn : (assign.count(u) ? assign.at(u) : -1);
        int mv = v == pn ? tn : (assign.count(v) ? assign.at(v) : -1);
        if (mu >= 0 && mv >= 0 && !p.target_edges.count({mu, mv})) {
          edges_ok = false;
          break;
        }
      }
      if (!edges_ok) continue;
      assign[pn] = tn;
      used.insert(tn);
      descend(i + 1);
      assign.erase(pn);
      used.erase(tn);
    }
  };
  descend(0);
  return results;
}

bool type_names_compatible(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return true;
  if (a == b) return true;
  auto simple = [](const std::string& s) {
    std::size_t dot = s.rfind('.');
    return dot == std::string::npos ? s : s.substr(dot + 1);
  };
  bool a_qualified = a.find('.') != std::string::npos;
  bool b_qualified = b.find('.') != std::string::npos;
  if (!a_qualified || !b_qualified) return simple(a) == simple(b);
  return false;
}

namespace {

std::vector<std::map<int, int>> embed_at(const MigrationMapping& pattern,
                                         const DataFlowGraph& graph,
                                         const SlicedGraph& slice, int focal) {
  EmbeddingProblem prob;
  for (const DfgNode& n : pattern.before.graph.nodes) {
    prob.pattern_nodes.push_back(n.id);
  }
  for (const DfgEdge& e : pattern.before.graph.edges) {
    prob.pattern_edges.push_back({e.def_node, e.use_node});
  }
  for (int t : slice.kept) prob.target_nodes.push_back(t);
  for (const DfgEdge& e : graph.edges) {
    if (slice.kept.count(e.def_node) && slice.kept.count(e.use_node)) {
      prob.target_edges.insert({e.def_node, e.use_node});
    }
  }
  int pattern_focal = pattern.before.focal;
  prob.compatible = [&pattern, &graph, pattern_focal, focal](int pn, int tn) {
    if (pn == pattern_focal || tn == focal) {
      return pn == pattern_focal && tn == focal;  // API match already checked
    }
    const DfgNode& p = pattern.before.graph.nodes[pn];
    const DfgNode& t = graph.nodes[tn];
    if (p.label.kind != t.label.kind) return false;
    return type_names_compatible(effective_type(p.label),
                                 effective_type(t.label));
  };
  return enumerate_embeddings(prob);
}

}  // namespace

CandidateScan find_candidates(const ParseResult& target,
                              const TypeResolver& resolver,
                              const MigrationMapping& pattern,
                              const ApiCatalog& catalog) {
  CandidateScan scan;
  const Ast& ast = target.ast;
  for (NodeId call : ast.collect(NodeKind::MethodInvocation)) {
    MatchResult m = match_invocation(catalog, ast, call, resolver);
    if (m.is_ambiguous() || m.strength == MatchStrength::None) continue;
    if (!m.matched || m.matched->key() != pattern.api_key) continue;
    NodeId method = ast.enclosing(call, NodeKind::MethodDecl);
    if (method == kInvalidNode) continue;
    DataFlowGraph graph = build_dfg(ast, method, &resolver);
    int focal = dfg_node_containing(graph, ast, call);
    if (focal < 0) continue;
    SlicedGraph slice = backward_slice(graph, focal);

    std::vector<std::map<int, int>> embeddings =
        embed_at(pattern, graph, slice, focal);
    if (embeddings.empty()) {
      MigrationOutcome g;
      g.verdict = Verdict::Guidance;
      g.reason = "UnmatchedDataflow";
      g.api_key = pattern.api_key;
      g.pattern_id = pattern.pattern_id;
      g.offset = ast.node(call).span.begin;
      g.suggested_examples = {example_ref(pattern)};
      scan.guidance.push_back(std::move(g));
      continue;
    }
    for (auto& emb : embeddings) {
      MigrationCandidate c;
      c.mapping = &pattern;
      c.call = call;
      c.method = method;
      c.focal_node = focal;
      c.graph = graph;
      c.slice = slice;
      c.embedding = std::move(emb);
      scan.candidates.push_back(std::move(c));
    }
  }
  return scan;
}

std::optional<std::string> check_supported(const MigrationCandidate& c,
                                           const Ast& ast) {
  const MigrationMapping& m = *c.mapping;
  if (m.removes_call) return "RemovesCall";

  ByteSpan call_span = ast.node(c.call).span;
  for (NodeId n = ast.node(c.call).parent; n != kInvalidNode;
       n = ast.node(n).parent) {
    const AstNode& a = ast.node(n);
    bool in_header = a.header_span.end > a.header_span.begin &&
                     call_span.begin >= a.header_span.begin &&
                     call_span.end <= a.header_span.end;
    if (!in_header) continue;
    if (a.kind == NodeKind::ForStmt || a.kind == NodeKind::WhileStmt) {
      return "LoopHeader";
    }
    if (a.kind == NodeKind::IfStmt) return "ConditionHeader";
  }

  // every edited statement must share the focal statement's try context
  auto try_chain = [&ast](NodeId stmt) {
    std::vector<std::pair<NodeId, NodeId>> chain;  // (try stmt, section)
    NodeId prev = stmt;
    for (NodeId n = ast.node(stmt).parent; n != kInvalidNode;
         n = ast.node(n).parent) {
      if (ast.node(n).kind == NodeKind::TryStmt) chain.push_back({n, prev});
      prev = n;
    }
    return chain;
  };
  NodeId focal_stmt = c.graph.nodes[c.focal_node].stmt;
  auto base_chain = try_chain(focal_stmt);
  for (const NodePairing& p : m.pairings) {
    if (p.edits.empty()) continue;
    auto it = c.embedding.find(p.before_id);
    if (it == c.embedding.end()) continue;
    if (try_chain(c.graph.nodes[it->second].stmt) != base_chain) {
      return "TryCatchSpan";
    }
  }
  return std::nullopt;
}

NameMap infer_names(const MigrationCandidate& c, const Ast& ast,
                    const TypeResolver& resolver) {
  NameMap nm;
  const MigrationMapping& m = *c.mapping;
  std::vector<VisibleDecl> visible = resolver.visible_decls(c.call);
  std::set<std::string> visible_names;
  for (const VisibleDecl& d : visible) visible_names.insert(d.name);
  std::set<std::string> images;

  auto bind = [&](const std::string& pattern_name,
                  const std::string& target_name, bool to_target) {
    if (pattern_name.empty() || nm.map.count(pattern_name)) return;
    nm.map[pattern_name] = target_name;
    images.insert(target_name);
    if (to_target) nm.bound_to_target.insert(pattern_name);
  };

  // embedded statements: defined variables correspond positionally
  for (const DfgNode& pn : m.before.graph.nodes) {
    auto it = c.embedding.find(pn.id);
    if (it == c.embedding.end()) continue;
    const DfgNode& tn = c.graph.nodes[it->second];
    auto pi = pn.defines.begin();
    auto ti = tn.defines.begin();
    while (pi != pn.defines.end() && ti != tn.defines.end()) {
      bind(*pi, *ti, true);
      ++pi;
      ++ti;
    }
  }

  // focal receiver and bare-name arguments correspond by position
  if (m.before.focal_call != kInvalidNode) {
    const Ast& past = m.before.parsed->ast;
    NodeId precv = invocation_receiver(past, m.before.focal_call);
    NodeId trecv = invocation_receiver(ast, c.call);
    if (precv != kInvalidNode && trecv != kInvalidNode &&
        past.node(precv).kind == NodeKind::Name) {
      bind(past.node(precv).name, std::string(ast.text_of(trecv)), true);
    }
    std::size_t pargc = invocation_arg_count(past, m.before.focal_call);
    std::size_t targc = invocation_arg_count(ast, c.call);
    for (std::size_t i = 0; i < pargc && i < targc; ++i) {
      NodeId pa = invocation_arg(past, m.before.focal_call, i);
      if (past.node(pa).kind != NodeKind::Name) continue;
      bind(past.node(pa).name,
           std::string(ast.text_of(invocation_arg(ast, c.call, i))), true);
    }
  }

  // typed pattern variables: nearest visible declaration of the same type
  std::map<std::string, std::string> var_types = pattern_variable_types(m);
  for (const auto& [pname, ptype] : var_types) {
    if (nm.map.count(pname) || ptype.empty()) continue;
    for (const VisibleDecl& d : visible) {
      if (images.count(d.name)) continue;
      std::string dtype = d.qualified_type.empty() ? d.type : d.qualified_type;
      if (dtype.empty()) continue;
      if (type_names_compatible(ptype, dtype)) {
        bind(pname, d.name, true);
        break;
      }
    }
  }

  // renamed definitions: the after-side name is an alias of the before-side
  // variable, not a new variable
  for (const NodePairing& pr : m.pairings) {
    if (pr.after_id < 0 ||
        pr.after_id >= static_cast<int>(m.after.graph.nodes.size())) {
      continue;
    }
    const DfgNode& bn = m.before.graph.nodes[pr.before_id];
    const DfgNode& an = m.after.graph.nodes[pr.after_id];
    auto bi = bn.defines.begin();
    auto ai = an.defines.begin();
    while (bi != bn.defines.end() && ai != an.defines.end()) {
      if (*ai != *bi && nm.map.count(*bi) && !nm.map.count(*ai)) {
        nm.map[*ai] = nm.map.at(*bi);
      }
      ++bi;
      ++ai;
    }
  }

  // everything else keeps its pattern spelling, freshened on collision
  std::vector<std::string> remaining;
  for (const NewNode& nn : m.new_nodes) remaining.push_back(nn.defines_name);
  for (const auto& [pname, ptype] : var_types) remaining.push_back(pname);
  for (const std::string& pname : remaining) {
    if (pname.empty() || nm.map.count(pname)) continue;
    std::string candidate = pname;
    int suffix = 1;
    while (visible_names.count(candidate) || images.count(candidate)) {
      candidate = pname + "_m" + std::to_string(suffix++);
    }
    nm.map[pname] = candidate;
    images.insert(candidate);
  }
  return nm;
}

namespace {

// Re-anchors one pairing's token edits onto the embedded target statement.
// Returns false when an anchor cannot be located.
bool replay_token_edits(const std::vector<TokenEdit>& pattern_edits,
                        const std::string& pattern_text,
                        const TokenAlignment& al,
                        std::size_t target_stmt_end,
                        const std::map<std::string, std::string>& names,
                        std::vector<SpanEdit>& out) {
  auto pattern_index_at = [&](std::size_t at) -> int {
    for (std::size_t i = 0; i < al.pattern.size(); ++i) {
      if (al.pattern[i].begin == at) return static_cast<int>(i);
    }
    return -1;
  };
  for (const TokenEdit& e : pattern_edits) {
    int k = pattern_index_at(e.at);
    if (e.kind == TokenEdit::Kind::InsertToken) {
      std::size_t pos;
      std::string text = substitute(e.text, names);
      if (k < 0) {
        if (e.at < pattern_text.size()) return false;
        pos = al.target.empty() ? target_stmt_end : al.target.back().end;
        out.push_back({{pos, pos}, " " + text});
        continue;
      }
      int j = -1;
      for (std::size_t i = k; i < al.pattern.size(); ++i) {
        if (al.pattern_to_target[i] >= 0) {
          j = al.pattern_to_target[i];
          break;
        }
      }
      pos = j >= 0 ? al.target[j].begin
                   : (al.target.empty() ? target_stmt_end
                                        : al.target.back().end);
      out.push_back({{pos, pos}, text + " "});
      continue;
    }
    if (k < 0 || al.pattern_to_target[k] < 0) return false;
    const Tok& t = al.target[al.pattern_to_target[k]];
    if (e.kind == TokenEdit::Kind::DeleteToken) {
      out.push_back({{t.begin, t.end}, ""});
    } else {  // Rename / ReplaceArgument at token granularity
      std::string text = substitute(e.text, names);
      if (text != t.text) out.push_back({{t.begin, t.end}, text});
    }
  }
  return true;
}

}  // namespace

MigrationOutcome apply_mapping(const MigrationCandidate& c,
                               const ParseResult& target,
                               const TypeResolver& resolver) {
  const MigrationMapping& m = *c.mapping;
  const Ast& ast = target.ast;
  const std::string& src = ast.source();

  MigrationOutcome out;
  out.api_key = m.api_key;
  out.pattern_id = m.pattern_id;
  out.offset = ast.node(c.call).span.begin;
  out.suggested_examples = {example_ref(m)};

  NameMap names = infer_names(c, ast, resolver);
  std::vector<SpanEdit> edits;
  bool anchored = true;

  // new statements: one insertion at the start of the focal line
  NodeId focal_stmt = c.graph.nodes[c.focal_node].stmt;
  std::size_t stmt_begin = ast.node(focal_stmt).span.begin;
  std::size_t line_start = 0;
  if (stmt_begin > 0) {
    std::size_t nl = src.rfind('\n', stmt_begin - 1);
    line_start = nl == std::string::npos ? 0 : nl + 1;
  }
  std::string indent;
  for (std::size_t i = line_start;
       i < src.size() && (src[i] == ' ' || src[i] == '\t'); ++i) {
    indent += src[i];
  }
  std::string inserted;
  for (const NewNode& nn : m.new_nodes) {
    if (!nn.defines_name.empty() &&
        names.bound_to_target.count(nn.defines_name)) {
      continue;  // the variable already exists in the target
    }
    inserted += indent + substitute(nn.text, names.map) + "\n";
  }
  if (!inserted.empty()) edits.push_back({{line_start, line_start}, inserted});

  CallSpans pattern_call;
  std::string pattern_focal_text;
  if (m.before.focal_call != kInvalidNode) {
    const Ast& past = m.before.parsed->ast;
    NodeId pstmt = m.before.graph.nodes[m.before.focal].stmt;
    pattern_call =
        call_spans(past, m.before.focal_call, past.node(pstmt).span.begin);
    pattern_focal_text = m.before.graph.nodes[m.before.focal].text;
  }
  CallSpans target_call = call_spans(ast, c.call, 0);

  for (const NodePairing& pr : m.pairings) {
    auto it = c.embedding.find(pr.before_id);
    if (it == c.embedding.end()) {
      anchored = false;
      break;
    }
    NodeId tstmt = c.graph.nodes[it->second].stmt;
    const std::string& ptext = m.before.graph.nodes[pr.before_id].text;
    TokenAlignment al = align_tokens(ptext, ast.text_of(tstmt),
                                     ast.node(tstmt).span.begin, names.map);

    if (pr.before_id != m.before.focal) {
      if (!replay_token_edits(pr.edits, ptext, al,
                              ast.node(tstmt).span.end, names.map, edits)) {
        anchored = false;
        break;
      }
      continue;
    }

    // focal pairing: call-structure anchors first, token anchors otherwise
    std::vector<TokenEdit> leftover;
    for (const TokenEdit& e : pr.edits) {
      bool handled = true;
      auto arg_index_at = [&](std::size_t at) -> int {
        for (std::size_t i = 0; i < pattern_call.args.size(); ++i) {
          if (pattern_call.args[i].begin == at) return static_cast<int>(i);
        }
        return -1;
      };
      int arg = arg_index_at(e.at);
      switch (e.kind) {
        case TokenEdit::Kind::Rename:
          if (pattern_call.receiver && e.at == pattern_call.receiver->begin) {
            if (!target_call.receiver) {
              handled = false;
            } else {
              std::string text = substitute(e.text, names.map);
              ByteSpan recv = *target_call.receiver;
              if (text != src.substr(recv.begin, recv.end - recv.begin)) {
                edits.push_back({recv, text});
              }
            }
          } else if (e.at == pattern_call.name.begin) {
            edits.push_back({target_call.name, e.text});  // literal API name
          } else {
            handled = false;
          }
          break;
        case TokenEdit::Kind::ReplaceArgument:
          if (arg >= 0 && arg < static_cast<int>(target_call.args.size())) {
            std::string text = substitute(e.text, names.map);
            ByteSpan s = target_call.args[arg];
            if (text != src.substr(s.begin, s.end - s.begin)) {
              edits.push_back({s, text});
            }
          } else {
            anchored = false;
          }
          break;
        case TokenEdit::Kind::DeleteToken:
          if (arg >= 0 && arg < static_cast<int>(target_call.args.size())) {
            const auto& args = target_call.args;
            ByteSpan s{};
            if (args.size() == 1) {
              s = {target_call.header.begin + 1, target_call.header.end - 1};
            } else if (arg == 0) {
              s = {args[0].begin, args[1].begin};
            } else {
              s = {args[arg - 1].end, args[arg].end};
            }
            edits.push_back({s, ""});
          } else {
            handled = false;
          }
          break;
        case TokenEdit::Kind::InsertToken:
          if (e.at == pattern_call.header.end - 1) {
            std::size_t pos = target_call.header.end - 1;
            edits.push_back({{pos, pos}, substitute(e.text, names.map)});
          } else if (arg >= 0 &&
                     arg < static_cast<int>(target_call.args.size())) {
            std::size_t pos = target_call.args[arg].begin;
            edits.push_back({{pos, pos}, substitute(e.text, names.map)});
          } else {
            handled = false;
          }
          break;
      }
      if (!anchored) break;
      if (!handled) leftover.push_back(e);
    }
    if (!anchored) break;
    if (!leftover.empty() &&
        !replay_token_edits(leftover, pattern_focal_text, al,
                            ast.node(tstmt).span.end, names.map, edits)) {
      anchored = false;
      break;
    }
  }

  if (!anchored) {
    out.verdict = Verdict::Guidance;
    out.reason = "OverlapConflict";
    return out;
  }

  std::stable_sort(edits.begin(), edits.end(),
                   [](const SpanEdit& a, const SpanEdit& b) {
                     return a.span.begin < b.span.begin;
                   });
  try {
    std::string rewritten = apply_edits(src, edits);
    out.verdict = Verdict::Applied;
    out.reason = "Matched";
    out.edits = std::move(edits);
    out.tokens_changed = token_modification_count(src, rewritten);
  } catch (const OverlappingEditsError&) {
    out.verdict = Verdict::Guidance;
    out.reason = "OverlapConflict";
  }
  return out;
}

FileMigration migrate_file(const std::string& source,
                           const std::vector<MigrationMapping>& patterns,
                           const ApiCatalog& catalog,
                           const SiteSelector& selector) {
  FileMigration fm;
  fm.original = source;
  fm.migrated = source;

  ParseResult pr = parse(source);
  TypeResolver resolver(pr.ast);
  install_invocation_typer(resolver, catalog);
  const Ast& ast = pr.ast;

  std::vector<SpanEdit> accepted;
  for (NodeId call : ast.collect(NodeKind::MethodInvocation)) {
    MatchResult mr = match_invocation(catalog, ast, call, resolver);
    if (mr.is_ambiguous()) {
      const MigrationMapping* hit = nullptr;
      for (const MigrationMapping& p : patterns) {
        for (const ApiDeclaration* e : mr.ambiguous) {
          if (e->key() == p.api_key) {
            hit = &p;
            break;
          }
        }
        if (hit) break;
      }
      if (hit) {
        MigrationOutcome g;
        g.verdict = Verdict::Guidance;
        g.reason = "AmbiguousMatch";
        g.api_key = hit->api_key;
        g.pattern_id = hit->pattern_id;
        g.offset = ast.node(call).span.begin;
        g.suggested_examples = {example_ref(*hit)};
        fm.outcomes.push_back(std::move(g));
      }
      continue;
    }
    if (mr.strength == MatchStrength::None || !mr.matched) continue;
    std::vector<const MigrationMapping*> relevant;
    for (const MigrationMapping& p : patterns) {
      if (p.api_key == mr.matched->key()) relevant.push_back(&p);
    }
    if (relevant.empty()) continue;
    NodeId method = ast.enclosing(call, NodeKind::MethodDecl);
    if (method == kInvalidNode) continue;
    DataFlowGraph graph = build_dfg(ast, method, &resolver);
    int focal = dfg_node_containing(graph, ast, call);
    if (focal < 0) continue;
    SlicedGraph slice = backward_slice(graph, focal);

    std::optional<MigrationOutcome> site;
    std::vector<SiteOption> options;  // collected only under a selector
    for (const MigrationMapping* p : relevant) {
      std::vector<std::map<int, int>> embeddings =
          embed_at(*p, graph, slice, focal);
      if (embeddings.empty()) {
        if (!site) {
          MigrationOutcome g;
          g.verdict = Verdict::Guidance;
          g.reason = "UnmatchedDataflow";
          g.api_key = p->api_key;
          g.pattern_id = p->pattern_id;
          g.offset = ast.node(call).span.begin;
          g.suggested_examples = {example_ref(*p)};
          site = std::move(g);
        }
        continue;
      }
      bool applied = false;
      for (auto& emb : embeddings) {
        MigrationCandidate cand;
        cand.mapping = p;
        cand.call = call;
        cand.method = method;
        cand.focal_node = focal;
        cand.graph = graph;
        cand.slice = slice;
        cand.embedding = std::move(emb);
        if (auto reason = check_supported(cand, ast)) {
          if (!site) {
            MigrationOutcome u;
            u.verdict = Verdict::Unsupported;
            u.reason = *reason;
            u.api_key = p->api_key;
            u.pattern_id = p->pattern_id;
            u.offset = ast.node(call).span.begin;
            u.suggested_examples = {example_ref(*p)};
            site = std::move(u);
          }
          break;  // the reason does not depend on the embedding
        }
        MigrationOutcome res = apply_mapping(cand, pr, resolver);
        if (res.verdict != Verdict::Applied) {
          if (!site) site = std::move(res);
          continue;
        }
        std::vector<SpanEdit> merged = accepted;
        merged.insert(merged.end(), res.edits.begin(), res.edits.end());
        try {
          apply_edits(source, merged);
        } catch (const OverlappingEditsError&) {
          if (!site) {
            res.verdict = Verdict::Guidance;
            res.reason = "OverlapConflict";
            res.edits.clear();
            res.tokens_changed = 0;
            site = std::move(res);
          }
          continue;
        }
        if (selector) {
          options.push_back({p, std::move(res)});
          applied = true;  // first viable embedding represents the pattern
          break;
        }
        accepted = std::move(merged);
        site = std::move(res);
        applied = true;
        break;
      }
      if (applied && !selector) break;
    }
    if (selector && !options.empty()) {
      int pick = selector(ast.node(call).span.begin, options);
      if (pick >= 0 && pick < static_cast<int>(options.size())) {
        MigrationOutcome chosen = std::move(options[pick].outcome);
        accepted.insert(accepted.end(), chosen.edits.begin(),
                        chosen.edits.end());
        fm.outcomes.push_back(std::move(chosen));
      }
      continue;
    }
    if (site) fm.outcomes.push_back(std::move(*site));
  }

  if (!accepted.empty()) fm.migrated = apply_edits(source, accepted);
  return fm;
}

MigrationSummary classify_outcome(
    const std::vector<MigrationOutcome>& outcomes) {
  MigrationSummary s;
  for (const MigrationOutcome& o : outcomes) {
    switch (o.verdict) {
      case Verdict::Applied:
        ++s.faultless;
        s.tokens_changed.push_back(o.tokens_changed);
        break;
      case Verdict::Guidance:
        ++s.unmatched_guidance;
        break;
      case Verdict::Unsupported:
        ++s.unsupported;
        break;
    }
  }
  return s;
}

}  // namespace a4
