#include "mpses/parser.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace mpses {

namespace {

struct Token {
  enum class Kind { Ident, Zero, Symbol, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '0') {
      t.kind = Token::Kind::Zero;
      t.text = "0";
      advance(1);
    } else if (src.substr(i, 2) == "->" || src.substr(i, 2) == "::") {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(src.substr(i, 2));
      advance(2);
    } else if (std::string_view("={},!?;:.|+&()").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw Error(ErrorCode::Parse, std::to_string(line) + ":" + std::to_string(col) +
                                        ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back(std::move(t));
  }
  Token eof;
  eof.line = line;
  eof.column = col;
  out.push_back(eof);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Program program() {
    Program prog;
    while (!at_eof()) {
      const Token& kw = expect_ident("definition keyword");
      std::string name = expect_ident("definition name").text;
      expect("=");
      if (kw.text == "process") {
        if (!prog.processes.emplace(name, proc()).second) duplicate(name, kw);
      } else if (kw.text == "global") {
        if (!prog.globals.emplace(name, glob()).second) duplicate(name, kw);
      } else if (kw.text == "network") {
        if (!prog.networks.emplace(name, net()).second) duplicate(name, kw);
      } else {
        fail(kw, "expected 'process', 'global' or 'network', found '" + kw.text + "'");
      }
      prog.order.emplace_back(kw.text, name);
      accept(";");
    }
    return prog;
  }

  ProcExpr proc() {
    const Token& t = peek();
    ProcExpr e;
    e.line = t.line;
    if (t.kind == Token::Kind::Zero) {
      next();
      return e;
    }
    if (accept("(")) {
      e = proc();
      expect(")");
      return e;
    }
    if (is_symbol("+") || is_symbol("&")) {
      bool out = next().text == "+";
      expect("{");
      e.kind = out ? ProcExpr::Kind::Output : ProcExpr::Kind::Input;
      do {
        e.branches.push_back(proc_branch(out));
      } while (accept(","));
      expect("}");
      return e;
    }
    if (t.kind != Token::Kind::Ident) fail(t, "expected a process, found '" + t.text + "'");
    if (is_symbol("!", 1) || is_symbol("?", 1)) {
      bool out = peek(1).text == "!";
      e.kind = out ? ProcExpr::Kind::Output : ProcExpr::Kind::Input;
      e.branches.push_back(proc_branch(out));
      return e;
    }
    e.kind = ProcExpr::Kind::Ref;
    e.name = next().text;
    return e;
  }

  GlobalExpr glob() {
    const Token& t = peek();
    GlobalExpr e;
    e.line = t.line;
    if (accept("(")) {
      e = glob();
      expect(")");
      return e;
    }
    if (t.kind != Token::Kind::Ident) fail(t, "expected a global type, found '" + t.text + "'");
    if (!is_symbol("->", 1)) {
      std::string name = next().text;
      if (name != "end") {
        e.kind = GlobalExpr::Kind::Ref;
        e.name = name;
      }
      return e;
    }
    e.kind = GlobalExpr::Kind::Comm;
    e.sender = Participant{next().text};
    expect("->");
    e.receiver = Participant{expect_ident("receiver").text};
    expect(":");
    if (accept("{")) {
      do {
        GlobalBranch b;
        b.message = Message{expect_ident("message").text};
        expect(".");
        b.body = glob();
        e.branches.push_back(std::move(b));
      } while (accept(","));
      expect("}");
    } else {
      GlobalBranch b;
      b.message = Message{expect_ident("message").text};
      if (accept(";")) b.body = glob();
      e.branches.push_back(std::move(b));
    }
    return e;
  }

  NetExpr net() {
    NetExpr n;
    n.line = peek().line;
    if (peek().kind == Token::Kind::Zero) {
      next();
      return n;
    }
    do {
      Participant p{expect_ident("participant").text};
      expect("::");
      n.bindings.emplace_back(p, proc());
    } while (accept("|"));
    return n;
  }

  Communication communication() {
    Communication c;
    c.sender = Participant{expect_ident("sender").text};
    expect("->");
    c.receiver = Participant{expect_ident("receiver").text};
    expect(":");
    c.message = Message{expect_ident("message").text};
    return c;
  }

  Trace trace() {
    Trace t;
    if (at_eof()) return t;
    do {
      t.push_back(communication());
    } while (accept(","));
    return t;
  }

  std::vector<Action> actions() {
    std::vector<Action> out;
    do {
      Action a;
      a.peer = Participant{expect_ident("participant").text};
      if (accept("!")) {
        a.direction = Direction::Output;
      } else {
        expect("?");
        a.direction = Direction::Input;
      }
      a.message = Message{expect_ident("message").text};
      out.push_back(std::move(a));
    } while (accept("."));
    return out;
  }

  void finish() {
    if (!at_eof()) fail(peek(), "unexpected trailing input '" + peek().text + "'");
  }

 private:
  ProcBranch proc_branch(bool out) {
    ProcBranch b;
    b.peer = Participant{expect_ident("participant").text};
    expect(out ? "!" : "?");
    b.message = Message{expect_ident("message").text};
    if (accept(";")) b.body = proc();
    return b;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_eof() const { return peek().kind == Token::Kind::Eof; }
  bool is_symbol(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Symbol && peek(ahead).text == s;
  }
  bool accept(const char* s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(peek(), std::string("expected '") + s + "', found '" + describe(peek()) + "'");
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Token::Kind::Ident)
      fail(peek(), std::string("expected ") + what + ", found '" + describe(peek()) + "'");
    return next();
  }
  static std::string describe(const Token& t) { return t.kind == Token::Kind::Eof ? "end of input" : t.text; }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw Error(ErrorCode::Parse, std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + msg);
  }
  [[noreturn]] static void duplicate(const std::string& name, const Token& t) {
    throw Error(ErrorCode::DuplicateDefinition,
                std::to_string(t.line) + ": duplicate " + t.text + " definition " + name);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Follows definitions whose body is just another name until a constructor
// is found. A cycle of such aliases has no productive unfolding.
template <class Eqs, class Expr>
const std::string& resolve_alias(const Eqs& eqs, const std::string& name) {
  std::set<std::string> seen;
  const std::string* cur = &name;
  for (;;) {
    auto it = eqs.find(*cur);
    if (it == eqs.end()) throw Error(ErrorCode::UndefinedName, "undefined name " + *cur);
    if (it->second.kind != Expr::Kind::Ref) return it->first;
    if (!seen.insert(*cur).second)
      throw Error(ErrorCode::NonContractive, "definition " + name + " is not guarded by a communication");
    cur = &it->second.name;
  }
}

class ProcessAssembler {
 public:
  explicit ProcessAssembler(const ProcEquations& eqs) : eqs_(eqs) {}

  NodeId build(const ProcExpr& e) {
    switch (e.kind) {
      case ProcExpr::Kind::Inact: return inact_node();
      case ProcExpr::Kind::Ref: return definition(e.name);
      default: {
        NodeId id = g_.add({});
        fill(id, e);
        return id;
      }
    }
  }

  Process finish(NodeId root) && { return std::move(g_).finish(root); }

 private:
  NodeId inact_node() {
    if (!inact_) inact_ = g_.add({});
    return *inact_;
  }

  NodeId definition(const std::string& name) {
    const std::string& target = resolve_alias<ProcEquations, ProcExpr>(eqs_, name);
    if (auto it = nodes_.find(target); it != nodes_.end()) return it->second;
    const ProcExpr& body = eqs_.at(target);
    if (body.kind == ProcExpr::Kind::Inact) return nodes_[target] = inact_node();
    NodeId id = g_.add({});
    nodes_[target] = id;
    fill(id, body);
    return id;
  }

  void fill(NodeId id, const ProcExpr& e) {
    if (e.branches.empty()) throw Error(ErrorCode::EmptyChoice, "empty choice at line " + std::to_string(e.line));
    const Participant& peer = e.branches.front().peer;
    g_[id].kind = e.kind == ProcExpr::Kind::Output ? ProcKind::Output : ProcKind::Input;
    g_[id].peer = peer;
    for (const ProcBranch& b : e.branches) {
      if (b.peer != peer)
        throw Error(ErrorCode::MixedChoicePeers, "choice mixes peers " + peer.name + " and " + b.peer.name);
      if (g_[id].branches.count(b.message))
        throw Error(ErrorCode::DuplicateBranchLabel, "duplicate branch label " + b.message.label);
      NodeId child = build(b.body);
      g_[id].branches.emplace(b.message, child);
    }
  }

  const ProcEquations& eqs_;
  GraphBuilder<ProcNode> g_;
  std::map<std::string, NodeId> nodes_;
  std::optional<NodeId> inact_;
};

class GlobalAssembler {
 public:
  explicit GlobalAssembler(const GlobalEquations& eqs) : eqs_(eqs) {}

  NodeId build(const GlobalExpr& e) {
    switch (e.kind) {
      case GlobalExpr::Kind::End: return end_node();
      case GlobalExpr::Kind::Ref: return definition(e.name);
      default: {
        NodeId id = g_.add({});
        fill(id, e);
        return id;
      }
    }
  }

  Global finish(NodeId root) && { return std::move(g_).finish(root); }

 private:
  NodeId end_node() {
    if (!end_) end_ = g_.add({});
    return *end_;
  }

  NodeId definition(const std::string& name) {
    const std::string& target = resolve_alias<GlobalEquations, GlobalExpr>(eqs_, name);
    if (auto it = nodes_.find(target); it != nodes_.end()) return it->second;
    const GlobalExpr& body = eqs_.at(target);
    if (body.kind == GlobalExpr::Kind::End) return nodes_[target] = end_node();
    NodeId id = g_.add({});
    nodes_[target] = id;
    fill(id, body);
    return id;
  }

  void fill(NodeId id, const GlobalExpr& e) {
    if (e.sender == e.receiver)
      throw Error(ErrorCode::SelfCommunication, "self communication of " + e.sender.name);
    if (e.branches.empty()) throw Error(ErrorCode::EmptyChoice, "empty choice at line " + std::to_string(e.line));
    g_[id].kind = GlobalKind::Comm;
    g_[id].sender = e.sender;
    g_[id].receiver = e.receiver;
    for (const GlobalBranch& b : e.branches) {
      if (g_[id].branches.count(b.message))
        throw Error(ErrorCode::DuplicateBranchLabel, "duplicate branch label " + b.message.label);
      NodeId child = build(b.body);
      g_[id].branches.emplace(b.message, child);
    }
  }

  const GlobalEquations& eqs_;
  GraphBuilder<GlobalNode> g_;
  std::map<std::string, NodeId> nodes_;
  std::optional<NodeId> end_;
};

}  // namespace

Process build_process(const ProcEquations& eqs, const ProcExpr& root) {
  ProcessAssembler a(eqs);
  NodeId r = a.build(root);
  return std::move(a).finish(r);
}

Process build_process(const ProcEquations& eqs, const std::string& root_name) {
  ProcExpr ref;
  ref.kind = ProcExpr::Kind::Ref;
  ref.name = root_name;
  return build_process(eqs, ref);
}

Global build_global(const GlobalEquations& eqs, const GlobalExpr& root) {
  GlobalAssembler a(eqs);
  NodeId r = a.build(root);
  return std::move(a).finish(r);
}

Global build_global(const GlobalEquations& eqs, const std::string& root_name) {
  GlobalExpr ref;
  ref.kind = GlobalExpr::Kind::Ref;
  ref.name = root_name;
  return build_global(eqs, ref);
}

Network Program::network(const std::string& name) const {
  auto it = networks.find(name);
  if (it == networks.end()) throw Error(ErrorCode::UndefinedName, "undefined network " + name);
  return network(it->second);
}

Network Program::network(const NetExpr& net) const {
  std::map<Participant, Process> bindings;
  for (const auto& [p, e] : net.bindings)
    if (!bindings.emplace(p, build_process(processes, e)).second)
      throw Error(ErrorCode::DuplicateParticipant, "participant " + p.name + " bound twice");
  return Network(bindings);
}

Program parse_program(std::string_view text) { return Parser(text).program(); }

Process parse_process(std::string_view text, const Program& context) {
  Parser p(text);
  ProcExpr e = p.proc();
  p.finish();
  return build_process(context.processes, e);
}

Global parse_global(std::string_view text, const Program& context) {
  Parser p(text);
  GlobalExpr e = p.glob();
  p.finish();
  return build_global(context.globals, e);
}

Network parse_network(std::string_view text, const Program& context) {
  Parser p(text);
  NetExpr n = p.net();
  p.finish();
  return context.network(n);
}

Communication parse_communication(std::string_view text) {
  Parser p(text);
  Communication c = p.communication();
  p.finish();
  if (c.sender == c.receiver) throw Error(ErrorCode::SelfCommunication, "self communication of " + c.sender.name);
  return c;
}

Trace parse_trace(std::string_view text) {
  Parser p(text);
  Trace t = p.trace();
  p.finish();
  for (const auto& c : t)
    if (c.sender == c.receiver) throw Error(ErrorCode::SelfCommunication, "self communication of " + c.sender.name);
  return t;
}

}  // namespace mpses

namespace mpses {

std::vector<Action> parse_actions(std::string_view text) {
  Parser p(text);
  std::vector<Action> out = p.actions();
  p.finish();
  return out;
}

}  // namespace mpses
