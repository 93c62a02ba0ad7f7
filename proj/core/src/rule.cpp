#include "chrgen/rule.hpp"

#include <cctype>
#include <map>

#include <json.hpp>

#include "chrgen/program.hpp"

namespace chrgen {

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Failure: return "failure";
    case RuleKind::Propagation: return "propagation";
    case RuleKind::Splitting: return "splitting";
    case RuleKind::Simplification: return "simplification";
  }
  return "?";
}

std::optional<RuleKind> rule_kind_from_name(std::string_view name) {
  for (RuleKind k : {RuleKind::Failure, RuleKind::Propagation, RuleKind::Splitting,
                     RuleKind::Simplification}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string canonical_key(const Rule& rule) {
  const Constraints sections[] = {rule.lhs, rule.rhs};
  return std::string(to_string(rule.kind)) + ":" + canonical_key(std::span<const Constraints>(sections));
}

bool same_rule(const Rule& a, const Rule& b) {
  if (a.kind != b.kind) return false;
  const Constraints sa[] = {a.lhs, a.rhs};
  const Constraints sb[] = {b.lhs, b.rhs};
  return variants(std::span<const Constraints>(sa), std::span<const Constraints>(sb));
}

namespace {

bool usable_name(const std::string& name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

}  // namespace

Rule printable(const Rule& rule) {
  Constraints all = rule.lhs;
  all.insert(all.end(), rule.rhs.begin(), rule.rhs.end());
  std::map<VarId, Term> vars;
  std::map<std::string, int> uses;
  std::function<void(const Term&)> collect = [&](const Term& t) {
    if (t.is_var()) {
      if (vars.emplace(t.var_id(), t).second) ++uses[t.name()];
      return;
    }
    for (const auto& a : t.args()) collect(a);
  };
  std::vector<VarId> order;
  for (const auto& c : all) {
    for (const auto& a : c.args()) {
      collect(a);
    }
  }
  for (VarId v : vars_of(all)) order.push_back(v);
  Bindings rename;
  int next = 1;
  for (VarId v : order) {
    const Term& t = vars.at(v);
    if (usable_name(t.name()) && uses[t.name()] == 1) continue;
    std::string name;
    do {
      name = "_" + std::to_string(next++);
    } while (uses.count(name));
    rename.emplace(v, Term::var(v, name));
  }
  Rule out = rule;
  out.lhs = substitute(rule.lhs, rename);
  out.rhs = substitute(rule.rhs, rename);
  return out;
}

std::string to_string(const Rule& rule0) {
  Rule rule = printable(rule0);
  std::string out = to_string(rule.lhs);
  out += rule.kind == RuleKind::Simplification ? " <=> " : " ==> ";
  switch (rule.kind) {
    case RuleKind::Failure:
      out += "false";
      break;
    case RuleKind::Splitting:
      out += to_string(rule.rhs[0]) + " ; " + to_string(rule.rhs[1]);
      break;
    default:
      out += rule.rhs.empty() ? std::string("true") : to_string(rule.rhs);
  }
  return out + ".";
}

std::string format_rules(const RuleSet& rules) {
  std::string out;
  for (const auto& r : rules) out += to_string(r) + "\n";
  return out;
}

std::string format_rules_json(const RuleSet& rules, std::string_view generator) {
  nlohmann::ordered_json doc;
  doc["generator"] = std::string(generator);
  doc["rules"] = nlohmann::ordered_json::array();
  for (const auto& r0 : rules) {
    Rule r = printable(r0);
    nlohmann::ordered_json rec;
    rec["kind"] = std::string(to_string(r.kind));
    rec["lhs"] = nlohmann::ordered_json::array();
    for (const auto& c : r.lhs) rec["lhs"].push_back(to_string(c));
    rec["rhs"] = nlohmann::ordered_json::array();
    for (const auto& c : r.rhs) rec["rhs"].push_back(to_string(c));
    rec["justification"] = r.justification;
    doc["rules"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

namespace {

using syntax::Parser;
using syntax::Token;

Rule finish_rule(Rule r, const Token& at) {
  if (r.lhs.empty()) throw ParseError("rule with empty left hand side", at.line, at.column);
  if (r.kind == RuleKind::Splitting) {
    if (r.rhs.size() != 2 || !r.rhs[0].is_primitive() || !r.rhs[1].is_primitive()) {
      throw ParseError("splitting rules need two primitive disjuncts", at.line, at.column);
    }
  }
  return r;
}

RuleSet parse_text_rules(std::string_view text) {
  Parser p(syntax::tokenize(text));
  RuleSet out;
  while (!p.at_end()) {
    p.scope.clear();
    Token start = p.peek();
    if (p.accept(":-")) {
      while (!p.at_end() && !p.accept(".")) p.next();
      continue;
    }
    Rule r;
    r.lhs = p.conjunction();
    bool simplification = false;
    if (p.accept("<=>")) {
      simplification = true;
    } else if (!p.accept("==>")) {
      p.fail("expected '==>' or '<=>'");
    }
    if (p.peek().kind == Token::Kind::Atom && p.peek().text == "false") {
      p.next();
      r.kind = RuleKind::Failure;
      p.expect(".");
      out.push_back(finish_rule(std::move(r), start));
      continue;
    }
    Constraints body = p.conjunction();
    if (p.accept("|")) {
      r.lhs.insert(r.lhs.end(), body.begin(), body.end());
      if (p.peek().kind == Token::Kind::Atom && p.peek().text == "false") {
        p.next();
        r.kind = RuleKind::Failure;
        p.expect(".");
        out.push_back(finish_rule(std::move(r), start));
        continue;
      }
      body = p.conjunction();
    }
    r.rhs = std::move(body);
    r.kind = simplification ? RuleKind::Simplification : RuleKind::Propagation;
    if (p.accept(";")) {
      Constraints second = p.conjunction();
      r.rhs.insert(r.rhs.end(), second.begin(), second.end());
      r.kind = RuleKind::Splitting;
    }
    p.expect(".");
    out.push_back(finish_rule(std::move(r), start));
  }
  return out;
}

RuleSet parse_json_rules(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid rule document: ") + e.what(), 1, 1);
  }
  if (!doc.contains("rules") || !doc["rules"].is_array()) {
    throw ParseError("rule document has no \"rules\" array", 1, 1);
  }
  RuleSet out;
  for (const auto& rec : doc["rules"]) {
    auto kind = rule_kind_from_name(rec.value("kind", ""));
    if (!kind) throw ParseError("unknown rule kind '" + rec.value("kind", "") + "'", 1, 1);
    // one variable scope per rule, shared by both sides
    std::string joined;
    auto side = [&](const char* key) {
      std::string s;
      for (const auto& c : rec.value(key, nlohmann::json::array())) {
        if (!s.empty()) s += ", ";
        s += c.get<std::string>();
      }
      return s;
    };
    Parser p(syntax::tokenize(side("lhs") + " . " + side("rhs") + " ."));
    Rule r;
    r.kind = *kind;
    r.lhs = p.conjunction();
    p.expect(".");
    if (!p.at_end() && !(p.peek().kind == Token::Kind::Punct && p.peek().text == ".")) {
      r.rhs = p.conjunction();
    }
    p.expect(".");
    for (const auto& j : rec.value("justification", nlohmann::json::array())) {
      r.justification.push_back(j.get<std::string>());
    }
    out.push_back(finish_rule(std::move(r), Token{Token::Kind::End, "", 1, 1}));
  }
  return out;
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_rules(text);
  return parse_text_rules(text);
}

}  // namespace chrgen
